pub mod closure;
pub mod lang;
pub mod protocol;
pub mod sim;
pub mod verifier;
