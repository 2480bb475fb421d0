//! Ping-pong protocols under the Dolev-Yao intruder model: operators and
//! their identities, protocol words, interaction automata and their tape
//! encoding.

mod build;
mod cancel;
mod fsa;
mod operator;

pub use crate::sim::{parse_tape, Tape};
pub use build::build_fsa;
pub use cancel::{
    bracketed, composition_order, reduce_traced, reduce_word, CancelTable, CancelTableError,
    Reduction,
};
pub use fsa::{
    encode_tape, fsa_from_tape, is_label_isomorphic, parse_fsa, parse_fsa_tape, Edge, Fsa, FsaError,
};
pub use operator::{
    instantiate, Operator, Protocol, ProtocolError, Role, RoleOp, RoleWord, UnknownOperator, User,
};
