//! The multihead nondeterministic pushdown flowchart language: syntax tree,
//! parser, macro expansion, printer and static classification.

mod ast;
mod error;
mod expand;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use error::{LangError, Pos};
pub use expand::expand_macros;
pub use parser::{parse_program, validate};
pub use printer::pretty_print;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub one_way: bool,
    pub deterministic: bool,
    pub head_count: usize,
}

/// A program is one-way when it never moves a head left and deterministic
/// when it has no `choice`. Sugar nodes count as the moves they expand to.
pub fn classify(program: &Program) -> Classification {
    let commands = program.commands();
    let one_way = !commands.iter().any(|c| {
        matches!(
            c,
            Command::Left(_) | Command::LeftBy { .. } | Command::MoveToLeftEnd(_)
        )
    });
    let deterministic = !commands.iter().any(|c| matches!(c, Command::Choice(..)));
    Classification {
        one_way,
        deterministic,
        head_count: program.heads,
    }
}
