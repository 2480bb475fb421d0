use thiserror::Error;

/// Line and column, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("syntax error at {pos}: found {found}, expected {}", .expected.join(" or "))]
    Syntax {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },
    #[error("label `{0}` is defined more than once")]
    DuplicateLabel(String),
    #[error("goto names undefined label `{0}`")]
    UndefinedLabel(String),
    #[error("head index {index} exceeds the declared head count {heads}")]
    BadHeadIndex { index: usize, heads: usize },
    #[error("block `{0}` is empty")]
    EmptyBlock(String),
    #[error("symbol `{0}` is reserved and cannot be used as a program constant")]
    ReservedSymbol(String),
    #[error("program has no blocks")]
    NoBlocks,
}
