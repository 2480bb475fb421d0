use std::fmt;

use serde::{Deserialize, Serialize};

/// A tape or stack symbol.
///
/// Ordinary symbols are non-empty tokens without whitespace or quotes. Three
/// spellings are reserved: the endmarkers `>` and `<`, which only occur on
/// tapes, and `⊥`, the value of `top` when the stack is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub const LEFT_END: &'static str = ">";
    pub const RIGHT_END: &'static str = "<";
    pub const BOTTOM: &'static str = "⊥";

    /// Builds a symbol, rejecting empty tokens and tokens containing
    /// whitespace or single quotes.
    pub fn new(token: impl Into<String>) -> Option<Symbol> {
        let token = token.into();
        if token.is_empty() || token.chars().any(|c| c.is_whitespace() || c == '\'') {
            return None;
        }
        Some(Symbol(token))
    }

    pub fn left_end() -> Symbol {
        Symbol(Self::LEFT_END.to_owned())
    }

    pub fn right_end() -> Symbol {
        Symbol(Self::RIGHT_END.to_owned())
    }

    pub fn bottom() -> Symbol {
        Symbol(Self::BOTTOM.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_endmarker(&self) -> bool {
        self.0 == Self::LEFT_END || self.0 == Self::RIGHT_END
    }

    /// True for `>`, `<` and `⊥`.
    pub fn is_reserved(&self) -> bool {
        self.is_endmarker() || self.0 == Self::BOTTOM
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Heads are numbered from 1, as in `hd`, `hd2`, `hd3`.
pub type Head = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymExpr {
    Const(Symbol),
    Top,
    Hd(Head),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Bottom,
    LeftEnd(Head),
    RightEnd(Head),
    Eq(SymExpr, SymExpr),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn eq(lhs: SymExpr, rhs: SymExpr) -> BoolExpr {
        BoolExpr::Eq(lhs, rhs)
    }

    pub fn and(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::Or(Box::new(self), Box::new(rhs))
    }
}

pub type CommandSeq = Vec<Command>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Pop,
    Push(SymExpr),
    Left(Head),
    Right(Head),
    Choice(CommandSeq, CommandSeq),
    If(BoolExpr, CommandSeq, CommandSeq),
    Goto(String),
    Skip,
    Accept,
    Reject,
    /// `k-right`: sugar for `k` consecutive `right` moves.
    RightBy {
        head: Head,
        count: usize,
    },
    /// `k-left`: sugar for `k` consecutive `left` moves.
    LeftBy {
        head: Head,
        count: usize,
    },
    /// `move-to-leftend`: sugar for a loop returning the head to the first
    /// cell after the `>` endmarker.
    MoveToLeftEnd(Head),
}

impl Command {
    pub fn is_sugar(&self) -> bool {
        matches!(
            self,
            Command::RightBy { .. } | Command::LeftBy { .. } | Command::MoveToLeftEnd(_)
        )
    }

    /// Goto, accept and reject never fall through to the next command.
    pub fn is_transfer(&self) -> bool {
        matches!(self, Command::Goto(_) | Command::Accept | Command::Reject)
    }

    pub(crate) fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Command)) {
        f(self);
        match self {
            Command::Choice(a, b) | Command::If(_, a, b) => {
                a.iter().chain(b.iter()).for_each(|c| c.visit(f));
            }
            _ => {}
        }
    }
}

/// True if control can never run past the end of `seq`.
pub fn ends_in_transfer(seq: &[Command]) -> bool {
    match seq.last() {
        Some(Command::If(_, a, b)) | Some(Command::Choice(a, b)) => {
            ends_in_transfer(a) && ends_in_transfer(b)
        }
        Some(c) => c.is_transfer(),
        None => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub label: String,
    pub body: CommandSeq,
}

impl Block {
    pub fn new(label: impl Into<String>, body: CommandSeq) -> Block {
        Block {
            label: label.into(),
            body,
        }
    }
}

/// A multihead nondeterministic pushdown program: labeled command sequences,
/// executed from the first command of the first block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub heads: usize,
    pub blocks: Vec<Block>,
}

impl Program {
    pub fn new(heads: usize, blocks: Vec<Block>) -> Program {
        Program { heads, blocks }
    }

    pub fn block(&self, label: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.label == label)
    }

    /// Every command in the program, nested ones included, in pre-order.
    pub fn commands(&self) -> Vec<&Command> {
        let mut out = Vec::new();
        for block in &self.blocks {
            for cmd in &block.body {
                cmd.visit(&mut |c| out.push(c));
            }
        }
        out
    }

    pub fn has_sugar(&self) -> bool {
        self.commands().iter().any(|c| c.is_sugar())
    }
}
