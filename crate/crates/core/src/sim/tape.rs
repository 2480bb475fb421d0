use std::fmt;

use thiserror::Error;

use crate::lang::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TapeError {
    #[error("tape must start with `>` and end with `<`")]
    MissingEndmarker,
    #[error("endmarker `{symbol}` found inside the tape at position {position}")]
    MisplacedEndmarker { symbol: String, position: usize },
    #[error("`{0}` is not a valid tape symbol")]
    BadSymbol(String),
}

/// Read-only input: `>` followed by the input symbols followed by `<`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: Vec<Symbol>,
}

impl Tape {
    /// Wraps `inner` in endmarkers.
    pub fn new(inner: impl IntoIterator<Item = Symbol>) -> Result<Tape, TapeError> {
        let mut cells = vec![Symbol::left_end()];
        for (i, s) in inner.into_iter().enumerate() {
            if s.is_reserved() {
                return Err(misplaced(s, i + 1));
            }
            cells.push(s);
        }
        cells.push(Symbol::right_end());
        Ok(Tape { cells })
    }

    /// Builds a tape from whitespace-separated tokens; `words` is split on
    /// whitespace and must not contain the endmarkers.
    pub fn from_words(words: &str) -> Result<Tape, TapeError> {
        let syms = words
            .split_whitespace()
            .map(|w| Symbol::new(w).ok_or_else(|| TapeError::BadSymbol(w.to_owned())))
            .collect::<Result<Vec<_>, _>>()?;
        Tape::new(syms)
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    /// The symbols between the endmarkers.
    pub fn inner(&self) -> &[Symbol] {
        &self.cells[1..self.cells.len() - 1]
    }

    /// Tape length including both endmarkers.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn misplaced(s: Symbol, position: usize) -> TapeError {
    if s.is_endmarker() {
        TapeError::MisplacedEndmarker {
            symbol: s.to_string(),
            position,
        }
    } else {
        TapeError::BadSymbol(s.to_string())
    }
}

/// Parses a tape file: whitespace-separated tokens, the first `>` and the
/// last `<`. `(* ... *)` comments are ignored.
pub fn parse_tape(text: &str) -> Result<Tape, TapeError> {
    let text = strip_comments(text);
    let tokens: Vec<&str> = text.split_whitespace().collect();
    match (tokens.first(), tokens.last()) {
        (Some(&Symbol::LEFT_END), Some(&Symbol::RIGHT_END)) if tokens.len() >= 2 => {}
        _ => return Err(TapeError::MissingEndmarker),
    }
    let inner = tokens[1..tokens.len() - 1]
        .iter()
        .map(|t| Symbol::new(*t).ok_or_else(|| TapeError::BadSymbol(t.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Tape::new(inner)
}

pub(crate) fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("(*") {
        out.push_str(&rest[..start]);
        match rest[start..].find("*)") {
            Some(end) => {
                out.push(' ');
                rest = &rest[start + end + 2..];
            }
            None => {
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
