use std::fmt;

use thiserror::Error;

use super::operator::{Operator, UnknownOperator, User};

/// Ordered operator pairs `(earlier, later)` such that applying `later`
/// right after `earlier` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancelTable {
    pairs: Vec<(Operator, Operator)>,
    lookup: [[bool; 13]; 13],
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CancelTableError {
    #[error(transparent)]
    UnknownOperator(#[from] UnknownOperator),
    #[error("line {0}: expected `<earlier> <later>`")]
    BadLine(usize),
}

impl Default for CancelTable {
    /// Decryption and encryption with the same user's keys cancel in both
    /// orders; a prepended name is removed by the matching `M_U` or by `M`.
    fn default() -> Self {
        use Operator::*;
        let mut pairs = Vec::with_capacity(12);
        for u in User::ALL {
            pairs.push((E(u), D(u)));
            pairs.push((D(u), E(u)));
        }
        for u in User::ALL {
            pairs.push((P(u), M(u)));
            pairs.push((P(u), MAny));
        }
        CancelTable::new(pairs)
    }
}

impl CancelTable {
    /// Duplicates are dropped; first occurrence order is kept.
    pub fn new(pairs: impl IntoIterator<Item = (Operator, Operator)>) -> CancelTable {
        let mut table = CancelTable {
            pairs: Vec::new(),
            lookup: [[false; 13]; 13],
        };
        for (a, b) in pairs {
            let cell = &mut table.lookup[a.index()][b.index()];
            if !*cell {
                *cell = true;
                table.pairs.push((a, b));
            }
        }
        table
    }

    pub fn empty() -> CancelTable {
        CancelTable::new([])
    }

    /// Parses one pair per line, `<earlier> <later>`, e.g. `EX DX`.
    pub fn parse(text: &str) -> Result<CancelTable, CancelTableError> {
        let text = crate::sim::strip_comments(text);
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => continue,
                [a, b] => pairs.push((a.parse()?, b.parse()?)),
                _ => return Err(CancelTableError::BadLine(i + 1)),
            }
        }
        Ok(CancelTable::new(pairs))
    }

    pub fn pairs(&self) -> &[(Operator, Operator)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn cancels(&self, earlier: Operator, later: Operator) -> bool {
        self.lookup[earlier.index()][later.index()]
    }
}

impl fmt::Display for CancelTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

/// Result of scanning a word with a stack: the operators left over and the
/// positions of every cancelled pair, in the order they cancelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub residue: Vec<Operator>,
    pub pairs: Vec<(usize, usize)>,
}

impl Reduction {
    pub fn is_empty_word(&self) -> bool {
        self.residue.is_empty()
    }
}

/// Reduces `word` (application order) by cancelling each operator against
/// the most recent uncancelled one where the table allows.
pub fn reduce_traced(word: &[Operator], ct: &CancelTable) -> Reduction {
    let mut stack: Vec<usize> = Vec::with_capacity(word.len());
    let mut pairs = Vec::new();
    for (i, &op) in word.iter().enumerate() {
        match stack.last() {
            Some(&j) if ct.cancels(word[j], op) => {
                stack.pop();
                pairs.push((j, i));
            }
            _ => stack.push(i),
        }
    }
    Reduction {
        residue: stack.into_iter().map(|i| word[i]).collect(),
        pairs,
    }
}

pub fn reduce_word(word: &[Operator], ct: &CancelTable) -> Vec<Operator> {
    reduce_traced(word, ct).residue
}

/// Composition-order rendering (last-applied first) with every cancelled
/// pair and what it encloses wrapped in brackets, e.g. `[DZ EZ] [DY EY]`.
pub fn bracketed(word: &[Operator], reduction: &Reduction) -> String {
    let n = word.len();
    let mut opens = vec![0usize; n];
    let mut closes = vec![0usize; n];
    for &(j, i) in &reduction.pairs {
        // reversed: the later operator is printed first
        opens[i] += 1;
        closes[j] += 1;
    }
    let mut parts = Vec::with_capacity(n);
    for i in (0..n).rev() {
        parts.push(format!(
            "{}{}{}",
            "[".repeat(opens[i]),
            word[i],
            "]".repeat(closes[i])
        ));
    }
    parts.join(" ")
}

/// Renders a word in composition order.
pub fn composition_order(word: &[Operator]) -> String {
    word.iter()
        .rev()
        .map(|o| o.token())
        .collect::<Vec<_>>()
        .join(" ")
}
