use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum User {
    X,
    Y,
    Z,
}

impl User {
    pub const ALL: [User; 3] = [User::X, User::Y, User::Z];

    fn letter(self) -> char {
        match self {
            User::X => 'X',
            User::Y => 'Y',
            User::Z => 'Z',
        }
    }

    fn from_letter(c: char) -> Option<User> {
        match c {
            'X' => Some(User::X),
            'Y' => Some(User::Y),
            'Z' => Some(User::Z),
            _ => None,
        }
    }
}

/// Text operators: encryption with a public key, decryption with a private
/// key, name prepending, name matching, and deletion of any prepended name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Operator {
    E(User),
    D(User),
    P(User),
    M(User),
    MAny,
}

impl Operator {
    /// All 13 operators usable by any of the three users.
    pub const UNIVERSE: [Operator; 13] = [
        Operator::E(User::X),
        Operator::E(User::Y),
        Operator::E(User::Z),
        Operator::D(User::X),
        Operator::D(User::Y),
        Operator::D(User::Z),
        Operator::P(User::X),
        Operator::P(User::Y),
        Operator::P(User::Z),
        Operator::M(User::X),
        Operator::M(User::Y),
        Operator::M(User::Z),
        Operator::MAny,
    ];

    /// The operators every user shares: all but the private decryptions.
    pub fn common() -> Vec<Operator> {
        Self::UNIVERSE
            .into_iter()
            .filter(|o| !matches!(o, Operator::D(_)))
            .collect()
    }

    /// The common operators plus `user`'s own decryption.
    pub fn available_to(user: User) -> Vec<Operator> {
        let mut ops = Self::common();
        ops.push(Operator::D(user));
        ops
    }

    /// The saboteur's operators in the order its self-loops are listed on
    /// generated tapes.
    pub const SABOTEUR_LOOPS: [Operator; 11] = [
        Operator::E(User::X),
        Operator::P(User::X),
        Operator::M(User::X),
        Operator::E(User::Y),
        Operator::P(User::Y),
        Operator::M(User::Y),
        Operator::E(User::Z),
        Operator::P(User::Z),
        Operator::M(User::Z),
        Operator::MAny,
        Operator::D(User::Z),
    ];

    pub fn index(self) -> usize {
        Self::UNIVERSE.iter().position(|&o| o == self).unwrap()
    }

    pub fn token(self) -> String {
        match self {
            Operator::E(u) => format!("E{}", u.letter()),
            Operator::D(u) => format!("D{}", u.letter()),
            Operator::P(u) => format!("P{}", u.letter()),
            Operator::M(u) => format!("M{}", u.letter()),
            Operator::MAny => "M".to_owned(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown operator `{0}`")]
pub struct UnknownOperator(pub String);

impl FromStr for Operator {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let kind = chars.next();
        let user = chars.next();
        if chars.next().is_some() {
            return Err(UnknownOperator(s.to_owned()));
        }
        let op = match (kind, user) {
            (Some('M'), None) => Some(Operator::MAny),
            (Some(k), Some(u)) => User::from_letter(u).and_then(|u| match k {
                'E' => Some(Operator::E(u)),
                'D' => Some(Operator::D(u)),
                'P' => Some(Operator::P(u)),
                'M' => Some(Operator::M(u)),
                _ => None,
            }),
            _ => None,
        };
        op.ok_or_else(|| UnknownOperator(s.to_owned()))
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl From<Operator> for String {
    fn from(o: Operator) -> String {
        o.token()
    }
}

impl TryFrom<String> for Operator {
    type Error = UnknownOperator;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Protocol participant placeholder: `A` initiates, `B` responds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RoleOp {
    E(Role),
    D(Role),
    P(Role),
    M(Role),
    MAny,
}

impl FromStr for RoleOp {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let role = |c: char| match c {
            'A' => Some(Role::A),
            'B' => Some(Role::B),
            _ => None,
        };
        let mut chars = s.chars();
        let op = match (chars.next(), chars.next(), chars.next()) {
            (Some('M'), None, None) => Some(RoleOp::MAny),
            (Some(k), Some(r), None) => role(r).and_then(|r| match k {
                'E' => Some(RoleOp::E(r)),
                'D' => Some(RoleOp::D(r)),
                'P' => Some(RoleOp::P(r)),
                'M' => Some(RoleOp::M(r)),
                _ => None,
            }),
            _ => None,
        };
        op.ok_or_else(|| UnknownOperator(s.to_owned()))
    }
}

impl fmt::Display for RoleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, r) = match self {
            RoleOp::E(r) => ('E', r),
            RoleOp::D(r) => ('D', r),
            RoleOp::P(r) => ('P', r),
            RoleOp::M(r) => ('M', r),
            RoleOp::MAny => return f.write_str("M"),
        };
        write!(f, "{k}{}", if *r == Role::A { 'A' } else { 'B' })
    }
}

/// An operator word over the role placeholders, kept in application order
/// (first-applied first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoleWord(Vec<RoleOp>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error(transparent)]
    UnknownOperator(#[from] UnknownOperator),
    #[error("operator word is empty")]
    EmptyWord,
    #[error("missing `{0}:` line")]
    MissingWord(&'static str),
    #[error("line {line}: expected `alpha1: ...` or `alpha2: ...`")]
    BadLine { line: usize },
    #[error("`{0}:` given more than once")]
    DuplicateWord(&'static str),
    #[error("initiator and responder must be different users ({0:?})")]
    RoleClash(User),
}

impl RoleWord {
    pub fn from_application_order(ops: Vec<RoleOp>) -> Result<RoleWord, ProtocolError> {
        if ops.is_empty() {
            return Err(ProtocolError::EmptyWord);
        }
        Ok(RoleWord(ops))
    }

    /// Parses a word written in composition order (`EA DB` applies `DB`
    /// first).
    pub fn parse_composition(text: &str) -> Result<RoleWord, ProtocolError> {
        let mut ops = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<RoleOp>, _>>()?;
        ops.reverse();
        RoleWord::from_application_order(ops)
    }

    pub fn ops(&self) -> &[RoleOp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Substitutes concrete users for `A` and `B`.
    pub fn instantiate(&self, a: User, b: User) -> Result<Vec<Operator>, ProtocolError> {
        if a == b {
            return Err(ProtocolError::RoleClash(a));
        }
        let user = |r: Role| if r == Role::A { a } else { b };
        Ok(self
            .0
            .iter()
            .map(|op| match *op {
                RoleOp::E(r) => Operator::E(user(r)),
                RoleOp::D(r) => Operator::D(user(r)),
                RoleOp::P(r) => Operator::P(user(r)),
                RoleOp::M(r) => Operator::M(user(r)),
                RoleOp::MAny => Operator::MAny,
            })
            .collect())
    }
}

impl fmt::Display for RoleWord {
    /// Composition order, as protocols are usually written.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

pub fn instantiate(w: &RoleWord, a: User, b: User) -> Result<Vec<Operator>, ProtocolError> {
    w.instantiate(a, b)
}

/// A two-step ping-pong protocol: the initiator applies `alpha1`, the
/// responder answers by applying `alpha2` to what it received.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Protocol {
    pub alpha1: RoleWord,
    pub alpha2: RoleWord,
}

impl Protocol {
    /// Parses a protocol file: lines `alpha1: EB PA` and `alpha2: EA MA DB`
    /// in composition order. `(* *)` comments and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Protocol, ProtocolError> {
        let text = crate::sim::strip_comments(text);
        let (mut alpha1, mut alpha2) = (None, None);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, word) = line
                .split_once(':')
                .ok_or(ProtocolError::BadLine { line: i + 1 })?;
            let (slot, name) = match key.trim() {
                "alpha1" => (&mut alpha1, "alpha1"),
                "alpha2" => (&mut alpha2, "alpha2"),
                _ => return Err(ProtocolError::BadLine { line: i + 1 }),
            };
            if slot.is_some() {
                return Err(ProtocolError::DuplicateWord(name));
            }
            *slot = Some(RoleWord::parse_composition(word)?);
        }
        Ok(Protocol {
            alpha1: alpha1.ok_or(ProtocolError::MissingWord("alpha1"))?,
            alpha2: alpha2.ok_or(ProtocolError::MissingWord("alpha2"))?,
        })
    }

    fn from_text(alpha1: &str, alpha2: &str) -> Protocol {
        Protocol {
            alpha1: RoleWord::parse_composition(alpha1).unwrap(),
            alpha2: RoleWord::parse_composition(alpha2).unwrap(),
        }
    }

    /// `alpha1 = EB`, `alpha2 = EA DB`: insecure.
    pub fn echo() -> Protocol {
        Self::from_text("EB", "EA DB")
    }

    /// `alpha1 = EB PA`, `alpha2 = EA MA DB`: secure.
    pub fn name_stamped() -> Protocol {
        Self::from_text("EB PA", "EA MA DB")
    }

    /// `alpha1 = EB PA EB`, `alpha2 = EA DB MA DB`: insecure.
    pub fn double_encrypted() -> Protocol {
        Self::from_text("EB PA EB", "EA DB MA DB")
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha1: {}", self.alpha1)?;
        writeln!(f, "alpha2: {}", self.alpha2)
    }
}
