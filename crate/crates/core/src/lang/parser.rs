use std::collections::HashSet;

use super::ast::*;
use super::error::{LangError, Pos};
use super::lexer::{tokenize, Tok};

/// Parses program text. Macro forms stay as sugar nodes; call
/// [`expand_macros`](super::expand_macros) before simulation.
pub fn parse_program(text: &str) -> Result<Program, LangError> {
    let tokens = tokenize(text)?;
    let program = Parser { tokens, at: 0 }.program()?;
    validate(&program)?;
    Ok(program)
}

/// Checks the static well-formedness rules: distinct labels, defined goto
/// targets, head indices within range, no empty blocks and no reserved
/// constants where they are not allowed.
pub fn validate(program: &Program) -> Result<(), LangError> {
    if program.blocks.is_empty() {
        return Err(LangError::NoBlocks);
    }
    let mut labels = HashSet::new();
    for block in &program.blocks {
        if !labels.insert(block.label.as_str()) {
            return Err(LangError::DuplicateLabel(block.label.clone()));
        }
        if block.body.is_empty() {
            return Err(LangError::EmptyBlock(block.label.clone()));
        }
    }
    let check_head = |index: Head| {
        if index == 0 || index > program.heads {
            Err(LangError::BadHeadIndex {
                index,
                heads: program.heads,
            })
        } else {
            Ok(())
        }
    };
    let check_sym = |e: &SymExpr, pushed: bool| match e {
        SymExpr::Hd(h) => check_head(*h),
        SymExpr::Top => Ok(()),
        SymExpr::Const(s) if s.as_str() == Symbol::BOTTOM || (pushed && s.is_reserved()) => {
            Err(LangError::ReservedSymbol(s.to_string()))
        }
        SymExpr::Const(_) => Ok(()),
    };
    fn check_bool(
        b: &BoolExpr,
        head: &dyn Fn(Head) -> Result<(), LangError>,
        sym: &dyn Fn(&SymExpr, bool) -> Result<(), LangError>,
    ) -> Result<(), LangError> {
        match b {
            BoolExpr::Bottom => Ok(()),
            BoolExpr::LeftEnd(h) | BoolExpr::RightEnd(h) => head(*h),
            BoolExpr::Eq(l, r) => sym(l, false).and_then(|_| sym(r, false)),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                check_bool(l, head, sym).and_then(|_| check_bool(r, head, sym))
            }
        }
    }
    for cmd in program.commands() {
        match cmd {
            Command::Push(e) => check_sym(e, true)?,
            Command::Left(h)
            | Command::Right(h)
            | Command::MoveToLeftEnd(h)
            | Command::RightBy { head: h, .. }
            | Command::LeftBy { head: h, .. } => check_head(*h)?,
            Command::If(cond, a, b) => {
                check_bool(cond, &check_head, &check_sym)?;
                if a.is_empty() || b.is_empty() {
                    return Err(LangError::EmptyBlock("if".into()));
                }
            }
            Command::Choice(a, b) if a.is_empty() || b.is_empty() => {
                return Err(LangError::EmptyBlock("choice".into()))
            }
            Command::Goto(l) if !labels.contains(l.as_str()) => {
                return Err(LangError::UndefinedLabel(l.clone()))
            }
            _ => {}
        }
    }
    Ok(())
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
}

/// `base` alone is head 1; `base` followed by a positive number names that head.
fn head_suffix(word: &str, base: &str) -> Option<Head> {
    let rest = word.strip_prefix(base)?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.bytes().all(|b| b.is_ascii_digit()) {
        return rest.parse().ok().filter(|&h| h > 0);
    }
    None
}

/// `3-right`, `2-left2`.
fn counted_move(word: &str) -> Option<Command> {
    let (count, rest) = word.split_once('-')?;
    let count: usize = count.parse().ok()?;
    if let Some(head) = head_suffix(rest, "right") {
        return Some(Command::RightBy { head, count });
    }
    head_suffix(rest, "left").map(|head| Command::LeftBy { head, count })
}

const SEQ_TERMINATORS: [&str; 3] = ["else", "or", "end"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, LangError> {
        let (tok, pos) = &self.tokens[self.at];
        Err(LangError::Syntax {
            pos: *pos,
            found: tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LangError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(&[&tok.describe()])
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), LangError> {
        match self.peek() {
            Tok::Word(w) if w == kw => {
                self.next();
                Ok(())
            }
            _ => self.error(&[&format!("`{kw}`")]),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn at_label(&self) -> bool {
        matches!(self.peek(), Tok::Word(_)) && *self.peek2() == Tok::Colon
    }

    fn program(mut self) -> Result<Program, LangError> {
        let mut heads = 1;
        if self.at_keyword("heads") && *self.peek2() == Tok::Colon {
            if let Some(Tok::Word(n)) = self.tokens.get(self.at + 2).map(|t| &t.0) {
                if let Ok(n) = n.parse::<usize>() {
                    if n == 0 {
                        self.at += 2;
                        return self.error(&["a positive head count"]);
                    }
                    heads = n;
                    self.at += 3;
                }
            }
        }
        let mut blocks = Vec::new();
        loop {
            match self.peek() {
                Tok::Eof if !blocks.is_empty() => break,
                Tok::Word(_) if self.at_label() => {
                    let Tok::Word(label) = self.next() else {
                        unreachable!()
                    };
                    if label.contains('-') {
                        self.at -= 1;
                        return self.error(&["a label"]);
                    }
                    self.expect(Tok::Colon)?;
                    let body = self.seq()?;
                    blocks.push(Block { label, body });
                }
                _ => return self.error(&["a label"]),
            }
        }
        Ok(Program { heads, blocks })
    }

    fn seq(&mut self) -> Result<CommandSeq, LangError> {
        let mut cmds = vec![self.command()?];
        while *self.peek() == Tok::Semi {
            self.next();
            let stop = match self.peek() {
                Tok::Eof => true,
                Tok::Word(w) => SEQ_TERMINATORS.contains(&w.as_str()) || self.at_label(),
                _ => false,
            };
            if stop {
                break;
            }
            cmds.push(self.command()?);
        }
        Ok(cmds)
    }

    fn command(&mut self) -> Result<Command, LangError> {
        const EXPECTED: &[&str] = &["a command"];
        let Tok::Word(word) = self.peek().clone() else {
            return self.error(EXPECTED);
        };
        if SEQ_TERMINATORS.contains(&word.as_str()) {
            return self.error(EXPECTED);
        }
        self.next();
        let cmd = match word.as_str() {
            "pop" => Command::Pop,
            "push" => Command::Push(self.sym_expr()?),
            "skip" => Command::Skip,
            "accept" => Command::Accept,
            "reject" => Command::Reject,
            "goto" => match self.next() {
                Tok::Word(l) if !l.contains('-') => Command::Goto(l),
                _ => {
                    self.at -= 1;
                    return self.error(&["a label"]);
                }
            },
            "choice" => {
                let first = self.seq()?;
                self.keyword("or")?;
                let second = self.seq()?;
                self.keyword("end")?;
                Command::Choice(first, second)
            }
            "if" => {
                let cond = self.bool_expr()?;
                self.keyword("then")?;
                let then = self.seq()?;
                let otherwise = if self.at_keyword("else") {
                    self.next();
                    self.seq()?
                } else {
                    vec![Command::Skip]
                };
                self.keyword("end")?;
                Command::If(cond, then, otherwise)
            }
            w => {
                if let Some(h) = head_suffix(w, "left") {
                    Command::Left(h)
                } else if let Some(h) = head_suffix(w, "right") {
                    Command::Right(h)
                } else if let Some(h) = head_suffix(w, "move-to-leftend") {
                    Command::MoveToLeftEnd(h)
                } else if let Some(c) = counted_move(w) {
                    c
                } else {
                    self.at -= 1;
                    return self.error(EXPECTED);
                }
            }
        };
        Ok(cmd)
    }

    fn sym_expr(&mut self) -> Result<SymExpr, LangError> {
        const EXPECTED: &[&str] = &["a quoted constant", "`top`", "`hd`"];
        match self.peek().clone() {
            Tok::Quoted(s) => match Symbol::new(s) {
                Some(sym) => {
                    self.next();
                    Ok(SymExpr::Const(sym))
                }
                None => self.error(&["a non-empty constant"]),
            },
            Tok::Word(w) if w == "top" => {
                self.next();
                Ok(SymExpr::Top)
            }
            Tok::Word(w) => match head_suffix(&w, "hd") {
                Some(h) => {
                    self.next();
                    Ok(SymExpr::Hd(h))
                }
                None => self.error(EXPECTED),
            },
            _ => self.error(EXPECTED),
        }
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, LangError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.next();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<BoolExpr, LangError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::And {
            self.next();
            lhs = lhs.and(self.atom()?);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<BoolExpr, LangError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let inner = self.bool_expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Word(w) if w == "bottom" => {
                self.next();
                Ok(BoolExpr::Bottom)
            }
            Tok::Word(w) if head_suffix(&w, "leftend").is_some() => {
                self.next();
                Ok(BoolExpr::LeftEnd(head_suffix(&w, "leftend").unwrap()))
            }
            Tok::Word(w) if head_suffix(&w, "rightend").is_some() => {
                self.next();
                Ok(BoolExpr::RightEnd(head_suffix(&w, "rightend").unwrap()))
            }
            _ => {
                let lhs = self.sym_expr()?;
                self.expect(Tok::Equals)?;
                let rhs = self.sym_expr()?;
                Ok(BoolExpr::Eq(lhs, rhs))
            }
        }
    }
}
