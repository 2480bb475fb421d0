use rustc_hash::FxHashMap;

use crate::lang::{expand_macros, BoolExpr, Command, Program, SymExpr, Symbol};

use super::tape::Tape;

pub type SymId = u32;
pub type Pp = usize;

pub(crate) const BOTTOM: SymId = 0;
pub(crate) const LEFT_END: SymId = 1;
pub(crate) const RIGHT_END: SymId = 2;

/// Interned symbols. Ids 0, 1 and 2 are `⊥`, `>` and `<`.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    names: Vec<Symbol>,
    ids: FxHashMap<Symbol, SymId>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        let mut t = SymbolTable {
            names: Vec::new(),
            ids: FxHashMap::default(),
        };
        t.intern(&Symbol::bottom());
        t.intern(&Symbol::left_end());
        t.intern(&Symbol::right_end());
        t
    }
}

impl SymbolTable {
    pub fn intern(&mut self, s: &Symbol) -> SymId {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.names.len() as SymId;
        self.names.push(s.clone());
        self.ids.insert(s.clone(), id);
        id
    }

    pub fn name(&self, id: SymId) -> &Symbol {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Const(SymId),
    Top,
    /// 0-based head index.
    Hd(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cond {
    Bottom,
    LeftEnd(usize),
    RightEnd(usize),
    Eq(Operand, Operand),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

impl Cond {
    pub(crate) fn eval(&self, top: SymId, heads: &[usize], tape: &[SymId]) -> bool {
        match self {
            Cond::Bottom => top == BOTTOM,
            Cond::LeftEnd(h) => tape[heads[*h]] == LEFT_END,
            Cond::RightEnd(h) => tape[heads[*h]] == RIGHT_END,
            Cond::Eq(l, r) => l.value(top, heads, tape) == r.value(top, heads, tape),
            Cond::And(l, r) => l.eval(top, heads, tape) && r.eval(top, heads, tape),
            Cond::Or(l, r) => l.eval(top, heads, tape) || r.eval(top, heads, tape),
        }
    }
}

impl Operand {
    pub(crate) fn value(self, top: SymId, heads: &[usize], tape: &[SymId]) -> SymId {
        match self {
            Operand::Const(c) => c,
            Operand::Top => top,
            Operand::Hd(h) => tape[heads[h]],
        }
    }
}

/// One program point of the compiled command graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    Pop { next: Pp },
    Push { value: Operand, next: Pp },
    Move { head: usize, right: bool, next: Pp },
    Branch { cond: Cond, then: Pp, otherwise: Pp },
    Choice { first: Pp, second: Pp },
    Jump(Pp),
    Accept,
    Reject,
}

/// A program lowered to a graph of program points, ready for simulation.
#[derive(Clone, Debug)]
pub struct Code {
    pub instrs: Vec<Instr>,
    pub entry: Pp,
    pub heads: usize,
    pub symbols: SymbolTable,
}

impl Code {
    /// Compiles `program`, expanding macros first if any are present.
    pub fn compile(program: &Program) -> Code {
        let expanded;
        let program = if program.has_sugar() {
            expanded = expand_macros(program);
            &expanded
        } else {
            program
        };
        let labels: FxHashMap<&str, usize> = program
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.label.as_str(), i))
            .collect();
        let mut c = Compiler {
            // one stub per block, patched to the block entry once known
            instrs: vec![Instr::Jump(usize::MAX); program.blocks.len()],
            labels,
            symbols: SymbolTable::default(),
        };
        let reject = c.emit(Instr::Reject);
        for (i, block) in program.blocks.iter().enumerate() {
            let fall = if i + 1 < program.blocks.len() {
                i + 1
            } else {
                reject
            };
            let entry = c.seq(&block.body, fall);
            c.instrs[i] = Instr::Jump(entry);
        }
        let stubs = program.blocks.len();
        let resolve = |instrs: &[Instr], mut pp: Pp| {
            for _ in 0..=stubs {
                match instrs[pp] {
                    Instr::Jump(t) if pp < stubs && t != pp => pp = t,
                    _ => break,
                }
            }
            pp
        };
        let snapshot = c.instrs.clone();
        for instr in c.instrs.iter_mut().skip(stubs) {
            let fix = |t: &mut Pp| *t = resolve(&snapshot, *t);
            match instr {
                Instr::Pop { next } | Instr::Push { next, .. } | Instr::Move { next, .. } => {
                    fix(next)
                }
                Instr::Branch {
                    then, otherwise, ..
                } => {
                    fix(then);
                    fix(otherwise);
                }
                Instr::Choice { first, second } => {
                    fix(first);
                    fix(second);
                }
                Instr::Jump(t) => fix(t),
                Instr::Accept | Instr::Reject => {}
            }
        }
        Code {
            entry: resolve(&snapshot, 0),
            instrs: c.instrs,
            heads: program.heads,
            symbols: c.symbols,
        }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Interns the tape's symbols into a copy of the program's table.
    pub(crate) fn load(&self, tape: &Tape) -> (SymbolTable, Vec<SymId>) {
        let mut symbols = self.symbols.clone();
        let cells = tape.cells().iter().map(|s| symbols.intern(s)).collect();
        (symbols, cells)
    }
}

struct Compiler<'p> {
    instrs: Vec<Instr>,
    labels: FxHashMap<&'p str, usize>,
    symbols: SymbolTable,
}

impl Compiler<'_> {
    fn emit(&mut self, instr: Instr) -> Pp {
        self.instrs.push(instr);
        self.instrs.len() - 1
    }

    fn seq(&mut self, seq: &[Command], cont: Pp) -> Pp {
        seq.iter()
            .rev()
            .fold(cont, |next, cmd| self.command(cmd, next))
    }

    fn operand(&mut self, e: &SymExpr) -> Operand {
        match e {
            SymExpr::Const(s) => Operand::Const(self.symbols.intern(s)),
            SymExpr::Top => Operand::Top,
            SymExpr::Hd(h) => Operand::Hd(h - 1),
        }
    }

    fn cond(&mut self, b: &BoolExpr) -> Cond {
        match b {
            BoolExpr::Bottom => Cond::Bottom,
            BoolExpr::LeftEnd(h) => Cond::LeftEnd(h - 1),
            BoolExpr::RightEnd(h) => Cond::RightEnd(h - 1),
            BoolExpr::Eq(l, r) => Cond::Eq(self.operand(l), self.operand(r)),
            BoolExpr::And(l, r) => Cond::And(Box::new(self.cond(l)), Box::new(self.cond(r))),
            BoolExpr::Or(l, r) => Cond::Or(Box::new(self.cond(l)), Box::new(self.cond(r))),
        }
    }

    fn command(&mut self, cmd: &Command, next: Pp) -> Pp {
        match cmd {
            Command::Pop => self.emit(Instr::Pop { next }),
            Command::Push(e) => {
                let value = self.operand(e);
                self.emit(Instr::Push { value, next })
            }
            Command::Left(h) => self.emit(Instr::Move {
                head: h - 1,
                right: false,
                next,
            }),
            Command::Right(h) => self.emit(Instr::Move {
                head: h - 1,
                right: true,
                next,
            }),
            Command::Choice(a, b) => {
                let first = self.seq(a, next);
                let second = self.seq(b, next);
                self.emit(Instr::Choice { first, second })
            }
            Command::If(b, t, e) => {
                let cond = self.cond(b);
                let then = self.seq(t, next);
                let otherwise = self.seq(e, next);
                self.emit(Instr::Branch {
                    cond,
                    then,
                    otherwise,
                })
            }
            // validated programs only name defined labels
            Command::Goto(l) => self.labels[l.as_str()],
            Command::Skip => next,
            Command::Accept => self.emit(Instr::Accept),
            Command::Reject => self.emit(Instr::Reject),
            Command::RightBy { .. } | Command::LeftBy { .. } | Command::MoveToLeftEnd(_) => {
                unreachable!("macros are expanded before compilation")
            }
        }
    }
}
