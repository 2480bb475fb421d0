//! Memoizing simulation of nondeterministic pushdown programs.
//!
//! The stack is never materialized. A *level* is opened by each push and is
//! identified by the configuration right after the push: program point, head
//! positions and the pushed symbol. Inside a level the top of the stack is
//! fixed, so its reachable states are pairs (program point, head positions).
//! A pop inside a level yields an exit state; exits are recorded once per
//! level and replayed into every level that pushed into it. Only the caller
//! level matters for the replay, because after the pop its top symbol is
//! visible again and nothing else about the push site survives.
//!
//! Each (level, program point, heads) item is processed at most once, so the
//! number of worklist events is bounded by the square of the number of
//! distinct surface configurations.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::lang::{Program, Symbol};

use super::code::{Code, Instr, Pp, SymId, BOTTOM, LEFT_END, RIGHT_END};
use super::machine::{Branch, StackAction};
use super::tape::Tape;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimStats {
    /// Distinct surface configurations (program point, heads, top symbol).
    pub configs: usize,
    /// Worklist items processed.
    pub steps: usize,
    /// Pop summaries recorded: (level, exit state) pairs.
    pub summaries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub pp: Pp,
    /// Head positions, 0 being the `>` endmarker.
    pub heads: Vec<usize>,
    pub action: StackAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<Branch>,
}

/// One accepting computation, from the initial configuration to the
/// executed `accept`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub trace: Vec<TraceStep>,
}

impl Witness {
    /// The decisions taken at `choice` commands, in order.
    pub fn choice_script(&self) -> Vec<Branch> {
        self.trace.iter().filter_map(|s| s.choice).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub stats: SimStats,
    pub witness: Option<Witness>,
}

/// Flat export form: the counters plus the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    #[serde(flatten)]
    pub stats: SimStats,
    pub accepted: bool,
}

impl From<&Verdict> for StatsRecord {
    fn from(v: &Verdict) -> StatsRecord {
        StatsRecord {
            stats: v.stats,
            accepted: v.accepted,
        }
    }
}

pub fn collect_stats(verdict: &Verdict) -> SimStats {
    verdict.stats
}

/// Decides whether some computation of `program` on `tape` reaches `accept`.
pub fn simulate(program: &Program, tape: &Tape, want_witness: bool) -> Verdict {
    simulate_code(&Code::compile(program), tape, want_witness)
}

pub fn simulate_code(code: &Code, tape: &Tape, want_witness: bool) -> Verdict {
    let mut t = Tabulation::new(code, tape);
    t.run();
    let witness = match (want_witness, t.accept_item) {
        (true, Some(item)) => Some(t.witness(item)),
        _ => None,
    };
    Verdict {
        accepted: t.accept_item.is_some(),
        stats: SimStats {
            configs: t.configs.len(),
            steps: t.steps,
            summaries: t.summaries,
        },
        witness,
    }
}

type ItemId = u32;
type LevelId = u32;
/// Head positions packed in base `n`, head 0 least significant.
type HeadsKey = u64;

#[derive(Clone, Copy, Debug)]
enum Why {
    Start,
    Step {
        pred: ItemId,
        choice: Option<Branch>,
    },
    Return {
        push: ItemId,
        pop: ItemId,
    },
}

#[derive(Clone, Copy, Debug)]
struct Item {
    level: LevelId,
    pp: Pp,
    heads: HeadsKey,
    why: Why,
}

struct Level {
    top: SymId,
    /// The push item that opened this level first; `None` for the bottom.
    creator: Option<ItemId>,
    /// Levels that pushed into this one, each with the first push item seen.
    callers: Vec<(LevelId, ItemId)>,
    caller_set: FxHashSet<LevelId>,
    /// Exit states: (program point after the pop, heads, the pop item).
    exits: Vec<(Pp, HeadsKey, ItemId)>,
    exit_set: FxHashSet<(Pp, HeadsKey)>,
}

impl Level {
    fn new(top: SymId, creator: Option<ItemId>) -> Level {
        Level {
            top,
            creator,
            callers: Vec::new(),
            caller_set: FxHashSet::default(),
            exits: Vec::new(),
            exit_set: FxHashSet::default(),
        }
    }
}

struct Tabulation<'c> {
    code: &'c Code,
    symbols: super::code::SymbolTable,
    tape: Vec<SymId>,
    n: u64,
    levels: Vec<Level>,
    level_index: FxHashMap<(Pp, HeadsKey, SymId), LevelId>,
    items: Vec<Item>,
    seen: FxHashSet<(LevelId, Pp, HeadsKey)>,
    configs: FxHashSet<(Pp, HeadsKey, SymId)>,
    queue: VecDeque<ItemId>,
    steps: usize,
    summaries: usize,
    accept_item: Option<ItemId>,
    scratch: Vec<usize>,
}

impl<'c> Tabulation<'c> {
    fn new(code: &'c Code, tape: &Tape) -> Tabulation<'c> {
        let (symbols, tape) = code.load(tape);
        let n = tape.len() as u64;
        let mut t = Tabulation {
            code,
            symbols,
            tape,
            n,
            levels: vec![Level::new(BOTTOM, None)],
            level_index: FxHashMap::default(),
            items: Vec::new(),
            seen: FxHashSet::default(),
            configs: FxHashSet::default(),
            queue: VecDeque::new(),
            steps: 0,
            summaries: 0,
            accept_item: None,
            scratch: vec![0; code.heads],
        };
        t.add(0, code.entry, 0, Why::Start);
        t
    }

    fn decode(&mut self, key: HeadsKey) {
        let mut k = key;
        for h in self.scratch.iter_mut() {
            *h = (k % self.n) as usize;
            k /= self.n;
        }
    }

    fn encode(&self, heads: &[usize]) -> HeadsKey {
        heads
            .iter()
            .rev()
            .fold(0, |acc, &p| acc * self.n + p as u64)
    }

    fn add(&mut self, level: LevelId, pp: Pp, heads: HeadsKey, why: Why) {
        if !self.seen.insert((level, pp, heads)) {
            return;
        }
        let top = self.levels[level as usize].top;
        self.configs.insert((pp, heads, top));
        let id = self.items.len() as ItemId;
        self.items.push(Item {
            level,
            pp,
            heads,
            why,
        });
        self.queue.push_back(id);
    }

    fn run(&mut self) {
        while let Some(id) = self.queue.pop_front() {
            self.steps += 1;
            self.process(id);
        }
    }

    fn process(&mut self, id: ItemId) {
        let Item {
            level, pp, heads, ..
        } = self.items[id as usize];
        let top = self.levels[level as usize].top;
        let code = self.code;
        match &code.instrs[pp] {
            Instr::Accept => {
                if self.accept_item.is_none() {
                    self.accept_item = Some(id);
                }
            }
            Instr::Reject => {}
            Instr::Jump(t) => self.add(
                level,
                *t,
                heads,
                Why::Step {
                    pred: id,
                    choice: None,
                },
            ),
            Instr::Choice { first, second } => {
                self.add(
                    level,
                    *first,
                    heads,
                    Why::Step {
                        pred: id,
                        choice: Some(Branch::First),
                    },
                );
                self.add(
                    level,
                    *second,
                    heads,
                    Why::Step {
                        pred: id,
                        choice: Some(Branch::Second),
                    },
                );
            }
            Instr::Branch {
                cond,
                then,
                otherwise,
            } => {
                self.decode(heads);
                let target = if cond.eval(top, &self.scratch, &self.tape) {
                    *then
                } else {
                    *otherwise
                };
                self.add(
                    level,
                    target,
                    heads,
                    Why::Step {
                        pred: id,
                        choice: None,
                    },
                );
            }
            Instr::Move { head, right, next } => {
                self.decode(heads);
                let pos = self.scratch[*head];
                if (*right && pos + 1 >= self.tape.len()) || (!*right && pos == 0) {
                    return;
                }
                self.scratch[*head] = if *right { pos + 1 } else { pos - 1 };
                let moved = self.encode(&self.scratch);
                self.add(
                    level,
                    *next,
                    moved,
                    Why::Step {
                        pred: id,
                        choice: None,
                    },
                );
            }
            Instr::Pop { next } => {
                if level == 0 {
                    return;
                }
                let lv = &mut self.levels[level as usize];
                if !lv.exit_set.insert((*next, heads)) {
                    return;
                }
                lv.exits.push((*next, heads, id));
                self.summaries += 1;
                let callers = lv.callers.clone();
                for (caller, push) in callers {
                    self.add(caller, *next, heads, Why::Return { push, pop: id });
                }
            }
            Instr::Push { value, next } => {
                self.decode(heads);
                let v = value.value(top, &self.scratch, &self.tape);
                if v == BOTTOM || v == LEFT_END || v == RIGHT_END {
                    return;
                }
                let callee = match self.level_index.get(&(*next, heads, v)) {
                    Some(&l) => l,
                    None => {
                        let l = self.levels.len() as LevelId;
                        self.levels.push(Level::new(v, Some(id)));
                        self.level_index.insert((*next, heads, v), l);
                        self.add(l, *next, heads, Why::Start);
                        l
                    }
                };
                let lv = &mut self.levels[callee as usize];
                if !lv.caller_set.insert(level) {
                    return;
                }
                lv.callers.push((level, id));
                let exits = lv.exits.clone();
                for (pp2, heads2, pop) in exits {
                    self.add(level, pp2, heads2, Why::Return { push: id, pop });
                }
            }
        }
    }

    /// Expands the justification tree of `target` into the executed
    /// commands that lead to it and through it.
    ///
    /// `Expand(id, outer)`: with `outer` set, reaching the start of a level
    /// continues through the push that created it; otherwise the level was
    /// entered by a push already on the trace.
    fn witness(&mut self, target: ItemId) -> Witness {
        enum Task {
            Expand(ItemId, bool),
            Emit(ItemId, Option<Branch>),
        }
        let mut trace = Vec::new();
        let mut tasks = vec![Task::Emit(target, None), Task::Expand(target, true)];
        while let Some(task) = tasks.pop() {
            match task {
                Task::Expand(id, outer) => match self.items[id as usize].why {
                    Why::Start => {
                        let level = self.items[id as usize].level;
                        if let (true, Some(push)) = (outer, self.levels[level as usize].creator) {
                            tasks.push(Task::Emit(push, None));
                            tasks.push(Task::Expand(push, true));
                        }
                    }
                    Why::Step { pred, choice } => {
                        tasks.push(Task::Emit(pred, choice));
                        tasks.push(Task::Expand(pred, outer));
                    }
                    Why::Return { push, pop } => {
                        tasks.push(Task::Emit(pop, None));
                        tasks.push(Task::Expand(pop, false));
                        tasks.push(Task::Emit(push, None));
                        tasks.push(Task::Expand(push, outer));
                    }
                },
                Task::Emit(id, choice) => trace.push(self.trace_step(id, choice)),
            }
        }
        Witness { trace }
    }

    fn trace_step(&mut self, id: ItemId, choice: Option<Branch>) -> TraceStep {
        let item = self.items[id as usize];
        let top = self.levels[item.level as usize].top;
        self.decode(item.heads);
        let action = match &self.code.instrs[item.pp] {
            Instr::Pop { .. } => StackAction::Pop(self.name(top)),
            Instr::Push { value, .. } => {
                StackAction::Push(self.name(value.value(top, &self.scratch, &self.tape)))
            }
            _ => StackAction::None,
        };
        TraceStep {
            pp: item.pp,
            heads: self.scratch.clone(),
            action,
            choice,
        }
    }

    fn name(&self, id: SymId) -> Symbol {
        self.symbols.name(id).clone()
    }
}
