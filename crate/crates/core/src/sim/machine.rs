use serde::{Deserialize, Serialize};

use crate::lang::{Program, Symbol};

use super::code::{Code, Instr, Pp, SymId, SymbolTable, BOTTOM, LEFT_END, RIGHT_END};
use super::tape::Tape;

/// Which alternative of a `choice` is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackAction {
    None,
    Push(Symbol),
    Pop(Symbol),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Running,
    Accepted,
    Rejected,
    /// The path died: pop on the empty stack, a head moved past an
    /// endmarker, an endmarker or `⊥` was pushed, or no choice was supplied.
    Stuck,
}

/// A single computation path with an explicit stack.
#[derive(Clone, Debug)]
pub struct Machine<'c> {
    code: &'c Code,
    symbols: SymbolTable,
    tape: Vec<SymId>,
    pub pp: Pp,
    pub heads: Vec<usize>,
    stack: Vec<SymId>,
    halted: Option<Step>,
}

impl<'c> Machine<'c> {
    /// Empty stack, every head on the `>` endmarker.
    pub fn new(code: &'c Code, tape: &Tape) -> Machine<'c> {
        let (symbols, tape) = code.load(tape);
        Machine {
            code,
            symbols,
            tape,
            pp: code.entry,
            heads: vec![0; code.heads],
            stack: Vec::new(),
            halted: None,
        }
    }

    pub fn stack(&self) -> Vec<&Symbol> {
        self.stack.iter().map(|&s| self.symbols.name(s)).collect()
    }

    pub fn halted(&self) -> Option<Step> {
        self.halted
    }

    fn top(&self) -> SymId {
        self.stack.last().copied().unwrap_or(BOTTOM)
    }

    /// Executes one command. `choose` is consulted at `choice` commands.
    pub fn step(&mut self, mut choose: impl FnMut() -> Option<Branch>) -> (Step, StackAction) {
        if let Some(h) = self.halted {
            return (h, StackAction::None);
        }
        let mut action = StackAction::None;
        let outcome = match &self.code.instrs[self.pp] {
            Instr::Pop { next } => match self.stack.pop() {
                Some(s) => {
                    action = StackAction::Pop(self.symbols.name(s).clone());
                    self.pp = *next;
                    Step::Running
                }
                None => Step::Stuck,
            },
            Instr::Push { value, next } => {
                let v = value.value(self.top(), &self.heads, &self.tape);
                if v == BOTTOM || v == LEFT_END || v == RIGHT_END {
                    Step::Stuck
                } else {
                    self.stack.push(v);
                    action = StackAction::Push(self.symbols.name(v).clone());
                    self.pp = *next;
                    Step::Running
                }
            }
            Instr::Move { head, right, next } => {
                let pos = self.heads[*head];
                if (*right && pos + 1 >= self.tape.len()) || (!*right && pos == 0) {
                    Step::Stuck
                } else {
                    self.heads[*head] = if *right { pos + 1 } else { pos - 1 };
                    self.pp = *next;
                    Step::Running
                }
            }
            Instr::Branch {
                cond,
                then,
                otherwise,
            } => {
                self.pp = if cond.eval(self.top(), &self.heads, &self.tape) {
                    *then
                } else {
                    *otherwise
                };
                Step::Running
            }
            Instr::Choice { first, second } => match choose() {
                Some(Branch::First) => {
                    self.pp = *first;
                    Step::Running
                }
                Some(Branch::Second) => {
                    self.pp = *second;
                    Step::Running
                }
                None => Step::Stuck,
            },
            Instr::Jump(t) => {
                self.pp = *t;
                Step::Running
            }
            Instr::Accept => Step::Accepted,
            Instr::Reject => Step::Rejected,
        };
        if outcome != Step::Running {
            self.halted = Some(outcome);
        }
        (outcome, action)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Accepted,
    Rejected,
    Stuck,
    OutOfFuel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: RunStatus,
    /// Commands executed, the final accept or reject included.
    pub steps: usize,
}

/// Runs one computation path, resolving each `choice` from `script` in
/// order. Running out of script at a `choice` is `Stuck`; exceeding `fuel`
/// commands is `OutOfFuel`, which claims nothing about acceptance.
pub fn run_deterministic(
    program: &Program,
    tape: &Tape,
    script: &[Branch],
    fuel: usize,
) -> RunOutcome {
    run_code(&Code::compile(program), tape, script, fuel)
}

pub fn run_code(code: &Code, tape: &Tape, script: &[Branch], fuel: usize) -> RunOutcome {
    let mut m = Machine::new(code, tape);
    let mut choices = script.iter().copied();
    for steps in 1..=fuel {
        let status = match m.step(|| choices.next()).0 {
            Step::Running => continue,
            Step::Accepted => RunStatus::Accepted,
            Step::Rejected => RunStatus::Rejected,
            Step::Stuck => RunStatus::Stuck,
        };
        return RunOutcome { status, steps };
    }
    RunOutcome {
        status: RunStatus::OutOfFuel,
        steps: fuel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;

    fn tape(s: &str) -> Tape {
        Tape::from_words(s).unwrap()
    }

    #[test]
    fn trivial_accept() {
        let p = parse_program("init: accept").unwrap();
        let r = run_deterministic(&p, &tape("a b"), &[], 10);
        assert_eq!(
            r,
            RunOutcome {
                status: RunStatus::Accepted,
                steps: 1
            }
        );
    }

    #[test]
    fn divergent_pusher_runs_out_of_fuel() {
        let p = parse_program("init: push '0'; goto init").unwrap();
        let r = run_deterministic(&p, &tape(""), &[], 100);
        assert_eq!(r.status, RunStatus::OutOfFuel);
    }

    #[test]
    fn pop_on_empty_stack_is_stuck() {
        let p = parse_program("init: pop; accept").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape(""), &[], 10).status,
            RunStatus::Stuck
        );
    }

    #[test]
    fn moving_past_endmarkers_is_stuck() {
        let p = parse_program("init: left; accept").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape("x"), &[], 10).status,
            RunStatus::Stuck
        );
        let p = parse_program("init: 3-right; accept").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape("x"), &[], 10).status,
            RunStatus::Stuck
        );
        let p = parse_program("init: 2-right; if rightend then accept end; reject").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape("x"), &[], 10).status,
            RunStatus::Accepted
        );
    }

    #[test]
    fn top_of_empty_stack_is_bottom_symbol() {
        let p = parse_program(
            "init: right; if top = hd then accept end; if bottom then push hd; pop; reject end; accept",
        )
        .unwrap();
        let r = run_deterministic(&p, &tape("x"), &[], 20);
        assert_eq!(r.status, RunStatus::Rejected);
    }

    #[test]
    fn pushing_an_endmarker_or_empty_top_is_stuck() {
        let p = parse_program("init: push hd; accept").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape("x"), &[], 10).status,
            RunStatus::Stuck
        );
        let p = parse_program("init: push top; accept").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape("x"), &[], 10).status,
            RunStatus::Stuck
        );
    }

    #[test]
    fn missing_choice_is_stuck() {
        let p = parse_program("init: choice accept or reject end").unwrap();
        assert_eq!(
            run_deterministic(&p, &tape(""), &[], 10).status,
            RunStatus::Stuck
        );
        assert_eq!(
            run_deterministic(&p, &tape(""), &[Branch::Second], 10).status,
            RunStatus::Rejected
        );
    }
}
