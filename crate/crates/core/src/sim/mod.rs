//! Terminating simulation of multihead two-way nondeterministic pushdown
//! programs, plus a small-step reference machine for single paths.

mod code;
mod machine;
mod tabulate;
mod tape;

pub use code::{Code, Cond, Instr, Operand, Pp, SymId, SymbolTable};
pub use machine::{
    run_code, run_deterministic, Branch, Machine, RunOutcome, RunStatus, StackAction, Step,
};
pub use tabulate::{
    collect_stats, simulate, simulate_code, SimStats, StatsRecord, TraceStep, Verdict, Witness,
};
pub(crate) use tape::strip_comments;
pub use tape::{parse_tape, Tape, TapeError};
