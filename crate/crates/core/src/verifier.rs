//! Generators for the graph pathfinder and the protocol security checker.
//!
//! Both programs cycle a single head over edge records on the tape, keep the
//! current node on top of the stack and guess, at each edge leaving that
//! node, whether to traverse it. The security checker also keeps the
//! operators not yet cancelled along the path below the current node and
//! accepts when it reaches node `1` with nothing left.

use crate::lang::{Block, BoolExpr, Command, Program, SymExpr, Symbol};
use crate::protocol::{CancelTable, Edge, Operator};
use crate::sim::{Tape, Witness};

fn constant(token: &str) -> SymExpr {
    SymExpr::Const(Symbol::new(token).expect("generator constants are valid symbols"))
}

const HEAD: usize = 1;

fn hd() -> SymExpr {
    SymExpr::Hd(HEAD)
}

fn if_then(cond: BoolExpr, then: Vec<Command>) -> Command {
    Command::If(cond, then, vec![Command::Skip])
}

/// Shared skeleton: `traverse` runs after an edge leaving the current node
/// was chosen; `width` is the number of tape cells per edge.
fn edge_cycler(traverse: Vec<Command>, width: usize) -> Program {
    let skip = || Command::RightBy {
        head: HEAD,
        count: width,
    };
    let init = vec![Command::Push(constant("0")), Command::Right(HEAD)];
    let main = vec![
        Command::If(
            BoolExpr::eq(SymExpr::Top, hd()),
            vec![Command::Choice(traverse, vec![skip()])],
            vec![skip()],
        ),
        if_then(BoolExpr::RightEnd(HEAD), vec![Command::MoveToLeftEnd(HEAD)]),
        Command::Goto("loop".into()),
    ];
    Program::new(1, vec![Block::new("init", init), Block::new("loop", main)])
}

/// Accepts a tape `> u1 v1 ... un vn <` iff node `1` is reachable from node
/// `0` along the listed edges.
pub fn gen_pathfinder() -> Program {
    edge_cycler(
        vec![
            Command::Pop,
            Command::Right(HEAD),
            if_then(BoolExpr::eq(hd(), constant("1")), vec![Command::Accept]),
            Command::Push(hd()),
            Command::Right(HEAD),
        ],
        2,
    )
}

/// The test `(hd = later && top = earlier) || ...` over the table's pairs.
pub fn identity_test(ct: &CancelTable) -> Option<BoolExpr> {
    ct.pairs()
        .iter()
        .map(|(earlier, later)| {
            BoolExpr::eq(hd(), constant(&later.token()))
                .and(BoolExpr::eq(SymExpr::Top, constant(&earlier.token())))
        })
        .reduce(BoolExpr::or)
}

/// Accepts a tape `> u1 o1 v1 ... un on vn <` iff some path from `0` to `1`
/// spells an operator word that `ct` reduces to nothing.
///
/// With an empty table no operator ever cancels, so the identity test is
/// left out and every operator is pushed.
pub fn gen_verifier(ct: &CancelTable) -> Program {
    let record = match identity_test(ct) {
        Some(test) => Command::If(test, vec![Command::Pop], vec![Command::Push(hd())]),
        None => Command::Push(hd()),
    };
    edge_cycler(
        vec![
            Command::Pop,
            Command::Right(HEAD),
            record,
            Command::Right(HEAD),
            if_then(
                BoolExpr::eq(hd(), constant("1")).and(BoolExpr::Bottom),
                vec![Command::Accept],
            ),
            Command::Push(hd()),
            Command::Right(HEAD),
        ],
        3,
    )
}

/// Edge records (`width` cells each) traversed along an accepting run of a
/// program built by [`edge_cycler`]: the record under the head each time
/// the first alternative of the `choice` is taken.
pub fn traversed_records(tape: &Tape, witness: &Witness, width: usize) -> Vec<Vec<Symbol>> {
    witness
        .trace
        .iter()
        .filter(|s| s.choice == Some(crate::sim::Branch::First))
        .filter_map(|s| tape.cells().get(s.heads[0]..s.heads[0] + width))
        .map(|r| r.to_vec())
        .collect()
}

/// The attack path behind an accepting run of [`gen_verifier`].
pub fn attack_path(tape: &Tape, witness: &Witness) -> Vec<Edge> {
    traversed_records(tape, witness, 3)
        .into_iter()
        .filter_map(|r| {
            Some(Edge {
                from: r[0].clone(),
                op: r[1].as_str().parse::<Operator>().ok()?,
                to: r[2].clone(),
            })
        })
        .collect()
}
