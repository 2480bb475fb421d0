//! Oracles and generators shared by the integration tests. None of these
//! reuse the library's reduction, closure or tabulation code.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;

use pdaverify::lang::{Block, BoolExpr, Command, Program, SymExpr, Symbol};
use pdaverify::protocol::{CancelTable, Fsa, Operator};
use pdaverify::sim::{Code, Machine, Step, Tape};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nodes `0..n` with `2 <= n <= max_nodes`, up to `max_edges` edges with
/// labels drawn uniformly from all thirteen operators.
pub fn random_fsa(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> Fsa {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(1..=max_edges);
    let mut f = Fsa::new("0", "1").unwrap();
    for _ in 0..m {
        let u = rng.gen_range(0..n).to_string();
        let v = rng.gen_range(0..n).to_string();
        let op = *Operator::UNIVERSE.choose(rng).unwrap();
        f.add_edge(&u, op, &v).unwrap();
    }
    f
}

/// Like [`random_fsa`] but every edge goes from a smaller to a larger
/// node in the order `0, 2, 3, ..., n-1, 1`, so all paths are finite.
pub fn random_dag_fsa(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> Fsa {
    let n = rng.gen_range(2..=max_nodes);
    let order: Vec<usize> = std::iter::once(0).chain(2..n).chain([1]).collect();
    let m = rng.gen_range(1..=max_edges);
    let mut f = Fsa::new("0", "1").unwrap();
    for _ in 0..m {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let op = *Operator::UNIVERSE.choose(rng).unwrap();
        f.add_edge(&order[i].to_string(), op, &order[j].to_string())
            .unwrap();
    }
    f
}

pub fn random_digraph(
    rng: &mut impl Rng,
    max_nodes: usize,
    max_edges: usize,
) -> Vec<(usize, usize)> {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(0..=max_edges);
    (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}

pub fn digraph_tape(edges: &[(usize, usize)]) -> Tape {
    let words: Vec<String> = edges.iter().map(|(u, v)| format!("{u} {v}")).collect();
    Tape::from_words(&words.join(" ")).unwrap()
}

pub fn bfs_reachable(edges: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            return true;
        }
        for &(a, b) in edges {
            if a == u && seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    false
}

/// Tries every order of erasing adjacent cancelling pairs.
pub fn erasable_by_some_order(word: &[Operator], ct: &CancelTable) -> bool {
    fn go(w: Vec<Operator>, ct: &CancelTable, seen: &mut HashSet<Vec<Operator>>) -> bool {
        if w.is_empty() {
            return true;
        }
        if !seen.insert(w.clone()) {
            return false;
        }
        (0..w.len() - 1).any(|i| {
            ct.cancels(w[i], w[i + 1]) && {
                let mut shorter = w.clone();
                shorter.drain(i..i + 2);
                go(shorter, ct, seen)
            }
        })
    }
    go(word.to_vec(), ct, &mut HashSet::new())
}

/// Enumerates every source-to-target path of at most `max_len` edges and
/// checks its word with [`erasable_by_some_order`].
pub fn erasable_path_within(f: &Fsa, ct: &CancelTable, max_len: usize) -> bool {
    fn go(f: &Fsa, ct: &CancelTable, at: &Symbol, word: &mut Vec<Operator>, left: usize) -> bool {
        if *at == f.target && erasable_by_some_order(word, ct) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for e in f.edges().iter().filter(|e| e.from == *at) {
            word.push(e.op);
            let found = go(f, ct, &e.to, word, left - 1);
            word.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(f, ct, &f.source, &mut Vec::new(), max_len)
}

/// Breadth-first search over full machine configurations (control point,
/// heads and the whole stack). `Some(verdict)` if the reachable space is
/// explored within `budget` configurations, `None` otherwise.
pub fn exhaustive_search(program: &Program, tape: &Tape, budget: usize) -> Option<bool> {
    let code = Code::compile(program);
    let start = Machine::new(&code, tape);
    let key = |m: &Machine| -> (usize, Vec<usize>, Vec<String>) {
        (
            m.pp,
            m.heads.clone(),
            m.stack().iter().map(|s| s.to_string()).collect(),
        )
    };
    let mut seen = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        let mut probe = m.clone();
        let mut at_choice = false;
        let (step, _) = probe.step(|| {
            at_choice = true;
            None
        });
        let next = if at_choice {
            let mut first = m.clone();
            first.step(|| Some(pdaverify::sim::Branch::First));
            let mut second = m;
            second.step(|| Some(pdaverify::sim::Branch::Second));
            vec![first, second]
        } else {
            match step {
                Step::Accepted => return Some(true),
                Step::Running => vec![probe],
                _ => vec![],
            }
        };
        for n in next {
            if n.halted().is_some_and(|h| h != Step::Running) {
                continue;
            }
            if seen.insert(key(&n)) {
                if seen.len() > budget {
                    return None;
                }
                queue.push_back(n);
            }
        }
    }
    Some(false)
}

/// Protocol 1's automaton with a chain `1 -> c1 -> ... -> cm -> 1` of
/// fresh nodes appended, each fresh node carrying the saboteur's eleven
/// loops. Chain edges alternate `PZ` and `MZ`.
pub fn scaled_echo(m: usize) -> Fsa {
    let mut f = pdaverify::protocol::build_fsa(&pdaverify::protocol::Protocol::echo());
    let chain: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
    let mut prev = "1".to_owned();
    for (i, node) in chain
        .iter()
        .chain(std::iter::once(&"1".to_owned()))
        .enumerate()
    {
        let op = if i % 2 == 0 {
            Operator::P(pdaverify::protocol::User::Z)
        } else {
            Operator::M(pdaverify::protocol::User::Z)
        };
        f.add_edge(&prev, op, node).unwrap();
        prev = node.clone();
    }
    for node in &chain {
        for op in Operator::SABOTEUR_LOOPS {
            f.add_edge(node, op, node).unwrap();
        }
    }
    f
}

fn random_symbol(rng: &mut impl Rng) -> Symbol {
    Symbol::new(*["a", "b", "0", "1", "EX"].choose(rng).unwrap()).unwrap()
}

fn random_sym_expr(rng: &mut impl Rng, heads: usize) -> SymExpr {
    match rng.gen_range(0..3) {
        0 => SymExpr::Const(random_symbol(rng)),
        1 => SymExpr::Top,
        _ => SymExpr::Hd(rng.gen_range(1..=heads)),
    }
}

fn random_bool(rng: &mut impl Rng, heads: usize, depth: usize) -> BoolExpr {
    let leaf = depth == 0 || rng.gen_bool(0.6);
    if leaf {
        match rng.gen_range(0..4) {
            0 => BoolExpr::Bottom,
            1 => BoolExpr::LeftEnd(rng.gen_range(1..=heads)),
            2 => BoolExpr::RightEnd(rng.gen_range(1..=heads)),
            _ => BoolExpr::eq(random_sym_expr(rng, heads), random_sym_expr(rng, heads)),
        }
    } else {
        let (l, r) = (
            random_bool(rng, heads, depth - 1),
            random_bool(rng, heads, depth - 1),
        );
        if rng.gen() {
            l.and(r)
        } else {
            l.or(r)
        }
    }
}

fn random_seq(rng: &mut impl Rng, heads: usize, labels: &[String], depth: usize) -> Vec<Command> {
    let len = rng.gen_range(1..=4);
    (0..len)
        .map(|_| random_command(rng, heads, labels, depth))
        .collect()
}

fn random_command(rng: &mut impl Rng, heads: usize, labels: &[String], depth: usize) -> Command {
    let h = rng.gen_range(1..=heads);
    let top = if depth == 0 { 11 } else { 13 };
    match rng.gen_range(0..top) {
        0 => Command::Pop,
        1 => Command::Push(random_sym_expr(rng, heads)),
        2 => Command::Left(h),
        3 => Command::Right(h),
        4 => Command::Goto(labels.choose(rng).unwrap().clone()),
        5 => Command::Skip,
        6 => Command::Accept,
        7 => Command::Reject,
        8 => Command::RightBy {
            head: h,
            count: rng.gen_range(2..=4),
        },
        9 => Command::LeftBy {
            head: h,
            count: rng.gen_range(2..=4),
        },
        10 => Command::MoveToLeftEnd(h),
        11 => Command::Choice(
            random_seq(rng, heads, labels, depth - 1),
            random_seq(rng, heads, labels, depth - 1),
        ),
        _ => Command::If(
            random_bool(rng, heads, 2),
            random_seq(rng, heads, labels, depth - 1),
            random_seq(rng, heads, labels, depth - 1),
        ),
    }
}

/// A well-formed program with 1 or 2 heads, macros included.
pub fn random_program(rng: &mut impl Rng) -> Program {
    let heads = rng.gen_range(1..=2);
    let labels: Vec<String> = (0..rng.gen_range(1..=4)).map(|i| format!("b{i}")).collect();
    let blocks = labels
        .iter()
        .map(|l| Block::new(l.clone(), random_seq(rng, heads, &labels, 2)))
        .collect();
    Program::new(heads, blocks)
}
