//! Independent decision procedure for protocol security: which node pairs
//! are joined by a path whose operator word cancels completely.
//!
//! The cancelling words are generated by three rules: the empty word, the
//! concatenation of two cancelling words, and `a w b` for a cancelling `w`
//! when `b` applied after `a` is an identity. On a graph those rules become
//! reflexivity, transitivity and a surround step over one incoming and one
//! outgoing edge, closed under a worklist.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::lang::Symbol;
use crate::protocol::{CancelTable, Edge, Fsa};

struct Graph {
    nodes: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
    /// Per node: indices of edges entering / leaving it.
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    fn new(f: &Fsa) -> Graph {
        let nodes = f.nodes();
        let index: HashMap<Symbol, usize> = nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let mut incoming = vec![Vec::new(); nodes.len()];
        let mut outgoing = vec![Vec::new(); nodes.len()];
        let mut edges = Vec::with_capacity(f.edges().len());
        for (i, e) in f.edges().iter().enumerate() {
            let (u, v) = (index[&e.from], index[&e.to]);
            outgoing[u].push(i);
            incoming[v].push(i);
            edges.push((u, v));
        }
        Graph {
            nodes,
            index,
            incoming,
            outgoing,
            edges,
        }
    }
}

/// Node pairs `(u, v)` such that some path from `u` to `v` spells a word
/// that cancels to nothing.
#[derive(Clone, Debug)]
pub struct CancelRelation {
    nodes: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
    related: Vec<Vec<bool>>,
    size: usize,
}

impl CancelRelation {
    pub fn contains(&self, u: &str, v: &str) -> bool {
        let (Some(s), Some(t)) = (Symbol::new(u), Symbol::new(v)) else {
            return false;
        };
        match (self.index.get(&s), self.index.get(&t)) {
            (Some(&i), Some(&j)) => self.related[i][j],
            _ => false,
        }
    }

    /// Number of related pairs.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> + '_ {
        self.related.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &r)| r)
                .map(move |(j, _)| (&self.nodes[i], &self.nodes[j]))
        })
    }
}

pub fn dyck_closure(f: &Fsa, ct: &CancelTable) -> CancelRelation {
    let g = Graph::new(f);
    let n = g.nodes.len();
    let ops: Vec<_> = f.edges().iter().map(|e| e.op).collect();
    let mut related = vec![vec![false; n]; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue = VecDeque::new();
    let mut size = 0;

    let mut add =
        |u: usize, v: usize, related: &mut Vec<Vec<bool>>, queue: &mut VecDeque<(usize, usize)>| {
            if !related[u][v] {
                related[u][v] = true;
                size += 1;
                queue.push_back((u, v));
            }
        };
    for v in 0..n {
        add(v, v, &mut related, &mut queue);
    }
    while let Some((u, v)) = queue.pop_front() {
        succ[u].push(v);
        pred[v].push(u);
        for &w in &succ[v] {
            add(u, w, &mut related, &mut queue);
        }
        for &t in &pred[u] {
            add(t, v, &mut related, &mut queue);
        }
        for &e_in in &g.incoming[u] {
            for &e_out in &g.outgoing[v] {
                if ct.cancels(ops[e_in], ops[e_out]) {
                    add(g.edges[e_in].0, g.edges[e_out].1, &mut related, &mut queue);
                }
            }
        }
    }
    CancelRelation {
        nodes: g.nodes,
        index: g.index,
        related,
        size,
    }
}

/// True iff some source-to-target path spells a word that cancels to
/// nothing, i.e. the protocol is insecure.
pub fn is_insecure(f: &Fsa, ct: &CancelTable) -> bool {
    dyck_closure(f, ct).contains(f.source.as_str(), f.target.as_str())
}

#[derive(Clone, Copy, Debug)]
enum Derivation {
    Empty,
    Concat(usize),
    Surround(usize, usize),
}

/// A shortest source-to-target path whose word cancels to nothing.
///
/// Shortest derivations are settled in order of length; a pair is combined
/// only with pairs already settled, which is sound because every rule
/// yields a word at least as long as each of its parts.
pub fn shortest_reducible_path(f: &Fsa, ct: &CancelTable) -> Option<Vec<Edge>> {
    let g = Graph::new(f);
    let n = g.nodes.len();
    let ops: Vec<_> = f.edges().iter().map(|e| e.op).collect();
    let mut best: Vec<Vec<Option<(usize, Derivation)>>> = vec![vec![None; n]; n];
    let mut settled = vec![vec![false; n]; n];
    let mut out_settled: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut in_settled: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();

    let relax = |u: usize,
                 v: usize,
                 len: usize,
                 d: Derivation,
                 best: &mut Vec<Vec<Option<(usize, Derivation)>>>,
                 heap: &mut BinaryHeap<Reverse<(usize, usize, usize)>>| {
        if best[u][v].is_none_or(|(l, _)| len < l) {
            best[u][v] = Some((len, d));
            heap.push(Reverse((len, u, v)));
        }
    };
    for v in 0..n {
        relax(v, v, 0, Derivation::Empty, &mut best, &mut heap);
    }
    let (s, t) = (g.index[&f.source], g.index[&f.target]);
    while let Some(Reverse((len, u, v))) = heap.pop() {
        if settled[u][v] || best[u][v].is_some_and(|(l, _)| l < len) {
            continue;
        }
        settled[u][v] = true;
        if (u, v) == (s, t) {
            break;
        }
        out_settled[u].push(v);
        in_settled[v].push(u);
        for &w in &out_settled[v].clone() {
            let l = best[v][w].unwrap().0;
            relax(u, w, len + l, Derivation::Concat(v), &mut best, &mut heap);
        }
        for &x in &in_settled[u].clone() {
            let l = best[x][u].unwrap().0;
            relax(x, v, l + len, Derivation::Concat(u), &mut best, &mut heap);
        }
        for &e_in in &g.incoming[u] {
            for &e_out in &g.outgoing[v] {
                if ct.cancels(ops[e_in], ops[e_out]) {
                    let (x, y) = (g.edges[e_in].0, g.edges[e_out].1);
                    relax(
                        x,
                        y,
                        len + 2,
                        Derivation::Surround(e_in, e_out),
                        &mut best,
                        &mut heap,
                    );
                }
            }
        }
    }
    if !settled[s][t] {
        return None;
    }

    let mut path = Vec::new();
    // explicit stack: Err(edge) emits an edge, Ok(pair) expands a pair
    let mut work: Vec<Result<(usize, usize), usize>> = vec![Ok((s, t))];
    while let Some(item) = work.pop() {
        match item {
            Err(e) => path.push(f.edges()[e].clone()),
            Ok((u, v)) => match best[u][v].expect("settled pairs have derivations").1 {
                Derivation::Empty => {}
                Derivation::Concat(m) => {
                    work.push(Ok((m, v)));
                    work.push(Ok((u, m)));
                }
                Derivation::Surround(e_in, e_out) => {
                    work.push(Err(e_out));
                    work.push(Ok((g.edges[e_in].1, g.edges[e_out].0)));
                    work.push(Err(e_in));
                }
            },
        }
    }
    Some(path)
}

/// Some source-to-target path of at most `max_len` edges whose word cancels
/// to nothing, or `None` if there is none within the bound. The path
/// returned is a shortest one.
pub fn bounded_path_search(f: &Fsa, ct: &CancelTable, max_len: usize) -> Option<Vec<Edge>> {
    shortest_reducible_path(f, ct).filter(|p| p.len() <= max_len)
}
