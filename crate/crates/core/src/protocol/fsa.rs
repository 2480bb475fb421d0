use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::lang::Symbol;
use crate::sim::{parse_tape, Tape, TapeError};

use super::operator::{Operator, UnknownOperator};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: Symbol,
    pub op: Operator,
    pub to: Symbol,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.from, self.op, self.to)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsaError {
    #[error("line {line}: expected `<from> <operator> <to>`")]
    MalformedEdge { line: usize },
    #[error(transparent)]
    UnknownOperator(#[from] UnknownOperator),
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error("node `{0}` collides with an operator token")]
    NodeCollidesWithOperator(String),
    #[error("`{0}` is not a valid node name")]
    BadNode(String),
    #[error("source and target must differ")]
    SourceIsTarget,
    #[error("tape does not hold whole edges: {0} symbols between the endmarkers")]
    PartialEdge(usize),
}

/// An operator-labeled automaton with one source and one target node.
/// Edges form a set; insertion order is kept for stable output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa {
    pub source: Symbol,
    pub target: Symbol,
    edges: Vec<Edge>,
    present: HashSet<Edge>,
}

fn node(name: &str) -> Result<Symbol, FsaError> {
    if name.parse::<Operator>().is_ok() {
        return Err(FsaError::NodeCollidesWithOperator(name.to_owned()));
    }
    match Symbol::new(name) {
        Some(s) if !s.is_reserved() => Ok(s),
        _ => Err(FsaError::BadNode(name.to_owned())),
    }
}

impl Fsa {
    pub fn new(source: &str, target: &str) -> Result<Fsa, FsaError> {
        let (source, target) = (node(source)?, node(target)?);
        if source == target {
            return Err(FsaError::SourceIsTarget);
        }
        Ok(Fsa {
            source,
            target,
            edges: Vec::new(),
            present: HashSet::new(),
        })
    }

    /// Adds an edge; returns false if it was already present.
    pub fn add_edge(&mut self, from: &str, op: Operator, to: &str) -> Result<bool, FsaError> {
        let edge = Edge {
            from: node(from)?,
            op,
            to: node(to)?,
        };
        Ok(self.insert(edge))
    }

    fn insert(&mut self, edge: Edge) -> bool {
        if self.present.contains(&edge) {
            return false;
        }
        self.present.insert(edge.clone());
        self.edges.push(edge);
        true
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.present.contains(edge)
    }

    /// Source, target, then every other node in order of first appearance.
    pub fn nodes(&self) -> Vec<Symbol> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let all = [&self.source, &self.target]
            .into_iter()
            .chain(self.edges.iter().flat_map(|e| [&e.from, &e.to]));
        for n in all {
            if seen.insert(n) {
                out.push(n.clone());
            }
        }
        out
    }

    /// Same edges in a different order.
    pub fn with_edge_order(&self, order: &[usize]) -> Fsa {
        let mut f = Fsa {
            source: self.source.clone(),
            target: self.target.clone(),
            edges: Vec::new(),
            present: HashSet::new(),
        };
        for &i in order {
            f.insert(self.edges[i].clone());
        }
        f
    }

    /// Edge-list file contents: `source:`/`target:` headers, then one
    /// `u OP v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("source: {}\ntarget: {}\n", self.source, self.target);
        for e in &self.edges {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Renames nodes so the source is `0`, the target `1` and the rest
    /// `2, 3, ...` in order of first appearance. Returns `self` unchanged if
    /// source and target already carry those names.
    pub fn canonical_names(&self) -> Fsa {
        if self.source.as_str() == "0" && self.target.as_str() == "1" {
            return self.clone();
        }
        let names: HashMap<Symbol, String> = self
            .nodes()
            .into_iter()
            .enumerate()
            .map(|(i, n)| (n, i.to_string()))
            .collect();
        let mut f = Fsa::new("0", "1").expect("numeric names are valid");
        for e in &self.edges {
            f.add_edge(&names[&e.from], e.op, &names[&e.to])
                .expect("numeric names are valid");
        }
        f
    }
}

/// Parses an edge-list file. Headers default to source `0` and target `1`.
pub fn parse_fsa(text: &str) -> Result<Fsa, FsaError> {
    let text = crate::sim::strip_comments(text);
    let (mut source, mut target) = ("0".to_owned(), "1".to_owned());
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("source:") {
            source = rest.trim().to_owned();
            continue;
        }
        if let Some(rest) = line.strip_prefix("target:") {
            target = rest.trim().to_owned();
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [u, op, v] = toks.as_slice() else {
            return Err(FsaError::MalformedEdge { line: i + 1 });
        };
        edges.push((u.to_string(), op.parse::<Operator>()?, v.to_string()));
    }
    let mut f = Fsa::new(&source, &target)?;
    for (u, op, v) in edges {
        f.add_edge(&u, op, &v)?;
    }
    Ok(f)
}

/// Lays the edges out as `> u1 o1 v1 ... un on vn <`, with the source named
/// `0` and the target `1`.
pub fn encode_tape(f: &Fsa) -> Result<Tape, FsaError> {
    let f = f.canonical_names();
    let syms = f.edges.iter().flat_map(|e| {
        [
            e.from.clone(),
            Symbol::new(e.op.token()).expect("operator tokens are symbols"),
            e.to.clone(),
        ]
    });
    Ok(Tape::new(syms)?)
}

/// Reads a tape of `u op v` triples back into an automaton from `0` to `1`.
pub fn fsa_from_tape(tape: &Tape) -> Result<Fsa, FsaError> {
    let inner = tape.inner();
    if !inner.len().is_multiple_of(3) {
        return Err(FsaError::PartialEdge(inner.len()));
    }
    let mut f = Fsa::new("0", "1")?;
    for t in inner.chunks(3) {
        f.add_edge(t[0].as_str(), t[1].as_str().parse()?, t[2].as_str())?;
    }
    Ok(f)
}

/// Parses a tape file holding an encoded automaton.
pub fn parse_fsa_tape(text: &str) -> Result<Fsa, FsaError> {
    fsa_from_tape(&parse_tape(text)?)
}

/// True if some bijection of nodes fixing source and target maps the edge
/// set of `a` exactly onto that of `b`.
pub fn is_label_isomorphic(a: &Fsa, b: &Fsa) -> bool {
    let (na, nb) = (a.nodes(), b.nodes());
    if na.len() != nb.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let index = |nodes: &[Symbol]| -> HashMap<Symbol, usize> {
        nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect()
    };
    let (ia, ib) = (index(&na), index(&nb));
    let labels = |f: &Fsa, idx: &HashMap<Symbol, usize>| {
        let mut m: HashMap<(usize, usize), BTreeSet<Operator>> = HashMap::new();
        for e in &f.edges {
            m.entry((idx[&e.from], idx[&e.to]))
                .or_default()
                .insert(e.op);
        }
        m
    };
    let (la, lb) = (labels(a, &ia), labels(b, &ib));
    let signature = |n: usize, nodes: usize, l: &HashMap<(usize, usize), BTreeSet<Operator>>| {
        let mut out = Vec::new();
        let mut inn = Vec::new();
        let mut looped = BTreeSet::new();
        for m in 0..nodes {
            if let Some(s) = l.get(&(n, m)) {
                if m == n {
                    looped = s.clone();
                } else {
                    out.extend(s.iter().copied());
                }
            }
            if m != n {
                if let Some(s) = l.get(&(m, n)) {
                    inn.extend(s.iter().copied());
                }
            }
        }
        out.sort();
        inn.sort();
        (out, inn, looped)
    };
    let size = na.len();
    let sig_a: Vec<_> = (0..size).map(|n| signature(n, size, &la)).collect();
    let sig_b: Vec<_> = (0..size).map(|n| signature(n, size, &lb)).collect();

    // visit nodes of `a` breadth-first from the source so each new node is
    // adjacent to an already mapped one
    let mut order = Vec::with_capacity(size);
    let mut seen = vec![false; size];
    let mut queue: VecDeque<usize> = VecDeque::from([0, 1]);
    seen[0] = true;
    seen[1] = true;
    loop {
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for (m, s) in seen.iter_mut().enumerate() {
                if !*s && (la.contains_key(&(n, m)) || la.contains_key(&(m, n))) {
                    *s = true;
                    queue.push_back(m);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(m) => {
                seen[m] = true;
                queue.push_back(m);
            }
            None => break,
        }
    }

    let empty = BTreeSet::new();
    let get =
        |l: &HashMap<(usize, usize), BTreeSet<Operator>>, k| l.get(&k).unwrap_or(&empty).clone();

    type Fits<'a> = &'a dyn Fn(usize, usize, &[Option<usize>]) -> bool;

    fn search(
        depth: usize,
        order: &[usize],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        fits: Fits<'_>,
    ) -> bool {
        let Some(&u) = order.get(depth) else {
            return true;
        };
        let candidates: Vec<usize> = match u {
            0 => vec![0],
            1 => vec![1],
            _ => (2..used.len()).filter(|&c| !used[c]).collect(),
        };
        for c in candidates {
            if used[c] || !fits(u, c, map) {
                continue;
            }
            map[u] = Some(c);
            used[c] = true;
            if search(depth + 1, order, map, used, fits) {
                return true;
            }
            map[u] = None;
            used[c] = false;
        }
        false
    }

    let fits = |u: usize, c: usize, map: &[Option<usize>]| -> bool {
        if sig_a[u] != sig_b[c] {
            return false;
        }
        map.iter().enumerate().all(|(w, mapped)| match mapped {
            Some(wc) => {
                get(&la, (u, w)) == get(&lb, (c, *wc)) && get(&la, (w, u)) == get(&lb, (*wc, c))
            }
            None => true,
        })
    };
    let mut map = vec![None; size];
    let mut used = vec![false; size];
    search(0, &order, &mut map, &mut used, &fits)
}
