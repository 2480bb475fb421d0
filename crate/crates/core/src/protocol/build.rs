use super::fsa::Fsa;
use super::operator::{Operator, Protocol, User};

/// Builds the interaction automaton of a two-step protocol with X as the
/// initiator, Y as its intended partner and Z as the saboteur.
///
/// Node `0` is the source and `1` the target. The automaton has
/// - a path `0 -> 1` spelling `alpha1(X, Y)`,
/// - a self-loop on `1` for each of Z's 11 operators,
/// - for each responder `B` in {X, Y}, a trie rooted at `1` over the words
///   `alpha2(A, B)` for every other user `A`, each word closing back to `1`.
///
/// Fresh nodes are numbered from 2 in construction order. All words are in
/// application order, the order a path spells them.
pub fn build_fsa(p: &Protocol) -> Fsa {
    let mut b = Builder {
        fsa: Fsa::new("0", "1").expect("fixed names are valid"),
        next: 2,
    };
    let initial = p
        .alpha1
        .instantiate(User::X, User::Y)
        .expect("X and Y are distinct");
    b.path("0", &initial, "1");
    for op in Operator::SABOTEUR_LOOPS {
        b.edge("1", op, "1");
    }
    for responder in [User::X, User::Y] {
        let mut trie = Trie::default();
        for initiator in User::ALL.into_iter().filter(|&a| a != responder) {
            let word = p
                .alpha2
                .instantiate(initiator, responder)
                .expect("filtered to distinct users");
            trie.insert(&word);
        }
        b.emit_trie(&trie, "1");
    }
    b.fsa
}

struct Builder {
    fsa: Fsa,
    next: usize,
}

impl Builder {
    fn fresh(&mut self) -> String {
        let n = self.next.to_string();
        self.next += 1;
        n
    }

    fn edge(&mut self, from: &str, op: Operator, to: &str) {
        self.fsa
            .add_edge(from, op, to)
            .expect("numeric node names are valid");
    }

    fn path(&mut self, from: &str, word: &[Operator], to: &str) {
        let mut at = from.to_owned();
        for (i, &op) in word.iter().enumerate() {
            let next = if i + 1 == word.len() {
                to.to_owned()
            } else {
                self.fresh()
            };
            self.edge(&at, op, &next);
            at = next;
        }
    }

    /// Depth-first, children in insertion order; an edge is emitted before
    /// the subtree below it.
    fn emit_trie(&mut self, trie: &Trie, at: &str) {
        for (op, child) in &trie.children {
            if child.closes {
                self.edge(at, *op, "1");
            }
            if !child.children.is_empty() {
                let node = self.fresh();
                self.edge(at, *op, &node);
                self.emit_trie(child, &node);
            }
        }
    }
}

/// Word prefixes sharing nodes; `closes` marks a word ending here.
#[derive(Default)]
struct Trie {
    children: Vec<(Operator, Trie)>,
    closes: bool,
}

impl Trie {
    fn insert(&mut self, word: &[Operator]) {
        let Some((&first, rest)) = word.split_first() else {
            return;
        };
        let idx = match self.children.iter().position(|(o, _)| *o == first) {
            Some(i) => i,
            None => {
                self.children.push((first, Trie::default()));
                self.children.len() - 1
            }
        };
        let child = &mut self.children[idx].1;
        if rest.is_empty() {
            child.closes = true;
        } else {
            child.insert(rest);
        }
    }
}
