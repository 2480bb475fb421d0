//! Verdict reports, as text or JSON.

use pdaverify::protocol::{
    bracketed, composition_order, reduce_traced, CancelTable, Edge, Operator,
};
use pdaverify::sim::SimStats;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    #[serde(flatten)]
    pub sim: Option<SimStats>,
    /// Node pairs related by the closure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_pairs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackWitness {
    /// Edges in the order they are traversed.
    pub path: Vec<String>,
    /// The path's word, last-applied operator first.
    pub word: String,
    pub bracketed: String,
    /// The word after each cancellation, ending with `ε`.
    pub reduction: Vec<String>,
}

impl AttackWitness {
    pub fn new(path: &[Edge], ct: &CancelTable) -> AttackWitness {
        let word: Vec<Operator> = path.iter().map(|e| e.op).collect();
        let r = reduce_traced(&word, ct);
        let mut alive = vec![true; word.len()];
        let mut reduction = Vec::with_capacity(r.pairs.len());
        for &(j, i) in &r.pairs {
            alive[j] = false;
            alive[i] = false;
            let left: Vec<Operator> = word
                .iter()
                .zip(&alive)
                .filter(|(_, &a)| a)
                .map(|(o, _)| *o)
                .collect();
            reduction.push(if left.is_empty() {
                "ε".to_owned()
            } else {
                composition_order(&left)
            });
        }
        AttackWitness {
            path: path.iter().map(|e| e.to_string()).collect(),
            word: composition_order(&word),
            bracketed: bracketed(&word, &r),
            reduction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub methods_agree: Option<bool>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AttackWitness>,
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.verdict);
        if let Some(agree) = self.methods_agree {
            out += &format!("methods agree: {}\n", if agree { "yes" } else { "no" });
        }
        if let Some(s) = self.stats.sim {
            out += &format!(
                "configs: {}\nsteps: {}\nsummaries: {}\n",
                s.configs, s.steps, s.summaries
            );
        }
        if let Some(n) = self.stats.closure_pairs {
            out += &format!("closure pairs: {n}\n");
        }
        if let Some(w) = &self.witness {
            out += "attack path:\n";
            for e in &w.path {
                out += &format!("  {e}\n");
            }
            out += &format!("word: {}\n", w.word);
            out += &format!("cancelled pairs: {}\n", w.bracketed);
            out += "reduction:\n";
            out += &format!("  {}\n", w.word);
            for step in &w.reduction {
                out += &format!("  = {step}\n");
            }
        }
        out
    }
}
