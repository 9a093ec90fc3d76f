//! Raw deterministic automata and canonical minimization.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::LangError;

use super::Alphabet;

/// A complete DFA: total transition table over the alphabet, states `0..states`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub states: usize,
    pub init: usize,
    /// `delta[q][a]` with `a` indexing the alphabet position.
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        init: usize,
        delta: Vec<Vec<usize>>,
        finals: Vec<bool>,
    ) -> Result<Self, LangError> {
        if states == 0 {
            return Err(LangError::Malformed(
                "automaton needs at least one state".into(),
            ));
        }
        if init >= states {
            return Err(LangError::Malformed("initial state out of range".into()));
        }
        if delta.len() != states || finals.len() != states {
            return Err(LangError::Malformed(
                "table sizes disagree with state count".into(),
            ));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(LangError::Malformed(
                    "transition row has wrong arity".into(),
                ));
            }
            if row.iter().any(|&q| q >= states) {
                return Err(LangError::Malformed(
                    "transition target out of range".into(),
                ));
            }
        }
        Ok(Dfa {
            alphabet,
            states,
            init,
            delta,
            finals,
        })
    }

    pub fn step(&self, q: usize, letter: char) -> Result<usize, LangError> {
        let a = self.alphabet.position(letter)?;
        Ok(self.delta[q][a])
    }

    /// State reached from `q` by reading `word`.
    pub fn run_from(&self, q: usize, word: &str) -> Result<usize, LangError> {
        let mut s = q;
        for c in word.chars() {
            s = self.step(s, c)?;
        }
        Ok(s)
    }

    pub fn accepts(&self, word: &str) -> Result<bool, LangError> {
        Ok(self.finals[self.run_from(self.init, word)?])
    }

    /// States reachable from the initial state, in BFS discovery order
    /// (alphabet order within each state).
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.init] = true;
        queue.push_back(self.init);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Hopcroft/Moore-style minimization followed by BFS relabeling.
    ///
    /// The result is the unique canonical automaton of the language: reachable
    /// states only, classes merged, states numbered by BFS discovery order over
    /// the alphabet order. Two inputs denote the same language iff their
    /// canonical forms are identical.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let mut idx = vec![usize::MAX; self.states];
        for (i, &q) in reach.iter().enumerate() {
            idx[q] = i;
        }
        let n = reach.len();
        let delta: Vec<Vec<usize>> = reach
            .iter()
            .map(|&q| self.delta[q].iter().map(|&t| idx[t]).collect())
            .collect();
        let finals: Vec<bool> = reach.iter().map(|&q| self.finals[q]).collect();
        let init = idx[self.init];

        // Moore partition refinement: split by (class, successor classes)
        // signatures until the class count stops growing. Each round only
        // refines, so count equality means the partition is stable.
        let mut class: Vec<usize> = finals.iter().map(|&f| usize::from(f)).collect();
        let mut class_count = 1 + class.iter().max().copied().unwrap_or(0);
        loop {
            let mut sig_index: std::collections::HashMap<(usize, Vec<usize>), usize> =
                std::collections::HashMap::new();
            let mut next = vec![0usize; n];
            for q in 0..n {
                let sig = (
                    class[q],
                    delta[q].iter().map(|&t| class[t]).collect::<Vec<_>>(),
                );
                let fresh = sig_index.len();
                next[q] = *sig_index.entry(sig).or_insert(fresh);
            }
            let next_count = sig_index.len();
            class = next;
            if next_count == class_count {
                break;
            }
            class_count = next_count;
        }

        let classes = class.iter().max().map_or(1, |&m| m + 1);
        let mut rep = vec![usize::MAX; classes];
        for q in 0..n {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        let min_delta: Vec<Vec<usize>> = (0..classes)
            .map(|c| delta[rep[c]].iter().map(|&t| class[t]).collect())
            .collect();
        let min_finals: Vec<bool> = (0..classes).map(|c| finals[rep[c]]).collect();
        let min = Dfa {
            alphabet: self.alphabet.clone(),
            states: classes,
            init: class[init],
            delta: min_delta,
            finals: min_finals,
        };
        min.relabel_bfs()
    }

    fn relabel_bfs(&self) -> Dfa {
        let order = self.reachable();
        debug_assert_eq!(order.len(), self.states);
        let mut idx = vec![usize::MAX; self.states];
        for (i, &q) in order.iter().enumerate() {
            idx[q] = i;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            states: self.states,
            init: idx[self.init],
            delta: order
                .iter()
                .map(|&q| self.delta[q].iter().map(|&t| idx[t]).collect())
                .collect(),
            finals: order.iter().map(|&q| self.finals[q]).collect(),
        }
    }

    /// Reachable part of the synchronized product, with state pairs in BFS order.
    /// Returns (pair list, delta over pair indices, init index).
    pub(crate) fn product_reachable(
        &self,
        other: &Dfa,
        start: (usize, usize),
    ) -> (Vec<(usize, usize)>, Vec<Vec<usize>>, usize) {
        debug_assert_eq!(self.alphabet, other.alphabet);
        let k = self.alphabet.len();
        let mut pairs = vec![start];
        let mut index = std::collections::HashMap::new();
        index.insert(start, 0usize);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut frontier = 0;
        while frontier < pairs.len() {
            let (p, q) = pairs[frontier];
            frontier += 1;
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let t = (self.delta[p][a], other.delta[q][a]);
                let next = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                row.push(next);
            }
            delta.push(row);
        }
        (pairs, delta, 0)
    }
}

/// Serialization shape for DFAs: `{"alphabet":"ab","states":2,"init":0,
/// "delta":[[1,0],[0,1]],"finals":[0]}` with one delta row per state and one
/// column per alphabet position.
#[derive(Debug, Serialize, Deserialize)]
pub struct DfaJson {
    pub alphabet: String,
    pub states: usize,
    pub init: usize,
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<usize>,
}

impl From<&Dfa> for DfaJson {
    fn from(d: &Dfa) -> Self {
        DfaJson {
            alphabet: d.alphabet.symbols().iter().collect(),
            states: d.states,
            init: d.init,
            delta: d.delta.clone(),
            finals: (0..d.states).filter(|&q| d.finals[q]).collect(),
        }
    }
}

impl TryFrom<DfaJson> for Dfa {
    type Error = LangError;

    fn try_from(j: DfaJson) -> Result<Self, LangError> {
        let alphabet = Alphabet::new(&j.alphabet)?;
        let mut finals = vec![false; j.states];
        for q in j.finals {
            if q >= j.states {
                return Err(LangError::Malformed("final state out of range".into()));
            }
            finals[q] = true;
        }
        Dfa::new(alphabet, j.states, j.init, j.delta, finals)
    }
}

/// GraphViz rendering of a DFA.
pub fn dfa_to_dot(d: &Dfa, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "digraph {name} {{\n  rankdir=LR;\n  start [shape=point];\n"
    ));
    for q in 0..d.states {
        let shape = if d.finals[q] {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&format!("  q{q} [shape={shape}];\n"));
    }
    out.push_str(&format!("  start -> q{};\n", d.init));
    for q in 0..d.states {
        for (a, &t) in d.delta[q].iter().enumerate() {
            out.push_str(&format!(
                "  q{q} -> q{t} [label=\"{}\"];\n",
                d.alphabet.symbols()[a]
            ));
        }
    }
    out.push_str("}\n");
    out
}
