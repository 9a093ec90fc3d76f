//! Finite monoids given by explicit multiplication tables.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::StructureError;
use crate::lang::RegularLanguage;

/// A finite monoid on the elements `0..size`, with an explicit product table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteMonoid {
    pub size: usize,
    pub identity: usize,
    /// `table[a][b]` is the product `a · b`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    /// Builds a monoid after exhaustively checking associativity and the unit laws.
    pub fn new(
        size: usize,
        identity: usize,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, StructureError> {
        let m = FiniteMonoid {
            size,
            identity,
            table,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        if self.size == 0 {
            return Err(StructureError::Malformed("monoid must be non-empty".into()));
        }
        if self.identity >= self.size {
            return Err(StructureError::Malformed(
                "identity index out of range".into(),
            ));
        }
        if self.table.len() != self.size || self.table.iter().any(|r| r.len() != self.size) {
            return Err(StructureError::Malformed(
                "product table has wrong shape".into(),
            ));
        }
        for row in &self.table {
            for &x in row {
                if x >= self.size {
                    return Err(StructureError::Malformed(
                        "product table entry out of range".into(),
                    ));
                }
            }
        }
        for a in 0..self.size {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                return Err(StructureError::UnitLaw { element: a });
            }
        }
        for a in 0..self.size {
            for b in 0..self.size {
                for c in 0..self.size {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(StructureError::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            size: 1,
            identity: 0,
            table: vec![vec![0]],
        }
    }

    /// The additive group of integers modulo `n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteMonoid {
            size: n,
            identity: 0,
            table,
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Product of a word of elements, left to right; the empty word gives the identity.
    pub fn mul_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    /// Direct product monoid; the pair `(a, b)` is encoded as `a * other.size + b`.
    pub fn product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let n = self.size * other.size;
        let enc = |a: usize, b: usize| a * other.size + b;
        let mut table = vec![vec![0; n]; n];
        for a1 in 0..self.size {
            for b1 in 0..other.size {
                for a2 in 0..self.size {
                    for b2 in 0..other.size {
                        table[enc(a1, b1)][enc(a2, b2)] = enc(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        FiniteMonoid {
            size: n,
            identity: enc(self.identity, other.identity),
            table,
        }
    }

    /// The submonoid generated by `gens`, as (elements in discovery order, inclusion map).
    ///
    /// The returned monoid's element `i` corresponds to element `carrier[i]` of `self`;
    /// the identity is always discovered first.
    pub fn generated_submonoid(&self, gens: &[usize]) -> (FiniteMonoid, Vec<usize>) {
        let mut carrier = vec![self.identity];
        let mut index: HashMap<usize, usize> = HashMap::new();
        index.insert(self.identity, 0);
        let mut frontier = 0;
        while frontier < carrier.len() {
            let x = carrier[frontier];
            frontier += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    e.insert(carrier.len());
                    carrier.push(y);
                }
            }
        }
        let n = carrier.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = index[&self.mul(carrier[i], carrier[j])];
            }
        }
        (
            FiniteMonoid {
                size: n,
                identity: 0,
                table,
            },
            carrier,
        )
    }
}

/// State transformation induced by a word: `map[q]` is the state reached from `q`.
pub type Transform = Vec<usize>;

/// The transition monoid of a canonical regular language, together with the map
/// sending each alphabet letter to its element and one representative word per
/// element (shortest, ties broken by alphabet order).
///
/// For a minimal DFA this is the syntactic monoid of the language. The product
/// convention is `a · b` = "apply `a` first, then `b`", so the letter map extends
/// to words by concatenation.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    pub monoid: FiniteMonoid,
    pub letter_map: Vec<usize>,
    pub transforms: Vec<Transform>,
    pub representatives: Vec<String>,
}

pub fn transition_monoid(lang: &RegularLanguage) -> TransitionMonoid {
    let dfa = lang.dfa();
    let n = dfa.states;
    let k = dfa.alphabet.len();
    let id: Transform = (0..n).collect();
    let letter_tf: Vec<Transform> = (0..k)
        .map(|a| (0..n).map(|q| dfa.delta[q][a]).collect())
        .collect();

    let mut elems: Vec<Transform> = vec![id.clone()];
    let mut reps: Vec<String> = vec![String::new()];
    let mut index: HashMap<Transform, usize> = HashMap::new();
    index.insert(id, 0);
    let mut frontier = 0;
    while frontier < elems.len() {
        let t = elems[frontier].clone();
        let rep = reps[frontier].clone();
        frontier += 1;
        for (a, tf) in letter_tf.iter().enumerate() {
            let composed: Transform = t.iter().map(|&q| tf[q]).collect();
            if !index.contains_key(&composed) {
                index.insert(composed.clone(), elems.len());
                elems.push(composed);
                let mut w = rep.clone();
                w.push(dfa.alphabet.symbols()[a]);
                reps.push(w);
            }
        }
    }

    let m = elems.len();
    let mut table = vec![vec![0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let composed: Transform = elems[i].iter().map(|&q| elems[j][q]).collect();
            table[i][j] = index[&composed];
        }
    }
    let letter_map = letter_tf.iter().map(|tf| index[tf]).collect();
    TransitionMonoid {
        monoid: FiniteMonoid {
            size: m,
            identity: 0,
            table,
        },
        letter_map,
        transforms: elems,
        representatives: reps,
    }
}
