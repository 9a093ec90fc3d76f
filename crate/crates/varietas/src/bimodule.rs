//! Lattice bimodules: a monoid biacting on a finite distributive lattice
//! through join/meet-preserving translations, with an embedding of the monoid
//! that turns multiplication into the actions.
//!
//! This is the crate's central recognizer structure. All equational laws are
//! finite and checked exhaustively by [`LatticeBimodule::check_axioms`]; the
//! infinitary distribution laws reduce to binary join/meet distribution plus
//! preservation of the bounds.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::diamond::{eval_diamond, DiamondTerm};
use crate::error::{LangError, StructureError};
use crate::lang::Alphabet;
use crate::monoid::FiniteMonoid;
use crate::order::{free_cdl, validate_lattice_map, Fdl, FdlJson};

/// `(M, D, ι, ▷, ◁)` with explicit tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBimodule {
    pub monoid: FiniteMonoid,
    pub lattice: Fdl,
    /// `iota[m]` embeds the monoid element `m` into the lattice.
    pub iota: Vec<usize>,
    /// `act_left[m][d] = m ▷ d`.
    pub act_left: Vec<Vec<usize>>,
    /// `act_right[d][m] = d ◁ m`.
    pub act_right: Vec<Vec<usize>>,
}

/// A violated law together with a witness assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

/// Outcome of the exhaustive axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LatticeBimodule {
    pub fn new(
        monoid: FiniteMonoid,
        lattice: Fdl,
        iota: Vec<usize>,
        act_left: Vec<Vec<usize>>,
        act_right: Vec<Vec<usize>>,
    ) -> Result<Self, StructureError> {
        let b = LatticeBimodule {
            monoid,
            lattice,
            iota,
            act_left,
            act_right,
        };
        b.check_shapes()?;
        let report = b.check_axioms();
        if let Some(v) = report.violations.first() {
            return Err(StructureError::Malformed(format!(
                "bimodule law {} fails at {}",
                v.law, v.witness
            )));
        }
        Ok(b)
    }

    /// The trivial bimodule `(1, 1)`.
    pub fn trivial() -> Self {
        LatticeBimodule {
            monoid: FiniteMonoid::trivial(),
            lattice: Fdl::trivial(),
            iota: vec![0],
            act_left: vec![vec![0]],
            act_right: vec![vec![0]],
        }
    }

    /// The two-element group acting on the diamond lattice
    /// `⊥ < 0̄, 1̄ < ⊤`, with the evident injective embedding. The actions are
    /// the unique ones compatible with the embedding: the nontrivial group
    /// element swaps the middles and fixes the bounds.
    pub fn diamond_example() -> Self {
        let monoid = FiniteMonoid::cyclic(2);
        let lattice = Fdl::diamond();
        let iota = vec![1, 2];
        let swap = vec![0, 2, 1, 3];
        let id: Vec<usize> = (0..4).collect();
        let act_left = vec![id.clone(), swap.clone()];
        let act_right = (0..4).map(|d| vec![id[d], swap[d]]).collect();
        LatticeBimodule {
            monoid,
            lattice,
            iota,
            act_left,
            act_right,
        }
    }

    /// Structural validation: monoid and lattice axioms plus table shapes.
    /// The equational bimodule laws are checked by [`Self::check_axioms`].
    pub fn check_shapes(&self) -> Result<(), StructureError> {
        self.monoid.validate()?;
        self.lattice.validate()?;
        let (m, d) = (self.monoid.size, self.lattice.size);
        let ok = self.iota.len() == m
            && self.iota.iter().all(|&x| x < d)
            && self.act_left.len() == m
            && self
                .act_left
                .iter()
                .all(|r| r.len() == d && r.iter().all(|&x| x < d))
            && self.act_right.len() == d
            && self
                .act_right
                .iter()
                .all(|r| r.len() == m && r.iter().all(|&x| x < d));
        if ok {
            Ok(())
        } else {
            Err(StructureError::Malformed(
                "bimodule tables have wrong shape".into(),
            ))
        }
    }

    #[inline]
    pub fn left(&self, m: usize, d: usize) -> usize {
        self.act_left[m][d]
    }

    #[inline]
    pub fn right(&self, d: usize, m: usize) -> usize {
        self.act_right[d][m]
    }

    /// Exhaustively checks every equational law; returns all violations with
    /// witnesses rather than stopping at the first.
    pub fn check_axioms(&self) -> AxiomReport {
        let mut violations = Vec::new();
        let msize = self.monoid.size;
        let dsize = self.lattice.size;
        let mut fail = |law: &str, witness: String| {
            violations.push(Violation {
                law: law.into(),
                witness,
            });
        };

        for m in 0..msize {
            for n in 0..msize {
                for d in 0..dsize {
                    let mn = self.monoid.mul(m, n);
                    if self.left(mn, d) != self.left(m, self.left(n, d)) {
                        fail("assoc_left", format!("(m={m}, n={n}, d={d})"));
                    }
                    if self.right(d, mn) != self.right(self.right(d, m), n) {
                        fail("assoc_right", format!("(m={m}, n={n}, d={d})"));
                    }
                    if self.right(self.left(m, d), n) != self.left(m, self.right(d, n)) {
                        fail("compatibility", format!("(m={m}, n={n}, d={d})"));
                    }
                }
            }
        }
        let one = self.monoid.identity;
        for d in 0..dsize {
            if self.left(one, d) != d {
                fail("unit_left", format!("(d={d})"));
            }
            if self.right(d, one) != d {
                fail("unit_right", format!("(d={d})"));
            }
        }
        for m in 0..msize {
            if self.left(m, self.lattice.bottom) != self.lattice.bottom {
                fail("left_bottom", format!("(m={m})"));
            }
            if self.left(m, self.lattice.top) != self.lattice.top {
                fail("left_top", format!("(m={m})"));
            }
            if self.right(self.lattice.bottom, m) != self.lattice.bottom {
                fail("right_bottom", format!("(m={m})"));
            }
            if self.right(self.lattice.top, m) != self.lattice.top {
                fail("right_top", format!("(m={m})"));
            }
            for d in 0..dsize {
                for e in 0..dsize {
                    if self.left(m, self.lattice.join(d, e))
                        != self.lattice.join(self.left(m, d), self.left(m, e))
                    {
                        fail("left_join", format!("(m={m}, d={d}, e={e})"));
                    }
                    if self.left(m, self.lattice.meet(d, e))
                        != self.lattice.meet(self.left(m, d), self.left(m, e))
                    {
                        fail("left_meet", format!("(m={m}, d={d}, e={e})"));
                    }
                    if self.right(self.lattice.join(d, e), m)
                        != self.lattice.join(self.right(d, m), self.right(e, m))
                    {
                        fail("right_join", format!("(m={m}, d={d}, e={e})"));
                    }
                    if self.right(self.lattice.meet(d, e), m)
                        != self.lattice.meet(self.right(d, m), self.right(e, m))
                    {
                        fail("right_meet", format!("(m={m}, d={d}, e={e})"));
                    }
                }
            }
        }
        for m in 0..msize {
            for n in 0..msize {
                if self.left(m, self.iota[n]) != self.iota[self.monoid.mul(m, n)] {
                    fail("translate_left", format!("(m={m}, n={n})"));
                }
                if self.right(self.iota[m], n) != self.iota[self.monoid.mul(m, n)] {
                    fail("translate_right", format!("(m={m}, n={n})"));
                }
            }
        }
        AxiomReport { violations }
    }

    /// Componentwise product bimodule; pair `(m, n)` is encoded as
    /// `m * other.monoid.size + n` and likewise for lattice elements.
    pub fn product(&self, other: &LatticeBimodule) -> LatticeBimodule {
        let monoid = self.monoid.product(&other.monoid);
        let d1 = self.lattice.size;
        let d2 = other.lattice.size;
        let enc_d = |a: usize, b: usize| a * d2 + b;
        let n = d1 * d2;
        let mut leq = vec![vec![false; n]; n];
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a1 in 0..d1 {
            for b1 in 0..d2 {
                for a2 in 0..d1 {
                    for b2 in 0..d2 {
                        let (x, y) = (enc_d(a1, b1), enc_d(a2, b2));
                        leq[x][y] = self.lattice.le(a1, a2) && other.lattice.le(b1, b2);
                        join[x][y] = enc_d(self.lattice.join(a1, a2), other.lattice.join(b1, b2));
                        meet[x][y] = enc_d(self.lattice.meet(a1, a2), other.lattice.meet(b1, b2));
                    }
                }
            }
        }
        let lattice = Fdl::from_parts_unchecked(
            n,
            leq,
            join,
            meet,
            enc_d(self.lattice.bottom, other.lattice.bottom),
            enc_d(self.lattice.top, other.lattice.top),
        );
        let enc_m = |a: usize, b: usize| a * other.monoid.size + b;
        let iota = (0..self.monoid.size)
            .flat_map(|a| (0..other.monoid.size).map(move |b| (a, b)))
            .map(|(a, b)| enc_d(self.iota[a], other.iota[b]))
            .collect();
        let act_left = (0..monoid.size)
            .map(|m| {
                let (ma, mb) = (m / other.monoid.size, m % other.monoid.size);
                (0..n)
                    .map(|d| {
                        let (da, db) = (d / d2, d % d2);
                        enc_d(self.left(ma, da), other.left(mb, db))
                    })
                    .collect()
            })
            .collect();
        let act_right = (0..n)
            .map(|d| {
                let (da, db) = (d / d2, d % d2);
                (0..monoid.size)
                    .map(|m| {
                        let (ma, mb) = (m / other.monoid.size, m % other.monoid.size);
                        enc_d(self.right(da, ma), other.right(db, mb))
                    })
                    .collect()
            })
            .collect();
        let _ = enc_m;
        LatticeBimodule {
            monoid,
            lattice,
            iota,
            act_left,
            act_right,
        }
    }

    /// The two product projections, as homomorphisms out of `self.product(other)`.
    pub fn product_projections(&self, other: &LatticeBimodule) -> (BimoduleHom, BimoduleHom) {
        let prod = self.product(other);
        let p1 = BimoduleHom {
            source: prod.clone(),
            target: self.clone(),
            star: (0..prod.monoid.size)
                .map(|m| m / other.monoid.size)
                .collect(),
            diamond: (0..prod.lattice.size)
                .map(|d| d / other.lattice.size)
                .collect(),
        };
        let p2 = BimoduleHom {
            source: prod,
            target: other.clone(),
            star: (0..self.monoid.size * other.monoid.size)
                .map(|m| m % other.monoid.size)
                .collect(),
            diamond: (0..self.lattice.size * other.lattice.size)
                .map(|d| d % other.lattice.size)
                .collect(),
        };
        (p1, p2)
    }

    /// Restricts the monoid sort to a submonoid carrier (the lattice stays).
    pub fn sub_bimodule_on(&self, carrier: &[usize]) -> Result<LatticeBimodule, StructureError> {
        if !carrier.contains(&self.monoid.identity) {
            return Err(StructureError::Malformed(
                "carrier must contain the identity".into(),
            ));
        }
        let index: HashMap<usize, usize> =
            carrier.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let n = carrier.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = self.monoid.mul(carrier[i], carrier[j]);
                table[i][j] = *index.get(&p).ok_or_else(|| {
                    StructureError::Malformed("carrier is not a submonoid".into())
                })?;
            }
        }
        let monoid = FiniteMonoid {
            size: n,
            identity: index[&self.monoid.identity],
            table,
        };
        Ok(LatticeBimodule {
            monoid,
            lattice: self.lattice.clone(),
            iota: carrier.iter().map(|&m| self.iota[m]).collect(),
            act_left: carrier.iter().map(|&m| self.act_left[m].clone()).collect(),
            act_right: (0..self.lattice.size)
                .map(|d| carrier.iter().map(|&m| self.act_right[d][m]).collect())
                .collect(),
        })
    }

    /// Join/meet closure of the embedded monoid image, as a membership vector.
    /// The bounds are always included (they are the empty join and meet).
    pub fn star_closure(&self) -> Vec<bool> {
        let mut seeds: Vec<usize> = vec![self.lattice.bottom, self.lattice.top];
        seeds.extend_from_slice(&self.iota);
        join_meet_closure(&self.lattice, &seeds)
    }

    /// `D` is generated from `ι[M]` by joins and meets.
    pub fn is_star_generated(&self) -> bool {
        self.star_closure().iter().all(|&r| r)
    }

    /// `ι` is injective.
    pub fn is_star_embedded(&self) -> bool {
        let mut seen = vec![false; self.lattice.size];
        for &d in &self.iota {
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// The largest bimodule congruence whose lattice part is the diagonal:
    /// `m ~ m'` iff they embed equally and act equally on both sides. This is
    /// always a valid congruence, and the bimodule is reduced exactly when it
    /// is the diagonal.
    pub fn canonical_collapse(&self) -> BimoduleCongruence {
        let mut key_index: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let mut part_m = vec![0; self.monoid.size];
        for m in 0..self.monoid.size {
            let col: Vec<usize> = (0..self.lattice.size)
                .map(|d| self.act_right[d][m])
                .collect();
            let key = (self.iota[m], self.act_left[m].clone(), col);
            let fresh = key_index.len();
            part_m[m] = *key_index.entry(key).or_insert(fresh);
        }
        let c = BimoduleCongruence::new(part_m, (0..self.lattice.size).collect());
        debug_assert_eq!(self.is_congruence(&c), Ok(true));
        c
    }

    /// Reduced: every quotient that is an isomorphism on the lattice sort is
    /// an isomorphism outright; decided via [`Self::canonical_collapse`].
    pub fn is_reduced(&self) -> bool {
        let c = self.canonical_collapse();
        c.class_count_m() == self.monoid.size
    }

    /// Validates a candidate congruence: the lattice part must be a lattice
    /// congruence, and the pair must be stable under the canonical unary
    /// operations (left/right multiplication, the embedding, and the four
    /// action translations).
    pub fn is_congruence(&self, c: &BimoduleCongruence) -> Result<bool, StructureError> {
        if c.part_m.len() != self.monoid.size || c.part_d.len() != self.lattice.size {
            return Err(StructureError::NotCongruence(
                "partition sizes are wrong".into(),
            ));
        }
        let same_m = |a: usize, b: usize| c.part_m[a] == c.part_m[b];
        let same_d = |a: usize, b: usize| c.part_d[a] == c.part_d[b];
        // lattice congruence
        for d in 0..self.lattice.size {
            for d2 in d + 1..self.lattice.size {
                if !same_d(d, d2) {
                    continue;
                }
                for e in 0..self.lattice.size {
                    if !same_d(self.lattice.join(d, e), self.lattice.join(d2, e))
                        || !same_d(self.lattice.meet(d, e), self.lattice.meet(d2, e))
                    {
                        return Err(StructureError::NotCongruence(format!(
                            "lattice part not a congruence at ({d}, {d2}, {e})"
                        )));
                    }
                }
            }
        }
        // unary stability
        for m in 0..self.monoid.size {
            for m2 in m + 1..self.monoid.size {
                if !same_m(m, m2) {
                    continue;
                }
                if !same_d(self.iota[m], self.iota[m2]) {
                    return Ok(false);
                }
                for a in 0..self.monoid.size {
                    if !same_m(self.monoid.mul(a, m), self.monoid.mul(a, m2))
                        || !same_m(self.monoid.mul(m, a), self.monoid.mul(m2, a))
                    {
                        return Ok(false);
                    }
                }
                for d in 0..self.lattice.size {
                    if !same_d(self.left(m, d), self.left(m2, d))
                        || !same_d(self.right(d, m), self.right(d, m2))
                    {
                        return Ok(false);
                    }
                }
            }
        }
        for d in 0..self.lattice.size {
            for d2 in d + 1..self.lattice.size {
                if !same_d(d, d2) {
                    continue;
                }
                for m in 0..self.monoid.size {
                    if !same_d(self.left(m, d), self.left(m, d2))
                        || !same_d(self.right(d, m), self.right(d2, m))
                    {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Quotient by a validated congruence, with the projection homomorphism.
    /// Classes are numbered by least member on both sorts.
    pub fn quotient(
        &self,
        c: &BimoduleCongruence,
    ) -> Result<(LatticeBimodule, BimoduleHom), StructureError> {
        match self.is_congruence(c)? {
            true => {}
            false => {
                return Err(StructureError::NotCongruence(
                    "pair is not stable under the unary operations".into(),
                ))
            }
        }
        let c = c.clone().canonicalized();
        let km = c.class_count_m();
        let kd = c.class_count_d();

        let mut rep_m = vec![usize::MAX; km];
        for m in 0..self.monoid.size {
            if rep_m[c.part_m[m]] == usize::MAX {
                rep_m[c.part_m[m]] = m;
            }
        }
        let mut rep_d = vec![usize::MAX; kd];
        for d in 0..self.lattice.size {
            if rep_d[c.part_d[d]] == usize::MAX {
                rep_d[c.part_d[d]] = d;
            }
        }

        let mut table = vec![vec![0; km]; km];
        for i in 0..km {
            for j in 0..km {
                table[i][j] = c.part_m[self.monoid.mul(rep_m[i], rep_m[j])];
            }
        }
        let monoid = FiniteMonoid {
            size: km,
            identity: c.part_m[self.monoid.identity],
            table,
        };

        let lattice = if kd == self.lattice.size {
            self.lattice.clone()
        } else {
            let mut join = vec![vec![0; kd]; kd];
            let mut meet = vec![vec![0; kd]; kd];
            let mut leq = vec![vec![false; kd]; kd];
            for i in 0..kd {
                for j in 0..kd {
                    join[i][j] = c.part_d[self.lattice.join(rep_d[i], rep_d[j])];
                    meet[i][j] = c.part_d[self.lattice.meet(rep_d[i], rep_d[j])];
                    leq[i][j] = join[i][j] == j;
                }
            }
            let lattice = Fdl::from_parts_unchecked(
                kd,
                leq,
                join,
                meet,
                c.part_d[self.lattice.bottom],
                c.part_d[self.lattice.top],
            );
            lattice.validate()?;
            lattice
        };

        let iota = (0..km).map(|i| c.part_d[self.iota[rep_m[i]]]).collect();
        let act_left = (0..km)
            .map(|i| {
                (0..kd)
                    .map(|j| c.part_d[self.left(rep_m[i], rep_d[j])])
                    .collect()
            })
            .collect();
        let act_right = (0..kd)
            .map(|j| {
                (0..km)
                    .map(|i| c.part_d[self.right(rep_d[j], rep_m[i])])
                    .collect()
            })
            .collect();
        let target = LatticeBimodule {
            monoid,
            lattice,
            iota,
            act_left,
            act_right,
        };
        let hom = BimoduleHom {
            source: self.clone(),
            target: target.clone(),
            star: c.part_m.clone(),
            diamond: c.part_d.clone(),
        };
        debug_assert!(hom.validate().is_ok());
        Ok((target, hom))
    }

    /// The unique reduced quotient that is the identity on the lattice sort:
    /// quotient by [`Self::canonical_collapse`].
    pub fn reduce(&self) -> (LatticeBimodule, BimoduleHom) {
        let (reduced, hom) = self
            .quotient(&self.canonical_collapse())
            .expect("canonical collapse is always a congruence");
        debug_assert!(reduced.is_reduced());
        debug_assert_eq!(hom.diamond, (0..self.lattice.size).collect::<Vec<_>>());
        (reduced, hom)
    }
}

/// Fixpoint closure of `seeds` under binary join and meet.
pub(crate) fn join_meet_closure(lattice: &Fdl, seeds: &[usize]) -> Vec<bool> {
    let mut reached = vec![false; lattice.size];
    for &s in seeds {
        reached[s] = true;
    }
    loop {
        let mut changed = false;
        let current: Vec<usize> = (0..lattice.size).filter(|&x| reached[x]).collect();
        for &a in &current {
            for &b in &current {
                for x in [lattice.join(a, b), lattice.meet(a, b)] {
                    if !reached[x] {
                        reached[x] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    reached
}

/// A two-sorted homomorphism of lattice bimodules.
#[derive(Debug, Clone)]
pub struct BimoduleHom {
    pub source: LatticeBimodule,
    pub target: LatticeBimodule,
    pub star: Vec<usize>,
    pub diamond: Vec<usize>,
}

impl BimoduleHom {
    pub fn validate(&self) -> Result<(), StructureError> {
        let src = &self.source;
        let tgt = &self.target;
        if self.star.len() != src.monoid.size || self.diamond.len() != src.lattice.size {
            return Err(StructureError::Malformed(
                "hom components have wrong size".into(),
            ));
        }
        if self.star[src.monoid.identity] != tgt.monoid.identity {
            return Err(StructureError::Malformed("identity not preserved".into()));
        }
        for a in 0..src.monoid.size {
            for b in 0..src.monoid.size {
                if self.star[src.monoid.mul(a, b)] != tgt.monoid.mul(self.star[a], self.star[b]) {
                    return Err(StructureError::Malformed(format!(
                        "monoid product not preserved at ({a}, {b})"
                    )));
                }
            }
        }
        validate_lattice_map(&src.lattice, &tgt.lattice, &self.diamond)?;
        for m in 0..src.monoid.size {
            if self.diamond[src.iota[m]] != tgt.iota[self.star[m]] {
                return Err(StructureError::Malformed(format!(
                    "iota square fails at m={m}"
                )));
            }
            for d in 0..src.lattice.size {
                if self.diamond[src.left(m, d)] != tgt.left(self.star[m], self.diamond[d]) {
                    return Err(StructureError::Malformed(format!(
                        "left action square fails at (m={m}, d={d})"
                    )));
                }
                if self.diamond[src.right(d, m)] != tgt.right(self.diamond[d], self.star[m]) {
                    return Err(StructureError::Malformed(format!(
                        "right action square fails at (m={m}, d={d})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        let mut m_hit = vec![false; self.target.monoid.size];
        for &x in &self.star {
            m_hit[x] = true;
        }
        let mut d_hit = vec![false; self.target.lattice.size];
        for &x in &self.diamond {
            d_hit[x] = true;
        }
        m_hit.into_iter().all(|h| h) && d_hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut m_seen = vec![false; self.target.monoid.size];
        for &x in &self.star {
            if m_seen[x] {
                return false;
            }
            m_seen[x] = true;
        }
        let mut d_seen = vec![false; self.target.lattice.size];
        for &x in &self.diamond {
            if d_seen[x] {
                return false;
            }
            d_seen[x] = true;
        }
        true
    }

    /// Factorizes as a surjection onto the image followed by an inclusion.
    /// The middle object is the image bimodule: the monoid image with the
    /// lattice image (which is already closed under join and meet).
    pub fn image_factorization(&self) -> (BimoduleHom, BimoduleHom) {
        let mut m_carrier: Vec<usize> = Vec::new();
        for &x in &self.star {
            if !m_carrier.contains(&x) {
                m_carrier.push(x);
            }
        }
        m_carrier.sort_unstable();
        let mut d_carrier: Vec<usize> = Vec::new();
        for &x in &self.diamond {
            if !d_carrier.contains(&x) {
                d_carrier.push(x);
            }
        }
        d_carrier.sort_unstable();
        let middle = restrict_bimodule(&self.target, &m_carrier, &d_carrier);
        let m_index: HashMap<usize, usize> =
            m_carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let d_index: HashMap<usize, usize> =
            d_carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let surj = BimoduleHom {
            source: self.source.clone(),
            target: middle.clone(),
            star: self.star.iter().map(|x| m_index[x]).collect(),
            diamond: self.diamond.iter().map(|x| d_index[x]).collect(),
        };
        let inj = BimoduleHom {
            source: middle,
            target: self.target.clone(),
            star: m_carrier,
            diamond: d_carrier,
        };
        debug_assert!(surj.validate().is_ok() && inj.validate().is_ok());
        (surj, inj)
    }
}

/// Restricts a bimodule to closed carriers on both sorts (not validated).
fn restrict_bimodule(
    b: &LatticeBimodule,
    m_carrier: &[usize],
    d_carrier: &[usize],
) -> LatticeBimodule {
    let m_index: HashMap<usize, usize> =
        m_carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let d_index: HashMap<usize, usize> =
        d_carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let km = m_carrier.len();
    let kd = d_carrier.len();
    let monoid = FiniteMonoid {
        size: km,
        identity: m_index[&b.monoid.identity],
        table: (0..km)
            .map(|i| {
                (0..km)
                    .map(|j| m_index[&b.monoid.mul(m_carrier[i], m_carrier[j])])
                    .collect()
            })
            .collect(),
    };
    let lattice = Fdl::from_parts_unchecked(
        kd,
        (0..kd)
            .map(|i| {
                (0..kd)
                    .map(|j| b.lattice.le(d_carrier[i], d_carrier[j]))
                    .collect()
            })
            .collect(),
        (0..kd)
            .map(|i| {
                (0..kd)
                    .map(|j| d_index[&b.lattice.join(d_carrier[i], d_carrier[j])])
                    .collect()
            })
            .collect(),
        (0..kd)
            .map(|i| {
                (0..kd)
                    .map(|j| d_index[&b.lattice.meet(d_carrier[i], d_carrier[j])])
                    .collect()
            })
            .collect(),
        d_index[&b.lattice.bottom],
        d_index[&b.lattice.top],
    );
    LatticeBimodule {
        monoid,
        lattice,
        iota: m_carrier.iter().map(|&m| d_index[&b.iota[m]]).collect(),
        act_left: m_carrier
            .iter()
            .map(|&m| d_carrier.iter().map(|&d| d_index[&b.left(m, d)]).collect())
            .collect(),
        act_right: d_carrier
            .iter()
            .map(|&d| m_carrier.iter().map(|&m| d_index[&b.right(d, m)]).collect())
            .collect(),
    }
}

/// A bimodule congruence presented as class-index vectors on the two sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleCongruence {
    pub part_m: Vec<usize>,
    pub part_d: Vec<usize>,
}

impl BimoduleCongruence {
    pub fn new(part_m: Vec<usize>, part_d: Vec<usize>) -> Self {
        BimoduleCongruence { part_m, part_d }.canonicalized()
    }

    pub fn diagonal(b: &LatticeBimodule) -> Self {
        BimoduleCongruence {
            part_m: (0..b.monoid.size).collect(),
            part_d: (0..b.lattice.size).collect(),
        }
    }

    pub fn total(b: &LatticeBimodule) -> Self {
        BimoduleCongruence {
            part_m: vec![0; b.monoid.size],
            part_d: vec![0; b.lattice.size],
        }
    }

    pub fn is_diagonal_on_both(&self) -> bool {
        self.class_count_m() == self.part_m.len() && self.class_count_d() == self.part_d.len()
    }

    /// Renumbers classes by least member.
    pub fn canonicalized(mut self) -> Self {
        for part in [&mut self.part_m, &mut self.part_d] {
            let mut relabel: HashMap<usize, usize> = HashMap::new();
            for v in part.iter_mut() {
                let fresh = relabel.len();
                *v = *relabel.entry(*v).or_insert(fresh);
            }
        }
        self
    }

    pub fn class_count_m(&self) -> usize {
        self.part_m.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn class_count_d(&self) -> usize {
        self.part_d.iter().copied().max().map_or(0, |m| m + 1)
    }
}

/// Closes seed identifications into the smallest bimodule congruence
/// containing them, by iterating stability under the unary presentation.
pub fn congruence_closure(
    b: &LatticeBimodule,
    seed_m: &[(usize, usize)],
    seed_d: &[(usize, usize)],
) -> BimoduleCongruence {
    let mut uf_m = UnionFind::new(b.monoid.size);
    let mut uf_d = UnionFind::new(b.lattice.size);
    for &(x, y) in seed_m {
        uf_m.union(x, y);
    }
    for &(x, y) in seed_d {
        uf_d.union(x, y);
    }
    loop {
        let mut changed = false;
        // monoid congruence
        for a in 0..b.monoid.size {
            for x in 0..b.monoid.size {
                for y in x + 1..b.monoid.size {
                    if uf_m.same(x, y) {
                        changed |= uf_m.union(b.monoid.mul(a, x), b.monoid.mul(a, y));
                        changed |= uf_m.union(b.monoid.mul(x, a), b.monoid.mul(y, a));
                    }
                }
            }
        }
        // lattice congruence
        for e in 0..b.lattice.size {
            for x in 0..b.lattice.size {
                for y in x + 1..b.lattice.size {
                    if uf_d.same(x, y) {
                        changed |= uf_d.union(b.lattice.join(x, e), b.lattice.join(y, e));
                        changed |= uf_d.union(b.lattice.meet(x, e), b.lattice.meet(y, e));
                    }
                }
            }
        }
        // cross-sort stability
        for x in 0..b.monoid.size {
            for y in x + 1..b.monoid.size {
                if uf_m.same(x, y) {
                    changed |= uf_d.union(b.iota[x], b.iota[y]);
                    for d in 0..b.lattice.size {
                        changed |= uf_d.union(b.left(x, d), b.left(y, d));
                        changed |= uf_d.union(b.right(d, x), b.right(d, y));
                    }
                }
            }
        }
        for d in 0..b.lattice.size {
            for d2 in d + 1..b.lattice.size {
                if uf_d.same(d, d2) {
                    for m in 0..b.monoid.size {
                        changed |= uf_d.union(b.left(m, d), b.left(m, d2));
                        changed |= uf_d.union(b.right(d, m), b.right(d2, m));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let c = BimoduleCongruence::new(uf_m.classes(), uf_d.classes());
    debug_assert_eq!(b.is_congruence(&c), Ok(true));
    c
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }

    fn same(&mut self, x: usize, y: usize) -> bool {
        self.find(x) == self.find(y)
    }

    fn classes(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// A homomorphism out of the free bimodule on an alphabet, determined by the
/// letter images in the target. The free bimodule itself is never
/// materialized; this evaluates through it.
#[derive(Debug, Clone)]
pub struct FreeHomSpec {
    pub alphabet: Alphabet,
    pub target: LatticeBimodule,
    /// `letter_image[i]` is the monoid image of the i-th alphabet letter.
    pub letter_image: Vec<usize>,
}

impl FreeHomSpec {
    pub fn new(
        alphabet: Alphabet,
        target: LatticeBimodule,
        letter_image: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if letter_image.len() != alphabet.len()
            || letter_image.iter().any(|&m| m >= target.monoid.size)
        {
            return Err(StructureError::Malformed(
                "letter images must cover the alphabet".into(),
            ));
        }
        Ok(FreeHomSpec {
            alphabet,
            target,
            letter_image,
        })
    }

    /// Monoid component: the product of the letter images.
    pub fn eval_word(&self, word: &str) -> Result<usize, LangError> {
        let mut acc = self.target.monoid.identity;
        for ch in word.chars() {
            let a = self.alphabet.position(ch)?;
            acc = self.target.monoid.mul(acc, self.letter_image[a]);
        }
        Ok(acc)
    }

    /// Lattice component: evaluates a diamond term under `ι ∘ h`.
    pub fn eval_term(&self, term: &DiamondTerm) -> Result<usize, LangError> {
        eval_diamond(term, &self.target.lattice, |w| {
            Ok(self.target.iota[self.eval_word(w)?])
        })
    }

    /// The submonoid reachable from the identity by right-multiplying letter
    /// images; element 0 is the identity.
    pub fn reachable_submonoid(&self) -> (FiniteMonoid, Vec<usize>) {
        self.target.monoid.generated_submonoid(&self.letter_image)
    }

    /// Image factorization: restricts the target to the generated submonoid
    /// and the join/meet closure of its embedding, giving a surjective spec
    /// onto the middle bimodule and the inclusion into the original target.
    pub fn image_factorization(&self) -> (FreeHomSpec, BimoduleHom) {
        let (_, m_carrier) = self.reachable_submonoid();
        let mut seeds: Vec<usize> = vec![self.target.lattice.bottom, self.target.lattice.top];
        seeds.extend(m_carrier.iter().map(|&m| self.target.iota[m]));
        let reached = join_meet_closure(&self.target.lattice, &seeds);
        let d_carrier: Vec<usize> = (0..self.target.lattice.size)
            .filter(|&d| reached[d])
            .collect();
        let mut m_sorted = m_carrier.clone();
        m_sorted.sort_unstable();
        let middle = restrict_bimodule(&self.target, &m_sorted, &d_carrier);
        let m_index: HashMap<usize, usize> =
            m_sorted.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let spec = FreeHomSpec {
            alphabet: self.alphabet.clone(),
            target: middle.clone(),
            letter_image: self.letter_image.iter().map(|m| m_index[m]).collect(),
        };
        let inj = BimoduleHom {
            source: middle,
            target: self.target.clone(),
            star: m_sorted,
            diamond: d_carrier,
        };
        debug_assert!(inj.validate().is_ok());
        (spec, inj)
    }

    /// Whether the induced homomorphism is surjective on both sorts.
    pub fn is_surjective(&self) -> bool {
        let (sub, _) = self.reachable_submonoid();
        sub.size == self.target.monoid.size && self.target.is_star_generated()
    }
}

/// The canonical recognizer `(M, FCDL(M))` for a monoid: the free CDL over the
/// carrier of `M`, the generator embedding, and the actions induced by left
/// and right translation on generators, extended by join/meet preservation.
///
/// The result is star-generated and star-embedded, hence reduced.
pub fn recognizer_from_monoid(
    monoid: &FiniteMonoid,
    alphabet: Alphabet,
    letters: Vec<usize>,
) -> Result<FreeHomSpec, StructureError> {
    let (ds, embedding) = free_cdl(monoid.size)?;
    let n = ds.lattice.size;
    let subsets = 1usize << monoid.size;

    // translate a subset of M elementwise
    let translate = |s: usize, left: Option<usize>, right: Option<usize>| -> usize {
        let mut out = 0usize;
        for e in 0..monoid.size {
            if s >> e & 1 == 1 {
                let mut x = e;
                if let Some(l) = left {
                    x = monoid.mul(l, x);
                }
                if let Some(r) = right {
                    x = monoid.mul(x, r);
                }
                out |= 1 << x;
            }
        }
        out
    };
    // image of an up-closed family under elementwise translation, re-up-closed
    let act = |fam: u64, left: Option<usize>, right: Option<usize>| -> usize {
        let mut out: u64 = 0;
        for t in 0..subsets {
            let covers = (0..subsets).any(|s| {
                fam >> s & 1 == 1 && {
                    let moved = translate(s, left, right);
                    moved & !t == 0
                }
            });
            if covers {
                out |= 1 << t;
            }
        }
        ds.index_of(out).expect("translated family is up-closed")
    };

    let act_left: Vec<Vec<usize>> = (0..monoid.size)
        .map(|m| (0..n).map(|d| act(ds.masks[d], Some(m), None)).collect())
        .collect();
    let act_right: Vec<Vec<usize>> = (0..n)
        .map(|d| {
            (0..monoid.size)
                .map(|m| act(ds.masks[d], None, Some(m)))
                .collect()
        })
        .collect();

    let bimodule = LatticeBimodule {
        monoid: monoid.clone(),
        lattice: ds.lattice.clone(),
        iota: embedding,
        act_left,
        act_right,
    };
    FreeHomSpec::new(alphabet, bimodule, letters)
}

/// Serialization shape for bimodules.
#[derive(Debug, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub monoid: FiniteMonoid,
    pub lattice: FdlJson,
    pub iota: Vec<usize>,
    pub act_left: Vec<Vec<usize>>,
    pub act_right: Vec<Vec<usize>>,
}

impl From<&LatticeBimodule> for BimoduleJson {
    fn from(b: &LatticeBimodule) -> Self {
        BimoduleJson {
            monoid: b.monoid.clone(),
            lattice: FdlJson::from(&b.lattice),
            iota: b.iota.clone(),
            act_left: b.act_left.clone(),
            act_right: b.act_right.clone(),
        }
    }
}

impl TryFrom<BimoduleJson> for LatticeBimodule {
    type Error = StructureError;

    fn try_from(j: BimoduleJson) -> Result<Self, StructureError> {
        let lattice = Fdl::try_from(j.lattice)?;
        LatticeBimodule::new(j.monoid, lattice, j.iota, j.act_left, j.act_right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_example_is_the_paper_object() {
        let b = LatticeBimodule::diamond_example();
        assert!(b.check_axioms().passed());
        assert!(b.is_star_generated());
        assert!(b.is_star_embedded());
        assert!(b.is_reduced());
    }

    #[test]
    fn trivial_passes() {
        assert!(LatticeBimodule::trivial().check_axioms().passed());
    }

    #[test]
    fn corrupted_cell_reports_law_and_witness() {
        let mut b = LatticeBimodule::diamond_example();
        b.act_left[1][1] = 3; // 1 ▷ 0̄ should be 1̄
        let report = b.check_axioms();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.law == "translate_left"));
    }

    #[test]
    fn diamond_sub_on_zero_not_generated() {
        let b = LatticeBimodule::diamond_example();
        let sub = b.sub_bimodule_on(&[0]).unwrap();
        assert!(sub.check_axioms().passed());
        assert!(!sub.is_star_generated());
        assert!(sub.is_star_embedded());
    }

    #[test]
    fn diamond_quotient_to_trivial_lattice() {
        let b = LatticeBimodule::diamond_example();
        let c = BimoduleCongruence::new(vec![0, 1], vec![0, 0, 0, 0]);
        assert_eq!(b.is_congruence(&c), Ok(true));
        let (q, hom) = b.quotient(&c).unwrap();
        assert!(hom.validate().is_ok());
        assert!(hom.is_surjective());
        assert_eq!(q.monoid.size, 2);
        assert_eq!(q.lattice.size, 1);
        assert!(q.check_axioms().passed());
        assert!(q.is_star_generated());
        assert!(!q.is_star_embedded());
        assert!(!q.is_reduced());
        // reducing the quotient collapses the monoid to a point
        let (r, _) = q.reduce();
        assert_eq!(r.monoid.size, 1);
        assert_eq!(r.lattice.size, 1);
        assert!(r.is_reduced());
    }

    #[test]
    fn collapsing_monoid_without_lattice_is_not_a_congruence() {
        // ι-stability fails: ι(0) ≠ ι(1) in the diamond
        let b = LatticeBimodule::diamond_example();
        let c = BimoduleCongruence::new(vec![0, 0], (0..4).collect());
        assert_eq!(b.is_congruence(&c), Ok(false));
    }

    #[test]
    fn diagonal_and_total_are_congruences() {
        let b = LatticeBimodule::diamond_example();
        assert_eq!(b.is_congruence(&BimoduleCongruence::diagonal(&b)), Ok(true));
        assert_eq!(b.is_congruence(&BimoduleCongruence::total(&b)), Ok(true));
        let (q, _) = b.quotient(&BimoduleCongruence::total(&b)).unwrap();
        assert_eq!((q.monoid.size, q.lattice.size), (1, 1));
        let (q, _) = b.quotient(&BimoduleCongruence::diagonal(&b)).unwrap();
        assert_eq!(q, b);
    }

    #[test]
    fn canonical_collapse_examples() {
        let b = LatticeBimodule::diamond_example();
        assert!(b.canonical_collapse().is_diagonal_on_both());

        // (Z/2Z, 1): both elements act trivially and embed equally
        let z2_on_1 = LatticeBimodule {
            monoid: FiniteMonoid::cyclic(2),
            lattice: Fdl::trivial(),
            iota: vec![0, 0],
            act_left: vec![vec![0], vec![0]],
            act_right: vec![vec![0, 0]],
        };
        assert!(z2_on_1.check_axioms().passed());
        let c = z2_on_1.canonical_collapse();
        assert_eq!(c.class_count_m(), 1);
        assert!(!z2_on_1.is_reduced());
        let (r, hom) = z2_on_1.reduce();
        assert_eq!(r.monoid.size, 1);
        assert_eq!(hom.diamond, vec![0]);
        // idempotent
        let (r2, _) = r.reduce();
        assert_eq!(r2, r);
    }

    #[test]
    fn product_of_diamonds() {
        let b = LatticeBimodule::diamond_example();
        let p = b.product(&b);
        assert_eq!(p.monoid.size, 4);
        assert_eq!(p.lattice.size, 16);
        assert!(p.check_axioms().passed());
        let (p1, p2) = b.product_projections(&b);
        p1.validate().unwrap();
        p2.validate().unwrap();
        assert!(p1.is_surjective() && p2.is_surjective());
    }

    #[test]
    fn product_with_trivial_is_isomorphic() {
        let b = LatticeBimodule::diamond_example();
        let t = LatticeBimodule::trivial();
        let p = t.product(&b);
        assert_eq!(p.monoid.size, b.monoid.size);
        assert_eq!(p.lattice.size, b.lattice.size);
        let (_, proj) = t.product_projections(&b);
        assert!(proj.is_surjective() && proj.is_injective());
    }

    #[test]
    fn eval_hom_on_diamond() {
        let b = LatticeBimodule::diamond_example();
        let h = FreeHomSpec::new(Alphabet::new("a").unwrap(), b, vec![1]).unwrap();
        assert_eq!(h.eval_word("").unwrap(), 0);
        assert_eq!(h.eval_word("aaa").unwrap(), 1);
        assert_eq!(h.target.iota[h.eval_word("aaa").unwrap()], 2);
        // "a" ∧ "aa" = 1̄ ∧ 0̄ = ⊥
        let t = DiamondTerm::join_of_meets([vec!["a", "aa"]]);
        assert_eq!(h.eval_term(&t).unwrap(), 0);
    }

    #[test]
    fn image_factorization_of_free_spec() {
        let b = LatticeBimodule::diamond_example();
        let prod = b.product(&b);
        // a ↦ (1,1): generated submonoid {(0,0),(1,1)} ≅ Z/2Z
        let spec = FreeHomSpec::new(Alphabet::new("a").unwrap(), prod, vec![3]).unwrap();
        let (mid_spec, inj) = spec.image_factorization();
        assert_eq!(mid_spec.target.monoid.size, 2);
        assert!(mid_spec.target.check_axioms().passed());
        assert!(mid_spec.is_surjective());
        inj.validate().unwrap();
        assert!(inj.is_injective());
        // middle lattice is a diamond again
        assert_eq!(mid_spec.target.lattice.size, 4);

        // constant-to-identity spec has trivial middle monoid
        let spec = FreeHomSpec::new(
            Alphabet::new("a").unwrap(),
            LatticeBimodule::diamond_example(),
            vec![0],
        )
        .unwrap();
        let (mid, _) = spec.image_factorization();
        assert_eq!(mid.target.monoid.size, 1);
    }

    #[test]
    fn surjective_hom_factors_as_itself() {
        let b = LatticeBimodule::diamond_example();
        let (q, hom) = b.quotient(&BimoduleCongruence::total(&b)).unwrap();
        let (surj, inj) = hom.image_factorization();
        assert_eq!(surj.target, q);
        assert_eq!(inj.star, (0..q.monoid.size).collect::<Vec<_>>());
    }

    #[test]
    fn star_generated_iff_full_free_hom_surjects() {
        // Lemma: star-generated ⟺ the free spec with Σ = M surjects onto B.
        // Surjectivity is decided constructively: the image factorization's
        // middle object must be all of B.
        let candidates = vec![
            LatticeBimodule::diamond_example(),
            LatticeBimodule::diamond_example()
                .sub_bimodule_on(&[0])
                .unwrap(),
            LatticeBimodule::trivial(),
        ];
        for b in candidates {
            let letters: String = (0..b.monoid.size)
                .map(|i| (b'a' + i as u8) as char)
                .collect();
            let alphabet = Alphabet::new(&letters).unwrap();
            let spec = FreeHomSpec::new(alphabet, b.clone(), (0..b.monoid.size).collect()).unwrap();
            let (mid, _) = spec.image_factorization();
            let surjective = mid.target.monoid.size == b.monoid.size
                && mid.target.lattice.size == b.lattice.size;
            assert_eq!(b.is_star_generated(), surjective);
            assert_eq!(spec.is_surjective(), surjective);
        }
    }

    #[test]
    fn one_element_monoid_on_two_with_top_embedding_is_generated() {
        let b = LatticeBimodule {
            monoid: FiniteMonoid::trivial(),
            lattice: Fdl::two(),
            iota: vec![1],
            act_left: vec![vec![0, 1]],
            act_right: vec![vec![0], vec![1]],
        };
        assert!(b.check_axioms().passed());
        assert!(b.is_star_generated());
        assert!(b.is_star_embedded());
    }

    #[test]
    fn recognizer_from_monoid_sizes() {
        let spec = recognizer_from_monoid(
            &FiniteMonoid::cyclic(2),
            Alphabet::new("a").unwrap(),
            vec![1],
        )
        .unwrap();
        assert_eq!(spec.target.lattice.size, 6);
        assert!(spec.target.check_axioms().passed());
        assert!(spec.target.is_star_generated());
        assert!(spec.target.is_star_embedded());
        assert!(spec.target.is_reduced());

        let spec = recognizer_from_monoid(
            &FiniteMonoid::trivial(),
            Alphabet::new("a").unwrap(),
            vec![0],
        )
        .unwrap();
        assert_eq!(spec.target.lattice.size, 3);
    }

    #[test]
    fn congruence_closure_from_seed() {
        let b = LatticeBimodule::diamond_example();
        // merging the two middles forces 0̄ ∨ 1̄ = ⊤ to merge with 0̄ ∨ 0̄ = 0̄, etc.
        let c = congruence_closure(&b, &[], &[(1, 2)]);
        assert_eq!(b.is_congruence(&c), Ok(true));
        assert_eq!(c.class_count_d(), 1, "the diamond collapses entirely");
    }

    #[test]
    fn star_generation_closed_under_products_and_quotients() {
        // Products: closure holds whenever the factors generate their bounds
        // without empty joins/meets (the embedded image alone closes up).
        // With the empty-join convention — which generation uses, since
        // ⊥ = ⋁∅ — there is a boundary case below.
        let diamond = LatticeBimodule::diamond_example();
        let strictly_generated =
            |b: &LatticeBimodule| join_meet_closure(&b.lattice, &b.iota).iter().all(|&r| r);
        assert!(strictly_generated(&diamond));
        assert!(diamond.product(&diamond).is_star_generated());
        let triple = diamond.product(&diamond);
        assert!(strictly_generated(&triple));

        // Boundary: ι hits only the top of the 2-chain, so ⊥ needs the empty
        // join, and the pair (0̄, ⊥) of the product is not a join of meets of
        // embedded pairs. The product of star-generated bimodules can fail to
        // be star-generated when a factor needs empty index sets.
        let two_top = LatticeBimodule {
            monoid: FiniteMonoid::trivial(),
            lattice: Fdl::two(),
            iota: vec![1],
            act_left: vec![vec![0, 1]],
            act_right: vec![vec![0], vec![1]],
        };
        assert!(two_top.is_star_generated());
        assert!(!strictly_generated(&two_top));
        assert!(!diamond.product(&two_top).is_star_generated());

        // Quotients of star-generated bimodules stay star-generated,
        // unconditionally.
        let prod = diamond.product(&diamond);
        for seed in [(0usize, 3usize), (1, 2), (0, 15)] {
            let c = congruence_closure(&prod, &[], &[seed]);
            let (q, _) = prod.quotient(&c).unwrap();
            assert!(q.is_star_generated());
        }
    }

    #[test]
    fn iota_kernel_is_a_monoid_congruence() {
        // the relation ι(m) = ι(m') is a monoid congruence on every instance
        let mut instances = vec![
            LatticeBimodule::diamond_example(),
            LatticeBimodule::trivial(),
            LatticeBimodule::diamond_example().product(&LatticeBimodule::diamond_example()),
        ];
        instances.push({
            let c = BimoduleCongruence::new(vec![0, 1], vec![0, 0, 0, 0]);
            LatticeBimodule::diamond_example().quotient(&c).unwrap().0
        });
        for b in &instances {
            let classes: Vec<usize> = b.iota.clone();
            for m1 in 0..b.monoid.size {
                for m2 in 0..b.monoid.size {
                    if classes[m1] != classes[m2] {
                        continue;
                    }
                    for n in 0..b.monoid.size {
                        assert_eq!(
                            classes[b.monoid.mul(m1, n)],
                            classes[b.monoid.mul(m2, n)],
                            "right multiplication breaks the iota kernel"
                        );
                        assert_eq!(
                            classes[b.monoid.mul(n, m1)],
                            classes[b.monoid.mul(n, m2)],
                            "left multiplication breaks the iota kernel"
                        );
                    }
                }
            }
        }
    }

    /// Homomorphism theorem on quotients: a factoring exists exactly when the
    /// kernels nest, and it is produced by mapping classes to classes.
    #[test]
    fn homomorphism_theorem_on_quotient_pairs() {
        let b = LatticeBimodule::diamond_example().product(&LatticeBimodule::diamond_example());
        let fine = congruence_closure(&b, &[(0, 3)], &[]);
        let coarse = congruence_closure(&b, &[(0, 3)], &[(1, 2)]);
        // kernels nest: every fine class sits inside a coarse class
        let nested = (0..b.monoid.size).all(|m| {
            (0..b.monoid.size).all(|m2| {
                fine.part_m[m] != fine.part_m[m2] || coarse.part_m[m] == coarse.part_m[m2]
            })
        }) && (0..b.lattice.size).all(|d| {
            (0..b.lattice.size).all(|d2| {
                fine.part_d[d] != fine.part_d[d2] || coarse.part_d[d] == coarse.part_d[d2]
            })
        });
        assert!(nested);
        let (q_fine, e_fine) = b.quotient(&fine).unwrap();
        let (q_coarse, e_coarse) = b.quotient(&coarse).unwrap();
        // e_coarse ≤ e_fine: build the factoring hom class-by-class
        let mut star = vec![usize::MAX; q_fine.monoid.size];
        for m in 0..b.monoid.size {
            star[e_fine.star[m]] = e_coarse.star[m];
        }
        let mut diamond = vec![usize::MAX; q_fine.lattice.size];
        for d in 0..b.lattice.size {
            diamond[e_fine.diamond[d]] = e_coarse.diamond[d];
        }
        let factoring = BimoduleHom {
            source: q_fine,
            target: q_coarse,
            star,
            diamond,
        };
        factoring.validate().unwrap();
        assert!(factoring.is_surjective());
    }

    #[test]
    fn bimodule_json_round_trip() {
        let b = LatticeBimodule::diamond_example();
        let json = serde_json::to_string(&BimoduleJson::from(&b)).unwrap();
        let back: LatticeBimodule = serde_json::from_str::<BimoduleJson>(&json)
            .unwrap()
            .try_into()
            .unwrap();
        assert_eq!(back, b);
    }
}
