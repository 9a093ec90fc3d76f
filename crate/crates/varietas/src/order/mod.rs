//! Finite posets and finite distributive lattices.
//!
//! Finite completely distributive lattices are exactly the finite distributive
//! lattices: the infinitary distributive law collapses to the binary one when
//! every index set is finite. All axioms here are checked exhaustively.

mod downsets;

pub use downsets::{
    downset_lattice, eval_free_element, free_cdl, free_cdl_bound, DownsetLattice,
    FREE_CDL_DEFAULT_BOUND,
};

use serde::{Deserialize, Serialize};

use crate::error::StructureError;

/// A finite poset as an explicit order matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePoset {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(size: usize, leq: Vec<Vec<bool>>) -> Result<Self, StructureError> {
        let p = FinitePoset { size, leq };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.size;
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return Err(StructureError::NotPartialOrder(
                "order matrix has wrong shape".into(),
            ));
        }
        for a in 0..n {
            if !self.leq[a][a] {
                return Err(StructureError::NotPartialOrder(format!(
                    "not reflexive at {a}"
                )));
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return Err(StructureError::NotPartialOrder(format!(
                        "not antisymmetric at ({a}, {b})"
                    )));
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return Err(StructureError::NotPartialOrder(format!(
                            "not transitive at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn antichain(size: usize) -> Self {
        let leq = (0..size)
            .map(|i| (0..size).map(|j| i == j).collect())
            .collect();
        FinitePoset { size, leq }
    }

    pub fn chain(size: usize) -> Self {
        let leq = (0..size)
            .map(|i| (0..size).map(|j| i <= j).collect())
            .collect();
        FinitePoset { size, leq }
    }

    /// The same carrier with the order reversed.
    pub fn reversed(&self) -> Self {
        let leq = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.leq[j][i]).collect())
            .collect();
        FinitePoset {
            size: self.size,
            leq,
        }
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Checks `map` for monotonicity as a function into `target`.
    pub fn is_monotone(&self, target: &FinitePoset, map: &[usize]) -> Result<(), StructureError> {
        for a in 0..self.size {
            for b in 0..self.size {
                if self.leq[a][b] && !target.leq[map[a]][map[b]] {
                    return Err(StructureError::NotMonotone { a, b });
                }
            }
        }
        Ok(())
    }

    /// Searches for an order isomorphism onto `other` by brute backtracking
    /// with degree-based pruning; `None` when none exists.
    pub fn isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        let n = self.size;
        let profile = |p: &FinitePoset, x: usize| -> (usize, usize) {
            let below = (0..p.size).filter(|&y| p.leq[y][x]).count();
            let above = (0..p.size).filter(|&y| p.leq[x][y]).count();
            (below, above)
        };
        let mine: Vec<_> = (0..n).map(|x| profile(self, x)).collect();
        let theirs: Vec<_> = (0..n).map(|x| profile(other, x)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn go(
            pos: usize,
            n: usize,
            this: &FinitePoset,
            other: &FinitePoset,
            mine: &[(usize, usize)],
            theirs: &[(usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if pos == n {
                return true;
            }
            for cand in 0..n {
                if used[cand] || mine[pos] != theirs[cand] {
                    continue;
                }
                let ok = (0..pos).all(|prev| {
                    this.leq[pos][prev] == other.leq[cand][map[prev]]
                        && this.leq[prev][pos] == other.leq[map[prev]][cand]
                });
                if ok {
                    map[pos] = cand;
                    used[cand] = true;
                    if go(pos + 1, n, this, other, mine, theirs, map, used) {
                        return true;
                    }
                    used[cand] = false;
                    map[pos] = usize::MAX;
                }
            }
            false
        }
        if go(0, n, self, other, &mine, &theirs, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    /// DOT rendering of the Hasse diagram (covering edges only).
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
        for i in 0..self.size {
            let label = labels.map_or_else(|| i.to_string(), |ls| ls[i].clone());
            out.push_str(&format!("  n{i} [shape=box,label=\"{label}\"];\n"));
        }
        for a in 0..self.size {
            for b in 0..self.size {
                if a != b && self.leq[a][b] {
                    let covered = (0..self.size)
                        .any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]);
                    if !covered {
                        out.push_str(&format!("  n{a} -> n{b};\n"));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A finite distributive lattice with explicit order, join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fdl {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

impl Fdl {
    /// Builds and fully validates a lattice from its order matrix, deriving
    /// join/meet tables and the bounds.
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<Self, StructureError> {
        let n = leq.len();
        let poset = FinitePoset::new(n, leq.clone())?;
        let _ = poset;
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = lub(&leq, a, b)
                    .ok_or_else(|| StructureError::NotLattice(format!("no join of {a}, {b}")))?;
                meet[a][b] = glb(&leq, a, b)
                    .ok_or_else(|| StructureError::NotLattice(format!("no meet of {a}, {b}")))?;
            }
        }
        let bottom = (0..n)
            .find(|&x| (0..n).all(|y| leq[x][y]))
            .ok_or_else(|| StructureError::NotLattice("no least element".into()))?;
        let top = (0..n)
            .find(|&x| (0..n).all(|y| leq[y][x]))
            .ok_or_else(|| StructureError::NotLattice("no greatest element".into()))?;
        let fdl = Fdl {
            size: n,
            leq,
            join,
            meet,
            bottom,
            top,
        };
        fdl.check_distributive()?;
        Ok(fdl)
    }

    /// Wraps tables that are known valid by construction; only cheap shape
    /// checks are performed. Used for lattices of sets where join is union and
    /// meet is intersection.
    pub(crate) fn from_parts_unchecked(
        size: usize,
        leq: Vec<Vec<bool>>,
        join: Vec<Vec<usize>>,
        meet: Vec<Vec<usize>>,
        bottom: usize,
        top: usize,
    ) -> Self {
        debug_assert_eq!(leq.len(), size);
        Fdl {
            size,
            leq,
            join,
            meet,
            bottom,
            top,
        }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.size;
        FinitePoset::new(n, self.leq.clone())?;
        for a in 0..n {
            for b in 0..n {
                if lub(&self.leq, a, b) != Some(self.join[a][b]) {
                    return Err(StructureError::NotLattice(format!(
                        "join table wrong at ({a}, {b})"
                    )));
                }
                if glb(&self.leq, a, b) != Some(self.meet[a][b]) {
                    return Err(StructureError::NotLattice(format!(
                        "meet table wrong at ({a}, {b})"
                    )));
                }
            }
        }
        if (0..n).any(|y| !self.leq[self.bottom][y]) || (0..n).any(|y| !self.leq[y][self.top]) {
            return Err(StructureError::NotLattice("wrong bounds".into()));
        }
        self.check_distributive()
    }

    fn check_distributive(&self) -> Result<(), StructureError> {
        let n = self.size;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Err(StructureError::NotDistributive { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// The two-element lattice `{0 < 1}`.
    pub fn two() -> Self {
        Fdl {
            size: 2,
            leq: vec![vec![true, true], vec![false, true]],
            join: vec![vec![0, 1], vec![1, 1]],
            meet: vec![vec![0, 0], vec![0, 1]],
            bottom: 0,
            top: 1,
        }
    }

    /// The one-element lattice.
    pub fn trivial() -> Self {
        Fdl {
            size: 1,
            leq: vec![vec![true]],
            join: vec![vec![0]],
            meet: vec![vec![0]],
            bottom: 0,
            top: 0,
        }
    }

    /// The diamond: `⊥ < m0, m1 < ⊤` with incomparable middles, indexed
    /// `0=⊥, 1=m0, 2=m1, 3=⊤`.
    pub fn diamond() -> Self {
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        Fdl::from_leq(leq).expect("diamond is a distributive lattice")
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Nonzero join-prime elements, in index order.
    ///
    /// In a finite distributive lattice join-prime = join-irreducible, and `c`
    /// is join-irreducible iff `c ≠ ⊥` and the join of everything strictly
    /// below `c` stays strictly below.
    pub fn join_primes(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&c| {
                c != self.bottom
                    && self.join_all((0..self.size).filter(|&x| x != c && self.le(x, c))) != c
            })
            .collect()
    }

    /// Direct check of the join-prime property; used to cross-validate
    /// [`Fdl::join_primes`] in tests.
    pub fn is_join_prime(&self, c: usize) -> bool {
        c != self.bottom
            && (0..self.size).all(|a| {
                (0..self.size)
                    .all(|b| !self.le(c, self.join(a, b)) || self.le(c, a) || self.le(c, b))
            })
    }

    /// The poset of nonzero join-primes with the order induced from the
    /// lattice, plus the carrier embedding.
    pub fn join_prime_poset(&self) -> (FinitePoset, Vec<usize>) {
        let primes = self.join_primes();
        let leq = primes
            .iter()
            .map(|&a| primes.iter().map(|&b| self.le(a, b)).collect())
            .collect();
        (
            FinitePoset {
                size: primes.len(),
                leq,
            },
            primes,
        )
    }

    /// One lattice morphism into `2` per nonzero join-prime `c`, defined by
    /// `d ↦ 1 iff c ≤ d`, in join-prime index order.
    pub fn points(&self) -> Vec<LatticeMorphism> {
        self.join_primes()
            .into_iter()
            .map(|c| LatticeMorphism {
                source: self.clone(),
                target: Fdl::two(),
                map: (0..self.size).map(|d| usize::from(self.le(c, d))).collect(),
            })
            .collect()
    }

    /// Order-isomorphism onto `other` found by backtracking; lattice structure
    /// is determined by the order, so this is a lattice isomorphism.
    pub fn isomorphism(&self, other: &Fdl) -> Option<Vec<usize>> {
        let p = FinitePoset {
            size: self.size,
            leq: self.leq.clone(),
        };
        let q = FinitePoset {
            size: other.size,
            leq: other.leq.clone(),
        };
        p.isomorphism(&q)
    }

    pub fn to_dot(&self, name: &str) -> String {
        FinitePoset {
            size: self.size,
            leq: self.leq.clone(),
        }
        .to_dot(name, None)
    }
}

fn lub(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let uppers: Vec<usize> = (0..n).filter(|&x| leq[a][x] && leq[b][x]).collect();
    let mut least = None;
    for &x in &uppers {
        if uppers.iter().all(|&y| leq[x][y]) {
            if least.is_some() {
                return None;
            }
            least = Some(x);
        }
    }
    least
}

fn glb(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let lowers: Vec<usize> = (0..n).filter(|&x| leq[x][a] && leq[x][b]).collect();
    let mut greatest = None;
    for &x in &lowers {
        if lowers.iter().all(|&y| leq[y][x]) {
            if greatest.is_some() {
                return None;
            }
            greatest = Some(x);
        }
    }
    greatest
}

/// A map between finite lattices that preserves binary joins and meets as well
/// as the bounds; between finite lattices this characterizes morphisms of
/// completely distributive lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMorphism {
    pub source: Fdl,
    pub target: Fdl,
    pub map: Vec<usize>,
}

impl LatticeMorphism {
    pub fn new(source: Fdl, target: Fdl, map: Vec<usize>) -> Result<Self, StructureError> {
        let m = LatticeMorphism {
            source,
            target,
            map,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(lattice: &Fdl) -> Self {
        LatticeMorphism {
            source: lattice.clone(),
            target: lattice.clone(),
            map: (0..lattice.size).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        validate_lattice_map(&self.source, &self.target, &self.map)
    }

    pub fn compose(&self, then: &LatticeMorphism) -> LatticeMorphism {
        LatticeMorphism {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&x| then.map[x]).collect(),
        }
    }
}

pub(crate) fn validate_lattice_map(
    source: &Fdl,
    target: &Fdl,
    map: &[usize],
) -> Result<(), StructureError> {
    if map.len() != source.size {
        return Err(StructureError::NotLatticeMorphism(
            "wrong domain size".into(),
        ));
    }
    if map.iter().any(|&x| x >= target.size) {
        return Err(StructureError::NotLatticeMorphism(
            "value out of range".into(),
        ));
    }
    if map[source.bottom] != target.bottom {
        return Err(StructureError::NotLatticeMorphism(
            "bottom not preserved".into(),
        ));
    }
    if map[source.top] != target.top {
        return Err(StructureError::NotLatticeMorphism(
            "top not preserved".into(),
        ));
    }
    for a in 0..source.size {
        for b in 0..source.size {
            if map[source.join(a, b)] != target.join(map[a], map[b]) {
                return Err(StructureError::NotLatticeMorphism(format!(
                    "join not preserved at ({a}, {b})"
                )));
            }
            if map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                return Err(StructureError::NotLatticeMorphism(format!(
                    "meet not preserved at ({a}, {b})"
                )));
            }
        }
    }
    Ok(())
}

/// Restriction of a lattice to a join/meet-closed carrier containing the
/// bounds; indices are remapped to carrier positions.
pub(crate) fn sublattice(lattice: &Fdl, carrier: &[usize]) -> Fdl {
    let index: std::collections::HashMap<usize, usize> =
        carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k = carrier.len();
    Fdl::from_parts_unchecked(
        k,
        (0..k)
            .map(|i| (0..k).map(|j| lattice.le(carrier[i], carrier[j])).collect())
            .collect(),
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| index[&lattice.join(carrier[i], carrier[j])])
                    .collect()
            })
            .collect(),
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| index[&lattice.meet(carrier[i], carrier[j])])
                    .collect()
            })
            .collect(),
        index[&lattice.bottom],
        index[&lattice.top],
    )
}

/// The unique lattice morphism `source → target` satisfying the generator
/// `constraints` (element, image), when one exists.
///
/// The constraint keys must generate `source` under join/meet and the bounds;
/// a morphism is then forced on every element by replaying the closure
/// witnesses, and the forced candidate is verified exhaustively. Returns
/// `None` if the keys do not generate, the constraints conflict, or the
/// forced candidate fails to be a morphism (in which case none exists).
pub fn forced_extension(
    source: &Fdl,
    target: &Fdl,
    constraints: &[(usize, usize)],
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; source.size];
    map[source.bottom] = target.bottom;
    map[source.top] = target.top;
    for &(g, img) in constraints {
        if map[g] != UNSET && map[g] != img {
            return None;
        }
        map[g] = img;
    }
    // closure pass: define images of joins/meets of already-defined elements
    loop {
        let defined: Vec<usize> = (0..source.size).filter(|&x| map[x] != UNSET).collect();
        let mut changed = false;
        for &a in &defined {
            for &b in &defined {
                let pairs = [
                    (source.join(a, b), target.join(map[a], map[b])),
                    (source.meet(a, b), target.meet(map[a], map[b])),
                ];
                for (elem, img) in pairs {
                    if map[elem] == UNSET {
                        map[elem] = img;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if map.contains(&UNSET) {
        return None; // constraints do not generate the source
    }
    if constraints.iter().any(|&(g, img)| map[g] != img) {
        return None;
    }
    validate_lattice_map(source, target, &map).ok().map(|_| map)
}

/// Dualizes a monotone map `f : P → Q` to the preimage morphism
/// `𝒟(Q) → 𝒟(P)` between the down-set lattices.
pub fn dualize_monotone(
    p: &FinitePoset,
    q: &FinitePoset,
    f: &[usize],
) -> Result<(DownsetLattice, DownsetLattice, LatticeMorphism), StructureError> {
    p.is_monotone(q, f)?;
    let dp = downset_lattice(p)?;
    let dq = downset_lattice(q)?;
    let map = dq
        .masks
        .iter()
        .map(|&dq_mask| {
            let mut pre: u64 = 0;
            for (x, &fx) in f.iter().enumerate() {
                if dq_mask >> fx & 1 == 1 {
                    pre |= 1 << x;
                }
            }
            dp.index_of(pre)
                .expect("preimage of a down-set is a down-set")
        })
        .collect();
    let morphism = LatticeMorphism {
        source: dq.lattice.clone(),
        target: dp.lattice.clone(),
        map,
    };
    debug_assert!(morphism.validate().is_ok());
    Ok((dq, dp, morphism))
}

/// Serialization shape for lattices; join/meet tables are optional on input
/// and rederived when absent.
#[derive(Debug, Serialize, Deserialize)]
pub struct FdlJson {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<usize>>>,
    pub bottom: usize,
    pub top: usize,
}

impl From<&Fdl> for FdlJson {
    fn from(d: &Fdl) -> Self {
        FdlJson {
            size: d.size,
            leq: d.leq.clone(),
            join: Some(d.join.clone()),
            meet: Some(d.meet.clone()),
            bottom: d.bottom,
            top: d.top,
        }
    }
}

impl TryFrom<FdlJson> for Fdl {
    type Error = StructureError;

    fn try_from(j: FdlJson) -> Result<Self, StructureError> {
        let built = Fdl::from_leq(j.leq)?;
        if built.size != j.size || built.bottom != j.bottom || built.top != j.top {
            return Err(StructureError::NotLattice(
                "declared bounds disagree with order".into(),
            ));
        }
        if let Some(join) = j.join {
            if join != built.join {
                return Err(StructureError::NotLattice(
                    "stored join table is wrong".into(),
                ));
            }
        }
        if let Some(meet) = j.meet {
            if meet != built.meet {
                return Err(StructureError::NotLattice(
                    "stored meet table is wrong".into(),
                ));
            }
        }
        Ok(built)
    }
}
