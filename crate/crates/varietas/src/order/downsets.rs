//! Down-set lattices of finite posets and free completely distributive
//! lattices over finite generator sets.

use std::collections::HashMap;

use crate::error::StructureError;

use super::{Fdl, FinitePoset};

/// Hard cap on materialized lattice size; join/meet tables are quadratic.
const MAX_ELEMENTS: usize = 1 << 14;

/// Default bound on the number of free-CDL generators. `FCDL(4)` already has
/// 168 elements and the growth is Dedekind-like, so the bound stays small.
pub const FREE_CDL_DEFAULT_BOUND: usize = 4;

/// The bound on free-CDL generators, overridable via `VARIETAS_MAX_LATTICE`.
pub fn free_cdl_bound() -> usize {
    std::env::var("VARIETAS_MAX_LATTICE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(FREE_CDL_DEFAULT_BOUND)
}

/// A down-set lattice together with its set decoding: element `i` is the
/// down-set with bitmask `masks[i]` over the carrier of the base poset.
/// Join is union and meet is intersection, so the lattice is distributive by
/// construction.
#[derive(Debug, Clone)]
pub struct DownsetLattice {
    pub lattice: Fdl,
    pub masks: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl DownsetLattice {
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// The element holding the principal down-set of `point`. Join-primes are
    /// exactly the principal down-sets, so they can be read off the base poset.
    pub fn principal(&self, point: usize, poset: &FinitePoset) -> usize {
        let mut mask = 0u64;
        for below in 0..poset.size {
            if poset.leq[below][point] {
                mask |= 1 << below;
            }
        }
        self.index_of(mask)
            .expect("principal down-sets are down-sets")
    }
}

/// The lattice of all down-closed subsets of `poset`, ordered by inclusion.
/// Elements are sorted by (cardinality, bitmask) so the result is canonical;
/// the empty set is the bottom and the full carrier the top.
pub fn downset_lattice(poset: &FinitePoset) -> Result<DownsetLattice, StructureError> {
    let n = poset.size;
    if n > 64 {
        return Err(StructureError::LatticeTooLarge {
            limit: MAX_ELEMENTS,
        });
    }

    // Predecessor masks: a subset is down-closed iff it contains every
    // predecessor of each of its members.
    let pred: Vec<u64> = (0..n)
        .map(|x| {
            let mut m = 0u64;
            for y in 0..n {
                if poset.leq[y][x] {
                    m |= 1 << y;
                }
            }
            m
        })
        .collect();

    // Topological order so every predecessor is decided before its successors;
    // the DFS below is then exact.
    let mut topo: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while topo.len() < n {
        let next = (0..n)
            .find(|&x| !placed[x] && (0..n).all(|y| !poset.leq[y][x] || y == x || placed[y]))
            .expect("a finite poset always has a minimal element");
        placed[next] = true;
        topo.push(next);
    }

    let mut masks: Vec<u64> = Vec::new();
    let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
    while let Some((pos, current)) = stack.pop() {
        if pos == n {
            masks.push(current);
            if masks.len() > MAX_ELEMENTS {
                return Err(StructureError::LatticeTooLarge {
                    limit: MAX_ELEMENTS,
                });
            }
            continue;
        }
        let x = topo[pos];
        stack.push((pos + 1, current));
        if pred[x] & !current & !(1u64 << x) == 0 {
            stack.push((pos + 1, current | (1u64 << x)));
        }
    }

    masks.sort_by_key(|&m| (m.count_ones(), m));
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let size = masks.len();

    let leq: Vec<Vec<bool>> = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| a & !b == 0).collect())
        .collect();
    let mut join = vec![vec![0; size]; size];
    let mut meet = vec![vec![0; size]; size];
    for a in 0..size {
        for b in 0..size {
            join[a][b] = index[&(masks[a] | masks[b])];
            meet[a][b] = index[&(masks[a] & masks[b])];
        }
    }
    let bottom = index[&0];
    let top = index[&(masks.last().copied().unwrap_or(0))];
    debug_assert_eq!(masks[top].count_ones() as usize, n);

    let lattice = Fdl::from_parts_unchecked(size, leq, join, meet, bottom, top);
    Ok(DownsetLattice {
        lattice,
        masks,
        index,
    })
}

/// The free completely distributive lattice on `generators` symbols, realized
/// as the down-set lattice of the power set ordered by reverse inclusion
/// (equivalently: up-closed families of subsets under inclusion).
///
/// Generator `x` embeds as the family `{ S ⊆ Γ : x ∈ S }`; an element
/// `⋁ᵢ ⋀ⱼ xᵢⱼ` corresponds to the up-closure of the sets `{xᵢⱼ}ⱼ`. This is the
/// unique embedding satisfying the universal property, which the test suite
/// checks exhaustively at small size.
pub fn free_cdl(generators: usize) -> Result<(DownsetLattice, Vec<usize>), StructureError> {
    let bound = free_cdl_bound();
    if generators > bound {
        return Err(StructureError::GeneratorBound {
            got: generators,
            bound,
        });
    }
    let subsets = 1usize << generators;
    // Poset carrier: subsets of Γ in numeric order; S ≤ T iff S ⊇ T.
    let leq: Vec<Vec<bool>> = (0..subsets)
        .map(|s| (0..subsets).map(|t| t & !s == 0).collect())
        .collect();
    let poset = FinitePoset { size: subsets, leq };
    let ds = downset_lattice(&poset)?;
    let embedding = (0..generators)
        .map(|x| {
            let mut mask = 0u64;
            for s in 0..subsets {
                if s >> x & 1 == 1 {
                    mask |= 1 << s;
                }
            }
            ds.index_of(mask).expect("generator family is up-closed")
        })
        .collect();
    Ok((ds, embedding))
}

/// Evaluates the element of `free_cdl(gens)` with family mask `fam` under a
/// generator valuation into `target`: the join over the family's sets of the
/// meet of the generator values in each set.
pub fn eval_free_element(fam: u64, gens: usize, target: &Fdl, valuation: &[usize]) -> usize {
    target.join_all(
        (0..(1usize << gens))
            .filter(|&s| fam >> s & 1 == 1)
            .map(|s| target.meet_all((0..gens).filter(|&x| s >> x & 1 == 1).map(|x| valuation[x]))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::validate_lattice_map;

    #[test]
    fn downset_examples() {
        // 1-element poset → 2-chain
        let d = downset_lattice(&FinitePoset::chain(1)).unwrap();
        assert_eq!(d.lattice.size, 2);

        // 2-antichain → 4-element boolean lattice
        let d = downset_lattice(&FinitePoset::antichain(2)).unwrap();
        assert_eq!(d.lattice.size, 4);

        // 2-chain → 3-chain
        let d = downset_lattice(&FinitePoset::chain(2)).unwrap();
        assert_eq!(d.lattice.size, 3);
        assert_eq!(d.masks, vec![0b00, 0b01, 0b11]);
    }

    /// Oracle: a brute-force subset scan agrees with the DFS enumeration.
    #[test]
    fn downset_enumeration_matches_subset_scan() {
        let posets = vec![
            FinitePoset::chain(4),
            FinitePoset::antichain(4),
            FinitePoset::new(
                4,
                vec![
                    vec![true, true, true, true],
                    vec![false, true, false, true],
                    vec![false, false, true, true],
                    vec![false, false, false, true],
                ],
            )
            .unwrap(),
        ];
        for p in posets {
            let d = downset_lattice(&p).unwrap();
            let mut brute: Vec<u64> = (0u64..1 << p.size)
                .filter(|&m| {
                    (0..p.size).all(|x| {
                        m >> x & 1 == 0 || (0..p.size).all(|y| !p.leq[y][x] || m >> y & 1 == 1)
                    })
                })
                .collect();
            brute.sort_by_key(|&m| (m.count_ones(), m));
            assert_eq!(d.masks, brute);
        }
    }

    #[test]
    fn downset_lattice_is_valid_fdl() {
        for p in [
            FinitePoset::chain(3),
            FinitePoset::antichain(3),
            FinitePoset::new(
                3,
                vec![
                    vec![true, true, true],
                    vec![false, true, false],
                    vec![false, false, true],
                ],
            )
            .unwrap(),
        ] {
            downset_lattice(&p).unwrap().lattice.validate().unwrap();
        }
    }

    #[test]
    fn free_cdl_sizes() {
        assert_eq!(free_cdl(0).unwrap().0.lattice.size, 2);
        assert_eq!(free_cdl(1).unwrap().0.lattice.size, 3);
        assert_eq!(free_cdl(2).unwrap().0.lattice.size, 6);
        assert_eq!(free_cdl(3).unwrap().0.lattice.size, 20);
    }

    #[test]
    fn free_cdl_bound_enforced() {
        if std::env::var("VARIETAS_MAX_LATTICE").is_ok() {
            return; // bound overridden externally
        }
        assert!(free_cdl(FREE_CDL_DEFAULT_BOUND + 1).is_err());
    }

    #[test]
    fn free_cdl_one_generator_sits_mid_chain() {
        let (ds, emb) = free_cdl(1).unwrap();
        assert_eq!(ds.lattice.size, 3);
        assert_ne!(emb[0], ds.lattice.bottom);
        assert_ne!(emb[0], ds.lattice.top);
    }

    /// Universal property, exhaustively for small sizes: every valuation of
    /// the generators in a small target lattice extends to a lattice morphism
    /// (existence), the generators generate (which forces uniqueness), and for
    /// one generator uniqueness is re-checked by brute enumeration of maps.
    #[test]
    fn free_cdl_universal_property() {
        let chain3 =
            Fdl::from_leq((0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect()).unwrap();
        let targets = [Fdl::two(), Fdl::diamond(), chain3];
        for gens in 0..=2usize {
            let (ds, emb) = free_cdl(gens).unwrap();
            let n = ds.lattice.size;

            // generation: closing the embedded generators under join/meet and
            // the bounds reaches every element
            let mut reached: Vec<bool> = vec![false; n];
            reached[ds.lattice.bottom] = true;
            reached[ds.lattice.top] = true;
            for &g in &emb {
                reached[g] = true;
            }
            loop {
                let mut changed = false;
                for a in 0..n {
                    for b in 0..n {
                        if reached[a] && reached[b] {
                            for x in [ds.lattice.join(a, b), ds.lattice.meet(a, b)] {
                                if !reached[x] {
                                    reached[x] = true;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            assert!(
                reached.iter().all(|&r| r),
                "generators generate FCDL({gens})"
            );

            for target in &targets {
                let mut valuations = vec![vec![]];
                for _ in 0..gens {
                    valuations = valuations
                        .into_iter()
                        .flat_map(|v: Vec<usize>| {
                            (0..target.size).map(move |x| {
                                let mut v2 = v.clone();
                                v2.push(x);
                                v2
                            })
                        })
                        .collect();
                }
                for valuation in valuations {
                    let extension: Vec<usize> = (0..n)
                        .map(|e| eval_free_element(ds.masks[e], gens, target, &valuation))
                        .collect();
                    assert!(validate_lattice_map(&ds.lattice, target, &extension).is_ok());
                    for (x, &v) in valuation.iter().enumerate() {
                        assert_eq!(extension[emb[x]], v);
                    }
                    if gens <= 1 {
                        // brute-force uniqueness at tiny size
                        let mut count = 0u32;
                        let total = target.size.pow(n as u32);
                        for code in 0..total {
                            let mut c = code;
                            let map: Vec<usize> = (0..n)
                                .map(|_| {
                                    let digit = c % target.size;
                                    c /= target.size;
                                    digit
                                })
                                .collect();
                            if (0..gens).all(|x| map[emb[x]] == valuation[x])
                                && validate_lattice_map(&ds.lattice, target, &map).is_ok()
                            {
                                assert_eq!(map, extension);
                                count += 1;
                            }
                        }
                        assert_eq!(count, 1);
                    }
                }
            }
        }
    }
}
