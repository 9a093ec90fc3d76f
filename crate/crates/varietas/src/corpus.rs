//! Instance generators for the verification suites: exhaustive enumerations
//! of small posets, lattices, monoids and bimodules, plus seeded random
//! languages and bimodules built through validity-preserving constructions.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bimodule::{
    congruence_closure, recognizer_from_monoid, BimoduleCongruence, LatticeBimodule,
};
use crate::lang::{Alphabet, RegularLanguage};
use crate::monoid::{transition_monoid, FiniteMonoid};
use crate::order::{validate_lattice_map, Fdl, FinitePoset};
use crate::recognition::minimal_recognizer;
use crate::varieties::derivative_closure;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All posets on `n` labeled points whose order is upper-triangular
/// (`i ≤ j` only for `i ≤ j` as numbers). Every poset has a linear extension,
/// so every isomorphism class appears.
pub fn posets_up_to_iso(n: usize) -> Vec<FinitePoset> {
    assert!(n <= 6, "poset enumeration is meant for tiny sizes");
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << cells.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in cells.iter().enumerate() {
            if bits >> k & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive =
            (0..n).all(|a| (0..n).all(|b| !leq[a][b] || (0..n).all(|c| !leq[b][c] || leq[a][c])));
        if transitive {
            out.push(FinitePoset { size: n, leq });
        }
    }
    out
}

/// All labeled distributive lattices with exactly `n` elements.
pub fn labeled_lattices(n: usize) -> Vec<Fdl> {
    assert!(n <= 4, "lattice enumeration is meant for tiny sizes");
    if n == 0 {
        return Vec::new();
    }
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << cells.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in cells.iter().enumerate() {
            if bits >> k & 1 == 1 {
                leq[i][j] = true;
            }
        }
        // cheap pre-filters before the full lattice validation
        let antisymmetric = (0..n).all(|a| (a + 1..n).all(|b| !(leq[a][b] && leq[b][a])));
        if !antisymmetric {
            continue;
        }
        let transitive =
            (0..n).all(|a| (0..n).all(|b| !leq[a][b] || (0..n).all(|c| !leq[b][c] || leq[a][c])));
        if !transitive {
            continue;
        }
        if let Ok(fdl) = Fdl::from_leq(leq) {
            out.push(fdl);
        }
    }
    out
}

/// All labeled monoids with at most `max` elements (`max ≤ 3`).
pub fn labeled_monoids(max: usize) -> Vec<FiniteMonoid> {
    assert!(max <= 3);
    let mut out = vec![FiniteMonoid::trivial()];
    for n in 2..=max {
        let free_cells: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let total = n.pow((n * n) as u32);
        for identity in 0..n {
            for code in 0..total {
                let mut c = code;
                let mut table = vec![vec![0usize; n]; n];
                for &(i, j) in &free_cells {
                    table[i][j] = c % n;
                    c /= n;
                }
                if let Ok(m) = FiniteMonoid::new(n, identity, table) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Lattice endomorphisms preserving binary joins/meets and the bounds.
pub fn lattice_endomorphisms(d: &Fdl) -> Vec<Vec<usize>> {
    let n = d.size;
    let total = n.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let map: Vec<usize> = (0..n)
            .map(|_| {
                let v = c % n;
                c /= n;
                v
            })
            .collect();
        if validate_lattice_map(d, d, &map).is_ok() {
            out.push(map);
        }
    }
    out
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    // (f then g)(x) = g(f(x))
    f.iter().map(|&x| g[x]).collect()
}

/// Every valid lattice bimodule with the given monoid (|M| ≤ 2) and lattice.
///
/// A left action is a monoid homomorphism into the endomorphisms, a right
/// action an anti-homomorphism, the two must commute, and the embedding is
/// forced from its value at the identity by the translation laws. The final
/// exhaustive axiom check is kept as a safety net.
pub fn bimodules_over(monoid: &FiniteMonoid, lattice: &Fdl) -> Vec<LatticeBimodule> {
    assert!(monoid.size <= 2);
    let endos = lattice_endomorphisms(lattice);
    let identity_map: Vec<usize> = (0..lattice.size).collect();
    let mut out = Vec::new();

    if monoid.size == 1 {
        for d0 in 0..lattice.size {
            let b = LatticeBimodule {
                monoid: monoid.clone(),
                lattice: lattice.clone(),
                iota: vec![d0],
                act_left: vec![identity_map.clone()],
                act_right: (0..lattice.size).map(|d| vec![d]).collect(),
            };
            if b.check_axioms().passed() {
                out.push(b);
            }
        }
        return out;
    }

    let e = monoid.identity;
    let x = 1 - e;
    let x_squared = monoid.mul(x, x);
    for phi in &endos {
        let phi2 = compose(phi, phi);
        let phi_ok = if x_squared == e {
            phi2 == identity_map
        } else {
            phi2 == *phi
        };
        if !phi_ok {
            continue;
        }
        for psi in &endos {
            let psi2 = compose(psi, psi);
            let psi_ok = if x_squared == e {
                psi2 == identity_map
            } else {
                psi2 == *psi
            };
            if !psi_ok || compose(phi, psi) != compose(psi, phi) {
                continue;
            }
            for d0 in 0..lattice.size {
                if phi[d0] != psi[d0] {
                    continue;
                }
                let d1 = phi[d0];
                let dxx = if x_squared == e { d0 } else { d1 };
                if phi[d1] != dxx || psi[d1] != dxx {
                    continue;
                }
                let mut iota = vec![0; 2];
                iota[e] = d0;
                iota[x] = d1;
                let mut act_left = vec![identity_map.clone(); 2];
                act_left[x] = phi.clone();
                let act_right = (0..lattice.size)
                    .map(|d| {
                        let mut row = vec![0; 2];
                        row[e] = d;
                        row[x] = psi[d];
                        row
                    })
                    .collect();
                let b = LatticeBimodule {
                    monoid: monoid.clone(),
                    lattice: lattice.clone(),
                    iota,
                    act_left,
                    act_right,
                };
                if b.check_axioms().passed() {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// The exhaustive corpus: every valid bimodule with `|M| ≤ 2` and `|D| ≤ 4`.
pub fn exhaustive_bimodules() -> Vec<LatticeBimodule> {
    let mut lattices = Vec::new();
    for n in 1..=4 {
        lattices.extend(labeled_lattices(n));
    }
    let monoids: Vec<FiniteMonoid> = labeled_monoids(2)
        .into_iter()
        .filter(|m| m.size <= 2)
        .collect();
    let mut out = Vec::new();
    for d in &lattices {
        for m in &monoids {
            out.extend(bimodules_over(m, d));
        }
    }
    out
}

/// A random pattern in the minimal regex dialect, biased toward structured
/// expressions (concatenations under stars) so sampled languages are not
/// mostly trivial.
pub fn random_regex(rng: &mut ChaCha8Rng, alphabet: &str, depth: usize) -> String {
    let letters: Vec<char> = alphabet.chars().collect();
    if depth == 0 || rng.gen_bool(0.2) {
        let roll = rng.gen_range(0..12);
        if roll < 11 {
            letters[rng.gen_range(0..letters.len())].to_string()
        } else {
            "ε".to_string()
        }
    } else {
        match rng.gen_range(0..7) {
            0..=2 => format!(
                "{}{}",
                random_regex(rng, alphabet, depth - 1),
                random_regex(rng, alphabet, depth - 1)
            ),
            3 | 4 => format!(
                "({}|{})",
                random_regex(rng, alphabet, depth - 1),
                random_regex(rng, alphabet, depth - 1)
            ),
            _ => format!("({})*", random_regex(rng, alphabet, depth - 1)),
        }
    }
}

/// Constraints a sampled language must satisfy so every downstream
/// construction stays materializable: the minimal automaton size, the
/// syntactic monoid size (must stay within the free-CDL generator bound when
/// the canonical monoid recognizer is built), and the derivative closure size
/// (the dual lattice is exponential in it).
#[derive(Debug, Clone, Copy)]
pub struct LanguageBudget {
    pub max_states: usize,
    pub max_monoid: usize,
    pub max_closure: usize,
}

impl Default for LanguageBudget {
    fn default() -> Self {
        LanguageBudget {
            max_states: 5,
            max_monoid: 4,
            max_closure: 10,
        }
    }
}

impl LanguageBudget {
    /// For constructions that never materialize a free CDL over the monoid:
    /// only automaton and closure sizes matter.
    pub fn for_duality() -> Self {
        LanguageBudget {
            max_states: 5,
            max_monoid: 120,
            max_closure: 12,
        }
    }
}

/// Rejection-samples a random regular language over `alphabet` within the
/// budget. Panics if the budget is unreachable after many attempts.
pub fn sample_language(
    rng: &mut ChaCha8Rng,
    alphabet: &str,
    budget: LanguageBudget,
) -> RegularLanguage {
    let sigma = Alphabet::new(alphabet).expect("valid alphabet");
    for _ in 0..10_000 {
        let depth = rng.gen_range(2..5);
        let pattern = random_regex(rng, alphabet, depth);
        let Ok(lang) = RegularLanguage::from_regex_over(&pattern, sigma.clone()) else {
            continue;
        };
        if lang.state_count() > budget.max_states {
            continue;
        }
        if transition_monoid(&lang).monoid.size > budget.max_monoid {
            continue;
        }
        if derivative_closure(&lang).variety.len() > budget.max_closure {
            continue;
        }
        return lang;
    }
    panic!("language budget unreachable for alphabet {alphabet:?}");
}

/// A pool of valid bimodules produced by validity-preserving constructions:
/// canonical monoid recognizers, minimal recognizers of sampled languages,
/// products, quotients by random congruences, and submodules on generated
/// monoid carriers.
pub fn random_bimodule_pool(rng: &mut ChaCha8Rng, count: usize) -> Vec<LatticeBimodule> {
    let mut pool: Vec<LatticeBimodule> = vec![
        LatticeBimodule::trivial(),
        LatticeBimodule::diamond_example(),
    ];
    let alphabets = ["a", "ab"];
    while pool.len() < count {
        let choice = rng.gen_range(0..5);
        let next = match choice {
            0 => {
                let alphabet = alphabets[rng.gen_range(0..alphabets.len())];
                let lang = sample_language(rng, alphabet, LanguageBudget::default());
                let tm = transition_monoid(&lang);
                recognizer_from_monoid(&tm.monoid, lang.alphabet().clone(), tm.letter_map.clone())
                    .ok()
                    .map(|spec| spec.target)
            }
            1 => {
                let alphabet = alphabets[rng.gen_range(0..alphabets.len())];
                let budget = LanguageBudget {
                    max_closure: 8,
                    ..Default::default()
                };
                let lang = sample_language(rng, alphabet, budget);
                minimal_recognizer(&lang).ok().map(|(b, _)| b)
            }
            2 => {
                let a = &pool[rng.gen_range(0..pool.len())];
                let b = &pool[rng.gen_range(0..pool.len())];
                if a.monoid.size * b.monoid.size <= 8 && a.lattice.size * b.lattice.size <= 40 {
                    Some(a.product(b))
                } else {
                    None
                }
            }
            3 => {
                let b = &pool[rng.gen_range(0..pool.len())];
                let c = random_congruence(rng, b);
                b.quotient(&c).ok().map(|(q, _)| q)
            }
            _ => {
                let b = &pool[rng.gen_range(0..pool.len())];
                let gens: Vec<usize> = (0..b.monoid.size).filter(|_| rng.gen_bool(0.5)).collect();
                let (_, carrier) = b.monoid.generated_submonoid(&gens);
                let mut sorted = carrier;
                sorted.sort_unstable();
                b.sub_bimodule_on(&sorted).ok()
            }
        };
        if let Some(b) = next {
            if b.monoid.size <= 8 && b.lattice.size <= 64 && b.check_axioms().passed() {
                pool.push(b);
            }
        }
    }
    pool
}

/// A random valid congruence: the closure of a few random identifications.
pub fn random_congruence(rng: &mut ChaCha8Rng, b: &LatticeBimodule) -> BimoduleCongruence {
    let mut seed_m = Vec::new();
    let mut seed_d = Vec::new();
    for _ in 0..rng.gen_range(0..2) {
        seed_m.push((
            rng.gen_range(0..b.monoid.size),
            rng.gen_range(0..b.monoid.size),
        ));
    }
    for _ in 0..rng.gen_range(0..2) {
        seed_d.push((
            rng.gen_range(0..b.lattice.size),
            rng.gen_range(0..b.lattice.size),
        ));
    }
    congruence_closure(b, &seed_m, &seed_d)
}

/// All set partitions of `{0..n}` as class-index vectors (Bell-number many).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn go(pos: usize, n: usize, used: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == n {
            out.push(current.clone());
            return;
        }
        for class in 0..=used {
            current[pos] = class;
            let next_used = used.max(class + 1);
            go(pos + 1, n, next_used, current, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    go(0, n, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        // numbers of transitive upper-triangular relations; covers every
        // isomorphism class (with repetitions)
        assert_eq!(posets_up_to_iso(1).len(), 1);
        assert_eq!(posets_up_to_iso(2).len(), 2);
        for p in posets_up_to_iso(4) {
            p.validate().unwrap();
        }
    }

    #[test]
    fn lattice_enumeration_finds_chains_and_diamond() {
        assert_eq!(labeled_lattices(1).len(), 1);
        assert_eq!(labeled_lattices(2).len(), 2, "two labelings of the 2-chain");
        let four = labeled_lattices(4);
        // 4! chain labelings + 4·3 diamond labelings
        assert_eq!(four.len(), 36);
        assert!(four
            .iter()
            .any(|d| d.isomorphism(&Fdl::diamond()).is_some()));
    }

    #[test]
    fn monoid_enumeration() {
        let ms = labeled_monoids(2);
        // trivial + 4 tables on two elements (2 identities × 2 squarings)
        assert_eq!(ms.len(), 5);
        for m in &ms {
            m.validate().unwrap();
        }
    }

    #[test]
    fn diamond_is_in_the_exhaustive_corpus() {
        let corpus = exhaustive_bimodules();
        assert!(corpus.len() > 50, "corpus has {} members", corpus.len());
        let diamond = LatticeBimodule::diamond_example();
        assert!(corpus.contains(&diamond));
        for b in &corpus {
            assert!(b.check_axioms().passed());
        }
    }

    #[test]
    fn sampled_languages_fit_budget() {
        let mut rng = rng_from_seed(7);
        for _ in 0..5 {
            let l = sample_language(&mut rng, "ab", LanguageBudget::default());
            assert!(l.state_count() <= 5);
            assert!(transition_monoid(&l).monoid.size <= 4);
        }
    }

    #[test]
    fn pool_members_are_valid() {
        let mut rng = rng_from_seed(3);
        let pool = random_bimodule_pool(&mut rng, 12);
        assert_eq!(pool.len(), 12);
        for b in &pool {
            assert!(b.check_axioms().passed());
        }
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
    }
}
