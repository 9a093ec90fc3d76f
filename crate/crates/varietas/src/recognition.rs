//! Language recognition by finite lattice bimodules and finite quotients of
//! the free lattice over words, including the minimal reduced recognizer of a
//! regular language.
//!
//! A finite quotient of the word lattice is represented by a machine: a
//! deterministic transition structure plus a state-value map into a finite
//! lattice, so that the word evaluation `ê(w)` is the value of the state
//! reached by `w`. The lattice map itself is the unique join/meet-preserving
//! extension of `ê`.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::bimodule::{join_meet_closure, FreeHomSpec, LatticeBimodule};
use crate::error::{LangError, StructureError};
use crate::lang::{Alphabet, Dfa, RegularLanguage};
use crate::order::{downset_lattice, forced_extension, sublattice, Fdl, FdlJson};
use crate::varieties::{derivative_closure, LocalBasicVariety};

/// Where a quotient came from; constructors guarantee the lifting property,
/// external inputs should be run through [`validate_uquotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromBimodule,
    DualOfVariety,
    External,
}

/// A finite quotient of the free word lattice, machine-represented.
#[derive(Debug, Clone)]
pub struct UQuotient {
    pub alphabet: Alphabet,
    pub states: usize,
    pub init: usize,
    pub delta: Vec<Vec<usize>>,
    pub val: Vec<usize>,
    pub lattice: Fdl,
    pub provenance: Provenance,
}

impl UQuotient {
    /// `ê(w)`: the lattice value of the state reached by `w`.
    pub fn eval_word(&self, word: &str) -> Result<usize, LangError> {
        let mut q = self.init;
        for c in word.chars() {
            q = self.delta[q][self.alphabet.position(c)?];
        }
        Ok(self.val[q])
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states];
        let mut order = vec![self.init];
        seen[self.init] = true;
        let mut frontier = 0;
        while frontier < order.len() {
            let q = order[frontier];
            frontier += 1;
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }
}

/// The languages recognized by a finite quotient: one language per nonzero
/// join-prime `c` of the codomain, namely `{ w : c ≤ ê(w) }`, realized as a
/// DFA over the machine states and canonicalized; duplicates are removed.
pub fn rec_of_uquotient(e: &UQuotient) -> BTreeSet<RegularLanguage> {
    e.lattice
        .join_primes()
        .into_iter()
        .map(|c| {
            let finals = (0..e.states).map(|q| e.lattice.le(c, e.val[q])).collect();
            let dfa = Dfa::new(
                e.alphabet.clone(),
                e.states,
                e.init,
                e.delta.clone(),
                finals,
            )
            .expect("machine is a well-formed automaton");
            RegularLanguage::from_dfa(dfa)
        })
        .collect()
}

/// The languages recognized by a homomorphism out of the free bimodule:
/// `{ w : c ≤ ι(h(w)) }` per nonzero join-prime `c` of the full target
/// lattice. Non-surjective homomorphisms are allowed.
pub fn recognized_languages(h: &FreeHomSpec) -> BTreeSet<RegularLanguage> {
    let (sub, carrier) = h.reachable_submonoid();
    let index: HashMap<usize, usize> = carrier.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let delta: Vec<Vec<usize>> = (0..sub.size)
        .map(|i| {
            h.letter_image
                .iter()
                .map(|&a| index[&h.target.monoid.mul(carrier[i], a)])
                .collect()
        })
        .collect();
    h.target
        .lattice
        .join_primes()
        .into_iter()
        .map(|c| {
            let finals = (0..sub.size)
                .map(|i| h.target.lattice.le(c, h.target.iota[carrier[i]]))
                .collect();
            let dfa = Dfa::new(h.alphabet.clone(), sub.size, 0, delta.clone(), finals)
                .expect("reachable-submonoid machine is well-formed");
            RegularLanguage::from_dfa(dfa)
        })
        .collect()
}

/// Membership of `lang` in the recognized set of `h`.
pub fn recognizes(h: &FreeHomSpec, lang: &RegularLanguage) -> Result<bool, LangError> {
    if lang.alphabet() != &h.alphabet {
        return Err(LangError::AlphabetMismatch {
            expected: h.alphabet.symbols().iter().collect(),
            got: lang.alphabet().symbols().iter().collect(),
        });
    }
    Ok(recognized_languages(h).contains(lang))
}

/// The quotient induced by a homomorphism's lattice component: states are the
/// reachable submonoid acting by right multiplication, values are the
/// embeddings, and the codomain is the join/meet closure of the value image
/// inside the target lattice.
pub fn uquotient_of_hom(h: &FreeHomSpec) -> UQuotient {
    let (sub, carrier) = h.reachable_submonoid();
    let index: HashMap<usize, usize> = carrier.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let delta: Vec<Vec<usize>> = (0..sub.size)
        .map(|i| {
            h.letter_image
                .iter()
                .map(|&a| index[&h.target.monoid.mul(carrier[i], a)])
                .collect()
        })
        .collect();
    let lattice = &h.target.lattice;
    let mut seeds: Vec<usize> = vec![lattice.bottom, lattice.top];
    seeds.extend(carrier.iter().map(|&m| h.target.iota[m]));
    let reached = join_meet_closure(lattice, &seeds);
    let d_carrier: Vec<usize> = (0..lattice.size).filter(|&d| reached[d]).collect();
    let d_index: HashMap<usize, usize> =
        d_carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let codomain = sublattice(lattice, &d_carrier);
    UQuotient {
        alphabet: h.alphabet.clone(),
        states: sub.size,
        init: 0,
        delta,
        val: carrier
            .iter()
            .map(|&m| d_index[&h.target.iota[m]])
            .collect(),
        lattice: codomain,
        provenance: Provenance::FromBimodule,
    }
}

/// Validation report for external quotients.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct UQuotientReport {
    pub generates: bool,
    pub contexts_checked: usize,
    pub lifting_failures: Vec<String>,
}

impl UQuotientReport {
    pub fn passed(&self) -> bool {
        self.generates && self.lifting_failures.is_empty()
    }
}

/// Bounded checker of the quotient invariants over all state-reachable
/// contexts: the value image must join/meet-generate the codomain, and every
/// context `x ↦ v·x·w` needs a lattice endomorphism `ū` of the codomain with
/// `ū(ê(x)) = ê(v·x·w)`.
///
/// Left context parts range over reachable states, right parts over the
/// machine's transition monoid, which makes the context space finite and
/// complete. Errors out if that space exceeds `max_contexts`.
pub fn validate_uquotient(
    e: &UQuotient,
    max_contexts: usize,
) -> Result<UQuotientReport, StructureError> {
    let reachable = e.reachable();
    let mut seeds = vec![e.lattice.bottom, e.lattice.top];
    seeds.extend(reachable.iter().map(|&q| e.val[q]));
    let generates = join_meet_closure(&e.lattice, &seeds).iter().all(|&r| r);

    // transition monoid of the machine
    let k = e.alphabet.len();
    let id: Vec<usize> = (0..e.states).collect();
    let mut transforms = vec![id.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(id);
    let mut frontier = 0;
    while frontier < transforms.len() {
        let t = transforms[frontier].clone();
        frontier += 1;
        for a in 0..k {
            let composed: Vec<usize> = t.iter().map(|&q| e.delta[q][a]).collect();
            if seen.insert(composed.clone()) {
                transforms.push(composed);
            }
        }
        if transforms.len() * reachable.len() > max_contexts {
            return Err(StructureError::Malformed(format!(
                "context space exceeds the budget of {max_contexts}"
            )));
        }
    }

    let mut report = UQuotientReport {
        generates,
        ..Default::default()
    };
    for &q1 in &reachable {
        // reachable pairs of the synchronized self-product from (init, q1)
        let mut pairs = vec![(e.init, q1)];
        let mut seen_pairs: HashSet<(usize, usize)> = HashSet::new();
        seen_pairs.insert((e.init, q1));
        let mut fr = 0;
        while fr < pairs.len() {
            let (p, p2) = pairs[fr];
            fr += 1;
            for a in 0..k {
                let t = (e.delta[p][a], e.delta[p2][a]);
                if seen_pairs.insert(t) {
                    pairs.push(t);
                }
            }
        }
        for t in &transforms {
            report.contexts_checked += 1;
            let mut assigned: HashMap<usize, usize> = HashMap::new();
            let mut functional = true;
            for &(p, p2) in &pairs {
                let src = e.val[p];
                let dst = e.val[t[p2]];
                if let Some(&prev) = assigned.get(&src) {
                    if prev != dst {
                        functional = false;
                        break;
                    }
                } else {
                    assigned.insert(src, dst);
                }
            }
            let lifted = functional
                && forced_extension(
                    &e.lattice,
                    &e.lattice,
                    &assigned.iter().map(|(&s, &d)| (s, d)).collect::<Vec<_>>(),
                )
                .is_some();
            if !lifted {
                report.lifting_failures.push(format!(
                    "context (state {q1}, transform {t:?}) has no lifting"
                ));
            }
        }
    }
    Ok(report)
}

/// The minimal reduced recognizer of a regular language: the transition
/// monoid of its canonical DFA acting on the lattice of up-closed subsets of
/// its derivative closure, with each monoid element embedded as the set of
/// derivatives containing one of its representative words.
///
/// The result is star-generated, star-embedded and therefore reduced, and it
/// recognizes exactly the derivative closure of the language. Errs when the
/// closure is too large to materialize its up-set lattice.
pub fn minimal_recognizer(
    lang: &RegularLanguage,
) -> Result<(LatticeBimodule, FreeHomSpec), StructureError> {
    let dc = derivative_closure(lang);
    let members = dc.variety.languages();
    let k = members.len();

    // up-sets of the inclusion order = down-sets of the reversed order
    let poset = dc.variety.inclusion_poset().reversed();
    let ds = downset_lattice(&poset)?;
    let mask_of = |pred: &dyn Fn(usize) -> bool| -> u64 {
        (0..k).fold(0u64, |m, i| if pred(i) { m | (1 << i) } else { m })
    };

    let msize = dc.monoid.monoid.size;
    let iota: Vec<usize> = (0..msize)
        .map(|m| {
            let rep = &dc.monoid.representatives[m];
            let mask = mask_of(&|i| members[i].contains_str(rep).expect("same alphabet"));
            ds.index_of(mask).expect("membership sets are up-closed")
        })
        .collect();

    let n = ds.lattice.size;
    let act_left: Vec<Vec<usize>> = (0..msize)
        .map(|m| {
            (0..n)
                .map(|d| {
                    let mask = mask_of(&|i| ds.masks[d] >> dc.left_act[i][m] & 1 == 1);
                    ds.index_of(mask)
                        .expect("context preimages of up-sets are up-closed")
                })
                .collect()
        })
        .collect();
    let act_right: Vec<Vec<usize>> = (0..n)
        .map(|d| {
            (0..msize)
                .map(|m| {
                    let mask = mask_of(&|i| ds.masks[d] >> dc.right_act[i][m] & 1 == 1);
                    ds.index_of(mask)
                        .expect("context preimages of up-sets are up-closed")
                })
                .collect()
        })
        .collect();

    let bimodule = LatticeBimodule {
        monoid: dc.monoid.monoid.clone(),
        lattice: ds.lattice.clone(),
        iota,
        act_left,
        act_right,
    };
    let spec = FreeHomSpec {
        alphabet: lang.alphabet().clone(),
        target: bimodule.clone(),
        letter_image: dc.monoid.letter_map.clone(),
    };
    Ok((bimodule, spec))
}

/// Serialization shape for quotients: machine, value map and inline lattice.
#[derive(Debug, Serialize, Deserialize)]
pub struct UQuotientJson {
    pub alphabet: String,
    pub states: usize,
    pub init: usize,
    pub delta: Vec<Vec<usize>>,
    pub val: Vec<usize>,
    pub lattice: FdlJson,
    #[serde(default = "default_provenance")]
    pub provenance: Provenance,
}

fn default_provenance() -> Provenance {
    Provenance::External
}

impl From<&UQuotient> for UQuotientJson {
    fn from(e: &UQuotient) -> Self {
        UQuotientJson {
            alphabet: e.alphabet.symbols().iter().collect(),
            states: e.states,
            init: e.init,
            delta: e.delta.clone(),
            val: e.val.clone(),
            lattice: FdlJson::from(&e.lattice),
            provenance: e.provenance,
        }
    }
}

impl TryFrom<UQuotientJson> for UQuotient {
    type Error = StructureError;

    fn try_from(j: UQuotientJson) -> Result<Self, StructureError> {
        let alphabet = Alphabet::new(&j.alphabet)
            .map_err(|e| StructureError::Malformed(format!("bad alphabet: {e}")))?;
        let lattice = Fdl::try_from(j.lattice)?;
        if j.init >= j.states
            || j.delta.len() != j.states
            || j.delta
                .iter()
                .any(|r| r.len() != alphabet.len() || r.iter().any(|&q| q >= j.states))
            || j.val.len() != j.states
            || j.val.iter().any(|&d| d >= lattice.size)
        {
            return Err(StructureError::Malformed(
                "machine tables have wrong shape".into(),
            ));
        }
        Ok(UQuotient {
            alphabet,
            states: j.states,
            init: j.init,
            delta: j.delta,
            val: j.val,
            lattice,
            provenance: j.provenance,
        })
    }
}

/// Convenience: the recognized set as a canonical variety-candidate.
pub fn recognized_variety(h: &FreeHomSpec) -> LocalBasicVariety {
    LocalBasicVariety::collect(h.alphabet.clone(), recognized_languages(h))
        .expect("recognized languages share the homomorphism's alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::recognizer_from_monoid;

    fn lang(p: &str) -> RegularLanguage {
        RegularLanguage::from_regex(p).unwrap()
    }

    fn diamond_spec() -> FreeHomSpec {
        FreeHomSpec::new(
            Alphabet::new("a").unwrap(),
            LatticeBimodule::diamond_example(),
            vec![1],
        )
        .unwrap()
    }

    #[test]
    fn diamond_recognizes_parity_languages() {
        let h = diamond_spec();
        let rec = recognized_languages(&h);
        let expected: BTreeSet<_> = [lang("(aa)*"), lang("a(aa)*")].into_iter().collect();
        assert_eq!(rec, expected);
        assert!(recognizes(&h, &lang("(aa)*")).unwrap());
        assert!(!recognizes(&h, &lang("a*")).unwrap());
        assert!(recognizes(&h, &lang("(ab)*")).is_err());
    }

    #[test]
    fn trivial_bimodule_recognizes_nothing() {
        let h = FreeHomSpec::new(
            Alphabet::new("a").unwrap(),
            LatticeBimodule::trivial(),
            vec![0],
        )
        .unwrap();
        assert!(recognized_languages(&h).is_empty());
    }

    #[test]
    fn uquotient_of_diamond_hom() {
        let e = uquotient_of_hom(&diamond_spec());
        assert_eq!(e.states, 2);
        assert_eq!(e.lattice.size, 4);
        assert_eq!(rec_of_uquotient(&e), recognized_languages(&diamond_spec()));
        let report = validate_uquotient(&e, 10_000).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn uquotient_of_trivial() {
        let h = FreeHomSpec::new(
            Alphabet::new("a").unwrap(),
            LatticeBimodule::trivial(),
            vec![0],
        )
        .unwrap();
        let e = uquotient_of_hom(&h);
        assert_eq!(e.states, 1);
        assert_eq!(e.lattice.size, 1);
    }

    #[test]
    fn uquotient_of_monoid_recognizer() {
        let h = recognizer_from_monoid(
            &crate::monoid::FiniteMonoid::cyclic(2),
            Alphabet::new("a").unwrap(),
            vec![1],
        )
        .unwrap();
        let e = uquotient_of_hom(&h);
        assert_eq!(e.lattice.size, 6);
        assert!(validate_uquotient(&e, 100_000).unwrap().passed());
    }

    #[test]
    fn rec_of_two_valued_machines() {
        // constant-⊤ valuation recognizes Σ*
        let a = Alphabet::new("ab").unwrap();
        let e = UQuotient {
            alphabet: a.clone(),
            states: 1,
            init: 0,
            delta: vec![vec![0, 0]],
            val: vec![1],
            lattice: Fdl::two(),
            provenance: Provenance::External,
        };
        let rec = rec_of_uquotient(&e);
        assert_eq!(rec.len(), 1);
        assert!(rec.contains(&RegularLanguage::full(a.clone())));

        // final-state indicator of a DFA for L recognizes exactly L
        let l = lang("(a|b)*a");
        let dfa = l.dfa();
        let e = UQuotient {
            alphabet: a,
            states: dfa.states,
            init: dfa.init,
            delta: dfa.delta.clone(),
            val: dfa.finals.iter().map(|&f| usize::from(f)).collect(),
            lattice: Fdl::two(),
            provenance: Provenance::External,
        };
        let rec = rec_of_uquotient(&e);
        assert_eq!(rec.len(), 1);
        assert!(rec.contains(&l));
        // {(a|b)*a} is not derivative-closed, so this machine is NOT a valid
        // quotient: the context (ε, a) admits no lifting into the 2-chain.
        // The bounded checker must reject it.
        let report = validate_uquotient(&e, 10_000).unwrap();
        assert!(!report.passed());
        assert!(!report.lifting_failures.is_empty());
    }

    #[test]
    fn indicator_of_derivative_stable_language_is_a_quotient() {
        // Deriv(c*) = {c*}: the indicator machine has every lifting
        let l = lang("c*");
        let dfa = l.dfa();
        let e = UQuotient {
            alphabet: l.alphabet().clone(),
            states: dfa.states,
            init: dfa.init,
            delta: dfa.delta.clone(),
            val: dfa.finals.iter().map(|&f| usize::from(f)).collect(),
            lattice: Fdl::two(),
            provenance: Provenance::External,
        };
        assert!(validate_uquotient(&e, 10_000).unwrap().passed());
    }

    #[test]
    fn minimal_recognizer_of_even_as() {
        let (b, h) = minimal_recognizer(&lang("(aa)*")).unwrap();
        assert!(b.check_axioms().passed());
        assert_eq!(b.monoid.size, 2);
        assert_eq!(
            b.lattice.size, 4,
            "up-sets of a 2-antichain form the 4-boolean lattice"
        );
        assert!(b.is_star_generated());
        assert!(b.is_star_embedded());
        assert!(b.is_reduced());
        let rec = recognized_languages(&h);
        let expected: BTreeSet<_> = [lang("(aa)*"), lang("a(aa)*")].into_iter().collect();
        assert_eq!(rec, expected);
    }

    #[test]
    fn minimal_recognizer_of_full_and_empty() {
        let a = Alphabet::new("a").unwrap();
        let (b, h) = minimal_recognizer(&RegularLanguage::full(a.clone())).unwrap();
        assert_eq!(b.monoid.size, 1);
        assert_eq!(b.lattice.size, 2);
        let rec = recognized_languages(&h);
        assert_eq!(rec.len(), 1);
        assert!(rec.contains(&RegularLanguage::full(a.clone())));

        let (b, h) = minimal_recognizer(&RegularLanguage::empty(a.clone())).unwrap();
        assert_eq!(b.monoid.size, 1);
        assert_eq!(b.lattice.size, 2);
        let rec = recognized_languages(&h);
        assert_eq!(rec.len(), 1);
        assert!(rec.contains(&RegularLanguage::empty(a)));
    }

    #[test]
    fn minimal_recognizer_recognizes_exactly_the_closure() {
        for p in ["(a|b)*a", "(ab)*", "a(aa)*"] {
            let l = lang(p);
            let (_, h) = minimal_recognizer(&l).unwrap();
            let rec = recognized_variety(&h);
            assert_eq!(
                rec,
                derivative_closure(&l).variety,
                "closure mismatch for {p}"
            );
        }
    }

    #[test]
    fn reduction_preserves_recognition() {
        // composing with the reduction quotient keeps the recognized set
        let b = LatticeBimodule::diamond_example();
        let quotient_to_z2_on_1 = {
            let c = crate::bimodule::BimoduleCongruence::new(vec![0, 1], vec![0, 0, 0, 0]);
            b.quotient(&c).unwrap().0
        };
        let h =
            FreeHomSpec::new(Alphabet::new("a").unwrap(), quotient_to_z2_on_1, vec![1]).unwrap();
        let before = recognized_languages(&h);
        let (reduced, hom) = h.target.reduce();
        let h_reduced = FreeHomSpec::new(
            h.alphabet.clone(),
            reduced,
            h.letter_image.iter().map(|&m| hom.star[m]).collect(),
        )
        .unwrap();
        assert_eq!(before, recognized_languages(&h_reduced));
    }

    /// The minimal recognizer's quotient factors through any other recognizer
    /// of the language: its recognized family is smallest, so it sits lowest
    /// in the quotient order.
    #[test]
    fn minimal_recognizer_factors_through_monoid_recognizer() {
        use crate::varieties::quotient_le;
        for p in ["(aa)*", "(a|b)*a", "a*"] {
            let l = lang(p);
            let (_, minimal) = minimal_recognizer(&l).unwrap();
            let e_min = uquotient_of_hom(&minimal);
            let tm = crate::monoid::transition_monoid(&l);
            let canonical =
                recognizer_from_monoid(&tm.monoid, l.alphabet().clone(), tm.letter_map.clone())
                    .unwrap();
            assert!(recognizes(&canonical, &l).unwrap());
            let e_can = uquotient_of_hom(&canonical);
            let factoring = quotient_le(&e_min, &e_can);
            assert!(
                factoring.is_some(),
                "minimal recognizer must factor for {p}"
            );
            factoring.unwrap().validate().unwrap();
        }
    }

    #[test]
    fn uquotient_json_round_trip() {
        let e = uquotient_of_hom(&diamond_spec());
        let json = serde_json::to_string(&UQuotientJson::from(&e)).unwrap();
        let back =
            UQuotient::try_from(serde_json::from_str::<UQuotientJson>(&json).unwrap()).unwrap();
        assert_eq!(back.val, e.val);
        assert_eq!(rec_of_uquotient(&back), rec_of_uquotient(&e));
    }
}
