//! Derivative-closed families of regular languages over one alphabet, the
//! closure operators that produce them, and finite-scale checkers for the
//! ideal and preimage-closure conditions of cotheories.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::LangError;
use crate::lang::{Alphabet, DfaJson, FreeMonoidHom, RegularLanguage};
use crate::monoid::{transition_monoid, TransitionMonoid};
use crate::order::{forced_extension, FinitePoset, LatticeMorphism};
use crate::recognition::UQuotient;

/// A finite, derivative-closed, canonically deduplicated set of regular
/// languages over one alphabet, viewed as a poset under inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalBasicVariety {
    alphabet: Alphabet,
    languages: Vec<RegularLanguage>,
}

impl LocalBasicVariety {
    /// Collects, deduplicates and sorts; rejects mixed alphabets. Closure
    /// under derivatives is NOT established here, use
    /// [`is_local_basic_variety`] or [`generated_local_variety`].
    pub fn collect(
        alphabet: Alphabet,
        langs: impl IntoIterator<Item = RegularLanguage>,
    ) -> Result<Self, LangError> {
        let mut set = std::collections::BTreeSet::new();
        for l in langs {
            if l.alphabet() != &alphabet {
                return Err(LangError::AlphabetMismatch {
                    expected: alphabet.symbols().iter().collect(),
                    got: l.alphabet().symbols().iter().collect(),
                });
            }
            set.insert(l);
        }
        Ok(LocalBasicVariety {
            alphabet,
            languages: set.into_iter().collect(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn languages(&self) -> &[RegularLanguage] {
        &self.languages
    }

    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn contains(&self, l: &RegularLanguage) -> bool {
        self.languages.binary_search(l).is_ok()
    }

    pub fn index_of(&self, l: &RegularLanguage) -> Option<usize> {
        self.languages.binary_search(l).ok()
    }

    pub fn is_subset_of(&self, other: &LocalBasicVariety) -> bool {
        self.languages.iter().all(|l| other.contains(l))
    }

    pub fn union(&self, other: &LocalBasicVariety) -> Result<LocalBasicVariety, LangError> {
        LocalBasicVariety::collect(
            self.alphabet.clone(),
            self.languages.iter().chain(other.languages.iter()).cloned(),
        )
    }

    /// The inclusion order among the member languages.
    pub fn inclusion_poset(&self) -> FinitePoset {
        let n = self.languages.len();
        let leq = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.languages[i].included_in(&self.languages[j]))
                    .collect()
            })
            .collect();
        FinitePoset { size: n, leq }
    }
}

/// A derivative closure with the index-level context actions that make it a
/// recognizer: `left_act[i][m]` is the index of `v⁻¹·L_i` for any word `v`
/// mapping to monoid element `m`, and `right_act[i][m]` the index of
/// `L_i·w⁻¹`. The actions descend to language indices because derivation is a
/// function of the language.
#[derive(Debug, Clone)]
pub struct DerivativeClosure {
    pub base: RegularLanguage,
    pub variety: LocalBasicVariety,
    pub monoid: TransitionMonoid,
    pub left_act: Vec<Vec<usize>>,
    pub right_act: Vec<Vec<usize>>,
    pub base_index: usize,
}

/// Enumerates all two-sided derivatives of `base` exactly: a derivative
/// `v⁻¹Lw⁻¹` is determined by the state reached along `v` and the transition
/// monoid element of `w`, so scanning (state × monoid element) pairs is
/// complete and bounded by their product.
pub fn derivative_closure(base: &RegularLanguage) -> DerivativeClosure {
    let tm = transition_monoid(base);
    let dfa = base.dfa();
    let n = dfa.states;
    let msize = tm.monoid.size;

    // language of the pair (q, t): init q, finals { p : t(p) ∈ F }
    let lang_of_pair = |q: usize, t: usize| -> RegularLanguage {
        let finals = (0..n).map(|p| dfa.finals[tm.transforms[t][p]]).collect();
        let d = crate::lang::Dfa::new(dfa.alphabet.clone(), n, q, dfa.delta.clone(), finals)
            .expect("pair automaton is well-formed");
        RegularLanguage::from_dfa(d)
    };

    let mut index: BTreeMap<RegularLanguage, usize> = BTreeMap::new();
    let mut pair_lang = vec![vec![0usize; msize]; n];
    let mut langs: Vec<RegularLanguage> = Vec::new();
    for q in 0..n {
        for t in 0..msize {
            let l = lang_of_pair(q, t);
            let next = index.len();
            let id = *index.entry(l.clone()).or_insert_with(|| {
                langs.push(l);
                next
            });
            pair_lang[q][t] = id;
        }
    }
    assert!(index.len() <= n * msize);

    // canonical (sorted) numbering
    let sorted: Vec<RegularLanguage> = index.keys().cloned().collect();
    let relabel: BTreeMap<&RegularLanguage, usize> =
        sorted.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut pair_index = vec![vec![0usize; msize]; n];
    for q in 0..n {
        for t in 0..msize {
            pair_index[q][t] = relabel[&langs[pair_lang[q][t]]];
        }
    }
    // one representative pair per language
    let mut rep_pair = vec![(usize::MAX, usize::MAX); sorted.len()];
    for q in (0..n).rev() {
        for t in (0..msize).rev() {
            rep_pair[pair_index[q][t]] = (q, t);
        }
    }

    let left_act: Vec<Vec<usize>> = (0..sorted.len())
        .map(|i| {
            let (q, t) = rep_pair[i];
            (0..msize)
                .map(|m| pair_index[tm.transforms[m][q]][t])
                .collect()
        })
        .collect();
    let right_act: Vec<Vec<usize>> = (0..sorted.len())
        .map(|i| {
            let (q, t) = rep_pair[i];
            (0..msize)
                .map(|m| pair_index[q][tm.monoid.mul(m, t)])
                .collect()
        })
        .collect();

    let base_index = pair_index[dfa.init][tm.monoid.identity];
    let variety = LocalBasicVariety {
        alphabet: base.alphabet().clone(),
        languages: sorted,
    };
    debug_assert_eq!(variety.languages[base_index], *base);
    DerivativeClosure {
        base: base.clone(),
        variety,
        monoid: tm,
        left_act,
        right_act,
        base_index,
    }
}

/// The union of the derivative closures of the given languages.
pub fn generated_local_variety(
    alphabet: Alphabet,
    langs: impl IntoIterator<Item = RegularLanguage>,
) -> Result<LocalBasicVariety, LangError> {
    let mut all: Vec<RegularLanguage> = Vec::new();
    for l in langs {
        if l.alphabet() != &alphabet {
            return Err(LangError::AlphabetMismatch {
                expected: alphabet.symbols().iter().collect(),
                got: l.alphabet().symbols().iter().collect(),
            });
        }
        all.extend(derivative_closure(&l).variety.languages.iter().cloned());
    }
    LocalBasicVariety::collect(alphabet, all)
}

/// True iff the set equals the local variety it generates.
pub fn is_local_basic_variety(v: &LocalBasicVariety) -> bool {
    match generated_local_variety(v.alphabet.clone(), v.languages.iter().cloned()) {
        Ok(gen) => gen == *v,
        Err(_) => false,
    }
}

/// One alphabet's worth of a cotheory sample: a finite family of finite local
/// varieties, read as generators of the ideal of all their subvarieties.
#[derive(Debug, Clone)]
pub struct VarietyFamily {
    pub alphabet: Alphabet,
    pub members: Vec<LocalBasicVariety>,
}

/// A finite snapshot of a cotheory: per-alphabet families plus the
/// homomorphisms along which preimage closure is demanded.
#[derive(Debug, Clone)]
pub struct CotheorySample {
    pub families: Vec<VarietyFamily>,
    pub homs: Vec<FreeMonoidHom>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CotheoryViolation {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct CotheoryReport {
    pub violations: Vec<CotheoryViolation>,
}

impl CotheoryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the cotheory conditions on a finite sample and reports every
/// violation found:
///
/// - each listed member must be a finite local basic variety;
/// - each family must be directed: any two members need an upper bound in the
///   family (missing bounds are flagged, not constructed);
/// - for every hom `g : Δ* → Σ*` and member `F` of the Σ-family, the preimage
///   family `g⁻¹[F]` must be contained in some member of the Δ-family.
///
/// Families are read as generating sets of their ideals, so downward closure
/// holds by construction and is not enumerated.
pub fn check_cotheory(sample: &CotheorySample) -> CotheoryReport {
    let mut violations = Vec::new();
    let mut by_alphabet: BTreeMap<&Alphabet, &VarietyFamily> = BTreeMap::new();
    for fam in &sample.families {
        if by_alphabet.insert(&fam.alphabet, fam).is_some() {
            violations.push(CotheoryViolation {
                kind: "duplicate-family".into(),
                detail: format!(
                    "more than one family declared for alphabet {:?}",
                    fam.alphabet.symbols().iter().collect::<String>()
                ),
            });
        }
    }

    for fam in &sample.families {
        for (i, member) in fam.members.iter().enumerate() {
            if !is_local_basic_variety(member) {
                violations.push(CotheoryViolation {
                    kind: "member-not-derivative-closed".into(),
                    detail: format!(
                        "family {:?} member {i} is not derivative-closed",
                        fam.alphabet.symbols().iter().collect::<String>()
                    ),
                });
            }
        }
        for (i, a) in fam.members.iter().enumerate() {
            for (j, b) in fam.members.iter().enumerate().skip(i + 1) {
                let bounded = fam
                    .members
                    .iter()
                    .any(|g| a.is_subset_of(g) && b.is_subset_of(g));
                if !bounded {
                    violations.push(CotheoryViolation {
                        kind: "not-directed".into(),
                        detail: format!("members {i} and {j} have no upper bound in the family"),
                    });
                }
            }
        }
    }

    for hom in &sample.homs {
        let (Some(sigma_fam), Some(delta_fam)) =
            (by_alphabet.get(&hom.target), by_alphabet.get(&hom.source))
        else {
            violations.push(CotheoryViolation {
                kind: "missing-family".into(),
                detail: format!(
                    "hom {:?} → {:?} connects an undeclared alphabet",
                    hom.source.symbols().iter().collect::<String>(),
                    hom.target.symbols().iter().collect::<String>()
                ),
            });
            continue;
        };
        for (i, member) in sigma_fam.members.iter().enumerate() {
            let mut preimages = Vec::new();
            let mut failed = false;
            for l in member.languages() {
                match l.preimage(hom) {
                    Ok(p) => preimages.push(p),
                    Err(e) => {
                        violations.push(CotheoryViolation {
                            kind: "preimage-error".into(),
                            detail: format!("member {i}: {e}"),
                        });
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            let covered = delta_fam
                .members
                .iter()
                .any(|g| preimages.iter().all(|p| g.contains(p)));
            if !covered {
                let witness = preimages
                    .iter()
                    .find(|p| delta_fam.members.iter().all(|g| !g.contains(p)))
                    .map(|p| p.summary())
                    .unwrap_or_else(|| "(joint containment fails)".into());
                violations.push(CotheoryViolation {
                    kind: "preimage-not-covered".into(),
                    detail: format!(
                        "g⁻¹ of member {i} is not contained in any Δ-family member; witness: {witness}"
                    ),
                });
            }
        }
    }

    CotheoryReport { violations }
}

/// Result of comparing two finite quotients of the free lattice over words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientOrder {
    Equal,
    /// The first factors through the second.
    Le,
    /// The second factors through the first.
    Ge,
    Incomparable,
}

/// Decides whether `e1 ≤ e2` (`e1` factors through `e2`) and produces the
/// factoring lattice map when it does.
///
/// On words the kernel condition is checked on the reachable synchronized
/// product of the two machines; the word-level assignment is then extended to
/// the whole lattice, where it must be a lattice morphism. Word-level kernel
/// inclusion alone is necessary but not sufficient: the extension can fail to
/// preserve meets or joins.
pub fn quotient_le(e1: &UQuotient, e2: &UQuotient) -> Option<LatticeMorphism> {
    if e1.alphabet != e2.alphabet {
        return None;
    }
    let k = e1.alphabet.len();
    let mut pairs = vec![(e1.init, e2.init)];
    let mut seen = std::collections::HashSet::new();
    seen.insert((e1.init, e2.init));
    let mut frontier = 0;
    let mut constraints: Vec<(usize, usize)> = Vec::new();
    while frontier < pairs.len() {
        let (p, q) = pairs[frontier];
        frontier += 1;
        constraints.push((e2.val[q], e1.val[p]));
        for a in 0..k {
            let t = (e1.delta[p][a], e2.delta[q][a]);
            if seen.insert(t) {
                pairs.push(t);
            }
        }
    }
    // functionality on word images: equal e2-values must force equal e1-values
    let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
    for &(src, dst) in &constraints {
        if let Some(&prev) = assigned.get(&src) {
            if prev != dst {
                return None;
            }
        } else {
            assigned.insert(src, dst);
        }
    }
    let map = forced_extension(
        &e2.lattice,
        &e1.lattice,
        &assigned.iter().map(|(&s, &d)| (s, d)).collect::<Vec<_>>(),
    )?;
    Some(LatticeMorphism {
        source: e2.lattice.clone(),
        target: e1.lattice.clone(),
        map,
    })
}

/// Compares two quotients in both directions.
pub fn quotient_order(e1: &UQuotient, e2: &UQuotient) -> QuotientOrder {
    let le = quotient_le(e1, e2).is_some();
    let ge = quotient_le(e2, e1).is_some();
    match (le, ge) {
        (true, true) => QuotientOrder::Equal,
        (true, false) => QuotientOrder::Le,
        (false, true) => QuotientOrder::Ge,
        (false, false) => QuotientOrder::Incomparable,
    }
}

/// Serialization shape for varieties: alphabet plus member DFAs.
#[derive(Debug, Serialize, Deserialize)]
pub struct VarietyJson {
    pub alphabet: String,
    pub languages: Vec<DfaJson>,
}

impl From<&LocalBasicVariety> for VarietyJson {
    fn from(v: &LocalBasicVariety) -> Self {
        VarietyJson {
            alphabet: v.alphabet.symbols().iter().collect(),
            languages: v.languages.iter().map(|l| l.to_json()).collect(),
        }
    }
}

impl TryFrom<VarietyJson> for LocalBasicVariety {
    type Error = LangError;

    fn try_from(j: VarietyJson) -> Result<Self, LangError> {
        let alphabet = Alphabet::new(&j.alphabet)?;
        let langs = j
            .languages
            .into_iter()
            .map(|d| Ok(RegularLanguage::from_dfa(crate::lang::Dfa::try_from(d)?)))
            .collect::<Result<Vec<_>, LangError>>()?;
        LocalBasicVariety::collect(alphabet, langs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Context;

    fn lang(p: &str) -> RegularLanguage {
        RegularLanguage::from_regex(p).unwrap()
    }

    #[test]
    fn closure_of_even_as() {
        let dc = derivative_closure(&lang("(aa)*"));
        assert_eq!(dc.variety.len(), 2);
        assert!(dc.variety.contains(&lang("(aa)*")));
        assert!(dc.variety.contains(&lang("a(aa)*")));
    }

    #[test]
    fn closure_of_empty() {
        let dc = derivative_closure(&RegularLanguage::empty(Alphabet::new("a").unwrap()));
        assert_eq!(dc.variety.len(), 1);
        assert!(dc.variety.languages()[0].is_empty_language());
    }

    /// Oracle: bounded brute force over contexts |v|,|w| ≤ 4 finds exactly the
    /// same language set for small bases.
    #[test]
    fn closure_matches_bounded_brute_force() {
        for p in ["(a|b)*a", "(ab)*", "(aa)*", "a(ba)*b"] {
            let base = lang(p);
            let dc = derivative_closure(&base);
            let mut brute = std::collections::BTreeSet::new();
            for v in base.alphabet().words_up_to(4) {
                for w in base.alphabet().words_up_to(4) {
                    brute.insert(base.derivative(&Context::new(v.clone(), w)).unwrap());
                }
            }
            let computed: std::collections::BTreeSet<_> =
                dc.variety.languages().iter().cloned().collect();
            assert!(
                brute.is_subset(&computed),
                "every brute-force derivative appears in the closure for {p}"
            );
            // the closure bound and exactness: closure members are derivatives
            assert!(
                computed.is_subset(&brute),
                "contexts up to length 4 exhaust the closure for {p}"
            );
            let bound = base.state_count() * dc.monoid.monoid.size;
            assert!(dc.variety.len() <= bound);
        }
    }

    #[test]
    fn closure_is_derivative_closed_and_contains_base() {
        for p in ["(a|b)*a", "(ab)*", "a*b"] {
            let base = lang(p);
            let dc = derivative_closure(&base);
            assert!(dc.variety.contains(&base));
            assert!(is_local_basic_variety(&dc.variety));
        }
    }

    #[test]
    fn index_actions_agree_with_direct_derivatives() {
        let base = lang("(ab)*");
        let dc = derivative_closure(&base);
        for (i, l) in dc.variety.languages().iter().enumerate() {
            for (letter_pos, &m) in dc.monoid.letter_map.iter().enumerate() {
                let letter = base.alphabet().symbols()[letter_pos].to_string();
                let left = l.derivative(&Context::new(letter.clone(), "")).unwrap();
                assert_eq!(dc.variety.languages()[dc.left_act[i][m]], left);
                let right = l.derivative(&Context::new("", letter)).unwrap();
                assert_eq!(dc.variety.languages()[dc.right_act[i][m]], right);
            }
        }
    }

    #[test]
    fn generated_variety_examples() {
        let a = Alphabet::new("a").unwrap();
        let full = RegularLanguage::full(a.clone());
        let v = generated_local_variety(a.clone(), [full.clone()]).unwrap();
        assert_eq!(v.languages(), &[full]);

        let v = generated_local_variety(a.clone(), [lang("(aa)*")]).unwrap();
        assert_eq!(v.len(), 2);

        let v = generated_local_variety(a, []).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn variety_predicate_examples() {
        let a = Alphabet::new("a").unwrap();
        let closed =
            LocalBasicVariety::collect(a.clone(), [lang("(aa)*"), lang("a(aa)*")]).unwrap();
        assert!(is_local_basic_variety(&closed));

        let open = LocalBasicVariety::collect(a.clone(), [lang("(aa)*")]).unwrap();
        assert!(!is_local_basic_variety(&open));

        let empty_lang =
            LocalBasicVariety::collect(a, [RegularLanguage::empty(Alphabet::new("a").unwrap())])
                .unwrap();
        assert!(is_local_basic_variety(&empty_lang));
    }

    #[test]
    fn mixed_alphabets_rejected() {
        let a = Alphabet::new("a").unwrap();
        assert!(LocalBasicVariety::collect(a, [lang("(ab)*")]).is_err());
    }

    #[test]
    fn cotheory_identity_pass() {
        let a = Alphabet::new("a").unwrap();
        let fam = VarietyFamily {
            alphabet: a.clone(),
            members: vec![LocalBasicVariety::collect(
                a.clone(),
                [RegularLanguage::empty(a.clone())],
            )
            .unwrap()],
        };
        let sample = CotheorySample {
            families: vec![fam],
            homs: vec![FreeMonoidHom::identity(&a)],
        };
        assert!(check_cotheory(&sample).passed());
    }

    #[test]
    fn cotheory_preimage_checks() {
        // g : c ↦ ab. g⁻¹ of Deriv((ab)*) is {c*, ∅, {ε}} — computed by the
        // preimage oracle — so the Δ-family must contain a variety covering
        // all three; Deriv(c*) = {c*} alone does not.
        let sigma = Alphabet::new("ab").unwrap();
        let delta = Alphabet::new("c").unwrap();
        let g = FreeMonoidHom::new(delta.clone(), sigma.clone(), vec!["ab".into()]).unwrap();

        let sigma_var = derivative_closure(&lang("(ab)*")).variety;
        let preimages: Vec<RegularLanguage> = sigma_var
            .languages()
            .iter()
            .map(|l| l.preimage(&g).unwrap())
            .collect();
        let delta_var = generated_local_variety(delta.clone(), preimages.iter().cloned()).unwrap();
        assert_eq!(delta_var.len(), 3, "c*, ∅ and {{ε}}");

        let good = CotheorySample {
            families: vec![
                VarietyFamily {
                    alphabet: sigma.clone(),
                    members: vec![sigma_var.clone()],
                },
                VarietyFamily {
                    alphabet: delta.clone(),
                    members: vec![delta_var],
                },
            ],
            homs: vec![g.clone()],
        };
        assert!(check_cotheory(&good).passed());

        // Δ-family {{∅}} fails with a witness
        let bad = CotheorySample {
            families: vec![
                VarietyFamily {
                    alphabet: sigma,
                    members: vec![sigma_var],
                },
                VarietyFamily {
                    alphabet: delta.clone(),
                    members: vec![LocalBasicVariety::collect(
                        delta.clone(),
                        [RegularLanguage::empty(delta)],
                    )
                    .unwrap()],
                },
            ],
            homs: vec![g],
        };
        let report = check_cotheory(&bad);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == "preimage-not-covered"));
    }

    #[test]
    fn cotheory_flags_undirected_family() {
        let a = Alphabet::new("a").unwrap();
        let v1 = derivative_closure(&lang("(aa)*")).variety;
        let v2 = derivative_closure(&lang("(aaa)*")).variety;
        let sample = CotheorySample {
            families: vec![VarietyFamily {
                alphabet: a,
                members: vec![v1, v2],
            }],
            homs: vec![],
        };
        let report = check_cotheory(&sample);
        assert!(report.violations.iter().any(|v| v.kind == "not-directed"));
    }

    #[test]
    fn quotient_order_examples() {
        use crate::duality::dual_of_variety;
        let a = Alphabet::new("a").unwrap();

        // reflexivity, with the identity as the factoring map
        let e = dual_of_variety(&derivative_closure(&lang("(aa)*")).variety).unwrap();
        let refl = quotient_le(&e, &e).expect("e ≤ e");
        assert_eq!(refl.map, (0..e.lattice.size).collect::<Vec<_>>());
        assert_eq!(quotient_order(&e, &e), QuotientOrder::Equal);

        // duals of the closures of (aa)* and (aaa)* are incomparable:
        // kernel inclusion fails on words in both directions
        let e2 = dual_of_variety(&derivative_closure(&lang("(aa)*")).variety).unwrap();
        let e3 = dual_of_variety(&derivative_closure(&lang("(aaa)*")).variety).unwrap();
        assert_eq!(quotient_order(&e2, &e3), QuotientOrder::Incomparable);

        // word-level kernel inclusion is necessary but NOT sufficient: the
        // dual of {Σ*} is constant on words, so its word kernel contains
        // every kernel, yet no factoring lattice morphism exists — it would
        // have to send both atoms of the parity dual to ⊤ while their meet ⊥
        // goes to ⊥. The two quotients are incomparable.
        let full = LocalBasicVariety::collect(a.clone(), [RegularLanguage::full(a)]).unwrap();
        let e_full = dual_of_variety(&full).unwrap();
        assert!(quotient_le(&e_full, &e2).is_none());
        assert!(quotient_le(&e2, &e_full).is_none());
        assert_eq!(quotient_order(&e_full, &e2), QuotientOrder::Incomparable);

        // on genuine inclusion chains the factoring exists
        let chain_small = derivative_closure(&lang("(aa)*")).variety;
        let chain_big = generated_local_variety(
            Alphabet::new("a").unwrap(),
            [
                lang("(aa)*"),
                RegularLanguage::full(Alphabet::new("a").unwrap()),
            ],
        )
        .unwrap();
        assert!(chain_small.is_subset_of(&chain_big));
        let e_small = dual_of_variety(&chain_small).unwrap();
        let e_big = dual_of_variety(&chain_big).unwrap();
        let factoring = quotient_le(&e_small, &e_big).expect("dual of a subfamily factors");
        factoring.validate().unwrap();
    }

    /// Every member's own derivative closure is a subvariety, so the ideal of
    /// finite subvarieties of a finite variety has the whole variety as its
    /// union.
    #[test]
    fn subvariety_ideal_unions_to_the_variety() {
        for p in ["(a|b)*a", "(ab)*"] {
            let v = derivative_closure(&lang(p)).variety;
            let mut union = std::collections::BTreeSet::new();
            for l in v.languages() {
                let sub = derivative_closure(l).variety;
                assert!(
                    sub.is_subset_of(&v),
                    "Deriv({}) must stay inside",
                    l.summary()
                );
                assert!(sub.contains(l));
                union.extend(sub.languages().iter().cloned());
            }
            let rebuilt: Vec<_> = union.into_iter().collect();
            assert_eq!(rebuilt, v.languages());
        }
    }

    #[test]
    fn variety_json_round_trip() {
        let v = derivative_closure(&lang("(a|b)*a")).variety;
        let json = serde_json::to_string(&VarietyJson::from(&v)).unwrap();
        let back: LocalBasicVariety = serde_json::from_str::<VarietyJson>(&json)
            .unwrap()
            .try_into()
            .unwrap();
        assert_eq!(back, v);
    }
}
