//! Cross-module property tests over seeded random instances.

use proptest::prelude::*;

use varietas::bimodule::FreeHomSpec;
use varietas::corpus::{
    random_bimodule_pool, random_regex, rng_from_seed, sample_language, LanguageBudget,
};
use varietas::duality::dual_of_variety;
use varietas::lang::{Alphabet, Context, FreeMonoidHom, RegularLanguage};
use varietas::monoid::transition_monoid;
use varietas::qfa::{rotation_machine, MeasureMode, TOLERANCE};
use varietas::recognition::{rec_of_uquotient, recognized_languages, uquotient_of_hom};
use varietas::varieties::{derivative_closure, is_local_basic_variety};

fn lang_from_seed(seed: u64, alphabet: &str) -> RegularLanguage {
    let mut rng = rng_from_seed(seed);
    let pattern = random_regex(&mut rng, alphabet, 4);
    RegularLanguage::from_regex_over(&pattern, Alphabet::new(alphabet).unwrap())
        .unwrap_or_else(|_| RegularLanguage::empty(Alphabet::new(alphabet).unwrap()))
}

fn word_strategy(alphabet: &'static str, max_len: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(
        proptest::sample::select(alphabet.chars().collect::<Vec<_>>()),
        0..=max_len,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Minimization is idempotent and canonical forms decide equality:
    /// two languages agree on all words up to |Q1|·|Q2| iff their canonical
    /// automata are identical. The full equivalence is only checkable when
    /// the product bound is small; one direction holds always.
    #[test]
    fn canonicality(seed1 in 0u64..5_000, seed2 in 0u64..5_000) {
        let l1 = lang_from_seed(seed1, "ab");
        let l2 = lang_from_seed(seed2, "ab");
        prop_assert_eq!(RegularLanguage::from_dfa(l1.dfa().clone()), l1.clone());
        let bound = l1.state_count() * l2.state_count();
        let horizon = bound.min(9);
        let agree = l1
            .alphabet()
            .words_up_to(horizon)
            .iter()
            .all(|w| l1.contains_str(w).unwrap() == l2.contains_str(w).unwrap());
        if l1 == l2 {
            prop_assert!(agree);
        } else if bound <= horizon {
            prop_assert!(!agree, "distinct languages must disagree within the product bound");
        }
    }

    /// Derivatives compose contravariantly on the right.
    #[test]
    fn derivative_composition(
        seed in 0u64..5_000,
        v in word_strategy("ab", 3),
        w in word_strategy("ab", 3),
        x in word_strategy("ab", 3),
        y in word_strategy("ab", 3),
    ) {
        let l = lang_from_seed(seed, "ab");
        let steps = l
            .derivative(&Context::new(v.clone(), w.clone()))
            .unwrap()
            .derivative(&Context::new(x.clone(), y.clone()))
            .unwrap();
        let joined = l
            .derivative(&Context::new(format!("{v}{x}"), format!("{y}{w}")))
            .unwrap();
        prop_assert_eq!(steps, joined);
    }

    /// Exchange identity between derivatives and preimages.
    #[test]
    fn exchange_identity(
        seed in 0u64..5_000,
        img1 in word_strategy("ab", 2),
        img2 in word_strategy("ab", 2),
        v in word_strategy("cd", 3),
        w in word_strategy("cd", 3),
    ) {
        let l = lang_from_seed(seed, "ab");
        let delta = Alphabet::new("cd").unwrap();
        let g = FreeMonoidHom::new(delta, l.alphabet().clone(), vec![img1, img2]).unwrap();
        let lhs = l.preimage(&g).unwrap().derivative(&Context::new(v.clone(), w.clone())).unwrap();
        let rhs = l
            .derivative(&Context::new(g.apply(&v).unwrap(), g.apply(&w).unwrap()))
            .unwrap()
            .preimage(&g)
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// The transition monoid recognizes its language through the final-state
    /// test, on every word up to length 8.
    #[test]
    fn transition_monoid_recognizes(seed in 0u64..2_000) {
        let l = lang_from_seed(seed, "ab");
        let tm = transition_monoid(&l);
        let dfa = l.dfa();
        for word in l.alphabet().words_up_to(8.min(4 + dfa.states)) {
            let m = tm.monoid.mul_all(
                word.chars().map(|c| tm.letter_map[l.alphabet().position(c).unwrap()]),
            );
            let reached = tm.transforms[m][dfa.init];
            prop_assert_eq!(dfa.finals[reached], l.contains_str(&word).unwrap());
        }
    }

    /// QFA conservation for arbitrary rotation angles, and agreement of the
    /// two measurement modes: the rotation family keeps its non-halting
    /// subspace one-dimensional, where the modes must coincide.
    #[test]
    fn qfa_conservation_and_mode_agreement(theta in 0.0f64..6.3, len in 0usize..7) {
        let m = rotation_machine(theta);
        let word: String = std::iter::repeat_n('a', len).collect();
        let mut results = Vec::new();
        for mode in [MeasureMode::Subspace, MeasureMode::Basis] {
            let trace = m.simulate(&word, mode).unwrap();
            prop_assert!(trace.conservation_residual() < TOLERANCE);
            results.push(trace.p_acc());
        }
        prop_assert!((results[0] - results[1]).abs() < TOLERANCE);
    }
}

proptest! {
    // heavier instances, fewer cases
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Recognized language sets of sampled homomorphisms are derivative
    /// closed, and passing to the induced quotient preserves them.
    #[test]
    fn recognized_sets_are_varieties(seed in 0u64..500) {
        let mut rng = rng_from_seed(seed);
        let lang = sample_language(&mut rng, "ab", LanguageBudget::default());
        let tm = transition_monoid(&lang);
        let spec = varietas::bimodule::recognizer_from_monoid(
            &tm.monoid,
            lang.alphabet().clone(),
            tm.letter_map.clone(),
        )
        .unwrap();
        let rec = recognized_languages(&spec);
        let variety = varietas::varieties::LocalBasicVariety::collect(
            lang.alphabet().clone(),
            rec.iter().cloned(),
        )
        .unwrap();
        prop_assert!(is_local_basic_variety(&variety));
        prop_assert_eq!(rec, rec_of_uquotient(&uquotient_of_hom(&spec)));
    }

    /// Round trip through the dual quotient recovers the closure, and the
    /// recognizer side agrees with the duality side.
    #[test]
    fn duality_and_recognition_agree(seed in 0u64..500) {
        let mut rng = rng_from_seed(seed);
        let lang = sample_language(&mut rng, "ab", LanguageBudget::for_duality());
        let closure = derivative_closure(&lang).variety;
        let e = dual_of_variety(&closure).unwrap();
        let rec: Vec<_> = rec_of_uquotient(&e).into_iter().collect();
        prop_assert_eq!(rec, closure.languages().to_vec());
    }

    /// Homomorphism theorem on sampled quotient pairs: a quotient factors
    /// through another exactly when the kernels nest sortwise, and the
    /// induced class map is then a valid surjective homomorphism.
    #[test]
    fn homomorphism_theorem_sampled(seed in 0u64..300) {
        use varietas::bimodule::BimoduleHom;
        use varietas::corpus::random_congruence;
        let mut rng = rng_from_seed(seed);
        let pool = random_bimodule_pool(&mut rng, 5);
        use rand::Rng as _;
        let b = &pool[rng.gen_range(0..pool.len())];
        let c1 = random_congruence(&mut rng, b);
        let c2 = random_congruence(&mut rng, b);
        let nested = (0..b.monoid.size).all(|m| {
            (0..b.monoid.size).all(|m2| {
                c1.part_m[m] != c1.part_m[m2] || c2.part_m[m] == c2.part_m[m2]
            })
        }) && (0..b.lattice.size).all(|d| {
            (0..b.lattice.size).all(|d2| {
                c1.part_d[d] != c1.part_d[d2] || c2.part_d[d] == c2.part_d[d2]
            })
        });
        let (q1, e1) = b.quotient(&c1).unwrap();
        let (q2, e2) = b.quotient(&c2).unwrap();
        // attempt the class-to-class factoring q1 → q2 with e2 = h ∘ e1
        let mut star = vec![usize::MAX; q1.monoid.size];
        let mut diamond = vec![usize::MAX; q1.lattice.size];
        let mut well_defined = true;
        for m in 0..b.monoid.size {
            let slot = &mut star[e1.star[m]];
            if *slot == usize::MAX {
                *slot = e2.star[m];
            } else if *slot != e2.star[m] {
                well_defined = false;
            }
        }
        for d in 0..b.lattice.size {
            let slot = &mut diamond[e1.diamond[d]];
            if *slot == usize::MAX {
                *slot = e2.diamond[d];
            } else if *slot != e2.diamond[d] {
                well_defined = false;
            }
        }
        prop_assert_eq!(nested, well_defined);
        if nested {
            let h = BimoduleHom { source: q1, target: q2, star, diamond };
            prop_assert!(h.validate().is_ok());
            prop_assert!(h.is_surjective());
        }
    }

    /// Reduction is idempotent and never touches the lattice sort on pool
    /// instances.
    #[test]
    fn reduce_contract_on_pool(seed in 0u64..200) {
        let mut rng = rng_from_seed(seed);
        let pool = random_bimodule_pool(&mut rng, 6);
        for b in &pool {
            let (reduced, hom) = b.reduce();
            prop_assert!(reduced.is_reduced());
            prop_assert_eq!(&hom.diamond, &(0..b.lattice.size).collect::<Vec<_>>());
            let (again, _) = reduced.reduce();
            prop_assert_eq!(again, reduced);
        }
    }

    /// Every free-spec factors through its image, whose middle object is a
    /// valid star-generated bimodule recognizing the same languages.
    #[test]
    fn image_factorization_preserves_recognition(seed in 0u64..200) {
        let mut rng = rng_from_seed(seed);
        let pool = random_bimodule_pool(&mut rng, 5);
        use rand::Rng as _;
        let b = pool[rng.gen_range(0..pool.len())].clone();
        let letters: Vec<usize> =
            (0..2).map(|_| rng.gen_range(0..b.monoid.size)).collect();
        let spec = FreeHomSpec::new(Alphabet::new("ab").unwrap(), b, letters).unwrap();
        let (mid, inj) = spec.image_factorization();
        prop_assert!(mid.target.check_axioms().passed());
        prop_assert!(mid.is_surjective());
        prop_assert!(inj.validate().is_ok());
        prop_assert_eq!(recognized_languages(&spec), recognized_languages(&mid));
    }
}
