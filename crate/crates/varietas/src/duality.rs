//! The constructive finite core of the duality between algebraic completely
//! distributive lattices and posets: derivative-closed language families
//! dualize to finite word-lattice quotients and back.
//!
//! The dual lattice is taken to be the up-closed subsets of the family under
//! inclusion, with `ê(w) = { L : w ∈ L }`. With this orientation the language
//! recovered from the principal up-set of a member is that member itself, so
//! the round trip is checked extensionally by [`verify_local_duality`] rather
//! than by matching any particular complement convention.

use std::collections::HashMap;

use crate::error::StructureError;
use crate::lang::FreeMonoidHom;
use crate::order::downset_lattice;
use crate::recognition::{rec_of_uquotient, Provenance, UQuotient};
use crate::varieties::{generated_local_variety, is_local_basic_variety, LocalBasicVariety};

/// Dualizes a derivative-closed family to a finite quotient of the word
/// lattice. Rejects families that are not derivative-closed.
///
/// The machine is the reachable synchronized product of the member automata;
/// the value of a product state is the up-set of members accepting there. The
/// lifting of a context `(v, w)` sends an up-set `S` to
/// `{ L : v⁻¹Lw⁻¹ ∈ S }`, which is well defined exactly because the family is
/// derivative-closed.
pub fn dual_of_variety(v: &LocalBasicVariety) -> Result<UQuotient, StructureError> {
    if !is_local_basic_variety(v) {
        return Err(StructureError::Malformed(
            "family is not closed under derivatives".into(),
        ));
    }
    let members = v.languages();
    let k = members.len();
    let poset = v.inclusion_poset().reversed();
    let ds = downset_lattice(&poset)?;

    // reachable synchronized product, BFS over alphabet order
    let inits: Vec<usize> = members.iter().map(|l| l.dfa().init).collect();
    let mut states: Vec<Vec<usize>> = vec![inits.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(inits, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut val: Vec<usize> = Vec::new();
    let mut frontier = 0;
    while frontier < states.len() {
        let tuple = states[frontier].clone();
        frontier += 1;
        let mask = (0..k).fold(0u64, |m, i| {
            if members[i].dfa().finals[tuple[i]] {
                m | (1 << i)
            } else {
                m
            }
        });
        val.push(
            ds.index_of(mask)
                .expect("acceptance sets are up-closed under language inclusion"),
        );
        let mut row = Vec::with_capacity(v.alphabet().len());
        for a in 0..v.alphabet().len() {
            let next: Vec<usize> = (0..k)
                .map(|i| members[i].dfa().delta[tuple[i]][a])
                .collect();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row.push(id);
        }
        delta.push(row);
    }
    // degenerate case: the empty family dualizes to the one-element lattice
    if delta.is_empty() {
        delta.push(vec![0; v.alphabet().len()]);
        val.push(ds.lattice.bottom);
    }

    Ok(UQuotient {
        alphabet: v.alphabet().clone(),
        states: delta.len(),
        init: 0,
        delta,
        val,
        lattice: ds.lattice,
        provenance: Provenance::DualOfVariety,
    })
}

/// Round-trip check of the finite correspondence on one family: the languages
/// recovered from the dual quotient must equal the family exactly, and the
/// join-prime order of the dual lattice must mirror language inclusion
/// (`c ≤ c'` exactly when `L_{c'} ⊆ L_{c}`).
pub fn verify_local_duality(v: &LocalBasicVariety) -> Result<bool, StructureError> {
    let e = dual_of_variety(v)?;
    let primes = e.lattice.join_primes();
    let recovered: Vec<crate::lang::RegularLanguage> = primes
        .iter()
        .map(|&c| {
            let finals = (0..e.states).map(|q| e.lattice.le(c, e.val[q])).collect();
            let dfa = crate::lang::Dfa::new(
                e.alphabet.clone(),
                e.states,
                e.init,
                e.delta.clone(),
                finals,
            )
            .expect("well-formed");
            crate::lang::RegularLanguage::from_dfa(dfa)
        })
        .collect();

    // set equality
    let rec_set = rec_of_uquotient(&e);
    let v_set: std::collections::BTreeSet<_> = v.languages().iter().cloned().collect();
    if rec_set != v_set {
        return Ok(false);
    }
    // order correspondence: the recovery pairing is antitone
    for (i, &c) in primes.iter().enumerate() {
        for (j, &c2) in primes.iter().enumerate() {
            let prime_le = e.lattice.le(c, c2);
            let lang_ge = recovered[j].included_in(&recovered[i]);
            if prime_le != lang_ge {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dualizes the action of a free-monoid homomorphism on a family: computes
/// `V_Δ` as the local variety generated by the preimages of `V_Σ`'s members,
/// and checks the commuting square at the machine level — for every word `w`
/// over Δ, the Σ-side evaluation `ê_Σ(g(w)) = { L : g(w) ∈ L }` must be the
/// preimage along `L ↦ g⁻¹L` of the Δ-side evaluation `ê_Δ(w)`. The check is
/// exact: it walks the reachable synchronized product where the Δ members
/// step by a letter and the Σ members by its image word.
pub fn dual_of_hom_square(
    g: &FreeMonoidHom,
    v_sigma: &LocalBasicVariety,
) -> Result<(LocalBasicVariety, bool), StructureError> {
    if v_sigma.alphabet() != &g.target {
        return Err(StructureError::Malformed(
            "family alphabet must match the hom target".into(),
        ));
    }
    if !is_local_basic_variety(v_sigma) {
        return Err(StructureError::Malformed(
            "family is not closed under derivatives".into(),
        ));
    }
    let preimages: Vec<crate::lang::RegularLanguage> = v_sigma
        .languages()
        .iter()
        .map(|l| l.preimage(g).expect("alphabets checked"))
        .collect();
    let v_delta = generated_local_variety(g.source.clone(), preimages.iter().cloned())
        .expect("preimages live over the hom source");

    // member-level map φ : V_Σ → V_Δ, L ↦ g⁻¹L
    let phi: Vec<usize> = (0..v_sigma.len())
        .map(|i| {
            v_delta
                .index_of(&preimages[i])
                .expect("preimages are members of the generated family")
        })
        .collect();

    let sigma_members = v_sigma.languages();
    let delta_members = v_delta.languages();
    let start = (
        delta_members
            .iter()
            .map(|l| l.dfa().init)
            .collect::<Vec<_>>(),
        sigma_members
            .iter()
            .map(|l| l.dfa().init)
            .collect::<Vec<_>>(),
    );
    let mut pairs = vec![start.clone()];
    let mut seen = std::collections::HashSet::new();
    seen.insert(start);
    let mut frontier = 0;
    let mut commutes = true;
    'walk: while frontier < pairs.len() {
        let (delta_tuple, sigma_tuple) = pairs[frontier].clone();
        frontier += 1;

        for (i, &phi_i) in phi.iter().enumerate() {
            let sigma_accepts = sigma_members[i].dfa().finals[sigma_tuple[i]];
            let delta_accepts = delta_members[phi_i].dfa().finals[delta_tuple[phi_i]];
            if sigma_accepts != delta_accepts {
                commutes = false;
                break 'walk;
            }
        }

        for (a, image_word) in g.image.iter().enumerate() {
            let next_delta: Vec<usize> = delta_members
                .iter()
                .zip(&delta_tuple)
                .map(|(l, &q)| l.dfa().delta[q][a])
                .collect();
            let next_sigma: Vec<usize> = sigma_members
                .iter()
                .zip(&sigma_tuple)
                .map(|(l, &q)| l.dfa().run_from(q, image_word).expect("image over target"))
                .collect();
            let next = (next_delta, next_sigma);
            if seen.insert(next.clone()) {
                pairs.push(next);
            }
        }
    }
    Ok((v_delta, commutes))
}
