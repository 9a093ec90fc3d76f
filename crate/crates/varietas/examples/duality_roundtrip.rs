// The finite duality: derivative-closed families dualize to word-lattice
// quotients; the quotient's recognized languages recover the family, and
// quotient order mirrors family inclusion.

use varietas::duality::{dual_of_hom_square, dual_of_variety, verify_local_duality};
use varietas::lang::{Alphabet, FreeMonoidHom, RegularLanguage};
use varietas::recognition::rec_of_uquotient;
use varietas::varieties::{
    derivative_closure, generated_local_variety, quotient_order, QuotientOrder,
};

fn main() -> anyhow::Result<()> {
    let v = derivative_closure(&RegularLanguage::from_regex("(a|b)*a")?).variety;
    println!("family of {} languages over {{a,b}}", v.len());

    let e = dual_of_variety(&v)?;
    println!(
        "dual quotient: {} machine states into a {}-element lattice",
        e.states, e.lattice.size
    );

    let recovered = rec_of_uquotient(&e);
    println!("languages recovered from the dual: {}", recovered.len());
    println!("round trip exact: {}", verify_local_duality(&v)?);

    // growing the family moves the dual upward in the quotient order
    let l1 = RegularLanguage::from_regex_over("(a|b)*a", Alphabet::new("ab")?)?;
    let l2 = RegularLanguage::from_regex_over("(ab)*", Alphabet::new("ab")?)?;
    let small = derivative_closure(&l1).variety;
    let large = generated_local_variety(Alphabet::new("ab")?, [l1, l2])?;
    let e_small = dual_of_variety(&small)?;
    let e_large = dual_of_variety(&large)?;
    match quotient_order(&e_small, &e_large) {
        QuotientOrder::Le => println!("dual(V₁) ≤ dual(V₂) for V₁ ⊆ V₂, as expected"),
        other => println!("unexpected order relation {other:?}"),
    }

    // preimage squares commute at the machine level
    let g = FreeMonoidHom::new(Alphabet::new("c")?, Alphabet::new("ab")?, vec!["ab".into()])?;
    let base = derivative_closure(&RegularLanguage::from_regex("(ab)*")?).variety;
    let (v_delta, commutes) = dual_of_hom_square(&g, &base)?;
    println!(
        "g: c ↦ ab pulls a {}-language family back to {} languages; square commutes: {}",
        base.len(),
        v_delta.len(),
        commutes
    );
    Ok(())
}
