// Canonical automata and the two language operations everything else is
// built from: two-sided derivatives and homomorphism preimages.

use varietas::lang::{Alphabet, Context, FreeMonoidHom, RegularLanguage};

fn main() -> anyhow::Result<()> {
    let even = RegularLanguage::from_regex("(aa)*")?;
    println!("(aa)*: {}", even.summary());
    println!("canonical DFA: {}", serde_json::to_string(&even.to_json())?);

    // canonical forms decide equality structurally
    let same = RegularLanguage::from_regex("(aa)*(aa)*")?;
    println!("(aa)*(aa)* has the same canonical DFA: {}", same == even);

    // a left derivative shifts the initial state, a right derivative the finals
    let odd = even.derivative(&Context::new("a", ""))?;
    println!("a⁻¹(aa)* = {}", odd.summary());
    assert_eq!(odd, RegularLanguage::from_regex("a(aa)*")?);

    // derivatives compose into a single two-sided context
    let twice = odd.derivative(&Context::new("a", ""))?;
    assert_eq!(twice, even.derivative(&Context::new("aa", ""))?);

    // preimage along c ↦ ab
    let ab_star = RegularLanguage::from_regex("(ab)*")?;
    let c = Alphabet::new("c")?;
    let g = FreeMonoidHom::new(c, ab_star.alphabet().clone(), vec!["ab".into()])?;
    let pre = ab_star.preimage(&g)?;
    println!("g⁻¹(ab)* for g: c ↦ ab is {}", pre.summary());
    assert_eq!(pre, RegularLanguage::from_regex("c*")?);

    // the exchange identity ties the two operations together
    let lhs = ab_star.preimage(&g)?.derivative(&Context::new("c", ""))?;
    let rhs = ab_star.derivative(&Context::new("ab", ""))?.preimage(&g)?;
    assert_eq!(lhs, rhs);
    println!("exchange identity c⁻¹(g⁻¹L) = g(c)⁻¹L·g⁻¹ holds");
    Ok(())
}
