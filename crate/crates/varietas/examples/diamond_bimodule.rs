// The two-element group acting on the diamond lattice: the smallest
// interesting recognizer, its predicates, and what reduction does to its
// degenerate quotient.

use varietas::bimodule::{BimoduleCongruence, FreeHomSpec, LatticeBimodule};
use varietas::lang::Alphabet;
use varietas::recognition::recognized_languages;

fn main() -> anyhow::Result<()> {
    let b = LatticeBimodule::diamond_example();
    println!(
        "axioms: {}",
        if b.check_axioms().passed() {
            "pass"
        } else {
            "FAIL"
        }
    );
    println!("star-generated: {}", b.is_star_generated());
    println!("star-embedded:  {}", b.is_star_embedded());
    println!("reduced:        {}", b.is_reduced());

    // the submodule over the trivial submonoid loses generation
    let sub = b.sub_bimodule_on(&[0])?;
    println!(
        "submodule on the identity is star-generated: {}",
        sub.is_star_generated()
    );

    // collapsing the lattice to a point keeps generation but kills reducedness
    let collapse = BimoduleCongruence::new(vec![0, 1], vec![0, 0, 0, 0]);
    let (quotient, _onto) = b.quotient(&collapse)?;
    println!(
        "quotient onto the 1-lattice: generated={}, embedded={}, reduced={}",
        quotient.is_star_generated(),
        quotient.is_star_embedded(),
        quotient.is_reduced()
    );
    let (rereduced, _) = quotient.reduce();
    println!(
        "reducing it collapses the monoid: {} element(s) remain",
        rereduced.monoid.size
    );

    // as a recognizer over Σ = {a} with a ↦ 1, the diamond cuts out parity
    let spec = FreeHomSpec::new(Alphabet::new("a")?, b, vec![1])?;
    println!("recognized languages:");
    for l in recognized_languages(&spec) {
        println!("  {}", l.summary());
    }
    Ok(())
}
