// The full recognizer pipeline for one language: derivative closure,
// syntactic monoid, the canonical monoid recognizer, and the minimal reduced
// recognizer with its recognized set.

use varietas::bimodule::recognizer_from_monoid;
use varietas::lang::RegularLanguage;
use varietas::monoid::transition_monoid;
use varietas::recognition::{minimal_recognizer, recognized_variety, recognizes};
use varietas::varieties::derivative_closure;

fn main() -> anyhow::Result<()> {
    let lang = RegularLanguage::from_regex("(aa)*")?;

    let closure = derivative_closure(&lang);
    println!("derivative closure of (aa)*:");
    for l in closure.variety.languages() {
        println!("  {}", l.summary());
    }

    let tm = transition_monoid(&lang);
    println!("syntactic monoid size: {}", tm.monoid.size);

    // the canonical recognizer over the free lattice on the monoid carrier
    let canonical =
        recognizer_from_monoid(&tm.monoid, lang.alphabet().clone(), tm.letter_map.clone())?;
    println!(
        "canonical recognizer: lattice of {} elements, recognizes (aa)*: {}",
        canonical.target.lattice.size,
        recognizes(&canonical, &lang)?
    );

    // the minimal reduced recognizer lives on the up-sets of the closure
    let (bimodule, spec) = minimal_recognizer(&lang)?;
    println!(
        "minimal recognizer: monoid {}, lattice {}, reduced: {}",
        bimodule.monoid.size,
        bimodule.lattice.size,
        bimodule.is_reduced()
    );
    let rec = recognized_variety(&spec);
    assert_eq!(rec, closure.variety);
    println!("it recognizes exactly the derivative closure");
    Ok(())
}
