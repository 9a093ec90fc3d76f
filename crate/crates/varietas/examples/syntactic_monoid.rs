// Transition monoids of canonical automata — the syntactic monoids used by
// every recognizer construction.

use varietas::lang::RegularLanguage;
use varietas::monoid::transition_monoid;

fn main() -> anyhow::Result<()> {
    for pattern in ["(aa)*", "(a|b)*a", "(ab)*", "a*"] {
        let lang = RegularLanguage::from_regex(pattern)?;
        let tm = transition_monoid(&lang);
        println!("{pattern}: syntactic monoid of size {}", tm.monoid.size);
        for (m, rep) in tm.representatives.iter().enumerate() {
            let shown = if rep.is_empty() { "ε" } else { rep };
            println!(
                "  element {m} represented by {shown:?}, acts as {:?}",
                tm.transforms[m]
            );
        }
        // the monoid recognizes the language through the final-state test
        let dfa = lang.dfa();
        for w in ["", "a", "aa", "aaa"] {
            if lang.alphabet().contains_word(w).is_err() {
                continue;
            }
            let m = tm.monoid.mul_all(
                w.chars()
                    .map(|c| tm.letter_map[lang.alphabet().position(c).unwrap()]),
            );
            assert_eq!(
                dfa.finals[tm.transforms[m][dfa.init]],
                lang.contains_str(w)?
            );
        }
    }
    Ok(())
}
