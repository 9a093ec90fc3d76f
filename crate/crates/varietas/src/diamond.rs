//! Formal joins of meets of words, evaluated in any finite distributive
//! lattice. These are the finite terms of the free CDL over the word set.

use crate::error::LangError;
use crate::order::Fdl;

/// A finite join of finite meets of words. The empty outer list denotes the
/// bottom element, an empty inner list the top.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiamondTerm {
    pub terms: Vec<Vec<String>>,
}

impl DiamondTerm {
    pub fn bottom() -> Self {
        DiamondTerm { terms: vec![] }
    }

    pub fn top() -> Self {
        DiamondTerm {
            terms: vec![vec![]],
        }
    }

    pub fn word(w: impl Into<String>) -> Self {
        DiamondTerm {
            terms: vec![vec![w.into()]],
        }
    }

    pub fn join_of_meets<I, J, S>(outer: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = S>,
        S: Into<String>,
    {
        DiamondTerm {
            terms: outer
                .into_iter()
                .map(|inner| inner.into_iter().map(Into::into).collect())
                .collect(),
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().flatten().map(String::as_str)
    }
}

/// Evaluates a diamond term in `target` under a word valuation: the join of
/// the meets of the images, with the empty join as bottom and the empty meet
/// as top.
pub fn eval_diamond<F>(
    term: &DiamondTerm,
    target: &Fdl,
    mut valuation: F,
) -> Result<usize, LangError>
where
    F: FnMut(&str) -> Result<usize, LangError>,
{
    let mut acc = target.bottom;
    for inner in &term.terms {
        let mut m = target.top;
        for w in inner {
            m = target.meet(m, valuation(w)?);
        }
        acc = target.join(acc, m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_join_is_bottom_and_singleton_passes_through() {
        let two = Fdl::two();
        assert_eq!(
            eval_diamond(&DiamondTerm::bottom(), &two, |_| Ok(1)).unwrap(),
            two.bottom
        );
        assert_eq!(
            eval_diamond(&DiamondTerm::top(), &two, |_| Ok(0)).unwrap(),
            two.top
        );
        assert_eq!(
            eval_diamond(&DiamondTerm::word("w"), &two, |_| Ok(1)).unwrap(),
            1
        );
    }

    #[test]
    fn join_of_meets_truth_table() {
        // (w1 ∧ w2) ∨ w3 with f(w1)=f(w3)=0, f(w2)=1 in the 2-element lattice
        let two = Fdl::two();
        let t = DiamondTerm::join_of_meets([vec!["w1", "w2"], vec!["w3"]]);
        let v = |w: &str| Ok(if w == "w2" { 1 } else { 0 });
        assert_eq!(eval_diamond(&t, &two, v).unwrap(), 0);
        // oracle: full truth-table evaluation over the three words
        for bits in 0..8u32 {
            let vals = [bits & 1, bits >> 1 & 1, bits >> 2 & 1].map(|x| x as usize);
            let f = |w: &str| {
                Ok(match w {
                    "w1" => vals[0],
                    "w2" => vals[1],
                    _ => vals[2],
                })
            };
            let expect = ((vals[0] & vals[1]) | vals[2]).min(1);
            assert_eq!(eval_diamond(&t, &two, f).unwrap(), expect);
        }
    }
}
