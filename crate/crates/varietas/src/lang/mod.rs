//! Regular languages in canonical minimal form, with the derivative and
//! preimage operations that drive everything downstream.
//!
//! Each [`RegularLanguage`] stores the unique canonical DFA of its language
//! (minimized, reachable-only, states numbered by BFS discovery order over the
//! alphabet order), so language equality is plain structural equality and sets
//! of languages deduplicate for free.

mod dfa;
mod regex;

pub use dfa::{dfa_to_dot, Dfa, DfaJson};

use serde::{Deserialize, Serialize};

use crate::error::LangError;

/// An ordered alphabet of distinct single-character symbols. The end markers
/// `κ` and `$` are reserved and rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub const LEFT_MARKER: char = 'κ';
    pub const RIGHT_MARKER: char = '$';

    pub fn new(symbols: &str) -> Result<Self, LangError> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.is_empty() {
            return Err(LangError::EmptyAlphabet);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if c == Self::LEFT_MARKER || c == Self::RIGHT_MARKER {
                return Err(LangError::ReservedSymbol(c));
            }
            if symbols[..i].contains(&c) {
                return Err(LangError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, letter: char) -> Result<usize, LangError> {
        self.symbols
            .iter()
            .position(|&c| c == letter)
            .ok_or(LangError::ForeignLetter {
                letter,
                alphabet: self.symbols.iter().collect(),
            })
    }

    pub fn contains_word(&self, word: &str) -> Result<(), LangError> {
        for c in word.chars() {
            self.position(c)?;
        }
        Ok(())
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.symbols.len());
            for w in &layer {
                for &c in &self.symbols {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl From<Alphabet> for String {
    fn from(a: Alphabet) -> String {
        a.symbols.iter().collect()
    }
}

impl TryFrom<String> for Alphabet {
    type Error = LangError;
    fn try_from(s: String) -> Result<Self, LangError> {
        Alphabet::new(&s)
    }
}

/// A two-sided context `x ↦ left · x · right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    pub left: String,
    pub right: String,
}

impl Context {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        Context {
            left: left.into(),
            right: right.into(),
        }
    }
}

/// A free-monoid homomorphism `Δ* → Σ*`, determined by the image of each letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeMonoidHom {
    pub source: Alphabet,
    pub target: Alphabet,
    /// `image[i]` is the image word of the i-th source letter.
    pub image: Vec<String>,
}

impl FreeMonoidHom {
    pub fn new(source: Alphabet, target: Alphabet, image: Vec<String>) -> Result<Self, LangError> {
        if image.len() != source.len() {
            return Err(LangError::Malformed(
                "one image word per source letter required".into(),
            ));
        }
        for w in &image {
            target.contains_word(w)?;
        }
        Ok(FreeMonoidHom {
            source,
            target,
            image,
        })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        FreeMonoidHom {
            source: alphabet.clone(),
            target: alphabet.clone(),
            image: alphabet.symbols().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn apply(&self, word: &str) -> Result<String, LangError> {
        let mut out = String::new();
        for c in word.chars() {
            out.push_str(&self.image[self.source.position(c)?]);
        }
        Ok(out)
    }
}

/// A regular language, represented by its canonical minimal DFA.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularLanguage {
    dfa: Dfa,
}

impl RegularLanguage {
    /// Canonicalizes an arbitrary complete DFA.
    pub fn from_dfa(dfa: Dfa) -> Self {
        RegularLanguage {
            dfa: dfa.minimize(),
        }
    }

    /// Compiles a pattern in the minimal regex dialect, inferring the alphabet
    /// from the literals that occur (`ε` = empty word, `∅` = empty language).
    pub fn from_regex(pattern: &str) -> Result<Self, LangError> {
        Ok(Self::from_dfa(regex::compile(pattern, None)?))
    }

    /// Compiles a pattern over an explicitly given alphabet.
    pub fn from_regex_over(pattern: &str, alphabet: Alphabet) -> Result<Self, LangError> {
        Ok(Self::from_dfa(regex::compile(pattern, Some(alphabet))?))
    }

    /// The empty language over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_dfa(Dfa::new(alphabet, 1, 0, vec![vec![0; k]], vec![false]).expect("valid"))
    }

    /// The full language `Σ*`.
    pub fn full(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_dfa(Dfa::new(alphabet, 1, 0, vec![vec![0; k]], vec![true]).expect("valid"))
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.dfa.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.dfa.states
    }

    pub fn contains_str(&self, word: &str) -> Result<bool, LangError> {
        self.dfa.accepts(word)
    }

    pub fn is_empty_language(&self) -> bool {
        self.dfa.states == 1 && !self.dfa.finals[0]
    }

    /// The two-sided derivative `v⁻¹ L w⁻¹ = { u | v·u·w ∈ L }`, canonical.
    ///
    /// The initial state moves along `v` and the finals become the states from
    /// which `w` reaches an accepting state.
    pub fn derivative(&self, ctx: &Context) -> Result<RegularLanguage, LangError> {
        self.alphabet().contains_word(&ctx.left)?;
        self.alphabet().contains_word(&ctx.right)?;
        let init = self.dfa.run_from(self.dfa.init, &ctx.left)?;
        let mut finals = vec![false; self.dfa.states];
        for (q, slot) in finals.iter_mut().enumerate() {
            *slot = self.dfa.finals[self.dfa.run_from(q, &ctx.right)?];
        }
        let d = Dfa::new(
            self.alphabet().clone(),
            self.dfa.states,
            init,
            self.dfa.delta.clone(),
            finals,
        )?;
        Ok(RegularLanguage::from_dfa(d))
    }

    /// The preimage `g⁻¹ L = { w ∈ Δ* | g(w) ∈ L }`, canonical.
    pub fn preimage(&self, hom: &FreeMonoidHom) -> Result<RegularLanguage, LangError> {
        if hom.target != *self.alphabet() {
            return Err(LangError::AlphabetMismatch {
                expected: self.alphabet().symbols().iter().collect(),
                got: hom.target.symbols().iter().collect(),
            });
        }
        let delta: Vec<Vec<usize>> = (0..self.dfa.states)
            .map(|q| {
                hom.image
                    .iter()
                    .map(|w| self.dfa.run_from(q, w).expect("image word checked"))
                    .collect()
            })
            .collect();
        let d = Dfa::new(
            hom.source.clone(),
            self.dfa.states,
            self.dfa.init,
            delta,
            self.dfa.finals.clone(),
        )?;
        Ok(RegularLanguage::from_dfa(d))
    }

    /// Language inclusion, decided on the reachable synchronized product.
    pub(crate) fn included_in(&self, other: &RegularLanguage) -> bool {
        debug_assert_eq!(self.alphabet(), other.alphabet());
        let (pairs, _, _) = self
            .dfa
            .product_reachable(&other.dfa, (self.dfa.init, other.dfa.init));
        pairs
            .iter()
            .all(|&(p, q)| !self.dfa.finals[p] || other.dfa.finals[q])
    }

    pub fn to_json(&self) -> DfaJson {
        DfaJson::from(&self.dfa)
    }

    pub fn to_dot(&self, name: &str) -> String {
        dfa_to_dot(&self.dfa, name)
    }

    /// A short human-readable summary: state count plus sample words.
    pub fn summary(&self) -> String {
        let mut members = Vec::new();
        for w in self.alphabet().words_up_to(4) {
            if self.contains_str(&w).unwrap_or(false) {
                members.push(if w.is_empty() { "ε".to_string() } else { w });
                if members.len() == 5 {
                    break;
                }
            }
        }
        let sample = if members.is_empty() {
            "∅-like (no words ≤ 4)".to_string()
        } else {
            members.join(", ")
        };
        format!("{} states; shortest members: {}", self.dfa.states, sample)
    }
}
