//! Exact simulation of measure-many (Kondacs–Watrous) quantum finite
//! automata: unitary evolution per symbol over the end-marked word, followed
//! by a projective accept/reject/continue measurement.
//!
//! Two measurement modes are provided. `Subspace` is the standard
//! three-outcome projective measurement onto the accept/reject/non-halting
//! subspaces. `Basis` collapses to the computational basis after every step
//! and routes the probability mass by the state partition. The two disagree
//! in general and the discrepancy is deliberately surfaced rather than
//! resolved; they coincide whenever the surviving non-halting component is
//! concentrated on at most one basis state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::LangError;
use crate::lang::{Alphabet, RegularLanguage};

pub const TOLERANCE: f64 = 1e-9;

/// Cap on the exhaustive word enumerations of [`margin_report`] and
/// [`basic_variety_probe`].
pub const MAX_ENUMERATED_WORDS: usize = 2_000_000;

fn enumeration_budget(alphabet: &Alphabet, max_len: usize) -> Result<(), LangError> {
    let mut total: usize = 1;
    let mut layer: usize = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(alphabet.len());
        total = total.saturating_add(layer);
        if total > MAX_ENUMERATED_WORDS {
            return Err(LangError::Malformed(format!(
                "length bound {max_len} enumerates more than {MAX_ENUMERATED_WORDS} words"
            )));
        }
    }
    Ok(())
}

/// Accept / reject / non-halting tag per basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    Accepting,
    Rejecting,
    NonHalting,
}

/// A square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        CMatrix { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, LangError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(LangError::Malformed("matrix must be square".into()));
        }
        Ok(CMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Permutation matrix sending basis state `q` to `perm[q]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (q, &target) in perm.iter().enumerate() {
            data[target * dim + q] = Complex64::new(1.0, 0.0);
        }
        CMatrix { dim, data }
    }

    /// Real rotation by `theta` in the plane of two basis states, identity
    /// elsewhere.
    pub fn rotation(dim: usize, i: usize, j: usize, theta: f64) -> Self {
        let mut m = CMatrix::identity(dim);
        let (c, s) = (theta.cos(), theta.sin());
        m.data[i * dim + i] = Complex64::new(c, 0.0);
        m.data[i * dim + j] = Complex64::new(-s, 0.0);
        m.data[j * dim + i] = Complex64::new(s, 0.0);
        m.data[j * dim + j] = Complex64::new(c, 0.0);
        m
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    /// `max |(T†T − I)[r][c]|`: the unitarity residual.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let mut entry = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    entry += self.at(k, r).conj() * self.at(k, c);
                }
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((entry - expected).norm());
            }
        }
        worst
    }
}

/// Which measurement is performed after each unitary step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMode {
    #[default]
    Subspace,
    Basis,
}

/// A measure-many quantum finite automaton: one unitary per symbol including
/// the two end markers, an initial basis state, and a total partition of the
/// basis states.
#[derive(Debug, Clone)]
pub struct Kwqfa {
    pub basis_states: usize,
    pub alphabet: Alphabet,
    pub init: usize,
    pub partition: Vec<StateKind>,
    /// Unitaries for each alphabet symbol, then the `κ` and `$` markers.
    pub symbol_unitaries: Vec<CMatrix>,
    pub left_marker: CMatrix,
    pub right_marker: CMatrix,
}

/// One simulation step: the symbol consumed, cumulative halting masses and
/// the weight still evolving.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimStep {
    pub symbol: char,
    pub p_acc: f64,
    pub p_rej: f64,
    pub continuing: f64,
}

/// Full per-word record. Conservation (`p_acc + p_rej + continuing = 1`)
/// holds at every step for a valid machine; the worst deviation is exposed by
/// [`SimTrace::conservation_residual`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimTrace {
    pub mode: MeasureMode,
    pub steps: Vec<SimStep>,
}

impl SimTrace {
    pub fn p_acc(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.p_acc)
    }

    pub fn p_rej(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.p_rej)
    }

    pub fn conservation_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| (s.p_acc + s.p_rej + s.continuing - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Validation report with numeric residuals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QfaReport {
    pub unitarity_residuals: BTreeMap<String, f64>,
    pub worst_residual: f64,
    pub partition_total: bool,
    pub passed: bool,
}

impl Kwqfa {
    pub fn validate(&self) -> QfaReport {
        let mut residuals = BTreeMap::new();
        let mut worst: f64 = 0.0;
        let mut named: Vec<(String, &CMatrix)> = self
            .alphabet
            .symbols()
            .iter()
            .zip(&self.symbol_unitaries)
            .map(|(&c, m)| (c.to_string(), m))
            .collect();
        named.push((Alphabet::LEFT_MARKER.to_string(), &self.left_marker));
        named.push((Alphabet::RIGHT_MARKER.to_string(), &self.right_marker));
        let mut shapes_ok = self.init < self.basis_states
            && self.partition.len() == self.basis_states
            && self.symbol_unitaries.len() == self.alphabet.len();
        for (name, m) in named {
            if m.dim != self.basis_states {
                shapes_ok = false;
                continue;
            }
            let r = m.unitarity_residual();
            worst = worst.max(r);
            residuals.insert(name, r);
        }
        QfaReport {
            unitarity_residuals: residuals,
            worst_residual: worst,
            partition_total: self.partition.len() == self.basis_states,
            passed: shapes_ok && worst <= TOLERANCE,
        }
    }

    fn unitary_for(&self, symbol: char) -> Result<&CMatrix, LangError> {
        if symbol == Alphabet::LEFT_MARKER {
            Ok(&self.left_marker)
        } else if symbol == Alphabet::RIGHT_MARKER {
            Ok(&self.right_marker)
        } else {
            Ok(&self.symbol_unitaries[self.alphabet.position(symbol)?])
        }
    }

    /// Exact propagation over `κ·w·$`.
    pub fn simulate(&self, word: &str, mode: MeasureMode) -> Result<SimTrace, LangError> {
        self.alphabet.contains_word(word)?;
        let marked: Vec<char> = std::iter::once(Alphabet::LEFT_MARKER)
            .chain(word.chars())
            .chain(std::iter::once(Alphabet::RIGHT_MARKER))
            .collect();
        match mode {
            MeasureMode::Subspace => self.simulate_subspace(&marked),
            MeasureMode::Basis => self.simulate_basis(&marked),
        }
    }

    /// Probability that `word` is accepted at some stage of the computation.
    pub fn accept_probability(&self, word: &str, mode: MeasureMode) -> Result<f64, LangError> {
        Ok(self.simulate(word, mode)?.p_acc())
    }

    fn simulate_subspace(&self, marked: &[char]) -> Result<SimTrace, LangError> {
        let n = self.basis_states;
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[self.init] = Complex64::new(1.0, 0.0);
        let mut p_acc = 0.0;
        let mut p_rej = 0.0;
        let mut steps = Vec::with_capacity(marked.len());
        for &symbol in marked {
            let u = self.unitary_for(symbol)?;
            let next = u.mul_vec(&psi);
            let mut continuing = vec![Complex64::new(0.0, 0.0); n];
            for q in 0..n {
                let mass = next[q].norm_sqr();
                match self.partition[q] {
                    StateKind::Accepting => p_acc += mass,
                    StateKind::Rejecting => p_rej += mass,
                    StateKind::NonHalting => continuing[q] = next[q],
                }
            }
            psi = continuing;
            let live: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
            steps.push(SimStep {
                symbol,
                p_acc,
                p_rej,
                continuing: live,
            });
        }
        Ok(SimTrace {
            mode: MeasureMode::Subspace,
            steps,
        })
    }

    fn simulate_basis(&self, marked: &[char]) -> Result<SimTrace, LangError> {
        let n = self.basis_states;
        // probability distribution over non-halting basis states
        let mut dist = vec![0.0f64; n];
        dist[self.init] = 1.0;
        let mut p_acc = 0.0;
        let mut p_rej = 0.0;
        let mut steps = Vec::with_capacity(marked.len());
        for &symbol in marked {
            let u = self.unitary_for(symbol)?;
            let mut next = vec![0.0f64; n];
            for q in 0..n {
                if dist[q] == 0.0 {
                    continue;
                }
                for target in 0..n {
                    let mass = dist[q] * u.at(target, q).norm_sqr();
                    if mass == 0.0 {
                        continue;
                    }
                    match self.partition[target] {
                        StateKind::Accepting => p_acc += mass,
                        StateKind::Rejecting => p_rej += mass,
                        StateKind::NonHalting => next[target] += mass,
                    }
                }
            }
            dist = next;
            let live: f64 = dist.iter().sum();
            steps.push(SimStep {
                symbol,
                p_acc,
                p_rej,
                continuing: live,
            });
        }
        Ok(SimTrace {
            mode: MeasureMode::Basis,
            steps,
        })
    }

    /// Embeds a DFA whose letters all act by permutations (a group language)
    /// as a QFA with accept probabilities exactly 0 or 1. Each DFA state gets
    /// a halting partner that the right marker swaps it with.
    pub fn from_permutation_dfa(lang: &RegularLanguage) -> Result<Self, LangError> {
        let dfa = lang.dfa();
        let n = dfa.states;
        for a in 0..dfa.alphabet.len() {
            let mut seen = vec![false; n];
            for q in 0..n {
                let t = dfa.delta[q][a];
                if seen[t] {
                    return Err(LangError::Malformed(format!(
                        "letter {:?} does not act as a permutation",
                        dfa.alphabet.symbols()[a]
                    )));
                }
                seen[t] = true;
            }
        }
        let dim = 2 * n;
        let mut partition = vec![StateKind::NonHalting; dim];
        for q in 0..n {
            partition[n + q] = if dfa.finals[q] {
                StateKind::Accepting
            } else {
                StateKind::Rejecting
            };
        }
        let symbol_unitaries = (0..dfa.alphabet.len())
            .map(|a| {
                let mut perm: Vec<usize> = (0..dim).collect();
                for q in 0..n {
                    perm[q] = dfa.delta[q][a];
                }
                CMatrix::permutation(&perm)
            })
            .collect();
        let mut final_perm: Vec<usize> = (0..dim).collect();
        for q in 0..n {
            final_perm[q] = n + q;
            final_perm[n + q] = q;
        }
        Ok(Kwqfa {
            basis_states: dim,
            alphabet: dfa.alphabet.clone(),
            init: dfa.init,
            partition,
            symbol_unitaries,
            left_marker: CMatrix::identity(dim),
            right_marker: CMatrix::permutation(&final_perm),
        })
    }
}

/// Margin evidence for bounded-error acceptance over all words up to a length
/// bound: the worst accept probability over members and the best over
/// non-members, plus the error bound `p` when they separate across 1/2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginReport {
    pub max_len: usize,
    pub mode: MeasureMode,
    pub min_accept: Option<f64>,
    pub max_accept_complement: Option<f64>,
    pub bounded_error_p: Option<f64>,
    pub words_checked: usize,
}

pub fn margin_report(
    machine: &Kwqfa,
    lang: &RegularLanguage,
    max_len: usize,
    mode: MeasureMode,
) -> Result<MarginReport, LangError> {
    if lang.alphabet() != &machine.alphabet {
        return Err(LangError::AlphabetMismatch {
            expected: machine.alphabet.symbols().iter().collect(),
            got: lang.alphabet().symbols().iter().collect(),
        });
    }
    enumeration_budget(&machine.alphabet, max_len)?;
    let mut min_accept: Option<f64> = None;
    let mut max_complement: Option<f64> = None;
    let mut words_checked = 0;
    for w in machine.alphabet.words_up_to(max_len) {
        let p = machine.accept_probability(&w, mode)?;
        words_checked += 1;
        if lang.contains_str(&w)? {
            min_accept = Some(min_accept.map_or(p, |m: f64| m.min(p)));
        } else {
            max_complement = Some(max_complement.map_or(p, |m: f64| m.max(p)));
        }
    }
    let member_ok = min_accept.is_none_or(|m| m > 0.5);
    let complement_ok = max_complement.is_none_or(|m| m < 0.5);
    let bounded_error_p = if member_ok && complement_ok {
        let from_members = min_accept.unwrap_or(1.0);
        let from_complement = max_complement.map_or(1.0, |m| 1.0 - m);
        Some(from_members.min(from_complement))
    } else {
        None
    };
    Ok(MarginReport {
        max_len,
        mode,
        min_accept,
        max_accept_complement: max_complement,
        bounded_error_p,
        words_checked,
    })
}

/// One context's worth of closure evidence: the empirical cut of the
/// derivative within the length bound, and how far its probabilities stay
/// from the 1/2 threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeEntry {
    pub label: String,
    pub cut_size: usize,
    pub words_checked: usize,
    /// Minimal distance of any checked probability from 1/2.
    pub threshold_margin: f64,
    /// Whether every checked word stays clear of the threshold.
    pub separated: bool,
}

/// Evidence-only report on closure behaviour of the machine's empirical
/// language cut; never conclusive and labeled as such.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub max_len: usize,
    pub conclusive: bool,
    pub entries: Vec<ProbeEntry>,
}

/// Probes the bounded-error cut `{ w : p_acc(w) > 1/2 }` for consistency
/// under derivatives and homomorphism preimages within the length bound.
/// For a context `(v, w)` the derivative cut is `{ u : p_acc(v·u·w) > 1/2 }`;
/// for a hom `g` the preimage cut is `{ u : p_acc(g(u)) > 1/2 }`. The report
/// records each cut and its distance from the threshold.
pub fn basic_variety_probe(
    machine: &Kwqfa,
    contexts: &[crate::lang::Context],
    homs: &[crate::lang::FreeMonoidHom],
    max_len: usize,
    mode: MeasureMode,
) -> Result<ProbeReport, LangError> {
    enumeration_budget(&machine.alphabet, max_len)?;
    let mut entries = Vec::new();
    let mut base_margin = f64::INFINITY;
    let mut base_cut = 0;
    let words = machine.alphabet.words_up_to(max_len);
    for w in &words {
        let p = machine.accept_probability(w, mode)?;
        base_margin = base_margin.min((p - 0.5).abs());
        if p > 0.5 {
            base_cut += 1;
        }
    }
    entries.push(ProbeEntry {
        label: "base cut".into(),
        cut_size: base_cut,
        words_checked: words.len(),
        threshold_margin: base_margin,
        separated: base_margin > TOLERANCE,
    });

    for ctx in contexts {
        machine.alphabet.contains_word(&ctx.left)?;
        machine.alphabet.contains_word(&ctx.right)?;
        let budget = max_len.saturating_sub(ctx.left.len() + ctx.right.len());
        let mut cut = 0;
        let mut margin = f64::INFINITY;
        let inner = machine.alphabet.words_up_to(budget);
        for u in &inner {
            let w = format!("{}{}{}", ctx.left, u, ctx.right);
            let p = machine.accept_probability(&w, mode)?;
            margin = margin.min((p - 0.5).abs());
            if p > 0.5 {
                cut += 1;
            }
        }
        entries.push(ProbeEntry {
            label: format!("derivative ({:?}, {:?})", ctx.left, ctx.right),
            cut_size: cut,
            words_checked: inner.len(),
            threshold_margin: margin,
            separated: margin > TOLERANCE,
        });
    }

    for hom in homs {
        if hom.target != machine.alphabet {
            return Err(LangError::AlphabetMismatch {
                expected: machine.alphabet.symbols().iter().collect(),
                got: hom.target.symbols().iter().collect(),
            });
        }
        enumeration_budget(&hom.source, max_len)?;
        let mut cut = 0;
        let mut margin = f64::INFINITY;
        let source_words = hom.source.words_up_to(max_len);
        for u in &source_words {
            let p = machine.accept_probability(&hom.apply(u)?, mode)?;
            margin = margin.min((p - 0.5).abs());
            if p > 0.5 {
                cut += 1;
            }
        }
        entries.push(ProbeEntry {
            label: format!(
                "preimage over {:?}",
                hom.source.symbols().iter().collect::<String>()
            ),
            cut_size: cut,
            words_checked: source_words.len(),
            threshold_margin: margin,
            separated: margin > TOLERANCE,
        });
    }

    Ok(ProbeReport {
        max_len,
        conclusive: false,
        entries,
    })
}

/// Serialization shape: `{"states":k,"alphabet":"a","partition":"nn a r",
/// "unitaries":{"κ":[[re,im],...],"a":...,"$":...},"init":0}` with matrices
/// row-major as `[re, im]` pairs and whitespace ignored in the partition.
#[derive(Debug, Serialize, Deserialize)]
pub struct KwqfaJson {
    pub states: usize,
    pub alphabet: String,
    pub partition: String,
    pub unitaries: BTreeMap<String, Vec<[f64; 2]>>,
    pub init: usize,
}

impl From<&Kwqfa> for KwqfaJson {
    fn from(q: &Kwqfa) -> Self {
        let encode = |m: &CMatrix| m.data.iter().map(|z| [z.re, z.im]).collect();
        let mut unitaries: BTreeMap<String, Vec<[f64; 2]>> = BTreeMap::new();
        for (i, &c) in q.alphabet.symbols().iter().enumerate() {
            unitaries.insert(c.to_string(), encode(&q.symbol_unitaries[i]));
        }
        unitaries.insert(Alphabet::LEFT_MARKER.to_string(), encode(&q.left_marker));
        unitaries.insert(Alphabet::RIGHT_MARKER.to_string(), encode(&q.right_marker));
        KwqfaJson {
            states: q.basis_states,
            alphabet: q.alphabet.symbols().iter().collect(),
            partition: q
                .partition
                .iter()
                .map(|k| match k {
                    StateKind::Accepting => 'a',
                    StateKind::Rejecting => 'r',
                    StateKind::NonHalting => 'n',
                })
                .collect(),
            unitaries,
            init: q.init,
        }
    }
}

impl TryFrom<KwqfaJson> for Kwqfa {
    type Error = LangError;

    fn try_from(j: KwqfaJson) -> Result<Self, LangError> {
        let alphabet = Alphabet::new(&j.alphabet)?;
        let partition: Vec<StateKind> = j
            .partition
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'a' => Ok(StateKind::Accepting),
                'r' => Ok(StateKind::Rejecting),
                'n' => Ok(StateKind::NonHalting),
                other => Err(LangError::Malformed(format!(
                    "unknown partition tag {other:?}"
                ))),
            })
            .collect::<Result<_, _>>()?;
        if partition.len() != j.states {
            return Err(LangError::Malformed(
                "partition must tag every state".into(),
            ));
        }
        if j.init >= j.states {
            return Err(LangError::Malformed("initial state out of range".into()));
        }
        let decode = |name: &str| -> Result<CMatrix, LangError> {
            let entries = j
                .unitaries
                .get(name)
                .ok_or_else(|| LangError::Malformed(format!("missing unitary for {name:?}")))?;
            if entries.len() != j.states * j.states {
                return Err(LangError::Malformed(format!(
                    "unitary for {name:?} must have {} entries",
                    j.states * j.states
                )));
            }
            Ok(CMatrix {
                dim: j.states,
                data: entries
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            })
        };
        let symbol_unitaries = alphabet
            .symbols()
            .iter()
            .map(|c| decode(&c.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Kwqfa {
            basis_states: j.states,
            alphabet,
            init: j.init,
            partition,
            symbol_unitaries,
            left_marker: decode(&Alphabet::LEFT_MARKER.to_string())?,
            right_marker: decode(&Alphabet::RIGHT_MARKER.to_string())?,
        })
    }
}

/// The two-state rotation machine: one non-halting state, one accepting
/// state, rotation by `theta` on the input letter, identity end markers.
pub fn rotation_machine(theta: f64) -> Kwqfa {
    Kwqfa {
        basis_states: 2,
        alphabet: Alphabet::new("a").expect("valid"),
        init: 0,
        partition: vec![StateKind::NonHalting, StateKind::Accepting],
        symbol_unitaries: vec![CMatrix::rotation(2, 0, 1, theta)],
        left_marker: CMatrix::identity(2),
        right_marker: CMatrix::identity(2),
    }
}

/// The four-state parity machine: two non-halting states swapped by the
/// letter, with the right marker routing even to accept and odd to reject.
pub fn parity_machine() -> Kwqfa {
    Kwqfa::from_permutation_dfa(&RegularLanguage::from_regex("(aa)*").expect("valid"))
        .expect("parity DFA is a permutation automaton")
}
