//! Symbol-stream generation and disjunctiveness diagnostics.
//!
//! A [`SymbolStream`] emits symbols from `1..=N` one at a time. Sources are
//! either deterministic (the Champernowne enumeration, an explicit list, a
//! periodic word) or stochastic, driven by a [`StochasticKernel`] and a
//! seeded RNG. Streams are deterministic functions of their parameters and
//! seed: the RNG is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded via
//! `seed_from_u64`, so identical seeds reproduce identical output on every
//! platform.
//!
//! Whether an infinite stream is disjunctive (contains every finite word)
//! is not decidable from a prefix. The checkers here — [`missing_words`],
//! [`occurrences`] — are therefore explicitly prefix-level necessary
//! conditions, never verdicts about the infinite word.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ifs::FiniteWord;

/// Budget for word enumerations: [`missing_words`] refuses N^m beyond this.
pub const WORD_BUDGET: u64 = 1_000_000;

/// Conditional next-symbol law of an explicit stochastic process.
///
/// The `conditional` method is the process: a function from the full symbol
/// history to a probability vector over `1..=N`. Bernoulli ignores the
/// history, Markov reads its last symbol, and `Ccc` (a chain with complete
/// connections) mixes an arbitrary base kernel with the uniform distribution
/// at weight `alpha`, which minorizes every conditional probability by
/// `alpha/N`.
#[derive(Debug, Clone, PartialEq)]
pub enum StochasticKernel {
    Bernoulli {
        probs: Vec<f64>,
    },
    Markov {
        initial: Vec<f64>,
        rows: Vec<Vec<f64>>,
    },
    Ccc {
        base: Box<StochasticKernel>,
        alpha: f64,
    },
}

const PROB_TOL: f64 = 1e-12;

fn check_distribution(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidInput(format!("{what} must be nonempty")));
    }
    if v.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidInput(format!("{what} has a negative entry")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidInput(format!(
            "{what} sums to {sum}, expected 1 within {PROB_TOL:e}"
        )));
    }
    Ok(())
}

impl StochasticKernel {
    pub fn bernoulli(probs: Vec<f64>) -> Result<Self> {
        check_distribution(&probs, "probability vector")?;
        Ok(StochasticKernel::Bernoulli { probs })
    }

    /// I.i.d. uniform draws over `1..=n`.
    pub fn uniform(n: u32) -> Self {
        let p = 1.0 / n as f64;
        StochasticKernel::Bernoulli {
            probs: vec![p; n as usize],
        }
    }

    pub fn markov(initial: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_distribution(&initial, "initial distribution")?;
        if rows.len() != initial.len() {
            return Err(Error::InvalidInput(
                "transition matrix must have one row per state".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != initial.len() {
                return Err(Error::InvalidInput(format!(
                    "transition row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    initial.len()
                )));
            }
            check_distribution(row, "transition row")?;
        }
        Ok(StochasticKernel::Markov { initial, rows })
    }

    /// Chain with complete connections: at every step the conditional law is
    /// `alpha`·uniform + (1−alpha)·base, whatever the history.
    pub fn ccc(base: StochasticKernel, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidInput(
                "ccc mixing weight must satisfy 0 < alpha <= 1".into(),
            ));
        }
        Ok(StochasticKernel::Ccc {
            base: Box::new(base),
            alpha,
        })
    }

    pub fn alphabet_size(&self) -> u32 {
        match self {
            StochasticKernel::Bernoulli { probs } => probs.len() as u32,
            StochasticKernel::Markov { initial, .. } => initial.len() as u32,
            StochasticKernel::Ccc { base, .. } => base.alphabet_size(),
        }
    }

    /// The conditional distribution of the next symbol given the full
    /// history so far (empty history = first symbol).
    pub fn conditional(&self, history: &[u32]) -> Vec<f64> {
        match self {
            StochasticKernel::Bernoulli { probs } => probs.clone(),
            StochasticKernel::Markov { initial, rows } => match history.last() {
                None => initial.clone(),
                Some(&s) => rows[(s - 1) as usize].clone(),
            },
            StochasticKernel::Ccc { base, alpha } => {
                let n = base.alphabet_size() as f64;
                let floor = alpha / n;
                let base_cond = base.conditional(history);
                let mixed: Vec<f64> = base_cond
                    .iter()
                    .map(|&p| floor + (1.0 - alpha) * p)
                    .collect();
                // Minorization: every conditional probability the sampler
                // ever sees is at least alpha/N.
                assert!(
                    mixed.iter().all(|&p| p >= floor - PROB_TOL),
                    "ccc minorization violated"
                );
                mixed
            }
        }
    }

    /// Whether a Markov chain visits every word: true iff every transition
    /// entry is positive. Requires a Markov kernel with a strictly positive
    /// initial distribution.
    pub fn markov_is_disjunctive(&self) -> Result<bool> {
        match self {
            StochasticKernel::Markov { initial, rows } => {
                if initial.iter().any(|&p| p <= 0.0) {
                    return Err(Error::InvalidInput(
                        "initial distribution must be strictly positive".into(),
                    ));
                }
                Ok(rows.iter().all(|row| row.iter().all(|&p| p > 0.0)))
            }
            _ => Err(Error::KernelKindMismatch { expected: "markov" }),
        }
    }
}

/// Inverse-CDF draw: one uniform variate per symbol, for every kernel kind,
/// so that kernels with identical conditionals produce identical streams
/// from the same seed. Zero-probability symbols are never selected.
fn sample_discrete(probs: &[f64], u: f64) -> u32 {
    let mut cum = 0.0;
    let mut last_positive = 1u32;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_positive = (i + 1) as u32;
            cum += p;
            if u < cum {
                return (i + 1) as u32;
            }
        }
    }
    // Rounding pushed the total slightly below 1; take the last live symbol.
    last_positive
}

// streams are few and long-lived; the RNG-carrying variant's size is fine
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
enum StreamState {
    /// All finite words by length then lexicographic order, concatenated.
    Champernowne { word: Vec<u32>, pos: usize },
    Stochastic {
        kernel: StochasticKernel,
        history: Vec<u32>,
        rng: ChaCha8Rng,
    },
    /// A finite list. Cycles from the start when exhausted, so `next` is
    /// total; consumers that care use no more than the list length.
    Explicit { symbols: Vec<u32>, pos: usize },
    /// A finite word repeated forever.
    Periodic { word: Vec<u32>, pos: usize },
}

/// A stateful single-consumer symbol generator over `1..=N`.
///
/// `next_symbol` never fails. A stream may be moved between threads between
/// calls, but concurrent calls on one stream are not supported.
#[derive(Debug, Clone)]
pub struct SymbolStream {
    alphabet_size: u32,
    state: StreamState,
}

impl SymbolStream {
    /// The Champernowne stream: every finite word, enumerated by length and
    /// then lexicographically (1 < 2 < … < N), concatenated. The resulting
    /// infinite word contains every finite word, hence is disjunctive.
    pub fn champernowne(alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidInput(
                "alphabet_size must be at least 1".into(),
            ));
        }
        Ok(SymbolStream {
            alphabet_size,
            state: StreamState::Champernowne {
                word: vec![1],
                pos: 0,
            },
        })
    }

    /// Stochastic stream driven by `kernel`, seeded deterministically.
    pub fn stochastic(kernel: StochasticKernel, seed: u64) -> Self {
        let alphabet_size = kernel.alphabet_size();
        SymbolStream {
            alphabet_size,
            state: StreamState::Stochastic {
                kernel,
                history: Vec::new(),
                rng: ChaCha8Rng::seed_from_u64(seed),
            },
        }
    }

    /// Replays an explicit list, cycling when exhausted.
    pub fn explicit(word: &FiniteWord) -> Self {
        SymbolStream {
            alphabet_size: word.alphabet_size(),
            state: StreamState::Explicit {
                symbols: word.symbols().to_vec(),
                pos: 0,
            },
        }
    }

    /// Repeats `word` forever.
    pub fn periodic(word: &FiniteWord) -> Self {
        SymbolStream {
            alphabet_size: word.alphabet_size(),
            state: StreamState::Periodic {
                word: word.symbols().to_vec(),
                pos: 0,
            },
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Emits the next symbol; total, never fails.
    pub fn next_symbol(&mut self) -> u32 {
        match &mut self.state {
            StreamState::Champernowne { word, pos } => {
                if *pos == word.len() {
                    advance_champernowne(word, self.alphabet_size);
                    *pos = 0;
                }
                let s = word[*pos];
                *pos += 1;
                s
            }
            StreamState::Stochastic {
                kernel,
                history,
                rng,
            } => {
                let probs = kernel.conditional(history);
                let u: f64 = rng.random();
                let s = sample_discrete(&probs, u);
                history.push(s);
                s
            }
            StreamState::Explicit { symbols, pos }
            | StreamState::Periodic { word: symbols, pos } => {
                let s = symbols[*pos];
                *pos = (*pos + 1) % symbols.len();
                s
            }
        }
    }

    /// Consumes `len` symbols into a word.
    pub fn take_word(&mut self, len: usize) -> Result<FiniteWord> {
        if len == 0 {
            return Err(Error::InvalidInput(
                "requested word length must be >= 1".into(),
            ));
        }
        let symbols = (0..len).map(|_| self.next_symbol()).collect();
        FiniteWord::new(symbols, self.alphabet_size)
    }
}

impl Iterator for SymbolStream {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        Some(self.next_symbol())
    }
}

/// Odometer step through all words: within a length, lexicographic; on
/// overflow, restart one symbol longer.
fn advance_champernowne(word: &mut Vec<u32>, n: u32) {
    for slot in word.iter_mut().rev() {
        if *slot < n {
            *slot += 1;
            return;
        }
        *slot = 1;
    }
    word.iter_mut().for_each(|s| *s = 1);
    word.push(1);
}

/// Length of the Champernowne prefix that ends exactly after all words of
/// length ≤ m: Σ_{j≤m} j·N^j.
pub fn champernowne_prefix_len(alphabet_size: u32, m: u32) -> u64 {
    (1..=m as u64)
        .map(|j| j * (alphabet_size as u64).pow(j as u32))
        .sum()
}

/// All start positions `k ≥ from` (1-based) at which `tau` occurs as a
/// factor of `word`, complete matches only, overlaps counted. A `from`
/// below 1 is treated as 1.
pub fn occurrences(word: &FiniteWord, tau: &FiniteWord, from: usize) -> Vec<usize> {
    let w = word.symbols();
    let t = tau.symbols();
    let from = from.max(1);
    let mut out = Vec::new();
    if t.len() > w.len() {
        return out;
    }
    for k in from..=(w.len() - t.len() + 1) {
        if &w[k - 1..k - 1 + t.len()] == t {
            out.push(k);
        }
    }
    out
}

/// All words of length `m` over the prefix's alphabet that do NOT occur as a
/// factor of `prefix`, in lexicographic order. An empty result is a
/// necessary condition, on this prefix, for the underlying infinite word to
/// be disjunctive — never a proof.
pub fn missing_words(prefix: &FiniteWord, m: usize) -> Result<Vec<FiniteWord>> {
    if m == 0 {
        return Err(Error::InvalidInput("word length m must be >= 1".into()));
    }
    let n = prefix.alphabet_size();
    let total = (n as u128).pow(m as u32);
    if total > WORD_BUDGET as u128 {
        return Err(Error::WordBudgetExceeded {
            requested: total,
            budget: WORD_BUDGET,
        });
    }
    let total = total as usize;
    let mut present = vec![false; total];
    let w = prefix.symbols();
    if w.len() >= m {
        for window in w.windows(m) {
            present[encode(window, n)] = true;
        }
    }
    let mut out = Vec::new();
    for (code, _) in present.iter().enumerate().filter(|(_, &seen)| !seen) {
        out.push(FiniteWord::new(decode(code, m, n), n)?);
    }
    Ok(out)
}

fn encode(word: &[u32], n: u32) -> usize {
    word.iter()
        .fold(0usize, |acc, &s| acc * n as usize + (s - 1) as usize)
}

fn decode(mut code: usize, m: usize, n: u32) -> Vec<u32> {
    let mut out = vec![1u32; m];
    for slot in out.iter_mut().rev() {
        *slot = (code % n as usize) as u32 + 1;
        code /= n as usize;
    }
    out
}

/// Probability that the process realizes `prefix`: the exact product of
/// conditional probabilities along it.
pub fn cylinder_measure(kernel: &StochasticKernel, prefix: &FiniteWord) -> Result<f64> {
    if prefix.alphabet_size() != kernel.alphabet_size() {
        return Err(Error::InvalidInput(
            "prefix alphabet does not match the kernel".into(),
        ));
    }
    let symbols = prefix.symbols();
    let mut measure = 1.0;
    for i in 0..symbols.len() {
        let probs = kernel.conditional(&symbols[..i]);
        measure *= probs[(symbols[i] - 1) as usize];
    }
    Ok(measure)
}

/// The one-scale measure ratio μ(prefix without its last symbol) / μ(prefix):
/// what the cylinder measure gains when the radius crosses one binary scale.
/// For a chain minorized by alpha/N the ratio is bounded by N/alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingRatio {
    pub value: f64,
    /// Set when μ(prefix) = 0; `value` is +∞ in that case.
    pub zero_denominator: bool,
}

pub fn doubling_ratio(kernel: &StochasticKernel, prefix: &FiniteWord) -> Result<DoublingRatio> {
    if prefix.len() < 2 {
        return Err(Error::PrefixTooShort {
            required: 2,
            actual: prefix.len(),
        });
    }
    let shorter = prefix.prefix(prefix.len() - 1)?;
    let numerator = cylinder_measure(kernel, &shorter)?;
    let denominator = cylinder_measure(kernel, prefix)?;
    if denominator == 0.0 {
        return Ok(DoublingRatio {
            value: f64::INFINITY,
            zero_denominator: true,
        });
    }
    Ok(DoublingRatio {
        value: numerator / denominator,
        zero_denominator: false,
    })
}
