//! Brute-force verification suites over bounded ranges.
//!
//! Each suite recomputes what it checks with its own exact evaluator and its
//! own channel-index count, so a bug in the library cannot confirm itself.

mod lemmas;
mod paths;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::contfrac::ExtRational;

pub use lemmas::{
    negative_control_a1, verify_lemma_a1, verify_lemma_a2, verify_lemma_a3, A1Range, A2Range, A3Range,
};
pub use paths::{verify_canonicalization, verify_prop_2_3, CanonRange, Prop23Range};

/// One failed check, with enough data to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub actual: String,
    pub detail: String,
}

impl Counterexample {
    pub fn new(input: impl Into<String>, expected: impl ToString, actual: impl ToString, detail: &str) -> Self {
        Counterexample {
            input: input.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            detail: detail.to_string(),
        }
    }
}

/// A deliberately corrupted check run alongside a suite. It must fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeControl {
    pub description: String,
    pub cases: u64,
    pub detected: u64,
    pub sample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub range: Value,
    pub cases: u64,
    pub passed: bool,
    pub failures: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<NegativeControl>,
}

impl SuiteReport {
    fn new(suite: &str, range: Value) -> Self {
        SuiteReport { suite: suite.into(), range, cases: 0, passed: true, failures: Vec::new(), negative_control: None }
    }

    /// Combines reports of disjoint parts of one enumeration.
    fn absorb(&mut self, part: Tally) {
        self.cases += part.cases;
        self.failures.extend(part.failures);
        self.passed = self.failures.is_empty();
    }

    /// Attaches a control; an undetected corruption is itself a failure.
    fn with_control(mut self, control: NegativeControl) -> Self {
        if control.detected == 0 {
            self.failures.push(Counterexample::new(
                control.description.clone(),
                "at least one detected failure",
                "0",
                "negative control passed, so the harness cannot tell right from wrong",
            ));
        }
        self.negative_control = Some(control);
        self.passed = self.failures.is_empty();
        self
    }
}

/// Cases and failures from one worker.
#[derive(Debug, Default)]
struct Tally {
    cases: u64,
    failures: Vec<Counterexample>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self
    }

    fn check(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) {
        self.cases += 1;
        if !ok {
            self.failures.push(fail());
        }
    }
}

/// Runs `work` over `items` in parallel and merges in input order.
fn par_tally<T: Sync>(items: &[T], work: impl Fn(&T) -> Tally + Sync + Send) -> Tally {
    items.par_iter().map(work).reduce(Tally::default, Tally::merge)
}

/// Runs `f` on a pool of `jobs` threads, or the global pool when `jobs` is 0.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Reference evaluator over `num-rational`, with `None` for `1/0`.
///
/// `[x_1, ..., x_k] = 1/(x_1 - 1/(x_2 - ... - 1/x_k))`, where the entries may
/// be arbitrary rationals.
pub(crate) fn reference_value(entries: &[BigRational]) -> Option<BigRational> {
    let recip = |x: Option<BigRational>| match x {
        None => Some(BigRational::zero()),
        Some(v) if v.is_zero() => None,
        Some(v) => Some(v.recip()),
    };
    let (last, rest) = entries.split_last()?;
    let mut inner = Some(last.clone());
    for a in rest.iter().rev() {
        inner = recip(inner).map(|r| a - r);
    }
    recip(inner)
}

pub(crate) fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect()
}

pub(crate) fn to_ext(x: &Option<BigRational>) -> ExtRational {
    match x {
        None => ExtRational::infinity(),
        Some(v) => ExtRational::new(v.numer().clone(), v.denom().clone()).expect("denominator is nonzero"),
    }
}

pub(crate) fn show(x: &Option<BigRational>) -> String {
    to_ext(x).to_string()
}

pub(crate) fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Channel indices counted without the library.
pub(crate) fn count_indices(b: &[i64]) -> usize {
    (1..b.len()).filter(|&i| b[i - 1] * b[i] < 0 || b[i - 1] * b[i] > 4).count()
}

/// `b_1 >= 4`, or `b_1 = 2` and `b_2 <= -2`.
pub(crate) fn head_ok(b: &[i64]) -> bool {
    b[0] >= 4 || (b[0] == 2 && b.len() > 1 && b[1] <= -2)
}

/// Nonzero even integers in `[-bound, bound]`.
pub(crate) fn even_entries(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|x| *x != 0 && x % 2 == 0).collect()
}

/// Every sequence of length `k` over `alphabet` that starts with `prefix`.
pub(crate) fn sequences_with_prefix(prefix: &[i64], k: usize, alphabet: &[i64], mut visit: impl FnMut(&[i64])) {
    if prefix.len() > k || alphabet.is_empty() {
        return;
    }
    let mut v = prefix.to_vec();
    v.resize(k, alphabet[0]);
    let free = k - prefix.len();
    let mut digits = vec![0usize; free];
    loop {
        visit(&v);
        let mut pos = free;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < alphabet.len() {
                v[prefix.len() + pos] = alphabet[digits[pos]];
                break;
            }
            digits[pos] = 0;
            v[prefix.len() + pos] = alphabet[0];
        }
    }
}

/// Head-normalized prefixes `(b_1, b_2)` over the alphabet, the unit of work
/// handed to each worker.
pub(crate) fn head_prefixes(alphabet: &[i64]) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for &a in alphabet {
        for &b in alphabet {
            if head_ok(&[a, b]) {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Names accepted by `run_suite`.
pub const SUITES: [&str; 5] = ["a1", "a2", "a3", "prop23", "canon"];

/// Optional overrides for the suite ranges; `None` keeps the default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bounds {
    pub bound: Option<i64>,
    pub k_max: Option<usize>,
}

/// Runs the named suite with defaults adjusted by `bounds`.
///
/// `bound` is the entry bound (the numerator range for `a1`, `a_max` for
/// `a2`, `q_max` for `canon`); `k_max` is the longest run or expansion.
pub fn run_suite(name: &str, bounds: Bounds) -> Option<SuiteReport> {
    let odd_upto = |k: usize, lo: usize| (lo..=k).filter(|k| k % 2 == 1).collect::<Vec<_>>();
    Some(match name {
        "a1" => {
            let mut r = A1Range::default();
            if let Some(b) = bounds.bound {
                r.a_max = b;
            }
            if let Some(k) = bounds.k_max {
                r.k_max = k as u32;
            }
            verify_lemma_a1(&r)
        }
        "a2" => {
            let mut r = A2Range::default();
            if let Some(b) = bounds.bound {
                r.a_max = b;
            }
            if let Some(k) = bounds.k_max {
                r.run_sum_max = k as u32;
            }
            verify_lemma_a2(&r)
        }
        "a3" => {
            let mut r = A3Range::default();
            if let Some(b) = bounds.bound {
                r.entry_bound = b;
            }
            if let Some(k) = bounds.k_max {
                r.k_set = odd_upto(k, 3);
            }
            verify_lemma_a3(&r)
        }
        "prop23" => {
            let mut r = Prop23Range::default();
            if let Some(b) = bounds.bound {
                r.entry_bound = b;
            }
            if let Some(k) = bounds.k_max {
                r.k_set = odd_upto(k, 3);
            }
            verify_prop_2_3(&r)
        }
        "canon" => {
            let mut r = CanonRange::default();
            if let Some(b) = bounds.bound {
                r.q_max = b;
            }
            verify_canonicalization(&r)
        }
        _ => return None,
    })
}
