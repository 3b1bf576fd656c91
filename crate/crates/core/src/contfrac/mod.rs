//! Exact subtractive continued fractions.
//!
//! `[a_1, ..., a_k]` denotes `1/(a_1 - 1/(a_2 - ... - 1/a_k))`. Evaluation runs
//! through unimodular 2x2 matrices, so intermediate zero tails pass through
//! the point `1/0` instead of failing, and results come out already reduced.

mod ext_rational;
mod rewrite;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ext_rational::{ExtRational, Parity};
pub use rewrite::{
    ch3_rewrite, collapse_run, exceptional_form, CollapsedRun, ExceptionalForm, RewriteForm,
    RewrittenForm, RunSign,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContFracError {
    #[error("0/0 is not a fraction")]
    ZeroOverZero,
    #[error("cannot parse {0:?}: expected \"p/q\"")]
    Parse(String),
    #[error("continued fraction must be nonempty")]
    Empty,
    #[error("entry {index} is zero")]
    ZeroEntry { index: usize },
    #[error("entry {index} = {value} is odd in an even continued fraction")]
    OddEntry { index: usize, value: i64 },
    #[error("even continued fraction has even length {0}")]
    EvenLength(usize),
    #[error("{0} needs an odd numerator and an even denominator")]
    BadParity(ExtRational),
    #[error("{0} lies outside (0, 1)")]
    OutOfRange(ExtRational),
    #[error("expansion entry does not fit in 64 bits")]
    EntryOverflow,
    #[error("rewrite would produce a zero entry")]
    ZeroEntryProduced,
    #[error("even expansion step is ambiguous at {0}")]
    AmbiguousStep(ExtRational),
}

/// A nonempty sequence of nonzero integer entries.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(entries: Vec<i64>) -> Result<Self, ContFracError> {
        if entries.is_empty() {
            return Err(ContFracError::Empty);
        }
        if let Some(index) = entries.iter().position(|&a| a == 0) {
            return Err(ContFracError::ZeroEntry { index });
        }
        Ok(ContinuedFraction(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> ExtRational {
        eval_cf(self)
    }
}

impl TryFrom<Vec<i64>> for ContinuedFraction {
    type Error = ContFracError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        ContinuedFraction::new(v)
    }
}

impl From<ContinuedFraction> for Vec<i64> {
    fn from(cf: ContinuedFraction) -> Self {
        cf.0
    }
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = ContFracError;

    /// Parses `"a1,a2,..."`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let entries = body
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| ContFracError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        ContinuedFraction::new(entries)
    }
}

/// A continued fraction whose entries are all even, of odd length.
///
/// These are exactly the expansions of fractions with odd numerator and even
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct EvenCF(ContinuedFraction);

impl EvenCF {
    pub fn new(entries: Vec<i64>) -> Result<Self, ContFracError> {
        let cf = ContinuedFraction::new(entries)?;
        if let Some((index, &value)) = cf.0.iter().enumerate().find(|(_, a)| *a % 2 != 0) {
            return Err(ContFracError::OddEntry { index, value });
        }
        if cf.len() % 2 == 0 {
            return Err(ContFracError::EvenLength(cf.len()));
        }
        Ok(EvenCF(cf))
    }

    pub fn entries(&self) -> &[i64] {
        self.0.entries()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_cf(&self) -> &ContinuedFraction {
        &self.0
    }

    pub fn value(&self) -> ExtRational {
        eval_cf(&self.0)
    }
}

impl TryFrom<Vec<i64>> for EvenCF {
    type Error = ContFracError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        EvenCF::new(v)
    }
}

impl From<EvenCF> for Vec<i64> {
    fn from(cf: EvenCF) -> Self {
        cf.0 .0
    }
}

impl fmt::Debug for EvenCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EvenCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Projective vector `(num, den)` acted on by the entry matrices
/// `[[0, 1], [-1, a]]`, i.e. `t -> 1/(a - t)`.
fn apply_entry(a: &BigInt, (n, d): (BigInt, BigInt)) -> (BigInt, BigInt) {
    let next_den = a * &d - &n;
    (d, next_den)
}

/// Value of `[a_1, ..., a_k]`.
pub fn eval_cf(cf: &ContinuedFraction) -> ExtRational {
    eval_entries(cf.entries(), &ExtRational::zero())
}

/// Value of `[a_1, ..., a_j, y]` where the final entry `y` may be any
/// extended rational.
pub fn eval_with_tail(prefix: &[i64], tail: &ExtRational) -> ExtRational {
    let last = tail.recip();
    eval_entries(prefix, &last)
}

/// Folds entries from the right onto an inner value `t`.
fn eval_entries(entries: &[i64], inner: &ExtRational) -> ExtRational {
    let mut v = (inner.numer().clone(), inner.denom().clone());
    for a in entries.iter().rev() {
        v = apply_entry(&BigInt::from(*a), v);
    }
    ExtRational::from_vector(&v.0, &v.1)
}

/// Even integer within distance `< 1` of `num/den`, where `num/den` is never
/// an odd integer. Returns `None` when two candidates tie.
fn nearest_even(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    let (fl, _) = num.div_mod_floor(den);
    let ce = &fl + 1;
    let exact = (num % den).is_zero();
    let candidates: Vec<BigInt> = if exact { vec![fl.clone()] } else { vec![fl.clone(), ce] };
    let mut evens = candidates.into_iter().filter(|c| c.is_even());
    let first = evens.next()?;
    // a second even candidate would mean num/den sits on an odd integer
    if evens.next().is_some() {
        return None;
    }
    Some(first)
}

/// The all-even expansion of `p/q` with `0 < p < q`, `p` odd, `q` even.
///
/// Each step takes the unique even integer within distance `< 1` of the
/// current reciprocal; the parity pattern keeps that choice unambiguous.
pub fn even_expansion(x: &ExtRational) -> Result<EvenCF, ContFracError> {
    if x.is_infinite() || !x.numer().is_positive() || x.numer() >= x.denom() {
        return Err(ContFracError::OutOfRange(x.clone()));
    }
    if x.parity() != Parity::OE {
        return Err(ContFracError::BadParity(x.clone()));
    }
    let mut entries = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() {
        let r = cur.recip();
        let b = nearest_even(r.numer(), r.denom())
            .ok_or_else(|| ContFracError::AmbiguousStep(cur.clone()))?;
        let next = r.subtract_from_integer(&b);
        entries.push(b.to_i64().ok_or(ContFracError::EntryOverflow)?);
        cur = next;
    }
    let cf = EvenCF::new(entries)?;
    debug_assert_eq!(&cf.value(), x);
    Ok(cf)
}

/// Indices `i` (counted from 1) with `b_i b_{i+1} < 0` or `b_i b_{i+1} > 4`.
pub fn channel_indices(cf: &EvenCF) -> Vec<usize> {
    cf.entries()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            let p = w[0] as i128 * w[1] as i128;
            !(0..=4).contains(&p)
        })
        .map(|(i, _)| i + 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(v: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    fn r(p: i64, q: i64) -> ExtRational {
        ExtRational::new(p, q).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_cf(&cf(&[2, 2, 2])), r(3, 4));
        assert_eq!(eval_cf(&cf(&[-2, -2])), r(-2, 3));
        assert_eq!(eval_cf(&cf(&[3, 3])), r(3, 8));
        assert_eq!(eval_cf(&cf(&[4, 2, 4, 2, 2])), r(17, 58));
    }

    #[test]
    fn eval_passes_through_infinity() {
        // the inner tail 1 - 1/1 vanishes and inverts to 1/0
        assert_eq!(eval_cf(&cf(&[1, 1])), ExtRational::infinity());
        assert_eq!(eval_cf(&cf(&[3, 1, 1])), ExtRational::zero());
        assert_eq!(eval_cf(&cf(&[1])), r(1, 1));
    }

    #[test]
    fn eval_with_rational_tail() {
        // [a, 2, y] with y = 7/3
        let v = eval_with_tail(&[4, 2], &r(7, 3));
        // 2 - 3/7 = 11/7; 4 - 7/11 = 37/11; value 11/37
        assert_eq!(v, r(11, 37));
        assert_eq!(eval_with_tail(&[2, 2], &r(2, 1)), r(3, 4));
    }

    #[test]
    fn even_expansion_examples() {
        assert_eq!(even_expansion(&r(3, 8)).unwrap().entries(), &[2, -2, -2]);
        assert_eq!(even_expansion(&r(3, 4)).unwrap().entries(), &[2, 2, 2]);
        assert_eq!(even_expansion(&r(21, 50)).unwrap().entries(), &[2, -2, 2, 2, -2]);
        assert_eq!(even_expansion(&r(1, 2)).unwrap().entries(), &[2]);
    }

    #[test]
    fn even_expansion_rejects_bad_inputs() {
        assert!(matches!(even_expansion(&r(2, 7)), Err(ContFracError::BadParity(_))));
        assert!(matches!(even_expansion(&r(3, 5)), Err(ContFracError::BadParity(_))));
        assert!(matches!(even_expansion(&r(9, 8)), Err(ContFracError::OutOfRange(_))));
        assert!(matches!(even_expansion(&r(-3, 8)), Err(ContFracError::OutOfRange(_))));
        assert!(matches!(
            even_expansion(&ExtRational::infinity()),
            Err(ContFracError::OutOfRange(_))
        ));
    }

    #[test]
    fn channel_index_examples() {
        let e = |v: &[i64]| EvenCF::new(v.to_vec()).unwrap();
        assert_eq!(channel_indices(&e(&[2, 4, 2])), vec![1, 2]);
        assert!(channel_indices(&e(&[2, 2, 2])).is_empty());
        assert_eq!(channel_indices(&e(&[2, -2, 2, 2, -2])), vec![1, 2, 4]);
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(ContinuedFraction::new(vec![]), Err(ContFracError::Empty));
        assert_eq!(ContinuedFraction::new(vec![2, 0]), Err(ContFracError::ZeroEntry { index: 1 }));
        assert_eq!(EvenCF::new(vec![2, 3, 2]), Err(ContFracError::OddEntry { index: 1, value: 3 }));
        assert_eq!(EvenCF::new(vec![2, 2]), Err(ContFracError::EvenLength(2)));
        assert_eq!("[2, -2, -2]".parse::<ContinuedFraction>().unwrap(), cf(&[2, -2, -2]));
        assert!("2,x".parse::<ContinuedFraction>().is_err());
    }
}
