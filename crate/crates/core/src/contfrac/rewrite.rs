//! Rewrites that trade runs of `±2` for fewer, odd entries.

use serde::{Deserialize, Serialize};

use super::{eval_with_tail, ContFracError, ContinuedFraction, EvenCF, ExtRational};

/// Which run identity to apply: a run of `2`s or a run of `-2`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunSign {
    Plus,
    Minus,
}

impl RunSign {
    pub fn as_i64(self) -> i64 {
        match self {
            RunSign::Plus => 1,
            RunSign::Minus => -1,
        }
    }

    pub fn from_i64(s: i64) -> Option<Self> {
        match s {
            1 => Some(RunSign::Plus),
            -1 => Some(RunSign::Minus),
            _ => None,
        }
    }
}

/// `[first, second, tail]` where the tail may be any nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedRun {
    pub first: i64,
    pub second: i64,
    pub tail: ExtRational,
}

impl CollapsedRun {
    pub fn value(&self) -> ExtRational {
        eval_with_tail(&[self.first, self.second], &self.tail)
    }

    /// The three-entry fraction, available when the tail is an integer.
    pub fn to_cf(&self) -> Option<ContinuedFraction> {
        let last = self.tail.to_i64()?;
        ContinuedFraction::new(vec![self.first, self.second, last]).ok()
    }
}

/// Collapses `[a, ±2 (k times), y]` into three entries.
///
/// A run of `2`s gives `[a-1, -(k+1), y-1]`; a run of `-2`s gives
/// `[a+1, k+1, y+1]`. Both sides have the same value.
pub fn collapse_run(
    a: i64,
    k: u32,
    y: &ExtRational,
    sign: RunSign,
) -> Result<CollapsedRun, ContFracError> {
    if a == 0 {
        return Err(ContFracError::ZeroEntry { index: 0 });
    }
    if y.is_zero() || y.is_infinite() {
        return Err(ContFracError::ZeroEntry { index: k as usize + 1 });
    }
    if k == 0 {
        return Err(ContFracError::Empty);
    }
    let s = sign.as_i64();
    let first = a - s;
    let tail = y.add_integer(-s);
    if first == 0 || tail.is_zero() {
        return Err(ContFracError::ZeroEntryProduced);
    }
    let second = -s * (i64::from(k) + 1);
    Ok(CollapsedRun { first, second, tail })
}

/// `[a, 2^pre, 4, 2^post]` (sign `Plus`) or `[a, -2^pre, -4, -2^post]`
/// (sign `Minus`), the shapes that resist a three-channel path argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExceptionalForm {
    pub a: i64,
    pub pre_run: u32,
    pub post_run: u32,
    pub sign: RunSign,
}

impl ExceptionalForm {
    /// Rebuilds the even fraction this decomposition describes.
    pub fn to_even_cf(&self) -> EvenCF {
        let s = self.sign.as_i64();
        let mut v = vec![self.a];
        v.extend(std::iter::repeat_n(2 * s, self.pre_run as usize));
        v.push(4 * s);
        v.extend(std::iter::repeat_n(2 * s, self.post_run as usize));
        EvenCF::new(v).expect("exceptional decomposition has odd length")
    }
}

/// Detects the exceptional shape, if `cf` has it.
pub fn exceptional_form(cf: &EvenCF) -> Option<ExceptionalForm> {
    let e = cf.entries();
    let (&a, rest) = e.split_first()?;
    let s = match rest.first()? {
        2 | 4 => 1,
        -2 | -4 => -1,
        _ => return None,
    };
    let min_a = if s == 1 { 4 } else { 2 };
    if a < min_a {
        return None;
    }
    let four = rest.iter().position(|&b| b == 4 * s)?;
    let (pre, post) = (&rest[..four], &rest[four + 1..]);
    if pre.is_empty() || post.is_empty() {
        return None;
    }
    if pre.iter().chain(post).any(|&b| b != 2 * s) {
        return None;
    }
    Some(ExceptionalForm {
        a,
        pre_run: pre.len() as u32,
        post_run: post.len() as u32,
        sign: if s == 1 { RunSign::Plus } else { RunSign::Minus },
    })
}

/// The four odd-entry shapes an exceptional form rewrites to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RewriteForm {
    /// `[2m+1, 2n, 2, 2l-1]`, `m >= 1`, `n <= -1`, `l <= -1`
    One,
    /// `[2m+1, 2n-1, 2, 2l]`, `m >= 1`, `n <= -1`, `l <= -1`
    Two,
    /// `[2m+1, 2n, -2, 2l-1]`, `m >= 1`, `n >= 1`, `l >= 2`
    Three,
    /// `[2m+1, 2n-1, -2, 2l]`, `m >= 1`, `n >= 2`, `l >= 1`
    Four,
}

impl RewriteForm {
    pub fn id(self) -> u8 {
        match self {
            RewriteForm::One => 1,
            RewriteForm::Two => 2,
            RewriteForm::Three => 3,
            RewriteForm::Four => 4,
        }
    }

    /// The literal fraction for the given parameters.
    pub fn cf(self, m: i64, n: i64, l: i64) -> Vec<i64> {
        match self {
            RewriteForm::One => vec![2 * m + 1, 2 * n, 2, 2 * l - 1],
            RewriteForm::Two => vec![2 * m + 1, 2 * n - 1, 2, 2 * l],
            RewriteForm::Three => vec![2 * m + 1, 2 * n, -2, 2 * l - 1],
            RewriteForm::Four => vec![2 * m + 1, 2 * n - 1, -2, 2 * l],
        }
    }

    /// Whether `(m, n, l)` meets this form's stated constraints.
    pub fn admits(self, m: i64, n: i64, l: i64) -> bool {
        m >= 1
            && match self {
                RewriteForm::One | RewriteForm::Two => n <= -1 && l <= -1,
                RewriteForm::Three => n >= 1 && l >= 2,
                RewriteForm::Four => n >= 2 && l >= 1,
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewrittenForm {
    pub cf: ContinuedFraction,
    pub form: RewriteForm,
    pub m: i64,
    pub n: i64,
    pub l: i64,
}

/// Rewrites an exceptional form into one of four four-entry odd shapes.
pub fn ch3_rewrite(form: &ExceptionalForm) -> RewrittenForm {
    let a = form.a;
    let b = i64::from(form.pre_run);
    let c = i64::from(form.post_run);
    let (kind, m, n, l) = match (form.sign, b % 2 == 1) {
        (RunSign::Plus, true) => (RewriteForm::One, (a - 2) / 2, -(b + 1) / 2, -c / 2),
        (RunSign::Plus, false) => (RewriteForm::Two, (a - 2) / 2, -b / 2, -(c + 1) / 2),
        (RunSign::Minus, true) => (RewriteForm::Three, a / 2, (b + 1) / 2, (c + 2) / 2),
        (RunSign::Minus, false) => (RewriteForm::Four, a / 2, (b + 2) / 2, (c + 1) / 2),
    };
    let cf = ContinuedFraction::new(kind.cf(m, n, l)).expect("rewrite entries are odd or ±2");
    RewrittenForm { cf, form: kind, m, n, l }
}
