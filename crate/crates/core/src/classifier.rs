//! From a fraction to a verdict: either a three-channel witness ruling out
//! complete exceptional surgery, or the family the link belongs to along with
//! its candidate slopes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::contfrac::{
    ch3_rewrite, channel_indices, even_expansion, exceptional_form, ContFracError, ContinuedFraction, EvenCF,
    ExtRational, RewriteForm,
};
use crate::pathfinder::{construct_case_path, AllowablePath, CaseLabel, PathError};
use crate::slopes::{candidate_slopes, Policy, SlopePair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} needs an odd numerator and an even denominator")]
    BadParity(ExtRational),
    #[error("{0} is a torus link (numerator is ±1 modulo the denominator)")]
    TorusLink(ExtRational),
    #[error("{0} does not name a two-bridge link")]
    Trivial(ExtRational),
    #[error("no representative of {0} has a normalized head")]
    NoCanonicalRepresentative(ExtRational),
    #[error("{0} matches no family")]
    NoMatch(EvenCF),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A1,
    B1,
    B2,
    B3,
    B4,
    C1,
    C2,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::A1, Family::B1, Family::B2, Family::B3, Family::B4, Family::C1, Family::C2];

    /// The name used in the literature, e.g. `a-1`.
    pub fn label(self) -> &'static str {
        match self {
            Family::A1 => "a-1",
            Family::B1 => "b-1",
            Family::B2 => "b-2",
            Family::B3 => "b-3",
            Family::B4 => "b-4",
            Family::C1 => "c-1",
            Family::C2 => "c-2",
        }
    }

    pub fn has_l(self) -> bool {
        self != Family::A1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Family {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('-', "");
        Family::ALL
            .into_iter()
            .find(|f| f.label().replace('-', "") == key)
            .ok_or_else(|| ClassifyError::InvalidParameters(format!("unknown family {s:?}")))
    }
}

/// A family together with its integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyMatch {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
}

impl FamilyMatch {
    pub fn new(family: Family, m: i64, n: i64, l: Option<i64>) -> Result<Self, ClassifyError> {
        let fm = FamilyMatch { family, m, n, l };
        fm.check()?;
        Ok(fm)
    }

    /// `sgn(l)`, meaningful for the four-entry families.
    pub fn sgn_l(&self) -> Option<i64> {
        match self.family {
            Family::C1 | Family::C2 => self.l.map(i64::signum),
            _ => None,
        }
    }

    /// Checks the parameter ranges of the family.
    pub fn check(&self) -> Result<(), ClassifyError> {
        let FamilyMatch { family, m, n, l } = *self;
        let bad = |why: &str| Err(ClassifyError::InvalidParameters(format!("{family}({m}, {n}, {l:?}): {why}")));
        if m < 1 {
            return bad("m must be at least 1");
        }
        let l = match (family.has_l(), l) {
            (false, None) => 0,
            (false, Some(_)) => return bad("takes no l"),
            (true, None) => return bad("needs l"),
            (true, Some(l)) => l,
        };
        let ok = match family {
            Family::A1 => n != 0 && n != 1,
            Family::B1 => n.abs() >= 2 && l.abs() >= 2 && (m > 1 || n <= -2),
            Family::B2 | Family::B3 => n.abs() >= 2 && l >= 1 && (m > 1 || n <= -2),
            Family::B4 | Family::C1 => n != 0 && l != 0 && l != 1,
            Family::C2 => n != 0 && n != 1 && l != 0,
        };
        if ok {
            Ok(())
        } else {
            bad("outside the family's range")
        }
    }
}

impl fmt::Display for FamilyMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.l {
            Some(l) => write!(f, "{}(m={}, n={}, l={})", self.family, self.m, self.n, l),
            None => write!(f, "{}(m={}, n={})", self.family, self.m, self.n),
        }
    }
}

/// The literal continued fraction of a family member.
pub fn family_cf(fm: &FamilyMatch) -> Result<ContinuedFraction, ClassifyError> {
    fm.check()?;
    let (m, n) = (fm.m, fm.n);
    let l = fm.l.unwrap_or(0);
    let s = l.signum();
    let entries = match fm.family {
        Family::A1 => vec![2 * m + 1, 2 * n - 1],
        Family::B1 => vec![2 * m, 2 * n, 2 * l],
        Family::B2 => vec![2 * m, 2 * n - 1, -2 * l],
        Family::B3 => vec![2 * m, 2 * n + 1, 2 * l],
        Family::B4 => vec![2 * m + 1, 2 * n, 2 * l - 1],
        Family::C1 => vec![2 * m + 1, 2 * n, -2 * s, 2 * l - 1],
        Family::C2 => vec![2 * m + 1, 2 * n - 1, -2 * s, 2 * l],
    };
    Ok(ContinuedFraction::new(entries)?)
}

/// Reduces the numerator into `(0, q)` and rejects fractions that do not
/// name a hyperbolic two-bridge link.
pub fn validate(x: &ExtRational) -> Result<ExtRational, ClassifyError> {
    if x.is_infinite() || x.is_zero() {
        return Err(ClassifyError::Trivial(x.clone()));
    }
    let q = x.denom();
    if x.numer().is_even() || q.is_odd() {
        return Err(ClassifyError::BadParity(x.clone()));
    }
    let p = x.numer().mod_floor(q);
    if p.is_one() || (q - &p).is_one() {
        return Err(ClassifyError::TorusLink(x.clone()));
    }
    Ok(ExtRational::new(p, q.clone())?)
}

/// Head condition: `b_1 >= 4`, or `b_1 = 2` and `b_2 <= -2`.
pub fn has_normalized_head(cf: &EvenCF) -> bool {
    let b = cf.entries();
    b[0] >= 4 || (b[0] == 2 && b.get(1).is_some_and(|&x| x <= -2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Canonical {
    pub cf: EvenCF,
    pub mirrored: bool,
    pub representative: ExtRational,
}

/// Picks the first of `p`, `p^-1`, `q-p`, `(q-p)^-1` (mod `q`) whose even
/// expansion has a normalized head. The last two describe the mirror image.
pub fn canonicalize(x: &ExtRational) -> Result<Canonical, ClassifyError> {
    let x = validate(x)?;
    let q = x.denom().clone();
    let p = x.numer().clone();
    let inv = |a: &BigInt| -> BigInt {
        let e = a.extended_gcd(&q);
        e.x.mod_floor(&q)
    };
    let flipped = &q - &p;
    let orbit = [(p.clone(), false), (inv(&p), false), (flipped.clone(), true), (inv(&flipped), true)];
    for (num, mirrored) in orbit {
        let rep = ExtRational::new(num, q.clone())?;
        let cf = even_expansion(&rep)?;
        if has_normalized_head(&cf) {
            return Ok(Canonical { cf, mirrored, representative: rep });
        }
    }
    Err(ClassifyError::NoCanonicalRepresentative(x))
}

fn runs_of(b: &[i64], v: i64) -> bool {
    !b.is_empty() && b.iter().all(|&x| x == v)
}

/// Identifies the family of a canonical fraction with at most two channel
/// indices, or of an exceptional shape.
pub fn match_family(cf: &EvenCF) -> Result<FamilyMatch, ClassifyError> {
    let fm = match_shape(cf).ok_or_else(|| ClassifyError::NoMatch(cf.clone()))?;
    fm.check().map_err(|_| ClassifyError::NoMatch(cf.clone()))?;
    let rebuilt = family_cf(&fm)?;
    if rebuilt.value() != cf.value() {
        return Err(ClassifyError::NoMatch(cf.clone()));
    }
    Ok(fm)
}

fn match_shape(cf: &EvenCF) -> Option<FamilyMatch> {
    let b = cf.entries();
    let k = b.len() as i64;
    let fm = |family, m, n, l| Some(FamilyMatch { family, m, n, l });
    if let Some(form) = exceptional_form(cf) {
        let w = ch3_rewrite(&form);
        let family = match w.form {
            RewriteForm::One | RewriteForm::Three => Family::C1,
            RewriteForm::Two | RewriteForm::Four => Family::C2,
        };
        return fm(family, w.m, w.n, Some(w.l));
    }
    if !has_normalized_head(cf) || k < 3 {
        return None;
    }
    let a = b[0];
    let rest = &b[1..];
    if runs_of(rest, 2) {
        return fm(Family::A1, (a - 2) / 2, (1 - k) / 2, None);
    }
    if runs_of(rest, -2) {
        return fm(Family::A1, a / 2, (k + 1) / 2, None);
    }
    let second = rest[0];
    let tail = &rest[1..];
    if second.abs() >= 4 {
        let (m, n) = (a / 2, second / 2);
        if let [c] = *tail {
            if c.abs() >= 4 {
                return fm(Family::B1, m, n, Some(c / 2));
            }
        }
        let c = tail.len() as i64;
        if runs_of(tail, 2) {
            return fm(Family::B2, m, n, Some((c + 1) / 2));
        }
        if runs_of(tail, -2) {
            return fm(Family::B3, m, n, Some((c + 1) / 2));
        }
        return None;
    }
    // a run of ±2 after the head
    let s = second.signum();
    let run = rest.iter().take_while(|&&x| x == 2 * s).count();
    let after = &rest[run..];
    let r = run as i64;
    match (s, after) {
        (1, [c]) if c.abs() >= 4 => fm(Family::B4, (a - 2) / 2, -(r + 1) / 2, Some(c / 2)),
        (-1, [c]) if c.abs() >= 4 => fm(Family::B4, a / 2, (r + 1) / 2, Some((c + 2) / 2)),
        (1, tail) if runs_of(tail, -2) => {
            // [a, 2^r, -2^c] = [a-1, -(r+1), -2, c]
            let c = tail.len() as i64;
            let m = (a - 2) / 2;
            match (r % 2 == 1, c) {
                (true, 1) => fm(Family::B4, m, -(r + 1) / 2, Some(-1)),
                (true, _) => fm(Family::C1, m, -(r + 1) / 2, Some((c + 1) / 2)),
                (false, _) => fm(Family::C2, m, -r / 2, Some(c / 2)),
            }
        }
        (-1, tail) if runs_of(tail, 2) => {
            // [a, -2^r, 2^c] = [a+1, r+1, 2, -c]
            let c = tail.len() as i64;
            let m = a / 2;
            match (r % 2 == 1, c) {
                (true, 1) => fm(Family::B4, m, (r + 1) / 2, Some(2)),
                (true, _) => fm(Family::C1, m, (r + 1) / 2, Some((1 - c) / 2)),
                (false, _) => fm(Family::C2, m, (r + 2) / 2, Some(-c / 2)),
            }
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    /// A three-channel allowable path exists, so no complete exceptional
    /// surgery is possible.
    NoCompleteExceptional {
        canonical_fraction: ExtRational,
        cf: EvenCF,
        mirrored: bool,
        case: CaseLabel,
        witness: AllowablePath,
    },
    /// The link is a family member; `slopes` lists the tabulated candidates.
    Candidate {
        canonical_fraction: ExtRational,
        cf: EvenCF,
        mirrored: bool,
        #[serde(rename = "match")]
        family: FamilyMatch,
        slopes: Vec<SlopePair>,
    },
}

impl Verdict {
    pub fn is_candidate(&self) -> bool {
        matches!(self, Verdict::Candidate { .. })
    }

    pub fn mirrored(&self) -> bool {
        match self {
            Verdict::NoCompleteExceptional { mirrored, .. } | Verdict::Candidate { mirrored, .. } => *mirrored,
        }
    }

    pub fn canonical_fraction(&self) -> &ExtRational {
        match self {
            Verdict::NoCompleteExceptional { canonical_fraction, .. }
            | Verdict::Candidate { canonical_fraction, .. } => canonical_fraction,
        }
    }
}

/// Classifies with the default slope policy.
pub fn classify(x: &ExtRational) -> Result<Verdict, ClassifyError> {
    classify_with(x, Policy::Union)
}

pub fn classify_with(x: &ExtRational, policy: Policy) -> Result<Verdict, ClassifyError> {
    let Canonical { cf, mirrored, representative } = canonicalize(x)?;
    if channel_indices(&cf).len() >= 3 && exceptional_form(&cf).is_none() {
        let built = construct_case_path(&cf)?;
        debug_assert!(built.path.channel_count() >= 3);
        return Ok(Verdict::NoCompleteExceptional {
            canonical_fraction: representative,
            cf,
            mirrored,
            case: built.label,
            witness: built.path,
        });
    }
    let family = match_family(&cf)?;
    let slopes = candidate_slopes(&family, policy).into_iter().flat_map(|r| r.pairs).collect::<Vec<_>>();
    let slopes = dedup_pairs(slopes);
    Ok(Verdict::Candidate { canonical_fraction: representative, cf, mirrored, family, slopes })
}

fn dedup_pairs(pairs: Vec<SlopePair>) -> Vec<SlopePair> {
    let mut out: Vec<SlopePair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        if !out.iter().any(|q| q.same_unordered(&p)) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> ExtRational {
        ExtRational::new(p, q).unwrap()
    }

    fn even(v: &[i64]) -> EvenCF {
        EvenCF::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate(&r(3, 8)).unwrap(), r(3, 8));
        assert_eq!(validate(&r(5, 8)).unwrap(), r(5, 8));
        assert_eq!(validate(&r(-5, 8)).unwrap(), r(3, 8));
        assert!(matches!(validate(&r(3, 4)), Err(ClassifyError::TorusLink(_))));
        assert!(matches!(validate(&r(2, 7)), Err(ClassifyError::BadParity(_))));
        assert!(matches!(validate(&r(3, 7)), Err(ClassifyError::BadParity(_))));
        assert!(matches!(validate(&ExtRational::infinity()), Err(ClassifyError::Trivial(_))));
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize(&r(3, 8)).unwrap();
        assert_eq!((c.cf.entries(), c.mirrored), (&[2, -2, -2][..], false));
        let c = canonicalize(&r(19, 30)).unwrap();
        assert_eq!(c.cf.entries(), &[2, -2, -2, -2, 2]);
        assert!(c.mirrored);
        assert_eq!(c.representative, r(11, 30));
        let c = canonicalize(&r(17, 58)).unwrap();
        assert_eq!((c.cf.entries(), c.mirrored), (&[4, 2, 4, 2, 2][..], false));
    }

    #[test]
    fn match_examples() {
        let m = match_family(&even(&[2, -2, -2])).unwrap();
        assert_eq!((m.family, m.m, m.n, m.l), (Family::A1, 1, 2, None));
        let m = match_family(&even(&[4, 2, 4, 2, 2])).unwrap();
        assert_eq!((m.family, m.m, m.n, m.l), (Family::C1, 1, -1, Some(-1)));
        let m = match_family(&even(&[2, -2, -4, -2, -2])).unwrap();
        assert_eq!((m.family, m.m, m.n, m.l), (Family::C1, 1, 1, Some(2)));
        assert!(matches!(match_family(&even(&[2, -2, 2, 2, -2])), Err(ClassifyError::NoMatch(_))));
    }

    #[test]
    fn family_cf_examples() {
        let cf = |f, m, n, l| family_cf(&FamilyMatch::new(f, m, n, l).unwrap()).unwrap();
        assert_eq!(cf(Family::A1, 1, 2, None).entries(), &[3, 3]);
        assert_eq!(cf(Family::C1, 1, -1, Some(-1)).entries(), &[3, -2, 2, -3]);
        assert_eq!(cf(Family::B4, 2, -1, Some(3)).entries(), &[5, -2, 5]);
        assert!(FamilyMatch::new(Family::A1, 1, 1, None).is_err());
        assert!(FamilyMatch::new(Family::B1, 1, 2, Some(2)).is_err());
        assert!(FamilyMatch::new(Family::A1, 0, 2, None).is_err());
    }

    #[test]
    fn classify_examples() {
        match classify(&r(3, 8)).unwrap() {
            Verdict::Candidate { family, slopes, mirrored, .. } => {
                assert_eq!((family.family, family.m, family.n), (Family::A1, 1, 2));
                assert!(!mirrored);
                assert!(slopes.contains(&SlopePair::integers(-2, -2)));
                assert!(slopes.contains(&SlopePair::new(r(5, 1), r(4, 3))));
            }
            v => panic!("unexpected {v:?}"),
        }
        match classify(&r(21, 50)).unwrap() {
            Verdict::NoCompleteExceptional { witness, .. } => assert!(witness.channel_count() >= 3),
            v => panic!("unexpected {v:?}"),
        }
        assert!(matches!(classify(&r(3, 4)), Err(ClassifyError::TorusLink(_))));
        match classify(&r(17, 58)).unwrap() {
            Verdict::Candidate { family, slopes, .. } => {
                assert_eq!((family.family, family.m, family.n, family.l), (Family::C1, 1, -1, Some(-1)));
                assert!(slopes.is_empty());
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("b4".parse::<Family>().unwrap(), Family::B4);
        assert_eq!("c-2".parse::<Family>().unwrap(), Family::C2);
        assert!("d1".parse::<Family>().is_err());
    }
}
