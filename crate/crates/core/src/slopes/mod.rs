//! Tabulated candidate slope pairs for each family, and the surgery
//! coefficients of the chain-link descriptions.

use std::fmt::{self, Write as _};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::classifier::{Family, FamilyMatch};
use crate::contfrac::ExtRational;

/// The embedded table resource, exactly as shipped.
pub const TABLES_JSON: &str = include_str!("../../data/tables.json");

/// An unordered-for-comparison, ordered-for-display pair of slopes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopePair {
    pub gamma1: ExtRational,
    pub gamma2: ExtRational,
}

impl SlopePair {
    pub fn new(gamma1: ExtRational, gamma2: ExtRational) -> Self {
        SlopePair { gamma1, gamma2 }
    }

    pub fn integers(a: i64, b: i64) -> Self {
        SlopePair::new(ExtRational::integer(a), ExtRational::integer(b))
    }

    pub fn same_unordered(&self, other: &SlopePair) -> bool {
        (self.gamma1 == other.gamma1 && self.gamma2 == other.gamma2)
            || (self.gamma1 == other.gamma2 && self.gamma2 == other.gamma1)
    }

    /// The pair for the mirror image: both slopes negated.
    pub fn mirrored(&self) -> SlopePair {
        let neg = |x: &ExtRational| {
            ExtRational::new(-x.numer().clone(), x.denom().clone()).expect("finite slopes")
        };
        SlopePair::new(neg(&self.gamma1), neg(&self.gamma2))
    }
}

impl fmt::Display for SlopePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &ExtRational| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                x.to_string()
            }
        };
        write!(f, "({}, {})", show(&self.gamma1), show(&self.gamma2))
    }
}

/// `(coef . (m, n, l) + const) / den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    pub coef: [i64; 3],
    #[serde(rename = "const")]
    pub constant: i64,
    pub den: i64,
}

impl Formula {
    pub fn eval(&self, m: i64, n: i64, l: i64) -> ExtRational {
        let num = BigInt::from(self.coef[0]) * m
            + BigInt::from(self.coef[1]) * n
            + BigInt::from(self.coef[2]) * l
            + self.constant;
        ExtRational::new(num, self.den).expect("table denominators are positive")
    }

    /// Typeset the way the tables print it, e.g. `m + n - 2` or
    /// `\frac{2 m + 1}{2}`.
    pub fn typeset(&self) -> String {
        let mut s = String::new();
        // the tables list variables alphabetically
        for (name, c) in [("l", self.coef[2]), ("m", self.coef[0]), ("n", self.coef[1])] {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            let sign = if c < 0 { "-" } else { "+" };
            if s.is_empty() {
                if c < 0 {
                    s.push_str("- ");
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            if mag != 1 {
                let _ = write!(s, "{mag} ");
            }
            s.push_str(name);
        }
        if s.is_empty() {
            let _ = write!(s, "{}", self.constant);
        } else if self.constant != 0 {
            let sign = if self.constant < 0 { "-" } else { "+" };
            let _ = write!(s, " {sign} {}", self.constant.abs());
        }
        if self.den == 1 {
            s
        } else {
            format!("\\frac{{{s}}}{{{}}}", self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    M,
    N,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub param: Param,
    pub op: Op,
    pub value: i64,
}

impl Constraint {
    fn holds(&self, fm: &FamilyMatch) -> bool {
        let x = match self.param {
            Param::M => fm.m,
            Param::N => fm.n,
            Param::L => match fm.l {
                Some(l) => l,
                None => return false,
            },
        };
        match self.op {
            Op::Eq => x == self.value,
            Op::Le => x <= self.value,
            Op::Ge => x >= self.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub id: String,
    pub table: u32,
    pub family: Family,
    /// The link pattern as printed, e.g. `[2 m + 1,-3]`.
    pub link: String,
    pub constraints: Vec<Constraint>,
    pub pairs: Vec<[Formula; 2]>,
}

impl TableRow {
    pub fn applies(&self, fm: &FamilyMatch) -> bool {
        fm.family == self.family && self.constraints.iter().all(|c| c.holds(fm))
    }

    pub fn evaluate(&self, fm: &FamilyMatch) -> Vec<SlopePair> {
        let l = fm.l.unwrap_or(0);
        self.pairs
            .iter()
            .map(|[a, b]| SlopePair::new(a.eval(fm.m, fm.n, l), b.eval(fm.m, fm.n, l)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub description: String,
    pub rows: Vec<TableRow>,
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The parsed table resource.
pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(TABLES_JSON).expect("embedded tables parse"))
}

/// How overlapping rows combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Every matching row's pairs, deduplicated, in table order.
    #[default]
    Union,
    /// Each matching row on its own.
    ExactRows,
}

impl std::str::FromStr for Policy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "union" => Ok(Policy::Union),
            "exact" | "exact-rows" | "exact_rows" => Ok(Policy::ExactRows),
            _ => Err(format!("unknown policy {s:?} (expected union or exact)")),
        }
    }
}

/// Pairs contributed by one row, or by all rows merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowSlopes {
    /// Row id under the exact-rows policy; absent for the merged union.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link: Option<String>,
    pub pairs: Vec<SlopePair>,
}

/// Candidate slope pairs for a family member.
pub fn candidate_slopes(fm: &FamilyMatch, policy: Policy) -> Vec<RowSlopes> {
    let rows = tables().rows.iter().filter(|r| r.applies(fm));
    match policy {
        Policy::ExactRows => rows
            .map(|r| RowSlopes { row: Some(r.id.clone()), link: Some(r.link.clone()), pairs: r.evaluate(fm) })
            .collect(),
        Policy::Union => {
            let mut pairs: Vec<SlopePair> = Vec::new();
            for p in rows.flat_map(|r| r.evaluate(fm)) {
                if !pairs.iter().any(|q| q.same_unordered(&p)) {
                    pairs.push(p);
                }
            }
            vec![RowSlopes { row: None, link: None, pairs }]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coefficient {
    pub name: &'static str,
    pub value: ExtRational,
}

/// The surgery coefficients on the chain link presenting a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryDescription {
    pub family: Family,
    pub coefficients: Vec<Coefficient>,
}

pub fn surgery_description(fm: &FamilyMatch) -> Result<SurgeryDescription, crate::classifier::ClassifyError> {
    fm.check()?;
    let frac = |p: i64, q: i64| ExtRational::new(p, q).expect("parameters are nonzero");
    let l = fm.l.unwrap_or(1);
    let mut coefficients = vec![
        Coefficient { name: "-1/m", value: frac(-1, fm.m) },
        Coefficient { name: "-1/n", value: frac(-1, fm.n) },
    ];
    match fm.family {
        Family::A1 => {}
        Family::B1 | Family::B3 | Family::B4 => coefficients.push(Coefficient { name: "-1/l", value: frac(-1, l) }),
        Family::B2 => coefficients.push(Coefficient { name: "1/l", value: frac(1, l) }),
        Family::C1 | Family::C2 => {
            coefficients.push(Coefficient { name: "sgn(l)", value: ExtRational::integer(l.signum()) });
            coefficients.push(Coefficient { name: "-1/l", value: frac(-1, l) });
        }
    }
    Ok(SurgeryDescription { family: fm.family, coefficients })
}
