//! Suites for the three-channel path construction and for the choice of a
//! canonical representative.

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::json;

use super::{
    count_indices, even_entries, head_ok, head_prefixes, ints, par_tally, reference_value, sequences_with_prefix,
    to_ext, Counterexample, SuiteReport, Tally,
};
use crate::classifier::canonicalize;
use crate::contfrac::{even_expansion, EvenCF, ExtRational};
use crate::diagram::Diagram;
use crate::pathfinder::{
    construct_case_path, default_budget, is_allowable, search_max_channels, Arc, PathError, SearchOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop23Range {
    pub entry_bound: i64,
    pub k_set: Vec<usize>,
    /// Search node budget per fraction.
    pub budget: u64,
}

impl Default for Prop23Range {
    fn default() -> Self {
        Prop23Range { entry_bound: 6, k_set: vec![3, 5], budget: default_budget() }
    }
}

/// `[a, s2, ..., s2, 4s, s2, ..., s2]` with both runs nonempty and
/// `a >= 4` for `s = 1`, `a >= 2` for `s = -1`.
fn is_exceptional_shape(b: &[i64]) -> bool {
    if b.len() < 4 {
        return false;
    }
    let s = b[1].signum();
    let a_min = if s > 0 { 4 } else { 2 };
    let body = &b[1..];
    let fours: Vec<usize> = (0..body.len()).filter(|&i| body[i] == 4 * s).collect();
    b[0] >= a_min
        && fours.len() == 1
        && fours[0] > 0
        && fours[0] + 1 < body.len()
        && body.iter().enumerate().all(|(i, &x)| i == fours[0] || x == 2 * s)
}

fn channels_in(arcs: &[Arc]) -> usize {
    arcs.iter().filter(|a| matches!(a, Arc::Channel(_))).count()
}

fn arcs_json(arcs: &[Arc]) -> String {
    serde_json::to_string(arcs).unwrap_or_default()
}

/// Checks one head-normalized fraction with at least three channel indices.
fn check_fraction(b: &[i64], budget: u64, t: &mut Tally) {
    let cf = EvenCF::new(b.to_vec()).expect("even entries, odd length");
    let d = Diagram::build(&cf);
    let input = format!("{b:?}");
    let search = search_max_channels(&d, 3, budget);

    if is_exceptional_shape(b) {
        let ok = matches!(search, Ok(SearchOutcome::ProvenAbsent { best, .. }) if best < 3);
        t.check(ok, || {
            let actual = match &search {
                Ok(SearchOutcome::Found(p)) => format!("{} channels via {}", p.channel_count(), arcs_json(p.arcs())),
                Ok(SearchOutcome::ProvenAbsent { best, .. }) => format!("proven absent, best {best}"),
                Err(e) => e.to_string(),
            };
            Counterexample::new(&input, "no allowable path with 3 channels", actual, "exceptional shape ceiling")
        });
        return;
    }

    let built = construct_case_path(&cf);
    let built_ok = built.as_ref().is_ok_and(|c| {
        let arcs = c.path.arcs();
        channels_in(arcs) >= 3 && matches!(is_allowable(&d, arcs), Ok(None))
    });
    t.check(built_ok, || {
        let actual = match &built {
            Ok(c) => format!("{} channels via {}", channels_in(c.path.arcs()), arcs_json(c.path.arcs())),
            Err(e) => e.to_string(),
        };
        Counterexample::new(&input, "constructed path with 3 channels", actual, "case construction")
    });

    let found_ok = matches!(&search, Ok(SearchOutcome::Found(p))
        if channels_in(p.arcs()) >= 3 && matches!(is_allowable(&d, p.arcs()), Ok(None)));
    t.check(found_ok, || {
        let actual = match &search {
            Ok(SearchOutcome::Found(p)) => arcs_json(p.arcs()),
            Ok(SearchOutcome::ProvenAbsent { best, .. }) => format!("proven absent, best {best}"),
            Err(PathError::BudgetExhausted { nodes }) => format!("budget exhausted after {nodes} nodes"),
            Err(e) => e.to_string(),
        };
        Counterexample::new(&input, "searched path with 3 channels", actual, "exhaustive search")
    });
}

/// Every head-normalized fraction in range with three or more channel
/// indices gets a three-channel path from both the case construction and
/// the search, unless it has the exceptional shape, in which case the
/// search must prove that no such path exists.
pub fn verify_prop_2_3(range: &Prop23Range) -> SuiteReport {
    let mut report = SuiteReport::new(
        "prop23",
        json!({"entry_bound": range.entry_bound, "k_set": range.k_set, "budget": range.budget}),
    );
    let alphabet = even_entries(range.entry_bound);
    let work: Vec<(usize, [i64; 2])> =
        range.k_set.iter().flat_map(|&k| head_prefixes(&alphabet).into_iter().map(move |p| (k, p))).collect();
    let tally = par_tally(&work, |&(k, prefix)| {
        let mut t = Tally::default();
        if k < 2 {
            return t;
        }
        sequences_with_prefix(&prefix, k, &alphabet, |b| {
            if count_indices(b) >= 3 {
                check_fraction(b, range.budget, &mut t);
            }
        });
        t
    });
    report.absorb(tally);
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonRange {
    pub q_max: i64,
}

impl Default for CanonRange {
    fn default() -> Self {
        CanonRange { q_max: 200 }
    }
}

/// Inverse of `p` modulo `q` by trial, independent of the library's gcd.
fn inverse_by_trial(p: i64, q: i64) -> i64 {
    (1..q).find(|x| (p * x).rem_euclid(q) == 1).expect("p is a unit")
}

fn normalized(p: i64, q: i64) -> bool {
    let x = ExtRational::new(p, q).expect("q is nonzero");
    even_expansion(&x).is_ok_and(|cf| head_ok(cf.entries()))
}

/// Every valid non-torus `p/q` with `q <= q_max` has an orbit member
/// `p, 1/p, -p, -1/p (mod q)` with a normalized head; the first such is the
/// one reported, and the mirror flag marks the last two.
pub fn verify_canonicalization(range: &CanonRange) -> SuiteReport {
    let mut report = SuiteReport::new("canon", json!({"q_max": range.q_max}));
    let qs: Vec<i64> = (4..=range.q_max).step_by(2).collect();
    let tally = par_tally(&qs, |&q| {
        let mut t = Tally::default();
        for p in (3..q - 1).step_by(2) {
            if p.gcd(&q) != 1 {
                continue;
            }
            let input = format!("{p}/{q}");
            let inv = inverse_by_trial(p, q);
            let orbit = [(p, false), (inv, false), (q - p, true), (q - inv, true)];
            let expected = orbit.iter().copied().find(|&(r, _)| normalized(r, q));
            let got = canonicalize(&ExtRational::new(p, q).expect("q is nonzero"));
            let ok = match (&got, expected) {
                (Ok(c), Some((r, mirrored))) => {
                    let value = to_ext(&reference_value(&ints(c.cf.entries())));
                    c.representative == ExtRational::new(r, q).expect("q is nonzero")
                        && c.mirrored == mirrored
                        && head_ok(c.cf.entries())
                        && value == c.representative
                        && c.representative.numer() < &BigInt::from(q)
                }
                _ => false,
            };
            t.check(ok, || {
                let want = expected.map_or("none".to_string(), |(r, m)| format!("{r}/{q} mirrored={m}"));
                let actual = match &got {
                    Ok(c) => format!("{} mirrored={} cf={}", c.representative, c.mirrored, c.cf.as_cf()),
                    Err(e) => e.to_string(),
                };
                Counterexample::new(&input, want, actual, "canonical representative")
            });
        }
        t
    });
    report.absorb(tally);
    report
}
