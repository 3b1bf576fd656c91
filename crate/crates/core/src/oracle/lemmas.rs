//! Suites for the continued-fraction identities, the rewrite of the
//! exceptional shapes, and the family list for fractions with few channel
//! indices.

use std::collections::HashMap;

use num_rational::BigRational;
use serde_json::json;

use super::{
    count_indices, even_entries, head_prefixes, ints, par_tally, reference_value,
    sequences_with_prefix, show, to_ext, Counterexample, NegativeControl, SuiteReport, Tally,
};
use crate::classifier::{family_cf, match_family, Family};
use crate::contfrac::{
    ch3_rewrite, eval_cf, eval_with_tail, exceptional_form, ContinuedFraction, EvenCF, ExtRational,
    RunSign,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A1Range {
    /// `a` ranges over `[-a_max, a_max]` without 0; so do the entries of `y`.
    pub a_max: i64,
    pub k_max: u32,
    /// `y` is a continued-fraction suffix with at most this many entries.
    pub y_depth: usize,
}

impl Default for A1Range {
    fn default() -> Self {
        A1Range { a_max: 6, k_max: 9, y_depth: 2 }
    }
}

/// Suffix values `y_1 - 1/(y_2 - ...)` with at most `depth` integer entries,
/// skipping 0 and `1/0`.
fn y_pool(entries: &[i64], depth: usize) -> Vec<(Vec<i64>, BigRational)> {
    let mut pool: Vec<(Vec<i64>, BigRational)> = Vec::new();
    let mut layer: Vec<(Vec<i64>, BigRational)> =
        entries.iter().map(|&y| (vec![y], BigRational::from_integer(y.into()))).collect();
    for _ in 0..depth {
        pool.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for &y in entries {
            for (tail, z) in &layer {
                let v = BigRational::from_integer(y.into()) - z.recip();
                if v != BigRational::from_integer(0.into()) {
                    let mut path = vec![y];
                    path.extend(tail);
                    next.push((path, v));
                }
            }
        }
        layer = next;
    }
    pool
}

fn run(b: u32, v: i64) -> impl Iterator<Item = i64> {
    std::iter::repeat_n(v, b as usize)
}

/// Both sides of `[a, ±2^k, y] = [a ∓ 1, ∓(k+1), y ∓ 1]`, evaluated by the
/// library and by the reference evaluator. `shift` corrupts the run length
/// on the right for the negative control.
fn check_run_identity(a: i64, k: u32, y: &BigRational, sign: i64, shift: i64) -> Result<(), Counterexample> {
    let lhs_entries: Vec<i64> = std::iter::once(a).chain(run(k, 2 * sign)).collect();
    let rhs_entries = [a - sign, -sign * (i64::from(k) + 1 + shift)];
    let y_rhs = y - BigRational::from_integer(sign.into());
    let y_ext = to_ext(&Some(y.clone()));
    let y_rhs_ext = to_ext(&Some(y_rhs.clone()));

    let lib_l = eval_with_tail(&lhs_entries, &y_ext);
    let lib_r = eval_with_tail(&rhs_entries, &y_rhs_ext);
    let mut l = ints(&lhs_entries);
    l.push(y.clone());
    let mut r = ints(&rhs_entries);
    r.push(y_rhs);
    let ref_l = reference_value(&l);
    let ref_r = reference_value(&r);
    if lib_l == lib_r && ref_l == ref_r && lib_l == to_ext(&ref_l) {
        return Ok(());
    }
    let id = if sign > 0 { 3 } else { 4 };
    Err(Counterexample::new(
        format!("identity={id} a={a} k={k} y={y_ext} rhs=[{},{},{}]", rhs_entries[0], rhs_entries[1], y_rhs_ext),
        format!("{lib_l} (reference {})", show(&ref_l)),
        format!("{lib_r} (reference {})", show(&ref_r)),
        "left and right sides differ",
    ))
}

/// Checks the run identities: `[2^k] = k/(k+1)`, `[-2^k] = -k/(k+1)`, and
/// the collapse of a run of `±2` in front of an arbitrary tail `y`.
pub fn verify_lemma_a1(range: &A1Range) -> SuiteReport {
    let mut report = SuiteReport::new(
        "a1",
        json!({"a_max": range.a_max, "k_max": range.k_max, "y_depth": range.y_depth}),
    );
    let entries: Vec<i64> = (-range.a_max..=range.a_max).filter(|&a| a != 0).collect();
    let pool = y_pool(&entries, range.y_depth);

    let mut closed = Tally::default();
    for k in 1..=range.k_max {
        for sign in [1i64, -1] {
            let cf = ContinuedFraction::new(run(k, 2 * sign).collect()).expect("nonzero entries");
            let lib = eval_cf(&cf);
            let reference = reference_value(&ints(cf.entries()));
            let want = super::ratio(sign * i64::from(k), i64::from(k) + 1);
            let ok = lib == to_ext(&Some(want.clone())) && reference == Some(want.clone());
            closed.check(ok, || {
                Counterexample::new(
                    format!("identity={} k={k}", if sign > 0 { 1 } else { 2 }),
                    show(&Some(want)),
                    format!("{lib} (reference {})", show(&reference)),
                    "closed form of a run of 2s",
                )
            });
        }
    }
    report.absorb(closed);

    let work: Vec<(i64, u32)> = entries.iter().flat_map(|&a| (1..=range.k_max).map(move |k| (a, k))).collect();
    let tally = par_tally(&work, |&(a, k)| {
        let mut t = Tally::default();
        for (_, y) in &pool {
            for sign in [1, -1] {
                let r = check_run_identity(a, k, y, sign, 0);
                t.check(r.is_ok(), || r.unwrap_err());
            }
        }
        t
    });
    report.absorb(tally);
    report.with_control(negative_control_a1(range))
}

/// The corrupted identity `[a, 2^k, y] = [a-1, -(k+2), y-1]`, which must fail.
pub fn negative_control_a1(range: &A1Range) -> NegativeControl {
    let entries: Vec<i64> = (-range.a_max..=range.a_max).filter(|&a| a != 0).collect();
    let pool = y_pool(&entries, range.y_depth);
    let mut cases = 0;
    let mut detected = 0;
    let mut sample = None;
    for &a in &entries {
        for k in 1..=range.k_max {
            for (_, y) in &pool {
                cases += 1;
                if let Err(c) = check_run_identity(a, k, y, 1, 1) {
                    detected += 1;
                    sample.get_or_insert(c);
                }
            }
        }
    }
    NegativeControl { description: "[a, 2^k, y] = [a-1, -(k+2), y-1]".into(), cases, detected, sample }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Range {
    pub a_max: i64,
    /// Largest total length of the two runs of `±2`.
    pub run_sum_max: u32,
}

impl Default for A2Range {
    fn default() -> Self {
        A2Range { a_max: 12, run_sum_max: 9 }
    }
}

/// Reads `(form, m, n, l)` back from a four-entry fraction, trying each
/// shape and keeping those whose stated constraints hold.
fn parse_rewrite(e: &[i64]) -> Vec<(u8, i64, i64, i64)> {
    let mut out = Vec::new();
    if e.len() != 4 || e[0] % 2 == 0 {
        return out;
    }
    let m = (e[0] - 1) / 2;
    // (id, n, l, middle entry)
    let shapes = [
        (1u8, e[1] / 2, (e[3] + 1) / 2, 2),
        (2, (e[1] + 1) / 2, e[3] / 2, 2),
        (3, e[1] / 2, (e[3] + 1) / 2, -2),
        (4, (e[1] + 1) / 2, e[3] / 2, -2),
    ];
    for (id, n, l, mid) in shapes {
        let rebuilt = match id {
            1 | 3 => [2 * m + 1, 2 * n, mid, 2 * l - 1],
            _ => [2 * m + 1, 2 * n - 1, mid, 2 * l],
        };
        let constraints = m >= 1
            && match id {
                1 | 2 => n <= -1 && l <= -1,
                3 => n >= 1 && l >= 2,
                _ => n >= 2 && l >= 1,
            };
        if rebuilt == e && constraints {
            out.push((id, m, n, l));
        }
    }
    out
}

/// Checks that every exceptional shape in range is detected, rewrites to a
/// fraction of equal value, and lands in exactly one of the four shapes with
/// its constraints satisfied.
pub fn verify_lemma_a2(range: &A2Range) -> SuiteReport {
    let mut report = SuiteReport::new("a2", json!({"a_max": range.a_max, "run_sum_max": range.run_sum_max}));
    let mut work = Vec::new();
    for sign in [RunSign::Plus, RunSign::Minus] {
        let a_min = if sign == RunSign::Plus { 4 } else { 2 };
        for a in (a_min..=range.a_max).step_by(2) {
            for b in 1..range.run_sum_max {
                for c in 1..=range.run_sum_max - b {
                    if (b + c) % 2 == 1 {
                        work.push((sign, a, b, c));
                    }
                }
            }
        }
    }
    let mut control = NegativeControl {
        description: "rewrite with l replaced by l + 1 keeps the value".into(),
        cases: 0,
        detected: 0,
        sample: None,
    };
    let tally = par_tally(&work, |&(sign, a, b, c)| {
        let mut t = Tally::default();
        let s = sign.as_i64();
        let entries: Vec<i64> =
            std::iter::once(a).chain(run(b, 2 * s)).chain([4 * s]).chain(run(c, 2 * s)).collect();
        let input = format!("sign={} a={a} b={b} c={c} cf={entries:?}", if s > 0 { "+" } else { "-" });
        let cf = EvenCF::new(entries.clone()).expect("odd length, even entries");
        let form = exceptional_form(&cf);
        let detected = form.is_some_and(|f| f.a == a && f.pre_run == b && f.post_run == c && f.sign == sign);
        t.check(detected, || Counterexample::new(&input, "exceptional shape", format!("{form:?}"), "detection"));
        let Some(form) = form else { return t };

        let w = ch3_rewrite(&form);
        let before = reference_value(&ints(&entries));
        let after = reference_value(&ints(w.cf.entries()));
        let lib = eval_cf(&w.cf);
        t.check(before == after && lib == to_ext(&before), || {
            Counterexample::new(&input, show(&before), format!("{} = {}", w.cf, show(&after)), "value preserved")
        });

        let parsed = parse_rewrite(w.cf.entries());
        let matches_lib = parsed == [(w.form.id(), w.m, w.n, w.l)];
        t.check(matches_lib, || {
            Counterexample::new(
                &input,
                format!("one shape, ({}) with ({}, {}, {})", w.form.id(), w.m, w.n, w.l),
                format!("{parsed:?}"),
                "lands in exactly one shape with its constraints",
            )
        });
        t
    });
    report.absorb(tally);

    for &(sign, a, b, c) in &work {
        let form = crate::contfrac::ExceptionalForm { a, pre_run: b, post_run: c, sign };
        let w = ch3_rewrite(&form);
        let bad: Vec<i64> = w.form.cf(w.m, w.n, w.l + 1);
        control.cases += 1;
        let v = reference_value(&ints(&bad));
        if v != reference_value(&ints(w.cf.entries())) {
            control.detected += 1;
            control.sample.get_or_insert_with(|| {
                Counterexample::new(
                    format!("sign={sign:?} a={a} b={b} c={c}"),
                    show(&reference_value(&ints(w.cf.entries()))),
                    show(&v),
                    "corrupted rewrite",
                )
            });
        }
    }
    report.with_control(control)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A3Range {
    pub entry_bound: i64,
    pub k_set: Vec<usize>,
}

impl Default for A3Range {
    fn default() -> Self {
        A3Range { entry_bound: 8, k_set: vec![3, 5, 7] }
    }
}

type Member = (u8, i64, i64, Option<i64>);

/// The nine shapes `(0)` through `(8)` with their stated constraints.
fn lemma_family(id: u8, m: i64, n: i64, l: i64) -> Option<Vec<i64>> {
    if m < 1 {
        return None;
    }
    if (1..=3).contains(&id) && m == 1 && n > -2 {
        return None;
    }
    let (ok, cf) = match id {
        0 => (n != 0 && n != 1, vec![2 * m + 1, 2 * n - 1]),
        1 => (n.abs() >= 2 && l.abs() >= 2, vec![2 * m, 2 * n, 2 * l]),
        2 => (n.abs() >= 2 && l >= 1, vec![2 * m, 2 * n - 1, -2 * l]),
        3 => (n.abs() >= 2 && l >= 1, vec![2 * m, 2 * n + 1, 2 * l]),
        4 => (n != 0 && l != 0 && l != 1, vec![2 * m + 1, 2 * n, 2 * l - 1]),
        5 => (n <= -1 && l >= 2, vec![2 * m + 1, 2 * n, -2, 2 * l - 1]),
        6 => (n <= -1 && l >= 1, vec![2 * m + 1, 2 * n - 1, -2, 2 * l]),
        7 => (n >= 1 && l <= -1, vec![2 * m + 1, 2 * n, 2, 2 * l - 1]),
        8 => (n >= 2 && l <= -1, vec![2 * m + 1, 2 * n - 1, 2, 2 * l]),
        _ => (false, vec![]),
    };
    ok.then_some(cf)
}

/// Value of every family member with parameters up to `span`.
fn family_table(span: i64) -> HashMap<ExtRational, Vec<Member>> {
    let mut table: HashMap<ExtRational, Vec<Member>> = HashMap::new();
    for id in 0..=8u8 {
        for m in 1..=span {
            for n in -span..=span {
                let ls: Vec<Option<i64>> = if id == 0 { vec![None] } else { (-span..=span).map(Some).collect() };
                for l in ls {
                    if let Some(cf) = lemma_family(id, m, n, l.unwrap_or(0)) {
                        let v = to_ext(&reference_value(&ints(&cf)));
                        table.entry(v).or_default().push((id, m, n, l));
                    }
                }
            }
        }
    }
    table
}

/// The shape number a library family match corresponds to.
fn shape_of(family: Family, l: Option<i64>) -> u8 {
    let positive = l.is_some_and(|l| l > 0);
    match family {
        Family::A1 => 0,
        Family::B1 => 1,
        Family::B2 => 2,
        Family::B3 => 3,
        Family::B4 => 4,
        Family::C1 if positive => 5,
        Family::C1 => 7,
        Family::C2 if positive => 6,
        Family::C2 => 8,
    }
}

/// Checks that each head-normalized even fraction with at most two channel
/// indices has the value of members of exactly one shape, and that the
/// classifier's match is one of them.
pub fn verify_lemma_a3(range: &A3Range) -> SuiteReport {
    let mut report =
        SuiteReport::new("a3", json!({"entry_bound": range.entry_bound, "k_set": range.k_set}));
    let k_max = range.k_set.iter().copied().max().unwrap_or(3) as i64;
    let table = family_table(range.entry_bound / 2 + k_max + 2);
    let alphabet = even_entries(range.entry_bound);
    let mut work = Vec::new();
    for &k in &range.k_set {
        for p in head_prefixes(&alphabet) {
            work.push((k, p));
        }
    }
    let tally = par_tally(&work, |&(k, prefix)| {
        let mut t = Tally::default();
        if k < 2 {
            return t;
        }
        sequences_with_prefix(&prefix, k, &alphabet, |b| {
            if count_indices(b) > 2 {
                return;
            }
            let value = to_ext(&reference_value(&ints(b)));
            let members = table.get(&value).map(Vec::as_slice).unwrap_or(&[]);
            let mut shapes: Vec<u8> = members.iter().map(|x| x.0).collect();
            shapes.sort_unstable();
            shapes.dedup();
            t.check(shapes.len() == 1, || {
                Counterexample::new(format!("{b:?}"), "exactly one shape", format!("{members:?}"), "family lookup")
            });
            let cf = EvenCF::new(b.to_vec()).expect("even entries, odd length");
            let lib = match_family(&cf);
            let agrees = lib.as_ref().is_ok_and(|fm| {
                let id = shape_of(fm.family, fm.l);
                let in_table = members.contains(&(id, fm.m, fm.n, fm.l));
                let same_value = family_cf(fm).is_ok_and(|c| eval_cf(&c) == value);
                in_table && same_value
            });
            t.check(agrees, || {
                Counterexample::new(format!("{b:?}"), format!("one of {members:?}"), format!("{lib:?}"), "classifier")
            });
        });
        t
    });
    report.absorb(tally);
    report
}
