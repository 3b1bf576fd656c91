//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde_json::Value;
use twobridge::classifier::{classify, ClassifyError, Family, Verdict};
use twobridge::contfrac::{ch3_rewrite, eval_cf, exceptional_form, ContinuedFraction, EvenCF, ExtRational};
use twobridge::diagram::Diagram;
use twobridge::oracle::{verify_lemma_a1, verify_lemma_a2, verify_lemma_a3, verify_prop_2_3, Prop23Range};
use twobridge::pathfinder::{is_allowable, max_channels, search_max_channels, SearchOutcome, DEFAULT_NODE_BUDGET};

type Outcome = Result<String, String>;

fn r(p: i64, q: i64) -> ExtRational {
    ExtRational::new(p, q).unwrap()
}

fn even(v: &[i64]) -> EvenCF {
    EvenCF::new(v.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn run_cli(args: &[&str]) -> (i32, Value) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["bsc"];
    argv.extend_from_slice(args);
    let code = twobridge::cli::run(argv, &mut out, &mut err);
    (code, serde_json::from_slice(&out).unwrap_or(Value::Null))
}

fn row_pairs(result: &Value, id: &str) -> Vec<(String, String)> {
    result["rows"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|row| row["row"] == id)
        .flat_map(|row| row["pairs"].as_array().cloned().unwrap_or_default())
        .map(|p| (p["gamma1"].as_str().unwrap_or("").to_string(), p["gamma2"].as_str().unwrap_or("").to_string()))
        .collect()
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn table_fidelity() -> Outcome {
    let t = Instant::now();
    let (code, a1) = run_cli(&["slopes", "--family", "a1", "--m", "1", "--n", "2", "--policy", "exact", "--json"]);
    ensure(code == 0, || format!("slopes a1 exited {code}"))?;
    let want = pairs(&[("-2/1", "-2/1"), ("-2/1", "-1/1"), ("-1/1", "-4/1"), ("-1/1", "-3/1"), ("-1/1", "-1/1"), ("5/1", "4/3")]);
    let got = row_pairs(&a1["result"], "a1-3-3");
    ensure(got == want, || format!("L[3,3] row is {got:?}"))?;

    let (_, b4) = run_cli(&["slopes", "--family", "b4", "--m", "1", "--n", "1", "--l", "2", "--policy", "exact", "--json"]);
    let want = pairs(&[("-3/1", "-1/1"), ("-2/1", "-2/1"), ("-2/1", "-1/1"), ("-1/1", "-4/1"), ("-1/1", "-1/1")]);
    let got = row_pairs(&b4["result"], "b4-3-2-3");
    ensure(got == want, || format!("L[3,2,3] row is {got:?}"))?;

    let (code, c2) = run_cli(&["slopes", "--family", "c2", "--m", "1", "--n", "2", "--l", "1", "--json"]);
    let union = &c2["result"]["rows"][0]["pairs"];
    ensure(code == 0 && union.as_array().is_some_and(Vec::is_empty), || format!("c-2 gave {union}"))?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("L[3,3] six pairs incl. (5, 4/3), L[3,2,3] five pairs, c-2 empty in {:.2?}", t.elapsed()))
}

fn run_identities() -> Outcome {
    let t = Instant::now();
    let report = verify_lemma_a1(&Default::default());
    let control = report.negative_control.as_ref().ok_or("no negative control")?;
    ensure(report.failures.is_empty(), || format!("{} failures, first {:?}", report.failures.len(), report.failures[0]))?;
    ensure(control.detected > 0, || "negative control passed".into())?;
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{} checks, 0 failures; corrupted identity caught {} of {} times; {:.2?}",
        report.cases,
        control.detected,
        control.cases,
        t.elapsed()
    ))
}

fn exceptional_rewrite() -> Outcome {
    let t = Instant::now();
    let report = verify_lemma_a2(&Default::default());
    ensure(report.passed, || format!("{} failures, first {:?}", report.failures.len(), report.failures.first()))?;
    for (input, rewritten, value) in [(&[4, 2, 4, 2, 2][..], [3, -2, 2, -3], r(17, 58)), (&[2, -2, -4, -2, -2], [3, 2, -2, 3], r(17, 44))] {
        let cf = even(input);
        let w = ch3_rewrite(&exceptional_form(&cf).ok_or("shape not detected")?);
        ensure(w.cf.entries() == rewritten, || format!("{input:?} rewrote to {}", w.cf))?;
        let direct = eval_cf(&ContinuedFraction::new(rewritten.to_vec()).unwrap());
        ensure(cf.value() == value && direct == value, || format!("{input:?} = {}, rewrite = {direct}", cf.value()))?;
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} checks, 0 failures; 17/58 and 17/44 spot values hold; {:.2?}", report.cases, t.elapsed()))
}

fn family_list() -> Outcome {
    let t = Instant::now();
    let report = verify_lemma_a3(&Default::default());
    ensure(report.passed, || format!("{} failures, first {:?}", report.failures.len(), report.failures.first()))?;
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{} checks over |b| <= 8, k in {{3,5,7}}, 0 failures; {:.2?}", report.cases, t.elapsed()))
}

fn prop_2_3() -> Outcome {
    let t = Instant::now();
    let report = verify_prop_2_3(&Prop23Range { budget: DEFAULT_NODE_BUDGET, ..Default::default() });
    within(t.elapsed(), Duration::from_secs(300))?;
    let ceiling: Vec<&str> =
        report.failures.iter().filter(|f| f.detail == "exceptional shape ceiling").map(|f| f.input.as_str()).collect();
    let other = report.failures.len() - ceiling.len();
    if report.passed {
        return Ok(format!("{} checks, 0 failures; {:.2?}", report.cases, t.elapsed()));
    }
    Err(format!(
        "{} checks; non-exceptional paths: {} failures; exceptional shapes that still carry a 3-channel path: {}",
        report.cases,
        other,
        ceiling.join(" ")
    ))
}

fn drawings() -> Outcome {
    let t = Instant::now();
    let exact_one = [&[2, 4, 2][..], &[-2, -4, -2]];
    for cf in exact_one {
        let (n, _) = max_channels(&Diagram::build(&even(cf)), DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(n == 1, || format!("{cf:?} has at most {n} channels"))?;
    }
    let at_least = |cf: &[i64], k: usize| -> Result<(), String> {
        let d = Diagram::build(&even(cf));
        match search_max_channels(&d, k, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())? {
            SearchOutcome::Found(p) => {
                ensure(matches!(is_allowable(&d, p.arcs()), Ok(None)), || format!("{cf:?} witness invalid"))
            }
            SearchOutcome::ProvenAbsent { best, .. } => Err(format!("{cf:?} has at most {best} channels")),
        }
    };
    at_least(&[2, 6, 2], 2)?;
    at_least(&[-2, -6, -2], 2)?;
    let drawn: [&[i64]; 22] = [
        &[2, -2, 2, 2, -2],
        &[2, -2, -2, 2, -2],
        &[2, -2, 2, 2, 4],
        &[2, -2, 2, 4, 2],
        &[2, -2, -4, 2, 2],
        &[2, -2, -2, -4, 2],
        &[4, 2, 4, -2, -2],
        &[4, 4, 2, -2, -2],
        &[4, 2, -2, -4, -2],
        &[4, 2, 2, -2, -4],
        &[2, -4, -2, -4, -2],
        &[2, -4, -4, -2, -2],
        &[2, -2, -6, -2, -2],
        &[2, -2, -2, -6, -2],
        &[2, -2, -4, -4, -2],
        &[2, -2, -2, -4, -4],
        &[4, 4, 4, 2, 2],
        &[4, 4, 2, 4, 2],
        &[4, 2, 6, 2, 2],
        &[4, 2, 2, 6, 2],
        &[4, 2, 4, 4, 2],
        &[4, 2, 2, 4, 4],
    ];
    for cf in drawn {
        at_least(cf, 3)?;
    }
    within(t.elapsed(), Duration::from_secs(30))?;
    Ok(format!("[±2,±4,±2] max 1, [±2,±6,±2] >= 2, {} drawn fractions >= 3; {:.2?}", drawn.len(), t.elapsed()))
}

fn spot_checks() -> Outcome {
    let t = Instant::now();
    match classify(&r(3, 8)).map_err(|e| e.to_string())? {
        Verdict::Candidate { family, .. } => {
            ensure((family.family, family.m, family.n, family.l) == (Family::A1, 1, 2, None), || format!("3/8 matched {family}"))?
        }
        v => return Err(format!("3/8 gave {v:?}")),
    }
    match classify(&r(21, 50)).map_err(|e| e.to_string())? {
        Verdict::NoCompleteExceptional { witness, cf, .. } => {
            let d = Diagram::build(&cf);
            ensure(witness.channel_count() >= 3 && matches!(is_allowable(&d, witness.arcs()), Ok(None)), || {
                "21/50 witness invalid".into()
            })?
        }
        v => return Err(format!("21/50 gave {v:?}")),
    }
    ensure(matches!(classify(&r(3, 4)), Err(ClassifyError::TorusLink(_))), || "3/4 is not a torus link".into())?;
    match classify(&r(17, 58)).map_err(|e| e.to_string())? {
        Verdict::Candidate { family, slopes, .. } => ensure(
            (family.family, family.m, family.n, family.l) == (Family::C1, 1, -1, Some(-1)) && slopes.is_empty(),
            || format!("17/58 matched {family} with {} slopes", slopes.len()),
        )?,
        v => return Err(format!("17/58 gave {v:?}")),
    }
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("3/8, 21/50, 3/4, 17/58 as expected; {:.2?}", t.elapsed()))
}

/// Parity class of a label, computed from the label itself.
fn class(x: &ExtRational) -> (bool, bool) {
    let odd = |n: &num_bigint::BigInt| n % 2u8 != 0u8.into();
    (odd(x.numer()), odd(x.denom()))
}

fn diagram_fuzz() -> Outcome {
    let t = Instant::now();
    let alphabet = [-6i64, -4, -2, 2, 4, 6];
    let mut count = 0u64;
    for k in [1usize, 3, 5, 7] {
        let mut idx = vec![0usize; k];
        loop {
            let b: Vec<i64> = idx.iter().map(|&i| alphabet[i]).collect();
            count += 1;
            let d = Diagram::build_with_labels(&even(&b));
            let label = |v: usize| d.vertices()[v].label.clone().expect("labelled");
            for (ti, tri) in d.triangles().iter().enumerate() {
                let c = tri.map(|v| class(&label(v)));
                ensure(c[0] != c[1] && c[1] != c[2] && c[0] != c[2], || format!("{b:?} triangle {ti} repeats a class"))?;
            }
            for f in d.fans() {
                for e in [f.initial_edge, f.terminal_edge] {
                    let (x, y) = d.edges()[e].ends;
                    let oo = |v| class(&label(v)) == (true, true);
                    ensure(!oo(x) && !oo(y), || format!("{b:?} fan edge {e} touches an odd/odd vertex"))?;
                }
            }
            let same_sign = b.windows(2).filter(|w| w[0] * w[1] > 0).count();
            let expected = b.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>() - same_sign;
            ensure(d.triangles().len() == expected, || format!("{b:?} has {} triangles, want {expected}", d.triangles().len()))?;

            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < alphabet.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    let fan = Diagram::from_entries(&[-2, 2, 4, 2], true).map_err(|e| e.to_string())?;
    let stars = fan.vertices().iter().filter(|v| class(v.label.as_ref().unwrap()) == (true, true)).count();
    ensure(stars == 3, || format!("[-2,2,4,2] has {stars} starred vertices"))?;
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{count} fractions with |b| <= 6, k <= 7; [-2,2,4,2] has 3 stars; {:.2?}", t.elapsed()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("table fidelity", table_fidelity),
        ("run identities oracle", run_identities),
        ("exceptional rewrite oracle", exceptional_rewrite),
        ("family list oracle", family_list),
        ("three-channel realization", prop_2_3),
        ("drawing regression", drawings),
        ("end-to-end spot checks", spot_checks),
        ("diagram invariants fuzz", diagram_fuzz),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
