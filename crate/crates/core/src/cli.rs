//! The `bsc` command line: argument parsing, output envelopes and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classifier::{classify_with, family_cf, ClassifyError, Family, FamilyMatch, Verdict};
use crate::contfrac::{even_expansion, eval_cf, ContFracError, ContinuedFraction, ExtRational};
use crate::diagram::{emit, Diagram, Format};
use crate::oracle::{run_suite, with_jobs, Bounds, SuiteReport, SUITES};
use crate::pathfinder::{default_budget, max_channels, search_max_channels, PathError, SearchOutcome};
use crate::slopes::{candidate_slopes, surgery_description, Policy, RowSlopes, SlopePair, TABLES_JSON};

/// Exit status for a candidate verdict or any other success.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_NO_COMPLETE_EXCEPTIONAL: i32 = 10;
pub const EXIT_VERIFY_FAILED: i32 = 20;

/// Version of the JSON envelope.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(name = "bsc", version, about = "Complete exceptional surgery candidates for two-bridge links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a two-bridge link can admit a complete exceptional surgery.
    Classify(ClassifyArgs),
    /// Candidate slope pairs and surgery coefficients for a family member.
    Slopes(SlopesArgs),
    /// Draw the diagram of a fraction, optionally with a many-channel path.
    Diagram(DiagramArgs),
    /// Run the brute-force verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct FractionInput {
    /// The fraction, as p/q.
    #[arg(allow_hyphen_values = true, required_unless_present = "cf", conflicts_with = "cf")]
    fraction: Option<String>,
    /// A continued fraction a1,a2,... instead of p/q.
    #[arg(long, allow_hyphen_values = true, value_name = "A1,A2,...")]
    cf: Option<String>,
}

#[derive(Debug, Args)]
struct OutputFlags {
    /// Print the versioned JSON envelope instead of text.
    #[arg(long)]
    json: bool,
    /// Negate both slopes of every pair (for classify, only when the verdict is mirrored).
    #[arg(long)]
    mirror_slopes: bool,
    /// How overlapping table rows combine: union or exact.
    #[arg(long, default_value = "union", value_parser = parse_policy)]
    policy: Policy,
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    s.parse()
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: FractionInput,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Debug, Args)]
struct SlopesArgs {
    /// a1, b1, b2, b3, b4, c1 or c2.
    #[arg(long, required_unless_present = "dump_tables")]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "dump_tables")]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "dump_tables")]
    n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    /// Print the embedded slope tables exactly as shipped.
    #[arg(long)]
    dump_tables: bool,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    #[command(flatten)]
    input: FractionInput,
    /// Write the drawing here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// svg or dot.
    #[arg(long, default_value = "svg")]
    format: String,
    /// Highlight a path with at least this many channels, or the best found.
    #[arg(long, value_name = "N")]
    with_path: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// a1, a2, a3, prop23, canon or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Entry bound of the suite (q_max for canon, a_max for a1 and a2).
    #[arg(long, allow_hyphen_values = true)]
    bound: Option<i64>,
    /// Longest run (a1, a2) or expansion length (a3, prop23).
    #[arg(long)]
    k_max: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'static str,
    command: &'a str,
    input: Value,
    result: Value,
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn invalid(kind: &'static str, message: impl ToString) -> Self {
        Failure { code: EXIT_INVALID, kind, message: message.to_string() }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let kind = match &e {
            ClassifyError::BadParity(_) => "bad_parity",
            ClassifyError::TorusLink(_) => "torus_link",
            ClassifyError::Trivial(_) => "trivial",
            ClassifyError::NoCanonicalRepresentative(_) => "no_canonical_representative",
            ClassifyError::NoMatch(_) => "no_match",
            ClassifyError::InvalidParameters(_) => "invalid_parameters",
            ClassifyError::ContFrac(_) => "invalid_fraction",
            ClassifyError::Path(p) => return Failure::from(p.clone()),
        };
        let code = match e {
            ClassifyError::NoMatch(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        let (code, kind) = match e {
            PathError::BudgetExhausted { .. } => (EXIT_BUDGET, "budget_exhausted"),
            _ => (EXIT_INTERNAL, "path_error"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<ContFracError> for Failure {
    fn from(e: ContFracError) -> Self {
        Failure::invalid("invalid_fraction", e)
    }
}

struct Output {
    json: bool,
    command: &'static str,
    input: Value,
}

impl Output {
    fn emit(&self, out: &mut dyn Write, result: Value, text: &str) -> std::io::Result<()> {
        if self.json {
            let env = Envelope { version: SCHEMA_VERSION, command: self.command, input: self.input.clone(), result };
            let s = serde_json::to_string_pretty(&env).map_err(std::io::Error::other)?;
            writeln!(out, "{s}")
        } else {
            write!(out, "{text}")
        }
    }

    fn fail(&self, out: &mut dyn Write, err: &mut dyn Write, f: &Failure) -> i32 {
        let _ = writeln!(err, "error: {}", f.message);
        if self.json {
            let _ = self.emit(out, json!({"error": {"kind": f.kind, "message": f.message}}), "");
        }
        f.code
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match cli.command {
        Command::Classify(a) => cmd_classify(a, out, err),
        Command::Slopes(a) => cmd_slopes(a, out, err),
        Command::Diagram(a) => cmd_diagram(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure { code: EXIT_IO, kind: "io", message: e.to_string() }
}

/// The fraction named by the input, and the continued fraction if one was given.
fn read_input(input: &FractionInput) -> Result<(ExtRational, Option<ContinuedFraction>), Failure> {
    if let Some(cf) = &input.cf {
        let cf: ContinuedFraction = cf.parse()?;
        return Ok((eval_cf(&cf), Some(cf)));
    }
    let text = input.fraction.as_deref().unwrap_or_default();
    Ok((text.parse()?, None))
}

fn input_echo(input: &FractionInput) -> Value {
    match (&input.fraction, &input.cf) {
        (_, Some(cf)) => json!({"cf": cf}),
        (Some(f), None) => json!({"fraction": f}),
        (None, None) => Value::Null,
    }
}

fn mirror_pairs(pairs: &mut [SlopePair]) {
    for p in pairs {
        *p = p.mirrored();
    }
}

fn pairs_text(pairs: &[SlopePair]) -> String {
    if pairs.is_empty() {
        return "none".into();
    }
    pairs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize")
}

fn cmd_classify(a: ClassifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let o = Output { json: a.out.json, command: "classify", input: input_echo(&a.input) };
    match classify_body(&a) {
        Ok((result, text, code)) => match o.emit(out, result, &text) {
            Ok(()) => code,
            Err(e) => o.fail(out, err, &io_failure(e)),
        },
        Err(f) => o.fail(out, err, &f),
    }
}

fn classify_body(a: &ClassifyArgs) -> Result<(Value, String, i32), Failure> {
    let (x, _) = read_input(&a.input)?;
    let mut verdict = classify_with(&x, a.out.policy)?;
    let mirror = a.out.mirror_slopes && verdict.mirrored();
    let mut rows: Option<Vec<RowSlopes>> = None;
    if let Verdict::Candidate { family, slopes, .. } = &mut verdict {
        if mirror {
            mirror_pairs(slopes);
        }
        if a.out.policy == Policy::ExactRows {
            let mut r = candidate_slopes(family, Policy::ExactRows);
            if mirror {
                r.iter_mut().for_each(|row| mirror_pairs(&mut row.pairs));
            }
            rows = Some(r);
        }
    }
    let mut result = to_value(&verdict);
    result["fraction"] = to_value(&x);
    result["slopes_mirrored"] = Value::Bool(mirror);
    if let Some(rows) = &rows {
        result["slope_rows"] = to_value(rows);
    }

    let mut text = String::new();
    let code = match &verdict {
        Verdict::Candidate { canonical_fraction, cf, mirrored, family, slopes } => {
            text += &format!("{x}: candidate for complete exceptional surgery\n");
            text += &format!("  canonical {canonical_fraction} = {}{}\n", cf.as_cf(), mirror_note(*mirrored));
            text += &format!("  family {family}, link {}\n", family_cf(family)?);
            match &rows {
                Some(rows) => {
                    for r in rows {
                        text += &format!("  row {}: {}\n", r.row.as_deref().unwrap_or("-"), pairs_text(&r.pairs));
                    }
                    if rows.is_empty() {
                        text += "  no table rows\n";
                    }
                }
                None => text += &format!("  slopes {}\n", pairs_text(slopes)),
            }
            EXIT_OK
        }
        Verdict::NoCompleteExceptional { canonical_fraction, cf, mirrored, case, witness } => {
            text += &format!("{x}: no complete exceptional surgery\n");
            text += &format!("  canonical {canonical_fraction} = {}{}\n", cf.as_cf(), mirror_note(*mirrored));
            let kinds: Vec<String> = case.kinds.iter().map(|k| to_value(k).as_str().unwrap_or("").to_string()).collect();
            let branch = case.branch.map(|b| format!(", {}", to_value(&b).as_str().unwrap_or(""))).unwrap_or_default();
            text += &format!("  case {}{branch}\n", kinds.join(" / "));
            text += &format!("  witness with {} channels: {}\n", witness.channel_count(), to_value(witness));
            EXIT_NO_COMPLETE_EXCEPTIONAL
        }
    };
    Ok((result, text, code))
}

/// `-1` rather than `-1/1` for integers.
fn plain(x: &ExtRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

fn mirror_note(mirrored: bool) -> &'static str {
    if mirrored {
        " (mirror image)"
    } else {
        ""
    }
}

fn cmd_slopes(a: SlopesArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if a.dump_tables {
        return match out.write_all(TABLES_JSON.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_IO
            }
        };
    }
    let input = json!({"family": a.family, "m": a.m, "n": a.n, "l": a.l, "policy": a.out.policy});
    let o = Output { json: a.out.json, command: "slopes", input };
    match slopes_body(&a) {
        Ok((result, text)) => match o.emit(out, result, &text) {
            Ok(()) => EXIT_OK,
            Err(e) => o.fail(out, err, &io_failure(e)),
        },
        Err(f) => o.fail(out, err, &f),
    }
}

fn slopes_body(a: &SlopesArgs) -> Result<(Value, String), Failure> {
    let family: Family = a.family.as_deref().unwrap_or_default().parse()?;
    let (m, n) = (a.m.unwrap_or_default(), a.n.unwrap_or_default());
    let fm = FamilyMatch::new(family, m, n, a.l)?;
    let surgery = surgery_description(&fm)?;
    let mut rows = candidate_slopes(&fm, a.out.policy);
    if a.out.mirror_slopes {
        rows.iter_mut().for_each(|r| mirror_pairs(&mut r.pairs));
    }
    let link = family_cf(&fm)?;
    let result = json!({
        "match": fm,
        "link": link,
        "fraction": eval_cf(&link),
        "surgery": surgery,
        "policy": a.out.policy,
        "slopes_mirrored": a.out.mirror_slopes,
        "rows": rows,
    });
    let mut text = format!("{fm}: link {link} = {}\n", eval_cf(&link));
    let coefs: Vec<String> =
        surgery.coefficients.iter().map(|c| format!("{} = {}", c.name, plain(&c.value))).collect();
    text += &format!("  surgery description {}\n", coefs.join(", "));
    for r in &rows {
        match &r.row {
            Some(id) => text += &format!("  row {id}: {}\n", pairs_text(&r.pairs)),
            None => text += &format!("  slopes {}\n", pairs_text(&r.pairs)),
        }
    }
    if rows.is_empty() {
        text += "  no table rows\n";
    }
    Ok((result, text))
}

fn cmd_diagram(a: DiagramArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let o = Output { json: a.json, command: "diagram", input: input_echo(&a.input) };
    match diagram_body(&a, out) {
        Ok((result, text)) => {
            // the drawing owns standard output when there is no --out and no --json
            let target: &mut dyn Write = if a.out.is_none() && !a.json { err } else { out };
            match o.emit(target, result, &text) {
                Ok(()) => EXIT_OK,
                Err(e) => o.fail(out, err, &io_failure(e)),
            }
        }
        Err(f) => o.fail(out, err, &f),
    }
}

fn diagram_body(a: &DiagramArgs, out: &mut dyn Write) -> Result<(Value, String), Failure> {
    let format: Format = a.format.parse().map_err(|e| Failure::invalid("unknown_format", e))?;
    let (x, cf) = read_input(&a.input)?;
    let d = match &cf {
        Some(cf) => Diagram::from_entries(cf.entries(), true).map_err(|e| Failure::invalid("invalid_fraction", e))?,
        None => {
            if x.is_infinite() {
                return Err(Failure::invalid("invalid_fraction", format!("{x} has no diagram")));
            }
            let q = x.denom().clone();
            let unit = ExtRational::new(num_integer::Integer::mod_floor(x.numer(), &q), q)?;
            Diagram::build_with_labels(&even_expansion(&unit)?)
        }
    };
    let budget = default_budget();
    let (max, _) = max_channels(&d, budget)?;
    let mut path_json = Value::Null;
    let mut overlay = None;
    let mut path_text = String::new();
    if let Some(target) = a.with_path {
        let outcome = search_max_channels(&d, target, budget)?;
        let met = matches!(outcome, SearchOutcome::Found(_));
        if let Some(p) = outcome.path() {
            overlay = Some(p.overlay());
            path_json = json!({"target": target, "met": met, "channels": p.channel_count(), "arcs": p});
            path_text = format!("path: {} channels (target {target}{})\n", p.channel_count(), if met { "" } else { ", not met" });
        } else {
            path_json = json!({"target": target, "met": false, "channels": 0, "arcs": []});
            path_text = format!("path: no allowable path (target {target})\n");
        }
    }
    let drawing = emit(&d, format, overlay.as_ref()).map_err(|e| Failure::invalid("invalid_overlay", e))?;
    let stats = d.stats();
    let mut result = json!({
        "entries": d.entries(),
        "fraction": d.value(),
        "stats": stats,
        "max_channels": max,
        "path": path_json,
    });
    match &a.out {
        Some(path) => {
            std::fs::write(path, &drawing).map_err(io_failure)?;
            result["written"] = json!(path.display().to_string());
        }
        None if a.json => result["drawing"] = json!(String::from_utf8_lossy(&drawing)),
        None => out.write_all(&drawing).map_err(io_failure)?,
    }
    let mut text = format!(
        "{}: triangles={} vertices={} odd-odd={} channels={} max-channels={max}\n",
        d.value(),
        stats.triangles,
        stats.vertices,
        stats.odd_odd,
        stats.channels
    );
    text += &path_text;
    if let Some(path) = &a.out {
        text += &format!("wrote {}\n", path.display());
    }
    Ok((result, text))
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let input = json!({"suite": a.suite, "bound": a.bound, "k_max": a.k_max, "jobs": a.jobs});
    let o = Output { json: a.json, command: "verify", input };
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        let f = Failure::invalid("unknown_suite", format!("unknown suite {:?} (expected {} or all)", a.suite, SUITES.join(", ")));
        return o.fail(out, err, &f);
    };
    let bounds = Bounds { bound: a.bound, k_max: a.k_max };
    let reports: Vec<SuiteReport> =
        with_jobs(a.jobs, || names.iter().filter_map(|n| run_suite(n, bounds)).collect());
    let passed = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed { "pass" } else { "FAIL" };
        text += &format!("{}: {status} ({} checks, {} failures) range {}\n", r.suite, r.cases, r.failures.len(), r.range);
        if let Some(c) = &r.negative_control {
            text += &format!("  negative control \"{}\": {} of {} detected\n", c.description, c.detected, c.cases);
        }
        for f in r.failures.iter().take(10) {
            text += &format!("  {}: expected {}, got {} ({})\n", f.input, f.expected, f.actual, f.detail);
        }
        if r.failures.len() > 10 {
            text += &format!("  ... {} more\n", r.failures.len() - 10);
        }
    }
    let result = if names.len() == 1 {
        to_value(&reports[0])
    } else {
        json!({"passed": passed, "reports": reports})
    };
    match o.emit(out, result, &text) {
        Ok(()) if passed => EXIT_OK,
        Ok(()) => EXIT_VERIFY_FAILED,
        Err(e) => o.fail(out, err, &io_failure(e)),
    }
}
