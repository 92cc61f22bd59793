//! The `pda-cdc` command-line front end.
//!
//! Reports are JSON envelopes `{command, tool_version, inputs, results}`
//! with sorted keys, so identical arguments give identical bytes. Exact
//! rationals appear as lowest-terms strings (`"5/12"`) next to a `_decimal`
//! field with 15 significant digits. Node numbers on the command line and in
//! reports are one-based.
//!
//! Exit codes: 0 success, 2 unreadable or invalid array, 3 parameter or
//! divisibility failure, 4 measurement disagrees with the closed form or an
//! output differs from the reference.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::combinatorics::binomial;
use crate::constructions::{build, ConstructionError, Family, GridFamilyParams, ManParams};
use crate::engine::{
    check_split_divisibility, measure_loads, minimal_v_bits, EngineError, JobSpec, LoadReport,
    MeasureMode,
};
use crate::loads::{
    achieved_load, optimal_load, prop1_check, GridFamily, LoadError, TradeoffCurve,
};
use crate::pda::{parse_rows, validate_pda, Pda, PdaError, PdaStats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARAMS: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pda-cdc",
    version,
    about = "Coded MapReduce schemes from placement delivery arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an array from a known family.
    Gen(GenArgs),
    /// Check an array file against the PDA conditions.
    Validate(PdaArgs),
    /// Parameters, minimum storage number and symbol frequencies.
    Stats(PdaArgs),
    /// Restrict an array to a set of nodes.
    Subarray(SubarrayArgs),
    /// Achieved loads against the optimal tradeoff.
    Analyze(AnalyzeArgs),
    /// Optimal storage/communication tradeoff table.
    Tradeoff(TradeoffArgs),
    /// Run the scheme bit-exactly and measure its loads.
    Simulate(SimulateArgs),
    /// Grid-family load and file-complexity ratios against the optimum.
    Prop1(Prop1Args),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    /// Write the array here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    /// Rows are the size-i subsets of K nodes.
    Man {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
    },
    /// First grid family, K = m q.
    P1 {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
    },
    /// Second grid family, K = m q.
    P2 {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
    },
    /// Every entry a star.
    Fullstar {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        f: usize,
    },
}

#[derive(Debug, Args)]
struct PdaArgs {
    /// Array file in the text format.
    #[arg(long)]
    pda: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SubarrayArgs {
    #[arg(long)]
    pda: PathBuf,
    /// Comma-separated one-based node numbers.
    #[arg(long, value_delimiter = ',', required = true)]
    nodes: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    pda: PathBuf,
    /// Number of active nodes.
    #[arg(long)]
    q: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TradeoffArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, conflicts_with = "all_q", required_unless_present = "all_q")]
    q: Option<usize>,
    /// One curve for every Q in 1..=K.
    #[arg(long)]
    all_q: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    pda: PathBuf,
    #[arg(long)]
    q: usize,
    /// Number of input files N.
    #[arg(long)]
    files: usize,
    /// Number of output functions D; padded up to a multiple of Q.
    #[arg(long)]
    functions: usize,
    /// IVA length V in bits.
    #[arg(long)]
    iva_bits: usize,
    /// File length W in bits.
    #[arg(long, default_value_t = 256)]
    file_bits: usize,
    /// Output length U in bits.
    #[arg(long, default_value_t = 64)]
    output_bits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    /// Active sets drawn in sample mode.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Seed for drawing active sets; defaults to --seed.
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Prop1Args {
    #[arg(long)]
    k: usize,
    /// Integer storage load.
    #[arg(long)]
    r: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{error}")]
    Engine {
        error: EngineError,
        hint: Option<String>,
    },
    #[error("{0}")]
    Usage(String),
}

impl From<EngineError> for CliError {
    fn from(error: EngineError) -> Self {
        CliError::Engine { error, hint: None }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_INVALID,
            CliError::Pda(e) => pda_exit(e),
            CliError::Construction(_) | CliError::Load(_) | CliError::Usage(_) => EXIT_PARAMS,
            CliError::Engine { error, .. } => match error {
                EngineError::Pda(e) => pda_exit(e),
                EngineError::Decode(_) => EXIT_MISMATCH,
                _ => EXIT_PARAMS,
            },
        }
    }

    pub fn hint(&self) -> Option<&str> {
        match self {
            CliError::Engine { hint, .. } => hint.as_deref(),
            _ => None,
        }
    }
}

fn pda_exit(e: &PdaError) -> i32 {
    match e {
        PdaError::Syntax { .. } | PdaError::EmptyGrid | PdaError::Invalid(_) => EXIT_INVALID,
        _ => EXIT_PARAMS,
    }
}

/// What a command produced: the main body (stdout or `--out`), an optional
/// human-readable note for stderr, and the exit code.
struct Outcome {
    body: String,
    note: Option<String>,
    exit: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            note: None,
            exit: EXIT_OK,
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parse `args` (including the program name) and execute, writing to the
/// given streams. Returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMS } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (out_path, result) = dispatch(cli.command);
    match result {
        Ok(outcome) => {
            if let Some(note) = &outcome.note {
                let _ = writeln!(stderr, "{note}");
            }
            match out_path {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &outcome.body) {
                        let _ = writeln!(stderr, "error: {}: {e}", path.display());
                        return EXIT_INVALID;
                    }
                }
                None => {
                    let _ = stdout.write_all(outcome.body.as_bytes());
                }
            }
            outcome.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Some(h) = e.hint() {
                let _ = writeln!(stderr, "hint: {h}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> (Option<PathBuf>, Result<Outcome, CliError>) {
    match command {
        Command::Gen(a) => (a.out.clone(), cmd_gen(&a)),
        Command::Validate(a) => (a.out.clone(), cmd_validate(&a)),
        Command::Stats(a) => (a.out.clone(), cmd_stats(&a)),
        Command::Subarray(a) => (a.out.clone(), cmd_subarray(&a)),
        Command::Analyze(a) => (a.out.clone(), cmd_analyze(&a)),
        Command::Tradeoff(a) => (a.out.clone(), cmd_tradeoff(&a)),
        Command::Simulate(a) => (a.out.clone(), cmd_simulate(&a)),
        Command::Prop1(a) => (a.out.clone(), cmd_prop1(&a)),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_pda(path: &Path) -> Result<Pda, CliError> {
    Ok(Pda::parse(&read_file(path)?)?)
}

fn envelope(command: &str, inputs: Value, results: Value) -> String {
    let v = json!({
        "command": command,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "results": results,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Decimal rendering with 15 significant digits, rounded half away from
/// zero, trailing zeros trimmed. Computed exactly from the rational.
pub fn decimal(x: &BigRational) -> String {
    const DIGITS: i64 = 15;
    if x.is_zero() {
        return "0".into();
    }
    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let a = x.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let mut digits = (&a * pow10(DIGITS - 1 - e)).round().to_integer();
    if digits >= num_traits::pow(ten.clone(), DIGITS as usize) {
        digits /= &ten;
        e += 1;
    }
    let s = digits.to_string();
    let body = if !(-7..21).contains(&e) {
        let frac = s[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{e}", &s[..1])
        } else {
            format!("{}.{frac}e{e}", &s[..1])
        }
    } else if e >= DIGITS - 1 {
        format!("{s}{}", "0".repeat((e - (DIGITS - 1)) as usize))
    } else if e >= 0 {
        let (int, frac) = s.split_at(e as usize + 1);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!(
            "0.{}{}",
            "0".repeat((-e - 1) as usize),
            s.trim_end_matches('0')
        )
    };
    if x.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn decimal_f64(x: f64) -> String {
    BigRational::from_float(x).map_or_else(|| x.to_string(), |r| decimal(&r))
}

/// Insert `key: "p/q"` and `key_decimal: "..."`.
fn put_rat(map: &mut Map<String, Value>, key: &str, x: &BigRational) {
    map.insert(key.into(), Value::String(x.to_string()));
    map.insert(format!("{key}_decimal"), Value::String(decimal(x)));
}

fn big_json(x: &BigInt) -> Value {
    x.to_u64()
        .map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn params_json(pda: &Pda) -> Value {
    let p = pda.params();
    json!({"k": p.k, "f": p.f, "t": p.t, "s": p.s, "tuple": p.to_string()})
}

fn stats_json(pda: &Pda, stats: &PdaStats) -> Value {
    let mut m = Map::new();
    m.insert("params".into(), params_json(pda));
    m.insert("tau".into(), stats.tau.into());
    m.insert("is_comp".into(), stats.is_comp.into());
    m.insert(
        "regular_g".into(),
        stats.regular_g.map_or(Value::Null, Value::from),
    );
    put_rat(&mut m, "storage_load", &stats.storage_load);
    let s_t: Map<String, Value> = stats
        .s_t
        .iter()
        .map(|(t, n)| (t.to_string(), Value::from(*n)))
        .collect();
    m.insert("s_t".into(), Value::Object(s_t));
    let theta: Map<String, Value> = stats
        .theta
        .iter()
        .map(|(t, th)| {
            (
                t.to_string(),
                json!({"exact": th.to_string(), "decimal": decimal(th)}),
            )
        })
        .collect();
    m.insert("theta".into(), Value::Object(theta));
    Value::Object(m)
}

fn summary_line(pda: &Pda) -> String {
    let st = pda.stats();
    let reg = st
        .regular_g
        .map_or("not regular".to_string(), |g| format!("{g}-regular"));
    format!("(K,F,T,S) = {}, {reg}, tau = {}", pda.params(), st.tau)
}

fn cmd_gen(a: &GenArgs) -> Result<Outcome, CliError> {
    let family = match a.family {
        GenFamily::Man { k, i } => Family::Man(ManParams { k_nodes: k, i }),
        GenFamily::P1 { q, m } => Family::P1(GridFamilyParams { q, m }),
        GenFamily::P2 { q, m } => Family::P2(GridFamilyParams { q, m }),
        GenFamily::Fullstar { k, f } => Family::FullStar {
            k_nodes: k,
            f_rows: f,
        },
    };
    let pda = build(family)?;
    Ok(Outcome {
        body: pda.render(),
        note: Some(summary_line(&pda)),
        exit: EXIT_OK,
    })
}

fn cmd_validate(a: &PdaArgs) -> Result<Outcome, CliError> {
    let rows = parse_rows(&read_file(&a.pda)?)?;
    let report = validate_pda(&rows);
    let structural = report.is_structurally_ok();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"rule": v.rule(), "structural": v.is_structural(), "message": v.to_string()}))
        .collect();
    let params = report.params.map_or(
        Value::Null,
        |p| json!({"k": p.k, "f": p.f, "t": p.t, "s": p.s, "tuple": p.to_string()}),
    );
    let results = json!({
        "valid": structural,
        "canonical": report.is_ok(),
        "params": params,
        "violations": violations,
    });
    let body = envelope(
        "validate",
        json!({"pda": a.pda.display().to_string()}),
        results,
    );
    Ok(Outcome {
        body,
        note: None,
        exit: if structural { EXIT_OK } else { EXIT_INVALID },
    })
}

fn cmd_stats(a: &PdaArgs) -> Result<Outcome, CliError> {
    let pda = load_pda(&a.pda)?;
    let results = stats_json(&pda, &pda.stats());
    Ok(Outcome::ok(envelope(
        "stats",
        json!({"pda": a.pda.display().to_string()}),
        results,
    )))
}

fn cmd_subarray(a: &SubarrayArgs) -> Result<Outcome, CliError> {
    let pda = load_pda(&a.pda)?;
    let nodes = a
        .nodes
        .iter()
        .map(|&n| {
            n.checked_sub(1)
                .ok_or_else(|| CliError::Usage("node numbers start at 1".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sub = pda.column_subarray(&nodes)?;
    let list: Vec<String> = a.nodes.iter().map(ToString::to_string).collect();
    let body = format!(
        "# nodes {} of a {}-node array\n{}",
        list.join(","),
        pda.k(),
        sub.render()
    );
    Ok(Outcome::ok(body))
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let pda = load_pda(&a.pda)?;
    let stats = pda.stats();
    let achieved = achieved_load(&pda, a.q)?;
    let optimal = optimal_load(pda.k(), a.q, &achieved.r)?;
    let mut m = Map::new();
    m.insert("stats".into(), stats_json(&pda, &stats));
    put_rat(&mut m, "r", &achieved.r);
    put_rat(&mut m, "l", &achieved.l);
    put_rat(&mut m, "l_optimal", &optimal);
    if optimal.is_zero() {
        let gap = if achieved.l.is_zero() {
            Some(BigRational::one())
        } else {
            None
        };
        match gap {
            Some(g) => put_rat(&mut m, "gap", &g),
            None => {
                m.insert("gap".into(), Value::Null);
            }
        }
    } else {
        put_rat(&mut m, "gap", &(&achieved.l / &optimal));
    }
    m.insert("f".into(), pda.f().into());
    let f_opt = if achieved.r.is_integer() {
        big_json(&binomial(
            pda.k() as i64,
            achieved.r.to_integer().to_i64().expect("small"),
        ))
    } else {
        Value::Null
    };
    m.insert("f_optimal".into(), f_opt);
    let inputs = json!({"pda": a.pda.display().to_string(), "q": a.q});
    Ok(Outcome::ok(envelope("analyze", inputs, Value::Object(m))))
}

fn curves(a: &TradeoffArgs) -> Result<Vec<TradeoffCurve>, CliError> {
    match a.q {
        Some(q) => Ok(vec![TradeoffCurve::new(a.k, q)?]),
        None => (1..=a.k).map(|q| Ok(TradeoffCurve::new(a.k, q)?)).collect(),
    }
}

fn cmd_tradeoff(a: &TradeoffArgs) -> Result<Outcome, CliError> {
    if a.k == 0 {
        return Err(CliError::Usage("--k must be positive".into()));
    }
    let curves = curves(a)?;
    let body = match a.format {
        Format::Csv => {
            let mut s = String::from("k,q,r,l_exact,l_decimal\n");
            for c in &curves {
                for (r, l) in &c.points {
                    s.push_str(&format!(
                        "{},{},{r},{l},{}\n",
                        c.k_nodes,
                        c.q_active,
                        decimal(l)
                    ));
                }
            }
            s
        }
        Format::Json => {
            let list: Vec<Value> = curves
                .iter()
                .map(|c| {
                    let points: Vec<Value> = c
                        .points
                        .iter()
                        .map(|(r, l)| json!({"r": r, "l": l.to_string(), "l_decimal": decimal(l)}))
                        .collect();
                    json!({"q": c.q_active, "points": points})
                })
                .collect();
            let inputs = json!({"k": a.k, "q": a.q, "all_q": a.all_q});
            envelope("tradeoff", inputs, json!({"k": a.k, "curves": list}))
        }
    };
    Ok(Outcome::ok(body))
}

fn engine_err(error: EngineError, hint: String) -> CliError {
    CliError::Engine {
        error,
        hint: Some(hint),
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let pda = load_pda(&a.pda)?;
    let k = pda.k();
    if a.q == 0 || a.q > k {
        return Err(EngineError::ActiveSize { q: a.q, k }.into());
    }
    achieved_load(&pda, a.q)?;
    if a.functions == 0 {
        return Err(CliError::Usage("--functions must be positive".into()));
    }
    let padded = a.functions.div_ceil(a.q) * a.q;
    let job = JobSpec {
        n_files: a.files,
        d_functions: padded,
        w_bits: a.file_bits,
        v_bits: a.iva_bits,
        u_bits: a.output_bits,
        seed: a.seed,
    };
    job.validate()?;
    let f = pda.f();
    if !a.files.is_multiple_of(f) {
        let next = a.files.div_ceil(f) * f;
        return Err(engine_err(
            EngineError::BatchDivisibility { f, n: a.files },
            format!("--files {next} (the file count must be a multiple of F = {f})"),
        ));
    }
    if let Err(error) = check_split_divisibility(&pda, &job, a.q) {
        let v_min = minimal_v_bits(&pda, &job, a.q);
        return Err(engine_err(
            error,
            format!(
                "--iva-bits {v_min} is the smallest IVA length >= {} that splits evenly",
                a.iva_bits
            ),
        ));
    }
    let mode = match a.mode {
        Mode::Exhaustive => MeasureMode::Exhaustive,
        Mode::Sample => MeasureMode::Sample {
            count: a.samples,
            seed: a.sample_seed.unwrap_or(a.seed),
        },
    };
    let report = measure_loads(&pda, &job, a.q, mode)?;
    let results = simulate_json(&report, a.functions, padded);
    let inputs = json!({
        "pda": a.pda.display().to_string(),
        "q": a.q,
        "files": a.files,
        "functions": a.functions,
        "iva_bits": a.iva_bits,
        "file_bits": a.file_bits,
        "output_bits": a.output_bits,
        "seed": a.seed,
        "mode": match mode {
            MeasureMode::Exhaustive => json!("exhaustive"),
            MeasureMode::Sample { count, seed } => json!({"sample": {"count": count, "seed": seed}}),
        },
    });
    let body = envelope("simulate", inputs, results);
    let exhaustive = matches!(mode, MeasureMode::Exhaustive);
    let mut problems = Vec::new();
    if exhaustive && !report.matches {
        problems.push(format!(
            "measured L = {} differs from closed form {}",
            report.l_measured, report.closed_form.l
        ));
    }
    if !report.all_reference_match {
        problems.push("some node's outputs differ from the reference".to_string());
    }
    Ok(if problems.is_empty() {
        Outcome::ok(body)
    } else {
        Outcome {
            body,
            note: Some(format!("error: {}", problems.join("; "))),
            exit: EXIT_MISMATCH,
        }
    })
}

fn simulate_json(report: &LoadReport, raw_d: usize, padded_d: usize) -> Value {
    let mut m = Map::new();
    put_rat(&mut m, "r_measured", &report.r_measured);
    put_rat(&mut m, "l_measured", &report.l_measured);
    let raw = &report.l_measured * BigRational::new(padded_d.into(), raw_d.into());
    put_rat(&mut m, "l_measured_raw_d", &raw);
    let mut cf = Map::new();
    put_rat(&mut cf, "r", &report.closed_form.r);
    put_rat(&mut cf, "l", &report.closed_form.l);
    m.insert("closed_form".into(), Value::Object(cf));
    m.insert("match".into(), report.matches.into());
    m.insert(
        "all_reference_match".into(),
        report.all_reference_match.into(),
    );
    m.insert("functions_raw".into(), raw_d.into());
    m.insert("functions_padded".into(), padded_d.into());
    m.insert("active_sets".into(), report.per_active_set.len().into());
    let sets: Vec<Value> = report
        .per_active_set
        .iter()
        .map(|s| {
            let nodes: Vec<usize> = s.active.iter().map(|n| n + 1).collect();
            json!({"nodes": nodes, "total_bits": s.total_bits, "reference_match": s.reference_match})
        })
        .collect();
    m.insert("per_active_set".into(), Value::Array(sets));
    Value::Object(m)
}

fn cmd_prop1(a: &Prop1Args) -> Result<Outcome, CliError> {
    let rep = prop1_check(a.k, a.r, a.q)?;
    let mut m = Map::new();
    m.insert("k".into(), rep.k_nodes.into());
    m.insert("r".into(), rep.r.into());
    m.insert("q_active".into(), rep.q_active.into());
    let family = match rep.family {
        GridFamily::P1 => "p1",
        GridFamily::P2 => "p2",
    };
    m.insert("family".into(), family.into());
    m.insert("q_family".into(), rep.q_family.into());
    put_rat(&mut m, "c", &rep.c);
    put_rat(&mut m, "l_achieved", &rep.l_achieved);
    put_rat(&mut m, "l_optimal", &rep.l_optimal);
    put_rat(&mut m, "l_ratio", &rep.l_ratio);
    put_rat(&mut m, "alpha", &rep.alpha);
    m.insert("f_construction".into(), big_json(&rep.f_construction));
    m.insert("f_optimal".into(), big_json(&rep.f_optimal));
    put_rat(&mut m, "f_ratio", &rep.f_ratio);
    m.insert("a_q".into(), decimal_f64(rep.a_q).into());
    m.insert("b_q".into(), decimal_f64(rep.b_q).into());
    m.insert("beta".into(), decimal_f64(rep.beta).into());
    m.insert(
        "beta_bound".into(),
        decimal_f64(crate::loads::beta_bound()).into(),
    );
    m.insert("alpha_in_range".into(), rep.alpha_in_range.into());
    m.insert("beta_in_range".into(), rep.beta_in_range.into());
    let inputs = json!({"k": a.k, "r": a.r, "q": a.q});
    Ok(Outcome::ok(envelope("prop1", inputs, Value::Object(m))))
}
