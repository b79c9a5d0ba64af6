//! `pisot` command-line front end.
//!
//! [`run`] parses an argument vector, performs one computation and returns
//! the exit code together with the serialized report. Exit codes: 0 success,
//! 1 computational error, 2 usage error, 3 inconclusive (graph budget hit).
//! Every float in a JSON report sits next to its exact value or an error
//! bound; floats are for display and never drive a decision.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use pisot_core::algebraic::{AlgebraicReal, Context, FieldElement, IntPolynomial};
use pisot_core::classify::{classify_number, density_verdict, is_algebraic_integer, ClassTag, DensityVerdict};
use pisot_core::ifs::{
    build_neighbor_graph, completion_depth, covering_check, export_graph, overlap_multiplicity, wsc_constant,
    GraphOutcome, HomogeneousIFS, NeighborGraph, DEFAULT_BUDGET,
};
use pisot_core::spectrum::{
    enumerate_spectrum, gap_stats, min_nonzero_value, min_nonzero_value_bnb, min_nonzero_value_exhaustive,
    min_nonzero_value_split, power_norms, write_spectrum_csv, DigitSet, SpectrumSlice,
};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Absolute accuracy of every float converted from an exact value, on top
/// of the relative rounding implied by `--precision`.
const CONVERSION_ERROR: f64 = 1e-15;

#[derive(Parser, Debug)]
#[command(name = "pisot", version, about = "Exact Pisot, Salem and IFS separation reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root counts relative to the unit circle and the Pisot/Salem/Perron class
    Classify(ClassifyArgs),
    /// Whether the signed-digit polynomial values at q accumulate at 0
    Density(DensityArgs),
    /// Sorted values of digit polynomials at q up to a bound
    Spectrum(SpectrumArgs),
    /// Consecutive gaps of a spectrum slice
    Gaps(SpectrumArgs),
    /// Smallest nonzero |Σ ε_i q^i| over signed digit vectors of fixed length
    Minval(MinvalArgs),
    /// Distances of λq^n to the nearest integer
    Powers(PowersArgs),
    /// Neighbor graph of the IFS x ↦ x/q + i(1−1/q)/m, its WSC constant and completion depth
    Ftc(GraphArgs),
    /// Completion depth of the neighbor graph
    Completion(GraphArgs),
    /// Largest number of depth-n left endpoints in a window of length q^−n
    Overlap(OverlapArgs),
}

#[derive(Args, Debug)]
struct NumberArgs {
    /// Integer polynomial in x whose real root is q
    #[arg(long = "q-poly", visible_alias = "poly", value_parser = parse_poly, conflicts_with = "q_rational")]
    q_poly: Option<IntPolynomial>,
    /// Interval lo,hi holding exactly one root (default: the largest real root)
    #[arg(long = "root-in", value_parser = parse_interval)]
    root_in: Option<(BigRational, BigRational)>,
    /// Rational q as p/r
    #[arg(long = "q-rational", value_parser = parse_rational)]
    q_rational: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Significant digits of displayed floats
    #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    number: NumberArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    number: NumberArgs,
    /// Largest digit
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    number: NumberArgs,
    /// Digits 0..=m when --digits is absent
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Comma-separated nonnegative rational digits, including 0
    #[arg(long, value_parser = parse_digits)]
    digits: Option<Digits>,
    /// Largest value kept
    #[arg(long, value_parser = parse_rational)]
    bound: BigRational,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Search {
    Auto,
    Bnb,
    Split,
    Exhaustive,
}

#[derive(Args, Debug)]
struct MinvalArgs {
    #[command(flatten)]
    number: NumberArgs,
    /// Digits range over −m..=m
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Length n of the digit vectors
    #[arg(long, visible_alias = "n", value_parser = clap::value_parser!(u32).range(1..))]
    horizon: u32,
    /// Search back-end; auto starts with branch-and-bound and switches to the split search
    #[arg(long, value_enum, default_value_t = Search::Auto)]
    search: Search,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PowersArgs {
    #[command(flatten)]
    number: NumberArgs,
    /// Nonzero rational multiplier
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    lambda: BigRational,
    /// Largest exponent N
    #[arg(long, visible_alias = "n", default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    horizon: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    number: NumberArgs,
    /// Largest digit; the IFS has m+1 maps
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Node budget for the graph search
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Include the full node and edge lists
    #[arg(long)]
    emit_graph: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OverlapArgs {
    #[command(flatten)]
    number: NumberArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Largest depth n
    #[arg(long, visible_alias = "n", default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    horizon: u32,
    /// Also build the neighbor graph with this budget and report the bound ⌊1/c⌋+1
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Debug)]
struct Digits(Vec<BigRational>);

enum Failure {
    Usage(String),
    Compute(String),
}

fn compute<E: Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

struct Outcome {
    inputs: Map<String, Value>,
    results: Value,
    exactness: Value,
    csv: Option<String>,
    inconclusive: bool,
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code with the text destined for stdout (codes 0, 3) or stderr.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return (code, e.render().to_string());
        }
    };
    let start = Instant::now();
    let name = command_name(&cli.command);
    let format = output_args(&cli.command).format;
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => return (EXIT_USAGE, format!("error: {m}\n")),
        Err(Failure::Compute(m)) => return (EXIT_COMPUTE, format!("error: {m}\n")),
    };
    let code = if outcome.inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    if format == Format::Csv {
        return match outcome.csv {
            Some(text) => (code, text),
            None => (EXIT_USAGE, format!("error: --format csv is not available for {name}\n")),
        };
    }
    let report = json!({
        "command": name,
        "inputs": outcome.inputs,
        "results": outcome.results,
        "exactness": outcome.exactness,
        "timing_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    (code, text)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Density(_) => "density",
        Command::Spectrum(_) => "spectrum",
        Command::Gaps(_) => "gaps",
        Command::Minval(_) => "minval",
        Command::Powers(_) => "powers",
        Command::Ftc(_) => "ftc",
        Command::Completion(_) => "completion",
        Command::Overlap(_) => "overlap",
    }
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Classify(a) => &a.output,
        Command::Density(a) => &a.output,
        Command::Spectrum(a) | Command::Gaps(a) => &a.output,
        Command::Minval(a) => &a.output,
        Command::Powers(a) => &a.output,
        Command::Ftc(a) | Command::Completion(a) => &a.output,
        Command::Overlap(a) => &a.output,
    }
}

fn dispatch(c: &Command) -> Result<Outcome, Failure> {
    match c {
        Command::Classify(a) => classify(a),
        Command::Density(a) => density(a),
        Command::Spectrum(a) => spectrum(a, false),
        Command::Gaps(a) => spectrum(a, true),
        Command::Minval(a) => minval(a),
        Command::Powers(a) => powers(a),
        Command::Ftc(a) => graph(a, false),
        Command::Completion(a) => graph(a, true),
        Command::Overlap(a) => overlap(a),
    }
}

/// Float display rounded to the requested significant digits.
struct Display64 {
    precision: u8,
}

impl Display64 {
    fn new(o: &OutputArgs) -> Self {
        Self { precision: o.precision }
    }

    fn f(&self, x: f64) -> Value {
        if !x.is_finite() {
            return Value::Null;
        }
        let s = format!("{:.*e}", usize::from(self.precision - 1), x);
        json!(s.parse::<f64>().expect("formatted float parses"))
    }

    fn element(&self, e: &FieldElement) -> Value {
        json!({ "exact": e.to_poly_string("q"), "approx": self.f(e.to_f64()) })
    }

    /// `|approx − exact| ≤ relative·|exact| + absolute` for every paired float.
    fn error_bound(&self) -> Value {
        let relative =
            if self.precision >= 17 { f64::EPSILON } else { 0.5 * 10f64.powi(1 - i32::from(self.precision)) };
        json!({ "relative": relative, "absolute": CONVERSION_ERROR })
    }
}

fn parse_poly(s: &str) -> Result<IntPolynomial, String> {
    let p = pisot_core::algebraic::parse_polynomial(s).map_err(|e| e.to_string())?;
    if p.deg() == 0 {
        return Err("polynomial must have positive degree".into());
    }
    Ok(p)
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let bad = || format!("'{s}' is not a rational number (use p/r or a decimal)");
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_only = |x: &str| x.chars().all(|c| c.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !digits_only(int) || !digits_only(frac) {
        return Err(bad());
    }
    let n: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

fn parse_interval(s: &str) -> Result<(BigRational, BigRational), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let (lo, hi) = (parse_rational(a)?, parse_rational(b)?);
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

fn parse_digits(s: &str) -> Result<Digits, String> {
    s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map(Digits)
}

fn number(a: &NumberArgs) -> Result<Context, Failure> {
    match (&a.q_poly, &a.q_rational) {
        (Some(p), None) => {
            let r = match &a.root_in {
                Some((lo, hi)) => AlgebraicReal::from_root_in(p.clone(), lo.clone(), hi.clone())
                    .map_err(|e| Failure::Usage(format!("invalid value for '--root-in': {e}")))?,
                None => AlgebraicReal::largest_real_root(p)
                    .ok_or_else(|| Failure::Usage("'--q-poly' has no real root".into()))?,
            };
            Ok(Arc::new(r))
        }
        (None, Some(r)) => {
            if a.root_in.is_some() {
                return Err(Failure::Usage("'--root-in' only applies to '--q-poly'".into()));
            }
            Ok(Arc::new(AlgebraicReal::from_rational(r)))
        }
        _ => Err(Failure::Usage("one of '--q-poly' or '--q-rational' is required".into())),
    }
}

fn describe(q: &AlgebraicReal, d: &Display64) -> Value {
    let iso = q.iso();
    json!({
        "defpoly": q.defpoly().to_string_in("x"),
        "interval": [iso.lo.to_string(), iso.hi.to_string()],
        "approx": d.f(q.to_f64()),
    })
}

fn inputs_with_q(q: &AlgebraicReal, d: &Display64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("q".into(), describe(q, d));
    m
}

fn tag_name<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("enum serializes")
}

fn classify(a: &ClassifyArgs) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let inputs = inputs_with_q(&q, &d);
    let class = classify_number(&q).map_err(compute)?;
    let perron = matches!(class.tag, ClassTag::Pisot | ClassTag::Salem | ClassTag::PerronNotPisotSalem);
    Ok(Outcome {
        inputs,
        results: json!({
            "class": tag_name(&class.tag),
            "algebraic_integer": is_algebraic_integer(q.defpoly()),
            "perron": perron,
            "degree": q.degree(),
            "counts": class.counts,
        }),
        exactness: json!({ "counts": "exact", "class": "exact", "float_error": d.error_bound() }),
        csv: None,
        inconclusive: false,
    })
}

fn density(a: &DensityArgs) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let mut inputs = inputs_with_q(&q, &d);
    inputs.insert("m".into(), json!(a.m));
    let verdict = density_verdict(&q, a.m).map_err(compute)?;
    let class = classify_number(&q).map_err(compute)?;
    let results = match verdict {
        DensityVerdict::Dense => json!({ "verdict": "Dense", "class": tag_name(&class.tag) }),
        DensityVerdict::NotDense(reason) => json!({
            "verdict": "NotDense",
            "reason": tag_name(&reason),
            "class": tag_name(&class.tag),
        }),
    };
    Ok(Outcome {
        inputs,
        results,
        exactness: json!({ "verdict": "exact", "float_error": d.error_bound() }),
        csv: None,
        inconclusive: false,
    })
}

fn spectrum_csv(s: &SpectrumSlice) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write_spectrum_csv(s, &mut buf).map_err(compute)?;
    String::from_utf8(buf).map_err(compute)
}

fn spectrum(a: &SpectrumArgs, gaps: bool) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let digits = match &a.digits {
        Some(Digits(v)) => DigitSet::new(v.clone()).map_err(compute)?,
        None => DigitSet::nonnegative(a.m),
    };
    let mut inputs = inputs_with_q(&q, &d);
    let digit_strings: Vec<String> = digits.digits().iter().map(|x| x.to_string()).collect();
    inputs.insert("digits".into(), json!(digit_strings));
    inputs.insert("bound".into(), json!(a.bound.to_string()));
    let slice = enumerate_spectrum(&q, &digits, &a.bound).map_err(compute)?;
    let csv = Some(spectrum_csv(&slice)?);
    let results = if gaps {
        let g = gap_stats(&slice).map_err(compute)?;
        json!({
            "horizon": a.bound.to_string(),
            "points": slice.points.len(),
            "gaps": g.gaps.iter().map(|x| d.element(x)).collect::<Vec<_>>(),
            "min_gap": d.element(&g.min_gap),
            "max_gap": d.element(&g.max_gap),
        })
    } else {
        json!({
            "degree_cap": slice.degree_cap,
            "count": slice.points.len(),
            "points": slice.points.iter().map(|x| d.element(x)).collect::<Vec<_>>(),
        })
    };
    Ok(Outcome {
        inputs,
        results,
        exactness: json!({ "points": "exact", "complete_up_to_bound": true, "float_error": d.error_bound() }),
        csv,
        inconclusive: false,
    })
}

fn minval(a: &MinvalArgs) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let mut inputs = inputs_with_q(&q, &d);
    inputs.insert("m".into(), json!(a.m));
    inputs.insert("horizon".into(), json!(a.horizon));
    let n = a.horizon as usize;
    let r = match a.search {
        Search::Auto => min_nonzero_value(&q, a.m, n),
        Search::Bnb => min_nonzero_value_bnb(&q, a.m, n),
        Search::Split => min_nonzero_value_split(&q, a.m, n),
        Search::Exhaustive => min_nonzero_value_exhaustive(&q, a.m, n),
    }
    .map_err(compute)?;
    Ok(Outcome {
        inputs,
        results: json!({
            "value": d.element(&r.value),
            "witness": r.witness,
            "search": a.search.to_possible_value().expect("no skipped variants").get_name(),
            "states": r.states,
        }),
        exactness: json!({ "value": "exact", "float_error": d.error_bound() }),
        csv: None,
        inconclusive: false,
    })
}

fn powers(a: &PowersArgs) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let mut inputs = inputs_with_q(&q, &d);
    inputs.insert("lambda".into(), json!(a.lambda.to_string()));
    inputs.insert("horizon".into(), json!(a.horizon));
    let norms = power_norms(&a.lambda, &q, a.horizon).map_err(compute)?;
    let mut csv = String::from("n,norm_exact,nearest_integer,norm,norm_error,partial_sum,partial_sum_error\n");
    let rows: Vec<Value> = norms
        .iter()
        .map(|p| {
            csv.push_str(&format!(
                "{},{},{},{},{:e},{},{:e}\n",
                p.n, p.norm_exact, p.nearest_integer, p.norm, p.norm_error, p.partial_sum, p.partial_sum_error
            ));
            json!({
                "n": p.n,
                "norm_exact": p.norm_exact,
                "nearest_integer": p.nearest_integer,
                "norm": d.f(p.norm),
                "norm_error": p.norm_error,
                "partial_sum": d.f(p.partial_sum),
                "partial_sum_error": p.partial_sum_error,
            })
        })
        .collect();
    Ok(Outcome {
        inputs,
        results: json!({ "norms": rows }),
        exactness: json!({
            "norm_exact": "exact",
            "norm": "certified to norm_error before display rounding",
            "float_error": d.error_bound(),
        }),
        csv: Some(csv),
        inconclusive: false,
    })
}

fn ifs_inputs(q: &AlgebraicReal, m: u32, d: &Display64) -> Map<String, Value> {
    let mut inputs = inputs_with_q(q, d);
    inputs.insert("m".into(), json!(m));
    inputs
}

fn ifs_summary(f: &HomogeneousIFS, d: &Display64) -> Value {
    json!({
        "rho": d.element(f.rho()),
        "translations": f.translations().iter().map(|b| d.element(b)).collect::<Vec<_>>(),
        "covering": covering_check(f),
    })
}

/// Exported graph with display-rounded floats.
fn graph_json(g: &NeighborGraph, d: &Display64) -> Value {
    let mut v = serde_json::to_value(export_graph(g)).expect("graph serializes");
    for key in ["nodes", "deltas"] {
        if let Some(items) = v[key].as_array_mut() {
            for item in items {
                let x = item["approx"].as_f64();
                if let Some(x) = x {
                    item["approx"] = d.f(x);
                }
            }
        }
    }
    v
}

fn graph(a: &GraphArgs, completion_only: bool) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let mut inputs = ifs_inputs(&q, a.m, &d);
    inputs.insert("budget".into(), json!(a.budget));
    let f = HomogeneousIFS::from_q_m(&q, a.m).map_err(compute)?;
    let outcome = build_neighbor_graph(&f, a.budget as usize);
    let g = outcome.graph();
    let mut results = Map::new();
    results.insert("status".into(), json!(if outcome.is_complete() { "Complete" } else { "BudgetExceeded" }));
    results.insert("node_count".into(), json!(g.nodes.len()));
    if outcome.is_complete() {
        let depth = completion_depth(g).map_err(compute)?;
        if !completion_only {
            let c = wsc_constant(g).map_err(compute)?;
            results.insert("ifs".into(), ifs_summary(&f, &d));
            results.insert("gamma".into(), json!(g.nodes.iter().map(|v| v.to_poly_string("q")).collect::<Vec<_>>()));
            results.insert("gamma_approx".into(), json!(g.nodes.iter().map(|v| d.f(v.to_f64())).collect::<Vec<_>>()));
            results.insert("wsc_c".into(), json!(c.to_poly_string("q")));
            results.insert("wsc_c_approx".into(), d.f(c.to_f64()));
        }
        results.insert("completion_k".into(), json!(depth));
    }
    if a.emit_graph {
        results.insert("graph".into(), graph_json(g, &d));
    }
    Ok(Outcome {
        inputs,
        results: Value::Object(results),
        exactness: json!({
            "node_values": "exact",
            "termination": if outcome.is_complete() { "closure reached" } else { "inconclusive: budget exhausted" },
            "float_error": d.error_bound(),
        }),
        csv: None,
        inconclusive: !outcome.is_complete(),
    })
}

fn overlap(a: &OverlapArgs) -> Result<Outcome, Failure> {
    let d = Display64::new(&a.output);
    let q = number(&a.number)?;
    let mut inputs = ifs_inputs(&q, a.m, &d);
    inputs.insert("horizon".into(), json!(a.horizon));
    if let Some(b) = a.budget {
        inputs.insert("budget".into(), json!(b));
    }
    let f = HomogeneousIFS::from_q_m(&q, a.m).map_err(compute)?;
    let mut csv = String::from("n,multiplicity\n");
    let mut rows = Vec::new();
    let mut largest = 0;
    for n in 1..=a.horizon as usize {
        let l = overlap_multiplicity(&f, n).map_err(compute)?;
        largest = largest.max(l);
        csv.push_str(&format!("{n},{l}\n"));
        rows.push(json!({ "n": n, "multiplicity": l }));
    }
    let mut results = Map::new();
    results.insert("multiplicity".into(), json!(rows));
    if let Some(budget) = a.budget {
        let bound = match build_neighbor_graph(&f, budget as usize) {
            GraphOutcome::Complete(g) => {
                let c = wsc_constant(&g).map_err(compute)?;
                let inv = c.inv().map_err(compute)?;
                let limit = inv.floor() + BigInt::one();
                let within = BigInt::from(largest) <= limit;
                json!({
                    "wsc_c": d.element(&c),
                    "limit": limit.to_u64(),
                    "within_limit": within,
                })
            }
            GraphOutcome::BudgetExceeded(_) => json!({ "status": "BudgetExceeded" }),
        };
        results.insert("pigeonhole".into(), bound);
    }
    Ok(Outcome {
        inputs,
        results: Value::Object(results),
        exactness: json!({ "multiplicity": "exact", "float_error": d.error_bound() }),
        csv: Some(csv),
        inconclusive: false,
    })
}

/// Writes a `run` result the way the binary does.
pub fn emit(code: i32, text: &str) {
    let result = if code == EXIT_OK || code == EXIT_INCONCLUSIVE {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::io::stderr().write_all(text.as_bytes())
    };
    result.ok();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_flags() {
        assert_eq!(parse_rational("3/2").unwrap(), r(3, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), r(-5, 4));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
        assert_eq!(parse_interval("1,2").unwrap(), (r(1, 1), r(2, 1)));
        assert!(parse_interval("2,1").is_err());
        assert!(parse_interval("2").is_err());
        assert_eq!(parse_digits("0,1/2,2").unwrap().0, vec![r(0, 1), r(1, 2), r(2, 1)]);
    }

    #[test]
    fn display_rounding() {
        let d = Display64 { precision: 3 };
        assert_eq!(d.f(1.61803), json!(1.62));
        assert_eq!(d.f(f64::INFINITY), Value::Null);
        assert!(d.error_bound()["relative"].as_f64().unwrap() > 1e-3);
        let full = Display64 { precision: 17 };
        assert_eq!(full.f(0.1), json!(0.1));
    }
}
