//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails or a cap is exceeded,
//! 2 on usage and parse errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::adversary::{
    balance, builtin_scheme, loads, read_scheme, unit_scheme, write_scheme, Side, WeightScheme,
};
use crate::boolfn::BooleanFunction;
use crate::compose::{compose_scheme, predicted_bound, MAX_COMPOSE_ARITY};
use crate::error::{Error, Result};
use crate::matchings::{build_matchings, listed_first_matching, SetId};
use crate::measures::{
    approx::MAX_APPROX_ARITY,
    certificate::{DEFAULT_CERT_ARITY, MAX_CERT_ARITY},
    degree, iterated_certificates,
    iterated::MAX_ITERATED_ARITY,
    sensitivity::MAX_BS_ARITY,
    tree::MAX_DT_ARITY,
    ComplexityReport, Measure, ReportOptions,
};
use crate::qsim::{check_drop_bound, check_final_bound, progress_trace, AlgorithmFile, QueryAlgorithm, DEFAULT_WORK};
use crate::weight::Weight;

#[derive(Debug, Parser)]
#[command(name = "advwb", version, about = "Boolean-function query complexity workbench")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ADVWB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complexity measures of a truth-table file or built-in function.
    Measures(MeasuresArgs),
    /// Verifies a weight scheme and prints its loads and bound.
    VerifyScheme(VerifyArgs),
    /// Composes a base scheme with itself.
    Compose(ComposeArgs),
    /// Builds and checks the perfect-matching relations.
    Matchings(MatchingsArgs),
    /// Simulates a query algorithm and tracks the progress measure.
    Simulate(SimulateArgs),
    /// Certificates for iterated functions.
    Iterate(IterateArgs),
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    /// Truth-table file, or a built-in name with `--builtin`.
    pub input: String,
    #[arg(long)]
    pub builtin: bool,
    /// Approximation error for approx_deg, as a rational.
    #[arg(long, default_value = "1/3")]
    pub eps: String,
    /// Comma-separated measures to skip: deg, approx_deg, s, bs, c, d.
    #[arg(long, value_delimiter = ',')]
    pub skip: Vec<String>,
    /// Raise the certificate-complexity cap.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Scheme file, or a built-in name with `--builtin`.
    pub input: String,
    #[arg(long)]
    pub builtin: bool,
    /// Write the scheme to this file.
    #[arg(long)]
    pub export: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Base {
    F,
    G,
    H,
}

impl Base {
    fn scheme(self) -> WeightScheme {
        let name = match self {
            Base::F => "scheme_f",
            Base::G => "scheme_g",
            Base::H => "scheme_h",
        };
        builtin_scheme(name).expect("built-in")
    }

    fn function(self) -> BooleanFunction {
        match self {
            Base::F => BooleanFunction::base_f(),
            Base::G => BooleanFunction::nae_g(),
            Base::H => BooleanFunction::kushilevitz_h(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long, value_enum)]
    pub base: Base,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Also check the block-sum and slice-load identities.
    #[arg(long)]
    pub identities: bool,
    /// Write the composed scheme to this file.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatchingsArgs {
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// 1 (first) or 2 (second).
    #[arg(long, default_value = "1")]
    pub set: String,
    /// Write every matching as `x y` lines to this file.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Algorithm file; otherwise see --parity, --identity and --seed.
    #[arg(long, conflicts_with_all = ["parity", "seed"])]
    pub algorithm: Option<PathBuf>,
    /// The one-query parity algorithm on two bits.
    #[arg(long, conflicts_with = "seed")]
    pub parity: bool,
    /// Identity unitaries.
    #[arg(long, conflicts_with_all = ["parity", "seed", "algorithm"])]
    pub identity: bool,
    /// Random unitaries from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    pub arity: usize,
    #[arg(long, default_value_t = 2)]
    pub queries: usize,
    #[arg(long, default_value_t = DEFAULT_WORK)]
    pub work: usize,
    /// Built-in scheme name, scheme file, or `unit:<function>` for the unit
    /// scheme on all distance-1 pairs.
    #[arg(long)]
    pub scheme: String,
    /// Balance the scheme first.
    #[arg(long)]
    pub balance: bool,
    /// Also check the final bound for this error.
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long, value_enum, conflicts_with = "function")]
    pub base: Option<Base>,
    /// Truth-table file for the base function.
    #[arg(long)]
    pub function: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::UnknownBuiltin(_) | Error::InvalidWeight(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let mut text = String::new();
    let result = match &cli.command {
        Command::Measures(a) => cmd_measures(a, &mut text),
        Command::VerifyScheme(a) => cmd_verify(a, &mut text),
        Command::Compose(a) => cmd_compose(a, &mut text),
        Command::Matchings(a) => cmd_matchings(a, &mut text),
        Command::Simulate(a) => cmd_simulate(a, &mut text),
        Command::Iterate(a) => cmd_iterate(a, &mut text),
    };
    let _ = out.write_all(text.as_bytes());
    match result {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_function(path: &Path) -> Result<BooleanFunction> {
    BooleanFunction::from_text(&std::fs::read_to_string(path)?)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidWeight(s.to_string());
    let (p, q) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let p = p.trim().parse().map_err(|_| bad())?;
    let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
    if q == num_bigint::BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn cmd_measures(a: &MeasuresArgs, out: &mut String) -> Result<Status> {
    let f = if a.builtin {
        BooleanFunction::builtin(&a.input)?
    } else {
        read_function(Path::new(&a.input))?
    };
    let mut skip: BTreeSet<Measure> = a
        .skip
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Measure>().map_err(Error::UnknownBuiltin))
        .collect::<Result<_>>()?;
    let n = f.arity();
    let mut capped = Vec::new();
    for (m, cap) in [
        (Measure::ApproxDeg, MAX_APPROX_ARITY),
        (Measure::Bs, MAX_BS_ARITY),
        (Measure::C, MAX_CERT_ARITY),
        (Measure::D, MAX_DT_ARITY),
    ] {
        if n > cap && skip.insert(m) {
            capped.push(format!("{m:?}"));
        }
    }
    if n > DEFAULT_CERT_ARITY && !a.allow_large && !skip.contains(&Measure::C) {
        return Err(Error::ArityOverflow {
            arity: n,
            limit: DEFAULT_CERT_ARITY,
            operation: "certificate complexity without --allow-large",
        });
    }
    let opts = ReportOptions {
        eps: parse_rational(&a.eps)?,
        skip,
        allow_large: a.allow_large,
    };
    let report = ComplexityReport::compute(&f, &opts)?;
    if a.json {
        let _ = writeln!(out, "{}", report.to_json());
    } else {
        out.push_str(&report.to_text());
        if !capped.is_empty() {
            let _ = writeln!(out, "skipped above arity cap: {}", capped.join(", "));
        }
    }
    Ok(Status::Ok)
}

fn range(r: Option<(Weight, Weight)>) -> String {
    match r {
        Some((lo, hi)) if lo == hi => lo.pretty(),
        Some((lo, hi)) => format!("{} .. {}", lo.pretty(), hi.pretty()),
        None => "none".to_string(),
    }
}

fn load_summary(scheme: &WeightScheme, out: &mut String) -> Result<()> {
    let l = loads(scheme)?;
    for (side, name) in [(Side::A, "A"), (Side::B, "B")] {
        let _ = writeln!(out, "wt on {name}    {}", range(l.wt_range(side)));
        let _ = writeln!(out, "v on {name}     {}", range(l.v_range(side)));
    }
    let _ = writeln!(out, "v_A        {}", l.v_a.pretty());
    let _ = writeln!(out, "v_B        {}", l.v_b.pretty());
    let _ = writeln!(out, "v_max      {}", l.v_max.pretty());
    let _ = writeln!(out, "bound      {}", l.bound.pretty());
    Ok(())
}

fn exact_or_float(w: &Weight) -> String {
    match w.exact() {
        Some(e) => e.to_string(),
        None => format!("{:.9}", w.to_f64()),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut String) -> Result<Status> {
    let scheme = if a.builtin {
        builtin_scheme(&a.input)?
    } else {
        read_scheme(Path::new(&a.input))?
    };
    if let Some(path) = &a.export {
        write_scheme(&scheme, path)?;
    }
    let report = scheme.verify();
    if !report.is_valid() {
        let _ = writeln!(
            out,
            "invalid: {} violations over {} pairs",
            report.total, report.pairs_checked
        );
        for v in &report.violations {
            let _ = writeln!(out, "  {v}");
        }
        return Ok(Status::Failed);
    }
    let l = loads(&scheme)?;
    if a.json {
        let json = serde_json::json!({
            "valid": true,
            "exact": report.exact,
            "pairs": scheme.len(),
            "v_A": exact_or_float(&l.v_a),
            "v_B": exact_or_float(&l.v_b),
            "v_max": exact_or_float(&l.v_max),
            "bound": exact_or_float(&l.bound),
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("json"));
        return Ok(Status::Ok);
    }
    let _ = writeln!(out, "valid, bound = {}", l.bound.pretty());
    let _ = writeln!(
        out,
        "pairs      {} (|A| = {}, |B| = {}, {})",
        scheme.len(),
        scheme.a().len(),
        scheme.b().len(),
        if report.exact { "exact" } else { "tolerance 1e-9" }
    );
    load_summary(&scheme, out)?;
    Ok(Status::Ok)
}

fn cmd_compose(a: &ComposeArgs, out: &mut String) -> Result<Status> {
    if a.depth == 0 {
        return Err(Error::DepthOverflow { depth: 0, limit: 0 });
    }
    let raw = a.base.scheme();
    let base = Arc::new(balance(&raw)?);
    let base_bound = loads(&base)?.bound;
    let predicted = predicted_bound(base_bound, a.depth);
    let _ = writeln!(out, "base bound       {}", base_bound.pretty());
    let _ = writeln!(out, "predicted bound  {}", predicted.pretty());
    let n = base.arity();
    let arity = (n as u64).checked_pow(a.depth as u32).unwrap_or(u64::MAX);
    if arity > MAX_COMPOSE_ARITY as u64 {
        let _ = writeln!(
            out,
            "notice: depth {} has arity {arity} above the composition limit {MAX_COMPOSE_ARITY}; predicted bound only",
            a.depth
        );
        return Ok(Status::Ok);
    }
    let mut current = base.clone();
    let mut last = None;
    for _ in 1..a.depth {
        let c = compose_scheme(base.clone(), current)?;
        current = c.scheme.clone();
        last = Some(c);
    }
    let report = current.verify();
    let _ = writeln!(
        out,
        "verify           {} violations over {} pairs{}",
        report.total,
        report.pairs_checked,
        if report.exact { " (exact)" } else { "" }
    );
    if !report.is_valid() {
        for v in &report.violations {
            let _ = writeln!(out, "  {v}");
        }
        return Ok(Status::Failed);
    }
    let l = loads(&current)?;
    let _ = writeln!(out, "v_A              {}", l.v_a.pretty());
    let _ = writeln!(out, "v_B              {}", l.v_b.pretty());
    let _ = writeln!(out, "measured bound   {}", l.bound.pretty());
    let mut ok = l.bound.eq_tol(&predicted);
    if a.identities {
        if let Some(c) = &last {
            for (name, check) in [
                ("block sums", c.check_block_sums()),
                ("weight products", c.check_weight_products()),
                ("slice loads", c.check_slice_loads(1)),
            ] {
                let _ = writeln!(
                    out,
                    "{name:<16} {}/{} hold",
                    check.checked - check.failures,
                    check.checked
                );
                ok &= check.holds();
            }
        }
    }
    if let Some(path) = &a.export {
        write_scheme(&current, path)?;
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn cmd_matchings(a: &MatchingsArgs, out: &mut String) -> Result<Status> {
    let set: SetId = a.set.parse()?;
    let ms = build_matchings(a.depth, set)?;
    let c = ms.check()?;
    let p = &c.params;
    let name = match set {
        SetId::First => "first",
        SetId::Second => "second",
    };
    let _ = writeln!(
        out,
        "depth {}, {name} set: {} matchings of {} pairs",
        a.depth,
        ms.len(),
        ms.a.len()
    );
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "bijective  {}", yes(c.bijective));
    let _ = writeln!(out, "disjoint   {}", yes(c.disjoint));
    let _ = writeln!(out, "m = {}, m' = {}, l = {}, l' = {}", p.m, p.m_prime, p.l, p.l_prime);
    let _ = writeln!(out, "bound      {}", Weight::Exact(p.bound).pretty());
    if a.depth == 1 && set == SetId::First {
        let _ = writeln!(out, "matching 1 {}", ms.render_first().expect("depth 1"));
        let _ = writeln!(out, "listed     {}", listed_first_matching());
    }
    if let Some(path) = &a.export {
        let mut text = String::new();
        for k in 0..ms.len() {
            let _ = writeln!(text, "# matching {}", k + 1);
            text.push_str(&ms.export(k));
        }
        std::fs::write(path, text)?;
    }
    Ok(if c.bijective && c.disjoint { Status::Ok } else { Status::Failed })
}

/// All distance-1 pairs `(x, y)` with `f(x) = 0`, `f(y) = 1`.
fn distance_one_unit(f: BooleanFunction) -> Result<WeightScheme> {
    let a = f.preimage(false);
    let b = f.preimage(true);
    let n = f.arity();
    let r: Vec<(u64, u64)> = a
        .iter()
        .flat_map(|&x| (0..n).map(move |k| (x, x ^ (1 << k))))
        .filter(|&(_, y)| f.value(y))
        .collect();
    unit_scheme(Arc::new(f), &a, &b, &r)
}

fn resolve_scheme(spec: &str) -> Result<WeightScheme> {
    if let Some(func) = spec.strip_prefix("unit:") {
        let f = BooleanFunction::builtin(func).or_else(|_| read_function(Path::new(func)))?;
        return distance_one_unit(f);
    }
    builtin_scheme(spec).or_else(|e| {
        if Path::new(spec).exists() {
            read_scheme(Path::new(spec))
        } else {
            Err(e)
        }
    })
}

fn cmd_simulate(a: &SimulateArgs, out: &mut String) -> Result<Status> {
    let (alg, label) = if let Some(path) = &a.algorithm {
        let text = std::fs::read_to_string(path)?;
        (AlgorithmFile::from_json(&text)?.into_algorithm()?, format!("file {}", path.display()))
    } else if a.parity {
        (QueryAlgorithm::parity2(), "parity(2)".to_string())
    } else if a.identity {
        (QueryAlgorithm::identity(a.arity, a.work, a.queries)?, "identity".to_string())
    } else {
        let seed = a.seed.unwrap_or(0);
        (
            QueryAlgorithm::random(a.arity, a.work, a.queries, seed)?,
            format!("random, seed {seed}"),
        )
    };
    let mut scheme = resolve_scheme(&a.scheme)?;
    if a.balance {
        scheme = balance(&scheme)?;
    }
    let _ = writeln!(
        out,
        "algorithm  N = {}, work = {}, T = {} ({label})",
        alg.arity(),
        alg.work(),
        alg.queries()
    );
    let _ = writeln!(out, "scheme     {} ({} pairs)", a.scheme, scheme.len());
    let trace = progress_trace(&alg, &scheme)?;
    let _ = writeln!(out, "v_max      {:.9}", trace.v_max);
    for (t, w) in trace.w.iter().enumerate() {
        let _ = writeln!(out, "W_{t:<8} {w:.9}");
    }
    let _ = writeln!(out, "max drop   {:.9}", trace.max_drop());
    let _ = writeln!(out, "drop limit {:.9}", trace.drop_limit());
    let drops_ok = check_drop_bound(&trace);
    let _ = writeln!(out, "drop bound {}", if drops_ok { "holds" } else { "VIOLATED" });
    let mut ok = drops_ok;
    if let Some(eps) = a.eps {
        let c = check_final_bound(&alg, &scheme, eps)?;
        if c.precondition_failures.is_empty() {
            let _ = writeln!(
                out,
                "final      W_T = {:.9} <= {:.9}: {}",
                c.w_final,
                c.limit,
                if c.holds() { "holds" } else { "VIOLATED" }
            );
            let _ = writeln!(out, "T >= {:.9}", c.query_lower_bound);
        } else {
            let _ = writeln!(out, "precondition failed: error above {eps} on {} inputs", c.precondition_failures.len());
            for (x, e) in c.precondition_failures.iter().take(10) {
                let _ = writeln!(out, "  x = {x}: error {e:.9}");
            }
        }
        ok &= c.holds();
    }
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn cmd_iterate(a: &IterateArgs, out: &mut String) -> Result<Status> {
    let f = match (&a.function, a.base) {
        (Some(path), _) => read_function(path)?,
        (None, Some(b)) => b.function(),
        (None, None) => Base::F.function(),
    };
    let c = iterated_certificates(&f, a.depth)?;
    let _ = writeln!(out, "depth      {}", c.depth);
    let _ = writeln!(out, "arity      {}", c.arity);
    let _ = writeln!(out, "s          {} .. {}", c.s_min, c.s_max);
    let _ = writeln!(out, "bs >=      {} .. {}", c.bs_lower_min, c.bs_lower_max);
    let _ = writeln!(out, "D <=       {}", c.d_upper);
    if c.arity <= MAX_ITERATED_ARITY as u64 {
        let _ = writeln!(out, "deg        {}", degree(&f.iterate(a.depth)?)?);
    }
    let _ = writeln!(
        out,
        "{}",
        if c.materialized {
            "checked on every input"
        } else {
            "product rule only (not materialized)"
        }
    );
    if c.tight() {
        let _ = writeln!(out, "bs = D = {}", c.d_upper);
    }
    Ok(Status::Ok)
}
