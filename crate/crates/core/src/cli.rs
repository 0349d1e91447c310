//! Command-line front end.
//!
//! Exit codes: 0 accept or success, 1 reject, 2 usage or structural error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::comer::{build_59_65_partition, build_scheme, sweep, SchemeSummary};
use crate::gf2::{
    default_target_order, default_threshold, parse_bitstrings, search, validate_fixture,
    CandidateOrder, SearchConfig,
};
use crate::group::GroupSpec;
use crate::johnson::{mc_trial, minimal_sufficient_n, probability_bound, McOptions};
use crate::ra::{builtin, builtin_59_65, parse_spec, AtomId, RaSpec};
use crate::verify::{
    cayley_coloring, parse_partition, verify_bruteforce, verify_sumsets, ColoredPartition,
    VerificationReport, VerifyOptions,
};

/// Largest group the brute-force route is run on (the coloring is `n^2` bytes).
pub const BRUTEFORCE_LIMIT: usize = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "rarep",
    version,
    about = "Build, verify and search for finite representations of small relation algebras"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "RAREP_FORMAT",
        default_value = "table"
    )]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Sumset,
    Bruteforce,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    /// Weight ascending, seeded ties.
    Weight,
    Random,
}

#[derive(clap::Args, Debug)]
pub struct AlgebraArgs {
    /// Builtin algebra: 52_65 or 59_65.
    #[arg(long, conflicts_with = "spec")]
    pub algebra: Option<String>,
    /// Algebra spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the atoms and cycle structure of an algebra.
    ShowAlgebra {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Verify a group partition as a Cayley representation.
    VerifyGroupRep {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// z:N, 2^K or N1xN2x...; defaults to the partition file's `# group:` line.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_enum, default_value = "sumset")]
        method: MethodArg,
        /// Count every violation instead of stopping at the first.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100)]
        max_violations: usize,
    },
    /// Cyclotomic coset scheme over Z/p, or a sweep over primes with --p-max.
    Comer {
        #[arg(long, required_unless_present = "p_max")]
        p: Option<u64>,
        #[arg(long, default_value_t = 8)]
        m: u64,
        /// Primitive root (default: the smallest).
        #[arg(long)]
        g: Option<u64>,
        #[arg(long, conflicts_with_all = ["p", "g"])]
        p_max: Option<u64>,
    },
    /// Build and verify the 59_65 partition of Z/p from the m = 8 cosets.
    #[command(name = "build-59")]
    Build59 {
        #[arg(long, default_value_t = 113)]
        p: u64,
        #[arg(long)]
        g: Option<u64>,
        /// Write the partition file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the brute-force verifier.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Union bound on the failure probability of the random Johnson coloring.
    JohnsonBound {
        #[arg(long, default_value_t = 20)]
        max_n: u32,
    },
    /// Sample random Johnson colorings and verify each by brute force.
    JohnsonMc {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Allow more points than the default budget.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        early_exit: bool,
    },
    /// Randomized restart search for a subgroup of (Z/2Z)^k.
    SearchGf2 {
        #[arg(long)]
        k: usize,
        /// Weight threshold (default floor(2(k-1)/3)).
        #[arg(long)]
        t: Option<usize>,
        /// Default 2^(k-4).
        #[arg(long)]
        target_order: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        restarts: u64,
        /// Seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        /// Feasible candidates a restart may skip.
        #[arg(long, default_value_t = 0)]
        backtrack: usize,
        /// Bitstring file whose vectors seed every restart.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        /// Keep searching until a target-order span also verifies.
        #[arg(long)]
        require_accept: bool,
        #[arg(long, value_enum, default_value = "weight")]
        order: OrderArg,
        /// Write the nonzero elements of the best H here, one bitstring per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a listed subgroup of (Z/2Z)^k.
    ValidateFixture {
        path: PathBuf,
        #[arg(long)]
        t: Option<usize>,
    },
}

/// Parses `args` (including the program name) and runs the command.
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
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let fmt = cli.format;
    match &cli.command {
        Command::ShowAlgebra { algebra } => show_algebra(fmt, &load_algebra(algebra)?),
        Command::VerifyGroupRep {
            algebra,
            group,
            partition,
            method,
            exhaustive,
            max_violations,
        } => {
            let spec = load_algebra(algebra)?;
            let part = load_partition(partition, group.as_deref(), &spec)?;
            let opts = VerifyOptions {
                early_exit: !*exhaustive,
                max_violations: *max_violations,
            };
            verify_cmd(fmt, &spec, &part, *method, opts)
        }
        Command::Comer { p, m, g, p_max } => comer_cmd(fmt, *p, *m, *g, *p_max),
        Command::Build59 {
            p,
            g,
            out,
            bruteforce,
        } => build59_cmd(fmt, *p, *g, out.as_deref(), *bruteforce),
        Command::JohnsonBound { max_n } => johnson_bound_cmd(fmt, *max_n),
        Command::JohnsonMc {
            n,
            trials,
            seed,
            allow_large,
            early_exit,
        } => {
            let seed = seed.unwrap_or_else(derive_seed);
            let report = mc_trial(
                *n,
                *trials,
                seed,
                McOptions {
                    allow_large: *allow_large,
                    early_exit: *early_exit,
                },
            )?;
            let text = match fmt {
                Format::Json => to_json(&report)?,
                Format::Table => {
                    let mut s = format!(
                        "n: {}\npoints: {}\nseed: {}\n",
                        report.n, report.points, report.seed
                    );
                    s.push_str(&format!(
                        "{:>6} {:>8} {:>11}  by cycle\n",
                        "trial", "verdict", "violations"
                    ));
                    for t in &report.trials {
                        let by: Vec<String> = t
                            .violations_by_cycle
                            .iter()
                            .map(|(k, v)| format!("{k}={v}"))
                            .collect();
                        s.push_str(&format!(
                            "{:>6} {:>8} {:>11}  {}\n",
                            t.index,
                            verdict_word(t.verdict == crate::verify::Verdict::Accept),
                            t.violation_count,
                            by.join(" ")
                        ));
                    }
                    s.push_str(&format!(
                        "accepted: {}/{}\n",
                        report.accepted,
                        report.trials.len()
                    ));
                    s
                }
            };
            Ok((text, 0))
        }
        Command::SearchGf2 {
            k,
            t,
            target_order,
            seed,
            restarts,
            time_budget,
            backtrack,
            init,
            parallel,
            require_accept,
            order,
            out,
        } => {
            let mut cfg = SearchConfig::new(*k, seed.unwrap_or_else(derive_seed));
            cfg.t = t.unwrap_or_else(|| default_threshold(*k));
            cfg.target_order = target_order.unwrap_or_else(|| default_target_order(*k));
            cfg.restart_budget = *restarts;
            cfg.backtrack_depth = *backtrack;
            cfg.parallel = *parallel;
            cfg.require_accept = *require_accept;
            cfg.order = match order {
                OrderArg::Weight => CandidateOrder::WeightAscending,
                OrderArg::Random => CandidateOrder::Random,
            };
            if let Some(sec) = time_budget {
                if !sec.is_finite() || *sec < 0.0 {
                    bail!("--time-budget must be a non-negative number of seconds");
                }
                cfg.time_budget = Some(Duration::from_secs_f64(*sec));
            }
            if let Some(path) = init {
                let (g, elems) = parse_bitstrings(&read(path)?)?;
                if g.dimension() != Some(*k) {
                    bail!(
                        "{}: vectors have dimension {}, expected {k}",
                        path.display(),
                        g.dimension().unwrap_or(0)
                    );
                }
                cfg.initial_basis = elems;
            }
            search_cmd(fmt, &cfg, out.as_deref())
        }
        Command::ValidateFixture { path, t } => {
            let r = validate_fixture(&read(path)?, *t)?;
            let code = if r.pass { 0 } else { 1 };
            let text = match fmt {
                Format::Json => to_json(&with_verdict(&r, r.pass)?)?,
                Format::Table => {
                    let mut s = format!("k: {}  t: {}  listed: {}\n", r.k, r.t, r.listed);
                    let _ = writeln!(s, "weights in 1..={}: {}", r.t, yes_no(r.weights_ok));
                    for b in &r.bad_weights {
                        let _ = writeln!(s, "  bad weight: {b}");
                    }
                    let _ = writeln!(
                        s,
                        "closure: {} (span order {}, listed + 1 = {})",
                        yes_no(r.closure_ok),
                        r.span_order,
                        r.listed + 1
                    );
                    let _ = writeln!(s, "sumsets (52_65): {}", yes_no(r.sumsets_ok));
                    if let Some(rep) = &r.report {
                        s.push_str(&indent(&report_table(rep)));
                    }
                    match &r.classes {
                        Some(c) if c.failure.is_none() => {
                            let _ = writeln!(
                                s,
                                "b classes: {} ({}), sizes {:?}",
                                c.count,
                                yes_no(r.classes_ok),
                                dedup(&c.sizes)
                            );
                        }
                        Some(c) => {
                            let f = c.failure.expect("failure");
                            let _ = writeln!(
                                s,
                                "b classes: not transitive at ({}, {}, {})",
                                f.x, f.y, f.z
                            );
                        }
                        None => s.push_str("b classes: not computed\n"),
                    }
                    let _ = writeln!(s, "verdict: {}", verdict_word(r.pass));
                    s
                }
            };
            Ok((text, code))
        }
    }
}

fn derive_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn with_verdict<T: Serialize>(v: &T, ok: bool) -> Result<Value> {
    let mut value = serde_json::to_value(v)?;
    if let Value::Object(map) = &mut value {
        map.insert(
            "verdict".into(),
            json!(if ok { "accept" } else { "reject" }),
        );
    }
    Ok(value)
}

/// Serialized name of a unit enum variant.
fn label<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "accept"
    } else {
        "reject"
    }
}

fn dedup(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

/// The algebra named by `--algebra` or read from `--spec` (default 52_65).
pub fn load_algebra(args: &AlgebraArgs) -> Result<RaSpec> {
    if let Some(path) = &args.spec {
        return parse_spec(&read(path)?).with_context(|| format!("parsing {}", path.display()));
    }
    let name = args.algebra.as_deref().unwrap_or("52_65");
    builtin(name).ok_or_else(|| anyhow!("unknown algebra {name:?} (expected 52_65 or 59_65)"))
}

/// Reads a partition file. The group comes from `group` or, failing that,
/// from a `# group: ...` line in the file.
pub fn load_partition(path: &Path, group: Option<&str>, spec: &RaSpec) -> Result<ColoredPartition> {
    let text = read(path)?;
    let header = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("# group:").map(str::trim));
    let gtext = group.or(header).ok_or_else(|| {
        anyhow!(
            "{}: no --group given and no `# group:` line",
            path.display()
        )
    })?;
    let g = Arc::new(GroupSpec::parse(gtext)?);
    parse_partition(&text, &g, spec).with_context(|| format!("loading {}", path.display()))
}

fn show_algebra(fmt: Format, spec: &RaSpec) -> Result<(String, i32)> {
    let names =
        |ts: Vec<[AtomId; 3]>| -> Vec<String> { ts.iter().map(|t| spec.triple_name(t)).collect() };
    let allowed = names(spec.allowed_cycles().map(|c| c.atoms()).collect());
    let forbidden = names(spec.forbidden_cycles().iter().map(|c| c.atoms()).collect());
    let atoms: Vec<String> = (0..spec.atom_count())
        .map(|i| spec.atom_name(AtomId(i as u8)).to_string())
        .collect();
    let text = match fmt {
        Format::Json => to_json(&json!({
            "name": spec.name(),
            "atoms": atoms,
            "cycles": allowed,
            "forbidden": forbidden,
        }))?,
        Format::Table => {
            let mut s = format!("algebra: {}\natoms: {}\n", spec.name(), atoms.join(" "));
            let _ = writeln!(s, "cycles: {}", allowed.join(" "));
            let _ = writeln!(s, "forbidden: {}", forbidden.join(" "));
            s.push_str("composition (j;k -> atoms):\n");
            let div: Vec<AtomId> = spec.diversity_atoms().collect();
            for (n, &j) in div.iter().enumerate() {
                for &k in &div[n..] {
                    let p = spec.required_sumset_profile(j, k)?;
                    let mut parts: Vec<&str> = p.atoms.iter().map(|&a| spec.atom_name(a)).collect();
                    if p.include_zero {
                        parts.insert(0, "1'");
                    }
                    let _ = writeln!(
                        s,
                        "  {};{} -> {}",
                        spec.atom_name(j),
                        spec.atom_name(k),
                        parts.join(" ")
                    );
                }
            }
            s
        }
    };
    Ok((text, 0))
}

fn report_table(r: &VerificationReport) -> String {
    let mut s = format!(
        "algebra: {}  method: {}  points: {}\n",
        r.algebra,
        label(&r.method),
        r.points
    );
    if !r.pairs.is_empty() {
        let _ = writeln!(
            s,
            "{:<6} {:<14} {:<14} {:>8}",
            "pair", "expected", "realized", "|sum|"
        );
        for p in &r.pairs {
            let zero = |b: bool| if b { "1' " } else { "" };
            let _ = writeln!(
                s,
                "{:<6} {:<14} {:<14} {:>8}",
                format!("{};{}", p.j, p.k),
                format!("{}{}", zero(p.include_zero), p.expected.join(" ")),
                format!("{}{}", zero(p.contains_zero), p.realized.join(" ")),
                p.sumset_size
                    .map(|x| x.to_string())
                    .unwrap_or_else(|| "-".into())
            );
        }
    }
    let _ = writeln!(
        s,
        "violations: {}{}",
        r.violation_count,
        if r.truncated { " (stopped early)" } else { "" }
    );
    for (k, v) in &r.violations_by_cycle {
        let _ = writeln!(s, "  {k}: {v}");
    }
    for v in &r.violations {
        let _ = writeln!(
            s,
            "  {} {}{}{} at {}",
            label(&v.kind),
            v.i,
            v.j,
            v.k,
            serde_json::to_string(&v.at).unwrap_or_default()
        );
    }
    let _ = writeln!(s, "verdict: {}", verdict_word(r.accepted()));
    s
}

fn run_bruteforce(
    spec: &RaSpec,
    part: &ColoredPartition,
    opts: VerifyOptions,
) -> Result<VerificationReport> {
    let n = part.group().order();
    if n > BRUTEFORCE_LIMIT {
        bail!("brute force is limited to groups of order at most {BRUTEFORCE_LIMIT}, got {n}");
    }
    Ok(verify_bruteforce(spec, &cayley_coloring(part), opts)?)
}

fn verify_cmd(
    fmt: Format,
    spec: &RaSpec,
    part: &ColoredPartition,
    method: MethodArg,
    opts: VerifyOptions,
) -> Result<(String, i32)> {
    let sum = match method {
        MethodArg::Sumset | MethodArg::Both => Some(verify_sumsets(spec, part, opts)?),
        MethodArg::Bruteforce => None,
    };
    let brute = match method {
        MethodArg::Bruteforce | MethodArg::Both => Some(run_bruteforce(spec, part, opts)?),
        MethodArg::Sumset => None,
    };
    let ok = sum
        .iter()
        .chain(brute.iter())
        .all(VerificationReport::accepted);
    let code = if ok { 0 } else { 1 };
    let text = match (fmt, &sum, &brute) {
        (Format::Json, Some(r), None) | (Format::Json, None, Some(r)) => to_json(r)?,
        (Format::Json, Some(a), Some(b)) => to_json(&json!({
            "verdict": verdict_word(ok),
            "agree": a.verdict == b.verdict,
            "sumset": a,
            "bruteforce": b,
        }))?,
        (Format::Table, _, _) => {
            let mut s = format!("group: {}\n", part.group());
            for r in sum.iter().chain(brute.iter()) {
                s.push_str(&report_table(r));
            }
            if let (Some(a), Some(b)) = (&sum, &brute) {
                let _ = writeln!(s, "routes agree: {}", a.verdict == b.verdict);
            }
            s
        }
        (Format::Json, None, None) => unreachable!("at least one method runs"),
    };
    Ok((text, code))
}

fn comer_cmd(
    fmt: Format,
    p: Option<u64>,
    m: u64,
    g: Option<u64>,
    p_max: Option<u64>,
) -> Result<(String, i32)> {
    let rows: Vec<SchemeSummary> = match (p, p_max) {
        (_, Some(pm)) => sweep(m, pm),
        (Some(p), None) => vec![SchemeSummary::from(&build_scheme(p, m, g, false)?)],
        (None, None) => bail!("give --p or --p-max"),
    };
    let fmt_t = |t: &[usize; 3]| format!("({},{},{})", t[0], t[1], t[2]);
    let text = match fmt {
        Format::Json if p_max.is_some() => to_json(&json!({ "m": m, "schemes": rows }))?,
        Format::Json => to_json(&rows[0])?,
        Format::Table => {
            let mut s = String::new();
            if p_max.is_some() {
                let _ = writeln!(s, "m: {m}");
                let _ = writeln!(
                    s,
                    "{:>6} {:>4} {:>6} {:>7} {:>10}",
                    "p", "g", "|X_i|", "cycles", "forbidden"
                );
            }
            for r in &rows {
                if p_max.is_some() {
                    let _ = writeln!(
                        s,
                        "{:>6} {:>4} {:>6} {:>7} {:>10}",
                        r.p,
                        r.g,
                        r.coset_size,
                        r.cycles.len(),
                        r.forbidden.len()
                    );
                } else {
                    let _ = writeln!(
                        s,
                        "p: {}  m: {}  g: {}  |X_i|: {}",
                        r.p, r.m, r.g, r.coset_size
                    );
                    let _ = writeln!(s, "symmetric: {}", r.symmetric);
                    let _ = writeln!(s, "cycles: {}", r.cycles.len());
                    let _ = writeln!(s, "forbidden ({}):", r.forbidden.len());
                    for t in &r.forbidden {
                        let _ = writeln!(s, "  {}", fmt_t(t));
                    }
                }
            }
            s
        }
    };
    Ok((text, 0))
}

fn build59_cmd(
    fmt: Format,
    p: u64,
    g: Option<u64>,
    out: Option<&Path>,
    bruteforce: bool,
) -> Result<(String, i32)> {
    let scheme = build_scheme(p, 8, g, true)?;
    let part = build_59_65_partition(&scheme)?;
    let spec = builtin_59_65();
    let opts = VerifyOptions::exhaustive();
    let sum = verify_sumsets(&spec, &part, opts)?;
    let brute = if bruteforce {
        Some(run_bruteforce(&spec, &part, opts)?)
    } else {
        None
    };
    if let Some(path) = out {
        let mut text = format!(
            "# 59_65 over Z/{p}: a = X1..X5, b = X0, c = X6 X7 (m = 8, g = {})\n",
            scheme.g
        );
        text.push_str(&part.to_text(&spec));
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let ok = sum.accepted() && brute.as_ref().is_none_or(VerificationReport::accepted);
    let sizes: Vec<usize> = part.sets().iter().map(|s| s.len()).collect();
    let text = match fmt {
        Format::Json => to_json(&json!({
            "p": p,
            "g": scheme.g,
            "sizes": { "a": sizes[0], "b": sizes[1], "c": sizes[2] },
            "verdict": verdict_word(ok),
            "sumset": sum,
            "bruteforce": brute,
        }))?,
        Format::Table => {
            let mut s = format!(
                "p: {p}  g: {}  |a| = {}  |b| = {}  |c| = {}\n",
                scheme.g, sizes[0], sizes[1], sizes[2]
            );
            s.push_str(&report_table(&sum));
            if let Some(b) = &brute {
                s.push_str(&report_table(b));
            }
            if let Some(path) = out {
                let _ = writeln!(s, "wrote {}", path.display());
            }
            s
        }
    };
    Ok((text, if ok { 0 } else { 1 }))
}

fn johnson_bound_cmd(fmt: Format, max_n: u32) -> Result<(String, i32)> {
    if max_n < 3 {
        bail!("--max-n must be at least 3");
    }
    let rows = (3..=max_n)
        .map(probability_bound)
        .collect::<Result<Vec<_>, _>>()?;
    let first = minimal_sufficient_n();
    let text = match fmt {
        Format::Json => to_json(&json!({ "rows": rows, "minimal_sufficient_n": first }))?,
        Format::Table => {
            let mut s = format!(
                "{:>4} {:>24} {:>14} {:>10}\n",
                "n", "C(3n-4,n)", "ln bound", "below_one"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>4} {:>24} {:>14.6} {:>10}",
                    r.n,
                    r.binomial.to_string(),
                    r.log_bound,
                    r.below_one
                );
            }
            let _ = writeln!(s, "minimal sufficient n: {first}");
            s
        }
    };
    Ok((text, 0))
}

fn search_cmd(fmt: Format, cfg: &SearchConfig, out: Option<&Path>) -> Result<(String, i32)> {
    let o = search(cfg)?;
    let ok = o.report.accepted();
    if let Some(path) = out {
        let h = o.subgroup()?;
        let mut text = format!(
            "# H of order {} in (Z/2Z)^{}, t = {}, seed {}, verdict {}\n",
            o.order,
            o.k,
            o.t,
            o.seed,
            verdict_word(ok)
        );
        for x in h.iter().filter(|&x| x != h.group().zero()) {
            let _ = writeln!(text, "{}", h.group().format_element(x));
        }
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match fmt {
        Format::Json => to_json(&o)?,
        Format::Table => {
            let mut s = format!(
                "k: {}  t: {}  target order: {}  seed: {}  backtrack: {}\n",
                o.k, o.t, o.target_order, o.seed, o.backtrack_depth
            );
            let _ = writeln!(
                s,
                "|X| = {}  |C| = {}",
                o.precheck.x_size, o.precheck.c_size
            );
            let _ = writeln!(
                s,
                "restarts: {}  stop: {}  best restart: {}",
                o.stats.restarts_run,
                label(&o.stop),
                o.best_restart
            );
            let hist: Vec<String> = o
                .stats
                .order_histogram
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect();
            let _ = writeln!(s, "orders reached: {}", hist.join(" "));
            let _ = writeln!(s, "|H| = {}  reached target: {}", o.order, o.reached_target);
            s.push_str("basis:\n");
            for b in &o.basis {
                let _ = writeln!(s, "  {b}");
            }
            s.push_str(&report_table(&o.report));
            s
        }
    };
    Ok((text, if ok { 0 } else { 1 }))
}
