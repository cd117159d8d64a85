//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 when the checked relation holds (or every trial agrees),
//! 1 when it fails, 2 on any input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use stochord_core::dualcheck::{
    exhaustive_small_scan, run_equivalence_suite, run_identity_suite, Identity, InstanceSpec, TheoremId,
};
use stochord_core::majorize::{majorizes, universal_statements, MajorizationKind};
use stochord_core::ordering::{classic, double_ordering, lower_ordering, upper_ordering};
use stochord_core::welfare::{self, Perception};
use stochord_core::{ClassicOrder, OrderingVerdict, PiecewiseLinear, StandardPair, Tolerance};

use crate::error::{CliError, CliResult};
use crate::formats::{read_distribution, read_function, read_pair, read_vector};

/// Version of every JSON report emitted.
pub const SCHEMA_VERSION: u32 = 1;

/// Decide distorted stochastic orderings and verify their dual forms.
#[derive(Debug, Parser)]
#[command(name = "stochord", version)]
pub struct Cli {
    /// Comparison tolerance for every inequality.
    #[arg(long, global = true, env = "STOCHORD_EPS", default_value_t = 1e-9)]
    pub eps: f64,
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether DIST1 is ordered below DIST2.
    Check {
        /// fsd, ssd, icv, icx, lorenz-weak, lorenz-upper, upper, lower or double.
        order: String,
        /// First distribution file.
        dist1: PathBuf,
        /// Second distribution file.
        dist2: PathBuf,
        /// Standard pair for upper, lower and double; identity when omitted.
        #[arg(long)]
        pair: Option<PathBuf>,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the cumulative quantile integral on a uniform grid of levels.
    Lorenz {
        /// Distribution file.
        dist: PathBuf,
        /// Number of intervals; rows are p = 0, 1/n, ..., 1.
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Divide by the mean.
        #[arg(long)]
        normalize: bool,
    },
    /// Evaluate a welfare functional.
    Welfare {
        /// Distribution file.
        dist: PathBuf,
        /// Functional.
        functional: Functional,
        /// Perception function file; identity when omitted.
        #[arg(long)]
        f0: Option<PathBuf>,
        /// Utility function file for rdeu; identity when omitted.
        #[arg(long)]
        u0: Option<PathBuf>,
        /// Exponent of the S-Gini perception.
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        /// Knots of the interpolated S-Gini perception.
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check whether vector X majorizes vector Y.
    Majorize {
        /// First vector file.
        x: PathBuf,
        /// Second vector file.
        y: PathBuf,
        /// Kind of majorization.
        #[arg(long, value_enum, default_value_t = Kind::Strong)]
        kind: Kind,
        /// Also decide the four universal sum statements with this anchor.
        #[arg(long)]
        sums: Option<f64>,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the equivalence harness or an identity check; prints a JSON report.
    Verify {
        /// Theorem (T1, T1-star, T2, T3, L1, L3, EQ1, COR1, COR2, MAJ) or
        /// identity (IBP, CV1-CV4, LEMMA4, YAARI).
        theorem: String,
        /// Random trials.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Base seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Most atoms per distribution.
        #[arg(long, default_value_t = 10)]
        atoms: usize,
        /// Most knots per base function.
        #[arg(long, default_value_t = 5)]
        knots: usize,
        /// Lower end of the value range.
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        lo: f64,
        /// Upper end of the value range.
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        hi: f64,
        /// Scan every pair of vectors over a grid instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Vector length for the scan.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Grid values for the scan.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2", allow_hyphen_values = true)]
        grid: Vec<f64>,
        /// Largest acceptable residual for identities.
        #[arg(long, default_value_t = 1e-9)]
        max_residual: f64,
    },
}

/// Welfare functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Functional {
    /// Expected value.
    Mean,
    /// Yaari dual functional under `--f0`.
    Yaari,
    /// Rank-dependent expected utility under `--u0` and `--f0`.
    Rdeu,
    /// Yaari functional under `p^rho`.
    Sgini,
    /// Gini index.
    Gini,
}

/// Majorization kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Strong.
    Strong,
    /// Upper weak.
    WeakUpper,
    /// Lower weak.
    WeakLower,
    /// Strong, of the logarithms.
    Log,
    /// Upper weak, of the logarithms.
    LogWeakUpper,
    /// Lower weak, of the logarithms.
    LogWeakLower,
}

impl From<Kind> for MajorizationKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Strong => MajorizationKind::Strong,
            Kind::WeakUpper => MajorizationKind::WeakUpper,
            Kind::WeakLower => MajorizationKind::WeakLower,
            Kind::Log => MajorizationKind::Log,
            Kind::LogWeakUpper => MajorizationKind::LogWeakUpper,
            Kind::LogWeakLower => MajorizationKind::LogWeakLower,
        }
    }
}

/// Parses arguments and runs, returning the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    }
}

/// Runs a parsed command. `Ok(true)` means the relation holds.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<bool> {
    if !(cli.eps.is_finite() && cli.eps >= 0.0) {
        return Err(CliError::BadParams(format!("eps must be finite and nonnegative, got {}", cli.eps)));
    }
    let tol = Tolerance(cli.eps);
    match &cli.command {
        Command::Check {
            order,
            dist1,
            dist2,
            pair,
            json,
        } => {
            let f1 = read_distribution(dist1)?;
            let f2 = read_distribution(dist2)?;
            let v = check(order, pair.as_deref(), &f1, &f2, tol)?;
            if *json {
                let body = json!({"schema_version": SCHEMA_VERSION, "order": order, "verdict": v});
                writeln!(out, "{body}").map_err(io)?;
            } else {
                write_verdict(out, order, &v).map_err(io)?;
            }
            Ok(v.holds)
        }
        Command::Lorenz { dist, points, normalize } => {
            let f = read_distribution(dist)?;
            for (p, value) in lorenz_table(&f, *points, *normalize)? {
                writeln!(out, "{p},{value}").map_err(io)?;
            }
            Ok(true)
        }
        Command::Welfare {
            dist,
            functional,
            f0,
            u0,
            rho,
            grid,
            json,
        } => {
            let f = read_distribution(dist)?;
            let r = welfare_report(*functional, &f, f0.as_deref(), u0.as_deref(), *rho, *grid, tol)?;
            if *json {
                writeln!(out, "{}", json!({"schema_version": SCHEMA_VERSION, "welfare": r})).map_err(io)?;
            } else {
                writeln!(out, "value: {}", r.value).map_err(io)?;
                if let Some(res) = r.residual {
                    writeln!(out, "residual: {res:e}").map_err(io)?;
                }
                if let Some(b) = r.error_bound {
                    writeln!(out, "error_bound: {b:e}").map_err(io)?;
                }
            }
            Ok(true)
        }
        Command::Majorize { x, y, kind, sums, json } => {
            let (x, y) = (read_vector(x)?, read_vector(y)?);
            let v = majorizes(&x, &y, (*kind).into(), tol)?;
            let statements = sums.map(|k| universal_statements(&x, &y, k, tol)).transpose()?;
            if *json {
                let body = json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": format!("{kind:?}"),
                    "verdict": v,
                    "sums": statements,
                });
                writeln!(out, "{body}").map_err(io)?;
            } else {
                writeln!(out, "holds: {}", v.holds).map_err(io)?;
                if let Some(k) = v.witness {
                    writeln!(out, "witness: partial sums of {k} entries").map_err(io)?;
                }
                if let Some(s) = statements {
                    let names = ["increments", "weighted", "utility", "distorted"];
                    for (name, b) in names.iter().zip(s.as_array()) {
                        writeln!(out, "{name}: {b}").map_err(io)?;
                    }
                }
            }
            Ok(v.holds)
        }
        Command::Verify {
            theorem,
            trials,
            seed,
            atoms,
            knots,
            lo,
            hi,
            exhaustive,
            n,
            grid,
            max_residual,
        } => {
            let spec = InstanceSpec {
                seed: *seed,
                n_atoms_max: *atoms,
                n_knots_max: *knots,
                value_range: (*lo, *hi),
                trials: *trials,
            };
            verify(theorem, &spec, *exhaustive, *n, grid, *max_residual, tol, out)
        }
    }
}

/// Decides a named ordering; `pair` applies to the distorted orderings only.
pub fn check(
    order: &str,
    pair: Option<&std::path::Path>,
    f1: &stochord_core::DiscreteCdf,
    f2: &stochord_core::DiscreteCdf,
    tol: Tolerance,
) -> CliResult<OrderingVerdict> {
    let distorted: Option<fn(&StandardPair, _, _, Tolerance) -> OrderingVerdict> = match order.to_ascii_lowercase().as_str() {
        "upper" => Some(upper_ordering),
        "lower" => Some(lower_ordering),
        "double" => Some(double_ordering),
        _ => None,
    };
    match distorted {
        Some(decide) => {
            let p = match pair {
                Some(path) => read_pair(path, tol)?,
                None => StandardPair::identity(),
            };
            Ok(decide(&p, f1, f2, tol))
        }
        None => {
            if pair.is_some() {
                return Err(CliError::BadParams(format!("--pair does not apply to `{order}`")));
            }
            let name: ClassicOrder = order
                .parse()
                .map_err(|_| CliError::BadParams(format!("unknown order `{order}`")))?;
            Ok(classic(name, f1, f2, tol))
        }
    }
}

fn write_verdict(out: &mut dyn Write, order: &str, v: &OrderingVerdict) -> std::io::Result<()> {
    writeln!(out, "order: {order}")?;
    writeln!(out, "clause: {}", v.statement)?;
    writeln!(out, "holds: {}", v.holds)?;
    writeln!(out, "margin: {}", v.margin)?;
    if let Some(w) = v.witness {
        let label = if v.holds { "tightest" } else { "witness" };
        writeln!(out, "{label}: at={} lhs={} rhs={}", w.at, w.lhs, w.rhs)?;
    }
    Ok(())
}

/// Rows `(p, int_0^p F^{-1})` for `p = k / points`, optionally over the mean.
pub fn lorenz_table(f: &stochord_core::DiscreteCdf, points: usize, normalize: bool) -> CliResult<Vec<(f64, f64)>> {
    if points == 0 {
        return Err(CliError::BadParams("--points must be at least 1".into()));
    }
    let mean = f.mean();
    if normalize && (mean.is_nan() || mean <= 0.0) {
        return Err(CliError::ZeroMeanNormalize(mean));
    }
    let q = f.quantile_fn();
    Ok((0..=points)
        .map(|k| {
            let p = k as f64 / points as f64;
            let v = q.integral_to(p);
            (p, if normalize { v / mean } else { v })
        })
        .collect())
}

/// A welfare value with its diagnostics.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct WelfareReport {
    /// Functional evaluated.
    pub functional: &'static str,
    /// Value.
    pub value: f64,
    /// Largest gap between the cdf, quantile and survival forms.
    pub residual: Option<f64>,
    /// Bound on the interpolation error of the perception.
    pub error_bound: Option<f64>,
}

fn perception(path: Option<&std::path::Path>, tol: Tolerance) -> CliResult<Perception> {
    match path {
        Some(p) => Ok(Perception::new(read_function(p)?, "f0", tol)?),
        None => Ok(Perception::identity()),
    }
}

fn yaari_with_residual(f0: &Perception, f: &stochord_core::DiscreteCdf) -> CliResult<(f64, f64)> {
    let a = welfare::yaari_cdf_form(f0, f)?;
    let b = welfare::yaari_quantile_form(f0, f)?;
    let c = welfare::yaari_survival_form(f0, f)?;
    Ok((a, (a - b).abs().max((a - c).abs())))
}

/// Evaluates `functional` on `f`.
pub fn welfare_report(
    functional: Functional,
    f: &stochord_core::DiscreteCdf,
    f0: Option<&std::path::Path>,
    u0: Option<&std::path::Path>,
    rho: f64,
    grid: usize,
    tol: Tolerance,
) -> CliResult<WelfareReport> {
    let only = |flag: &str, given: bool, allowed: &[Functional]| {
        if given && !allowed.contains(&functional) {
            return Err(CliError::BadParams(format!("{flag} does not apply to {functional:?}")));
        }
        Ok(())
    };
    only("--f0", f0.is_some(), &[Functional::Yaari, Functional::Rdeu])?;
    only("--u0", u0.is_some(), &[Functional::Rdeu])?;
    let mut r = WelfareReport {
        functional: "",
        value: 0.0,
        residual: None,
        error_bound: None,
    };
    match functional {
        Functional::Mean => {
            r.functional = "mean";
            r.value = f.mean();
        }
        Functional::Yaari => {
            r.functional = "yaari";
            (r.value, r.residual) = yaari_with_residual(&perception(f0, tol)?, f).map(|(v, e)| (v, Some(e)))?;
        }
        Functional::Rdeu => {
            r.functional = "rdeu";
            let u = match u0 {
                Some(p) => read_function(p)?,
                None => PiecewiseLinear::identity(),
            };
            r.value = welfare::rdeu(&u, &perception(f0, tol)?, f)?;
        }
        Functional::Sgini => {
            r.functional = "sgini";
            let p = welfare::s_gini_perception(rho, grid)?;
            let s = f.support();
            r.error_bound = Some(welfare::s_gini_grid_error(rho, grid)? * (s.max_loc - s.min_loc));
            (r.value, r.residual) = yaari_with_residual(&p, f).map(|(v, e)| (v, Some(e)))?;
        }
        Functional::Gini => {
            r.functional = "gini";
            r.value = welfare::gini(f)?;
        }
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    theorem: &str,
    spec: &InstanceSpec,
    exhaustive: bool,
    n: usize,
    grid: &[f64],
    max_residual: f64,
    tol: Tolerance,
    out: &mut dyn Write,
) -> CliResult<bool> {
    if let Ok(t) = theorem.parse::<TheoremId>() {
        let report = if exhaustive {
            exhaustive_small_scan(t, n, grid, tol)?
        } else {
            run_equivalence_suite(spec, t, tol)?
        };
        let body = json!({"schema_version": SCHEMA_VERSION, "report": report});
        writeln!(out, "{body}").map_err(io)?;
        return Ok(report.all_agree());
    }
    let id: Identity = theorem.parse()?;
    if exhaustive {
        return Err(CliError::BadParams("identities have no exhaustive scan".into()));
    }
    let report = run_identity_suite(spec, id)?;
    let body = json!({"schema_version": SCHEMA_VERSION, "identity": report, "max_allowed": max_residual});
    writeln!(out, "{body}").map_err(io)?;
    Ok(report.max_residual <= max_residual)
}
