//! Command-line front end for the verification suites and ad-hoc
//! computations: canonical JSON on stdout (or --out), sorted keys, exit
//! code 0 on success, 1 on verification failure, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Rational64;
use serde_json::{json, Value};

use kc_lab::combinatorics::{Composition, OrbitData, Partition, PermMatrix};
use kc_lab::intertwining::{intertwining_constant, regularity_check, SatakeData};
use kc_lab::kappa::kappa_matrix;
use kc_lab::rep::{
    build_rho_c, canonical_form, central_character, derivative_trace, dual_star, is_kc_supported,
    GenericTau, Mode,
};
use kc_lab::unipotent::delta_exponents;
use kc_lab::{run_suite, Error, SuiteParams};

/// Factor counts above this are printed factored-only; the expanded
/// numerator/denominator would have up to 2^count terms.
const EXPAND_LIMIT: usize = 12;

#[derive(Parser)]
#[command(
    name = "kc-lab",
    version,
    about = "Exact verification suites and computations for (k,c) Speh-block calculus"
)]
struct Cli {
    /// Indented, human-oriented JSON instead of the canonical single line.
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the JSON here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and print its report.
    Suite(SuiteArgs),
    /// Print the JSON serialization of one computed object.
    Compute(ComputeArgs),
}

#[derive(Args)]
struct SuiteArgs {
    /// orbit | kappa | gk | delta | derivative | dual | pairing |
    /// equivariance | all
    #[arg(long)]
    suite: String,

    /// Cap on the number of blocks k.
    #[arg(long)]
    k: Option<usize>,

    /// Cap on the block size c.
    #[arg(long)]
    c: Option<usize>,

    /// Restrict split-position grids to this single l.
    #[arg(long)]
    l: Option<usize>,

    /// Cap on the ambient size k·c for the symbolic pairing grid.
    #[arg(long, value_name = "N")]
    max_size: Option<usize>,

    /// Number of randomized data sets per randomized suite.
    #[arg(long)]
    trials: Option<usize>,

    /// Seed for randomized cases.
    #[arg(long)]
    seed: Option<u64>,

    /// JSON file with suite-parameter fields; flags take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(subcommand)]
    command: ComputeCommand,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    PAdic,
    Archimedean,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::PAdic => Mode::PAdic,
            CliMode::Archimedean => Mode::Archimedean,
        }
    }
}

#[derive(Subcommand)]
enum ComputeCommand {
    /// Orbit data of a partition: the Λ multiset and the p tuple.
    OrbitData {
        /// Weakly decreasing parts, e.g. `3,1`.
        partition: String,
    },
    /// The block anti-diagonal permutation w_β with its dense matrix.
    WBeta {
        /// Positive parts, e.g. `2,3,1`.
        composition: String,
    },
    /// The interleaving permutation κ_{l,c−l} on kc torus slots.
    Kappa { k: usize, c: usize, l: usize },
    /// The factored unramified intertwining constant attached to κ.
    GkConstant {
        k: usize,
        c: usize,
        l: usize,
        /// Comma-separated modulus exponents m_1,…,m_k (default: tempered).
        #[arg(long)]
        moduli: Option<String>,
    },
    /// Modulus-character exponents δ_{P_β}^{power} per diagonal block.
    Delta {
        /// Positive parts, e.g. `2,3,1`.
        composition: String,
        /// Rational power to apply, e.g. `1/4`.
        #[arg(long, default_value = "1")]
        power: String,
    },
    /// The Speh expression ρ_c(τ) from standard-module data.
    Rho {
        /// JSON file holding the inducing data.
        #[arg(long, value_name = "PATH")]
        tau: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum, default_value_t = CliMode::PAdic)]
        mode: CliMode,
        /// Also verify the (k,c) derivative shadow; failure exits 1.
        #[arg(long)]
        check_kc: bool,
    },
    /// The highest-derivative chain of ρ_c(τ) down to the terminal.
    DerivativeTrace {
        #[arg(long, value_name = "PATH")]
        tau: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Dual and canonical form of ρ_c(τ), with central characters.
    Dual {
        #[arg(long, value_name = "PATH")]
        tau: PathBuf,
        #[arg(long)]
        c: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Suite(args) => {
            let params = assemble_params(&args)?;
            let report = match run_suite(&args.suite, &params) {
                Ok(report) => report,
                Err(Error::UnknownSuite(name)) => {
                    return Err(format!(
                        "unknown suite '{name}'; expected one of orbit, kappa, gk, delta, \
                         derivative, dual, pairing, equivariance, all"
                    ))
                }
                Err(e) => return Err(e.to_string()),
            };
            let value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            emit(&value, cli.pretty, cli.out.as_ref())?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Compute(args) => {
            let (value, ok) = compute(args.command)?;
            emit(&value, cli.pretty, cli.out.as_ref())?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn assemble_params(args: &SuiteArgs) -> Result<SuiteParams, String> {
    let mut params = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str(&text)
                .map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => SuiteParams::default(),
    };
    if let Some(k) = args.k {
        params.k_max = k;
    }
    if let Some(c) = args.c {
        params.c_max = c;
    }
    if args.k.is_some() || args.c.is_some() {
        params.orbit_max = params.k_max.max(params.c_max);
    }
    params.l_fixed = args.l.or(params.l_fixed);
    if let Some(m) = args.max_size {
        params.max_size = m;
    }
    if let Some(t) = args.trials {
        params.trials = t;
    }
    if let Some(s) = args.seed {
        params.seed = s;
    }
    Ok(params)
}

fn compute(command: ComputeCommand) -> Result<(Value, bool), String> {
    match command {
        ComputeCommand::OrbitData { partition } => {
            let sigma = Partition::new(parse_u64_list(&partition)?).map_err(|e| e.to_string())?;
            let data = OrbitData::for_partition(&sigma);
            let mut lambda = data.lambda().to_vec();
            lambda.sort_unstable_by(|a, b| b.cmp(a));
            Ok((json!({ "lambda": lambda, "p": data.p() }), true))
        }
        ComputeCommand::WBeta { composition } => {
            let beta =
                Composition::new(parse_u64_list(&composition)?).map_err(|e| e.to_string())?;
            Ok((permutation_value(&PermMatrix::w_beta(&beta))?, true))
        }
        ComputeCommand::Kappa { k, c, l } => {
            let kappa = kappa_matrix(k, c, l).map_err(|e| e.to_string())?;
            Ok((permutation_value(&kappa)?, true))
        }
        ComputeCommand::GkConstant { k, c, l, moduli } => {
            let satake = match moduli {
                Some(text) => {
                    let m = parse_rational_list(&text)?;
                    let names = (1..=m.len()).map(|i| format!("alpha_{i}")).collect();
                    SatakeData::new(names, m).map_err(|e| e.to_string())?
                }
                None => SatakeData::tempered(k).map_err(|e| e.to_string())?,
            };
            let regular = regularity_check(&satake);
            let (character, product) =
                intertwining_constant(k, c, l, &satake).map_err(|e| e.to_string())?;
            let expanded = if product.len() <= EXPAND_LIMIT {
                serde_json::to_value(product.product(character.ctx()))
                    .map_err(|e| e.to_string())?
            } else {
                Value::Null
            };
            Ok((
                json!({
                    "count": product.len(),
                    "factors": product.factors(),
                    "product": expanded,
                    "regular": regular,
                }),
                true,
            ))
        }
        ComputeCommand::Delta { composition, power } => {
            let beta =
                Composition::new(parse_u64_list(&composition)?).map_err(|e| e.to_string())?;
            let power = parse_rational(&power)?;
            let exponents = delta_exponents(&beta).scale(power);
            Ok((json!({ "exponents": exponents }), true))
        }
        ComputeCommand::Rho {
            tau,
            c,
            mode,
            check_kc,
        } => {
            let tau = read_tau(&tau)?;
            let expr = build_rho_c(&tau, c, mode.into()).map_err(|e| e.to_string())?;
            if check_kc {
                let supported = is_kc_supported(&expr, tau.k(), c);
                Ok((
                    json!({ "expr": expr, "kc_supported": supported }),
                    supported,
                ))
            } else {
                Ok((serde_json::to_value(&expr).map_err(|e| e.to_string())?, true))
            }
        }
        ComputeCommand::DerivativeTrace { tau, c } => {
            let tau = read_tau(&tau)?;
            let expr = build_rho_c(&tau, c, Mode::PAdic).map_err(|e| e.to_string())?;
            let trace = derivative_trace(&expr).map_err(|e| e.to_string())?;
            Ok((
                json!({ "orders": trace.orders(), "trace": trace }),
                true,
            ))
        }
        ComputeCommand::Dual { tau, c } => {
            let tau = read_tau(&tau)?;
            let expr = build_rho_c(&tau, c, Mode::PAdic).map_err(|e| e.to_string())?;
            let dual = dual_star(&expr);
            Ok((
                json!({
                    "dual": dual,
                    "canonical": canonical_form(&dual),
                    "central_character": central_character(&expr),
                    "dual_central_character": central_character(&dual),
                }),
                true,
            ))
        }
    }
}

fn permutation_value(w: &PermMatrix) -> Result<Value, String> {
    Ok(json!({
        "n": w.n(),
        "images": serde_json::to_value(w).map_err(|e| e.to_string())?,
        "matrix": w.entries(),
    }))
}

fn read_tau(path: &PathBuf) -> Result<GenericTau, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read tau file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad inducing data: {e}"))
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad integer list entry '{part}'"))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<Rational64, String> {
    text.trim()
        .parse::<Rational64>()
        .map_err(|_| format!("bad rational '{text}'"))
}

fn parse_rational_list(text: &str) -> Result<Vec<Rational64>, String> {
    text.split(',').map(parse_rational).collect()
}

/// Prints the value as canonical JSON (object keys sorted by serde_json's
/// map ordering) with a trailing newline, or pretty-printed with --pretty.
fn emit(value: &Value, pretty: bool, out: Option<&PathBuf>) -> Result<(), String> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. `kc-lab … | head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(format!("cannot write to stdout: {e}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_flags() -> SuiteArgs {
        SuiteArgs {
            suite: "all".into(),
            k: None,
            c: None,
            l: None,
            max_size: None,
            trials: None,
            seed: None,
            config: None,
        }
    }

    #[test]
    fn list_and_rational_parsing() {
        assert_eq!(parse_u64_list("3, 1").unwrap(), vec![3, 1]);
        assert!(parse_u64_list("3,x").is_err());
        assert_eq!(parse_rational("-5/2").unwrap(), Rational64::new(-5, 2));
        assert_eq!(parse_rational("4").unwrap(), Rational64::from_integer(4));
        assert!(parse_rational("1/0").is_err() || parse_rational("q").is_err());
        assert_eq!(
            parse_rational_list("1/2,-1/2").unwrap(),
            vec![Rational64::new(1, 2), Rational64::new(-1, 2)]
        );
    }

    #[test]
    fn flags_override_config_and_widen_the_orbit_grid() {
        let mut args = no_flags();
        assert_eq!(assemble_params(&args).unwrap(), SuiteParams::default());

        args.k = Some(6);
        args.trials = Some(3);
        let params = assemble_params(&args).unwrap();
        assert_eq!(params.k_max, 6);
        assert_eq!(params.trials, 3);
        // raising k widens the purely combinatorial grids too
        assert_eq!(params.orbit_max, 6);

        args.config = Some(PathBuf::from("/nonexistent/params.json"));
        assert!(assemble_params(&args).is_err());
    }

    #[test]
    fn split_restriction_is_threaded_through() {
        let mut args = no_flags();
        args.l = Some(1);
        assert_eq!(assemble_params(&args).unwrap().l_fixed, Some(1));
    }
}
