use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gwlines::config::ConfigDoc;
use gwlines::verify::{render_text, run_suite, solve, Outcome, Suite, VerifyOptions};

/// Exit codes: 0 pass, 1 an identity failed, 2 bad input, 3 inconclusive,
/// 4 the configuration is not general.
const EXIT_FAIL: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_GENERICITY: u8 = 4;

#[derive(Parser)]
#[command(name = "gwlines", version, about = "Enriched counts of lines meeting codimension-2 planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Find the transversals of a configuration and certify their indices.
    Solve {
        config: PathBuf,
        /// Largest residue degree searched over finite fields when n ≥ 5.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run a seeded verification suite: thm1, thm2, cor-fq or appendix.
    Verify {
        suite: Suite,
        #[arg(long)]
        field: Option<String>,
        /// Shorthand for `--field "F q"`.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to 2 for n = 3 and 4 otherwise.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Coefficient bound for samples over Q.
        #[arg(long, default_value_t = 10)]
        bound: i64,
        /// `split`, `quartic` or `biquadratic a b` (appendix suite).
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = 1)]
        min_conclusive: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn emit<T: Serialize>(value: &T, output: &Output) -> Result<(), String> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => render_text(value),
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_for(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Pass => 0,
        Outcome::Fail => EXIT_FAIL,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// `F p^m` for a prime power `q`.
fn field_of_order(q: u32) -> Result<String, String> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| format!("q = {q} is not a prime power"))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 || q < 2 {
        return Err(format!("q = {q} is not a prime power"));
    }
    Ok(if m == 1 { format!("F {p}") } else { format!("F {p}^{m}") })
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let data = |e: String| (EXIT_DATA, e);
    match cli.command {
        Command::Solve { config, max_degree, output } => {
            let text = fs::read_to_string(&config).map_err(|e| data(format!("{}: {e}", config.display())))?;
            let doc = ConfigDoc::from_json(&text).map_err(|e| data(e.to_string()))?;
            let report = solve(&doc, max_degree).map_err(|e| {
                if e.is_genericity() {
                    (EXIT_GENERICITY, format!("configuration is not general: {e}"))
                } else {
                    (EXIT_DATA, e.to_string())
                }
            })?;
            emit(&report, &output).map_err(data)?;
            Ok(exit_for(report.outcome))
        }
        Command::Verify { suite, field, q, n, trials, seed, max_degree, bound, algebra, min_conclusive, output } => {
            let field = match (field, q) {
                (Some(f), None) => f,
                (None, Some(q)) => field_of_order(q).map_err(data)?,
                (None, None) => "Q".to_string(),
                (Some(_), Some(_)) => return Err(data("give --field or --q, not both".into())),
            };
            let max_degree = max_degree.unwrap_or(if n == 3 { 2 } else { 4 });
            let opts = VerifyOptions { field, n, trials, seed, max_degree, bound, algebra, min_conclusive };
            let report = run_suite(suite, &opts).map_err(|e| data(e.to_string()))?;
            emit(&report, &output).map_err(data)?;
            Ok(exit_for(report.verdict))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("gwlines: {msg}");
            ExitCode::from(code)
        }
    }
}
