mod report;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rslv_core::cosets::{Variant, DEFAULT_BUDGET};
use serde_json::{json, Value};

use report::{params, Check, Report};
use suites::Failure;

#[derive(Parser)]
#[command(
    name = "rslv",
    version,
    about = "Exact verification of unramified local identities and PGL(n+1) double cosets"
)]
struct Cli {
    /// Seed for every random sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Desk,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "GxG")]
    GxG,
    #[value(name = "PxG")]
    PxG,
    #[value(name = "GxP")]
    GxP,
    #[value(name = "PxP")]
    PxP,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::GxG => Variant::GxG,
            VariantArg::PxG => Variant::PxG,
            VariantArg::GxP => Variant::GxP,
            VariantArg::PxP => Variant::PxP,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spectral weight: trace, closed form and both residues.
    VerifyResidue {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
        mode: Mode,
        /// Number of random rational instances in numeric mode.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
    },
    /// Degenerate term A + B = C and the hsum table.
    VerifyDegenerate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Truncation order of the (U, W) series cross-check; 0 disables it.
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
        mode: Mode,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Leave the parameter product free instead of fixing it to 1.
        #[arg(long)]
        drop_unit_product: bool,
    },
    /// Whittaker recursion in the rank.
    VerifyWhittaker {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
    /// Torus sums against Euler products.
    VerifyZeta {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Exhaustive double-coset audit over F_q.
    ClassifyCosets {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::GxG)]
        variant: VariantArg,
        /// Element cap; overrides RSLV_BUDGET.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Index of the congruence subgroup by enumeration over Z/p^e.
    VerifyIndex {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Valuation of the orbit invariant on sampled congruence elements.
    VerifySupport {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Product of two Bruhat factorizations, symbolically.
    VerifyBruhat {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Every suite at its default size.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Profile::Desk)]
        profile: Profile,
        #[arg(long)]
        budget: Option<u128>,
    },
}

fn budget_from(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("RSLV_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "RSLV_BUDGET must be a non-negative integer, got {s:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Symbolic => "symbolic",
        Mode::Numeric => "numeric",
    }
}

type Ran = (&'static str, BTreeMap<String, Value>, Vec<Check>);

fn run(cli: &Cli) -> Result<Ran, Failure> {
    let seed = cli.seed;
    Ok(match cli.command {
        Command::VerifyResidue { n, mode, seeds } => (
            "verify-residue",
            params([
                ("n", json!(n)),
                ("mode", json!(mode_name(mode))),
                ("seeds", json!(seeds)),
                ("seed", json!(seed)),
            ]),
            suites::residue(n, matches!(mode, Mode::Numeric), seeds, seed)?,
        ),
        Command::VerifyDegenerate {
            n,
            order,
            mode,
            seeds,
            drop_unit_product,
        } => (
            "verify-degenerate",
            params([
                ("n", json!(n)),
                ("order", json!(order)),
                ("mode", json!(mode_name(mode))),
                ("seeds", json!(seeds)),
                ("seed", json!(seed)),
                ("drop_unit_product", json!(drop_unit_product)),
            ]),
            suites::degenerate(
                n,
                order,
                matches!(mode, Mode::Numeric),
                seeds,
                seed,
                drop_unit_product,
            )?,
        ),
        Command::VerifyWhittaker { m, max_weight } => (
            "verify-whittaker",
            params([("m", json!(m)), ("max_weight", json!(max_weight))]),
            suites::whittaker(m, max_weight)?,
        ),
        Command::VerifyZeta { m, order } => (
            "verify-zeta",
            params([("m", json!(m)), ("order", json!(order))]),
            suites::zeta(m, order)?,
        ),
        Command::ClassifyCosets {
            n,
            q,
            variant,
            budget,
        } => {
            let budget = budget_from(budget)?;
            let variant = Variant::from(variant);
            (
                "classify-cosets",
                params([
                    ("n", json!(n)),
                    ("q", json!(q)),
                    ("variant", json!(variant.to_string())),
                    ("budget", json!(budget.to_string())),
                    ("seed", json!(seed)),
                ]),
                suites::classify_cosets(n, q, variant, budget, seed)?,
            )
        }
        Command::VerifyIndex { n, p, e, budget } => {
            let budget = budget_from(budget)?;
            (
                "verify-index",
                params([
                    ("n", json!(n)),
                    ("p", json!(p)),
                    ("e", json!(e)),
                    ("budget", json!(budget.to_string())),
                ]),
                suites::index(n, p, e, budget)?,
            )
        }
        Command::VerifySupport { n, p, e, samples } => (
            "verify-support",
            params([
                ("n", json!(n)),
                ("p", json!(p)),
                ("e", json!(e)),
                ("samples", json!(samples)),
                ("seed", json!(seed)),
            ]),
            suites::support(n, p, e, samples, seed)?,
        ),
        Command::VerifyBruhat { n } => (
            "verify-bruhat",
            params([("n", json!(n))]),
            suites::bruhat(n)?,
        ),
        Command::VerifyAll {
            profile: Profile::Desk,
            budget,
        } => {
            let budget = budget_from(budget)?;
            (
                "verify-all",
                params([
                    ("profile", json!("desk")),
                    ("seed", json!(seed)),
                    ("budget", json!(budget.to_string())),
                ]),
                suites::desk(seed, budget)?,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, params, checks) = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("refused: {msg}");
            return ExitCode::from(3);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("verification aborted: {msg}");
            return ExitCode::from(1);
        }
    };
    let report = Report::new(command, params, checks, start.elapsed().as_millis() as u64);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    eprint!("{}", report.summary());
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
