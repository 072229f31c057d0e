use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dicho_core::bench::{self, BenchSpec, Variant};
use dicho_core::engine::{self, Algorithm, Arithmetic, EngineConfig};
use dicho_core::solvers::ProblemKind;
use dicho_core::{io, oracle, Instance};

#[derive(Parser)]
#[command(name = "dicho", version, about = "Nondominated extreme points of multi-objective AP/KP instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ap,
    Kp,
}

impl From<Kind> for ProblemKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ap => ProblemKind::Assignment,
            Kind::Kp => ProblemKind::Knapsack,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Dummy,
    Bd,
    Balloon,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithmeticArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "v1_ex")]
    V1Ex,
    #[value(name = "v2_ex")]
    V2Ex,
    #[value(name = "v1_fl")]
    V1Fl,
    #[value(name = "v2_fl")]
    V2Fl,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::V1Ex => Variant::V1Ex,
            VariantArg::V2Ex => Variant::V2Ex,
            VariantArg::V1Fl => Variant::V1Fl,
            VariantArg::V2Fl => Variant::V2Fl,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Generate {
        kind: Kind,
        p: usize,
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the nondominated extreme points of an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "dummy")]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value = "exact")]
        arithmetic: ArithmeticArg,
        /// Result file; without it the points are printed before the report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative tolerance of float-mode value comparisons.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Solve independent objective subsets concurrently (bd).
        #[arg(long)]
        parallel: bool,
        /// Also seed the balloon with the lexicographic maxima.
        #[arg(long)]
        init_from_lex: bool,
    },
    /// Compare both algorithms against brute-force enumeration.
    Check {
        instance: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
    /// Run the four implementation variants on a generated series.
    Bench {
        kind: Kind,
        p: usize,
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', default_value = "5,10")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',')]
        variants: Vec<VariantArg>,
        /// Machine-readable rows.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    let raw = io::parse_instance(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Instance::canonicalize(raw).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { kind, p, n, seed, out } => {
            let raw = bench::generate(kind.into(), p, n, seed).map_err(|e| Usage(e.to_string()))?;
            emit(out.as_deref(), &io::write_instance(&raw))?;
        }
        Command::Solve {
            instance,
            algorithm,
            arithmetic,
            out,
            tolerance,
            parallel,
            init_from_lex,
        } => {
            let inst = load(&instance)?;
            let mut cfg = EngineConfig {
                arithmetic: match arithmetic {
                    ArithmeticArg::Exact => Arithmetic::Exact,
                    ArithmeticArg::Float => Arithmetic::Float,
                },
                parallel,
                ..EngineConfig::default()
            };
            if let Some(t) = tolerance {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Usage(format!("invalid tolerance {t}")).into());
                }
                cfg.tolerances.equality = t;
            }
            let algorithm = match algorithm {
                AlgorithmArg::Dummy => Algorithm::Dummy,
                AlgorithmArg::Bd => Algorithm::Bd,
                AlgorithmArg::Balloon => Algorithm::Balloon,
            };
            let result = engine::run(&inst, algorithm, &cfg, init_from_lex)?;
            let points = io::write_points(&result.original_outcomes(&inst));
            emit(out.as_deref(), &points)?;
            print!("{}", io::write_report(&result.stats));
        }
        Command::Check { instance, parallel } => {
            let inst = load(&instance)?;
            let want = oracle::instance_ysn1(&inst).map_err(|e| Usage(e.to_string()))?;
            let cfg = EngineConfig {
                parallel,
                ..EngineConfig::exact()
            };
            let dummy = engine::dummy_dichotomy(&inst, &cfg)?.outcomes();
            let bd = engine::bd_dichotomy(&inst, &cfg)?.outcomes();
            let ok = dummy == want && bd == want;
            println!("oracle={} dummy={} bd={}", want.len(), dummy.len(), bd.len());
            if ok {
                println!("PASS");
                return Ok(ExitCode::SUCCESS);
            }
            for (name, got) in [("dummy", &dummy), ("bd", &bd)] {
                for y in want.iter().filter(|y| !got.contains(y)) {
                    println!("{name} missing {}", inst.original_outcome(y).iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
                }
                for y in got.iter().filter(|y| !want.contains(y)) {
                    println!("{name} extra {}", inst.original_outcome(y).iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
                }
            }
            println!("FAIL");
            return Ok(ExitCode::from(1));
        }
        Command::Bench {
            kind,
            p,
            sizes,
            instances,
            seed,
            variants,
            out,
            parallel,
        } => {
            let spec = BenchSpec {
                kind: kind.into(),
                p,
                sizes,
                instances,
                seed_base: seed,
            };
            let variants: Vec<Variant> = if variants.is_empty() {
                Variant::ALL.to_vec()
            } else {
                variants.into_iter().map(Into::into).collect()
            };
            let rows = bench::run_bench(&spec, &variants, parallel).map_err(|e| Usage(e.to_string()))?;
            print!("{}", bench::format_table(spec.kind, &rows));
            if let Some(path) = out {
                fs::write(&path, serde_json::to_string_pretty(&rows)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
