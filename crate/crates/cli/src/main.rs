use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use modkernel::ModularData;

mod commands;
mod render;

/// Exact modular data, Galois action and kernel of the modular representation.
#[derive(Parser, Debug)]
#[command(name = "modkernel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "MODKERNEL_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exactly one data source: a minimal model or a modular-data file.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Minimal model M(p, q) given as `p,q`.
    #[arg(long, value_parser = parse_pair)]
    pub model: Option<(u64, u64)>,

    /// Modular-data file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl Source {
    /// Loads the data; files are schema-checked here and axiom-checked by the caller.
    pub fn load(&self) -> Result<ModularData> {
        match (&self.model, &self.input) {
            (Some((p, q)), None) => {
                ModularData::minimal_model(*p, *q).with_context(|| format!("building M({p},{q})"))
            }
            (None, Some(path)) => modkernel::format::load_unchecked(path)
                .with_context(|| format!("loading {}", path.display())),
            _ => bail!("give exactly one of --model or --input"),
        }
    }

    pub fn describe(&self) -> String {
        match (&self.model, &self.input) {
            (Some((p, q)), _) => format!("M({p},{q})"),
            (_, Some(path)) => path.display().to_string(),
            _ => String::new(),
        }
    }
}

fn parse_pair(s: &str) -> std::result::Result<(u64, u64), String> {
    let v = modkernel::sl2::parse_ints::<2>(s).map_err(|e| e.to_string())?;
    if v[0] < 0 || v[1] < 0 {
        return Err("expected non-negative integers".into());
    }
    Ok((v[0] as u64, v[1] as u64))
}

fn parse_pairs(s: &str) -> std::result::Result<Vec<(u64, u64)>, String> {
    s.split(';').filter(|x| !x.trim().is_empty()).map(parse_pair).collect()
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Largest Galois index `l` in the sweeps (capped at N).
    #[arg(long, default_value_t = 100)]
    pub max_l: u64,
    /// Largest denominator of `r` in the sweeps.
    #[arg(long, default_value_t = 8)]
    pub max_den: u64,
    /// Random samples for the sampled identities.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Seed of the deterministic random generator.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

impl SweepArgs {
    pub fn config(&self) -> modkernel::lambda::SweepConfig {
        modkernel::lambda::SweepConfig {
            max_l: self.max_l,
            max_den: self.max_den,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conductor, N0, e, central charge, fusion rules and axiom checks.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Also write the data as a modular-data file.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// The signed permutations G_l for every unit l mod N.
    Galois {
        #[command(flatten)]
        source: Source,
    },
    /// The Lambda-matrix identities with pass counts.
    LambdaCheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Kernel image in SL(2, Z/N) with its structure.
    Kernel {
        #[command(flatten)]
        source: Source,
        /// Largest group order to enumerate.
        #[arg(long, default_value_t = modkernel::kernel::DEFAULT_BUDGET)]
        budget: u128,
        /// List a generating set.
        #[arg(long)]
        emit_generators: bool,
        /// Also write the structured report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Matrices `a,b,c,d` to test for membership (repeatable).
        #[arg(long = "test-matrix")]
        test_matrix: Vec<String>,
    },
    /// Conductor, N/N0 and index for a list of minimal models.
    Table {
        /// Models as `p,q;p,q;...`; defaults to the published table.
        #[arg(long, value_parser = parse_pairs)]
        models: Option<std::vec::Vec<(u64, u64)>>,
        #[arg(long, default_value_t = modkernel::kernel::DEFAULT_BUDGET)]
        budget: u128,
        /// Arithmetic sweep over all minimal models with p q at most this value.
        #[arg(long)]
        sweep: Option<u64>,
    },
    /// The naive conductor bound N(r).
    Bound {
        /// Number of primaries; repeatable. Defaults to 1..=5.
        #[arg(long = "r")]
        r: Vec<u64>,
    },
    /// Every invariant suite on one model; exit status 0 iff all pass.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = modkernel::kernel::DEFAULT_BUDGET)]
        budget: u128,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let out = commands::Output::new(cli.format, cli.output.clone());
    match cli.command {
        Command::Analyze { source, save } => commands::analyze(&out, &source, save.as_deref()),
        Command::Galois { source } => commands::galois(&out, &source),
        Command::LambdaCheck { source, sweep } => commands::lambda_check(&out, &source, &sweep),
        Command::Kernel {
            source,
            budget,
            emit_generators,
            json,
            test_matrix,
        } => commands::kernel(&out, &source, budget, emit_generators, json.as_deref(), &test_matrix),
        Command::Table { models, budget, sweep } => commands::table(&out, models, budget, sweep),
        Command::Bound { r } => commands::bound(&out, &r),
        Command::Verify { source, sweep, budget } => commands::verify(&out, &source, &sweep, budget),
    }
}
