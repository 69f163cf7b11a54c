//! The `arboreal` command line: argument parsing, output files, run
//! manifests and the verification suite.

pub mod commands;
pub mod manifest;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use manifest::{write_outputs, Output, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "arboreal", version, about = "Permutation-group and prime-scan experiments for iterated polynomials")]
pub struct Cli {
    /// Directory for JSON, CSV and manifest files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for randomized commands; generated and recorded when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Run the quick subset of a verification suite.
    #[arg(long, global = true)]
    pub quick: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coset tables, tower distributions and bounds.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Prime scans of an orbit or of iterate factorizations.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Ramification data, Shabat triples and the primitivity oracle.
    #[command(subcommand)]
    Ramification(RamificationCmd),
    /// Wreath towers and the largeness predicates.
    #[command(subcommand)]
    Wreath(WreathCmd),
    /// Invariant submodules and section search.
    #[command(subcommand)]
    Splitting(SplittingCmd),
    /// Run verification checks; exit 0 iff all pass.
    Verify(VerifyArgs),
    /// Inspect the group catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Debug, Subcommand)]
pub enum StatsCmd {
    /// Fixed-point-free proportions in the cosets of the socle.
    CosetFpf {
        /// `catalog:NAME`, `NAME`, `S<n>` or `A<n>`.
        #[arg(long)]
        group: String,
        /// `auto` for the catalog socle, or another group reference.
        #[arg(long, default_value = "auto")]
        socle: String,
    },
    /// The two coset derangement proportions of `A_n` in `S_n`.
    Olds {
        #[arg(long)]
        n: usize,
    },
    /// Fixed-point distribution on the leaves of a tower.
    FixedPoints(TowerArgs),
    /// Cycle-count distribution on the leaves of a tower.
    Cycles(TowerArgs),
    /// Proportion of tower elements acting as one cycle.
    FullCycle(TowerArgs),
    /// Binomial tail against its closed-form bound.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        gamma: String,
    },
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    /// Such as `S2^3`, `A5*A5` or `custom:#PSL3_2*S2`.
    #[arg(long)]
    pub tower: String,
    /// Sample instead of computing exactly.
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Coefficients `c0,c1,…,cd`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Target `a`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Primes as `FROM..TO`.
    #[arg(long)]
    pub primes: String,
    /// Numbers per checkpointed chunk.
    #[arg(long, default_value_t = 100_000)]
    pub chunk: u64,
}

#[derive(Debug, Subcommand)]
pub enum ScanCmd {
    /// Least `n ≥ 1` with `a_n ≡ a (mod p)`, per prime.
    Hits {
        #[command(flatten)]
        system: SystemArgs,
        /// Starting point `a0`.
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
    },
    /// Factor counts of `f^n(x) − a` mod `p` for `n ≤ nmax`.
    Stability {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long = "C")]
        c: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Factor-degree patterns of `f^n(x) − a` mod `p`.
    Frobenius {
        #[command(flatten)]
        system: SystemArgs,
        /// Iterate index.
        #[arg(long)]
        n: usize,
    },
    /// Run an experiment definition file.
    Run {
        #[arg(long)]
        experiment: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        chunk: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RamificationCmd {
    /// Genus of the source curve.
    Genus {
        /// Such as `[5],[3,1,1],[2,2,1]`.
        #[arg(long = "type")]
        ram_type: String,
        #[arg(long, default_value_t = 0)]
        target_genus: u64,
    },
    /// Admissibility of `[d], [r, 1^p], [s^q, t]`.
    Belyi(BelyiArgs),
    /// Primitivity of every triple of the family.
    Oracle {
        #[command(flatten)]
        params: BelyiArgs,
        /// Sample this many triples instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// The transposition product completing `σ` to a `d`-cycle.
    Shabat {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        degree: usize,
    },
    /// Multiplicity with which two points of `P^1(Q)` meet at `p`.
    Meets {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        p: u64,
    },
    /// Whether the subgroups invariably generate the normal subgroup.
    Invariable {
        #[arg(long)]
        group: String,
        #[arg(long)]
        normal: String,
        /// Generators separated by `;`, e.g. `(0 1 2);(3 4)`; repeatable.
        #[arg(long = "subgroup", required = true)]
        subgroups: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct BelyiArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Subcommand)]
pub enum WreathCmd {
    /// Degree and order of a tower.
    Order {
        #[arg(long)]
        tower: String,
    },
    /// Per-level largeness of the tower group.
    Profile {
        #[arg(long)]
        tower: String,
    },
    /// The `A_n^3 ⋊ S_3` example with incompatible partitions.
    Counterexample {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SplittingCmd {
    /// The `A_d`-invariant subspaces of `F_2^d`.
    Submodules {
        #[arg(long)]
        d: usize,
    },
    /// Section search for every lift with the given kernel.
    Check {
        #[arg(long)]
        d: usize,
        /// `trivial`, `diagonal`, `augmentation`, `full` or `all`.
        #[arg(long, default_value = "all")]
        kernel: String,
    },
    /// Re-check a certificate file.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all`, or one of olds, alpha, towers, recursion, bound, factor, scans, chebotarev, obstructions, oracle, splitting, replay.
    pub suite: String,
    /// Degree for the splitting suite.
    #[arg(long)]
    pub d: Option<usize>,
    /// Manifest for the replay suite.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// Names, degrees and orders.
    List,
    /// One entry with computed orders.
    Show { name: String },
    /// Validate every entry.
    Check,
}

/// What a command produced.
pub struct Execution {
    /// File-name stem and manifest key, such as `scan hits`.
    pub command: String,
    pub outputs: Vec<Output>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    pub seed: Option<u64>,
    pub caps: BTreeMap<String, serde_json::Value>,
    /// `false` for a failed check.
    pub passed: bool,
}

impl Execution {
    pub fn new(command: &str) -> Self {
        Execution {
            command: command.to_string(),
            outputs: Vec::new(),
            summary: Vec::new(),
            seed: None,
            caps: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn stem(&self) -> String {
        self.command.replace(' ', "-")
    }

    pub fn cap(mut self, name: &str, value: impl Into<serde_json::Value>) -> Self {
        self.caps.insert(name.to_string(), value.into());
        self
    }
}

/// The arguments worth recording: no program name, `--out` or `--jobs`, and
/// an explicit `--seed`.
fn replay_argv(args: &[String], seed: Option<u64>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    let mut has_seed = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--jobs" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--jobs=") {
            continue;
        }
        if a == "--seed" || a.starts_with("--seed=") {
            has_seed = true;
        }
        out.push(a.clone());
    }
    if let (Some(seed), false) = (seed, has_seed) {
        out.push("--seed".into());
        out.push(seed.to_string());
    }
    out
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, true)
}

/// As [`run`], printing nothing on success.
pub fn run_quiet<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, false)
}

fn run_with<I, T>(args: I, print: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let exec = match pool.install(|| commands::execute(&cli)) {
        Ok(exec) => exec,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let finish = || -> anyhow::Result<PathBuf> {
        write_outputs(&cli.out, &exec.outputs)?;
        let manifest = RunManifest::new(
            &exec.command,
            replay_argv(&args, exec.seed),
            exec.seed,
            exec.caps.clone(),
            &exec.outputs,
        );
        manifest.write(&cli.out)
    };
    match finish() {
        Ok(path) if print => {
            for line in &exec.summary {
                println!("{line}");
            }
            println!("manifest: {}", path.display());
        }
        Ok(_) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    }
    if exec.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
