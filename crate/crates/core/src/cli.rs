//! Command-line front end. Machine-readable output goes to `--out` or stdout,
//! diagnostics to stderr. Exit codes: 0 success, 1 failed verification,
//! 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog;
use crate::config::{Config, Overrides};
use crate::counting::{count_all_with, profile_from_counts, FiveCounts};
use crate::error::{Error, Result};
use crate::exact::{exact_string, to_decimal};
use crate::generators::{
    convex_glue, convex_glue_reduced, glue, glue_power_capped, make_millipede, make_path,
    make_star, random_tree,
};
use crate::region::{conjecture_scan, emit_figure_data, inducibility_lower_bound, DEFAULT_SCHEDULE};
use crate::suite::{all_pass, run_suite, Suite, SuiteOptions};
use crate::tree::{Tree, TreeData};

#[derive(Debug, Parser)]
#[command(name = "treelab", version, about = "Exact local profiles of trees")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Random seed (also TREELAB_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, or `auto` (also TREELAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Largest catalog size.
    #[arg(long, global = true)]
    max_k: Option<usize>,
    /// Largest constructed tree.
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    /// Significant digits in decimal output.
    #[arg(long, global = true)]
    precision: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every k-vertex tree in catalog order.
    Enum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact k-profile of a tree.
    Profile {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Include raw copy counts.
        #[arg(long)]
        counts: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tree.
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run the exact checks and emit a JSON array of reports.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Random trees beyond the exhaustive range, per suite.
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// CSV series for the (path, star) density plane.
    Region {
        #[arg(long, default_value_t = 20)]
        d_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for large values of Y - 9S - P.
    Scan {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on the inducibility of a tree from its glue powers.
    Inducibility {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Family {
    Path {
        #[arg(long)]
        n: usize,
    },
    Star {
        #[arg(long)]
        n: usize,
    },
    Millipede {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        length: usize,
    },
    /// Join two trees by a new path of k - 1 vertices between leaves.
    Glue {
        #[arg(long, value_name = "FILE")]
        t: PathBuf,
        #[arg(long, value_name = "FILE")]
        s: PathBuf,
        #[arg(long)]
        k: usize,
        /// Leaf of t; defaults to the lowest-labeled leaf.
        #[arg(long)]
        leaf_t: Option<usize>,
        #[arg(long)]
        leaf_s: Option<usize>,
    },
    Gluepower {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Glue powers of t and s in proportion alpha : (beta - alpha).
    Convex {
        #[arg(long, value_name = "FILE")]
        t: PathBuf,
        #[arg(long, value_name = "FILE")]
        s: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        /// Divide both multiplicities by their gcd.
        #[arg(long)]
        reduce: bool,
    },
    /// Uniform random labeled tree.
    Random {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Serialize)]
struct ProfileOutput {
    k: usize,
    codes: Vec<String>,
    coords: Vec<String>,
    coords_exact: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total: Option<String>,
}

fn resolve_config(g: &GlobalArgs, env: Vec<(String, String)>) -> Result<Config> {
    let file = match &g.config {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    let env = Overrides::from_env(env)?;
    let threads = match g.threads.as_deref() {
        None => None,
        Some("auto") => Some(None),
        Some(v) => Some(Some(v.parse().map_err(|_| {
            Error::InvalidParameter(format!("--threads: cannot parse {v:?}"))
        })?)),
    };
    let flags = Overrides {
        max_k: g.max_k,
        vertex_cap: g.vertex_cap,
        decimal_precision: g.precision,
        threads,
        seed: g.seed,
    };
    Config::resolve(&file, &env, &flags)
}

fn read_tree(path: &Path) -> Result<Tree> {
    Tree::parse(&fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn profile_output(t: &Tree, k: usize, cfg: &Config, with_counts: bool) -> Result<ProfileOutput> {
    let cat = catalog::shared_up_to(k, cfg.max_k)?;
    let counts = if k == 5 {
        FiveCounts::of(t).to_record()
    } else {
        count_all_with(t, &cat)
    };
    let p = profile_from_counts(&counts, t.len())?;
    Ok(ProfileOutput {
        k,
        codes: cat.codes().iter().map(|c| c.to_string()).collect(),
        coords: p.coords.iter().map(|c| to_decimal(c, cfg.decimal_precision)).collect(),
        coords_exact: p.coords.iter().map(exact_string).collect(),
        counts: with_counts.then(|| counts.per_type.iter().map(|c| c.to_string()).collect()),
        total: with_counts.then(|| counts.total.to_string()),
    })
}

fn profile_csv(p: &ProfileOutput) -> String {
    let mut s = String::from("index,code,density,density_exact");
    if p.counts.is_some() {
        s.push_str(",count");
    }
    s.push('\n');
    for i in 0..p.codes.len() {
        s.push_str(&format!("{},{},{},{}", i + 1, p.codes[i], p.coords[i], p.coords_exact[i]));
        if let Some(c) = &p.counts {
            s.push_str(&format!(",{}", c[i]));
        }
        s.push('\n');
    }
    s
}

fn generate(family: &Family, cfg: &Config) -> Result<Tree> {
    match family {
        Family::Path { n } => make_path(*n),
        Family::Star { n } => make_star(*n),
        Family::Millipede { d, length } => make_millipede(*d, *length),
        Family::Glue { t, s, k, leaf_t, leaf_s } => {
            let (t, s) = (read_tree(t)?, read_tree(s)?);
            let lt = leaf_t.unwrap_or_else(|| t.lowest_leaf());
            let ls = leaf_s.unwrap_or_else(|| s.lowest_leaf());
            glue(&t, &s, *k, lt, ls)
        }
        Family::Gluepower { tree, k, ell } => glue_power_capped(&read_tree(tree)?, *k, *ell, cfg.vertex_cap),
        Family::Convex { t, s, k, alpha, beta, reduce } => {
            let (t, s) = (read_tree(t)?, read_tree(s)?);
            if *reduce {
                convex_glue_reduced(&t, &s, *k, *alpha, *beta, cfg.vertex_cap)
            } else {
                convex_glue(&t, &s, *k, *alpha, *beta, cfg.vertex_cap)
            }
        }
        Family::Random { n } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            Ok(random_tree(*n, cfg.seed))
        }
    }
}

/// Runs one command; `Ok(false)` means a verification failed.
fn execute(command: &Command, cfg: &Config) -> Result<bool> {
    match command {
        Command::Enum { k, out } => {
            let cat = catalog::shared_up_to(*k, cfg.max_k)?;
            let trees: Vec<TreeData> = cat.entries().iter().map(Tree::to_data).collect();
            emit(out.as_deref(), &(serde_json::to_string(&trees)? + "\n"))?;
        }
        Command::Profile { tree, k, format, counts, out } => {
            let t = read_tree(tree)?;
            let p = profile_output(&t, *k, cfg, *counts)?;
            let text = match format {
                Format::Json => json(&p)?,
                Format::Csv => profile_csv(&p),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Gen { family, out } => {
            let t = generate(family, cfg)?;
            emit(out.as_deref(), &(t.to_json() + "\n"))?;
        }
        Command::Verify { suite, max_n, k, random, report } => {
            let suite: Suite = suite.parse()?;
            let opts = SuiteOptions { max_n: *max_n, k: *k, seed: cfg.seed, random: *random };
            let reports = run_suite(suite, &opts)?;
            emit(report.as_deref(), &json(&reports)?)?;
            let failed = reports.iter().filter(|r| !r.passes()).count();
            eprintln!("{} checks, {} failed", reports.len(), failed);
            return Ok(all_pass(&reports));
        }
        Command::Region { d_max, out } => {
            let mut buf = Vec::new();
            emit_figure_data(*d_max, cfg.decimal_precision, &mut buf)?;
            emit(out.as_deref(), &String::from_utf8(buf).expect("ascii csv"))?;
        }
        Command::Scan { max_n, budget, out } => {
            let r = conjecture_scan(*max_n, cfg.seed, *budget);
            emit(out.as_deref(), &json(&r)?)?;
        }
        Command::Inducibility { tree, schedule, out } => {
            let t = read_tree(tree)?;
            if t.len() > cfg.max_k {
                return Err(Error::KOutOfRange { k: t.len(), max: cfg.max_k });
            }
            let schedule = schedule.clone().unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
            let r = inducibility_lower_bound(&t, &schedule, cfg.vertex_cap, cfg.decimal_precision)?;
            emit(out.as_deref(), &json(&r)?)?;
        }
    }
    Ok(true)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, env: Vec<(String, String)>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = resolve_config(&cli.global, env).and_then(|cfg| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cfg.threads {
            pool = pool.num_threads(n);
        }
        let pool = pool
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| execute(&cli.command, &cfg))
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("treelab: {e}");
            2
        }
    }
}
