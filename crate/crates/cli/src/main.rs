use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbmp_core::acs::{self, AcsConfig};
use mbmp_core::cm::{self, Root};
use mbmp_core::fetch::{self, FetchConfig, BENCHMARK_INSTANCES};
use mbmp_core::ga::{self, GaConfig};
use mbmp_core::harness::{self, compare_to_reference, Algorithm, ReferenceTable};
use mbmp_core::rl::{self, RlConfig, RL_SOFT_LIMIT};
use mbmp_core::{bandwidth, mtx, Instance, Labeling};

/// `println!` without the panic when stdout is a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

/// Matrix bandwidth minimization.
#[derive(Parser)]
#[command(name = "mbmp", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one instance and print the bandwidth and permutation.
    Solve(SolveArgs),
    /// Run a seeded suite and optionally compare it with the reference table.
    Bench(BenchArgs),
    /// Download instances into the cache directory.
    Fetch(FetchArgs),
    /// Validate a permutation file against an instance and print its bandwidth.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgo {
    Cm,
    Rcm,
    Ga,
    Ga1,
    Ga2,
    Acs,
    Macs,
    Rl,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Matrix Market file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Instance name (e.g. can_24), loaded through the cache.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: SolveAlgo,
    #[command(flatten)]
    source: Source,
    /// Cache directory for --instance (overrides MBMP_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CM root: `auto` or a 1-based vertex.
    #[arg(long, default_value = "auto")]
    root: Root,
    /// GA generations (`ga` only; ga1 and ga2 fix 50 and 100).
    #[arg(long, default_value_t = 50)]
    generations: usize,
    #[arg(long, default_value_t = 0.10)]
    mutation_rate: f64,
    #[arg(long, default_value_t = 10)]
    ants: usize,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value_t = 0.95)]
    q0: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.001)]
    rho: f64,
    #[arg(long, default_value_t = 0.1)]
    tau0: f64,
    /// RL episodes; default 200 n.
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    eps_start: f64,
    #[arg(long, default_value_t = 0.05)]
    eps_end: f64,
    /// Write the permutation, one 1-based vertex per line.
    #[arg(long)]
    perm_out: Option<PathBuf>,
    /// Write the reordered matrix in Matrix Market format.
    #[arg(long)]
    write_matrix: Option<PathBuf>,
    /// RL only: write per-episode returns as CSV.
    #[arg(long)]
    returns_csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated instance names or .mtx paths.
    #[arg(long, value_delimiter = ',', default_values_t = BENCHMARK_INSTANCES.map(String::from))]
    instances: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "cm,acs,macs,ga1,ga2")]
    algos: Vec<Algorithm>,
    /// Seeds as `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "1..20", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Runs per stochastic algorithm; defaults to 20 for ant systems and 10 otherwise.
    #[arg(long)]
    runs: Option<usize>,
    /// Per-cell comparison CSV (or per-report CSV without --ref).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full reports and comparison as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long = "ref", value_enum)]
    reference: Option<RefTable>,
    #[arg(long, default_value_t = 0.15, value_parser = parse_tolerance)]
    tolerance: f64,
    /// Worker threads across cells; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RefTable {
    Table2,
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let bad = |_| format!("bad seed list `{s}`");
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a > b {
            return Err(format!("empty seed range `{s}`"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(bad)).collect::<Result<_, _>>()?
    };
    let mut sorted = seeds.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seeds.len() {
        return Err("seeds must be distinct".into());
    }
    Ok(Seeds(seeds))
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a non-negative fraction, got `{s}`")),
    }
}

#[derive(Args)]
struct FetchArgs {
    #[arg(required = true)]
    names: Vec<String>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    /// One 1-based vertex per line.
    #[arg(long)]
    perm: PathBuf,
}

type CliResult<T> = Result<T, String>;

fn fetch_config(cache_dir: Option<&Path>) -> FetchConfig {
    let cfg = FetchConfig::from_env();
    match cache_dir {
        Some(d) => cfg.with_cache_dir(d),
        None => cfg,
    }
}

fn load(input: Option<&Path>, name: Option<&str>, cache_dir: Option<&Path>) -> CliResult<Instance> {
    let inst = match (input, name) {
        (Some(p), _) => mtx::load_matrix_market(p),
        (None, Some(n)) if n.ends_with(".mtx") => mtx::load_matrix_market(n),
        (None, Some(n)) => fetch::fetch_instance(n, &fetch_config(cache_dir)),
        (None, None) => unreachable!("clap enforces a source"),
    }
    .map_err(|e| e.to_string())?;
    for w in inst.warnings() {
        eprintln!("warning: {}: {w}", inst.name());
    }
    Ok(inst)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn perm_lines(lab: &Labeling) -> String {
    lab.to_one_based().iter().map(|v| format!("{v}\n")).collect()
}

fn solve(a: SolveArgs) -> CliResult<()> {
    let inst = load(a.source.input.as_deref(), a.source.instance.as_deref(), a.cache_dir.as_deref())?;
    let e = |e: mbmp_core::Error| e.to_string();
    let ga_cfg = |generations| GaConfig {
        generations,
        mutation_rate: a.mutation_rate,
        seed: a.seed,
        ..GaConfig::default()
    };
    let acs_cfg = |base: AcsConfig| AcsConfig {
        ants: a.ants,
        iterations: a.iters,
        q0: a.q0,
        beta: a.beta,
        rho: a.rho,
        tau0: a.tau0,
        ..base
    };
    let lab = match a.algo {
        SolveAlgo::Cm => cm::cuthill_mckee(&inst, a.root).map_err(e)?,
        SolveAlgo::Rcm => cm::reverse_cuthill_mckee(&inst, a.root).map_err(e)?,
        SolveAlgo::Ga => ga::evolve(&inst, &ga_cfg(a.generations)).map_err(e)?.labeling,
        SolveAlgo::Ga1 => ga::evolve(&inst, &ga_cfg(50)).map_err(e)?.labeling,
        SolveAlgo::Ga2 => ga::evolve(&inst, &ga_cfg(100)).map_err(e)?.labeling,
        SolveAlgo::Acs => acs::solve(&inst, &acs_cfg(AcsConfig::hacs(a.seed))).map_err(e)?.labeling,
        SolveAlgo::Macs => acs::solve(&inst, &acs_cfg(AcsConfig::hmacs(a.seed))).map_err(e)?.labeling,
        SolveAlgo::Rl => {
            if inst.n() > RL_SOFT_LIMIT {
                eprintln!(
                    "warning: RL on n = {} exceeds the intended size ({RL_SOFT_LIMIT}); training may take very long",
                    inst.n()
                );
            }
            let cfg = RlConfig {
                episodes: a.episodes,
                alpha: a.alpha,
                eps_start: a.eps_start,
                eps_end: a.eps_end,
                ..RlConfig::with_seed(a.seed)
            };
            let t = rl::train_sarsa_logged(&inst, &cfg).map_err(e)?;
            if let Some(p) = &a.returns_csv {
                let mut s = String::from("episode,return,final_bandwidth\n");
                for (i, (r, b)) in t.returns.iter().zip(&t.final_bandwidths).enumerate() {
                    s.push_str(&format!("{i},{r},{b}\n"));
                }
                write_file(p, &s)?;
            }
            rl::extract_greedy(&t.q, inst.n())
        }
    };
    let beta = bandwidth(&inst, &lab).map_err(e)?;
    say!("bandwidth: {beta}");
    let perm: Vec<String> = lab.to_one_based().iter().map(ToString::to_string).collect();
    say!("permutation: {}", perm.join(" "));
    if let Some(p) = &a.perm_out {
        write_file(p, &perm_lines(&lab))?;
    }
    if let Some(p) = &a.write_matrix {
        write_file(p, &mtx::write_matrix_market(&inst.permuted(&lab).map_err(e)?))?;
    }
    Ok(())
}

fn bench(a: BenchArgs) -> CliResult<bool> {
    let insts = a
        .instances
        .iter()
        .map(|name| load(None, Some(name), a.cache_dir.as_deref()))
        .collect::<CliResult<Vec<_>>>()?;
    let pool = rayon_pool(a.jobs)?;
    let reports = pool.install(|| harness::run_suite(&insts, &a.algos, a.runs, &a.seeds.0));
    for r in &reports {
        let best = r.best_beta.map_or("-".into(), |b| b.to_string());
        let mean = r.mean().map_or("-".into(), |m| format!("{m:.2}"));
        say!("{:<10} {:<8} runs {:>3}  best {:>5}  mean {:>8}", r.instance, r.algorithm, r.runs.len(), best, mean);
        for run in r.runs.iter().filter(|x| x.error.is_some()) {
            eprintln!("warning: {} {} seed {}: {}", r.instance, r.algorithm, run.seed, run.error.as_deref().unwrap_or(""));
        }
    }
    let comparison = a.reference.map(|RefTable::Table2| compare_to_reference(&reports, &ReferenceTable::table2(), a.tolerance));
    if let Some(c) = &comparison {
        for s in &c.summary {
            say!(
                "{:<8} {}/{} within {:.0}% ({} improve, {} missing)",
                s.algorithm,
                s.passed,
                s.compared + s.missing,
                c.tolerance * 100.0,
                s.improves,
                s.missing
            );
        }
    }
    if let Some(p) = &a.out {
        let mut buf = Vec::new();
        match &comparison {
            Some(c) => c.write_csv(&mut buf),
            None => harness::write_reports_csv(&reports, &mut buf),
        }
        .map_err(|e| e.to_string())?;
        fs::write(p, buf).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    if let Some(p) = &a.json {
        let doc = serde_json::json!({ "reports": reports, "comparison": comparison });
        write_file(p, &serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?)?;
    }
    Ok(comparison.is_none_or(|c| c.gating_failures() == 0))
}

fn rayon_pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().map_err(|e| e.to_string())
}

fn fetch_cmd(a: FetchArgs) -> CliResult<()> {
    let cfg = fetch_config(a.cache_dir.as_deref());
    let mut failed = Vec::new();
    for name in &a.names {
        match fetch::fetch_instance(name, &cfg) {
            Ok(inst) => say!(
                "{} n={} nnz={} -> {}",
                inst.name(),
                inst.n(),
                inst.nnz_reported(),
                fetch::cache_path(name, &cfg).map(|p| p.display().to_string()).unwrap_or_default()
            ),
            Err(e) => {
                eprintln!("error: {name}: {e}");
                failed.push(name.as_str());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("could not fetch {}", failed.join(", ")))
    }
}

fn read_perm(path: &Path) -> CliResult<Labeling> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let values = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid permutation file {}: line {}: `{}` is not a positive integer", path.display(), i + 1, l.trim()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Labeling::from_one_based(&values).map_err(|e| format!("invalid permutation file {}: {e}", path.display()))
}

fn check(a: CheckArgs) -> CliResult<()> {
    let inst = load(Some(&a.input), None, None)?;
    let lab = read_perm(&a.perm)?;
    let beta = bandwidth(&inst, &lab).map_err(|e| format!("invalid permutation file {}: {e}", a.perm.display()))?;
    say!("bandwidth: {beta}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Solve(a) => solve(a).map(|_| true),
        Command::Bench(a) => bench(a),
        Command::Fetch(a) => fetch_cmd(a).map(|_| true),
        Command::Check(a) => check(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some gating cells failed the reference comparison");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
