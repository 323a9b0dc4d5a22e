use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use attrclust::cli::{self, ClusterJob, GenerateJob, KSpec, Mode, SweepGrid};
use attrclust::config::Settings;
use attrclust::generators::SbmSpec;
use attrclust::{Error, Result};

#[derive(Parser)]
#[command(name = "attrclust", version, about = "Cluster vertex-attributed graphs with bootstrap AMG embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed and cluster a graph, optionally with vertex attributes.
    Cluster(ClusterArgs),
    /// Sample a planted-partition graph with truth labels and attributes.
    Generate(GenerateArgs),
    /// Compare two partition files.
    Score(ScoreArgs),
    /// Run an experiment grid over generated graphs.
    Sweep(SweepArgs),
}

/// Tunables shared by `cluster` and `sweep`; flags override the config file.
#[derive(Args)]
struct SettingsArgs {
    /// INI-style `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any setting, e.g. `--set max_levels=10`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Rank-1 shift, or `auto` for the average weighted degree.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    attr_weight: Option<f64>,
    #[arg(long)]
    target_rho: Option<f64>,
    /// `per_step` or `total`.
    #[arg(long)]
    rho_mode: Option<String>,
    #[arg(long)]
    max_components: Option<usize>,
    #[arg(long)]
    smooth_iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Report the unnormalized I/(H+H') variant of NMI.
    #[arg(long)]
    nmi_raw: bool,
}

impl SettingsArgs {
    fn resolve(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(p) = &self.config {
            s.apply_file(p)?;
        }
        let flags: [(&str, Option<String>); 8] = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("lambda", self.lambda.clone()),
            ("attr_weight", self.attr_weight.map(|v| v.to_string())),
            ("target_rho", self.target_rho.map(|v| v.to_string())),
            ("rho_mode", self.rho_mode.clone()),
            ("max_components", self.max_components.map(|v| v.to_string())),
            ("smooth_iters", self.smooth_iters.map(|v| v.to_string())),
            ("restarts", self.restarts.map(|v| v.to_string())),
        ];
        for o in &self.overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--set expects KEY=VALUE, got {o:?}")))?;
            s.set(k.trim(), v)?;
        }
        for (k, v) in flags {
            if let Some(v) = v {
                s.set(k, &v)?;
            }
        }
        Ok(s)
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// Edge list: `i j [w]` per line, `#` comments.
    #[arg(long)]
    edges: PathBuf,
    /// Attribute TSV with a header row; empty cells are missing.
    #[arg(long)]
    attributes: Option<PathBuf>,
    /// Truth partition TSV; enables NMI, entropies and gain.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// `attributed` or `structure`; inferred from --attributes when omitted.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long, short, conflicts_with = "k_range")]
    k: Option<usize>,
    /// Inclusive range `a..b`; one partition file per K.
    #[arg(long)]
    k_range: Option<String>,
    /// Also write `coordinates.tsv`.
    #[arg(long)]
    dump_coordinates: bool,
    #[command(flatten)]
    settings: SettingsArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Average degree.
    #[arg(long, default_value_t = 20.0)]
    c: f64,
    /// c_in − c_out.
    #[arg(long)]
    delta: f64,
    /// Probability of redrawing an attribute value.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    estimate: PathBuf,
    /// Edge list for modularity and ratio cut.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    nmi_raw: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value_t = 20.0)]
    c: f64,
    /// Comma-separated c_in − c_out values.
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<f64>,
    /// Comma-separated attribute noise levels.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    noises: Vec<f64>,
    /// Comma-separated K values; defaults to q.
    #[arg(long, value_delimiter = ',', conflicts_with = "k_range")]
    ks: Vec<usize>,
    #[arg(long)]
    k_range: Option<String>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value = "attributed")]
    mode: Mode,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    settings: SettingsArgs,
}

fn k_spec(k: Option<usize>, range: Option<&str>) -> Result<KSpec> {
    match (k, range) {
        (_, Some(r)) => KSpec::parse_range(r),
        (Some(0), None) => Err(Error::Usage("K must be positive".into())),
        (Some(k), None) => Ok(KSpec::Single(k)),
        (None, None) => Err(Error::Usage("one of --k or --k-range is required".into())),
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Cluster(a) => {
            let job = ClusterJob {
                k: k_spec(a.k, a.k_range.as_deref())?,
                edges: a.edges,
                attributes: a.attributes,
                truth: a.truth,
                out_dir: a.out,
                mode: a.mode,
                nmi_raw: a.settings.nmi_raw,
                settings: a.settings.resolve()?,
                dump_coordinates: a.dump_coordinates,
            };
            let out = cli::run_cluster(&job)?;
            for r in &out.results {
                eprintln!(
                    "K={} modularity={} restart={} -> {}",
                    r.k,
                    r.modularity.map_or("NA".into(), |m| format!("{m:.6}")),
                    r.restart,
                    job.out_dir.join(cli::partition_file(&job.k, r.k)).display()
                );
            }
        }
        Command::Generate(a) => {
            let job = GenerateJob {
                spec: SbmSpec { n: a.n, q: a.q, c: a.c, delta: a.delta, seed: a.seed },
                noise: a.noise,
                out_dir: a.out,
            };
            cli::run_generate(&job)?;
        }
        Command::Score(a) => {
            let report = cli::run_score(&a.truth, &a.estimate, a.edges.as_deref(), a.nmi_raw)?;
            match a.out {
                Some(p) => attrclust::io::write_json(&p, &report)?,
                None => println!("{}", serde_json::to_string_pretty(&report)?),
            }
        }
        Command::Sweep(a) => {
            let ks = match (&a.k_range, a.ks.is_empty()) {
                (Some(r), _) => KSpec::parse_range(r)?.values(),
                (None, true) => vec![a.q],
                (None, false) => a.ks.clone(),
            };
            let settings = a.settings.resolve()?;
            let grid = SweepGrid {
                n: a.n,
                q: a.q,
                c: a.c,
                deltas: a.deltas,
                noises: a.noises,
                ks,
                samples: a.samples,
                base_seed: settings.seed,
                mode: a.mode,
            };
            let (rows, _) = cli::run_sweep(&grid, &settings, a.workers, a.settings.nmi_raw, &a.out)?;
            let failed = rows.iter().filter(|r| r.status != "ok").count();
            eprintln!("{} rows, {failed} failed -> {}", rows.len(), a.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
