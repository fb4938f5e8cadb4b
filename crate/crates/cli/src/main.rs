use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use citescope::corpus::{self, InputFormat};
use citescope::forgetting::CurveMode;
use citescope::milestone::{AlphaSource, McFormula};
use citescope::report::{self, Analysis, Emitter, Options, ReportError};
use citescope::synth::{Growth, HalfLife, PlantedAuthor, PlantedMilestone, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "citescope", version, about = "Milestone analytics for proceedings corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a JSONL or CSV export and persist it as corpus.json.
    Ingest {
        #[command(flatten)]
        io: Io,
        /// Input format; guessed from the extension when omitted.
        #[arg(long, value_parser = ["jsonl", "csv"])]
        format: Option<String>,
    },
    /// Parse every reference string.
    Parse {
        #[command(flatten)]
        io: Io,
    },
    /// Citation curves, per-paper series and milestone panels.
    Curves {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 300)]
        panel_top: usize,
    },
    /// Forgetting curves and their smoothness.
    Forgetting {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "per_capita")]
        mode: CurveMode,
        /// Log-scale the vertical axis.
        #[arg(long)]
        log: bool,
        /// Milestones shown as bars on the secondary axis.
        #[arg(long, default_value_t = 30)]
        top: usize,
    },
    /// Ranked milestones with their coefficients.
    Milestones {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 30)]
        top: usize,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Milestone Coefficient table and bubble chart.
    Mc {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 3000)]
        top: usize,
        #[command(flatten)]
        mc: McArgs,
    },
    /// DTW k-means and Ward clustering of milestone share series.
    Cluster {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        cluster: ClusterArgs,
    },
    /// Milestone counts per author and their concentration.
    Authors {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 300)]
        top: usize,
        #[arg(long, default_value_t = 1)]
        min_count: usize,
    },
    /// Generate a synthetic corpus with its ground truth.
    Synth(SynthArgs),
    /// Every analysis output for one corpus.
    ReportAll {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "per_capita")]
        mode: CurveMode,
        #[arg(long)]
        log: bool,
        #[arg(long, default_value_t = 30)]
        top: usize,
        #[arg(long, default_value_t = 3000)]
        mc_top: usize,
        #[arg(long, default_value_t = 300)]
        panel_top: usize,
        #[arg(long, default_value_t = 300)]
        author_top: usize,
        #[arg(long, default_value_t = 1)]
        min_count: usize,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        cluster: ClusterArgs,
    },
}

#[derive(Debug, Args)]
struct Io {
    /// Corpus file: a persisted corpus.json, JSONL or CSV export.
    #[arg(long)]
    corpus: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct McArgs {
    /// Power-law exponent, or `mle` to estimate it from the corpus.
    #[arg(long, default_value = "3.63")]
    alpha: AlphaSource,
    #[arg(long, default_value = "product")]
    mc_formula: McFormula,
    /// Peak share above which a milestone is a super-milestone.
    #[arg(long, default_value_t = 0.001)]
    super_threshold: f64,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[arg(long, default_value_t = 100)]
    cluster_top: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Most recent years used to label clusters.
    #[arg(long, default_value_t = 10)]
    label_window: usize,
    /// Force this cluster to be labelled super.
    #[arg(long)]
    super_cluster: Option<usize>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1985)]
    first_year: i32,
    #[arg(long, default_value_t = 2024)]
    last_year: i32,
    #[arg(long, default_value_t = 983)]
    papers_per_year: u64,
    /// Geometric growth rate; constant growth when omitted.
    #[arg(long)]
    growth_rate: Option<f64>,
    #[arg(long, default_value_t = 16)]
    refs_per_paper: u32,
    #[arg(long, default_value_t = 1.0)]
    attachment: f64,
    /// Recency half-life in years.
    #[arg(long, default_value_t = 8.0)]
    half_life: f64,
    /// Final half-life; declines geometrically from --decline-from.
    #[arg(long)]
    half_life_end: Option<f64>,
    #[arg(long)]
    decline_from: Option<i32>,
    /// Years of citable literature before --first-year.
    #[arg(long, default_value_t = 5)]
    seed_years: u32,
    /// Planted milestone as YEAR:SHARE; repeatable.
    #[arg(long, value_parser = parse_plant)]
    plant: Vec<PlantedMilestone>,
    #[arg(long, default_value_t = 3)]
    plant_lag: u32,
    /// Planted author as "Given Surname:COUNT:TOP".
    #[arg(long, value_parser = parse_plant_author)]
    plant_author: Option<PlantedAuthor>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_plant(s: &str) -> Result<PlantedMilestone, String> {
    let (year, share) = s.split_once(':').ok_or("expected YEAR:SHARE")?;
    Ok(PlantedMilestone {
        year: year.trim().parse().map_err(|_| format!("bad year `{year}`"))?,
        target_peak_share: share.trim().parse().map_err(|_| format!("bad share `{share}`"))?,
    })
}

fn parse_plant_author(s: &str) -> Result<PlantedAuthor, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, count, top] = parts[..] else {
        return Err("expected \"Given Surname:COUNT:TOP\"".into());
    };
    let (given, surname) = name
        .trim()
        .rsplit_once(' ')
        .ok_or("author name needs a given name and a surname")?;
    Ok(PlantedAuthor {
        given: given.trim().to_string(),
        surname: surname.to_string(),
        milestones: count.parse().map_err(|_| format!("bad count `{count}`"))?,
        top_n: top.parse().map_err(|_| format!("bad top `{top}`"))?,
    })
}

impl SynthArgs {
    fn config(&self) -> SynthConfig {
        let growth = match self.growth_rate {
            Some(rate) => Growth::Geometric {
                initial: self.papers_per_year,
                rate,
            },
            None => Growth::Constant(self.papers_per_year),
        };
        let half_life = match self.half_life_end {
            Some(end) => HalfLife::declining(
                self.half_life,
                end,
                self.decline_from.unwrap_or(self.first_year),
                self.last_year,
            ),
            None => HalfLife::Constant(self.half_life),
        };
        SynthConfig {
            first_year: self.first_year,
            last_year: self.last_year,
            growth,
            refs_per_paper: self.refs_per_paper,
            attachment_exponent: self.attachment,
            half_life,
            seed_years: self.seed_years,
            planted_milestones: self.plant.clone(),
            planted_peak_lag: self.plant_lag,
            planted_author: self.plant_author.clone(),
            seed: self.seed,
        }
    }
}

impl McArgs {
    fn apply(&self, opts: &mut Options) {
        opts.alpha = self.alpha;
        opts.mc_formula = self.mc_formula;
        opts.super_threshold = self.super_threshold;
    }
}

impl ClusterArgs {
    fn apply(&self, opts: &mut Options) {
        opts.cluster_top = self.cluster_top;
        opts.k = self.k;
        opts.restarts = self.restarts;
        opts.max_iter = self.max_iter;
        opts.seed = self.seed;
        opts.label_window = self.label_window;
        opts.super_cluster = self.super_cluster;
    }
}

fn analysis(path: &Path) -> anyhow::Result<Analysis> {
    let corpus = corpus::open(path)
        .map_err(ReportError::from)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(Analysis::new(corpus))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut opts = Options::default();
    match cli.command {
        Command::Ingest { io, format } => {
            let format = match format.as_deref() {
                Some("csv") => InputFormat::Csv,
                Some(_) => InputFormat::Jsonl,
                None => InputFormat::from_path(&io.corpus),
            };
            let corpus = corpus::ingest(&io.corpus, format).map_err(ReportError::from)?;
            report::emit_ingest(&corpus, &mut Emitter::new(&io.out)?)?;
        }
        Command::Parse { io } => {
            report::emit_parse(&analysis(&io.corpus)?, &mut Emitter::new(&io.out)?)?;
        }
        Command::Curves { io, panel_top } => {
            opts.panel_top = panel_top;
            report::emit_curves(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Forgetting { io, mode, log, top } => {
            opts.mode = mode;
            opts.log = log;
            opts.top = top;
            report::emit_forgetting(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Milestones { io, top, mc } => {
            opts.top = top;
            mc.apply(&mut opts);
            report::emit_milestones(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Mc { io, top, mc } => {
            opts.mc_top = top;
            mc.apply(&mut opts);
            report::emit_mc(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Cluster { io, cluster } => {
            cluster.apply(&mut opts);
            report::emit_cluster(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Authors { io, top, min_count } => {
            opts.author_top = top;
            opts.min_count = min_count;
            report::emit_authors(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
        Command::Synth(args) => {
            report::emit_synth(&args.config(), &mut Emitter::new(&args.out)?)?;
        }
        Command::ReportAll {
            io,
            mode,
            log,
            top,
            mc_top,
            panel_top,
            author_top,
            min_count,
            mc,
            cluster,
        } => {
            opts.mode = mode;
            opts.log = log;
            opts.top = top;
            opts.mc_top = mc_top;
            opts.panel_top = panel_top;
            opts.author_top = author_top;
            opts.min_count = min_count;
            cluster.apply(&mut opts);
            mc.apply(&mut opts);
            report::report_all(&analysis(&io.corpus)?, &opts, &mut Emitter::new(&io.out)?)?;
        }
    }
    Ok(())
}

fn diagnostic(kind: &str, message: &str) {
    let record = serde_json::json!({ "level": "error", "kind": kind, "message": message });
    eprintln!("{record}");
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CITESCOPE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("CITESCOPE_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnostic("usage", e.to_string().lines().next().unwrap_or_default());
            return ExitCode::from(1);
        }
    };
    if let Err(message) = configure_threads() {
        diagnostic("usage", &message);
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = match err.downcast_ref::<ReportError>() {
                Some(r) => (r.kind(), r.exit_code()),
                None => ("error", 2),
            };
            diagnostic(kind, &format!("{err:#}"));
            ExitCode::from(code as u8)
        }
    }
}
