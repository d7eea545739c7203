//! Command-line front end: instance generation, sweeps, and threshold analysis.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::FitConfig;
use crate::io::{read_sweep_csv, write_sweep_csv, write_thresholds_csv, write_tradeoff_csv};
use crate::ising::{enumerate_energies, generate_sk, load_model, save_model, IsingModel};
use crate::simulator::MixerKind;
use crate::sweep::{sweep_table, threshold_analysis, tradeoff_extract, GridSpec, SweepRecord, ThresholdPoint};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

pub const DEFAULT_THRESHOLDS: [f64; 3] = [0.1, 0.01, 0.001];
pub const DEFAULT_T_EFF_MAX: f64 = 100.0;

/// An error tagged with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub error: Error,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for CliError {}

trait ExitCode<T> {
    fn config_err(self) -> std::result::Result<T, CliError>;
    fn compute_err(self) -> std::result::Result<T, CliError>;
}

impl<T> ExitCode<T> for Result<T> {
    fn config_err(self) -> std::result::Result<T, CliError> {
        self.map_err(|error| CliError {
            code: EXIT_CONFIG,
            error,
        })
    }

    fn compute_err(self) -> std::result::Result<T, CliError> {
        self.map_err(|error| CliError {
            code: EXIT_COMPUTE,
            error,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "qaoa-thermal", version, about = "QAOA Boltzmann-sampling landscapes for Ising spin glasses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a ±1 Sherrington-Kirkpatrick instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the spectrum summary of a model file.
    Info {
        #[arg(long)]
        model: PathBuf,
    },
    /// Sweep a depth-one angle grid, writing sweep.csv and meta.json.
    Sweep(SweepArgs),
    /// Threshold and tradeoff analysis of a fitted sweep.csv.
    Analyze {
        #[arg(long = "sweep")]
        sweep_csv: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_THRESHOLDS)]
        thresholds: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_T_EFF_MAX)]
        t_eff_max: f64,
        /// Output directory; defaults to the sweep file's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags override values from `--config`.
#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// A run configuration, or the meta.json of an earlier sweep.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["n", "seed"])]
    pub model: Option<PathBuf>,
    #[arg(long, requires = "seed")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mixer: Option<MixerKind>,
    #[arg(long, num_args = 2, value_names = ["N_GAMMA", "N_BETA"])]
    pub resolution: Option<Vec<usize>>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub gamma_range: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub beta_range: Option<Vec<f64>>,
    /// Fit an effective inverse temperature in every cell.
    #[arg(long)]
    pub fit: bool,
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 or absent means one per core.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub gamma_range: [f64; 2],
    /// Defaults to the mixer's period when absent.
    pub beta_range: Option<[f64; 2]>,
    pub resolution: [usize; 2],
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            gamma_range: [0.0, std::f64::consts::FRAC_PI_4],
            beta_range: None,
            resolution: [200, 200],
        }
    }
}

impl GridConfig {
    pub fn resolve(&self, mixer: MixerKind) -> GridSpec {
        GridSpec {
            gamma_range: self.gamma_range,
            beta_range: self.beta_range.unwrap_or_else(|| GridSpec::default_beta_range(mixer)),
            resolution: self.resolution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model_path: Option<PathBuf>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub mixer: MixerKind,
    pub grid: GridConfig,
    pub fit: FitConfig,
    pub fit_enabled: bool,
    pub output_dir: PathBuf,
    /// `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model_path: None,
            n: None,
            seed: None,
            mixer: MixerKind::TransverseX,
            grid: GridConfig::default(),
            fit: FitConfig::default(),
            fit_enabled: false,
            output_dir: PathBuf::from("out"),
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match (&self.model_path, self.n, self.seed) {
            (Some(_), None, None) | (None, Some(_), Some(_)) => {}
            (Some(_), _, _) => {
                return Err(Error::invalid(
                    "model_path",
                    "give either model_path or (n, seed), not both",
                ))
            }
            _ => return Err(Error::invalid("n", "give either model_path or both n and seed")),
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads", "use null for automatic"));
        }
        self.grid.resolve(self.mixer).validate()?;
        if self.fit_enabled {
            self.fit.validate()?;
        }
        Ok(())
    }

    pub fn load_model(&self) -> Result<IsingModel> {
        match (&self.model_path, self.n, self.seed) {
            (Some(p), _, _) => load_model(p),
            (None, Some(n), Some(seed)) => generate_sk(n, seed),
            _ => Err(Error::invalid("n", "no model source")),
        }
    }

    /// Reads a run configuration, or extracts it from a sweep's meta.json.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        let value = match value {
            serde_json::Value::Object(mut m) if m.contains_key("version") && m.contains_key("config") => {
                m.remove("config").unwrap_or_default()
            }
            v => v,
        };
        serde_json::from_value(value).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
    }

    fn apply(&mut self, args: &SweepArgs) -> Result<()> {
        if let Some(p) = &args.model {
            self.model_path = Some(p.clone());
            self.n = None;
            self.seed = None;
        }
        if let (Some(n), Some(seed)) = (args.n, args.seed) {
            self.model_path = None;
            self.n = Some(n);
            self.seed = Some(seed);
        }
        if let Some(m) = args.mixer {
            self.mixer = m;
        }
        if let Some(r) = &args.resolution {
            self.grid.resolution = [r[0], r[1]];
        }
        if let Some(r) = &args.gamma_range {
            self.grid.gamma_range = [r[0], r[1]];
        }
        if let Some(r) = &args.beta_range {
            self.grid.beta_range = Some([r[0], r[1]]);
        }
        if args.fit {
            self.fit_enabled = true;
        }
        if let Some(b) = args.beta_max {
            self.fit.linear_grid.beta_max = b;
        }
        if let Some(o) = &args.out {
            self.output_dir = o.clone();
        }
        if let Some(t) = args.threads {
            self.threads = (t > 0).then_some(t);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub config: RunConfig,
    pub version: String,
    pub started_at: String,
    pub wall_seconds: f64,
}

pub fn cmd_gen(n: usize, seed: u64, out: &Path) -> std::result::Result<IsingModel, CliError> {
    let model = generate_sk(n, seed).config_err()?;
    save_model(&model, out).compute_err()?;
    Ok(model)
}

pub fn cmd_info(model: &Path) -> std::result::Result<String, CliError> {
    let model = load_model(model).config_err()?;
    let table = enumerate_energies(&model).config_err()?;
    let mut s = String::new();
    let _ = writeln!(s, "spins        {}", model.n());
    let _ = writeln!(s, "couplings    {}", model.couplings().len());
    let _ = writeln!(s, "e_min        {}", table.e_min());
    let _ = writeln!(s, "e_max        {}", table.e_max());
    let _ = writeln!(s, "levels       {}", table.levels().len());
    let _ = writeln!(s, "ground deg.  {}", table.levels()[0].degeneracy);
    Ok(s)
}

pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub sweep_csv: PathBuf,
    pub meta_json: PathBuf,
}

/// Runs a sweep and writes `sweep.csv` and `meta.json` into the output directory.
pub fn cmd_sweep(config: &RunConfig) -> std::result::Result<SweepOutcome, CliError> {
    config.validate().config_err()?;
    let model = config.load_model().config_err()?;
    let grid = config.grid.resolve(config.mixer);
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| Error::io(&config.output_dir, e))
        .config_err()?;

    let started_at = chrono::Utc::now().to_rfc3339();
    let clock = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Compute(e.to_string()))
        .compute_err()?;
    let table = enumerate_energies(&model).config_err()?;
    log::info!(
        "sweeping {} cells on {} workers (n = {}, mixer = {}, fit = {})",
        grid.cells(),
        pool.current_num_threads(),
        model.n(),
        config.mixer,
        config.fit_enabled
    );
    let records = pool
        .install(|| sweep_table(&table, &grid, config.mixer, &config.fit, config.fit_enabled))
        .compute_err()?;

    let sweep_csv = config.output_dir.join("sweep.csv");
    write_sweep_csv(&sweep_csv, &records).compute_err()?;
    let meta = RunMeta {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        wall_seconds: clock.elapsed().as_secs_f64(),
    };
    let meta_json = config.output_dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).map_err(Error::from).compute_err()?;
    fs::write(&meta_json, text + "\n")
        .map_err(|e| Error::io(&meta_json, e))
        .compute_err()?;
    Ok(SweepOutcome {
        records,
        sweep_csv,
        meta_json,
    })
}

pub struct AnalyzeOutcome {
    pub thresholds: Vec<ThresholdPoint>,
    pub tradeoff_points: usize,
    pub summary: String,
}

pub fn cmd_analyze(
    sweep_csv: &Path,
    thresholds: &[f64],
    t_eff_max: f64,
    out_dir: Option<&Path>,
) -> std::result::Result<AnalyzeOutcome, CliError> {
    if t_eff_max.is_nan() || t_eff_max <= 0.0 {
        return Err(Error::invalid("t_eff_max", "must be positive")).config_err();
    }
    let records = read_sweep_csv(sweep_csv).config_err()?;
    if records.is_empty() {
        return Err(Error::parse("sweep", "no data rows")).config_err();
    }
    if records.iter().any(|r| r.beta_eff.is_none() || r.tvd_min.is_none()) {
        return Err(Error::parse(
            "beta_eff/tvd_min",
            "missing fit columns; rerun the sweep with fitting enabled",
        ))
        .config_err();
    }
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => sweep_csv
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e)).config_err()?;

    let points = threshold_analysis(&records, thresholds);
    let tradeoff = tradeoff_extract(&records, t_eff_max);
    write_thresholds_csv(dir.join("thresholds.csv"), &points).compute_err()?;
    write_tradeoff_csv(dir.join("tradeoff.csv"), &tradeoff).compute_err()?;

    Ok(AnalyzeOutcome {
        summary: summary_table(&points),
        thresholds: points,
        tradeoff_points: tradeoff.len(),
    })
}

fn summary_table(points: &[ThresholdPoint]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>12}  {:>12}  {:>12}  {:>10}  {:>10}",
        "TVD thresh", "T_eff", "beta_eff", "beta_angle", "gamma"
    );
    for p in points {
        match p.best {
            Some(r) => {
                let b = r.beta_eff.unwrap_or(0.0);
                let _ = writeln!(
                    s,
                    "{:>12}  {:>12.4}  {:>12.6e}  {:>10.4}  {:>10.6}",
                    p.threshold,
                    1.0 / b,
                    b,
                    r.beta_angle,
                    r.gamma
                );
            }
            None => {
                let _ = writeln!(s, "{:>12}  {:>12}", p.threshold, "absent");
            }
        }
    }
    s
}

pub fn run(cli: Cli) -> std::result::Result<(), CliError> {
    match cli.command {
        Command::Gen { n, seed, out } => {
            let m = cmd_gen(n, seed, &out)?;
            println!(
                "wrote {} ({} spins, {} couplings)",
                out.display(),
                m.n(),
                m.couplings().len()
            );
        }
        Command::Info { model } => print!("{}", cmd_info(&model)?),
        Command::Sweep(args) => {
            let mut config = match &args.config {
                Some(p) => RunConfig::from_file(p).config_err()?,
                None => RunConfig::default(),
            };
            config.apply(&args).config_err()?;
            let out = cmd_sweep(&config)?;
            println!(
                "wrote {} ({} rows) and {}",
                out.sweep_csv.display(),
                out.records.len(),
                out.meta_json.display()
            );
        }
        Command::Analyze {
            sweep_csv,
            thresholds,
            t_eff_max,
            out,
        } => {
            let a = cmd_analyze(&sweep_csv, &thresholds, t_eff_max, out.as_deref())?;
            print!("{}", a.summary);
            println!("{} tradeoff points with T_eff <= {t_eff_max}", a.tradeoff_points);
        }
    }
    Ok(())
}
