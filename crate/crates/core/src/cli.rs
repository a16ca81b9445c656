//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical blow-up, 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::dynamics::{evolve, NonlinearTerm, Observer, State, Variant};
use crate::error::{Error, Result};
use crate::experiments::{
    energy_sweep, osc_order_table, spatial_sweep, step_count, temporal_sweep, ConvergenceReport,
    Horizon, OscTableSpec, ReferenceCache, ReferencePolicy, SweepPlan,
};
use crate::io::config::parse_config;
use crate::io::snapshot::{write_complex_pair, write_snapshot, Part, SnapshotMeta, SnapshotQuantity};
use crate::io::tables::{write_energy_csv, write_report_csv};
use crate::io::vtk::{export_structured_grid, ExportQuantity};
use crate::observables::state_energy;
use crate::scenarios::{make_scenario, ScenarioName};

#[derive(Debug, Parser)]
#[command(name = "frsg", version, about = "Fractional sine-Gordon spectral solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one trajectory described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Spatial convergence sweep over N.
    ConvergeSpace(SweepArgs),
    /// Temporal convergence sweep over τ.
    ConvergeTime(SweepArgs),
    /// Energy drift series over τ.
    Energy(SweepArgs),
    /// Error/order tables of the oscillatory complex model.
    OscTable(OscArgs),
    /// Convert a snapshot to a legacy structured-points file.
    Export {
        snapshot: PathBuf,
        out: PathBuf,
        /// `u` or `sin(u/2)`
        #[arg(long, default_value = "u")]
        quantity: String,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "smooth2d")]
    pub scenario: String,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub epsilon: Vec<f64>,
    /// Time-step ladder (converge-time, energy).
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<f64>,
    /// Grid ladder (converge-space).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// `t=<T>` or `long=<T>` (runs to T/ε²).
    #[arg(long, default_value = "long=1")]
    pub horizon: String,
    #[arg(long)]
    pub tau_ref: Option<f64>,
    #[arg(long)]
    pub n_ref: Option<usize>,
    /// Full-scale reference resolution (N_ref = 128, τ_ref = 1e-3).
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long)]
    pub variant: Option<String>,
    /// Switch the nonlinear source off.
    #[arg(long)]
    pub linear: bool,
    /// Energy sampling interval in steps.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[arg(long, default_value = "frsg-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, Args)]
pub struct OscArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// N = 64, λ_ref = 1e-4, three ε rows (default).
    #[arg(long, conflicts_with = "paper_scale")]
    pub desk_scale: bool,
    /// N = 128, λ_ref = 1e-5, five ε rows.
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub eps_depth: Option<usize>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub lambda_ref: Option<f64>,
    #[arg(long, default_value = "frsg-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { config } => run(&config),
        Command::ConvergeSpace(args) => {
            let plan = sweep_plan(&args)?;
            let cache = cache_for(&args.cache, args.no_cache, &args.out);
            emit(&spatial_sweep(&plan, cache.as_ref())?, &args.out, "space")
        }
        Command::ConvergeTime(args) => {
            let plan = sweep_plan(&args)?;
            let cache = cache_for(&args.cache, args.no_cache, &args.out);
            emit(&temporal_sweep(&plan, cache.as_ref())?, &args.out, "time")
        }
        Command::Energy(args) => {
            let plan = sweep_plan(&args)?;
            let reports = energy_sweep(&plan, args.every)?;
            for r in &reports {
                write_energy_csv(r, &args.out.join(format!("energy_series_alpha{}.csv", r.meta.alpha)))?;
            }
            emit(&reports, &args.out, "energy")
        }
        Command::OscTable(args) => {
            let spec = osc_spec(&args);
            let cache = cache_for(&args.cache, args.no_cache, &args.out);
            let report = osc_order_table(&spec, cache.as_ref())?;
            emit(std::slice::from_ref(&report), &args.out, "osc_table")
        }
        Command::Export {
            snapshot,
            out,
            quantity,
        } => export_structured_grid(&snapshot, &out, quantity.parse::<ExportQuantity>()?),
    }
}

fn cache_for(cache: &Option<PathBuf>, disabled: bool, out: &Path) -> Option<ReferenceCache> {
    if disabled {
        return None;
    }
    Some(ReferenceCache::new(cache.clone().unwrap_or_else(|| out.join("cache"))))
}

fn emit(reports: &[ConvergenceReport], out: &Path, prefix: &str) -> Result<()> {
    for r in reports {
        let (csv, _) = write_report_csv(r, out, &format!("{prefix}_alpha{}", r.meta.alpha))?;
        println!("{}", csv.display());
        let failed = r.failed_cells();
        if !failed.is_empty() {
            eprintln!("warning: {} failed cell(s) in {}", failed.len(), csv.display());
        }
    }
    Ok(())
}

pub fn parse_horizon(s: &str) -> Result<Horizon> {
    let bad = || Error::invalid(format!("horizon must be t=<T> or long=<T>, got {s:?}"));
    let (kind, value) = s.split_once('=').ok_or_else(bad)?;
    let value: f64 = value.parse().map_err(|_| bad())?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(bad());
    }
    match kind {
        "t" => Ok(Horizon::FixedT(value)),
        "long" => Ok(Horizon::LongTime(value)),
        _ => Err(bad()),
    }
}

fn sweep_plan(args: &SweepArgs) -> Result<SweepPlan> {
    let scenario: ScenarioName = args.scenario.parse()?;
    let mut plan = SweepPlan::new(scenario, parse_horizon(&args.horizon)?);
    plan.alphas = args.alpha.clone();
    plan.epsilons = args.epsilon.clone();
    plan.taus = args.tau.clone();
    plan.ns = args.n.clone();
    let mut reference = if args.paper_scale {
        ReferencePolicy::full_scale()
    } else {
        ReferencePolicy::desk(scenario.dim())
    };
    if let Some(t) = args.tau_ref {
        reference.tau_ref = t;
    }
    if let Some(n) = args.n_ref {
        reference.n_ref = n;
    }
    plan.reference = reference;
    if let Some(v) = &args.variant {
        plan.variant = Variant::parse(v)?;
    }
    if args.linear {
        plan.nonlinearity = NonlinearTerm::Off;
    }
    for &a in &plan.alphas {
        crate::spectral::check_alpha(a)?;
    }
    if let Some(e) = plan.epsilons.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::invalid(format!("epsilon must be in (0,1], got {e}")));
    }
    Ok(plan)
}

fn osc_spec(args: &OscArgs) -> OscTableSpec {
    let mut spec = if args.paper_scale {
        OscTableSpec::full_scale(args.alpha)
    } else {
        OscTableSpec::desk(args.alpha)
    };
    if let Some(v) = args.lambda0 {
        spec.lambda0 = v;
    }
    if let Some(v) = args.depth {
        spec.depth = v;
    }
    if let Some(v) = args.eps_depth {
        spec.epsilon_depth = v;
    }
    if let Some(v) = args.p {
        spec.p = v;
    }
    if let Some(v) = args.n {
        spec.n = v;
    }
    if let Some(v) = args.lambda_ref {
        spec.lambda_ref = v;
    }
    spec
}

struct SnapshotWriter<'a> {
    dir: &'a Path,
    targets: Vec<(usize, f64)>,
    written: Vec<PathBuf>,
}

impl Observer for SnapshotWriter<'_> {
    fn observe(&mut self, step: usize, state: &State) -> Result<()> {
        let due: Vec<(usize, f64)> = self
            .targets
            .iter()
            .enumerate()
            .filter(|(_, (s, _))| *s == step)
            .map(|(i, &(_, t))| (i, t))
            .collect();
        if due.is_empty() {
            return Ok(());
        }
        let (u, v) = state.reconstruct_uv()?;
        let p = state.params();
        for (index, time) in due {
            for (name, quantity, field) in [("u", SnapshotQuantity::U, &u), ("v", SnapshotQuantity::V, &v)] {
                let meta = SnapshotMeta {
                    alpha: p.alpha,
                    epsilon: p.epsilon,
                    time,
                    field: quantity,
                    part: Part::Re,
                };
                let path = self.dir.join(format!("snap_{index:03}_{name}.frsg"));
                if p.variant.is_coupled() {
                    let im = self.dir.join(format!("snap_{index:03}_{name}.im.frsg"));
                    write_complex_pair(&path, &im, field, meta)?;
                    self.written.push(im);
                } else {
                    write_snapshot(&path, field, &meta)?;
                }
                self.written.push(path);
            }
        }
        Ok(())
    }
}

fn run(config_path: &Path) -> Result<()> {
    let config = parse_config(config_path)?;
    let dir = &config.outputs;
    config.echo(dir)?;
    let params = config.params()?;
    let (_, u0, u1) = make_scenario(config.scenario, Some(&config.points()))?;
    let mut state = State::new(params, &u0, &u1)?;
    let steps = config.steps()?;
    let mut times = config.snapshots.clone();
    times.push(config.horizon_time());
    let targets = times
        .iter()
        .map(|&t| Ok((step_count(t, config.tau)?, t)))
        .collect::<Result<Vec<_>>>()?;
    let start = Instant::now();
    let initial_energy = (!params.variant.is_coupled())
        .then(|| state_energy(&state))
        .transpose()?;
    let mut writer = SnapshotWriter {
        dir,
        targets,
        written: Vec::new(),
    };
    let outcome = evolve(&mut state, config.tau, steps, &mut [&mut writer]);
    let final_energy = match (&outcome, initial_energy) {
        (Ok(()), Some(_)) => Some(state_energy(&state)?),
        _ => None,
    };
    let summary = json!({
        "status": match &outcome { Ok(()) => "ok".to_string(), Err(e) => e.to_string() },
        "steps": state.step_index(),
        "time": state.time(),
        "points": config.points(),
        "energyInitial": initial_energy,
        "energyFinal": final_energy,
        "snapshots": writer.written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "wallTimeS": start.elapsed().as_secs_f64(),
    });
    let path = dir.join("summary.json");
    fs::write(&path, serde_json::to_vec_pretty(&summary)?).map_err(|e| Error::io(&path, e))?;
    outcome?;
    println!("{}", dir.display());
    Ok(())
}
