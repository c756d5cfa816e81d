//! Command-line front end. Six subcommands cover the gain, squeezing, and
//! distance sweeps, the region map, the scalar threshold searches, and
//! the closed-form-versus-simulator self check. Sweeps emit CSV with a
//! manifest comment block; thresholds emit JSON; identical invocations
//! produce identical bytes.

mod emit;
mod resolve;

pub use emit::{RunManifest, ThresholdEntry, ThresholdResults};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::ChannelParams;
use crate::finders::{
    find_crossover, find_distance_threshold, find_squeezing_threshold, region_map,
    DistanceThreshold, CROSSOVER_TOL, DISTANCE_TOL, SQUEEZING_TOL,
};
use crate::gauss::{SqueezedResource, SteeringDirection};
use crate::swap::{swap_steering, swap_steering_at_gain, SwapConfig};
use crate::verify::{run_equivalence, EQUIVALENCE_TOL};
use resolve::{
    linspace, num, parse_scheme, parse_w_list, preset_defaults, scheme_label, usage, ParamSet,
    Resolver, BASE_DEFAULTS,
};

/// Command-level failure; rendered to stderr with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

#[derive(Parser)]
#[command(
    name = "steerswap",
    version,
    about = "Gaussian steering swap simulator: sweeps, region maps, threshold searches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PhysicsArgs {
    /// Resource squeezing parameter (both source pairs)
    #[arg(long)]
    r: Option<f64>,
    /// Joint-measurement detection efficiency, in (0, 1]
    #[arg(long)]
    eta: Option<f64>,
    /// Transmittance of channel 1 (mode B), in (0, 1]
    #[arg(long)]
    t1: Option<f64>,
    /// Transmittance of channel 2 (mode C), in (0, 1]
    #[arg(long)]
    t2: Option<f64>,
    /// Excess noise of channel 1, shot-noise units
    #[arg(long)]
    w1: Option<f64>,
    /// Excess noise of channel 2, shot-noise units
    #[arg(long)]
    w2: Option<f64>,
    /// Fiber attenuation in dB/km for distance-based commands
    #[arg(long)]
    alpha: Option<f64>,
    /// Feedforward gain policy: unit, opt-ad, opt-da, or fixed:<g>
    #[arg(long = "gain-mode")]
    gain_mode: Option<String>,
    /// Flat key = value file mirroring the long flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Steerabilities of the swapped pair across a feedforward gain range
    SweepGain {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Lower end of the gain range
        #[arg(long = "g-min")]
        g_min: Option<f64>,
        /// Upper end of the gain range
        #[arg(long = "g-max")]
        g_max: Option<f64>,
        /// Number of grid points (>= 2)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Steerabilities across a squeezing range, with the resource curve
    SweepSqueezing {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Lower end of the squeezing range
        #[arg(long = "r-min")]
        r_min: Option<f64>,
        /// Upper end of the squeezing range
        #[arg(long = "r-max")]
        r_max: Option<f64>,
        /// Number of grid points (>= 2)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Steering-region classification over the two channel lengths
    RegionMap {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Largest channel length on both axes, km
        #[arg(long = "l-max")]
        l_max: Option<f64>,
        /// Grid points per axis (>= 2)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Steerabilities versus channel length for a list of excess noises
    SweepDistance {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Channel layout: single (channel 2 lossless) or symmetric
        #[arg(long)]
        scheme: Option<String>,
        /// Comma-separated excess noise values, one row group each
        #[arg(long = "w-list")]
        w_list: Option<String>,
        /// Largest channel length, km
        #[arg(long = "l-max")]
        l_max: Option<f64>,
        /// Number of grid points (>= 2)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Squeezing thresholds, maximum distances, and the crossover point
    Thresholds {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Named parameter bundle: fig2b-unit, fig2b-opt, fig3a, fig3b
        #[arg(long)]
        preset: Option<String>,
    },
    /// Check the closed-form output against the independent simulator
    Verify {
        /// RNG seed for the randomized configurations
        #[arg(long)]
        seed: Option<u64>,
        /// Number of randomized configurations
        #[arg(long)]
        cases: Option<usize>,
        /// Perturb the closed-form path to prove the check discriminates
        #[arg(long = "inject-fault")]
        inject_fault: Option<f64>,
        /// Flat key = value file mirroring the long flags; flags win
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Parses `args` and runs the selected command, returning the process
/// exit code: 0 on success, 1 on a verification mismatch, 2 on argument
/// or configuration errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::SweepGain { physics, g_min, g_max, steps } => {
            cmd_sweep_gain(physics, g_min, g_max, steps)
        }
        Command::SweepSqueezing { physics, r_min, r_max, steps } => {
            cmd_sweep_squeezing(physics, r_min, r_max, steps)
        }
        Command::RegionMap { physics, l_max, steps } => cmd_region_map(physics, l_max, steps),
        Command::SweepDistance { physics, scheme, w_list, l_max, steps } => {
            cmd_sweep_distance(physics, scheme, w_list, l_max, steps)
        }
        Command::Thresholds { physics, preset } => cmd_thresholds(physics, preset),
        Command::Verify { seed, cases, inject_fault, config } => {
            cmd_verify(seed, cases, inject_fault, config)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_steps(steps: usize) -> Result<(), CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!("steps must be at least 2, got {steps}")));
    }
    Ok(())
}

fn check_range(name: &str, lo: f64, hi: f64, min_lo: f64) -> Result<(), CliError> {
    if !lo.is_finite() || !hi.is_finite() || lo < min_lo || lo >= hi {
        return Err(CliError::Usage(format!("invalid {name} range [{lo}, {hi}]")));
    }
    Ok(())
}

fn cmd_sweep_gain(
    physics: PhysicsArgs,
    g_min: Option<f64>,
    g_max: Option<f64>,
    steps: Option<usize>,
) -> Result<i32, CliError> {
    let resolver = Resolver::load(physics.config.as_deref())?;
    let params = ParamSet::resolve(&physics, &resolver, &BASE_DEFAULTS)?;
    let g_min = resolver.f64("g-min", g_min, 0.0)?;
    let g_max = resolver.f64("g-max", g_max, 2.0)?;
    let steps = resolver.usize("steps", steps, 201)?;
    check_range("gain", g_min, g_max, 0.0)?;
    check_steps(steps)?;

    let cfg = params.swap_config()?;
    let mut rows = Vec::with_capacity(steps);
    for g in linspace(g_min, g_max, steps) {
        let sr = swap_steering_at_gain(&cfg, g).map_err(usage)?;
        rows.push(format!("{},{},{}", num(g), num(sr.g_ab), num(sr.g_ba)));
    }

    let mut entries = params.manifest_entries();
    entries.push(("g-min".to_string(), num(g_min)));
    entries.push(("g-max".to_string(), num(g_max)));
    entries.push(("steps".to_string(), steps.to_string()));
    let doc = emit::csv_document("sweep-gain", entries, "g,G_AtoD,G_DtoA", &rows);
    write_output(physics.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_sweep_squeezing(
    physics: PhysicsArgs,
    r_min: Option<f64>,
    r_max: Option<f64>,
    steps: Option<usize>,
) -> Result<i32, CliError> {
    let resolver = Resolver::load(physics.config.as_deref())?;
    let params = ParamSet::resolve(&physics, &resolver, &BASE_DEFAULTS)?;
    let r_min = resolver.f64("r-min", r_min, 0.0)?;
    let r_max = resolver.f64("r-max", r_max, 2.0)?;
    let steps = resolver.usize("steps", steps, 201)?;
    check_range("squeezing", r_min, r_max, 0.0)?;
    check_steps(steps)?;

    let template = params.swap_config()?;
    let mut rows = Vec::with_capacity(steps);
    for r in linspace(r_min, r_max, steps) {
        let resource = SqueezedResource::from_r(r).map_err(usage)?;
        // an unsqueezed resource yields no steering at any gain, and the
        // optimal D'->A gain is undefined there; short-circuit the row
        let (g_ab, g_ba) = if r == 0.0 {
            (0.0, 0.0)
        } else {
            let sr = swap_steering(&SwapConfig { resource, ..template }).map_err(usage)?;
            (sr.g_ab, sr.g_ba)
        };
        let g_resource = resource.v().ln();
        rows.push(format!("{},{},{},{}", num(r), num(g_ab), num(g_ba), num(g_resource)));
    }

    let mut entries = params.manifest_entries();
    entries.push(("r-min".to_string(), num(r_min)));
    entries.push(("r-max".to_string(), num(r_max)));
    entries.push(("steps".to_string(), steps.to_string()));
    let doc = emit::csv_document("sweep-squeezing", entries, "r,G_AtoD,G_DtoA,G_resource", &rows);
    write_output(physics.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_region_map(
    physics: PhysicsArgs,
    l_max: Option<f64>,
    steps: Option<usize>,
) -> Result<i32, CliError> {
    let resolver = Resolver::load(physics.config.as_deref())?;
    let params = ParamSet::resolve(&physics, &resolver, &BASE_DEFAULTS)?;
    let l_max = resolver.f64("l-max", l_max, 20.0)?;
    let steps = resolver.usize("steps", steps, 81)?;
    check_range("length", 0.0, l_max, 0.0)?;
    check_steps(steps)?;

    let template = params.swap_config()?;
    let grid = linspace(0.0, l_max, steps);
    let map = region_map(&template, params.alpha, &grid, &grid).map_err(usage)?;
    let mut rows = Vec::with_capacity(steps * steps);
    for (i, &l1) in grid.iter().enumerate() {
        for (j, &l2) in grid.iter().enumerate() {
            rows.push(format!("{},{},{}", num(l1), num(l2), map[i][j].label()));
        }
    }

    let mut entries = params.manifest_entries();
    entries.push(("l-max".to_string(), num(l_max)));
    entries.push(("steps".to_string(), steps.to_string()));
    let doc = emit::csv_document("region-map", entries, "l1_km,l2_km,region", &rows);
    write_output(physics.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_sweep_distance(
    physics: PhysicsArgs,
    scheme: Option<String>,
    w_list: Option<String>,
    l_max: Option<f64>,
    steps: Option<usize>,
) -> Result<i32, CliError> {
    let resolver = Resolver::load(physics.config.as_deref())?;
    let params = ParamSet::resolve(&physics, &resolver, &BASE_DEFAULTS)?;
    let scheme = parse_scheme(&resolver.string("scheme", scheme, "single"))?;
    let w_list = parse_w_list(&resolver.string("w-list", w_list, "0,0.2,5"))?;
    let l_max = resolver.f64("l-max", l_max, 60.0)?;
    let steps = resolver.usize("steps", steps, 241)?;
    check_range("length", 0.0, l_max, 0.0)?;
    check_steps(steps)?;

    let template = params.swap_config()?;
    let grid = linspace(0.0, l_max, steps);
    let mut rows = Vec::with_capacity(w_list.len() * steps);
    for &w in &w_list {
        for &l in &grid {
            let (l1, l2) = match scheme {
                crate::finders::Scheme::SingleChannel => (l, 0.0),
                crate::finders::Scheme::SymmetricDual => (l, l),
            };
            let channel1 = ChannelParams::from_distance(l1, params.alpha, w).map_err(usage)?;
            let channel2 = ChannelParams::from_distance(l2, params.alpha, w).map_err(usage)?;
            let cfg = SwapConfig { channel1, channel2, ..template };
            let sr = swap_steering(&cfg).map_err(usage)?;
            rows.push(format!("{},{},{},{}", num(l), num(w), num(sr.g_ab), num(sr.g_ba)));
        }
    }

    let mut entries = params.manifest_entries();
    entries.push(("scheme".to_string(), scheme_label(scheme).to_string()));
    entries.push((
        "w-list".to_string(),
        w_list.iter().map(|w| num(*w)).collect::<Vec<_>>().join(","),
    ));
    entries.push(("l-max".to_string(), num(l_max)));
    entries.push(("steps".to_string(), steps.to_string()));
    let doc = emit::csv_document("sweep-distance", entries, "l_km,w,G_AtoD,G_DtoA", &rows);
    write_output(physics.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_thresholds(physics: PhysicsArgs, preset: Option<String>) -> Result<i32, CliError> {
    let resolver = Resolver::load(physics.config.as_deref())?;
    let preset = resolver.string_opt("preset", preset);
    let defaults = match preset.as_deref() {
        Some(name) => preset_defaults(name)?,
        None => BASE_DEFAULTS,
    };
    let params = ParamSet::resolve(&physics, &resolver, &defaults)?;
    let template = params.swap_config()?;

    let r_ad = find_squeezing_threshold(&template, SteeringDirection::AtoB).map_err(usage)?;
    let r_da = find_squeezing_threshold(&template, SteeringDirection::BtoA).map_err(usage)?;
    let scheme = crate::finders::Scheme::SingleChannel;
    let l_ad = find_distance_threshold(&template, params.alpha, SteeringDirection::AtoB, scheme)
        .map_err(usage)?;
    let l_da = find_distance_threshold(&template, params.alpha, SteeringDirection::BtoA, scheme)
        .map_err(usage)?;
    let crossover = find_crossover(&template, params.alpha).map_err(usage)?;

    let distance_value = |t: DistanceThreshold| match t {
        DistanceThreshold::DeadAtZero => Some(0.0),
        DistanceThreshold::Threshold(km) => Some(km),
        DistanceThreshold::BeyondBracket => None,
    };
    let results = ThresholdResults {
        r_threshold_a_to_d: ThresholdEntry { value: r_ad, tolerance: SQUEEZING_TOL },
        r_threshold_d_to_a: ThresholdEntry { value: r_da, tolerance: SQUEEZING_TOL },
        l_max_a_to_d_km: ThresholdEntry { value: distance_value(l_ad), tolerance: DISTANCE_TOL },
        l_max_d_to_a_km: ThresholdEntry { value: distance_value(l_da), tolerance: DISTANCE_TOL },
        crossover_l1_km: ThresholdEntry {
            value: crossover.map(|c| c.0),
            tolerance: CROSSOVER_TOL,
        },
        crossover_l2_km: ThresholdEntry {
            value: crossover.map(|c| c.1),
            tolerance: CROSSOVER_TOL,
        },
    };

    let mut entries = params.manifest_entries();
    if let Some(name) = &preset {
        entries.push(("preset".to_string(), name.clone()));
    }
    let doc = emit::thresholds_document(entries, &results);
    write_output(physics.out.as_deref(), &doc)?;
    Ok(0)
}

fn cmd_verify(
    seed: Option<u64>,
    cases: Option<usize>,
    inject_fault: Option<f64>,
    config: Option<PathBuf>,
) -> Result<i32, CliError> {
    let resolver = Resolver::load(config.as_deref())?;
    let seed = resolver.u64("seed", seed, 42)?;
    let cases = resolver.usize("cases", cases, 1000)?;
    let fault = inject_fault.unwrap_or(0.0);
    if !fault.is_finite() {
        return Err(CliError::Usage(format!("injected fault must be finite, got {fault}")));
    }

    let report = run_equivalence(seed, cases, fault);
    match report.failure {
        None => {
            println!(
                "verify: PASS ({} cases, max |closed - simulated| = {:e}, bound {:e})",
                report.cases, report.max_delta, EQUIVALENCE_TOL
            );
            Ok(0)
        }
        Some(case) => {
            println!("verify: FAIL at case {} (seed {seed})", case.index);
            println!(
                "  r = {}, t1 = {}, w1 = {}, t2 = {}, w2 = {}, eta = {}, gain = {}",
                num(case.r),
                num(case.t1),
                num(case.w1),
                num(case.t2),
                num(case.w2),
                num(case.eta),
                num(case.gain)
            );
            println!(
                "  max element delta = {:e} exceeds bound {:e}",
                case.delta, EQUIVALENCE_TOL
            );
            Ok(1)
        }
    }
}
