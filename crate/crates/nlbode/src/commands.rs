//! Command implementations. Each takes the resolved configuration, writes
//! its artifacts under the output directory, and returns the JSON summary
//! that the binary prints on stdout under `--json`.

use std::fmt;
use std::io;
use std::path::Path;

use nlbode_core::df::df_curve;
use nlbode_core::lfr::{sweep, LfrError, LfrSystem, SweepKinds};
use nlbode_core::lti::LtiError;
use nlbode_core::sim::{integrate, ClosedLoopModel, SimError};
use nlbode_core::srg::{lti_srg, nonlinearity_srg, InputSpace, Srg, SrgError};
use serde_json::{json, Value};

use crate::config::{AnalysisConfig, ConfigError};
use crate::output;
use crate::verify;

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing configuration: exit 2.
    Config(ConfigError),
    /// A name that does not resolve (reference id, space argument): exit 2.
    UnknownIdentifier(String),
    /// The closed loop is unstable or the integration blew up: exit 3.
    UnstableLoop(String),
    /// Filesystem trouble while writing artifacts: exit 1.
    Io(io::Error),
    /// Numerical failure inside the analysis itself: exit 1.
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownIdentifier(_) => 2,
            CliError::UnstableLoop(_) => 3,
            CliError::Io(_) | CliError::Analysis(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::UnknownIdentifier(msg) => write!(f, "{msg}"),
            CliError::UnstableLoop(msg) => write!(f, "unstable loop: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Analysis(msg) => write!(f, "analysis failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn from_lfr(e: LfrError) -> CliError {
    match e {
        LfrError::Srg(se) => from_srg(se),
        other => CliError::Analysis(other.to_string()),
    }
}

// Unstable poles in a closed-loop block mean the loop itself is unstable;
// that is the caller's modelling problem, not a numerical one.
fn from_srg(e: SrgError) -> CliError {
    match e {
        SrgError::UnstablePoles | SrgError::Lti(LtiError::UnstableClosedLoop) => {
            CliError::UnstableLoop(e.to_string())
        }
        SrgError::Lti(other) => CliError::Analysis(other.to_string()),
    }
}

fn from_sim(e: SimError) -> CliError {
    match e {
        SimError::Diverged { .. } => CliError::UnstableLoop(e.to_string()),
        other => CliError::Analysis(other.to_string()),
    }
}

fn lti_magnitudes(sys: &LfrSystem, grid: &[f64]) -> Result<Vec<f64>, CliError> {
    grid.iter()
        .map(|&w| {
            sys.blocks
                .p_out_in
                .eval_jw(w)
                .map(|z| z.norm())
                .map_err(|e| CliError::Analysis(format!("{} at {w} rad/s: {e}", sys.label)))
        })
        .collect()
}

/// Full gain-bound study: both loop maps swept over the grid, with the LTI
/// magnitude and describing-function columns alongside for comparison. The
/// subharmonic column is skipped for the loop transfer; its bound runs
/// through the unlimited-bandwidth loop head and is unbounded everywhere,
/// so the column prints as inf.
pub fn cmd_bode(config: &AnalysisConfig, out_dir: &Path) -> Result<Value, CliError> {
    let g = config.plant_tf();
    let k = config.controller_tf();
    let phi = config.phi();
    let opts = config.srg_options();
    let grid = config.frequency_grid();

    let s_sys = LfrSystem::sensitivity(&g, &k, phi).map_err(from_lfr)?;
    let l_sys = LfrSystem::looptransfer(&g, &k, phi).map_err(from_lfr)?;

    eprintln!(
        "sweeping {} frequencies at resolution {}",
        grid.len(),
        config.resolution
    );
    let curve_s = sweep(&s_sys, &grid, SweepKinds::all(), &opts).map_err(from_lfr)?;
    let curve_l = sweep(&l_sys, &grid, SweepKinds::without_subharmonic(), &opts).map_err(from_lfr)?;
    let s_mag = lti_magnitudes(&s_sys, &grid)?;
    let l_mag = lti_magnitudes(&l_sys, &grid)?;
    let df = df_curve(&s_sys, &grid, &config.amplitude_grid())
        .map_err(|e| CliError::Analysis(e.to_string()))?;

    output::write_file(out_dir, "bode_s.csv", &output::gain_curve_csv(&curve_s, &s_mag, Some(&df)))?;
    output::write_file(out_dir, "bode_l.csv", &output::gain_curve_csv(&curve_l, &l_mag, None))?;
    output::write_file(
        out_dir,
        "bode_s.json",
        &output::to_json_string(&output::gain_curve_json(&curve_s, &s_mag, Some(&df))),
    )?;
    output::write_file(
        out_dir,
        "bode_l.json",
        &output::to_json_string(&output::gain_curve_json(&curve_l, &l_mag, None)),
    )?;

    let summary = json!({
        "gamma_full_s": output::json_gain(curve_s.gamma_full.unwrap_or(f64::NAN)),
        "gamma_full_l": output::json_gain(curve_l.gamma_full.unwrap_or(f64::NAN)),
        "wb": output::json_opt(curve_s.bandwidth_closed),
        "wc": output::json_opt(curve_l.bandwidth_open),
        "grid_points": grid.len(),
        "resolution": config.resolution,
        "files": ["bode_s.csv", "bode_s.json", "bode_l.csv", "bode_l.json", "summary.json"],
    });
    output::write_file(out_dir, "summary.json", &output::to_json_string(&summary))?;
    Ok(summary)
}

/// Which set to dump: one of the eight loop blocks, the nonlinearity, or
/// its Mobius inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SrgTarget {
    SZw,
    SOutW,
    SZIn,
    SOutIn,
    LZw,
    LOutW,
    LZIn,
    LOutIn,
    Phi,
    PhiInv,
}

impl SrgTarget {
    fn slug(self) -> &'static str {
        match self {
            SrgTarget::SZw => "s_zw",
            SrgTarget::SOutW => "s_out_w",
            SrgTarget::SZIn => "s_z_in",
            SrgTarget::SOutIn => "s_out_in",
            SrgTarget::LZw => "l_zw",
            SrgTarget::LOutW => "l_out_w",
            SrgTarget::LZIn => "l_z_in",
            SrgTarget::LOutIn => "l_out_in",
            SrgTarget::Phi => "phi",
            SrgTarget::PhiInv => "phi_inv",
        }
    }

    fn is_static(self) -> bool {
        matches!(self, SrgTarget::Phi | SrgTarget::PhiInv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SpaceArg {
    Sinusoidal,
    Harmonic,
    Subharmonic,
    Full,
}

impl SpaceArg {
    fn slug(self) -> &'static str {
        match self {
            SpaceArg::Sinusoidal => "sinusoidal",
            SpaceArg::Harmonic => "harmonic",
            SpaceArg::Subharmonic => "subharmonic",
            SpaceArg::Full => "full",
        }
    }

    fn input_space(self, omega: Option<f64>) -> Result<InputSpace, CliError> {
        if self == SpaceArg::Full {
            return Ok(InputSpace::FullL2);
        }
        let w = omega.ok_or_else(|| {
            CliError::Config(ConfigError::Invalid(format!(
                "space '{}' needs a base frequency; pass omega as the last argument",
                self.slug()
            )))
        })?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(CliError::Config(ConfigError::Invalid(format!(
                "omega must be positive and finite, got {w}"
            ))));
        }
        Ok(match self {
            SpaceArg::Sinusoidal => InputSpace::Sinusoidal(w),
            SpaceArg::Harmonic => InputSpace::Harmonic(w),
            SpaceArg::Subharmonic => InputSpace::Subharmonic(w),
            SpaceArg::Full => unreachable!(),
        })
    }
}

/// Dump one SRG boundary as CSV. The nonlinearity targets ignore the space
/// argument; they are static sets.
pub fn cmd_srg(
    config: &AnalysisConfig,
    target: SrgTarget,
    space: SpaceArg,
    omega: Option<f64>,
    out_dir: &Path,
) -> Result<Value, CliError> {
    let opts = config.srg_options();
    let res = opts.resolution;
    let phi = config.phi();

    let (srg, slug) = if target.is_static() {
        let region = nonlinearity_srg(&phi, res);
        let srg = match target {
            SrgTarget::Phi => Srg::Region(region),
            _ => Srg::Region(region.mobius_invert(res).map_err(|e| {
                CliError::Analysis(format!(
                    "sector inverse is not a representable region: {e}"
                ))
            })?),
        };
        (srg, target.slug().to_string())
    } else {
        let input = space.input_space(omega)?;
        let g = config.plant_tf();
        let k = config.controller_tf();
        let sys = match target {
            SrgTarget::SZw | SrgTarget::SOutW | SrgTarget::SZIn | SrgTarget::SOutIn => {
                LfrSystem::sensitivity(&g, &k, phi).map_err(from_lfr)?
            }
            _ => LfrSystem::looptransfer(&g, &k, phi).map_err(from_lfr)?,
        };
        let tf = match target {
            SrgTarget::SZw | SrgTarget::LZw => &sys.blocks.p_zw,
            SrgTarget::SOutW | SrgTarget::LOutW => &sys.blocks.p_out_w,
            SrgTarget::SZIn | SrgTarget::LZIn => &sys.blocks.p_z_in,
            SrgTarget::SOutIn | SrgTarget::LOutIn => &sys.blocks.p_out_in,
            SrgTarget::Phi | SrgTarget::PhiInv => unreachable!(),
        };
        let srg = lti_srg(tf, input, &opts).map_err(from_srg)?;
        let mut slug = format!("{}_{}", target.slug(), space.slug());
        if let Some(w) = omega.filter(|_| space != SpaceArg::Full) {
            slug.push_str(&format!("_w{w}"));
        }
        (srg, slug)
    };

    let name = format!("srg_{slug}.csv");
    output::write_file(out_dir, &name, &output::srg_csv(&srg))?;
    let kind = srg.region().map_or("unbounded", |r| r.kind_name());
    Ok(json!({
        "file": name,
        "kind": kind,
        "radius": output::json_gain(srg.radius()),
    }))
}

/// Integrate the closed loop for one configured reference and dump the run.
pub fn cmd_simulate(config: &AnalysisConfig, id: &str, out_dir: &Path) -> Result<Value, CliError> {
    let spec = config.sim.references.get(id).ok_or_else(|| {
        let known: Vec<&str> = config.sim.references.keys().map(String::as_str).collect();
        CliError::UnknownIdentifier(format!(
            "unknown reference '{id}'; configured references: {}",
            known.join(", ")
        ))
    })?;
    let reference = spec.signal();
    let model = ClosedLoopModel::new(
        &config.plant_tf(),
        &config.controller_tf(),
        config.delta(),
        reference.clone(),
    )
    .map_err(|e| match e {
        LtiError::Improper => CliError::Config(ConfigError::Invalid(
            "plant must be strictly proper for time-domain simulation".to_string(),
        )),
        other => CliError::Analysis(other.to_string()),
    })?;
    eprintln!(
        "integrating reference '{id}' for {} s at dt = {}",
        config.sim.t_end, config.sim.dt
    );
    let run = integrate(&model, config.sim.t_end, config.sim.dt).map_err(from_sim)?;

    let name = format!("sim_{id}.csv");
    output::write_file(out_dir, &name, &output::sim_csv(&run, &reference))?;
    Ok(json!({
        "reference": id,
        "dt": config.sim.dt,
        "t_end": config.sim.t_end,
        "rms_tail": run.rms_tail,
        "period_detected": output::json_opt(run.period_detected),
        "steady_rel_diff": run.steady_rel_diff,
        "file": name,
    }))
}

/// Run the whole acceptance matrix and write the report. One line per
/// criterion goes to stderr; the caller exits nonzero unless all pass.
pub fn cmd_verify(config: &AnalysisConfig, seed: u64, out_dir: &Path) -> Result<Value, CliError> {
    let reports = verify::run_acceptance(config, seed).map_err(from_lfr)?;
    for r in &reports {
        eprintln!(
            "criterion {:>2} {:<52} {}",
            r.id,
            r.name,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let report = verify::report_json(&reports);
    output::write_file(out_dir, "verify_report.json", &output::to_json_string(&report))?;
    Ok(report)
}
