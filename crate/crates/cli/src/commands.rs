use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::Serialize;

use pulsebloch::check::{oracle_check, OracleGrid, OracleReport, ORACLE_TOLERANCE};
use pulsebloch::qfi::DEFAULT_FD_STEP;
use pulsebloch::{
    evolution_matrix, finite_difference_qfi, initial_bloch, integrate_samples_field, sweep,
    BlochVector, CoherentStateAngles, EvolutionMode, Grid, Parameter, PulseConfig, SweepSpec,
};

use crate::args::{Figure, Format, Options, PulseKind, Solver};
use crate::error::{CliError, Result};
use crate::output::{self, num, Metadata, SweepRow, SWEEP_HEADER};

const DEFAULT_THETA_GRID: (f64, f64, usize) = (0.0, PI, 51);
const DEFAULT_PHI_GRID: (f64, f64, usize) = (0.0, TAU, 101);
const DEFAULT_DELTA_GRID: (f64, f64, usize) = (0.0, 1.0, 51);
const DEFAULT_SAMPLES: usize = 101;
const DEFAULT_FIGURE_TIME: f64 = PI;
const DEFAULT_ORACLE_TAU: f64 = 20.0;
const DEFAULT_ORACLE_STEP: f64 = 1e-3;

fn grid(t: (f64, f64, usize)) -> Grid {
    Grid::new(t.0, t.1, t.2).expect("default grids are valid")
}

fn angles(opts: &Options) -> Result<CoherentStateAngles> {
    Ok(CoherentStateAngles::new(
        opts.require_angle(Parameter::Theta)?,
        opts.require_angle(Parameter::Phi)?,
    )?)
}

fn pulse_metadata(meta: &mut Metadata, pulse: &PulseConfig) {
    meta.push("pulse", pulse.name());
    match *pulse {
        PulseConfig::Rectangular { delta } => meta.push("delta", num(delta)),
        PulseConfig::Exponential { omega0_over_gamma } => {
            meta.push("omega-ratio", num(omega0_over_gamma))
        }
        PulseConfig::SinSquared { omega_prime, n } => {
            meta.push("omega-prime", num(omega_prime)).push("n", n)
        }
    };
}

#[derive(Debug, Serialize)]
struct TrajectoryRow {
    tau: f64,
    sx: f64,
    sy: f64,
    sz: f64,
    norm: f64,
}

pub fn evolve(opts: &Options) -> Result<()> {
    let pulse = opts.pulse_config()?;
    let tau_end = opts.require_tau()?;
    if tau_end < 0.0 {
        return Err(pulsebloch::Error::InvalidTime(tau_end).into());
    }
    let s0 = initial_bloch(angles(opts)?);
    let samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    let times = if samples == 1 {
        vec![tau_end]
    } else {
        let mut v = Grid::new(0.0, tau_end, samples)?.values();
        v[samples - 1] = tau_end;
        v
    };
    let solver = opts.solver.unwrap_or_default();
    let delta = opts.delta.map_or(pulse.delta(), |r| r.0);
    let mode = opts.mode();

    let states: Vec<BlochVector> = match solver {
        Solver::Closed => {
            if pulse.is_resonant() && delta != 0.0 {
                return Err(CliError::Usage(format!(
                    "--pulse {} has no closed form with detuning; use --solver rk4",
                    pulse.name()
                )));
            }
            times
                .iter()
                .map(|&t| Ok(evolution_matrix(&pulse, t, mode)?.apply(&s0)))
                .collect::<Result<_>>()?
        }
        Solver::Rk4 => {
            let step = opts.step.map_or(DEFAULT_ORACLE_STEP, |r| r.0);
            integrate_samples_field(&s0, |t| (pulse.drive(t).0, delta), &times, step)?
        }
    };

    let mut meta = Metadata::new("evolve");
    pulse_metadata(&mut meta, &pulse);
    if pulse.is_resonant() {
        meta.push("delta", num(delta));
    }
    meta.push("theta", num(s_angle(opts.theta)))
        .push("phi", num(s_angle(opts.phi)))
        .push("tau", num(tau_end))
        .push("samples", samples)
        .push(
            "solver",
            match solver {
                Solver::Closed => "closed",
                Solver::Rk4 => "rk4",
            },
        );
    if solver == Solver::Closed {
        meta.push("mode", mode);
    }

    let rows: Vec<TrajectoryRow> = times
        .iter()
        .zip(&states)
        .map(|(&tau, s)| TrajectoryRow {
            tau,
            sx: s.sx(),
            sy: s.sy(),
            sz: s.sz(),
            norm: s.norm(),
        })
        .collect();
    let text = match opts.format() {
        Format::Csv => output::csv(
            &meta,
            "tau,sx,sy,sz,norm",
            &rows
                .iter()
                .map(|r| [r.tau, r.sx, r.sy, r.sz, r.norm].map(num).join(","))
                .collect::<Vec<_>>(),
        ),
        Format::Json => output::json(&meta, "rows", &rows),
    };
    output::emit(opts.out.as_deref(), &text)
}

fn s_angle(r: Option<crate::args::Real>) -> f64 {
    r.map_or(f64::NAN, |r| r.0)
}

#[derive(Debug, Serialize)]
struct QfiRow {
    #[serde(flatten)]
    base: SweepRow,
    qfi_fd: Option<f64>,
    fd_step: f64,
}

pub fn qfi(opts: &Options) -> Result<()> {
    let pulse = opts.pulse_config()?;
    let tau = opts.require_tau()?;
    let a = angles(opts)?;
    let which = opts.parameter();
    let mode = opts.mode();
    let h = opts.fd_step.map_or(DEFAULT_FD_STEP, |r| r.0);

    let spec = SweepSpec {
        pulse,
        parameter: which,
        theta_grid: Grid::point(a.theta()),
        phi_grid: Grid::point(a.phi()),
        delta_grid: Grid::point(pulse.delta()),
        tau,
        mode,
    };
    let record = sweep(&spec)?.remove(0);
    let fd = match finite_difference_qfi(&pulse, a, which, tau, mode, h) {
        Ok(q) => Some(q.value),
        Err(pulsebloch::Error::Unphysical(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut meta = Metadata::new("qfi");
    pulse_metadata(&mut meta, &pulse);
    meta.push("mode", mode)
        .push("tau", num(tau))
        .push("fd-step", num(h));

    let row = QfiRow {
        base: SweepRow::from(&record),
        qfi_fd: fd,
        fd_step: h,
    };
    let text = match opts.format() {
        Format::Csv => output::csv(
            &meta,
            &format!("{SWEEP_HEADER},qfi_fd"),
            &[format!(
                "{},{}",
                output::sweep_row(&record),
                num(fd.unwrap_or(f64::NAN))
            )],
        ),
        Format::Json => output::json(&meta, "record", &row),
    };
    output::emit(opts.out.as_deref(), &text)
}

pub fn sweep_cmd(opts: &Options) -> Result<()> {
    let pulse = opts.pulse_config()?;
    let tau = opts.require_tau()?;
    let axis = |g: Option<crate::args::GridArg>, point: Option<crate::args::Real>, default| {
        g.map(|g| g.0)
            .or(point.map(|p| Grid::point(p.0)))
            .unwrap_or_else(|| grid(default))
    };
    let delta_grid = if pulse.is_resonant() {
        opts.grid_delta.map(|g| g.0).unwrap_or(Grid::point(0.0))
    } else {
        axis(opts.grid_delta, opts.delta, DEFAULT_DELTA_GRID)
    };
    let spec = SweepSpec {
        pulse,
        parameter: opts.parameter(),
        theta_grid: axis(opts.grid_theta, opts.theta, DEFAULT_THETA_GRID),
        phi_grid: axis(opts.grid_phi, opts.phi, DEFAULT_PHI_GRID),
        delta_grid,
        tau,
        mode: opts.mode(),
    };
    let records = sweep(&spec)?;

    let mut meta = Metadata::new("sweep");
    pulse_metadata(&mut meta, &pulse);
    meta.push("param", spec.parameter)
        .push("mode", spec.mode)
        .push("tau", num(tau))
        .push("grid-theta", fmt_grid(&spec.theta_grid))
        .push("grid-phi", fmt_grid(&spec.phi_grid))
        .push("grid-delta", fmt_grid(&spec.delta_grid))
        .push("order", "row-major: theta outer, phi middle, delta inner")
        .push(
            "branch",
            "per row: pure | mixed | unphysical (norm > 1, qfi = NaN)",
        );
    write_sweep(opts, &meta, records.iter().collect())
}

fn fmt_grid(g: &Grid) -> String {
    format!("{},{},{}", num(g.min), num(g.max), g.count)
}

fn write_sweep(
    opts: &Options,
    meta: &Metadata,
    records: Vec<&pulsebloch::SweepRecord>,
) -> Result<()> {
    let text = match opts.format() {
        Format::Csv => output::csv(
            meta,
            SWEEP_HEADER,
            &records
                .iter()
                .map(|r| output::sweep_row(r))
                .collect::<Vec<_>>(),
        ),
        Format::Json => output::json(
            meta,
            "records",
            &records
                .iter()
                .map(|r| SweepRow::from(*r))
                .collect::<Vec<_>>(),
        ),
    };
    output::emit(opts.out.as_deref(), &text)
}

/// One fixed-parameter panel of a figure.
struct Panel {
    omega_prime: f64,
    theta: Option<f64>,
    phi: Option<f64>,
}

struct FigurePreset {
    parameter: Parameter,
    panels: Vec<Panel>,
}

fn preset(figure: Figure) -> FigurePreset {
    let theta_panels = |omegas: &[f64], phis: &[f64]| {
        omegas
            .iter()
            .flat_map(|&w| {
                phis.iter().map(move |&p| Panel {
                    omega_prime: w,
                    theta: None,
                    phi: Some(p),
                })
            })
            .collect()
    };
    let phi_panels = |theta: f64| {
        [0.3, 0.6, 0.9]
            .iter()
            .map(|&w| Panel {
                omega_prime: w,
                theta: Some(theta),
                phi: None,
            })
            .collect()
    };
    match figure {
        Figure::Fig1 => FigurePreset {
            parameter: Parameter::Theta,
            panels: theta_panels(&[0.3, 0.9], &[PI]),
        },
        Figure::Fig2 => FigurePreset {
            parameter: Parameter::Theta,
            panels: theta_panels(&[0.5], &[FRAC_PI_4, FRAC_PI_2]),
        },
        Figure::Fig3 => FigurePreset {
            parameter: Parameter::Phi,
            panels: phi_panels(FRAC_PI_4),
        },
        Figure::Fig4 => FigurePreset {
            parameter: Parameter::Phi,
            panels: phi_panels(FRAC_PI_2),
        },
    }
}

pub fn reproduce(figure: Figure, opts: &Options) -> Result<()> {
    if opts.pulse.is_some_and(|p| p != PulseKind::Rect) {
        return Err(CliError::Usage(
            "reproduce always uses the rectangular pulse".into(),
        ));
    }
    let mut preset = preset(figure);
    if let Some(w) = opts.omega_prime {
        if w.0 <= 0.0 {
            return Err(CliError::Usage("--omega-prime must be positive".into()));
        }
        for p in &mut preset.panels {
            p.omega_prime = w.0;
        }
        preset
            .panels
            .dedup_by(|a, b| a.theta == b.theta && a.phi == b.phi);
    }
    let time = opts.tau.map_or(DEFAULT_FIGURE_TIME, |r| r.0);
    if time < 0.0 {
        return Err(pulsebloch::Error::InvalidTime(time).into());
    }
    let theta_grid = opts
        .grid_theta
        .map_or_else(|| grid(DEFAULT_THETA_GRID), |g| g.0);
    let phi_grid = opts
        .grid_phi
        .map_or_else(|| grid(DEFAULT_PHI_GRID), |g| g.0);
    let delta_grid = opts
        .grid_delta
        .map_or_else(|| grid(DEFAULT_DELTA_GRID), |g| g.0);

    let figure_name = format!("{figure:?}").to_lowercase();
    let mut meta = Metadata::new(&format!("reproduce {figure_name}"));
    meta.push("pulse", "rect")
        .push("param", preset.parameter)
        .push(
            "modes",
            "exact,paper (one row per mode at every grid point)",
        )
        .push("time", num(time))
        .push(
            "assumption",
            "evaluation time omega_q*t is not given with the figures; default pi",
        )
        .push(
            "assumption",
            "rectangular scaled time tau = Omega0*t = omega_prime * time",
        )
        .push("grid-delta", fmt_grid(&delta_grid))
        .push(
            "branch",
            "per row: pure | mixed | unphysical (norm > 1, qfi = NaN)",
        );

    let mut records = Vec::new();
    for panel in &preset.panels {
        let tau = panel.omega_prime * time;
        let (tg, pg) = match (panel.theta, panel.phi) {
            (Some(t), _) => (Grid::point(t), phi_grid),
            (_, Some(p)) => (theta_grid, Grid::point(p)),
            _ => unreachable!("every panel fixes one angle"),
        };
        meta.push(
            "panel",
            format!(
                "omega_prime={} tau={} theta={} phi={}",
                num(panel.omega_prime),
                num(tau),
                fmt_grid(&tg),
                fmt_grid(&pg)
            ),
        );
        let spec = |mode| SweepSpec {
            pulse: PulseConfig::Rectangular { delta: 0.0 },
            parameter: preset.parameter,
            theta_grid: tg,
            phi_grid: pg,
            delta_grid,
            tau,
            mode,
        };
        let exact = sweep(&spec(EvolutionMode::Exact))?;
        let paper = sweep(&spec(EvolutionMode::PaperVerbatim))?;
        for (e, p) in exact.into_iter().zip(paper) {
            records.push(e);
            records.push(p);
        }
    }
    write_sweep(opts, &meta, records.iter().collect())
}

#[derive(Debug, Serialize)]
struct OracleSummary {
    mode: EvolutionMode,
    step: f64,
    tau_max: f64,
    tolerance: f64,
    points: usize,
    max_deviation: f64,
    pass: bool,
    pulses: Vec<OracleReport>,
}

pub fn oracle_check_cmd(opts: &Options) -> Result<()> {
    let step = opts.step.map_or(DEFAULT_ORACLE_STEP, |r| r.0);
    let tau_max = opts.tau.map_or(DEFAULT_ORACLE_TAU, |r| r.0);
    let mode = opts.mode();
    if step <= 0.0 {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let grid = OracleGrid::standard(tau_max, step, mode)?;

    let rect = PulseConfig::Rectangular {
        delta: opts.delta.map_or(0.5, |r| r.0),
    };
    let exp = PulseConfig::Exponential {
        omega0_over_gamma: opts.omega_ratio.map_or(2.0, |r| r.0),
    };
    let sin2 = PulseConfig::SinSquared {
        omega_prime: opts.omega_prime.map_or(0.5, |r| r.0),
        n: opts.n.unwrap_or(1),
    };
    let pulses = match opts.pulse {
        None => vec![rect, exp, sin2],
        Some(PulseKind::Rect) => vec![rect],
        Some(PulseKind::Exp) => vec![exp],
        Some(PulseKind::Sin2) => vec![sin2],
    };
    let reports = pulses
        .iter()
        .map(|p| oracle_check(p, &grid))
        .collect::<pulsebloch::Result<Vec<_>>>()?;
    let max_deviation = reports.iter().map(|r| r.worst.value).fold(0.0, f64::max);
    let pass = reports.iter().all(|r| r.worst.value <= ORACLE_TOLERANCE);
    let summary = OracleSummary {
        mode,
        step,
        tau_max,
        tolerance: ORACLE_TOLERANCE,
        points: reports.iter().map(|r| r.points).sum(),
        max_deviation,
        pass,
        pulses: reports,
    };

    // the summary is JSON unless CSV is asked for explicitly
    let text = match opts.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut meta = Metadata::new("oracle-check");
            meta.push("mode", mode)
                .push("step", num(step))
                .push("tau-max", num(tau_max))
                .push("tolerance", num(ORACLE_TOLERANCE))
                .push("pass", pass);
            let rows: Vec<String> = summary
                .pulses
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{}",
                        r.pulse.name(),
                        r.points,
                        num(r.worst.value),
                        num(r.worst.theta),
                        num(r.worst.phi),
                        num(r.worst.tau),
                        num(r.max_norm_error)
                    )
                })
                .collect();
            output::csv(
                &meta,
                "pulse,points,max_deviation,theta,phi,tau,max_norm_error",
                &rows,
            )
        }
    };
    output::emit(opts.out.as_deref(), &text)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!(
            "oracle check failed: max deviation {max_deviation:e} exceeds {ORACLE_TOLERANCE:e}"
        )))
    }
}
