//! Grid evaluation of the QFI over `(θ, φ, δ)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{CoherentStateAngles, Parameter};
use crate::error::{Error, Result};
use crate::evolution::{evolution_matrix, EvolutionMode};
use crate::pulse::PulseConfig;
use crate::qfi::{qfi_with_matrix, QfiResult};

/// Inclusive linear grid of `count` points from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn point(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidGrid("count must be >= 1".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if self.min > self.max {
            return Err(Error::InvalidGrid(format!(
                "min {} > max {}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = self.count - 1;
        let span = self.max - self.min;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub pulse: PulseConfig,
    pub parameter: Parameter,
    pub theta_grid: Grid,
    pub phi_grid: Grid,
    pub delta_grid: Grid,
    pub tau: f64,
    pub mode: EvolutionMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.pulse.validate()?;
        for (name, g, hi) in [
            ("theta", &self.theta_grid, std::f64::consts::PI),
            ("phi", &self.phi_grid, std::f64::consts::TAU),
        ] {
            g.validate()?;
            if g.min < 0.0 || g.max > hi {
                return Err(Error::InvalidGrid(format!("{name} grid leaves [0, {hi}]")));
            }
        }
        self.delta_grid.validate()?;
        if self.pulse.is_resonant() && (self.delta_grid.min != 0.0 || self.delta_grid.max != 0.0) {
            return Err(Error::InvalidGrid(format!(
                "{} pulse has a closed form only at resonance; delta grid must be 0",
                self.pulse.name()
            )));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidTime(self.tau));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
    pub tau: f64,
    pub parameter: Parameter,
    pub mode: EvolutionMode,
    /// `None` when the evolved vector left the Bloch ball (paper-verbatim mode only).
    pub qfi: Option<QfiResult>,
    pub norm: f64,
}

/// Evaluate the QFI on every grid point; theta outer, phi middle, delta inner.
///
/// Points are evaluated in parallel; the returned order is always row-major.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    sweep_with_deltas(spec, &spec.delta_grid.values())
}

/// [`sweep`] with an explicit delta axis, e.g. a reversed one.
pub fn sweep_with_deltas(spec: &SweepSpec, deltas: &[f64]) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let thetas = spec.theta_grid.values();
    let phis = spec.phi_grid.values();
    let matrices = deltas
        .iter()
        .map(|&d| evolution_matrix(&spec.pulse.with_delta(d), spec.tau, spec.mode))
        .collect::<Result<Vec<_>>>()?;

    let (np, nd) = (phis.len(), deltas.len());
    let total = thetas.len() * np * nd;
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let (it, ip, id) = (idx / (np * nd), (idx / nd) % np, idx % nd);
            let angles = CoherentStateAngles::new(thetas[it], phis[ip])?;
            let m = &matrices[id];
            let norm = m.apply(&crate::bloch::initial_bloch(angles)).norm();
            let qfi = qfi_with_matrix(m, angles, spec.parameter, spec.mode).ok();
            Ok(SweepRecord {
                theta: thetas[it],
                phi: phis[ip],
                delta: spec.pulse.with_delta(deltas[id]).delta(),
                tau: spec.tau,
                parameter: spec.parameter,
                mode: spec.mode,
                qfi,
                norm,
            })
        })
        .collect()
}
