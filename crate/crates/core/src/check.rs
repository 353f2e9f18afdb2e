//! Closed form versus RK4 over a `(θ, φ, τ)` grid.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{initial_bloch, CoherentStateAngles};
use crate::error::Result;
use crate::evolution::{evolution_matrix, EvolutionMode};
use crate::ode::integrate_samples;
use crate::pulse::PulseConfig;
use crate::sweep::Grid;

/// Acceptance threshold on the per-component deviation.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleGrid {
    pub theta: Grid,
    pub phi: Grid,
    pub tau: Grid,
    pub step: f64,
    pub mode: EvolutionMode,
}

impl OracleGrid {
    /// 10 × 10 × 10 points: `θ ∈ [0, π]`, `φ ∈ [0, 2π)`, `τ ∈ [0, tau_max]`.
    pub fn standard(tau_max: f64, step: f64, mode: EvolutionMode) -> Result<Self> {
        Ok(Self {
            theta: Grid::new(0.0, PI, 10)?,
            phi: Grid::new(0.0, TAU * 0.9, 10)?,
            tau: Grid::new(0.0, tau_max, 10)?,
            step,
            mode,
        })
    }

    pub fn points(&self) -> usize {
        self.theta.count * self.phi.count * self.tau.count
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub pulse: PulseConfig,
    pub points: usize,
    pub worst: Deviation,
    /// Largest `|‖s‖ − 1|` of the closed-form states on the grid.
    pub max_norm_error: f64,
}

/// Run one RK4 trajectory per `(θ, φ)` and compare it with the closed form at every `τ`.
pub fn oracle_check(pulse: &PulseConfig, grid: &OracleGrid) -> Result<OracleReport> {
    let taus = grid.tau.values();
    let matrices = taus
        .iter()
        .map(|&t| evolution_matrix(pulse, t, grid.mode))
        .collect::<Result<Vec<_>>>()?;
    let thetas = grid.theta.values();
    let phis = grid.phi.values();
    let pairs: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .collect();

    let per_pair = pairs
        .par_iter()
        .map(|&(theta, phi)| -> Result<(Deviation, f64)> {
            let s0 = initial_bloch(CoherentStateAngles::new(theta, phi)?);
            let traj = integrate_samples(&s0, pulse, &taus, grid.step)?;
            let mut worst = Deviation {
                value: 0.0,
                theta,
                phi,
                tau: 0.0,
            };
            let mut norm_err: f64 = 0.0;
            for ((m, s_ode), &tau) in matrices.iter().zip(&traj).zip(&taus) {
                let s_closed = m.apply(&s0);
                norm_err = norm_err.max((s_closed.norm() - 1.0).abs());
                let dev = (s_closed.0 - s_ode.0).amax();
                if dev.is_nan() || dev > worst.value {
                    worst = Deviation {
                        value: dev,
                        theta,
                        phi,
                        tau,
                    };
                }
            }
            Ok((worst, norm_err))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut worst = Deviation {
        value: 0.0,
        theta: 0.0,
        phi: 0.0,
        tau: 0.0,
    };
    let mut max_norm_error: f64 = 0.0;
    for (d, n) in per_pair {
        if d.value.is_nan() || d.value > worst.value {
            worst = d;
        }
        max_norm_error = max_norm_error.max(n);
    }
    Ok(OracleReport {
        pulse: *pulse,
        points: grid.points(),
        worst,
        max_norm_error,
    })
}
