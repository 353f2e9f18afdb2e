//! Closed-form evolution matrices.
//!
//! All dynamics here are linear in the initial Bloch vector, `s(τ) = M(τ) s(0)`,
//! so evolution is represented by a 3×3 [`EvolutionMatrix`].
//!
//! For the rectangular pulse two matrices are available. [`rect_rotation_exact`]
//! is the rotation that solves `ds/dτ = (1, 0, δ) × s`. [`rect_rotation_paper`]
//! transcribes the commonly printed coefficient table entry by entry; it is not
//! orthogonal and is kept only for side-by-side comparison.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::pulse::{resonant_angle, PulseConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum EvolutionMode {
    /// Norm-preserving rotation solving the Bloch equation.
    #[default]
    #[serde(rename = "exact")]
    Exact,
    /// Verbatim printed coefficient table for the detuned rectangular pulse.
    #[serde(rename = "paper")]
    PaperVerbatim,
}

impl EvolutionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvolutionMode::Exact => "exact",
            EvolutionMode::PaperVerbatim => "paper",
        }
    }
}

impl fmt::Display for EvolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionMatrix(pub Matrix3<f64>);

impl EvolutionMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn apply(&self, s: &BlochVector) -> BlochVector {
        BlochVector(self.0 * s.0)
    }

    pub fn apply_vec(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// `self` followed by `later`.
    pub fn then(&self, later: &EvolutionMatrix) -> EvolutionMatrix {
        EvolutionMatrix(later.0 * self.0)
    }

    /// Frobenius norm of `MᵀM − I`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).norm()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn max_abs_diff(&self, other: &EvolutionMatrix) -> f64 {
        (self.0 - other.0).amax()
    }
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues' formula).
pub fn axis_angle_rotation(axis: &Vector3<f64>, angle: f64) -> EvolutionMatrix {
    let (s, c) = angle.sin_cos();
    let k = axis.cross_matrix();
    EvolutionMatrix(Matrix3::identity() + k * s + k * k * (1.0 - c))
}

/// Exact rectangular-pulse propagator: rotation by `τ√η` about `(1, 0, δ)/√η`, `η = 1 + δ²`.
pub fn rect_rotation_exact(delta: f64, tau: f64) -> EvolutionMatrix {
    let root_eta = delta.hypot(1.0);
    let axis = Vector3::new(1.0, 0.0, delta) / root_eta;
    axis_angle_rotation(&axis, tau * root_eta)
}

/// The printed rectangular-pulse coefficient table, transcribed without correction.
///
/// Only the `s_z` row agrees with the exact rotation.
pub fn rect_rotation_paper(delta: f64, tau: f64) -> EvolutionMatrix {
    let d = delta;
    let d2 = d * d;
    let eta = 1.0 + d2;
    let root_eta = eta.sqrt();
    let (s, c) = (tau * root_eta).sin_cos();
    let sr = s / root_eta;

    let m11 = (1.0 / eta + d2 * c) - d * sr;
    let m12 = (1.0 + 2.0 * d2) / (2.0 * eta) + c / (2.0 * eta) + d * sr;
    let m13 = d / eta * (1.0 - c) + sr;

    let m21 = (1.0 / (2.0 * eta) + (eta + d2) / (2.0 * eta) * c) + sr;
    let m22 = c - d * sr;
    let m23 = d / eta * (1.0 - c) - d * sr;

    let m31 = d / eta * (1.0 - c);
    let m32 = sr;
    let m33 = d2 / eta + c / eta;

    EvolutionMatrix(Matrix3::new(m11, m12, m13, m21, m22, m23, m31, m32, m33))
}

/// Resonant propagator: `s_x` fixed, `(s_y, s_z)` rotated by `angle` about the x axis.
pub fn resonant_rotation(angle: f64) -> EvolutionMatrix {
    let (s, c) = angle.sin_cos();
    EvolutionMatrix(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
}

pub fn evolve_resonant(s0: &BlochVector, angle: f64) -> BlochVector {
    let (s, c) = angle.sin_cos();
    BlochVector::new(
        s0.sx(),
        c * s0.sy() - s * s0.sz(),
        c * s0.sz() + s * s0.sy(),
    )
}

/// Propagator for `pulse` at scaled time `tau` (in the pulse's own time variable).
///
/// `mode` only affects the rectangular pulse.
pub fn evolution_matrix(
    pulse: &PulseConfig,
    tau: f64,
    mode: EvolutionMode,
) -> Result<EvolutionMatrix> {
    pulse.validate()?;
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidTime(tau));
    }
    Ok(match (*pulse, mode) {
        (PulseConfig::Rectangular { delta }, EvolutionMode::Exact) => {
            rect_rotation_exact(delta, tau)
        }
        (PulseConfig::Rectangular { delta }, EvolutionMode::PaperVerbatim) => {
            rect_rotation_paper(delta, tau)
        }
        (resonant, _) => resonant_rotation(
            resonant_angle(&resonant, tau).expect("non-rectangular pulses are resonant"),
        ),
    })
}

pub fn evolve(
    pulse: &PulseConfig,
    s0: &BlochVector,
    tau: f64,
    mode: EvolutionMode,
) -> Result<BlochVector> {
    Ok(evolution_matrix(pulse, tau, mode)?.apply(s0))
}
