//! Quantum Fisher information of the evolved Bloch vector with respect to the
//! initial coherent-state angles.
//!
//! For a single qubit with Bloch vector `s(β)`:
//!
//! * pure state (`‖s‖ = 1`): `F = ‖∂s/∂β‖²`
//! * mixed state (`‖s‖ < 1`): `F = ‖∂s/∂β‖² + (s·∂s/∂β)² / (1 − ‖s‖²)`
//!
//! Every propagator in this crate is linear in `s(0)` and independent of
//! `(θ, φ)`, so `∂s(τ)/∂β = M(τ) ∂s(0)/∂β` exactly.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    d_initial_bloch, initial_bloch, initial_bloch_raw, BlochVector, CoherentStateAngles, Parameter,
    NORM_SLACK,
};
use crate::error::{Error, Result};
use crate::evolution::{evolution_matrix, EvolutionMatrix, EvolutionMode};
use crate::pulse::PulseConfig;

/// States with `‖s‖ ≥ 1 − PURITY_THRESHOLD` use the pure-state formula.
pub const PURITY_THRESHOLD: f64 = 1e-9;

/// Default central-difference step in radians.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Pure,
    Mixed,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Pure => "pure",
            Branch::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfiResult {
    pub value: f64,
    pub branch: Branch,
    /// `‖s(β)‖` at the evaluation point.
    pub norm: f64,
}

pub fn qfi_from_state(s: &BlochVector, ds: &Vector3<f64>) -> Result<QfiResult> {
    let norm = s.norm();
    if norm.is_nan() || norm > 1.0 + NORM_SLACK {
        return Err(Error::Unphysical(norm));
    }
    let tangent = ds.norm_squared();
    if norm >= 1.0 - PURITY_THRESHOLD {
        return Ok(QfiResult {
            value: tangent,
            branch: Branch::Pure,
            norm,
        });
    }
    let radial = s.0.dot(ds);
    Ok(QfiResult {
        value: tangent + radial * radial / (1.0 - norm * norm),
        branch: Branch::Mixed,
        norm,
    })
}

/// QFI for `which` after evolving the coherent state under `pulse` to scaled time `tau`.
pub fn qfi_parameter(
    pulse: &PulseConfig,
    angles: CoherentStateAngles,
    which: Parameter,
    tau: f64,
    mode: EvolutionMode,
) -> Result<QfiResult> {
    let m = evolution_matrix(pulse, tau, mode)?;
    qfi_with_matrix(&m, angles, which, mode)
}

pub(crate) fn qfi_with_matrix(
    m: &EvolutionMatrix,
    angles: CoherentStateAngles,
    which: Parameter,
    mode: EvolutionMode,
) -> Result<QfiResult> {
    let s = m.apply(&initial_bloch(angles));
    let ds = m.apply_vec(&d_initial_bloch(angles, which));
    if mode == EvolutionMode::Exact {
        debug_assert!(
            s.0.dot(&ds).abs() <= 1e-9,
            "derivative not tangent: {}",
            s.0.dot(&ds)
        );
    }
    qfi_from_state(&s, &ds)
}

/// Same as [`qfi_parameter`] but with `∂s/∂β` from finite differences of the full evolution.
///
/// Central differences are used unless `θ ± h` leaves `[0, π]`, in which case a
/// second-order one-sided stencil is applied. `φ` is periodic and always uses
/// central differences.
pub fn finite_difference_qfi(
    pulse: &PulseConfig,
    angles: CoherentStateAngles,
    which: Parameter,
    tau: f64,
    mode: EvolutionMode,
    h: f64,
) -> Result<QfiResult> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidStep(h));
    }
    let m = evolution_matrix(pulse, tau, mode)?;
    let (theta, phi) = (angles.theta(), angles.phi());
    let at = |x: f64| -> Vector3<f64> {
        match which {
            Parameter::Theta => m.apply_vec(&initial_bloch_raw(x, phi)),
            Parameter::Phi => m.apply_vec(&initial_bloch_raw(theta, x)),
        }
    };
    let x = angles.get(which);
    let ds = match which {
        Parameter::Theta if x - h < 0.0 => {
            (at(x) * -3.0 + at(x + h) * 4.0 - at(x + 2.0 * h)) / (2.0 * h)
        }
        Parameter::Theta if x + h > PI => {
            (at(x) * 3.0 - at(x - h) * 4.0 + at(x - 2.0 * h)) / (2.0 * h)
        }
        _ => (at(x + h) - at(x - h)) / (2.0 * h),
    };
    let s = m.apply(&initial_bloch(angles));
    qfi_from_state(&s, &ds)
}
