//! Initial coherent-state angles and the Bloch vector they map to.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `‖s‖ ≤ 1` before a state is rejected as unphysical.
pub const NORM_SLACK: f64 = 1e-9;

/// Which initial-state angle is being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Theta,
    Phi,
}

impl Parameter {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Theta => "theta",
            Parameter::Phi => "phi",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Weight `theta ∈ [0, π]` and phase `phi ∈ [0, 2π]` of the initial coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentStateAngles {
    theta: f64,
    phi: f64,
}

impl CoherentStateAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        if !(0.0..=TAU).contains(&phi) {
            return Err(Error::PhiOutOfRange(phi));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn get(&self, which: Parameter) -> f64 {
        match which {
            Parameter::Theta => self.theta,
            Parameter::Phi => self.phi,
        }
    }
}

/// Real Bloch vector `(s_x, s_y, s_z)`; `ρ = ½(I + s·σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self(Vector3::new(sx, sy, sz))
    }

    pub fn sx(&self) -> f64 {
        self.0.x
    }

    pub fn sy(&self) -> f64 {
        self.0.y
    }

    pub fn sz(&self) -> f64 {
        self.0.z
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + NORM_SLACK
    }
}

impl From<Vector3<f64>> for BlochVector {
    fn from(v: Vector3<f64>) -> Self {
        Self(v)
    }
}

// sin θ evaluated through π − θ on the upper half so that θ = π gives an exact zero.
fn sin_theta(theta: f64) -> f64 {
    if theta > PI / 2.0 {
        (PI - theta).sin()
    } else {
        theta.sin()
    }
}

/// Unnormalised-angle form of [`initial_bloch`], also used off-domain by the
/// finite-difference checks.
pub(crate) fn initial_bloch_raw(theta: f64, phi: f64) -> Vector3<f64> {
    let st = sin_theta(theta);
    Vector3::new(st * phi.cos(), st * phi.sin(), -theta.cos())
}

/// Bloch vector of the coherent state: `(sinθ cosφ, sinθ sinφ, −cosθ)`.
pub fn initial_bloch(angles: CoherentStateAngles) -> BlochVector {
    BlochVector(initial_bloch_raw(angles.theta, angles.phi))
}

/// Analytic partial derivative of [`initial_bloch`] with respect to `which`.
pub fn d_initial_bloch(angles: CoherentStateAngles, which: Parameter) -> Vector3<f64> {
    let (theta, phi) = (angles.theta, angles.phi);
    let st = sin_theta(theta);
    match which {
        Parameter::Theta => Vector3::new(theta.cos() * phi.cos(), theta.cos() * phi.sin(), st),
        Parameter::Phi => Vector3::new(-st * phi.sin(), st * phi.cos(), 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn angles(theta: f64, phi: f64) -> CoherentStateAngles {
        CoherentStateAngles::new(theta, phi).unwrap()
    }

    #[test]
    fn rejects_out_of_range_angles() {
        assert_eq!(
            CoherentStateAngles::new(-1e-3, 0.0),
            Err(Error::ThetaOutOfRange(-1e-3))
        );
        assert!(CoherentStateAngles::new(PI + 1e-12, 0.0).is_err());
        assert!(CoherentStateAngles::new(0.0, TAU + 1e-12).is_err());
        assert!(CoherentStateAngles::new(f64::NAN, 0.0).is_err());
        assert!(CoherentStateAngles::new(PI, TAU).is_ok());
    }

    #[test]
    fn ground_state() {
        let s = initial_bloch(angles(0.0, 0.0));
        assert_eq!(s, BlochVector::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn equatorial_state() {
        let s = initial_bloch(angles(FRAC_PI_2, 0.0));
        assert_abs_diff_eq!(s.0, Vector3::new(1.0, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn quarter_turn_with_pi_phase() {
        let s = initial_bloch(angles(FRAC_PI_4, PI));
        // sin(π/4) = cos(π/4) = 1/√2, cos π = −1, sin π ≈ 0
        assert_abs_diff_eq!(
            s.0,
            Vector3::new(-FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn excited_state_is_exact() {
        let s = initial_bloch(angles(PI, 1.3));
        assert_eq!(s.sx(), 0.0);
        assert_eq!(s.sy(), 0.0);
        assert_eq!(s.sz(), 1.0);
    }

    #[test]
    fn derivative_examples() {
        assert_abs_diff_eq!(
            d_initial_bloch(angles(0.0, 0.0), Parameter::Theta),
            Vector3::new(1.0, 0.0, 0.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            d_initial_bloch(angles(FRAC_PI_2, 0.0), Parameter::Phi),
            Vector3::new(0.0, 1.0, 0.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            d_initial_bloch(angles(FRAC_PI_4, FRAC_PI_2), Parameter::Theta),
            Vector3::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        for &(theta, phi) in &[(FRAC_PI_4, FRAC_PI_2), (0.3, 5.1), (2.9, 0.7)] {
            for which in [Parameter::Theta, Parameter::Phi] {
                let (plus, minus) = match which {
                    Parameter::Theta => (
                        initial_bloch_raw(theta + h, phi),
                        initial_bloch_raw(theta - h, phi),
                    ),
                    Parameter::Phi => (
                        initial_bloch_raw(theta, phi + h),
                        initial_bloch_raw(theta, phi - h),
                    ),
                };
                let fd = (plus - minus) / (2.0 * h);
                let exact = d_initial_bloch(angles(theta, phi), which);
                assert!((fd - exact).norm() <= 1e-9 * exact.norm().max(1.0));
            }
        }
    }

    #[test]
    fn unit_norm() {
        for i in 0..=20 {
            for j in 0..=20 {
                let a = angles(PI * i as f64 / 20.0, TAU * j as f64 / 20.0);
                assert!((initial_bloch(a).norm() - 1.0).abs() <= 1e-15);
            }
        }
    }
}
