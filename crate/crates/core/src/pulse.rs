//! Pulse envelopes and the closed-form rotation angles for resonant driving.
//!
//! Every pulse is expressed in its own dimensionless time variable:
//!
//! | pulse        | time variable | drive `b(τ)`                |
//! |--------------|---------------|-----------------------------|
//! | rectangular  | `τ = Ω₀ t`    | `(1, 0, δ)`                 |
//! | exponential  | `τ = γ_p t`   | `(Ω₀/γ_p · e^{−τ}, 0, 0)`   |
//! | sin²         | `τ = ω_q t`   | `(Ω′₀ sin²(nτ), 0, 0)`      |
//!
//! The Bloch vector obeys `ds/dτ = b(τ) × s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseConfig {
    /// Constant Rabi frequency with dimensionless detuning `δ = Δ/Ω₀`.
    Rectangular { delta: f64 },
    /// `Ω₀ e^{−γ_p t}` at resonance; only the ratio `Ω₀/γ_p` matters.
    Exponential { omega0_over_gamma: f64 },
    /// `Ω₀ sin²(n ω_q t)` at resonance with `Ω′₀ = Ω₀/ω_q`.
    SinSquared { omega_prime: f64, n: u32 },
}

impl PulseConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PulseConfig::Rectangular { delta } if !delta.is_finite() => Err(Error::InvalidPulse(
                format!("delta must be finite, got {delta}"),
            )),
            PulseConfig::Exponential {
                omega0_over_gamma: r,
            } if !(r.is_finite() && r > 0.0) => Err(Error::InvalidPulse(format!(
                "omega0/gamma must be positive and finite, got {r}"
            ))),
            PulseConfig::SinSquared { omega_prime, .. }
                if !(omega_prime.is_finite() && omega_prime > 0.0) =>
            {
                Err(Error::InvalidPulse(format!(
                    "omega' must be positive and finite, got {omega_prime}"
                )))
            }
            PulseConfig::SinSquared { n: 0, .. } => {
                Err(Error::InvalidPulse("beating index n must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PulseConfig::Rectangular { .. } => "rect",
            PulseConfig::Exponential { .. } => "exp",
            PulseConfig::SinSquared { .. } => "sin2",
        }
    }

    /// Detuning in the pulse's own time units; zero for the resonant shapes.
    pub fn delta(&self) -> f64 {
        match *self {
            PulseConfig::Rectangular { delta } => delta,
            _ => 0.0,
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        match self {
            PulseConfig::Rectangular { .. } => PulseConfig::Rectangular { delta },
            other => other,
        }
    }

    pub fn is_resonant(&self) -> bool {
        !matches!(self, PulseConfig::Rectangular { .. })
    }

    /// Drive vector `b(τ) = (amplitude, 0, detuning)` returned as `(amplitude, detuning)`.
    pub fn drive(&self, tau: f64) -> (f64, f64) {
        match *self {
            PulseConfig::Rectangular { delta } => (rectangular_envelope(tau), delta),
            PulseConfig::Exponential { omega0_over_gamma } => {
                (omega0_over_gamma * exponential_envelope(tau), 0.0)
            }
            PulseConfig::SinSquared { omega_prime, n } => {
                (omega_prime * sin2_envelope(tau, n), 0.0)
            }
        }
    }
}

/// `f = 1` on the pulse; the evaluation window always lies inside it.
pub fn rectangular_envelope(tau: f64) -> f64 {
    if tau >= 0.0 {
        1.0
    } else {
        0.0
    }
}

pub fn exponential_envelope(gamma_t: f64) -> f64 {
    if gamma_t >= 0.0 {
        (-gamma_t).exp()
    } else {
        0.0
    }
}

pub fn sin2_envelope(tau: f64, n: u32) -> f64 {
    (n as f64 * tau).sin().powi(2)
}

/// Accumulated rotation angle `ω_e = (Ω₀/γ_p)(1 − e^{−γ_p t})`, with `gamma_t = γ_p t`.
pub fn exponential_angle(omega0_over_gamma: f64, gamma_t: f64) -> f64 {
    // exp_m1 keeps full relative precision for small γ_p t
    -omega0_over_gamma * (-gamma_t).exp_m1()
}

/// Accumulated rotation angle `ω_s = (Ω′/2)(τ − sin(2nτ)/(2n))`, with `tau = ω_q t`.
pub fn sin2_angle(omega_prime: f64, n: u32, tau: f64) -> f64 {
    let two_n = 2.0 * n as f64;
    0.5 * omega_prime * (tau - (two_n * tau).sin() / two_n)
}

/// Resonant rotation angle reached at `tau`, or `None` for the detuned rectangular pulse.
pub fn resonant_angle(pulse: &PulseConfig, tau: f64) -> Option<f64> {
    match *pulse {
        PulseConfig::Rectangular { .. } => None,
        PulseConfig::Exponential { omega0_over_gamma } => {
            Some(exponential_angle(omega0_over_gamma, tau))
        }
        PulseConfig::SinSquared { omega_prime, n } => Some(sin2_angle(omega_prime, n, tau)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    // Composite Simpson's rule; independent of the closed forms above.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn validation() {
        assert!(PulseConfig::Rectangular { delta: f64::NAN }
            .validate()
            .is_err());
        assert!(PulseConfig::Rectangular { delta: -3.0 }.validate().is_ok());
        assert!(PulseConfig::Exponential {
            omega0_over_gamma: 0.0
        }
        .validate()
        .is_err());
        assert!(PulseConfig::SinSquared {
            omega_prime: 0.5,
            n: 0
        }
        .validate()
        .is_err());
        assert!(PulseConfig::SinSquared {
            omega_prime: -0.5,
            n: 1
        }
        .validate()
        .is_err());
        assert!(PulseConfig::SinSquared {
            omega_prime: 0.5,
            n: 3
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn exponential_angle_at_origin() {
        assert_eq!(exponential_angle(2.0, 0.0), 0.0);
    }

    #[test]
    fn exponential_angle_saturates() {
        let r = 2.0;
        assert!((exponential_angle(r, 50.0) - r).abs() <= 1e-15 * r);
    }

    #[test]
    fn exponential_angle_matches_quadrature() {
        let expected = 1.264_241_117_657_115_3; // 2(1 − e⁻¹)
        assert!((exponential_angle(2.0, 1.0) - expected).abs() <= 1e-15);
        let quad = simpson(|s| 2.0 * (-s).exp(), 0.0, 1.0, 2000);
        assert!((exponential_angle(2.0, 1.0) - quad).abs() <= 1e-12);
    }

    #[test]
    fn sin2_angle_examples() {
        assert_eq!(sin2_angle(1.0, 1, 0.0), 0.0);
        assert!((sin2_angle(1.0, 1, PI) - FRAC_PI_2).abs() <= 1e-15);
        let quad = simpson(|s| 0.5 * sin2_envelope(s, 2), 0.0, 0.7, 2000);
        assert!((sin2_angle(0.5, 2, 0.7) - quad).abs() <= 1e-10);
        assert!((sin2_angle(0.5, 2, 0.7) - 0.154_063_240_615_255_92).abs() <= 1e-15);
    }

    #[test]
    fn angles_are_monotone() {
        let mut prev_e = 0.0;
        let mut prev_s = 0.0;
        for i in 1..=2000 {
            let tau = i as f64 * 0.01;
            let e = exponential_angle(1.7, tau);
            let s = sin2_angle(0.8, 3, tau);
            assert!(e >= prev_e && e <= 1.7);
            assert!(s >= prev_s - 1e-15);
            prev_e = e;
            prev_s = s;
        }
    }
}
