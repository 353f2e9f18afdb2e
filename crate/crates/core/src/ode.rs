//! Fixed-step RK4 integration of the Bloch equation `ds/dτ = b(τ) × s`.
//!
//! This is the independent check for every closed form in [`crate::evolution`]. It also
//! handles detuned driving with shaped envelopes, which has no closed form.

use nalgebra::Vector3;

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::pulse::PulseConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSettings {
    step: f64,
    t_end: f64,
}

impl OdeSettings {
    pub fn new(step: f64, t_end: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidSettings(format!(
                "step must be positive, got {step}"
            )));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::InvalidSettings(format!(
                "t_end must be non-negative, got {t_end}"
            )));
        }
        if t_end > 0.0 && step > t_end {
            return Err(Error::InvalidSettings(format!(
                "step {step} exceeds t_end {t_end}"
            )));
        }
        Ok(Self { step, t_end })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }
}

/// `b × s` with `b = (drive, 0, delta)`, i.e. `(−δ s_y, δ s_x − f s_z, f s_y)`.
pub fn bloch_rhs(s: &Vector3<f64>, delta: f64, drive: f64) -> Vector3<f64> {
    Vector3::new(-delta * s.y, delta * s.x - drive * s.z, drive * s.y)
}

fn rk4_step<F>(s: &Vector3<f64>, t: f64, h: f64, field: &F) -> Vector3<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let rhs = |t: f64, s: &Vector3<f64>| {
        let (drive, delta) = field(t);
        bloch_rhs(s, delta, drive)
    };
    let k1 = rhs(t, s);
    let k2 = rhs(t + 0.5 * h, &(s + k1 * (0.5 * h)));
    let k3 = rhs(t + 0.5 * h, &(s + k2 * (0.5 * h)));
    let k4 = rhs(t + h, &(s + k3 * h));
    s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

// Uniform substeps of size ≤ max_step covering [t0, t1].
fn integrate_segment<F>(
    mut s: Vector3<f64>,
    t0: f64,
    t1: f64,
    max_step: f64,
    field: &F,
) -> Result<Vector3<f64>>
where
    F: Fn(f64) -> (f64, f64),
{
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(s);
    }
    let steps = (span / max_step).ceil().max(1.0) as u64;
    let h = span / steps as f64;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        s = rk4_step(&s, t, h, field);
        if !s.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite(t + h));
        }
    }
    Ok(s)
}

/// Integrate under an arbitrary field `τ ↦ (drive, detuning)` from 0 to `settings.t_end()`.
///
/// The interval is split into `⌈t_end/step⌉` equal steps.
pub fn integrate_field<F>(s0: &BlochVector, field: F, settings: &OdeSettings) -> Result<BlochVector>
where
    F: Fn(f64) -> (f64, f64),
{
    integrate_segment(s0.0, 0.0, settings.t_end, settings.step, &field).map(BlochVector)
}

pub fn integrate(
    s0: &BlochVector,
    pulse: &PulseConfig,
    settings: &OdeSettings,
) -> Result<BlochVector> {
    pulse.validate()?;
    integrate_field(s0, |t| pulse.drive(t), settings)
}

/// Integrate a single trajectory and return the state at each of `times`
/// (non-decreasing, starting at or after 0).
pub fn integrate_samples(
    s0: &BlochVector,
    pulse: &PulseConfig,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<BlochVector>> {
    pulse.validate()?;
    integrate_samples_field(s0, |t| pulse.drive(t), times, max_step)
}

/// [`integrate_samples`] under an arbitrary field `τ ↦ (drive, detuning)`.
pub fn integrate_samples_field<F>(
    s0: &BlochVector,
    field: F,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<BlochVector>>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(max_step.is_finite() && max_step > 0.0) {
        return Err(Error::InvalidSettings(format!(
            "step must be positive, got {max_step}"
        )));
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut s) = (0.0, s0.0);
    for &next in times {
        if !(next.is_finite() && next >= t) {
            return Err(Error::InvalidSettings(format!(
                "sample times must be finite and non-decreasing from 0, got {next} after {t}"
            )));
        }
        s = integrate_segment(s, t, next, max_step, &field)?;
        t = next;
        out.push(BlochVector(s));
    }
    Ok(out)
}
