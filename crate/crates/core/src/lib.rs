//! Bloch-vector dynamics of a single qubit driven by rectangular, exponential
//! and sin² laser pulses, and the quantum Fisher information (QFI) carried by
//! the evolved state about the initial coherent-state angles `(θ, φ)`.
//!
//! * [`bloch`]: coherent-state angles, Bloch vectors and their derivatives.
//! * [`pulse`]: pulse envelopes and closed-form resonant rotation angles.
//! * [`evolution`]: 3×3 propagators (exact rotation and the verbatim printed table).
//! * [`qfi`]: pure/mixed single-qubit QFI, analytic and finite-difference.
//! * [`sweep`]: parallel grid evaluation with deterministic ordering.
//! * [`ode`]: fixed-step RK4 oracle for the Bloch equation.
//! * [`check`]: closed form versus RK4 over a grid of initial states and times.

pub mod bloch;
pub mod check;
pub mod error;
pub mod evolution;
pub mod ode;
pub mod pulse;
pub mod qfi;
pub mod sweep;

pub use bloch::{d_initial_bloch, initial_bloch, BlochVector, CoherentStateAngles, Parameter};
pub use check::{oracle_check, OracleGrid, OracleReport, ORACLE_TOLERANCE};
pub use error::{Error, Result};
pub use evolution::{
    evolution_matrix, evolve, evolve_resonant, rect_rotation_exact, rect_rotation_paper,
    resonant_rotation, EvolutionMatrix, EvolutionMode,
};
pub use ode::{
    bloch_rhs, integrate, integrate_field, integrate_samples, integrate_samples_field, OdeSettings,
};
pub use pulse::{exponential_angle, resonant_angle, sin2_angle, PulseConfig};
pub use qfi::{finite_difference_qfi, qfi_from_state, qfi_parameter, Branch, QfiResult};
pub use sweep::{sweep, sweep_with_deltas, Grid, SweepRecord, SweepSpec};
