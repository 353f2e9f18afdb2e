use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use pulsebloch::qfi::DEFAULT_FD_STEP;
use pulsebloch::{
    evolve, finite_difference_qfi, initial_bloch, integrate, qfi_parameter, CoherentStateAngles,
    EvolutionMode, OdeSettings, Parameter, PulseConfig,
};

fn pulse_strategy() -> impl Strategy<Value = PulseConfig> {
    prop_oneof![
        (-2.0..2.0f64).prop_map(|delta| PulseConfig::Rectangular { delta }),
        (0.05..5.0f64).prop_map(|r| PulseConfig::Exponential {
            omega0_over_gamma: r
        }),
        (0.05..2.0f64, 1u32..5).prop_map(|(w, n)| PulseConfig::SinSquared { omega_prime: w, n }),
    ]
}

fn param_strategy() -> impl Strategy<Value = Parameter> {
    prop_oneof![Just(Parameter::Theta), Just(Parameter::Phi)]
}

proptest! {
    #[test]
    fn exact_mode_qfi_is_rotation_invariant(
        pulse in pulse_strategy(),
        theta in 0.0..PI,
        phi in 0.0..TAU,
        tau in 0.0..20.0f64,
    ) {
        let a = CoherentStateAngles::new(theta, phi).unwrap();
        let ft = qfi_parameter(&pulse, a, Parameter::Theta, tau, EvolutionMode::Exact).unwrap();
        let fp = qfi_parameter(&pulse, a, Parameter::Phi, tau, EvolutionMode::Exact).unwrap();
        prop_assert!((ft.value - 1.0).abs() <= 1e-12);
        prop_assert!((fp.value - theta.sin().powi(2)).abs() <= 1e-12);
        prop_assert!(ft.value >= 0.0 && fp.value >= 0.0);
    }

    #[test]
    fn theta_information_symmetric_in_phi(
        delta in -2.0..2.0f64,
        theta in 0.0..PI,
        phi in 0.0..TAU,
        tau in 0.0..20.0f64,
    ) {
        let pulse = PulseConfig::Rectangular { delta };
        let f = |phi| {
            qfi_parameter(&pulse, CoherentStateAngles::new(theta, phi).unwrap(), Parameter::Theta, tau, EvolutionMode::Exact)
                .unwrap()
                .value
        };
        prop_assert!((f(phi) - f(TAU - phi)).abs() <= 1e-12);
    }

    #[test]
    fn finite_differences_agree(
        pulse in pulse_strategy(),
        which in param_strategy(),
        theta in 0.0..PI,
        phi in 0.0..TAU,
        tau in 0.0..20.0f64,
    ) {
        let a = CoherentStateAngles::new(theta, phi).unwrap();
        let analytic = qfi_parameter(&pulse, a, which, tau, EvolutionMode::Exact).unwrap();
        let fd = finite_difference_qfi(&pulse, a, which, tau, EvolutionMode::Exact, DEFAULT_FD_STEP).unwrap();
        prop_assert!((analytic.value - fd.value).abs() <= 1e-6);
        prop_assert_eq!(analytic.branch, fd.branch);
    }

    #[test]
    fn exact_evolution_preserves_norm(
        pulse in pulse_strategy(),
        theta in 0.0..PI,
        phi in 0.0..TAU,
        tau in 0.0..20.0f64,
    ) {
        let s0 = initial_bloch(CoherentStateAngles::new(theta, phi).unwrap());
        let s = evolve(&pulse, &s0, tau, EvolutionMode::Exact).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_forms_match_rk4(
        pulse in pulse_strategy(),
        theta in 0.0..PI,
        phi in 0.0..TAU,
        tau in 0.01..8.0f64,
    ) {
        let s0 = initial_bloch(CoherentStateAngles::new(theta, phi).unwrap());
        let closed = evolve(&pulse, &s0, tau, EvolutionMode::Exact).unwrap();
        let step = 1e-3f64.min(tau);
        let ode = integrate(&s0, &pulse, &OdeSettings::new(step, tau).unwrap()).unwrap();
        prop_assert!((closed.0 - ode.0).amax() <= 1e-6);
    }
}
