use std::f64::consts::PI;

use isowigner::eigensystem::{potential_derivative, OscillatorParams};
use isowigner::flow::{
    classical_orbit, current_k, flow_point, pseudo_velocity_divergence, purity_flux, FlowField, FluxOptions,
};
use isowigner::specfun::{hille_hardy_closed, hille_hardy_sum};
use isowigner::thermal::{
    partition_function, partition_function_spectral, thermal_purity, PurityMethod, ThermalMethod, ThermalParams,
    ThermalState,
};
use isowigner::wigner_states::{Eigenstate, GridSpec, KernelState, QuasiGaussian, QuasiGaussianParams};
use proptest::prelude::*;

fn osc(a: f64) -> OscillatorParams<f64> {
    OscillatorParams::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wigner_bounded_by_inverse_pi(a in -0.9f64..3.0, n in 0usize..5, x in 0.01f64..6.0, k in -6.0f64..6.0) {
        let w = Eigenstate::new(osc(a), n).wigner(x, k, 1e-10).unwrap();
        prop_assert!(w.abs() <= 1.0 / PI + 1e-9);
    }

    #[test]
    fn quasi_gaussian_bounded(a in -0.9f64..3.0, g in 0.2f64..2.0, t in 0.0f64..6.3, x in 0.01f64..5.0, k in -6.0f64..6.0) {
        let s = QuasiGaussian::new(osc(a), QuasiGaussianParams::new(g, t).unwrap());
        prop_assert!(s.wigner(x, k, 1e-10).unwrap().abs() <= 1.0 / PI + 1e-9);
    }

    #[test]
    fn wigner_vanishes_off_half_line(a in -0.9f64..3.0, n in 0usize..5, x in -5.0f64..=0.0, k in -6.0f64..6.0) {
        prop_assert_eq!(Eigenstate::new(osc(a), n).wigner(x, k, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn thermal_purity_ignores_alpha(a in -0.9f64..3.0, b in 0.25f64..2.0) {
        let p = thermal_purity(&osc(a), &ThermalParams::new(b).unwrap(), PurityMethod::Reduced, 1e-10).unwrap();
        prop_assert!((p - b.tanh()).abs() < 2e-5, "{} vs {}", p, b.tanh());
    }

    #[test]
    fn spectral_partition_sum(b in 0.05f64..20.0) {
        let t = ThermalParams::new(b).unwrap();
        let z = partition_function(&t);
        prop_assert!((partition_function_spectral(&t, 1e-15) - z).abs() <= 1e-12 * z.max(1.0));
    }

    #[test]
    fn hille_hardy_tail_is_geometric(a in -0.9f64..3.0, lam in 0.05f64..0.5, x in 0.01f64..5.0, y in 0.01f64..5.0) {
        let exact = hille_hardy_closed(a, lam, x, y).unwrap();
        let (s20, scale) = hille_hardy_sum(a, lam, x, y, 20).unwrap();
        let (s40, _) = hille_hardy_sum(a, lam, x, y, 40).unwrap();
        prop_assert!((s40 - exact).abs() <= (s20 - exact).abs() + 1e-13 * scale);
        // the truncation error after N terms is O(λ^N) relative to the absolute sum
        prop_assert!((s20 - exact).abs() <= 1e3 * lam.powi(20) / (1.0 - lam) * scale.max(1.0) + 1e-12 * scale);
    }

    #[test]
    fn thermal_series_matches_bessel(a in -0.9f64..2.5, b in 0.3f64..3.0, x in 0.1f64..3.0, k in -3.0f64..3.0) {
        let p = osc(a);
        let t = ThermalParams::new(b).unwrap();
        let s = ThermalState::new(p, t, ThermalMethod::Series).wigner(x, k, 1e-12).unwrap();
        let bf = ThermalState::new(p, t, ThermalMethod::Bessel).wigner(x, k, 1e-12).unwrap();
        prop_assert!((s - bf).abs() < 1e-8, "{} {}", s, bf);
    }

    #[test]
    fn orbit_conserves_energy_and_closes(a in 0.5f64..4.0, extra in 0.0f64..10.0, tau in 0.0f64..7.0) {
        let p = osc(a);
        let e = p.coupling().sqrt() + extra;
        let o = classical_orbit(&p, e).unwrap();
        let (x, k) = o.point(tau);
        if p.coupling() > 0.0 {
            prop_assert!((o.hamiltonian(x, k) - e).abs() <= 1e-10 * e.max(1.0));
        }
        prop_assert!((o.x(tau + PI) - x).abs() < 1e-12 * e.max(1.0));
        let (lo, hi) = o.turning_points();
        prop_assert!(x >= lo - 1e-12 && x <= hi + 1e-12);
    }

    #[test]
    fn classical_current_at_zeroth_order(a in -0.9f64..3.0, n in 0usize..4, x in 0.2f64..4.0, k in -3.0f64..3.0) {
        let s = Eigenstate::new(osc(a), n);
        let jk = current_k(&s, x, k, 0, 1e-12).unwrap();
        let w = s.wigner(x, k, 1e-12).unwrap();
        prop_assert!((jk + potential_derivative(&osc(a), x, 1).unwrap() * w).abs() < 1e-10);
    }

    #[test]
    fn pseudo_velocity_odd_in_k(n in 0usize..3, x in 0.5f64..3.0, k in 0.1f64..2.5) {
        let s = Eigenstate::new(osc(1.5), n);
        let p = pseudo_velocity_divergence(&s, x, k, 4, 1e-12).unwrap();
        let m = pseudo_velocity_divergence(&s, x, -k, 4, 1e-12).unwrap();
        if let (Some(p), Some(m)) = (p, m) {
            prop_assert!((p + m).abs() <= 1e-7 * p.abs().max(1.0));
        }
    }
}

#[test]
fn flow_field_current_identity() {
    let s = Eigenstate::new(osc(1.5), 1);
    let grid = GridSpec { x_min: -0.5, x_max: 3.0, nx: 8, k_min: -2.0, k_max: 2.0, nk: 7 };
    let f = FlowField::fill(&s, grid, 6, 1e-10).unwrap();
    for i in 0..grid.nx {
        for j in 0..grid.nk {
            let at = f.index(i, j);
            assert_eq!(f.jx[at], grid.k(j) * f.w[at]);
            if grid.x(i) <= 0.0 {
                assert_eq!(f.w[at], 0.0);
            }
        }
    }
    let classical = FlowField::fill(&s, grid, 0, 1e-10).unwrap();
    for i in 0..grid.nx {
        let x = grid.x(i);
        if x <= 0.0 {
            continue;
        }
        let u1 = potential_derivative(&osc(1.5), x, 1).unwrap();
        for j in 0..grid.nk {
            let at = classical.index(i, j);
            assert!((classical.jk[at] + u1 * classical.w[at]).abs() < 1e-12);
        }
    }
}

#[test]
fn stationary_flux_vanishes_over_an_orbit() {
    for n in 0..3 {
        let s = Eigenstate::new(osc(1.5), n);
        let o = classical_orbit(&osc(1.5), 3.0).unwrap();
        let f = purity_flux(&s, &o, 6, &FluxOptions::default(), 1e-12).unwrap();
        assert!(f.abs() < 1e-12, "n={n}: {f}");
    }
}

#[test]
fn quasi_gaussian_flux_half_orbits_do_not_cancel() {
    // the moving state breaks the k-parity that kills stationary fluxes
    let p = osc(1.5);
    let s = QuasiGaussian::new(p, QuasiGaussianParams::new(0.8, 0.4).unwrap());
    let o = classical_orbit(&p, 2.0).unwrap();
    let f = purity_flux(&s, &o, 6, &FluxOptions { panels: 32, ..FluxOptions::default() }, 1e-12).unwrap();
    assert!(f.abs() > 1e-4, "{f}");
    let fp = flow_point(&s, 1.4, 0.2, 6, 1e-12).unwrap();
    assert!(fp.delta_jk != 0.0);
}
