//! Acceptance criteria as runnable checks, each against an independent
//! oracle: closed forms, a second algorithm, or an ODE integrator.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigensystem::OscillatorParams;
use crate::error::Result;
use crate::flow::{classical_orbit, continuity_residual, purity_flux, FluxOptions, MoyalOrder};
use crate::specfun::{hille_hardy_closed, hille_hardy_sum, laguerre, laguerre_bilinear_sum};
use crate::thermal::{
    energy_average, energy_closed_form, partition_function, partition_function_phase_space, thermal_purity,
    PurityMethod, ThermalMethod, ThermalParams, ThermalState,
};
use crate::wigner_states::{
    kernel_wigner, normalization, overlap, purity_grid, Eigenstate, GridSpec, KernelState, Mixture, QuasiGaussian,
    QuasiGaussianParams,
};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation (∞ when a computation failed).
    pub measured: f64,
    pub target: f64,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: measured={:.3e} target={:.1e} ({:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.target,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidationOptions {
    /// Replaces every internal quadrature tolerance; used for fault injection.
    pub tol: Option<f64>,
}

impl ValidationOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "partition function"),
    (2, "ensemble purity"),
    (3, "semi-integer closed form"),
    (4, "pure-state purity"),
    (5, "normalization"),
    (6, "orthogonality"),
    (7, "dual-method agreement"),
    (8, "continuity"),
    (9, "classical orbit"),
    (10, "purity flux"),
    (11, "thermal energy"),
    (12, "special functions"),
];

pub const ALPHAS: [f64; 4] = [-0.5, 0.5, 0.75, 1.5];
pub const BETAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// Tracks the worst deviation and any hard failure.
struct Worst {
    value: f64,
    finite: f64,
    errors: Vec<String>,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, finite: 0.0, errors: Vec::new() }
    }

    fn dev(&mut self, label: impl FnOnce() -> String, r: Result<f64>) {
        match r {
            Ok(v) if v.is_finite() => {
                self.value = self.value.max(v);
                self.finite = self.finite.max(v);
            }
            Ok(v) => {
                self.value = f64::INFINITY;
                self.errors.push(format!("{}: {}", label(), v));
            }
            Err(e) => {
                self.value = f64::INFINITY;
                self.errors.push(format!("{}: {}", label(), e));
            }
        }
    }

    fn summary(&self) -> String {
        match self.errors.len() {
            0 => String::new(),
            n => format!("{} error(s), worst of the rest {:.1e}, first: {}", n, self.finite, self.errors[0]),
        }
    }
}

fn osc(a: f64) -> OscillatorParams<f64> {
    OscillatorParams::new(a).expect("fixed alpha")
}

fn th(b: f64) -> ThermalParams<f64> {
    ThermalParams::new(b).expect("fixed beta")
}

fn qg_states() -> Vec<QuasiGaussian<f64>> {
    let mut out = Vec::new();
    for &a in &[0.5, 1.5] {
        for &g in &[0.5, 1.0] {
            for &t in &[0.0, PI / 2.0, PI] {
                out.push(QuasiGaussian::new(osc(a), QuasiGaussianParams::new(g, t).expect("fixed state")));
            }
        }
    }
    out
}

fn eigen_states() -> Vec<Eigenstate<f64>> {
    let mut out = Vec::new();
    for &a in &[-0.5, 1.5] {
        for n in 0..=3 {
            out.push(Eigenstate::new(osc(a), n));
        }
    }
    out
}

fn report(id: u32, passed: bool, measured: f64, target: f64, detail: String, start: Instant) -> CriterionReport {
    let name = CRITERIA[(id - 1) as usize].1;
    CriterionReport { id, name, passed, measured, target, detail, elapsed: start.elapsed() }
}

fn c1(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let mut w = Worst::new();
    for &a in &ALPHAS {
        for &b in &BETAS {
            let r = partition_function_phase_space(&osc(a), &th(b), o.tol(1e-11)).map(|z| (z / partition_function(&th(b)) - 1.0).abs());
            w.dev(|| format!("alpha={a} beta={b}"), r);
        }
    }
    let slow = start.elapsed().as_secs_f64() > 60.0;
    let detail = format!("{}{}", if slow { "over 60 s; " } else { "" }, w.summary());
    report(1, w.value <= 1e-6 && !slow, w.value, 1e-6, detail, start)
}

fn c2(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let mut w = Worst::new();
    for &a in &ALPHAS {
        for &b in &BETAS {
            let r = thermal_purity(&osc(a), &th(b), PurityMethod::Reduced, tol).map(|p| (p - b.tanh()).abs());
            w.dev(|| format!("alpha={a} beta={b}"), r);
        }
    }
    let mut hot = Worst::new();
    let mut cold = Worst::new();
    for &a in &ALPHAS {
        hot.dev(|| format!("alpha={a} beta=0.01"), thermal_purity(&osc(a), &th(0.01), PurityMethod::Reduced, tol));
        cold.dev(|| format!("alpha={a} beta=10"), thermal_purity(&osc(a), &th(10.0), PurityMethod::Reduced, tol).map(|p| (p - 1.0).abs()));
    }
    let slow = start.elapsed().as_secs_f64() > 120.0;
    let passed = w.value <= 1e-5 && hot.value <= 0.011 && cold.value <= 1e-6 && !slow;
    let detail = format!(
        "max purity(beta=0.01)={:.6} max|purity(beta=10)-1|={:.1e}{} {}{}{}",
        hot.value,
        cold.value,
        if slow { " over 120 s;" } else { "" },
        w.summary(),
        hot.summary(),
        cold.summary()
    );
    report(2, passed, w.value, 1e-5, detail, start)
}

fn c3(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let mut w = Worst::new();
    for &a in &[0.5, 1.5] {
        for &b in &[0.5, 1.0, 2.0] {
            let r = thermal_purity(&osc(a), &th(b), PurityMethod::Hypergeometric, tol)
                .and_then(|h| Ok((h - thermal_purity(&osc(a), &th(b), PurityMethod::Reduced, tol)?).abs()));
            w.dev(|| format!("alpha={a} beta={b}"), r);
        }
    }
    report(3, w.value <= 1e-6, w.value, 1e-6, w.summary(), start)
}

fn c4(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let mut w = Worst::new();
    for s in qg_states() {
        w.dev(|| s.descriptor(), purity_grid(&s, tol).map(|p| (p - 1.0).abs()));
    }
    for s in eigen_states() {
        w.dev(|| s.descriptor(), purity_grid(&s, tol).map(|p| (p - 1.0).abs()));
    }
    report(4, w.value <= 1e-6, w.value, 1e-6, w.summary(), start)
}

fn c5(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let mut w = Worst::new();
    let mut count = 0;
    let mut check = |s: &dyn KernelState<f64>| {
        count += 1;
        w.dev(|| s.descriptor(), normalization(s, tol).map(|v| (v - 1.0).abs()));
    };
    for &a in &ALPHAS {
        for &b in &BETAS {
            check(&ThermalState::new(osc(a), th(b), ThermalMethod::Bessel));
        }
    }
    for s in qg_states() {
        check(&s);
    }
    for s in eigen_states() {
        check(&s);
    }
    let detail = format!("{} states {}", count, w.summary());
    report(5, w.value <= 1e-6, w.value, 1e-6, detail, start)
}

fn c6(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let p = osc(1.5);
    let states: Vec<_> = (0..=3).map(|n| Eigenstate::new(p, n)).collect();
    let mut w = Worst::new();
    for m in 0..=3 {
        for n in m..=3 {
            let want = if m == n { 1.0 } else { 0.0 };
            w.dev(|| format!("m={m} n={n}"), overlap(&states[m], &states[n], tol).map(|v| (v - want).abs()));
        }
    }
    let mix = Mixture::new(vec![(0.5, &states[0] as &dyn KernelState<f64>), (0.5, &states[1])]);
    w.dev(|| "mixture".into(), mix.and_then(|m| purity_grid(&m, tol)).map(|v| (v - 0.5).abs()));
    report(6, w.value <= 1e-6, w.value, 1e-6, w.summary(), start)
}

/// Fixed 10×10 sample grid shared by the dual-method comparisons.
pub fn sample_grid() -> GridSpec<f64> {
    GridSpec { x_min: 0.3, x_max: 3.0, nx: 10, k_min: -2.7, k_max: 2.7, nk: 10 }
}

fn c7(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-12);
    let g = sample_grid();
    let mut qg = Worst::new();
    for &(a, gm, t) in &[(1.5, 0.8, 1.0), (0.5, 0.5, 0.0), (-0.5, 1.0, PI / 2.0)] {
        let s = QuasiGaussian::new(osc(a), QuasiGaussianParams::new(gm, t).expect("fixed state"));
        for i in 0..g.nx {
            for j in 0..g.nk {
                let (x, k) = (g.x(i), g.k(j));
                let r = s.wigner_series(x, k, tol).and_then(|v| Ok((v - kernel_wigner(&s, x, k, tol)?).abs()));
                qg.dev(|| format!("{} at ({x},{k})", s.descriptor()), r);
            }
        }
    }
    let mut therm = Worst::new();
    for &(a, b) in &[(1.5, 1.0), (-0.5, 0.5), (0.75, 2.0)] {
        let s = ThermalState::new(osc(a), th(b), ThermalMethod::Series);
        let bf = ThermalState::new(osc(a), th(b), ThermalMethod::Bessel);
        for i in 0..g.nx {
            for j in 0..g.nk {
                let (x, k) = (g.x(i), g.k(j));
                let r = s.wigner(x, k, tol).and_then(|v| Ok((v - bf.wigner(x, k, tol)?).abs()));
                therm.dev(|| format!("{} at ({x},{k})", s.descriptor()), r);
            }
        }
    }
    let m = qg.value.max(therm.value);
    let detail = format!("quasi-gaussian {:.1e}, thermal {:.1e} {}{}", qg.value, therm.value, qg.summary(), therm.summary());
    report(7, m <= 1e-7, m, 1e-7, detail, start)
}

/// Region of the continuity criterion.
pub fn continuity_region() -> GridSpec<f64> {
    GridSpec { x_min: 2.0, x_max: 4.0, nx: 5, k_min: -2.0, k_max: 2.0, nk: 5 }
}

fn c8(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-11);
    let region = continuity_region();
    let e = Eigenstate::new(osc(1.5), 0);
    let h = Eigenstate::new(osc(-0.5), 0);
    let res = |s: &Eigenstate<f64>, order: MoyalOrder| continuity_residual(s, &region, order, tol);
    let r = (|| -> Result<(f64, f64, f64, f64, f64)> {
        Ok((
            res(&e, MoyalOrder::Truncated(6))?,
            res(&e, MoyalOrder::Truncated(3))?,
            res(&e, MoyalOrder::Truncated(0))?,
            res(&h, MoyalOrder::Truncated(0))?,
            res(&e, MoyalOrder::Resummed)?,
        ))
    })();
    match r {
        Ok((r6, r3, r0, rh, rr)) => {
            let passed = r6 < 1e-6 && r3 <= r0 && rh < 1e-6;
            let detail = format!(
                "alpha=1.5: eta6={r6:.2e} eta3={r3:.2e} eta0={r0:.2e} resummed={rr:.2e}; alpha=-0.5 eta0={rh:.2e}"
            );
            report(8, passed, r6.max(rh), 1e-6, detail, start)
        }
        Err(err) => report(8, false, f64::INFINITY, 1e-6, err.to_string(), start),
    }
}

/// Dormand–Prince 5(4) with step-size control. Calls `on_step(t, y)` after
/// every accepted step; the last step is clipped to land on `t1`.
pub fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    t1: f64,
    rtol: f64,
    atol: f64,
    mut on_step: impl FnMut(f64, &[f64; N]),
) -> [f64; N] {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) * 1e-3;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, &y);
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(s) {
                    *v += h * A[s][j] * kj[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            for s in 0..6 {
                y5[i] += h * A[6][s] * k[s][i];
            }
            let mut e = 0.0;
            for s in 0..7 {
                e += h * E[s] * k[s][i];
            }
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 {
            t = if t1 - (t + h) < 1e-15 * t1.abs().max(1.0) { t1 } else { t + h };
            y = y5;
            on_step(t, &y);
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    y
}

fn c9(_o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let mut dev = 0.0f64;
    let mut closure = 0.0f64;
    let mut drift = 0.0f64;
    let mut detail = String::new();
    for &(a, en) in &[(1.5, 2.0), (2.5, 5.0), (1.5, 10.0)] {
        let orbit = match classical_orbit(&osc(a), en) {
            Ok(v) => v,
            Err(e) => return report(9, false, f64::INFINITY, 1e-8, e.to_string(), start),
        };
        let g = osc(a).coupling();
        let (x0, k0) = orbit.point(0.0);
        let mut local = 0.0f64;
        let end = dopri5(
            |_, y| [y[1], -y[0] + g / (y[0] * y[0] * y[0])],
            [x0, k0],
            0.0,
            PI,
            1e-13,
            1e-14,
            |t, y| {
                let (x, k) = orbit.point(t);
                local = local.max((y[0] - x).abs()).max((y[1] - k).abs());
            },
        );
        let (xe, ke) = orbit.point(PI);
        local = local.max((end[0] - xe).abs()).max((end[1] - ke).abs());
        dev = dev.max(local);
        closure = closure.max((orbit.x(PI) - orbit.x(0.0)).abs()).max((orbit.k(PI) - orbit.k(0.0)).abs());
        for i in 0..=400 {
            let tau = PI * i as f64 / 400.0;
            let (x, k) = orbit.point(tau);
            drift = drift.max((orbit.hamiltonian(x, k) - en).abs());
        }
        detail.push_str(&format!("alpha={a} E={en}: rk={local:.1e}; "));
    }
    detail.push_str(&format!("closure={closure:.1e} drift={drift:.1e}"));
    let passed = dev <= 1e-8 && closure <= 1e-10 && drift <= 1e-10;
    report(9, passed, dev, 1e-8, detail, start)
}

/// Pinned purity flux for α = 1.5, n = 0, E = 2 over one orbit. It vanishes
/// because W is even in k while dx_C/dτ is odd along the contour.
pub const FLUX_PIN: f64 = 0.0;

fn c10(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-12);
    let base = FluxOptions { panels: 32, ..FluxOptions::default() };
    let r = (|| -> Result<(f64, f64, f64, f64, f64)> {
        let h = Eigenstate::new(osc(-0.5), 0);
        let z_harm = purity_flux(&h, &classical_orbit(&osc(-0.5), 2.0)?, 6, &base, tol)?;
        let e = Eigenstate::new(osc(1.5), 0);
        let orbit = classical_orbit(&osc(1.5), 2.0)?;
        let z_eta0 = purity_flux(&e, &orbit, 0, &base, tol)?;
        let f5 = purity_flux(&e, &orbit, 5, &base, tol)?;
        let f7 = purity_flux(&e, &orbit, 7, &base, tol)?;
        let f5d = purity_flux(&e, &orbit, 5, &FluxOptions { panels: 64, ..base }, tol)?;
        Ok((z_harm.abs().max(z_eta0.abs()), f5, f7, f5d, 0.0))
    })();
    match r {
        Ok((z, f5, f7, f5d, _)) => {
            let stab = (f5 - f7).abs().max((f5 - f5d).abs());
            let pin = (f5 - FLUX_PIN).abs();
            let passed = z == 0.0 && f5.is_finite() && stab <= 1e-7 && pin <= 1e-10;
            let detail = format!("trivial={z:e} flux={f5:.3e} eta7={f7:.3e} doubled={f5d:.3e}");
            report(10, passed, stab.max(pin), 1e-7, detail, start)
        }
        Err(err) => report(10, false, f64::INFINITY, 1e-7, err.to_string(), start),
    }
}

fn c11(o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let tol = o.tol(1e-10);
    let mut w = Worst::new();
    for &a in &[-0.5, 1.5] {
        for &b in &[0.5, 1.0, 2.0] {
            let r = energy_average(&osc(a), &th(b), tol).map(|v| (v - energy_closed_form(&th(b))).abs());
            w.dev(|| format!("alpha={a} beta={b}"), r);
        }
    }
    report(11, w.value <= 1e-6, w.value, 1e-6, w.summary(), start)
}

fn c12(_o: &ValidationOptions) -> CriterionReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rec = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..40usize);
        let a: f64 = rng.gen_range(-0.95..4.0);
        let x: f64 = rng.gen_range(0.0..30.0);
        let (lp, l, lm) = (laguerre(n + 1, a, x), laguerre(n, a, x), laguerre(n - 1, a, x));
        let nf = n as f64;
        let lhs = (nf + 1.0) * lp;
        let rhs = (2.0 * nf + 1.0 + a - x) * l - (nf + a) * lm;
        let scale = lhs.abs() + ((2.0 * nf + 1.0 + a + x) * l).abs() + ((nf + a) * lm).abs();
        rec = rec.max((lhs - rhs).abs() / scale);
    }
    let mut w = Worst::new();
    let mut bil = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(0..=6usize);
        let a: f64 = rng.gen_range(-0.9..3.0);
        let x: f64 = rng.gen_range(0.01..10.0);
        let y: f64 = rng.gen_range(0.01..10.0);
        let lhs = laguerre(n, a, x) * laguerre(n, a, y);
        w.dev(
            || format!("bilinear n={n}"),
            laguerre_bilinear_sum(n, a, x, y).map(|(r, s)| (lhs - r).abs() / s.max(lhs.abs())),
        );
    }
    bil = bil.max(w.value);
    let mut hh = Worst::new();
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-0.9..3.0);
        let lam: f64 = rng.gen_range(0.05..0.6);
        let x: f64 = rng.gen_range(0.01..10.0);
        let y: f64 = rng.gen_range(0.01..10.0);
        let r = hille_hardy_sum(a, lam, x, y, 400)
            .and_then(|(s, sc)| Ok((s - hille_hardy_closed(a, lam, x, y)?).abs() / sc));
        hh.dev(|| format!("hille-hardy alpha={a} lambda={lam}"), r);
    }
    let m = rec.max(bil).max(hh.value);
    let detail = format!("recurrence {rec:.1e}, bilinear {bil:.1e}, hille-hardy {:.1e} {}{}", hh.value, w.summary(), hh.summary());
    report(12, m <= 1e-10, m, 1e-10, detail, start)
}

/// Runs one criterion by id (1..=12).
pub fn run(id: u32, o: &ValidationOptions) -> Option<CriterionReport> {
    let f = match id {
        1 => c1,
        2 => c2,
        3 => c3,
        4 => c4,
        5 => c5,
        6 => c6,
        7 => c7,
        8 => c8,
        9 => c9,
        10 => c10,
        11 => c11,
        12 => c12,
        _ => return None,
    };
    Some(f(o))
}

pub fn run_all(o: &ValidationOptions) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|(id, _)| run(*id, o)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dopri5_exponential() {
        let mut steps = 0;
        let y = dopri5(|_, y| [-y[0]], [1.0], 0.0, 2.0, 1e-12, 1e-14, |_, _| steps += 1);
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-11);
        assert!(steps > 5);
    }

    #[test]
    fn dopri5_harmonic_period() {
        let y = dopri5(|_, y| [y[1], -y[0]], [1.0, 0.0], 0.0, 2.0 * PI, 1e-13, 1e-14, |_, _| {});
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(0, &ValidationOptions::default()).is_none());
        assert!(run(13, &ValidationOptions::default()).is_none());
    }

    #[test]
    fn loose_tolerance_breaks_a_criterion() {
        let r = run(6, &ValidationOptions { tol: Some(1.0) }).unwrap();
        assert!(!r.passed, "{}", r.line());
    }
}
