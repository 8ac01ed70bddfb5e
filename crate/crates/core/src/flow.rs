//! Wigner currents with Moyal corrections, continuity diagnostics,
//! classical orbits and contour integrals of probability and purity.

use crate::eigensystem::{potential_derivative, OscillatorParams};
use crate::error::{domain, Error, Result};
use crate::quadrature::{composite_kronrod, try_fourier_integral, try_integrate, FourierOptions, Tolerance, Trig};
use crate::scalar::{c, Real};
use crate::thermal::ThermalState;
use crate::wigner_states::{k_window_integral, Eigenstate, GridSpec, KernelState, QuasiGaussian};

/// A state whose kernel can be differentiated in x under the integral.
pub trait FlowState<T: Real>: KernelState<T> {
    fn oscillator(&self) -> &OscillatorParams<T>;

    /// K(x, s) = x g(x, xs) and ∂K/∂x at fixed s.
    fn scaled(&self, x: T, s: T) -> Result<(T, T)>;

    /// d s(x)/dx of the k-shift.
    fn shift_derivative(&self, _x: T) -> T {
        T::zero()
    }
}

impl<T: Real> FlowState<T> for Eigenstate<T> {
    fn oscillator(&self) -> &OscillatorParams<T> {
        self.params()
    }

    fn scaled(&self, x: T, s: T) -> Result<(T, T)> {
        Ok(self.scaled_kernel(x, s))
    }
}

impl<T: Real> FlowState<T> for ThermalState<T> {
    fn oscillator(&self) -> &OscillatorParams<T> {
        self.params().0
    }

    fn scaled(&self, x: T, s: T) -> Result<(T, T)> {
        self.scaled_kernel(x, s)
    }
}

impl<T: Real> FlowState<T> for QuasiGaussian<T> {
    fn oscillator(&self) -> &OscillatorParams<T> {
        self.params().0
    }

    fn scaled(&self, x: T, s: T) -> Result<(T, T)> {
        Ok(self.scaled_kernel(x, s))
    }

    fn shift_derivative(&self, _x: T) -> T {
        -self.tilde_chi()
    }
}

/// J_x = k W.
pub fn current_x<T: Real>(w: T, k: T) -> T {
    k * w
}

/// U^{(2η+1)}(x)/(2η+1)! for η = 0..=eta_max.
fn moyal_coefficients<T: Real>(p: &OscillatorParams<T>, x: T, eta_max: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(eta_max + 1);
    let mut fact = T::one();
    for eta in 0..=eta_max {
        let m = 2 * eta + 1;
        if eta > 0 {
            fact = fact * c((m - 1) as f64) * c(m as f64);
        }
        out.push(potential_derivative(p, x, m)? / fact);
    }
    Ok(out)
}

/// Σ_{η≥1} d_η y^{2η}.
fn correction_series<T: Real>(d: &[T], y: T) -> T {
    let y2 = y * y;
    let mut acc = T::zero();
    for &v in d[1..].iter().rev() {
        acc = (acc + v) * y2;
    }
    acc
}

/// Wigner function, currents and their first derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowPoint<T> {
    pub w: T,
    pub dw_dx: T,
    pub dw_dk: T,
    pub jx: T,
    pub jk: T,
    pub djk_dk: T,
    /// η ≥ 1 part of J_k.
    pub delta_jk: T,
}

impl<T: Real> FlowPoint<T> {
    /// ∇·𝒥 = ∂J_x/∂x + ∂J_k/∂k.
    pub fn divergence(&self, k: T) -> T {
        k * self.dw_dx + self.djk_dk
    }
}

struct Integrator<'a, T: Real, S: FlowState<T> + ?Sized> {
    s: &'a S,
    x: T,
    omega: T,
    opts: FourierOptions<T>,
}

impl<T: Real, S: FlowState<T> + ?Sized> Integrator<'_, T, S> {
    fn new(s: &S, x: T, k: T, tol: T) -> Integrator<'_, T, S> {
        let q = k - s.shift(x);
        let mut opts = FourierOptions::new(tol);
        opts.endpoint_substitution = s.endpoint_exponent() < c(0.5);
        let ye = s.y_extent(x);
        if ye < x {
            opts.cutoff = Some(ye / x);
        }
        Integrator { s, x, omega: c::<T>(2.0) * q * x, opts }
    }

    /// ∫_0^1 f(K, K_x, s) trig(ω s) ds.
    fn run(&self, trig: Trig, f: impl Fn(T, T, T) -> T) -> Result<T> {
        let r = try_fourier_integral(
            |s: T| {
                let (k, kx) = self.s.scaled(self.x, s)?;
                Ok(f(k, kx, s))
            },
            T::one(),
            self.omega,
            trig,
            &self.opts,
        )?;
        Ok(r.value)
    }
}

/// Truncation of the Moyal series in J_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoyalOrder {
    /// Terms η = 0..=eta_max.
    Truncated(usize),
    /// All orders, i.e. the nonlocal form (U(x+y) − U(x−y))/(2y).
    Resummed,
}

impl From<usize> for MoyalOrder {
    fn from(eta_max: usize) -> Self {
        MoyalOrder::Truncated(eta_max)
    }
}

/// y ↦ J_k insertion minus its classical part U'(x).
fn correction<T: Real>(p: &OscillatorParams<T>, x: T, order: MoyalOrder) -> Result<(T, Box<dyn Fn(T) -> T>)> {
    let u1 = potential_derivative(p, x, 1)?;
    let g = p.coupling();
    match order {
        MoyalOrder::Truncated(eta_max) => {
            let d = moyal_coefficients(p, x, eta_max)?;
            if d[1..].iter().all(|v| *v == T::zero()) {
                return Ok((u1, Box::new(|_| T::zero())));
            }
            Ok((u1, Box::new(move |y| correction_series(&d, y))))
        }
        MoyalOrder::Resummed => {
            if g == T::zero() {
                return Ok((u1, Box::new(|_| T::zero())));
            }
            // (g/2)[1/(x+y)² − 1/(x−y)²]/(2y) = −g x / ((x+y)²(x−y)²)
            let x3 = x * x * x;
            Ok((
                u1,
                Box::new(move |y: T| {
                    let d = (x - y) * (x + y);
                    g / x3 - g * x / (d * d)
                }),
            ))
        }
    }
}

fn check_order<T: Real, S: FlowState<T> + ?Sized>(s: &S, order: MoyalOrder) -> Result<()> {
    if order == MoyalOrder::Resummed && s.oscillator().coupling() != T::zero() && !(s.endpoint_exponent() > T::one()) {
        return Err(Error::Divergent(format!(
            "resummed current of {} needs edge exponent > 1, got {}",
            s.descriptor(),
            s.endpoint_exponent()
        )));
    }
    Ok(())
}

/// All flow quantities at (x, k) with the Moyal series cut at eta_max.
pub fn flow_point<T: Real, S: FlowState<T> + ?Sized>(s: &S, x: T, k: T, order: impl Into<MoyalOrder>, tol: T) -> Result<FlowPoint<T>> {
    let order = order.into();
    if !(x > T::zero()) {
        return domain(format!("flow quantities need x > 0, got {}", x));
    }
    check_order(s, order)?;
    let two = c::<T>(2.0);
    let four = c::<T>(4.0);
    let (u1, corr) = correction(s.oscillator(), x, order)?;
    let it = Integrator::new(s, x, k, tol);
    let i1 = it.run(Trig::Cos, |kk, _, _| kk)?;
    let i2 = it.run(Trig::Cos, |_, kx, _| kx)?;
    let i3 = it.run(Trig::Sin, |kk, _, ss| kk * ss)?;
    let quantum = corr(x * c(0.5)) != T::zero();
    let guard = |kk: T, v: T| if kk == T::zero() { T::zero() } else { kk * v };
    let (i6, i7) = if quantum {
        (
            it.run(Trig::Cos, |kk, _, ss| guard(kk, corr(x * ss)))?,
            it.run(Trig::Sin, |kk, _, ss| guard(kk, ss * corr(x * ss)))?,
        )
    } else {
        (T::zero(), T::zero())
    };
    let q = k - s.shift(x);
    let w = two * i1;
    let delta_jk = -two * i6;
    Ok(FlowPoint {
        w,
        dw_dx: two * i2 - four * (q - x * s.shift_derivative(x)) * i3,
        dw_dk: -four * x * i3,
        jx: current_x(w, k),
        jk: -u1 * w + delta_jk,
        djk_dk: four * x * (u1 * i3 + i7),
        delta_jk,
    })
}

/// J_k = −Σ_η (i/2)^{2η}/(2η+1)! U^{(2η+1)} ∂_k^{2η} W.
pub fn current_k<T: Real, S: FlowState<T> + ?Sized>(s: &S, x: T, k: T, order: impl Into<MoyalOrder>, tol: T) -> Result<T> {
    let order = order.into();
    if !(x > T::zero()) {
        return domain(format!("J_k needs x > 0, got {}", x));
    }
    check_order(s, order)?;
    let (u1, corr) = correction(s.oscillator(), x, order)?;
    let it = Integrator::new(s, x, k, tol);
    let v = it.run(Trig::Cos, |kk, _, ss| if kk == T::zero() { T::zero() } else { kk * (u1 + corr(x * ss)) })?;
    Ok(-c::<T>(2.0) * v)
}

/// Individual Moyal terms of J_k, η = 0..=eta_max.
pub fn moyal_terms<T: Real, S: FlowState<T> + ?Sized>(s: &S, x: T, k: T, eta_max: usize, tol: T) -> Result<Vec<T>> {
    if !(x > T::zero()) {
        return domain(format!("J_k needs x > 0, got {}", x));
    }
    let d = moyal_coefficients(s.oscillator(), x, eta_max)?;
    let it = Integrator::new(s, x, k, tol);
    let mut out = Vec::with_capacity(eta_max + 1);
    for (eta, dv) in d.iter().enumerate() {
        if *dv == T::zero() {
            out.push(T::zero());
            continue;
        }
        let v = it.run(Trig::Cos, |kk, _, ss| kk * (x * ss).powi(2 * eta as i32))?;
        out.push(-c::<T>(2.0) * *dv * v);
    }
    Ok(out)
}

/// max |∇·𝒥| over the nodes of `region`.
pub fn continuity_residual<T: Real, S: FlowState<T> + ?Sized>(
    s: &S,
    region: &GridSpec<T>,
    order: impl Into<MoyalOrder>,
    tol: T,
) -> Result<T> {
    let order = order.into();
    region.validate()?;
    let mut worst = T::zero();
    for i in 0..region.nx {
        for j in 0..region.nk {
            let (x, k) = (region.x(i), region.k(j));
            worst = worst.max(flow_point(s, x, k, order, tol)?.divergence(k).abs());
        }
    }
    Ok(worst)
}

/// |W| at or below this masks ∇·w.
pub const WIGNER_FLOOR: f64 = 1e-10;

/// ∇·w with w = 𝒥/W; None where |W| ≤ [`WIGNER_FLOOR`].
pub fn pseudo_velocity_divergence<T: Real, S: FlowState<T> + ?Sized>(
    s: &S,
    x: T,
    k: T,
    order: impl Into<MoyalOrder>,
    tol: T,
) -> Result<Option<T>> {
    let fp = flow_point(s, x, k, order, tol)?;
    if fp.w.abs() <= c(WIGNER_FLOOR) {
        return Ok(None);
    }
    let num = fp.w * fp.divergence(k) - (fp.jx * fp.dw_dx + fp.jk * fp.dw_dk);
    Ok(Some(num / (fp.w * fp.w)))
}

/// W, J_x, J_k and ∇·𝒥 on a grid, x-major; nodes with x ≤ 0 hold zeros.
#[derive(Clone, Debug)]
pub struct FlowField<T> {
    pub grid: GridSpec<T>,
    pub w: Vec<T>,
    pub jx: Vec<T>,
    pub jk: Vec<T>,
    pub divergence: Vec<T>,
    pub order: MoyalOrder,
}

impl<T: Real> FlowField<T> {
    pub fn fill<S: FlowState<T> + ?Sized>(s: &S, grid: GridSpec<T>, order: impl Into<MoyalOrder>, tol: T) -> Result<Self> {
        let order = order.into();
        grid.validate()?;
        let n = grid.nx * grid.nk;
        let mut f = Self { grid, w: Vec::with_capacity(n), jx: Vec::with_capacity(n), jk: Vec::with_capacity(n), divergence: Vec::with_capacity(n), order };
        for i in 0..grid.nx {
            let x = grid.x(i);
            for j in 0..grid.nk {
                let k = grid.k(j);
                if !(x > T::zero()) {
                    for v in [&mut f.w, &mut f.jx, &mut f.jk, &mut f.divergence] {
                        v.push(T::zero());
                    }
                    continue;
                }
                let fp = flow_point(s, x, k, order, tol)?;
                f.w.push(fp.w);
                f.jx.push(fp.jx);
                f.jk.push(fp.jk);
                f.divergence.push(fp.divergence(k));
            }
        }
        Ok(f)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.grid.nk + j
    }
}

/// Closed-form orbit of H = ½(k² + x² + g/x²) at energy E.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalOrbit<T> {
    p: OscillatorParams<T>,
    energy: T,
    amplitude: T,
}

/// Orbit through the outer turning point at τ = 0.
pub fn classical_orbit<T: Real>(p: &OscillatorParams<T>, energy: T) -> Result<ClassicalOrbit<T>> {
    let g = p.coupling();
    if g < T::zero() {
        return Err(Error::Unsupported(format!(
            "g = {} < 0: the classical particle falls to the centre and has no closed orbit",
            g
        )));
    }
    if !energy.is_finite() || energy < g.sqrt() {
        return Err(Error::NoOrbit(format!("E = {} is below the minimum sqrt(g) = {}", energy, g.sqrt())));
    }
    let a2 = energy * energy - g;
    // E = √g up to rounding is the zero-area orbit
    let amplitude = if a2 <= c::<T>(4.0) * T::epsilon() * energy * energy { T::zero() } else { a2.sqrt() };
    Ok(ClassicalOrbit { p: *p, energy, amplitude })
}

impl<T: Real> ClassicalOrbit<T> {
    pub fn params(&self) -> &OscillatorParams<T> {
        &self.p
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    /// √(E² − g).
    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// The orbit closes after π.
    pub fn period(&self) -> T {
        T::PI()
    }

    pub fn turning_points(&self) -> (T, T) {
        ((self.energy - self.amplitude).max(T::zero()).sqrt(), (self.energy + self.amplitude).sqrt())
    }

    pub fn x(&self, tau: T) -> T {
        (self.energy + self.amplitude * (tau + tau).cos()).max(T::zero()).sqrt()
    }

    /// k_C = dx_C/dτ.
    pub fn k(&self, tau: T) -> T {
        let x = self.x(tau);
        let s2 = (tau + tau).sin();
        if x > T::zero() {
            -self.amplitude * s2 / x
        } else {
            // g = 0 bounce at the origin
            let v = (self.energy + self.energy).sqrt();
            if s2 > T::zero() {
                -v
            } else {
                v
            }
        }
    }

    pub fn point(&self, tau: T) -> (T, T) {
        (self.x(tau), self.k(tau))
    }

    /// ½(k² + x² + g/x²).
    pub fn hamiltonian(&self, x: T, k: T) -> T {
        c::<T>(0.5) * (k * k + x * x + self.p.coupling() / (x * x))
    }

    /// Classical phase-space velocity (k, −x + g/x³).
    pub fn velocity(&self, tau: T) -> (T, T) {
        let (x, k) = self.point(tau);
        (k, -x + self.p.coupling() / (x * x * x))
    }

    /// Unit normal to the contour, v rotated by −π/2.
    pub fn normal(&self, tau: T) -> (T, T) {
        let (vx, vk) = self.velocity(tau);
        let n = vx.hypot(vk);
        (vk / n, -vx / n)
    }

    /// k_C(x) on the upper branch, zero outside the turning points.
    pub fn k_branch(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        let v = self.energy + self.energy - x * x - self.p.coupling() / (x * x);
        v.max(T::zero()).sqrt()
    }
}

/// ς_C: probability inside the contour, k between ±k_C(x).
pub fn contour_probability<T: Real, S: KernelState<T> + ?Sized>(s: &S, orbit: &ClassicalOrbit<T>, tol: T) -> Result<T> {
    let (lo, hi) = orbit.turning_points();
    if !(hi > lo) {
        return Ok(T::zero());
    }
    let r = try_integrate(
        |x: T| {
            let kc = orbit.k_branch(x);
            if kc == T::zero() {
                return Ok(T::zero());
            }
            k_window_integral(s, x, -kc, kc, tol * c(0.1))
        },
        lo,
        hi,
        Tolerance::new(tol).with_limit(4000),
    )?;
    Ok(r.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluxSpan {
    /// One closed orbit, τ ∈ [τ₀, τ₀ + π].
    Orbit,
    /// τ ∈ [τ₀, τ₀ + 2π].
    TwoPi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxOptions<T> {
    pub span: FluxSpan,
    pub tau_start: T,
    /// Equal τ-panels of the composite Kronrod rule.
    pub panels: usize,
}

impl<T: Real> Default for FluxOptions<T> {
    fn default() -> Self {
        Self { span: FluxSpan::Orbit, tau_start: T::zero(), panels: 64 }
    }
}

/// −∫ W ΔJ_k dx_C/dτ dτ along the classical contour.
pub fn purity_flux<T: Real, S: FlowState<T> + ?Sized>(
    s: &S,
    orbit: &ClassicalOrbit<T>,
    order: impl Into<MoyalOrder>,
    opts: &FluxOptions<T>,
    tol: T,
) -> Result<T> {
    let order = order.into();
    // ΔJ_k needs U''' ≠ 0
    if order == MoyalOrder::Truncated(0) || s.oscillator().coupling() == T::zero() {
        return Ok(T::zero());
    }
    let span = match opts.span {
        FluxSpan::Orbit => T::PI(),
        FluxSpan::TwoPi => T::PI() + T::PI(),
    };
    let r = composite_kronrod(
        |tau: T| {
            let (x, k) = orbit.point(tau);
            let fp = flow_point(s, x, k, order, tol)?;
            Ok(-fp.w * fp.delta_jk * k)
        },
        opts.tau_start,
        opts.tau_start + span,
        opts.panels,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensystem::potential_derivative;
    use crate::wigner_states::QuasiGaussianParams;

    fn osc(a: f64) -> OscillatorParams<f64> {
        OscillatorParams::new(a).unwrap()
    }

    #[test]
    fn current_x_examples() {
        assert_eq!(current_x(0.2, 0.0), 0.0);
        assert!((current_x(0.2f64, 1.5) - 0.3).abs() < 1e-15);
        assert_eq!(current_x(0.2, -1.5), -current_x(0.2, 1.5));
    }

    #[test]
    fn classical_current_profile() {
        let e = Eigenstate::new(osc(1.5), 0);
        let (x, k) = (1.2, 0.5);
        let jk = current_k(&e, x, k, 0, 1e-12).unwrap();
        let w = e.wigner(x, k, 1e-12).unwrap();
        let u1 = potential_derivative(e.params(), x, 1).unwrap();
        assert!((jk + u1 * w).abs() < 1e-12);
    }

    #[test]
    fn quadratic_potential_has_no_corrections() {
        let e = Eigenstate::new(osc(-0.5), 2);
        let t = moyal_terms(&e, 1.4, 0.3, 6, 1e-12).unwrap();
        assert!(t[1..].iter().all(|v| *v == 0.0));
        let fp = flow_point(&e, 1.4, 0.3, 6, 1e-12).unwrap();
        assert_eq!(fp.delta_jk, 0.0);
        assert!((fp.jk + 1.4 * fp.w).abs() < 1e-14);
    }

    #[test]
    fn moyal_terms_decrease_and_converge() {
        let e = Eigenstate::new(osc(1.5), 0);
        // U'(1.2) is nearly zero, so the ordering starts at η = 1
        let t = moyal_terms(&e, 1.2, 0.5, 6, 1e-13).unwrap();
        for w in t[1..].windows(2) {
            assert!(w[1].abs() < w[0].abs(), "{t:?}");
        }
        let j4 = current_k(&e, 1.2, 0.5, 4, 1e-13).unwrap();
        let j6 = current_k(&e, 1.2, 0.5, 6, 1e-13).unwrap();
        let j40 = current_k(&e, 1.2, 0.5, 40, 1e-13).unwrap();
        let jr = current_k(&e, 1.2, 0.5, MoyalOrder::Resummed, 1e-13).unwrap();
        assert!((j6 - jr).abs() < (j4 - jr).abs());
        // tail of an η^{-2} series
        assert!((j40 - jr).abs() < 0.2 * (j6 - jr).abs(), "{j40} {j6} {jr}");
        for &x in &[1.0, 2.0, 3.0] {
            let t = moyal_terms(&e, x, 0.4, 6, 1e-13).unwrap();
            for w in t[1..].windows(2) {
                assert!(w[1].abs() <= w[0].abs(), "x={x} {t:?}");
            }
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let p = osc(1.5);
        let q = QuasiGaussian::new(p, QuasiGaussianParams::new(0.8, 0.4).unwrap());
        let e = Eigenstate::new(p, 1);
        let t = ThermalState::new(p, crate::thermal::ThermalParams::new(0.9).unwrap(), crate::thermal::ThermalMethod::Bessel);
        let states: [&dyn FlowState<f64>; 3] = [&e, &q, &t];
        for st in states {
            let (x, k, h) = (1.3, 0.6, 1e-5);
            let fp = flow_point(st, x, k, 3, 1e-13).unwrap();
            let wx = (st.wigner(x + h, k, 1e-13).unwrap() - st.wigner(x - h, k, 1e-13).unwrap()) / (2.0 * h);
            let wk = (st.wigner(x, k + h, 1e-13).unwrap() - st.wigner(x, k - h, 1e-13).unwrap()) / (2.0 * h);
            let jkk = (current_k(st, x, k + h, 3, 1e-13).unwrap() - current_k(st, x, k - h, 3, 1e-13).unwrap()) / (2.0 * h);
            assert!((fp.w - st.wigner(x, k, 1e-13).unwrap()).abs() < 1e-12);
            assert!((fp.dw_dx - wx).abs() < 1e-7, "{} {} {}", st.descriptor(), fp.dw_dx, wx);
            assert!((fp.dw_dk - wk).abs() < 1e-7);
            assert!((fp.djk_dk - jkk).abs() < 1e-7);
            assert!((fp.jk - current_k(st, x, k, 3, 1e-13).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_continuity() {
        // the half-line cut leaks like e^{-2x²}
        let e = Eigenstate::new(osc(-0.5), 0);
        let far = GridSpec { x_min: 4.0, x_max: 4.5, nx: 3, k_min: -2.0, k_max: 2.0, nk: 5 };
        assert!(continuity_residual(&e, &far, 0, 1e-12).unwrap() < 1e-9);
        let near = GridSpec { x_min: 1.0, x_max: 1.0, nx: 1, k_min: 0.5, k_max: 0.5, nk: 1 };
        assert!(continuity_residual(&e, &near, 0, 1e-12).unwrap() > 1e-3);
    }

    #[test]
    fn resummed_current_is_divergence_free() {
        let e = Eigenstate::new(osc(1.5), 0);
        let region = GridSpec { x_min: 2.0, x_max: 4.0, nx: 5, k_min: -2.0, k_max: 2.0, nk: 5 };
        let r = continuity_residual(&e, &region, MoyalOrder::Resummed, 1e-12).unwrap();
        assert!(r < 1e-8, "{r}");
        let e = Eigenstate::new(osc(2.5), 2);
        let r = continuity_residual(&e, &region, MoyalOrder::Resummed, 1e-12).unwrap();
        assert!(r < 1e-8, "{r}");
        let e = Eigenstate::new(osc(0.25), 0);
        assert!(matches!(current_k(&e, 1.0, 0.0, MoyalOrder::Resummed, 1e-10), Err(Error::Divergent(_))));
    }

    #[test]
    fn pseudo_velocity() {
        let e = Eigenstate::new(osc(-0.5), 0);
        for &(x, k) in &[(0.8, 0.3), (1.5, -1.0), (2.2, 0.0)] {
            let v = pseudo_velocity_divergence(&e, x, k, 0, 1e-12).unwrap().unwrap();
            assert!(v.abs() < 1e-8);
        }
        let e = Eigenstate::new(osc(1.5), 0);
        let a = pseudo_velocity_divergence(&e, 1.2, 0.8, 4, 1e-13).unwrap().unwrap();
        let b = pseudo_velocity_divergence(&e, 1.2, 0.8, 6, 1e-13).unwrap().unwrap();
        let m = pseudo_velocity_divergence(&e, 1.2, -0.8, 6, 1e-13).unwrap().unwrap();
        let r = pseudo_velocity_divergence(&e, 1.2, 0.8, MoyalOrder::Resummed, 1e-13).unwrap().unwrap();
        assert!(a.is_finite() && (b - r).abs() < (a - r).abs(), "{a} {b} {r}");
        // W even in k makes ∇·w odd
        assert!((b + m).abs() < 1e-9);
        assert_eq!(pseudo_velocity_divergence(&e, 9.5, 0.0, 2, 1e-12).unwrap(), None);
    }

    #[test]
    fn orbit_geometry() {
        assert!(matches!(classical_orbit(&osc(0.0), 2.0), Err(Error::Unsupported(_))));
        assert!(matches!(classical_orbit(&osc(1.5), 1.0), Err(Error::NoOrbit(_))));
        let o = classical_orbit(&osc(1.5), 2.0).unwrap();
        let (lo, hi) = o.turning_points();
        assert!((lo - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-14);
        assert!((hi - (2.0 + 2f64.sqrt()).sqrt()).abs() < 1e-14);
        assert_eq!(o.k(0.0), 0.0);
        assert!(o.k(std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        for i in 0..50 {
            let tau = 0.13 * i as f64;
            let (x, k) = o.point(tau);
            assert!((o.hamiltonian(x, k) - 2.0).abs() < 1e-12);
            assert!((o.x(tau + std::f64::consts::PI) - x).abs() < 1e-12);
            assert!((o.k(tau + std::f64::consts::PI) - k).abs() < 1e-12);
            let (nx, nk) = o.normal(tau);
            let (vx, vk) = o.velocity(tau);
            assert!((nx * vx + nk * vk).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_matches_rk4() {
        let o = classical_orbit(&osc(1.5), 2.0).unwrap();
        let g = 2.0;
        let (mut x, mut k) = o.point(0.0);
        let rhs = |x: f64, k: f64| (k, -x + g / (x * x * x));
        let n = 20_000;
        let h = std::f64::consts::PI / n as f64;
        let mut worst = 0.0f64;
        for i in 0..n {
            let (a1, b1) = rhs(x, k);
            let (a2, b2) = rhs(x + 0.5 * h * a1, k + 0.5 * h * b1);
            let (a3, b3) = rhs(x + 0.5 * h * a2, k + 0.5 * h * b2);
            let (a4, b4) = rhs(x + h * a3, k + h * b3);
            x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            k += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            let (xc, kc) = o.point(h * (i + 1) as f64);
            worst = worst.max((x - xc).abs()).max((k - kc).abs());
        }
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn contour_probability_limits() {
        let e = Eigenstate::new(osc(1.5), 0);
        let o = classical_orbit(&osc(1.5), 2f64.sqrt()).unwrap();
        assert_eq!(contour_probability(&e, &o, 1e-10).unwrap(), 0.0);
        let o = classical_orbit(&osc(1.5), 1000.0).unwrap();
        let v = contour_probability(&e, &o, 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let o = classical_orbit(&osc(1.5), 2.0).unwrap();
        let v = contour_probability(&e, &o, 1e-10).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn flux_trivial_cases() {
        let e = Eigenstate::new(osc(-0.5), 0);
        let o = classical_orbit(&osc(-0.5), 2.0).unwrap();
        assert_eq!(purity_flux(&e, &o, 6, &FluxOptions::default(), 1e-10).unwrap(), 0.0);
        let e = Eigenstate::new(osc(1.5), 0);
        let o = classical_orbit(&osc(1.5), 2.0).unwrap();
        assert_eq!(purity_flux(&e, &o, 0, &FluxOptions::default(), 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn flux_stable_and_start_invariant() {
        let p = osc(1.5);
        let q = QuasiGaussian::new(p, QuasiGaussianParams::new(0.8, 0.4).unwrap());
        let o = classical_orbit(&p, 2.0).unwrap();
        let base = FluxOptions { panels: 24, ..FluxOptions::default() };
        let f = purity_flux(&q, &o, 5, &base, 1e-12).unwrap();
        assert!(f.abs() > 1e-6);
        let f7 = purity_flux(&q, &o, 7, &base, 1e-12).unwrap();
        let f2 = purity_flux(&q, &o, 5, &FluxOptions { panels: 48, ..base }, 1e-12).unwrap();
        assert!((f - f2).abs() < 1e-9, "{f} {f2}");
        let fr = purity_flux(&q, &o, MoyalOrder::Resummed, &base, 1e-12).unwrap();
        assert!((f7 - fr).abs() < (f - fr).abs(), "{f} {f7} {fr}");
        for &t0 in &[0.3, 1.1] {
            let g = purity_flux(&q, &o, 5, &FluxOptions { tau_start: t0, ..base }, 1e-12).unwrap();
            assert!((f - g).abs() < 1e-9);
        }
        let two = purity_flux(&q, &o, 5, &FluxOptions { span: FluxSpan::TwoPi, ..base }, 1e-12).unwrap();
        assert!((two - 2.0 * f).abs() < 1e-9);
    }
}
