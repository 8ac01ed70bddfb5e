//! Wigner functions of the eigenstates and of the quasi-Gaussian
//! superposition, phase-space grids, and the normalization, overlap and
//! purity functionals.
//!
//! Every state here has the form
//! W(x, k) = ∫_{−x}^{x} e^{2i(k − s(x))y} g(x, y) dy
//! with a real kernel g even in y and a real shift s(x). Integrals of W over
//! the whole k-line are done on the kernel: ∫W dk = π g(x, 0) and
//! ∫W_a W_b dk = 2π ∫_0^x g_a g_b cos(2(s_a − s_b)y) dy. The half-line cut
//! leaves W with algebraic |k| tails, so truncating k to a box converges
//! far too slowly for these.

use num_complex::Complex;

use crate::eigensystem::{EnergyLevel, OscillatorParams};
use crate::error::{domain, Error, Result};
use crate::quadrature::{try_fourier_integral, try_integrate, FourierOptions, Tolerance, Trig};
use crate::scalar::{c, Accumulator, Real};
use crate::specfun::{hyp1f1, laguerre, ln_gamma, SeriesControl};

/// A phase-space state given by its Wigner kernel.
pub trait KernelState<T: Real> {
    /// g(x, y) for 0 ≤ y < x.
    fn kernel(&self, x: T, y: T) -> Result<T>;

    /// Shift s(x) of the k-dependence: W depends on k − s(x).
    fn shift(&self, _x: T) -> T {
        T::zero()
    }

    /// ν in g ~ (x² − y²)^ν as |y| → x.
    fn endpoint_exponent(&self) -> T;

    /// Position beyond which the state is negligible.
    fn x_extent(&self) -> T;

    /// y beyond which g(x, ·) is negligible.
    fn y_extent(&self, x: T) -> T {
        x
    }

    /// Half-width of the k-range holding the bulk of W.
    fn k_extent(&self) -> T;

    fn descriptor(&self) -> String;

    fn wigner(&self, x: T, k: T, tol: T) -> Result<T> {
        kernel_wigner(self, x, k, tol)
    }
}

pub(crate) fn fourier_options<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T, tol: T) -> FourierOptions<T> {
    let mut o = FourierOptions::new(tol);
    o.endpoint_substitution = s.endpoint_exponent() < c(0.5);
    let y = s.y_extent(x);
    if y < x {
        o.cutoff = Some(y);
    }
    o
}

/// W(x, k) by the oscillatory kernel integral; zero for x ≤ 0.
pub fn kernel_wigner<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T, k: T, tol: T) -> Result<T> {
    if !(x > T::zero()) {
        return Ok(T::zero());
    }
    let w = k - s.shift(x);
    let r = try_fourier_integral(|y| s.kernel(x, y), x, w + w, Trig::Cos, &fourier_options(s, x, tol))?;
    Ok(r.value + r.value)
}

/// Energy eigenstate n of the singular oscillator.
#[derive(Clone, Copy, Debug)]
pub struct Eigenstate<T> {
    p: OscillatorParams<T>,
    n: usize,
    ln_pref: T,
}

impl<T: Real> Eigenstate<T> {
    pub fn new(p: OscillatorParams<T>, n: usize) -> Self {
        let ln_pref = c::<T>(2.0).ln() + p.ln_norm_sq(n) - T::PI().ln();
        Self { p, n, ln_pref }
    }

    pub fn params(&self) -> &OscillatorParams<T> {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Kernel in the scaled variable s = y/x together with its x-derivative:
    /// K(x, s) = x g(x, xs).
    pub fn scaled_kernel(&self, x: T, s: T) -> (T, T) {
        let one = T::one();
        if !(x > T::zero()) || s.abs() >= one {
            return (T::zero(), T::zero());
        }
        let a = self.p.alpha();
        let nu = a + c(0.5);
        let (sp, sm) = (one + s, one - s);
        let x2 = x * x;
        let (ta, tb) = (x2 * sp * sp, x2 * sm * sm);
        let ln_k = self.ln_pref + (nu + nu + one) * x.ln() + nu * (sp * sm).ln() - x2 * (one + s * s);
        let e = ln_k.exp();
        let (la, lb) = (laguerre(self.n, a, ta), laguerre(self.n, a, tb));
        let (da, db) = if self.n == 0 {
            (T::zero(), T::zero())
        } else {
            (-laguerre(self.n - 1, a + one, ta), -laguerre(self.n - 1, a + one, tb))
        };
        let k = e * la * lb;
        let two = c::<T>(2.0);
        let dk = k * ((nu + nu + one) / x - two * x * (one + s * s)) + e * two * x * (da * sp * sp * lb + la * db * sm * sm);
        (k, dk)
    }
}

impl<T: Real> KernelState<T> for Eigenstate<T> {
    fn kernel(&self, x: T, y: T) -> Result<T> {
        let y = y.abs();
        if !(y < x) {
            return Ok(T::zero());
        }
        let a = self.p.alpha();
        let nu = a + c(0.5);
        let ln_v = self.ln_pref + nu * ((x - y) * (x + y)).ln() - (x * x + y * y);
        Ok(ln_v.exp() * laguerre(self.n, a, (x + y) * (x + y)) * laguerre(self.n, a, (x - y) * (x - y)))
    }

    fn endpoint_exponent(&self) -> T {
        self.p.alpha() + c(0.5)
    }

    fn x_extent(&self) -> T {
        let eps = EnergyLevel::<T>::new(self.n).epsilon;
        (eps + eps + c(50.0 + 6.0 * self.n as f64) + c::<T>(4.0) * self.p.alpha().abs()).sqrt()
    }

    fn k_extent(&self) -> T {
        self.x_extent()
    }

    fn descriptor(&self) -> String {
        format!("eigen(alpha={:e},n={})", self.p.alpha(), self.n)
    }
}

/// W_n^α(x, k) of an energy eigenstate.
pub fn wigner_eigenstate<T: Real>(p: &OscillatorParams<T>, n: usize, x: T, k: T, tol: T) -> Result<T> {
    Eigenstate::new(*p, n).wigner(x, k, tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiGaussianParams<T> {
    gamma: T,
    tau: T,
}

impl<T: Real> QuasiGaussianParams<T> {
    pub fn new(gamma: T, tau: T) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() || !tau.is_finite() {
            return domain(format!("quasi-Gaussian needs gamma > 0 and finite tau, got ({}, {})", gamma, tau));
        }
        Ok(Self { gamma, tau })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// u = e^{−γ + iτ}.
    pub fn u(&self) -> Complex<T> {
        Complex::from_polar((-self.gamma).exp(), self.tau)
    }
}

/// χ = sinh γ / (cosh γ − cos τ).
pub fn chi<T: Real>(qp: &QuasiGaussianParams<T>) -> T {
    qp.gamma.sinh() / (qp.gamma.cosh() - qp.tau.cos())
}

/// χ̃ = −sin τ / (cosh γ − cos τ).
pub fn tilde_chi<T: Real>(qp: &QuasiGaussianParams<T>) -> T {
    -qp.tau.sin() / (qp.gamma.cosh() - qp.tau.cos())
}

/// N_F with Σ|c_n|² = 1: [2(1 − e^{−2γ})^{1+α}/Γ(1+α)]^{1/2}.
pub fn quasi_gaussian_norm<T: Real>(p: &OscillatorParams<T>, qp: &QuasiGaussianParams<T>) -> T {
    let one = T::one();
    let a1 = one + p.alpha();
    (c::<T>(0.5) * (c::<T>(2.0).ln() + a1 * (one - (-(qp.gamma + qp.gamma)).exp()).ln() - ln_gamma(a1).unwrap())).exp()
}

/// G(x) = N_F x^{α+1/2} (1−u)^{−(1+α)} exp(−½ (1+u)/(1−u) x²) for x > 0.
pub fn quasi_gaussian_wavefunction<T: Real>(p: &OscillatorParams<T>, qp: &QuasiGaussianParams<T>, x: T) -> Complex<T> {
    if !(x > T::zero()) {
        return Complex::new(T::zero(), T::zero());
    }
    let one = Complex::new(T::one(), T::zero());
    let u = qp.u();
    let a1 = T::one() + p.alpha();
    let ln_g = (one - u).ln() * (-a1) - (one + u) / (one - u) * (c::<T>(0.5) * x * x)
        + Complex::new(quasi_gaussian_norm(p, qp).ln() + (p.alpha() + c(0.5)) * x.ln(), T::zero());
    ln_g.exp()
}

/// Coefficient of φ_n in the quasi-Gaussian: N_F u^n / (√2 N_n).
pub fn quasi_gaussian_coefficient<T: Real>(p: &OscillatorParams<T>, qp: &QuasiGaussianParams<T>, n: usize) -> Complex<T> {
    let nf: T = c(n as f64);
    let modulus = (quasi_gaussian_norm(p, qp).ln() - c::<T>(0.5) * (c::<T>(2.0).ln() + p.ln_norm_sq(n)) - nf * qp.gamma).exp();
    Complex::from_polar(modulus, nf * qp.tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiGaussianMethod {
    Quadrature,
    Series,
}

#[derive(Clone, Copy, Debug)]
pub struct QuasiGaussian<T> {
    p: OscillatorParams<T>,
    qp: QuasiGaussianParams<T>,
    chi: T,
    tilde_chi: T,
    ln_pref: T,
    pub method: QuasiGaussianMethod,
}

impl<T: Real> QuasiGaussian<T> {
    pub fn new(p: OscillatorParams<T>, qp: QuasiGaussianParams<T>) -> Self {
        let ch = chi(&qp);
        let a1 = T::one() + p.alpha();
        let ln_pref = c::<T>(2.0).ln() + a1 * ch.ln() - T::PI().ln() - ln_gamma(a1).unwrap();
        Self { p, qp, chi: ch, tilde_chi: tilde_chi(&qp), ln_pref, method: QuasiGaussianMethod::Quadrature }
    }

    pub fn with_method(mut self, method: QuasiGaussianMethod) -> Self {
        self.method = method;
        self
    }

    pub fn params(&self) -> (&OscillatorParams<T>, &QuasiGaussianParams<T>) {
        (&self.p, &self.qp)
    }

    pub fn chi(&self) -> T {
        self.chi
    }

    pub fn tilde_chi(&self) -> T {
        self.tilde_chi
    }

    /// K(x, s) = x g(x, xs) and ∂K/∂x.
    pub fn scaled_kernel(&self, x: T, s: T) -> (T, T) {
        let one = T::one();
        if !(x > T::zero()) || s.abs() >= one {
            return (T::zero(), T::zero());
        }
        let nu = self.p.alpha() + c(0.5);
        let q = one + s * s;
        let k = (self.ln_pref + (nu + nu + one) * x.ln() + nu * ((one - s) * (one + s)).ln() - self.chi * x * x * q).exp();
        (k, k * ((nu + nu + one) / x - c::<T>(2.0) * self.chi * x * q))
    }

    /// Resummed j-series with confluent hypergeometric coefficients.
    pub fn wigner_series(&self, x: T, k: T, tol: T) -> Result<T> {
        if !(x > T::zero()) {
            return Ok(T::zero());
        }
        let one = T::one();
        let a = self.p.alpha();
        let z = self.chi * x * x;
        let q = k * x + self.tilde_chi * x * x;
        if q.abs() > c(25.0) {
            return Err(Error::SeriesRefused(format!("|kx + tilde_chi x^2| = {} exceeds 25", q.abs())));
        }
        let ctl = SeriesControl::new(tol.min(c(1e-12)), 10_000)?;
        let ln_pre = c::<T>(2.0).ln() - c::<T>(0.5) * T::PI().ln() + ln_gamma(c::<T>(1.5) + a)? - ln_gamma(one + a)?
            + (one + a) * z.ln()
            - z;
        let ln_q2 = if q == T::zero() { T::neg_infinity() } else { c::<T>(2.0) * q.abs().ln() };
        let mut acc = Accumulator::new();
        let mut max_term = T::zero();
        let mut quiet = 0;
        for j in 0..500usize {
            let jf: T = c(j as f64);
            let ln_mag = if j == 0 { T::zero() } else { jf * ln_q2 } - ln_gamma(jf + one)? - ln_gamma(c::<T>(2.0) + jf + a)?;
            let f1 = hyp1f1(c::<T>(0.5) + jf, c::<T>(2.0) + a + jf, -z, ctl)?;
            let t = (ln_pre + ln_mag).exp() * f1;
            let t = if j % 2 == 0 { t } else { -t };
            acc.add(t);
            max_term = max_term.max(t.abs());
            if t.abs() <= tol * max_term {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(acc.value());
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::Truncation { terms: 500, last: 0.0 })
    }
}

impl<T: Real> KernelState<T> for QuasiGaussian<T> {
    fn kernel(&self, x: T, y: T) -> Result<T> {
        let y = y.abs();
        if !(y < x) {
            return Ok(T::zero());
        }
        let nu = self.p.alpha() + c(0.5);
        Ok((self.ln_pref + nu * ((x - y) * (x + y)).ln() - self.chi * (x * x + y * y)).exp())
    }

    fn shift(&self, x: T) -> T {
        -self.tilde_chi * x
    }

    fn endpoint_exponent(&self) -> T {
        self.p.alpha() + c(0.5)
    }

    fn x_extent(&self) -> T {
        ((c::<T>(50.0) + c::<T>(4.0) * (T::one() + self.p.alpha().abs())) / self.chi).sqrt()
    }

    fn y_extent(&self, x: T) -> T {
        (c::<T>(46.0) / self.chi).sqrt().min(x)
    }

    fn k_extent(&self) -> T {
        self.tilde_chi.abs() * self.x_extent() + c::<T>(8.0) * self.chi.sqrt().max(T::one())
    }

    fn descriptor(&self) -> String {
        format!("quasi-gaussian(alpha={:e},gamma={:e},tau={:e})", self.p.alpha(), self.qp.gamma, self.qp.tau)
    }

    fn wigner(&self, x: T, k: T, tol: T) -> Result<T> {
        match self.method {
            QuasiGaussianMethod::Quadrature => kernel_wigner(self, x, k, tol),
            QuasiGaussianMethod::Series => match self.wigner_series(x, k, tol) {
                Err(Error::SeriesRefused(_)) => kernel_wigner(self, x, k, tol),
                other => other,
            },
        }
    }
}

/// W of the quasi-Gaussian state by the chosen method.
pub fn wigner_quasi_gaussian<T: Real>(
    p: &OscillatorParams<T>,
    qp: &QuasiGaussianParams<T>,
    x: T,
    k: T,
    tol: T,
    method: QuasiGaussianMethod,
) -> Result<T> {
    QuasiGaussian::new(*p, *qp).with_method(method).wigner(x, k, tol)
}

/// Convex (or general real) combination of kernel states sharing one shift.
pub struct Mixture<'a, T: Real> {
    parts: Vec<(T, &'a dyn KernelState<T>)>,
}

impl<'a, T: Real> Mixture<'a, T> {
    pub fn new(parts: Vec<(T, &'a dyn KernelState<T>)>) -> Result<Self> {
        if parts.is_empty() {
            return domain("mixture needs at least one component");
        }
        for probe in [c::<T>(0.7), c::<T>(2.3)] {
            let s0 = parts[0].1.shift(probe);
            if parts.iter().any(|(_, s)| (s.shift(probe) - s0).abs() > c::<T>(1e-14) * (T::one() + s0.abs())) {
                return Err(Error::Unsupported("mixture components must share the same k-shift".into()));
            }
        }
        Ok(Self { parts })
    }
}

impl<T: Real> KernelState<T> for Mixture<'_, T> {
    fn kernel(&self, x: T, y: T) -> Result<T> {
        let mut acc = Accumulator::new();
        for (w, s) in &self.parts {
            acc.add(*w * s.kernel(x, y)?);
        }
        Ok(acc.value())
    }

    fn shift(&self, x: T) -> T {
        self.parts[0].1.shift(x)
    }

    fn endpoint_exponent(&self) -> T {
        self.parts.iter().map(|(_, s)| s.endpoint_exponent()).fold(T::infinity(), T::min)
    }

    fn x_extent(&self) -> T {
        self.parts.iter().map(|(_, s)| s.x_extent()).fold(T::zero(), T::max)
    }

    fn y_extent(&self, x: T) -> T {
        self.parts.iter().map(|(_, s)| s.y_extent(x)).fold(T::zero(), T::max)
    }

    fn k_extent(&self) -> T {
        self.parts.iter().map(|(_, s)| s.k_extent()).fold(T::zero(), T::max)
    }

    fn descriptor(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|(w, s)| format!("{:e}*{}", w, s.descriptor())).collect();
        format!("mixture({})", inner.join("+"))
    }
}

fn nested_tol<T: Real>(tol: T) -> (Tolerance<T>, Tolerance<T>) {
    (Tolerance::new(tol).with_limit(4000), Tolerance::new(tol * c(0.1)).with_limit(4000))
}

/// ∫ W(x, k) dk over the whole k-line, i.e. the position density.
pub fn marginal_position<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Ok(T::zero());
    }
    Ok(T::PI() * s.kernel(x, T::zero())?)
}

/// ∫_{k_lo}^{k_hi} W(x, k) dk, done on the kernel with the Dirichlet factor.
pub fn k_window_integral<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T, k_lo: T, k_hi: T, tol: T) -> Result<T> {
    if !(x > T::zero()) || k_hi == k_lo {
        return Ok(T::zero());
    }
    if k_hi < k_lo {
        return domain("k window must have k_lo <= k_hi");
    }
    let sh = s.shift(x);
    let opts = fourier_options(s, x, tol);
    // 2∫_0^x g(y) [sin(2(k_hi − s)y) − sin(2(k_lo − s)y)] / (2y) dy
    let part = |kk: T| -> Result<T> {
        let w = kk - sh;
        let r = try_fourier_integral(|y: T| Ok(s.kernel(x, y)? / y), x, w + w, Trig::Sin, &opts)?;
        Ok(r.value)
    };
    Ok(part(k_hi)? - part(k_lo)?)
}

/// ∬ W dx dk over the half-plane.
pub fn normalization<T: Real, S: KernelState<T> + ?Sized>(s: &S, tol: T) -> Result<T> {
    let (outer, _) = nested_tol(tol);
    Ok(try_integrate(|x| marginal_position(s, x), T::zero(), s.x_extent(), outer)?.value)
}

/// 2π ∬ W_a W_b dx dk over the half-plane.
pub fn overlap<T: Real, A, B>(a: &A, b: &B, tol: T) -> Result<T>
where
    A: KernelState<T> + ?Sized,
    B: KernelState<T> + ?Sized,
{
    let (outer, inner) = nested_tol(tol);
    let x_max = a.x_extent().min(b.x_extent());
    let two_pi = T::PI() + T::PI();
    let sub = a.endpoint_exponent() + b.endpoint_exponent() < T::one();
    let r = try_integrate(
        |x: T| {
            if !(x > T::zero()) {
                return Ok(T::zero());
            }
            let ds = a.shift(x) - b.shift(x);
            let mut o = FourierOptions::new(tol);
            o.tol = inner;
            o.endpoint_substitution = sub;
            let y = a.y_extent(x).min(b.y_extent(x));
            if y < x {
                o.cutoff = Some(y);
            }
            let v = try_fourier_integral(|y| Ok(a.kernel(x, y)? * b.kernel(x, y)?), x, ds + ds, Trig::Cos, &o)?;
            Ok(two_pi * v.value)
        },
        T::zero(),
        x_max,
        outer,
    )?;
    Ok(two_pi * r.value)
}

/// Quantum purity 2π ∬ W² dx dk.
pub fn purity_grid<T: Real, S: KernelState<T> + ?Sized>(s: &S, tol: T) -> Result<T> {
    overlap(s, s, tol)
}

/// Phase-space symbol Σ_m c_m(x) k^m with m ≤ 2.
pub struct KPolynomial<'a, T> {
    terms: Vec<(usize, Box<dyn Fn(T) -> Result<T> + 'a>)>,
}

impl<'a, T: Real> KPolynomial<'a, T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn term(mut self, m: usize, c_m: impl Fn(T) -> Result<T> + 'a) -> Self {
        self.terms.push((m, Box::new(c_m)));
        self
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }
}

impl<T: Real> Default for KPolynomial<'_, T> {
    fn default() -> Self {
        Self::new()
    }
}

/// ∂²g/∂y² at y = 0 by twice-extrapolated central differences.
fn kernel_curvature<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T) -> Result<T> {
    let g0 = s.kernel(x, T::zero())?;
    let h = (x.min(s.y_extent(x)) * c(0.1)).min(c(0.1));
    let d = |h: T| -> Result<T> { Ok(c::<T>(2.0) * (s.kernel(x, h)? - g0) / (h * h)) };
    let (d1, d2, d3) = (d(h)?, d(h * c(0.5))?, d(h * c(0.25))?);
    let r1 = (c::<T>(4.0) * d2 - d1) / c(3.0);
    let r2 = (c::<T>(4.0) * d3 - d2) / c(3.0);
    Ok((c::<T>(16.0) * r2 - r1) / c(15.0))
}

/// ∫ k^m W(x, k) dk over the whole k-line for m ≤ 2.
///
/// The second moment exists only when the kernel vanishes faster than
/// (x² − y²)^{1/2} at the edge; otherwise it is reported as divergent.
pub fn k_moment<T: Real, S: KernelState<T> + ?Sized>(s: &S, x: T, m: usize) -> Result<T> {
    if m == 2 && !(s.endpoint_exponent() > c(0.5)) {
        return Err(Error::Divergent(format!(
            "second k-moment of {} diverges: edge exponent {} <= 1/2",
            s.descriptor(),
            s.endpoint_exponent()
        )));
    }
    if !(x > T::zero()) {
        return Ok(T::zero());
    }
    let sh = s.shift(x);
    let m0 = marginal_position(s, x)?;
    match m {
        0 => Ok(m0),
        1 => Ok(sh * m0),
        // ∫ q² e^{2iqy} dq = −(π/4) δ''(y)
        2 => Ok(-T::PI() * c(0.25) * kernel_curvature(s, x)? + sh * sh * m0),
        _ => Err(Error::Unsupported(format!("k-moment of order {}", m))),
    }
}

/// ∬ W(x, k) Σ_m c_m(x) k^m dx dk with the k-integrals done exactly.
pub fn phase_space_average<T: Real, S: KernelState<T> + ?Sized>(s: &S, symbol: &KPolynomial<T>, tol: T) -> Result<T> {
    for &(m, _) in &symbol.terms {
        if m == 2 && !(s.endpoint_exponent() > c(0.5)) {
            return k_moment(s, T::one(), 2);
        }
    }
    let (outer, _) = nested_tol(tol);
    let r = try_integrate(
        |x: T| {
            if !(x > T::zero()) {
                return Ok(T::zero());
            }
            let mut acc = Accumulator::new();
            for (m, cm) in &symbol.terms {
                let v = cm(x)? * k_moment(s, x, *m)?;
                acc.add(v);
            }
            Ok(acc.value())
        },
        T::zero(),
        s.x_extent(),
        outer,
    )?;
    Ok(r.value)
}

/// ∬ f(x, k) dx dk over a rectangle by iterated adaptive quadrature.
pub fn integrate_box<T: Real, F>(mut f: F, x_lo: T, x_hi: T, k_lo: T, k_hi: T, tol: T) -> Result<T>
where
    F: FnMut(T, T) -> Result<T>,
{
    let (outer, inner) = nested_tol(tol);
    Ok(try_integrate(|x| Ok(try_integrate(|k| f(x, k), k_lo, k_hi, inner)?.value), x_lo, x_hi, outer)?.value)
}

/// Uniform rectangular (x, k) sampling geometry; endpoints inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub nx: usize,
    pub k_min: T,
    pub k_max: T,
    pub nk: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.k_min, self.k_max].iter().all(|v| v.is_finite());
        if !finite {
            return domain("grid bounds must be finite");
        }
        if self.nx == 0 || self.nk == 0 {
            return domain("grid needs nx >= 1 and nk >= 1");
        }
        if (self.nx > 1 && !(self.x_max > self.x_min)) || (self.nk > 1 && !(self.k_max > self.k_min)) {
            return domain("grid bounds must satisfy min < max");
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        if self.nx > 1 {
            (self.x_max - self.x_min) / c((self.nx - 1) as f64)
        } else {
            T::zero()
        }
    }

    pub fn dk(&self) -> T {
        if self.nk > 1 {
            (self.k_max - self.k_min) / c((self.nk - 1) as f64)
        } else {
            T::zero()
        }
    }

    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx() * c(i as f64)
    }

    pub fn k(&self, j: usize) -> T {
        self.k_min + self.dk() * c(j as f64)
    }
}

/// W sampled on a [`GridSpec`], x-major.
#[derive(Clone, Debug)]
pub struct PhaseGrid<T> {
    pub spec: GridSpec<T>,
    pub values: Vec<T>,
    pub descriptor: String,
}

impl<T: Real> PhaseGrid<T> {
    pub fn fill<S: KernelState<T> + ?Sized>(s: &S, spec: GridSpec<T>, tol: T) -> Result<Self> {
        spec.validate()?;
        let mut values = Vec::with_capacity(spec.nx * spec.nk);
        for i in 0..spec.nx {
            let x = spec.x(i);
            for j in 0..spec.nk {
                values.push(s.wigner(x, spec.k(j), tol)?);
            }
        }
        Ok(Self { spec, values, descriptor: s.descriptor() })
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.spec.nk + j]
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Σ W Δx Δk.
    pub fn riemann_sum(&self) -> T {
        let mut acc = Accumulator::new();
        for v in &self.values {
            acc.add(*v);
        }
        acc.value() * self.spec.dx() * self.spec.dk()
    }
}
