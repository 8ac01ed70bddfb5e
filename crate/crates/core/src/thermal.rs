//! Canonical ensemble: partition function, thermal Wigner function in its
//! Laguerre-series and Bessel forms, purity and energy average.

use crate::eigensystem::OscillatorParams;
use crate::error::{domain, Error, Result};
use crate::quadrature::{try_integrate, try_integrate_points, Tolerance};
use crate::scalar::{c, Accumulator, Real};
use crate::specfun::{hyp2f1, ln_bessel_i_scaled, ln_gamma, SeriesControl};
use crate::wigner_states::{kernel_wigner, overlap, phase_space_average, KPolynomial, KernelState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalParams<T> {
    beta: T,
    lambda: T,
}

impl<T: Real> ThermalParams<T> {
    pub fn new(beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return domain(format!("beta must be finite and > 0, got {}", beta));
        }
        Ok(Self { beta, lambda: (-(beta + beta)).exp() })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// λ = e^{−2β}.
    pub fn lambda(&self) -> T {
        self.lambda
    }

    fn half_tanh(&self) -> T {
        (self.beta * c(0.5)).tanh()
    }
}

/// Z = 1/(2 sinh β).
pub fn partition_function<T: Real>(t: &ThermalParams<T>) -> T {
    T::one() / (c::<T>(2.0) * t.beta.sinh())
}

/// Σ_n e^{−(2n+1)β} truncated once λ^N/(1−λ) < tol.
pub fn partition_function_spectral<T: Real>(t: &ThermalParams<T>, tol: T) -> T {
    let one = T::one();
    let mut acc = Accumulator::new();
    let mut w = (-t.beta).exp();
    let mut tail = one / (one - t.lambda);
    while tail >= tol {
        acc.add(w);
        w = w * t.lambda;
        tail = tail * t.lambda;
    }
    acc.value()
}

/// Terms kept in the Laguerre series: λ^N N^{|α|+1}/(1−λ) < tol/10.
pub fn series_terms<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, tol: T) -> usize {
    let one = T::one();
    let target = (tol * c(0.1) * (one - t.lambda)).ln();
    let pw = p.alpha().abs() + one;
    let mut n = 1usize;
    loop {
        let nf: T = c(n as f64);
        if nf * t.lambda.ln() + pw * nf.ln() < target || n > 1_000_000 {
            return n;
        }
        n += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThermalMethod {
    /// Boltzmann-weighted sum of eigenstate Wigner functions.
    Series,
    /// Closed form with the modified Bessel function.
    Bessel,
}

/// Normalized thermal Wigner function W = Ω/Z.
#[derive(Clone, Copy, Debug)]
pub struct ThermalState<T> {
    p: OscillatorParams<T>,
    t: ThermalParams<T>,
    method: ThermalMethod,
    terms: usize,
    ln_pref: T,
}

impl<T: Real> ThermalState<T> {
    pub fn new(p: OscillatorParams<T>, t: ThermalParams<T>, method: ThermalMethod) -> Self {
        let terms = series_terms(&p, &t, c(1e-13));
        // e^{αβ}/(π sinh β Z) = 2 e^{αβ}/π
        let ln_pref = p.alpha() * t.beta + c::<T>(2.0).ln() - T::PI().ln();
        Self { p, t, method, terms, ln_pref }
    }

    pub fn params(&self) -> (&OscillatorParams<T>, &ThermalParams<T>) {
        (&self.p, &self.t)
    }

    pub fn method(&self) -> ThermalMethod {
        self.method
    }

    fn bessel_kernel(&self, x: T, y: T, ln_pref: T) -> Result<T> {
        let d = (x - y) * (x + y);
        let sh = self.t.beta.sinh();
        let th = self.t.half_tanh();
        // z − coth β (x² + y²) = −x² tanh(β/2) − y² coth(β/2)
        let ln_v = ln_pref + c::<T>(0.5) * d.ln() - x * x * th - y * y / th + ln_bessel_i_scaled(self.p.alpha(), d / sh)?;
        Ok(ln_v.exp())
    }

    fn series_kernel(&self, x: T, y: T) -> Result<T> {
        let one = T::one();
        let a = self.p.alpha();
        let (ta, tb) = ((x + y) * (x + y), (x - y) * (x - y));
        let mut la = (one, one + a - ta);
        let mut lb = (one, one + a - tb);
        // N_n² = n!/Γ(n+α+1), carried as a ratio
        let mut w = one;
        let mut acc = Accumulator::new();
        acc.add(one);
        for n in 1..self.terms {
            let nf: T = c(n as f64);
            w = w * self.t.lambda * nf / (nf + a);
            acc.add(w * la.1 * lb.1);
            let next = |l: (T, T), t: T| (l.1, ((nf + nf + one + a - t) * l.1 - (nf + a) * l.0) / (nf + one));
            la = next(la, ta);
            lb = next(lb, tb);
        }
        // e^{−β}/Z = 1 − λ
        let ln_v = (one - self.t.lambda).ln() + c::<T>(2.0).ln() - T::PI().ln() - ln_gamma(a + one)?
            + (a + c(0.5)) * ((x - y) * (x + y)).ln()
            - (x * x + y * y);
        Ok(ln_v.exp() * acc.value())
    }

    /// Kernel of the unnormalized Ω = Z W (Bessel form).
    pub fn omega_kernel(&self, x: T, y: T) -> Result<T> {
        let y = y.abs();
        if !(y < x) {
            return Ok(T::zero());
        }
        let ln_pref = self.p.alpha() * self.t.beta - T::PI().ln() - self.t.beta.sinh().ln();
        self.bessel_kernel(x, y, ln_pref)
    }

    /// Scaled Bessel kernel K(x, s) = x g(x, xs) and ∂K/∂x.
    pub fn scaled_kernel(&self, x: T, s: T) -> Result<(T, T)> {
        let one = T::one();
        if !(x > T::zero()) || s.abs() >= one {
            return Ok((T::zero(), T::zero()));
        }
        let a = self.p.alpha();
        let sh = self.t.beta.sinh();
        let th = self.t.half_tanh();
        let q = th + s * s / th;
        let z = x * x * (one - s * s) / sh;
        let l0 = ln_bessel_i_scaled(a, z)?;
        let l1 = ln_bessel_i_scaled(a + one, z)?;
        let k = (self.ln_pref + c::<T>(2.0) * x.ln() + c::<T>(0.5) * ((one - s) * (one + s)).ln() - x * x * q + l0).exp();
        // d/dz ln(e^{−z} I_α) = Ĩ_{α+1}/Ĩ_α + α/z − 1
        let two = c::<T>(2.0);
        let dk = k * (two / x - two * x * q + two / x * (z * (l1 - l0).exp() + a - z));
        Ok((k, dk))
    }
}

impl<T: Real> KernelState<T> for ThermalState<T> {
    fn kernel(&self, x: T, y: T) -> Result<T> {
        let y = y.abs();
        if !(y < x) {
            return Ok(T::zero());
        }
        match self.method {
            ThermalMethod::Bessel => self.bessel_kernel(x, y, self.ln_pref),
            ThermalMethod::Series => self.series_kernel(x, y),
        }
    }

    fn endpoint_exponent(&self) -> T {
        self.p.alpha() + c(0.5)
    }

    fn x_extent(&self) -> T {
        ((c::<T>(50.0) + c::<T>(4.0) * self.p.alpha().abs()) / self.t.half_tanh()).sqrt()
    }

    fn y_extent(&self, x: T) -> T {
        (c::<T>(50.0) * self.t.half_tanh()).sqrt().min(x)
    }

    fn k_extent(&self) -> T {
        c::<T>(8.0) * (T::one() / self.t.half_tanh()).sqrt()
    }

    fn descriptor(&self) -> String {
        let m = match self.method {
            ThermalMethod::Series => "series",
            ThermalMethod::Bessel => "bessel",
        };
        format!("thermal(alpha={:e},beta={:e},method={})", self.p.alpha(), self.t.beta, m)
    }
}

/// Normalized thermal Wigner function at (x, k).
pub fn thermal_wigner<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, x: T, k: T, method: ThermalMethod, tol: T) -> Result<T> {
    kernel_wigner(&ThermalState::new(*p, *t, method), x, k, tol)
}

/// ∬ Ω dx dk with Ω the unnormalized Bessel form; equals Z.
pub fn partition_function_phase_space<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, tol: T) -> Result<T> {
    let st = ThermalState::new(*p, *t, ThermalMethod::Bessel);
    let r = try_integrate(
        |x: T| if x > T::zero() { Ok(T::PI() * st.omega_kernel(x, T::zero())?) } else { Ok(T::zero()) },
        T::zero(),
        st.x_extent(),
        Tolerance::new(tol).with_limit(4000),
    )?;
    Ok(r.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurityMethod {
    /// Two-dimensional (s, 𝒳) integral with squared Bessel functions.
    Reduced,
    /// 2π∬W² of the Bessel-form Wigner function.
    Grid,
    /// Single s-integral with ₂F₁; α must be a half-odd integer.
    Hypergeometric,
}

/// Quantum purity of the canonical ensemble.
pub fn thermal_purity<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, method: PurityMethod, tol: T) -> Result<T> {
    match method {
        PurityMethod::Reduced => purity_reduced(p, t, tol),
        PurityMethod::Grid => overlap(
            &ThermalState::new(*p, *t, ThermalMethod::Bessel),
            &ThermalState::new(*p, *t, ThermalMethod::Bessel),
            tol,
        ),
        PurityMethod::Hypergeometric => purity_hypergeometric(p, t, tol),
    }
}

fn s_breakpoints<T: Real>(width: T) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut s = width * c(0.5);
    while s < T::one() {
        pts.push(s);
        s = s * c(2.0);
    }
    pts.push(T::one());
    pts
}

fn purity_reduced<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, tol: T) -> Result<T> {
    let one = T::one();
    let two = c::<T>(2.0);
    let a = p.alpha();
    let sh = t.beta.sinh();
    let th = t.half_tanh();
    let ln_pref = c::<T>(4.0).ln() + two * a * t.beta;
    let inner_tol = Tolerance::new(tol * c(0.1)).with_limit(4000);
    // For α < 0 both ends behave like t^{1+2α}; t = u^m with m = 1/(1+α)
    // makes them regular.
    let m = if a < T::zero() { one / (one + a) } else { one };
    // The 𝒳-decay rate 2[tanh(β/2) + s² coth(β/2)] equals
    // 2[coth β (1+s²) − (1−s²)/sinh β] and is positive for every s and β > 0.
    // takes s and 1 − s separately so that w keeps its precision near s = 1
    let outer = |s: T, q: T| -> Result<T> {
        let w = q * (one + s);
        if !(w > T::zero()) {
            return Ok(T::zero());
        }
        let decay = two * (th + s * s / th);
        let x_max = c::<T>(36.8) / decay;
        let r = try_integrate(
            |u: T| {
                if !(u > T::zero()) {
                    return Ok(T::zero());
                }
                let xx = x_max * u.powf(m);
                let z = xx * w / sh;
                let jac = m * xx / u;
                let ln_v = ln_pref + w.ln() + xx.ln() - decay * xx + two * ln_bessel_i_scaled(a, z)?;
                Ok(ln_v.exp() * jac)
            },
            T::zero(),
            one,
            inner_tol,
        )?;
        Ok(r.value)
    };
    // the s-profile has width ~ tanh(β/2); even in s
    // s = 1 − (1−v)^m
    let pts: Vec<T> = s_breakpoints(th).into_iter().map(|s| one - (one - s).powf(one / m)).collect();
    let r = try_integrate_points(
        |v: T| {
            let q = one - v;
            if !(q > T::zero()) {
                return Ok(T::zero());
            }
            let qm = q.powf(m);
            Ok(outer(one - qm, qm)? * m * q.powf(m - one))
        },
        &pts,
        Tolerance::new(tol).with_limit(4000),
    )?;
    Ok(two * r.value)
}

fn purity_hypergeometric<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, tol: T) -> Result<T> {
    let one = T::one();
    let two = c::<T>(2.0);
    let a = p.alpha();
    let m = a - c(0.5);
    if !(m >= T::zero() && m == m.round()) {
        return Err(Error::Unsupported(format!("hypergeometric purity needs alpha in {{1/2, 3/2, ...}}, got {}", a)));
    }
    let sech = one / t.beta.cosh();
    // e^{2αβ} sech^{2α} β = (2/(1+λ))^{2α}
    let ln_pref = ln_gamma(a + c(1.5))? - ln_gamma(a + one)? - (two * a - one) * two.ln() - c::<T>(0.5) * T::PI().ln()
        + two * a * (two / (one + t.lambda)).ln()
        + two * t.beta.tanh().ln();
    let ctl = SeriesControl::new(tol.min(c(1e-13)), 100_000)?;
    let r = try_integrate_points(
        |s: T| {
            let w = (one - s) * (one + s);
            let v = one + s * s;
            let zz = (w / v * sech).powi(2);
            let f = hyp2f1(a + c(0.5), a + c(1.5), two * a + one, zz, ctl)?;
            Ok((ln_pref + (two * a + one) * w.ln() - (two * a + two) * v.ln()).exp() * f)
        },
        &[T::zero(), c(0.25), c(0.5), T::one()],
        Tolerance::new(tol).with_limit(4000),
    )?;
    Ok(two * r.value)
}

/// Energy symbol ½k² + U(x).
pub fn energy_symbol<T: Real>(p: OscillatorParams<T>) -> KPolynomial<'static, T> {
    KPolynomial::new()
        .term(0, move |x| crate::eigensystem::potential(&p, x))
        .term(2, |_| Ok(c(0.5)))
}

/// ⟨ℋ⟩ = ∬ W (½k² + U) dx dk.
pub fn energy_average<T: Real>(p: &OscillatorParams<T>, t: &ThermalParams<T>, tol: T) -> Result<T> {
    let st = ThermalState::new(*p, *t, ThermalMethod::Bessel);
    phase_space_average(&st, &energy_symbol(*p), tol)
}

/// −∂β ln Z = coth β.
pub fn energy_closed_form<T: Real>(t: &ThermalParams<T>) -> T {
    T::one() / t.beta.tanh()
}
