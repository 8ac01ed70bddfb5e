//! The singular oscillator U(x) = ½(x² + g/x² − 2α), its derivatives,
//! spectrum and eigenfunctions.

use crate::error::{domain, Result};
use crate::scalar::{c, Real};
use crate::specfun::{laguerre, ln_gamma};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorParams<T> {
    alpha: T,
    g: T,
}

impl<T: Real> OscillatorParams<T> {
    /// Requires α > −1 so that x^{α+1/2} is square integrable at the origin.
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > -T::one()) || !alpha.is_finite() {
            return domain(format!("alpha must be finite and > -1, got {}", alpha));
        }
        let g = (c::<T>(4.0) * alpha * alpha - T::one()) / c(4.0);
        Ok(Self { alpha, g })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Inverse-square coupling g = (4α² − 1)/4.
    pub fn coupling(&self) -> T {
        self.g
    }

    /// ln N_n² = ln n! − ln Γ(n + α + 1).
    pub fn ln_norm_sq(&self, n: usize) -> T {
        let nf: T = c(n as f64);
        ln_gamma(nf + T::one()).unwrap() - ln_gamma(nf + self.alpha + T::one()).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyLevel<T> {
    pub n: usize,
    pub epsilon: T,
}

impl<T: Real> EnergyLevel<T> {
    pub fn new(n: usize) -> Self {
        Self { n, epsilon: c((2 * n + 1) as f64) }
    }
}

/// U(x) = ½(x² + g/x² − 2α).
pub fn potential<T: Real>(p: &OscillatorParams<T>, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return domain(format!("potential defined for x > 0, got {}", x));
    }
    Ok(c::<T>(0.5) * (x * x + p.g / (x * x) - p.alpha - p.alpha))
}

/// m-th derivative of U, m ≥ 1.
pub fn potential_derivative<T: Real>(p: &OscillatorParams<T>, x: T, m: usize) -> Result<T> {
    if !(x > T::zero()) {
        return domain(format!("potential defined for x > 0, got {}", x));
    }
    if m == 0 {
        return potential(p, x);
    }
    let harmonic = match m {
        1 => x,
        2 => T::one(),
        _ => T::zero(),
    };
    if p.g == T::zero() {
        return Ok(harmonic);
    }
    // (g/2) d^m x^{-2} = (g/2) (−1)^m (m+1)! x^{−(m+2)}
    let mut fact = T::one();
    for i in 2..=(m + 1) {
        fact = fact * c(i as f64);
    }
    let sign = if m % 2 == 0 { T::one() } else { -T::one() };
    Ok(harmonic + c::<T>(0.5) * p.g * sign * fact * x.powi(-(m as i32 + 2)))
}

/// φ_n(x) = √2 N_n x^{α+1/2} e^{−x²/2} L_n^α(x²) for x > 0, zero otherwise.
pub fn eigenfunction<T: Real>(p: &OscillatorParams<T>, n: usize, x: T) -> T {
    if !(x > T::zero()) {
        return T::zero();
    }
    let ln_amp = c::<T>(0.5) * (c::<T>(2.0).ln() + p.ln_norm_sq(n)) + (p.alpha + c(0.5)) * x.ln() - c::<T>(0.5) * x * x;
    ln_amp.exp() * laguerre(n, p.alpha, x * x)
}

/// max |−½φ'' + Uφ − ε_n φ| over x_lo, x_lo + h, …, ≤ x_hi with centred differences.
pub fn schrodinger_residual<T: Real>(p: &OscillatorParams<T>, n: usize, x_lo: T, x_hi: T, h: T) -> Result<T> {
    if !(h > T::zero()) || !(x_hi >= x_lo) {
        return domain("residual grid needs h > 0 and x_hi >= x_lo");
    }
    if !(x_lo - h > T::zero()) {
        return domain("residual grid must stay inside x > 0");
    }
    let eps = EnergyLevel::<T>::new(n).epsilon;
    let steps = ((x_hi - x_lo) / h).floor().to_usize().unwrap_or(0);
    let mut worst = T::zero();
    for i in 0..=steps {
        let x = x_lo + h * c(i as f64);
        let (fm, f0, fp) = (eigenfunction(p, n, x - h), eigenfunction(p, n, x), eigenfunction(p, n, x + h));
        let d2 = (fp - f0 - f0 + fm) / (h * h);
        let r = -c::<T>(0.5) * d2 + (potential(p, x)? - eps) * f0;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_semi_infinite;
    use proptest::prelude::*;

    #[test]
    fn params_validation() {
        assert!(OscillatorParams::new(-1.0f64).is_err());
        assert!(OscillatorParams::new(f64::NAN).is_err());
        assert_eq!(OscillatorParams::new(-0.5f64).unwrap().coupling(), 0.0);
        assert_eq!(OscillatorParams::new(0.5f64).unwrap().coupling(), 0.0);
        assert_eq!(OscillatorParams::new(1.5f64).unwrap().coupling(), 2.0);
    }

    #[test]
    fn spectrum_is_alpha_independent() {
        for n in 0..20 {
            assert_eq!(EnergyLevel::<f64>::new(n).epsilon, (2 * n + 1) as f64);
        }
    }

    #[test]
    fn potential_examples() {
        let p = OscillatorParams::new(-0.5f64).unwrap();
        for &x in &[0.3, 1.0, 2.5] {
            assert!((potential(&p, x).unwrap() - (x * x + 1.0) / 2.0).abs() < 1e-15);
        }
        let p = OscillatorParams::new(0.5f64).unwrap();
        assert_eq!(potential(&p, 1.0).unwrap(), 0.0);
        let p = OscillatorParams::new(1.5f64).unwrap();
        assert_eq!(potential(&p, 1.0).unwrap(), 0.0);
        assert!(potential(&p, 0.0).is_err());
    }

    #[test]
    fn potential_derivative_examples() {
        let p = OscillatorParams::new(-0.5f64).unwrap();
        assert_eq!(potential_derivative(&p, 1.3, 3).unwrap(), 0.0);
        let p = OscillatorParams::new(1.5f64).unwrap();
        assert!((potential_derivative(&p, 1.0, 1).unwrap() + 1.0).abs() < 1e-15);
        assert!((potential_derivative(&p, 2.0, 5).unwrap() + 5.625).abs() < 1e-13);
        assert!(potential_derivative(&p, -1.0, 2).is_err());
    }

    #[test]
    fn potential_derivative_matches_differences() {
        let p = OscillatorParams::new(1.5f64).unwrap();
        let x = 1.7;
        for m in 1..=5usize {
            let h = 1e-3;
            let fd = (potential_derivative(&p, x + h, m - 1).unwrap() - potential_derivative(&p, x - h, m - 1).unwrap()) / (2.0 * h);
            let exact = potential_derivative(&p, x, m).unwrap();
            assert!((fd - exact).abs() < 1e-4 * exact.abs().max(1.0), "m={m}");
        }
    }

    #[test]
    fn ground_state_closed_form() {
        let a = 0.75f64;
        let p = OscillatorParams::new(a).unwrap();
        let g = ln_gamma(a + 1.0).unwrap().exp();
        for &x in &[0.2f64, 1.0, 2.3] {
            let want = (2.0 / g).sqrt() * x.powf(a + 0.5) * (-x * x / 2.0).exp();
            assert!((eigenfunction(&p, 0, x) - want).abs() < 1e-14);
        }
        assert_eq!(eigenfunction(&p, 3, -1.0), 0.0);
        assert_eq!(eigenfunction(&p, 3, 0.0), 0.0);
    }

    #[test]
    fn orthonormality() {
        for &a in &[-0.5f64, 0.5, 1.5, 0.75] {
            let p = OscillatorParams::new(a).unwrap();
            for m in 0..=5 {
                for n in m..=5 {
                    let r = integrate_semi_infinite(|x| eigenfunction(&p, m, x) * eigenfunction(&p, n, x), 0.0, 1e-12).unwrap();
                    let want = if m == n { 1.0 } else { 0.0 };
                    assert!((r.value - want).abs() < 1e-8, "alpha={a} m={m} n={n} -> {}", r.value);
                }
            }
        }
    }

    #[test]
    fn schrodinger_second_order() {
        let p = OscillatorParams::new(1.5f64).unwrap();
        let r1 = schrodinger_residual(&p, 0, 0.5, 4.0, 1e-3).unwrap();
        assert!(r1 < 1e-4);
        let r2 = schrodinger_residual(&p, 0, 0.5, 4.0, 5e-4).unwrap();
        assert!((r1 / r2 - 4.0).abs() < 0.2, "{r1} {r2}");
        let p = OscillatorParams::new(-0.5f64).unwrap();
        assert!(schrodinger_residual(&p, 2, 0.5, 4.0, 1e-3).unwrap() < 1e-4);
        assert!(schrodinger_residual(&p, 2, 0.0005, 4.0, 1e-3).is_err());
    }

    fn hermite(n: usize, x: f64) -> f64 {
        let (mut h0, mut h1) = (1.0, 2.0 * x);
        if n == 0 {
            return h0;
        }
        for k in 1..n {
            let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    }

    #[test]
    fn harmonic_reduction() {
        let p = OscillatorParams::new(-0.5f64).unwrap();
        for n in 0..5usize {
            let m = 2 * n;
            let ln_norm = -0.5 * (m as f64 * 2f64.ln() + ln_gamma(m as f64 + 1.0).unwrap() + 0.5 * std::f64::consts::PI.ln());
            let mut x = 0.1;
            while x <= 4.0 {
                let psi = ln_norm.exp() * hermite(m, x) * (-x * x / 2.0).exp();
                // Hermite and Laguerre sign conventions differ by (−1)^n
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((eigenfunction(&p, n, x) - sign * 2f64.sqrt() * psi).abs() < 1e-10, "n={n} x={x}");
                x += 0.05;
            }
        }
    }

    proptest! {
        #[test]
        fn eigenfunction_zero_off_support(n in 0usize..8, a in -0.9f64..3.0, x in -10.0f64..=0.0) {
            let p = OscillatorParams::new(a).unwrap();
            prop_assert_eq!(eigenfunction(&p, n, x), 0.0);
        }

        #[test]
        fn coupling_formula(a in -0.99f64..5.0) {
            let p = OscillatorParams::new(a).unwrap();
            prop_assert_eq!(p.coupling(), (4.0 * a * a - 1.0) / 4.0);
        }
    }
}
