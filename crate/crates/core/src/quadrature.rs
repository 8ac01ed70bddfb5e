//! Adaptive Gauss–Kronrod quadrature and the oscillatory Fourier-type
//! kernel integral behind every Wigner transform.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::scalar::{c, to_f64, Accumulator, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub subdivisions: usize,
}

/// Absolute/relative targets and the subdivision budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    pub limit: usize,
}

impl<T: Real> Tolerance<T> {
    /// Same value used as absolute and relative target.
    pub fn new(tol: T) -> Self {
        Self { abs: tol, rel: tol, limit: 2000 }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.abs >= T::zero() && self.rel >= T::zero()) || (self.abs == T::zero() && self.rel == T::zero()) {
            return domain("tolerance must be non-negative and not both zero");
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Rule<T> {
    result: T,
    abserr: T,
    resabs: T,
}

fn qk15<T: Real, F: FnMut(T) -> Result<T>>(f: &mut F, a: T, b: T) -> Result<Rule<T>> {
    let half = c::<T>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let fc = eval(f, center)?;
    let mut resg = fc * c(WG[3]);
    let mut resk = fc * c(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..3 {
        let jt = 2 * j + 1;
        let dx = half_len * c(XGK[jt]);
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jt] = f1;
        fv2[jt] = f2;
        resg = resg + c::<T>(WG[j]) * (f1 + f2);
        resk = resk + c::<T>(WGK[jt]) * (f1 + f2);
        resabs = resabs + c::<T>(WGK[jt]) * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jt = 2 * j;
        let dx = half_len * c(XGK[jt]);
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jt] = f1;
        fv2[jt] = f2;
        resk = resk + c::<T>(WGK[jt]) * (f1 + f2);
        resabs = resabs + c::<T>(WGK[jt]) * (f1.abs() + f2.abs());
    }

    let reskh = resk * half;
    let mut resasc = c::<T>(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc = resasc + c::<T>(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }

    let result = resk * half_len;
    let resabs = resabs * abs_half;
    let resasc = resasc * abs_half;
    let mut err = ((resk - resg) * half_len).abs();

    if resasc != T::zero() && err != T::zero() {
        let scale = (c::<T>(200.0) * err / resasc).powf(c(1.5));
        err = if scale < T::one() { resasc * scale } else { resasc };
    }
    let round = c::<T>(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (c::<T>(50.0) * T::epsilon()) && err < round {
        err = round;
    }
    Ok(Rule { result, abserr: err, resabs })
}

#[inline]
fn eval<T: Real, F: FnMut(T) -> Result<T>>(f: &mut F, x: T) -> Result<T> {
    let v = f(x)?;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("integrand returned {} at {}", v, x)));
    }
    Ok(v)
}

struct Segment<T> {
    a: T,
    b: T,
    result: T,
    err: T,
    resabs: T,
}

#[derive(PartialEq)]
struct Key(f64, usize);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

/// Fixed composite 15-point Kronrod rule on `panels` equal panels.
pub fn composite_kronrod<T, F>(mut f: F, a: T, b: T, panels: usize) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if panels == 0 {
        return domain("composite rule needs at least one panel");
    }
    let h = (b - a) / c(panels as f64);
    let (mut acc, mut err) = (Accumulator::new(), T::zero());
    for i in 0..panels {
        let lo = a + h * c(i as f64);
        let hi = if i + 1 == panels { b } else { lo + h };
        let r = qk15(&mut f, lo, hi)?;
        acc.add(r.result);
        err = err + r.abserr;
    }
    Ok(QuadResult { value: acc.value(), abs_error_estimate: err, subdivisions: panels })
}

/// Adaptive integration of a fallible integrand over consecutive intervals
/// `points[0]..points[1]..` with global error control.
pub fn try_integrate_points<T, F>(mut f: F, points: &[T], tol: Tolerance<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    tol.check()?;
    if points.len() < 2 {
        return domain("need at least two integration points");
    }
    let mut segs: Vec<Segment<T>> = Vec::with_capacity(points.len() * 2);
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) {
            return domain("integration limits must be finite");
        }
        if a > b {
            return domain(format!("integration limits out of order: {} > {}", a, b));
        }
        if a == b {
            continue;
        }
        let r = qk15(&mut f, a, b)?;
        heap.push(Key(to_f64(r.abserr), segs.len()));
        segs.push(Segment { a, b, result: r.result, err: r.abserr, resabs: r.resabs });
    }
    if segs.is_empty() {
        return Ok(QuadResult { value: T::zero(), abs_error_estimate: T::zero(), subdivisions: 0 });
    }
    let limit = tol.limit.max(segs.len() + 1);
    let totals = |segs: &[Segment<T>]| {
        let mut r = Accumulator::new();
        let mut e = T::zero();
        let mut ra = T::zero();
        for s in segs {
            r.add(s.result);
            e = e + s.err;
            ra = ra + s.resabs;
        }
        (r.value(), e, ra)
    };
    let (mut total, mut err, mut resabs) = totals(&segs);
    let mut splits = 0usize;
    loop {
        if splits % 64 == 0 {
            let t = totals(&segs);
            total = t.0;
            err = t.1;
            resabs = t.2;
        }
        let target = tol.abs.max(tol.rel * total.abs()).max(c::<T>(50.0) * T::epsilon() * resabs);
        if err <= target {
            let (total, err, _) = totals(&segs);
            return Ok(QuadResult { value: total, abs_error_estimate: err, subdivisions: splits });
        }
        let Some(Key(_, idx)) = heap.pop() else {
            let (total, err, _) = totals(&segs);
            return Err(Error::Integration { estimate: to_f64(total), error: to_f64(err), subdivisions: splits });
        };
        if segs.len() >= limit {
            let (total, err, _) = totals(&segs);
            return Err(Error::Integration { estimate: to_f64(total), error: to_f64(err), subdivisions: splits });
        }
        let (a, b) = (segs[idx].a, segs[idx].b);
        let m = c::<T>(0.5) * (a + b);
        if !(m > a && m < b) || (b - a) <= c::<T>(100.0) * T::epsilon() * a.abs().max(b.abs()) {
            // unrefinable: keep its contribution, stop selecting it
            continue;
        }
        let r1 = qk15(&mut f, a, m)?;
        let r2 = qk15(&mut f, m, b)?;
        let old = &segs[idx];
        total = total - old.result + r1.result + r2.result;
        err = err - old.err + r1.abserr + r2.abserr;
        resabs = resabs - old.resabs + r1.resabs + r2.resabs;
        segs[idx] = Segment { a, b: m, result: r1.result, err: r1.abserr, resabs: r1.resabs };
        heap.push(Key(to_f64(r1.abserr), idx));
        heap.push(Key(to_f64(r2.abserr), segs.len()));
        segs.push(Segment { a: m, b, result: r2.result, err: r2.abserr, resabs: r2.resabs });
        splits += 1;
    }
}

/// ∫_a^b f for a fallible integrand.
pub fn try_integrate<T, F>(f: F, a: T, b: T, tol: Tolerance<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    try_integrate_points(f, &[a, b], tol)
}

/// ∫_a^b f with `tol` used as both absolute and relative target.
pub fn integrate_finite<T, F>(mut f: F, a: T, b: T, tol: T) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    try_integrate(|x| Ok(f(x)), a, b, Tolerance::new(tol))
}

/// ∫_a^∞ f through x = a + L t/(1−t); `scale` L sets where the bulk of t ∈ [0,1) lands.
pub fn try_integrate_semi_infinite<T, F>(mut f: F, a: T, scale: T, tol: Tolerance<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(scale > T::zero()) {
        return domain("semi-infinite map needs a positive length scale");
    }
    let one = T::one();
    try_integrate(
        |t: T| {
            let u = one - t;
            let x = a + scale * t / u;
            if !x.is_finite() {
                return Ok(T::zero());
            }
            let v = f(x)?;
            Ok(v * scale / (u * u))
        },
        T::zero(),
        one,
        tol,
    )
}

pub fn integrate_semi_infinite<T, F>(mut f: F, a: T, tol: T) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, T::one(), Tolerance::new(tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// Options of [`try_fourier_integral`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierOptions<T> {
    pub tol: Tolerance<T>,
    /// Integrate in θ with y = x sin θ, which tames (x² − y²)^ν endpoint behaviour for ν < 1/2.
    pub endpoint_substitution: bool,
    /// Upper y-limit beyond which the integrand is negligible.
    pub cutoff: Option<T>,
}

impl<T: Real> FourierOptions<T> {
    pub fn new(tol: T) -> Self {
        Self { tol: Tolerance::new(tol).with_limit(4000), endpoint_substitution: false, cutoff: None }
    }
}

/// ∫_0^{x} h(y) cos(ω y) dy (or sin), presplit into half-periods of the
/// oscillation before adaptive refinement.
pub fn try_fourier_integral<T, F>(mut h: F, x: T, omega: T, trig: Trig, opts: &FourierOptions<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(x >= T::zero()) {
        return domain(format!("kernel integral needs x >= 0, got {}", x));
    }
    let upper = match opts.cutoff {
        Some(cut) => cut.min(x),
        None => x,
    };
    if upper <= T::zero() {
        return Ok(QuadResult { value: T::zero(), abs_error_estimate: T::zero(), subdivisions: 0 });
    }
    let w = omega.abs();
    let half_period = if w > T::zero() { T::PI() / w } else { T::infinity() };
    let mut ys = vec![T::zero()];
    let nseg = (upper / half_period).ceil().to_usize().unwrap_or(1).max(1);
    for j in 1..nseg {
        ys.push(half_period * c(j as f64));
    }
    ys.push(upper);
    let osc = move |y: T| match trig {
        Trig::Cos => (omega * y).cos(),
        Trig::Sin => (omega * y).sin(),
    };
    if opts.endpoint_substitution && x > T::zero() {
        let pts: Vec<T> = ys.iter().map(|&y| (y / x).min(T::one()).asin()).collect();
        try_integrate_points(
            |th: T| {
                let y = x * th.sin();
                Ok(h(y)? * osc(y) * x * th.cos())
            },
            &pts,
            opts.tol,
        )
    } else {
        try_integrate_points(|y| Ok(h(y)? * osc(y)), &ys, opts.tol)
    }
}

/// ∫_{−x}^{x} e^{2iky} g(y) dy for even g, i.e. 2∫_0^x g(y) cos(2ky) dy.
pub fn wigner_kernel_integral<T, G>(mut g: G, x: T, k: T, tol: T) -> Result<T>
where
    T: Real,
    G: FnMut(T) -> T,
{
    if !(x > T::zero()) {
        return domain(format!("kernel integral needs x > 0, got {}", x));
    }
    let r = try_fourier_integral(|y| Ok(g(y)), x, k + k, Trig::Cos, &FourierOptions::new(tol))?;
    Ok(r.value + r.value)
}
