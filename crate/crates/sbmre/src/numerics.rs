//! Special functions and adaptive quadrature.
//!
//! Everything analytic in this crate funnels through the four primitives
//! here: `ln_gamma`, `beta_fn`, the confluent hypergeometric `kummer_1f1`,
//! and the adaptive Gauss–Kronrod integrator `integrate`.

use crate::error::{Error, Result};

/// Controls for the adaptive integrator.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Relative tolerance on the accumulated integral.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum bisection depth per seed panel.
    pub max_depth: u32,
    /// How the seed panels are laid out before adaptation.
    pub panel_strategy: PanelStrategy,
}

/// Seed-panel layout for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelStrategy {
    /// One seed panel covering `[lo, hi]`.
    Uniform,
    /// Log-spaced seed panels. Handles wide ranges (`hi/lo > 1e3`) and
    /// integrable singularities at a nonnegative lower endpoint.
    Geometric,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 50,
            panel_strategy: PanelStrategy::Uniform,
        }
    }
}

impl QuadratureSpec {
    pub fn geometric() -> Self {
        QuadratureSpec {
            panel_strategy: PanelStrategy::Geometric,
            ..QuadratureSpec::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Parameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_depth == 0 {
            return Err(Error::Parameter("max_depth must be at least 1".into()));
        }
        Ok(())
    }
}

// Lanczos approximation, g = 7, 9 coefficients. Relative error is a few
// ulps over the positive axis, well inside the 1e-13 contract.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function, `log Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate regime.
        let sinpix = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - sinpix.ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln())
}

/// Euler beta function `𝔹(x, y) = Γ(x)Γ(y)/Γ(x+y)` for `x, y > 0`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "beta_fn requires positive arguments, got ({x}, {y})"
        )));
    }
    Ok((ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?).exp())
}

const KUMMER_MAX_TERMS: usize = 1_000_000;
const KUMMER_EPS: f64 = 1e-16;

/// Confluent hypergeometric function `₁F₁(a, b, z)` for `b > 0`.
///
/// Direct power series for `z ≥ 0`. For `z < 0` the Kummer transformation
/// `₁F₁(a,b,z) = e^z ₁F₁(b−a, b, −z)` is applied first, so the summed series
/// has no catastrophic cancellation (all terms positive whenever `a ≤ b`).
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!("kummer_1f1 requires b > 0, got {b}")));
    }
    if z < 0.0 {
        Ok(z.exp() * kummer_series(b - a, b, -z)?)
    } else {
        kummer_series(a, b, z)
    }
}

/// Raw Kummer series `Σ (a)_k z^k / ((b)_k k!)`, no transformation.
///
/// Exposed for the transform self-consistency tests; production callers go
/// through [`kummer_1f1`].
#[doc(hidden)]
pub fn kummer_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut streak = 0u32;
    for k in 0..KUMMER_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.abs() < KUMMER_EPS * sum.abs() {
            streak += 1;
            if streak >= 3 {
                return Ok(sum);
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::Numerics(format!(
        "kummer_1f1({a}, {b}, {z}) did not converge within {KUMMER_MAX_TERMS} terms"
    )))
}

// 15-point Gauss-Kronrod rule on [-1, 1] (QUADPACK constants).
// Nodes are strictly interior, so integrable endpoint singularities are
// never evaluated directly.
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// One 15-point Gauss-Kronrod evaluation over `[lo, hi]`.
/// Returns (kronrod estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    // The center is both a Kronrod and a G7 node.
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [0.0_f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let x = half * GK_NODES[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += KRONROD_WEIGHTS[j] * (f1 + f2);
        res_abs += KRONROD_WEIGHTS[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = KRONROD_WEIGHTS[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += KRONROD_WEIGHTS[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK-style error rescaling.
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * 1.0_f64.min((200.0 * err / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.lo == other.lo
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap on error; tie-break on lo for determinism.
        self.err
            .total_cmp(&other.err)
            .then(self.lo.total_cmp(&other.lo))
    }
}

const MAX_PANELS: usize = 200_000;

fn seed_breakpoints(lo: f64, hi: f64, strategy: PanelStrategy) -> Vec<f64> {
    match strategy {
        PanelStrategy::Uniform => vec![lo, hi],
        PanelStrategy::Geometric => {
            if lo < 0.0 || hi <= 0.0 {
                // Log spacing only makes sense on the nonnegative axis.
                return vec![lo, hi];
            }
            let floor = (hi * 1e-18).max(f64::MIN_POSITIVE);
            if lo >= hi / 10.0 {
                return vec![lo, hi];
            }
            let inner_lo = lo.max(floor);
            let decades = (hi / inner_lo).log10();
            let n = (3.0 * decades).ceil().max(1.0) as usize;
            let ratio = (hi / inner_lo).powf(1.0 / n as f64);
            let mut pts = Vec::with_capacity(n + 2);
            pts.push(lo);
            if lo < inner_lo {
                pts.push(inner_lo);
            }
            let mut x = inner_lo;
            for _ in 0..n - 1 {
                x *= ratio;
                pts.push(x);
            }
            pts.push(hi);
            pts
        }
    }
}

/// Adaptive quadrature of `f` over `[lo, hi]` to the tolerances in `spec`.
///
/// Worst panel is bisected until the summed error estimate drops below
/// `max(abs_tol, rel_tol · |integral|)`. Fails with the worst-panel
/// diagnostics when the depth or panel budget is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "integrate requires finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    let pts = seed_breakpoints(lo, hi, spec.panel_strategy);
    integrate_breakpoints(f, &pts, spec)
}

/// Adaptive quadrature with caller-supplied seed breakpoints (strictly
/// increasing). Used where the caller knows the singularity structure, e.g.
/// the beta-law mixing integral.
pub(crate) fn integrate_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    pts: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if pts.len() < 2 {
        return Err(Error::Domain("need at least one panel".into()));
    }

    let mut heap = std::collections::BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in pts.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Panel {
            lo: w[0],
            hi: w[1],
            value: v,
            err: e,
            depth: 0,
        });
    }

    while total_err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        if heap.len() >= MAX_PANELS {
            let worst = heap.peek().unwrap();
            return Err(Error::Quadrature(format!(
                "panel budget exhausted; worst panel [{:.6e}, {:.6e}] err {:.3e}, total err {:.3e}",
                worst.lo, worst.hi, worst.err, total_err
            )));
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.depth >= spec.max_depth || mid <= worst.lo || mid >= worst.hi {
            return Err(Error::Quadrature(format!(
                "max depth {} reached on panel [{:.6e}, {:.6e}] with err {:.3e}, total err {:.3e}",
                spec.max_depth, worst.lo, worst.hi, worst.err, total_err
            )));
        }
        let (v1, e1) = gk15(&f, worst.lo, mid);
        let (v2, e2) = gk15(&f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: v1,
            err: e1,
            depth: worst.depth + 1,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: v2,
            err: e2,
            depth: worst.depth + 1,
        });
    }
    Ok(total)
}
