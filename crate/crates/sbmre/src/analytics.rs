//! Exact (non-asymptotic) characteristics of SBM and SBMRE.
//!
//! Every SBMRE formula is the mixture of the corresponding SBM closed form
//! over the exponent law, so everything dispatches through
//! [`ExponentLaw::expect`] (or the MGF where a closed form exists) and the
//! degenerate law reproduces the SBM expressions identically.

use crate::error::{Error, Result};
use crate::law::ExponentLaw;
use crate::numerics::{self, PanelStrategy, QuadratureSpec};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Ergodicity-breaking parameter `EB = 𝒩/𝒟` with its pieces.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EBReport {
    pub tau: f64,
    pub horizon: f64,
    /// Variance of the TAMSD across the ensemble.
    pub numerator: f64,
    /// Square of the expected TAMSD.
    pub denominator: f64,
    pub eb: f64,
}

/// Gaussian pdf of SBM position: `(2π t^α)^{-1/2} exp(−x²/(2 t^α))`.
pub fn sbm_pdf(alpha: f64, x: f64, t: f64) -> f64 {
    let var = t.powf(alpha);
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Expected TAMSD of SBM:
/// `(T^{α+1} − τ^{α+1} − (T−τ)^{α+1}) / ((α+1)(T−τ))`.
pub fn sbm_etamsd(alpha: f64, tau: f64, horizon: f64) -> f64 {
    let a1 = alpha + 1.0;
    (horizon.powf(a1) - tau.powf(a1) - (horizon - tau).powf(a1)) / (a1 * (horizon - tau))
}

/// First-hitting-time density of SBM at barrier `b`:
/// `(αb/√(2π)) e^{−b²/(2t^α)} t^{−1−α/2}`.
pub fn sbm_hitting_pdf(alpha: f64, b: f64, t: f64) -> f64 {
    alpha * b / (2.0 * PI).sqrt()
        * (-b * b / (2.0 * t.powf(alpha))).exp()
        * t.powf(-1.0 - alpha / 2.0)
}

/// TAMSD variance of SBM (the EB numerator `𝒩_α`), including its inner
/// integral `∫₀^{T/τ−1} x^{α+1}(1+x)^α dx` evaluated with log-spaced panels
/// (the integrand grows like `x^{2α+1}`, so uniform panels stall).
pub fn sbm_eb_numerator(alpha: f64, tau: f64, horizon: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_lag(tau, horizon)?;
    let a = alpha;
    let u = horizon / tau;
    let inner_spec = QuadratureSpec {
        panel_strategy: PanelStrategy::Geometric,
        ..spec.clone()
    };
    let inner = numerics::integrate(
        |x| x.powf(a + 1.0) * (1.0 + x).powf(a),
        0.0,
        u - 1.0,
        &inner_spec,
    )?;
    let bracket = (u - 1.0).powf(2.0 * a + 1.0) / (2.0 * a + 1.0)
        + (3.0 * a + 1.0) * (u - 1.0).powf(2.0 * a + 2.0)
            / (2.0 * (a + 1.0).powi(2) * (2.0 * a + 1.0))
        - 2.0 * u.powf(a + 1.0) * (u - 1.0).powf(a + 1.0) / (a + 1.0).powi(2)
        + u.powf(2.0 * a + 2.0) / (2.0 * (a + 1.0) * (2.0 * a + 1.0))
        - (2.0 * a * a + a + 1.0) / (2.0 * (a + 1.0).powi(2) * (2.0 * a + 1.0))
        + 2.0 / (a + 1.0) * inner;
    Ok(4.0 * tau.powf(2.0 * a + 2.0) / (horizon - tau).powi(2) * bracket)
}

/// SBM ergodicity breaking parameter `EB_α = 𝒩_α / E[δ_α]²`.
pub fn sbm_eb(alpha: f64, tau: f64, horizon: f64, spec: &QuadratureSpec) -> Result<f64> {
    let m = sbm_etamsd(alpha, tau, horizon);
    Ok(sbm_eb_numerator(alpha, tau, horizon, spec)? / (m * m))
}

fn check_lag(tau: f64, horizon: f64) -> Result<()> {
    if !(tau > 0.0 && tau < horizon) {
        return Err(Error::Domain(format!(
            "requires 0 < tau < T, got tau={tau}, T={horizon}"
        )));
    }
    Ok(())
}

/// Adapts a fallible integrand for the infallible quadrature callbacks,
/// remembering the first error.
fn capturing<'a, F: Fn(f64) -> Result<f64> + 'a>(
    f: F,
    slot: &'a RefCell<Option<Error>>,
) -> impl Fn(f64) -> f64 + 'a {
    move |x| match f(x) {
        Ok(v) => v,
        Err(e) => {
            slot.borrow_mut().get_or_insert(e);
            0.0
        }
    }
}

fn take_captured(slot: RefCell<Option<Error>>) -> Result<()> {
    match slot.into_inner() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Position pdf of SBMRE: `E[(2π t^𝒜)^{-1/2} exp(−x²/(2 t^𝒜))]`.
pub fn pdf(law: &ExponentLaw, x: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("pdf requires t > 0, got {t}")));
    }
    law.expect(|a| sbm_pdf(a, x, t), spec)
}

/// `q`-th absolute moment: `E|B_𝒜(t)|^q = c_q · E[t^{q𝒜/2}]` with
/// `c_q = 2^{q/2} Γ((q+1)/2) / √π`.
pub fn abs_moment(law: &ExponentLaw, q: f64, t: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("abs_moment requires q > 0, got {q}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "abs_moment requires t >= 0, got {t}"
        )));
    }
    Ok(moment_prefactor(q)? * law.mean_power_scaled(t, q / 2.0)?)
}

/// The Gaussian absolute-moment constant `c_q`.
pub fn moment_prefactor(q: f64) -> Result<f64> {
    Ok((0.5 * q * 2.0_f64.ln() + numerics::ln_gamma((q + 1.0) / 2.0)? - 0.5 * PI.ln()).exp())
}

/// Autocovariance `Cov(B_𝒜(s), B_𝒜(t)) = M_𝒜(log min{s,t})`.
pub fn autocovariance(law: &ExponentLaw, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::Domain(format!(
            "autocovariance requires s, t > 0, got ({s}, {t})"
        )));
    }
    law.mean_power(s.min(t))
}

/// Expected TAMSD of SBMRE:
/// `(T−τ)^{-1} ∫₀^{T−τ} (E[(t+τ)^𝒜] − E[t^𝒜]) dt`.
///
/// Closed form for the degenerate law, weighted closed forms for the
/// two-point law, time quadrature of MGF differences for the beta law
/// (with `E[0^𝒜] = 0` at the lower endpoint).
pub fn etamsd(law: &ExponentLaw, tau: f64, horizon: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_lag(tau, horizon)?;
    match *law {
        ExponentLaw::Degenerate { alpha, .. } => Ok(sbm_etamsd(alpha, tau, horizon)),
        ExponentLaw::TwoPoint { a1, a2, p, .. } => {
            Ok(p * sbm_etamsd(a1, tau, horizon) + (1.0 - p) * sbm_etamsd(a2, tau, horizon))
        }
        ExponentLaw::Beta { .. } => {
            let err = RefCell::new(None);
            let integrand = capturing(
                |t: f64| Ok(law.mean_power(t + tau)? - law.mean_power(t)?),
                &err,
            );
            let time_spec = QuadratureSpec {
                panel_strategy: PanelStrategy::Geometric,
                ..spec.clone()
            };
            let integral = numerics::integrate(integrand, 0.0, horizon - tau, &time_spec)?;
            take_captured(err)?;
            Ok(integral / (horizon - tau))
        }
    }
}

/// Ergodicity breaking parameter of SBMRE, by the law of total variance:
///
/// `𝒩 = E[𝒩_𝒜] + E[m_𝒜²] − (E[m_𝒜])²` and `𝒟 = (E[m_𝒜])²`, where `𝒩_a`
/// is the SBM TAMSD variance and `m_a` the SBM expected TAMSD. For the
/// degenerate law the cross-variance term vanishes exactly and the SBM
/// parameter is recovered.
///
/// `𝒟` is the square of the single time integral rather than the equivalent
/// double-integral form: mathematically identical, and O(n) instead of O(n²)
/// quadrature work.
pub fn eb(law: &ExponentLaw, tau: f64, horizon: f64, spec: &QuadratureSpec) -> Result<EBReport> {
    check_lag(tau, horizon)?;
    let err = RefCell::new(None);
    let e_var = law.expect(
        capturing(|a| sbm_eb_numerator(a, tau, horizon, spec), &err),
        spec,
    )?;
    take_captured(err)?;
    let mean_m = law.expect(|a| sbm_etamsd(a, tau, horizon), spec)?;
    let mean_m2 = law.expect(
        |a| {
            let m = sbm_etamsd(a, tau, horizon);
            m * m
        },
        spec,
    )?;
    let numerator = e_var + mean_m2 - mean_m * mean_m;
    let denominator = mean_m * mean_m;
    Ok(EBReport {
        tau,
        horizon,
        numerator,
        denominator,
        eb: numerator / denominator,
    })
}

/// First-hitting-time density of SBMRE at barrier `b`:
/// `E[(𝒜 b/√(2π)) e^{−b²/(2t^𝒜)} t^{−1−𝒜/2}]`.
pub fn hitting_pdf(law: &ExponentLaw, b: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!(
            "hitting_pdf requires b > 0, got {b}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "hitting_pdf requires t > 0, got {t}"
        )));
    }
    law.expect(|a| sbm_hitting_pdf(a, b, t), spec)
}

/// Hitting-pdf mass accounting on `[0, ∞)`: quadrature over `[0, t_max]`
/// plus an analytic bracket of the tail.
///
/// The tail decays only polynomially (`t^{−1−A₁/2}`), so a finite truncation
/// needs the analytic estimate: `e^{−b²/(2t^a)} ∈ (e^{−b²/(2 t_max^a)}, 1)`
/// on the tail gives
/// `∫_{t_max}^∞ f ∈ (e^{−b²/(2t_max^𝒜)}, 1) · (2b/√(2π)) E[t_max^{−𝒜/2}]`.
#[derive(Debug, Clone)]
pub struct HittingMass {
    /// Quadrature of the pdf over `[0, t_max]`.
    pub integral: f64,
    /// Analytic lower bound on the tail mass beyond `t_max`.
    pub tail_lower: f64,
    /// Analytic upper bound on the tail mass beyond `t_max`.
    pub tail_upper: f64,
}

impl HittingMass {
    /// Best estimate of the total mass.
    pub fn total(&self) -> f64 {
        self.integral + 0.5 * (self.tail_lower + self.tail_upper)
    }

    /// Half-width of the tail bracket.
    pub fn tail_uncertainty(&self) -> f64 {
        0.5 * (self.tail_upper - self.tail_lower)
    }
}

/// Integrates the hitting pdf over `[0, t_max]` (log-spaced panels) and
/// brackets the remaining tail analytically.
pub fn hitting_mass(
    law: &ExponentLaw,
    b: f64,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<HittingMass> {
    if !(t_max > 1.0) {
        return Err(Error::Domain(format!(
            "hitting_mass requires t_max > 1, got {t_max}"
        )));
    }
    let err = RefCell::new(None);
    let f = capturing(|t| hitting_pdf(law, b, t, spec), &err);
    let time_spec = QuadratureSpec {
        panel_strategy: PanelStrategy::Geometric,
        ..spec.clone()
    };
    let integral = numerics::integrate(f, 0.0, t_max, &time_spec)?;
    take_captured(err)?;
    let scale = 2.0 * b / (2.0 * PI).sqrt();
    let tail_upper = scale * law.expect(|a| t_max.powf(-a / 2.0), spec)?;
    let tail_lower = scale
        * law.expect(
            |a| (-b * b / (2.0 * t_max.powf(a))).exp() * t_max.powf(-a / 2.0),
            spec,
        )?;
    Ok(HittingMass {
        integral,
        tail_lower,
        tail_upper,
    })
}
