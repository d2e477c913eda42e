//! Closed-form asymptotic regimes, kept strictly separate from the exact
//! evaluators in [`crate::analytics`] so the two can be compared. Callers
//! choose explicitly; nothing here ever substitutes for an exact formula.
//!
//! Outside its regime of validity an asymptotic value is still computed (for
//! plotting divergence) and a [`AsymptoticValue::warning`] is recorded
//! instead of failing.

use crate::analytics;
use crate::error::{Error, Result};
use crate::law::ExponentLaw;
use crate::numerics::{self, QuadratureSpec};

/// Which limit a formula describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RegimeKind {
    ShortTime,
    LongTime,
    SmallLagRatio,
}

/// An asymptotic evaluation plus regime bookkeeping.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AsymptoticValue {
    pub value: f64,
    pub regime: RegimeKind,
    /// Set when the inputs are outside the regime of validity.
    pub warning: Option<String>,
}

fn lag_ratio_value(value: f64, tau: f64, horizon: f64) -> AsymptoticValue {
    let ratio = tau / horizon;
    AsymptoticValue {
        value,
        regime: RegimeKind::SmallLagRatio,
        warning: (ratio >= 0.1)
            .then(|| format!("tau/T = {ratio:.3} is outside the small-lag-ratio regime (< 0.1)")),
    }
}

/// Small-lag expected TAMSD of SBM: `τ·T^{α−1}`.
pub fn sbm_etamsd_asymp(alpha: f64, tau: f64, horizon: f64) -> AsymptoticValue {
    lag_ratio_value(tau * horizon.powf(alpha - 1.0), tau, horizon)
}

/// The subdiffusive EB prefactor
/// `C(α) = [(1−α)(2−α)𝔹(α+2, 1−2α) − 2(α²+α−1)] / (2(α+1)²(α+1))`,
/// defined for `α ∈ (0, 1/2)`.
///
/// Implemented exactly as this closed form stands. The exact EB's measured
/// small-ratio prefactor deviates from it (see [`eb_prefactor_fit`], which
/// quantifies the gap rather than asserting either value).
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!(
            "c_alpha requires alpha in (0, 1/2), got {alpha}"
        )));
    }
    let num = (1.0 - alpha) * (2.0 - alpha) * numerics::beta_fn(alpha + 2.0, 1.0 - 2.0 * alpha)?
        - 2.0 * (alpha * alpha + alpha - 1.0);
    Ok(num / (2.0 * (alpha + 1.0).powi(2) * (alpha + 1.0)))
}

/// Small-lag EB of SBM, piecewise in `α`:
///
/// - `0 < α < 1/2`: `C(α)(τ/T)^{2α}`
/// - `α = 1/2`:     `(τ/12T)(log(T/τ) + 2·log 2 − 5/6)`
/// - `α > 1/2`:     `(α²/(3(2α−1)))·(τ/T)`
///
/// These are the branch constants as the closed forms stand; the exact EB's
/// small-ratio limit is ≈ 4× larger for `α ≥ 1/2` (measured; see
/// [`eb_prefactor_fit`]).
pub fn sbm_eb_asymp(alpha: f64, tau: f64, horizon: f64) -> Result<AsymptoticValue> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "sbm_eb_asymp requires alpha > 0, got {alpha}"
        )));
    }
    let ratio = tau / horizon;
    let value = if alpha < 0.5 {
        c_alpha(alpha)? * ratio.powf(2.0 * alpha)
    } else if alpha == 0.5 {
        tau / (12.0 * horizon) * ((horizon / tau).ln() + 2.0 * 2.0_f64.ln() - 5.0 / 6.0)
    } else {
        alpha * alpha / (3.0 * (2.0 * alpha - 1.0)) * ratio
    };
    Ok(lag_ratio_value(value, tau, horizon))
}

/// Leading term (with its weight) of the two-point second moment:
/// `p·t^{A₁}` as `t → 0`, `(1−p)·t^{A₂}` as `t → ∞` — accelerating
/// diffusion: the crossover from the smaller to the larger exponent.
pub fn tp_msd_asymp(law: &ExponentLaw, t: f64, regime: RegimeKind) -> Result<f64> {
    let (a1, a2, p) = two_point_params(law)?;
    match regime {
        RegimeKind::ShortTime => Ok(p * t.powf(a1)),
        RegimeKind::LongTime => Ok((1.0 - p) * t.powf(a2)),
        RegimeKind::SmallLagRatio => Err(Error::Domain(
            "tp_msd_asymp takes short_time or long_time".into(),
        )),
    }
}

/// Truncation order for [`tp_etamsd_asymp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtamsdOrder {
    /// `(τ/T)(pT^{A₁} + (1−p)T^{A₂})`
    Leading,
    /// Three Taylor terms per component.
    Taylor3,
}

/// Small-lag expected TAMSD of the two-point law.
pub fn tp_etamsd_asymp(
    law: &ExponentLaw,
    tau: f64,
    horizon: f64,
    order: EtamsdOrder,
) -> Result<AsymptoticValue> {
    let (a1, a2, p) = two_point_params(law)?;
    Ok(lag_ratio_value(
        tp_etamsd_asymp_raw(a1, a2, p, tau, horizon, order),
        tau,
        horizon,
    ))
}

#[doc(hidden)]
pub fn tp_etamsd_asymp_raw(
    a1: f64,
    a2: f64,
    p: f64,
    tau: f64,
    horizon: f64,
    order: EtamsdOrder,
) -> f64 {
    match order {
        EtamsdOrder::Leading => {
            tau / horizon * (p * horizon.powf(a1) + (1.0 - p) * horizon.powf(a2))
        }
        EtamsdOrder::Taylor3 => {
            // Expansion of the closed form in tau/T:
            //   m_a ≈ τT^{a-1} − τ^{a+1}/((a+1)T) + (1 − a/2)·τ²T^{a-2}.
            // (Checked against the exact closed form; this order is what
            // makes Taylor3 tighter than Leading at tau/T ~ 1e-2.)
            let component = |a: f64| {
                tau * horizon.powf(a - 1.0) - tau.powf(a + 1.0) / ((a + 1.0) * horizon)
                    + (1.0 - a / 2.0) * tau * tau * horizon.powf(a - 2.0)
            };
            p * component(a1) + (1.0 - p) * component(a2)
        }
    }
}

/// Large-`T` EB of the two-point law at fixed `τ`: five parameter cases
/// keyed on `A₁, A₂` against `1/2`, each with the cross term
/// `p(1−p)(T^{A₁} − T^{A₂})²` in the numerator.
pub fn tp_eb_asymp(law: &ExponentLaw, tau: f64, horizon: f64) -> Result<f64> {
    let (a1, a2, p) = two_point_params(law)?;
    tp_eb_asymp_raw(a1, a2, p, tau, horizon)
}

#[doc(hidden)]
pub fn tp_eb_asymp_raw(a1: f64, a2: f64, p: f64, tau: f64, horizon: f64) -> Result<f64> {
    if a1 == a2 {
        return Err(Error::Domain(
            "tp_eb_asymp requires A1 != A2; use the SBM asymptotics for a degenerate mixture"
                .into(),
        ));
    }
    // Per-branch numerator contribution of one SBM component, i.e. the SBM
    // EB asymptote multiplied through by T^{2a}.
    let branch = |a: f64| -> Result<f64> {
        Ok(if a < 0.5 {
            c_alpha(a)? * tau.powf(2.0 * a)
        } else if a == 0.5 {
            tau / 12.0 * ((horizon / tau).ln() + 2.0 * 2.0_f64.ln() - 5.0 / 6.0)
        } else {
            a * a / (3.0 * (2.0 * a - 1.0)) * tau * horizon.powf(2.0 * a - 1.0)
        })
    };
    let cross = p * (1.0 - p) * (horizon.powf(a1) - horizon.powf(a2)).powi(2);
    let num = p * branch(a1)? + (1.0 - p) * branch(a2)? + cross;
    let den = (p * horizon.powf(a1) + (1.0 - p) * horizon.powf(a2)).powi(2);
    Ok(num / den)
}

/// Universal `T → ∞` limit of the two-point EB: `p/(1−p)` for `p ∉ {0, 1}`,
/// else 0. Independent of the window width τ.
pub fn tp_eb_limit(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "tp_eb_limit requires p in [0, 1], got {p}"
        )));
    }
    if p == 0.0 || p == 1.0 {
        Ok(0.0)
    } else {
        Ok(p / (1.0 - p))
    }
}

/// Short/long-time second moment of the beta law:
///
/// - short (`t < 1`): `Γ(γ+β) t^{A₁} / (Γ(γ) ((A₂−A₁) log(1/t))^γ)`
/// - long  (`t > 1`): `Γ(γ+β) t^{A₂} / (Γ(γ) ((A₂−A₁) log t)^β)`
pub fn beta_msd_asymp(law: &ExponentLaw, t: f64, regime: RegimeKind) -> Result<f64> {
    let (a1, a2, gamma, beta) = match *law {
        ExponentLaw::Beta {
            a1,
            a2,
            gamma,
            beta,
            ..
        } => (a1, a2, gamma, beta),
        _ => return Err(Error::Domain("beta_msd_asymp requires a beta law".into())),
    };
    if t == 1.0 {
        return Err(Error::Domain(
            "beta_msd_asymp is undefined at t = 1 (log t vanishes)".into(),
        ));
    }
    let lg = |x: f64| numerics::ln_gamma(x);
    let prefactor = (lg(gamma + beta)? - lg(gamma)?).exp();
    match regime {
        RegimeKind::ShortTime => {
            if !(t < 1.0) {
                return Err(Error::Domain(format!(
                    "short-time form requires t < 1, got {t}"
                )));
            }
            Ok(prefactor * t.powf(a1) / ((a2 - a1) * (1.0 / t).ln()).powf(gamma))
        }
        RegimeKind::LongTime => {
            if !(t > 1.0) {
                return Err(Error::Domain(format!(
                    "long-time form requires t > 1, got {t}"
                )));
            }
            Ok(prefactor * t.powf(a2) / ((a2 - a1) * t.ln()).powf(beta))
        }
        RegimeKind::SmallLagRatio => Err(Error::Domain(
            "beta_msd_asymp takes short_time or long_time".into(),
        )),
    }
}

/// Power-law exponent of the hitting-time tail: `f_{τ_b}(t) ∼ t^{−1−A_min/2}`.
/// The smallest exponent in the support dominates, so this is invariant to
/// the mixture weights.
pub fn hitting_tail_exponent(law: &ExponentLaw) -> f64 {
    -1.0 - law.a_min() / 2.0
}

/// Cross-check of the EB asymptotic prefactor against the exact EB.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EbPrefactorFit {
    pub alpha: f64,
    /// Prefactor of the closed-form branch.
    pub printed: f64,
    /// Prefactor fitted from the exact EB at small tau/T.
    pub fitted: f64,
    /// fitted / printed.
    pub ratio: f64,
}

/// Fits the exact EB's small-`τ/T` prefactor for the branch shape at
/// `alpha` and reports it against the closed-form constant. Never asserted
/// anywhere — this is the measuring instrument for the suspected misprints
/// in the branch constants.
pub fn eb_prefactor_fit(alpha: f64, spec: &QuadratureSpec) -> Result<EbPrefactorFit> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "eb_prefactor_fit requires alpha > 0, got {alpha}"
        )));
    }
    let shape = |tau: f64, horizon: f64| -> Result<f64> {
        let r = tau / horizon;
        Ok(if alpha < 0.5 {
            r.powf(2.0 * alpha)
        } else if alpha == 0.5 {
            r / 12.0 * ((horizon / tau).ln() + 2.0 * 2.0_f64.ln() - 5.0 / 6.0)
        } else {
            r
        })
    };
    let printed = if alpha < 0.5 {
        c_alpha(alpha)?
    } else if alpha == 0.5 {
        1.0
    } else {
        alpha * alpha / (3.0 * (2.0 * alpha - 1.0))
    };
    // Exact-EB f64 evaluation loses accuracy for alpha > 1/2 beyond
    // tau/T ~ 1e-5 (the bracket cancels ~ (T/tau)^3 digits), so the fit
    // stays at moderate ratios.
    let mut log_sum = 0.0;
    let ratios = [1e-3, 1e-4];
    for &r in &ratios {
        let tau = 1.0;
        let horizon = tau / r;
        let exact = analytics::sbm_eb(alpha, tau, horizon, spec)?;
        log_sum += (exact / shape(tau, horizon)?).ln();
    }
    let fitted = (log_sum / ratios.len() as f64).exp();
    Ok(EbPrefactorFit {
        alpha,
        printed,
        fitted,
        ratio: fitted / printed,
    })
}

fn two_point_params(law: &ExponentLaw) -> Result<(f64, f64, f64)> {
    match *law {
        ExponentLaw::TwoPoint { a1, a2, p, .. } => Ok((a1, a2, p)),
        _ => Err(Error::Domain(
            "this asymptotic requires a two-point law".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics;

    fn tp() -> ExponentLaw {
        ExponentLaw::two_point(0.5, 1.5, 0.5).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn sbm_etamsd_asymp_values() {
        let v = sbm_etamsd_asymp(1.0, 0.3, 50.0);
        assert_eq!(v.value, 0.3);
        assert!(v.warning.is_none());
        let w = sbm_etamsd_asymp(0.5, 0.1, 10.0);
        assert!((w.value - 0.1 * 10.0_f64.powf(-0.5)).abs() < 1e-15);
        assert!((w.value - 0.031_622_776_6).abs() < 1e-9);
        let outside = sbm_etamsd_asymp(0.5, 5.0, 10.0);
        assert!(outside.warning.is_some());
    }

    #[test]
    fn sbm_etamsd_asymp_matches_exact_deep_in_regime() {
        let exact = analytics::sbm_etamsd(1.5, 1.0, 1e4);
        let asymp = sbm_etamsd_asymp(1.5, 1.0, 1e4).value;
        assert!((exact / asymp - 1.0).abs() < 0.02, "{exact} vs {asymp}");
    }

    #[test]
    fn c_alpha_values() {
        // mpmath: C(0.25) = 0.77152920868673916967
        let v = c_alpha(0.25).unwrap();
        assert!((v - 0.771_529_208_686_739_2).abs() < 1e-12);
        // The alpha -> 0+ limit exists and is finite (-> 3/2).
        let near0 = c_alpha(1e-3).unwrap();
        assert!((near0 - 1.495_011_128).abs() < 1e-6);
        assert!(c_alpha(0.5).is_err());
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(0.7).is_err());
    }

    #[test]
    fn sbm_eb_asymp_branch_arithmetic() {
        // alpha = 1: branch formula is exactly tau/(3T).
        let v = sbm_eb_asymp(1.0, 1.0, 100.0).unwrap().value;
        assert!((v - 1.0 / 300.0).abs() < 1e-15);
        // alpha = 1/2 printed form at tau/T = 1e-3.
        let w = sbm_eb_asymp(0.5, 1.0, 1000.0).unwrap().value;
        let expected = 1e-3 / 12.0 * (1000.0_f64.ln() + 2.0 * 2.0_f64.ln() - 5.0 / 6.0);
        assert!((w - expected).abs() < 1e-15);
        assert!(sbm_eb_asymp(0.0, 1.0, 10.0).is_err());
    }

    #[test]
    fn sbm_eb_exact_vs_branch_constant_factor() {
        // Measured against the exact EB, the alpha > 1/2 branch constant is
        // low by a factor of 4; pin that ratio so the relationship between
        // the exact and asymptotic evaluators stays documented.
        let exact = analytics::sbm_eb(0.75, 1.0, 1e4, &spec()).unwrap();
        let printed = sbm_eb_asymp(0.75, 1.0, 1e4).unwrap().value;
        let ratio = exact / printed;
        assert!((ratio / 4.0 - 1.0).abs() < 0.1, "ratio {ratio}");
        // Same factor on the alpha = 1/2 branch.
        let exact_h = analytics::sbm_eb(0.5, 1.0, 1e4, &spec()).unwrap();
        let printed_h = sbm_eb_asymp(0.5, 1.0, 1e4).unwrap().value;
        let ratio_h = exact_h / printed_h;
        assert!((ratio_h / 4.0 - 1.0).abs() < 0.1, "ratio {ratio_h}");
    }

    #[test]
    fn eb_prefactor_fit_reports_gap() {
        let fit = eb_prefactor_fit(0.75, &spec()).unwrap();
        assert!((fit.ratio - 4.0).abs() < 0.5, "fit ratio {}", fit.ratio);
        let sub = eb_prefactor_fit(0.25, &spec()).unwrap();
        assert!(sub.fitted > 0.0 && sub.printed > 0.0);
    }

    #[test]
    fn tp_msd_asymp_approaches_exact() {
        let law = tp();
        let exact = |t: f64| law.mean_power(t).unwrap();
        let short = tp_msd_asymp(&law, 1e-6, RegimeKind::ShortTime).unwrap();
        assert!((exact(1e-6) / short - 1.0).abs() < 0.01);
        let long = tp_msd_asymp(&law, 1e6, RegimeKind::LongTime).unwrap();
        assert!((exact(1e6) / long - 1.0).abs() < 0.01);
        assert!(tp_msd_asymp(
            &ExponentLaw::degenerate(1.0).unwrap(),
            1.0,
            RegimeKind::ShortTime
        )
        .is_err());
    }

    #[test]
    fn tp_etamsd_asymp_orders() {
        let law = tp();
        // Deep in the regime, leading term matches the exact value to 1%.
        let exact = analytics::etamsd(&law, 1.0, 1e4, &spec()).unwrap();
        let lead = tp_etamsd_asymp(&law, 1.0, 1e4, EtamsdOrder::Leading)
            .unwrap()
            .value;
        assert!((exact / lead - 1.0).abs() < 0.01, "{exact} vs {lead}");
        // At tau/T = 1e-2 the three-term form is the better approximation.
        let exact2 = analytics::etamsd(&law, 0.1, 10.0, &spec()).unwrap();
        let lead2 = tp_etamsd_asymp(&law, 0.1, 10.0, EtamsdOrder::Leading)
            .unwrap()
            .value;
        let taylor = tp_etamsd_asymp(&law, 0.1, 10.0, EtamsdOrder::Taylor3)
            .unwrap()
            .value;
        assert!(
            (taylor - exact2).abs() < (lead2 - exact2).abs(),
            "taylor3 {taylor}, leading {lead2}, exact {exact2}"
        );
        // p = 1 collapses to the SBM small-lag form with alpha = A1.
        let collapsed = tp_etamsd_asymp_raw(0.5, 1.5, 1.0, 0.5, 1e3, EtamsdOrder::Leading);
        let sbm = sbm_etamsd_asymp(0.5, 0.5, 1e3).value;
        assert!((collapsed - sbm).abs() <= 1e-15);
    }

    #[test]
    fn tp_eb_asymp_fig8_value_and_limit() {
        // mpmath evaluation of the printed piecewise form at
        // A1=0.3, A2=0.7, p=0.5, tau=1, T=1000: 0.77749063
        let law = ExponentLaw::two_point(0.3, 0.7, 0.5).unwrap();
        let v = tp_eb_asymp(&law, 1.0, 1000.0).unwrap();
        assert!((v - 0.777_490_63).abs() < 1e-7, "{v}");
        // T -> infinity limit approaches p/(1-p) = 1.
        let far = tp_eb_asymp(&law, 1.0, 1e10).unwrap();
        assert!((far - 1.0).abs() < 0.01, "{far}");
        // All five parameter branches evaluate to finite positive values.
        for (a1, a2) in [(0.2, 0.4), (0.3, 0.5), (0.3, 0.7), (0.5, 0.7), (0.6, 1.5)] {
            let l = ExponentLaw::two_point(a1, a2, 0.4).unwrap();
            let x = tp_eb_asymp(&l, 1.0, 1e4).unwrap();
            assert!(x.is_finite() && x > 0.0, "({a1},{a2}): {x}");
        }
        assert!(tp_eb_asymp_raw(0.5, 0.5, 0.5, 1.0, 1e4).is_err());
    }

    #[test]
    fn tp_eb_asymp_weight_limits_reduce_to_sbm() {
        // p = 1 or p = 0 leaves only the surviving exponent's SBM branch.
        for &(a1, a2) in &[(0.3, 0.7), (0.6, 1.5), (0.2, 0.4)] {
            let at_p1 = tp_eb_asymp_raw(a1, a2, 1.0, 1.0, 1e4).unwrap();
            let sbm1 = sbm_eb_asymp(a1, 1.0, 1e4).unwrap().value;
            assert!((at_p1 - sbm1).abs() <= 1e-12 * sbm1, "p=1 ({a1},{a2})");
            let at_p0 = tp_eb_asymp_raw(a1, a2, 0.0, 1.0, 1e4).unwrap();
            let sbm2 = sbm_eb_asymp(a2, 1.0, 1e4).unwrap().value;
            assert!((at_p0 - sbm2).abs() <= 1e-12 * sbm2, "p=0 ({a1},{a2})");
        }
    }

    #[test]
    fn tp_eb_limit_values() {
        assert_eq!(tp_eb_limit(0.5).unwrap(), 1.0);
        assert_eq!(tp_eb_limit(0.0).unwrap(), 0.0);
        assert_eq!(tp_eb_limit(1.0).unwrap(), 0.0);
        assert!((tp_eb_limit(0.9).unwrap() - 9.0).abs() < 1e-12);
        assert!(tp_eb_limit(1.5).is_err());
    }

    #[test]
    fn beta_msd_asymp_long_form_converges_monotonically() {
        let law = ExponentLaw::beta(0.5, 1.5, 0.5, 0.5).unwrap();
        let mut prev_ratio = f64::INFINITY;
        let mut t = 1e4;
        while t <= 1e10 {
            let exact = law.mean_power(t).unwrap();
            let asymp = beta_msd_asymp(&law, t, RegimeKind::LongTime).unwrap();
            let ratio = exact / asymp;
            assert!(ratio < prev_ratio, "not decreasing at t={t}");
            prev_ratio = ratio;
            t *= 10.0;
        }
        assert!((prev_ratio - 1.0).abs() < 0.05, "final ratio {prev_ratio}");
        assert!(beta_msd_asymp(&law, 1.0, RegimeKind::LongTime).is_err());
        assert!(beta_msd_asymp(&law, 2.0, RegimeKind::ShortTime).is_err());
        assert!(beta_msd_asymp(&law, 0.5, RegimeKind::LongTime).is_err());
    }

    #[test]
    fn hitting_tail_exponent_depends_only_on_a_min() {
        assert_eq!(
            hitting_tail_exponent(&ExponentLaw::degenerate(1.0).unwrap()),
            -1.5
        );
        assert_eq!(hitting_tail_exponent(&tp()), -1.25);
        for p in [0.1, 0.5, 0.9] {
            let l = ExponentLaw::two_point(0.5, 1.5, p).unwrap();
            assert_eq!(hitting_tail_exponent(&l), -1.25);
        }
        for (g, b) in [(0.7, 0.3), (0.5, 0.5), (0.3, 0.7)] {
            let l = ExponentLaw::beta(0.5, 1.5, g, b).unwrap();
            assert_eq!(hitting_tail_exponent(&l), -1.25);
        }
    }

    #[test]
    fn exact_hitting_pdf_tail_slope() {
        // Log-log regression of the exact mixture hitting pdf over
        // [1e4, 1e8] recovers the tail exponent to 0.02.
        for law in [tp(), ExponentLaw::degenerate(0.5).unwrap()] {
            let n = 30;
            let (lo, hi) = (1e4_f64.ln(), 1e8_f64.ln());
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    let lt = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    let f = analytics::hitting_pdf(&law, 1.0, lt.exp(), &spec()).unwrap();
                    (lt, f.ln())
                })
                .collect();
            let slope = crate::estimators::least_squares_slope(&pts).0;
            let expected = hitting_tail_exponent(&law);
            assert!(
                (slope - expected).abs() < 0.02,
                "{law}: slope {slope} vs {expected}"
            );
        }
    }
}
