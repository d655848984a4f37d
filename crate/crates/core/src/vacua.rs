//! α-vacua as seen by an inertial observer.
//!
//! The conformal vacuum splits across the cosmological horizon into a
//! two-mode squeezed state over (region I, region II) pairs with Schmidt ratio
//! `tanh r · Δ`, where `tanh² r = exp(−2πk/H)` and Δ is the non-thermal
//! distortion introduced by the vacuum parameter α.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{OccupationState, Region, Register, StateVector};

/// Vacuum parameter. `BunchDavies` stands for α = −∞ and is handled on its
/// own branch so that no `exp(−∞)` products are ever formed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    BunchDavies,
    Finite(f64),
}

impl Alpha {
    /// A finite vacuum parameter; must be real and strictly negative.
    pub fn finite(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha >= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "vacuum parameter must be finite and negative, got {alpha}"
            )));
        }
        Ok(Alpha::Finite(alpha))
    }

    /// α = ln(H/Λ), the value matching a physical-momentum cutoff at Λ.
    pub fn from_cutoff(hubble: f64, cutoff: f64) -> Result<Self> {
        if !(hubble > 0.0 && cutoff > hubble) {
            return Err(Error::InvalidArgument(format!(
                "cutoff scale must exceed the Hubble rate: H = {hubble}, Λ = {cutoff}"
            )));
        }
        Alpha::finite((hubble / cutoff).ln())
    }

    /// e^α, exactly zero for Bunch-Davies.
    pub fn exp(self) -> f64 {
        match self {
            Alpha::BunchDavies => 0.0,
            Alpha::Finite(a) => a.exp(),
        }
    }

    /// α as a float, with −∞ for Bunch-Davies. For display and sorting only.
    pub fn value(self) -> f64 {
        match self {
            Alpha::BunchDavies => f64::NEG_INFINITY,
            Alpha::Finite(a) => a,
        }
    }

    pub fn is_bunch_davies(self) -> bool {
        matches!(self, Alpha::BunchDavies)
    }

    /// 1/√(1 − e^{2α}), the Mottola-Allen normalization.
    pub fn normalization(self) -> f64 {
        match self {
            Alpha::BunchDavies => 1.0,
            Alpha::Finite(a) => 1.0 / (-(2.0 * a).exp_m1()).sqrt(),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::BunchDavies => write!(f, "-inf"),
            Alpha::Finite(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "-inf" | "-infinity" | "bd" | "bunch-davies" => Ok(Alpha::BunchDavies),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("not a vacuum parameter: {s:?}")))?;
                Alpha::finite(v)
            }
        }
    }
}

/// Hubble rate, mode momentum, vacuum parameter and optional cutoff scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeSitterParams {
    hubble: f64,
    momentum: f64,
    alpha: Alpha,
    cutoff: Option<f64>,
}

impl DeSitterParams {
    pub fn new(hubble: f64, momentum: f64, alpha: Alpha) -> Result<Self> {
        if !(hubble > 0.0 && hubble.is_finite()) {
            return Err(Error::InvalidArgument(format!("H must be positive, got {hubble}")));
        }
        if !(momentum > 0.0 && momentum.is_finite()) {
            return Err(Error::InvalidArgument(format!("k must be positive, got {momentum}")));
        }
        if let Alpha::Finite(a) = alpha {
            Alpha::finite(a)?;
        }
        Ok(DeSitterParams {
            hubble,
            momentum,
            alpha,
            cutoff: None,
        })
    }

    /// Parameters at a given ratio k/H, with H = 1.
    pub fn from_ratio(k_over_h: f64, alpha: Alpha) -> Result<Self> {
        DeSitterParams::new(1.0, k_over_h, alpha)
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Result<Self> {
        if cutoff.is_nan() || cutoff <= self.hubble {
            return Err(Error::InvalidArgument(format!(
                "cutoff Λ = {cutoff} must exceed H = {}",
                self.hubble
            )));
        }
        self.cutoff = Some(cutoff);
        Ok(self)
    }

    pub fn hubble(&self) -> f64 {
        self.hubble
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn cutoff(&self) -> Option<f64> {
        self.cutoff
    }

    pub fn k_over_h(&self) -> f64 {
        self.momentum / self.hubble
    }
}

/// Squeezing seen by the inertial observer for one (k, H, α).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezingParams {
    /// Squeezing parameter r.
    pub r: f64,
    /// tanh r = e^{−πk/H}.
    pub tanh_r: f64,
    /// Δ; may be `inf` when α + πk/H exceeds the f64 range, `ln_delta` stays finite.
    pub delta: f64,
    pub ln_delta: f64,
    /// tanh r · Δ, the Schmidt ratio of the two-mode expansion.
    pub ratio: f64,
    /// tanh² r · Δ², always < 1.
    pub q: f64,
}

impl SqueezingParams {
    pub fn cosh_r(&self) -> f64 {
        1.0 / (1.0 - self.tanh_r * self.tanh_r).sqrt()
    }

    pub fn sinh_r(&self) -> f64 {
        self.tanh_r * self.cosh_r()
    }

    /// 1 − q, computed without cancellation for small ratios.
    pub fn one_minus_q(&self) -> f64 {
        (1.0 - self.ratio) * (1.0 + self.ratio)
    }
}

/// ln(1 + e^y) without overflow.
fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

pub fn squeezing_from_params(p: &DeSitterParams) -> SqueezingParams {
    let x = std::f64::consts::PI * p.k_over_h();
    let tanh_r = (-x).exp();
    let (ln_delta, ratio) = match p.alpha {
        Alpha::BunchDavies => (0.0, tanh_r),
        Alpha::Finite(a) => {
            let c = a.exp();
            // tanh r · Δ = (e^{−x} + e^α) / (1 + e^{α − x})
            (softplus(a + x) - softplus(a - x), (tanh_r + c) / (1.0 + c * tanh_r))
        }
    };
    SqueezingParams {
        r: tanh_r.atanh(),
        tanh_r,
        delta: ln_delta.exp(),
        ln_delta,
        ratio,
        q: ratio * ratio,
    }
}

/// Upper bound on the probability discarded when every two-mode expansion
/// (vacuum and one-particle) and their three-fold products are truncated at
/// `n_max`: 3 Σ_{n ≥ n_max} (n+1)² qⁿ, evaluated in closed form.
pub fn tail_bound(q: f64, n_max: u32) -> f64 {
    if q == 0.0 {
        return if n_max == 0 { 3.0 } else { 0.0 };
    }
    let n1 = n_max as f64 + 1.0;
    let om = 1.0 - q;
    let series = n1 * n1 / om + 2.0 * n1 * q / (om * om) + q * (1.0 + q) / (om * om * om);
    3.0 * q.powf(n_max as f64) * series
}

/// Smallest cutoff (at least 1) whose [`tail_bound`] is below `tol`.
pub fn truncation_tail_bound(p: &DeSitterParams, tol: f64) -> Result<u32> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(cutoff_for_ratio(squeezing_from_params(p).q, tol))
}

pub(crate) fn cutoff_for_ratio(q: f64, tol: f64) -> u32 {
    let mut n = 1u32;
    while tail_bound(q, n) >= tol && n < u32::MAX / 2 {
        n += 1;
    }
    n
}

/// Truncated two-mode state, renormalized, with the pre-normalization norm kept
/// for tail diagnostics. Mode 0 is region I, mode 1 region II.
#[derive(Clone, Debug)]
pub struct TwoModeState {
    pub state: StateVector,
    pub raw: StateVector,
    pub raw_norm_sqr: f64,
}

fn check_cutoff(p: &DeSitterParams, n_max: u32, tol: f64) -> Result<SqueezingParams> {
    let required = truncation_tail_bound(p, tol)?;
    if n_max < required {
        return Err(Error::Truncation {
            n_max: n_max as usize,
            required: required as usize,
            tol,
        });
    }
    Ok(squeezing_from_params(p))
}

fn horizon_register(n_max: u32) -> Register {
    Register::new(n_max, vec![Region::I, Region::II])
}

fn finish(raw: StateVector) -> Result<TwoModeState> {
    let raw_norm_sqr = raw.norm_sqr();
    Ok(TwoModeState {
        state: raw.normalize()?,
        raw,
        raw_norm_sqr,
    })
}

/// Per-mode cutoff together with the tail tolerance it must satisfy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub n_max: u32,
    pub tol: f64,
}

impl Truncation {
    pub fn new(n_max: u32, tol: f64) -> Self {
        Truncation { n_max, tol }
    }

    /// The smallest cutoff meeting `tol` for these parameters.
    pub fn for_params(p: &DeSitterParams, tol: f64) -> Result<Self> {
        Ok(Truncation::new(truncation_tail_bound(p, tol)?, tol))
    }
}

/// Unnormalized √(1−q) Σₙ (tanh r Δ)ⁿ |n; n⟩ for n ≤ `n_max`, no tail check.
pub(crate) fn raw_vacuum(sq: &SqueezingParams, n_max: u32) -> Result<StateVector> {
    let mut raw = StateVector::zero(horizon_register(n_max));
    let mut coeff = sq.one_minus_q().sqrt();
    for n in 0..=n_max {
        if coeff < raw.prune_threshold() {
            break;
        }
        raw.add_amplitude(OccupationState::new(vec![n, n]), Complex64::new(coeff, 0.0))?;
        coeff *= sq.ratio;
    }
    Ok(raw)
}

/// Unnormalized (1−q) Σₙ (tanh r Δ)ⁿ √(n+1) |n+1; n⟩ for n+1 ≤ `n_max`, no tail check.
pub(crate) fn raw_one_particle(sq: &SqueezingParams, n_max: u32) -> Result<StateVector> {
    let mut raw = StateVector::zero(horizon_register(n_max));
    let mut geometric = sq.one_minus_q();
    for n in 0..n_max {
        let coeff = geometric * ((n + 1) as f64).sqrt();
        if coeff < raw.prune_threshold() {
            break;
        }
        raw.add_amplitude(OccupationState::new(vec![n + 1, n]), Complex64::new(coeff, 0.0))?;
        geometric *= sq.ratio;
    }
    Ok(raw)
}

/// √(1−q) Σₙ (tanh r Δ)ⁿ |n; n⟩, truncated at `n_max`.
pub fn alpha_vacuum_state(p: &DeSitterParams, n_max: u32, tol: f64) -> Result<TwoModeState> {
    let sq = check_cutoff(p, n_max, tol)?;
    finish(raw_vacuum(&sq, n_max)?)
}

/// (1−q) Σₙ (tanh r Δ)ⁿ √(n+1) |n+1; n⟩, truncated at region-I occupation `n_max`.
pub fn alpha_one_particle_state(p: &DeSitterParams, n_max: u32, tol: f64) -> Result<TwoModeState> {
    let sq = check_cutoff(p, n_max, tol)?;
    finish(raw_one_particle(&sq, n_max)?)
}

/// ΔP/P = (H/Λ) sin(2Λ/H).
pub fn power_spectrum_modification(hubble: f64, cutoff: f64) -> Result<f64> {
    if !(hubble > 0.0 && cutoff > hubble) {
        return Err(Error::InvalidArgument(format!(
            "need Λ > H > 0, got H = {hubble}, Λ = {cutoff}"
        )));
    }
    Ok(hubble / cutoff * (2.0 * cutoff / hubble).sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd(k_over_h: f64) -> DeSitterParams {
        DeSitterParams::from_ratio(k_over_h, Alpha::BunchDavies).unwrap()
    }

    fn fin(k_over_h: f64, a: f64) -> DeSitterParams {
        DeSitterParams::from_ratio(k_over_h, Alpha::Finite(a)).unwrap()
    }

    #[test]
    fn bunch_davies_squeezing() {
        let sq = squeezing_from_params(&bd(1.0));
        assert!((sq.tanh_r * sq.tanh_r - 1.8674427317079893e-3).abs() < 1e-15);
        assert_eq!(sq.delta, 1.0);
        assert_eq!(sq.ratio, sq.tanh_r);
    }

    #[test]
    fn delta_at_alpha_minus_four() {
        // Direct evaluation of (1 + e^{α+πk/H}) / (1 + e^{α−πk/H}).
        let pi = std::f64::consts::PI;
        let direct = (1.0 + (-4.0 + pi).exp()) / (1.0 + (-4.0 - pi).exp());
        let sq = squeezing_from_params(&fin(1.0, -4.0));
        assert!((sq.delta - direct).abs() < 1e-14);
        assert!((sq.delta - 1.4227).abs() < 1e-4);
        assert!((sq.ratio - sq.tanh_r * direct).abs() < 1e-15);
    }

    #[test]
    fn deep_ultraviolet() {
        for a in [Alpha::BunchDavies, Alpha::Finite(-30.0)] {
            let sq = squeezing_from_params(&DeSitterParams::from_ratio(1e3, a).unwrap());
            assert_eq!(sq.tanh_r, 0.0);
            assert!(sq.q < 1e-25);
        }
    }

    #[test]
    fn log_space_delta_does_not_overflow() {
        let sq = squeezing_from_params(&fin(300.0, -1.0));
        assert!(sq.ln_delta.is_finite());
        assert!((sq.ln_delta - (std::f64::consts::PI * 300.0 - 1.0)).abs() < 1e-9);
        assert!((sq.ratio - (-1.0f64).exp()).abs() < 1e-15);
        assert!(sq.q < 1.0);
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("-inf".parse::<Alpha>().unwrap(), Alpha::BunchDavies);
        assert_eq!("-4".parse::<Alpha>().unwrap(), Alpha::Finite(-4.0));
        assert!("0".parse::<Alpha>().is_err());
        assert!("1.5".parse::<Alpha>().is_err());
        assert!("x".parse::<Alpha>().is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(DeSitterParams::new(0.0, 1.0, Alpha::BunchDavies).is_err());
        assert!(DeSitterParams::new(1.0, -1.0, Alpha::BunchDavies).is_err());
        assert!(DeSitterParams::new(1.0, 1.0, Alpha::Finite(0.0)).is_err());
        assert!(bd(1.0).with_cutoff(0.5).is_err());
        assert_eq!(bd(1.0).with_cutoff(10.0).unwrap().cutoff(), Some(10.0));
    }

    #[test]
    fn vacuum_flat_limit() {
        let p = DeSitterParams::new(1e-3, 1.0, Alpha::BunchDavies).unwrap();
        let v = alpha_vacuum_state(&p, 1, 1e-12).unwrap();
        assert_eq!(v.state.len(), 1);
        assert_eq!(v.state.amplitude(&vec![0, 0].into()).re, 1.0);
        let one = alpha_one_particle_state(&p, 1, 1e-12).unwrap();
        assert_eq!(one.state.len(), 1);
        assert_eq!(one.state.amplitude(&vec![1, 0].into()).re, 1.0);
    }

    #[test]
    fn vacuum_weights_half() {
        let p = bd(0.5);
        let n_max = truncation_tail_bound(&p, 1e-12).unwrap();
        let v = alpha_vacuum_state(&p, n_max, 1e-12).unwrap();
        let pi = std::f64::consts::PI;
        for n in 0..6u32 {
            let w = v.state.amplitude(&vec![n, n].into()).norm_sqr();
            let expected = (1.0 - (-pi).exp()) * (-pi * n as f64).exp();
            assert!((w - expected).abs() < 1e-12, "n = {n}");
        }
        let w0 = v.state.amplitude(&vec![0, 0].into()).norm_sqr();
        assert!((w0 - 0.95679).abs() < 1e-5);
    }

    #[test]
    fn schmidt_coefficients_are_geometric() {
        let p = fin(0.7, -2.0);
        let sq = squeezing_from_params(&p);
        let v = alpha_vacuum_state(&p, 30, 1e-6).unwrap();
        for n in 0..10u32 {
            let a = v.raw.amplitude(&vec![n, n].into()).re;
            let b = v.raw.amplitude(&vec![n + 1, n + 1].into()).re;
            assert!((b / a - sq.ratio).abs() < 1e-13);
        }
    }

    #[test]
    fn one_particle_orthogonal_to_vacuum() {
        let p = fin(0.5, -3.0);
        let n = truncation_tail_bound(&p, 1e-12).unwrap();
        let v = alpha_vacuum_state(&p, n, 1e-12).unwrap();
        let o = alpha_one_particle_state(&p, n, 1e-12).unwrap();
        assert_eq!(v.state.inner(&o.state).unwrap().norm(), 0.0);
    }

    #[test]
    fn truncation_error_when_cutoff_too_small() {
        let p = bd(0.3);
        let err = alpha_vacuum_state(&p, 3, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Truncation { n_max: 3, .. }));
        assert!(alpha_one_particle_state(&p, 3, 1e-12).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(cutoff_for_ratio(0.0, 1e-12), 1);
        assert!(truncation_tail_bound(&bd(1.0), 0.0).is_err());
        assert!(truncation_tail_bound(&bd(1.0), 1.0).is_err());
    }

    #[test]
    fn tail_bound_half_against_direct_summation() {
        let q = 0.5f64;
        let tol = 1e-12;
        let n_max = cutoff_for_ratio(q, tol);
        let direct = |n: u32| -> f64 {
            (n..n + 400)
                .map(|m| 3.0 * ((m + 1) as f64).powi(2) * q.powi(m as i32))
                .sum()
        };
        assert!(direct(n_max) < tol);
        assert!(direct(n_max - 1) >= tol);
        // exact discarded probabilities of the two expansions
        let vac: f64 = (n_max + 1..n_max + 400)
            .map(|m| (1.0 - q) * q.powi(m as i32))
            .sum();
        let one: f64 = (n_max..n_max + 400)
            .map(|m| (1.0 - q).powi(2) * (m + 1) as f64 * q.powi(m as i32))
            .sum();
        assert!(1.0 - (1.0 - vac) * (1.0 - one) * (1.0 - vac) < tol);
    }

    #[test]
    fn tail_bound_monotone_in_q() {
        let mut prev = 0;
        for i in 0..60 {
            let q = i as f64 / 64.0;
            let n = cutoff_for_ratio(q, 1e-10);
            assert!(n >= prev, "q = {q}");
            prev = n;
        }
    }

    #[test]
    fn power_spectrum() {
        let h = 1e14;
        let l = 1e16;
        let v = power_spectrum_modification(h, l).unwrap();
        assert!((v - 1e-2 * 200f64.sin()).abs() < 1e-17);
        let pi = std::f64::consts::PI;
        for m in 1..5 {
            let l = pi * m as f64 / 2.0 * 1.0;
            if l > 1.0 {
                assert!(power_spectrum_modification(1.0, l).unwrap().abs() < 1e-15);
            }
        }
        assert!(power_spectrum_modification(1.0, 0.5).is_err());
    }

    #[test]
    fn cutoff_helper() {
        let a = Alpha::from_cutoff(1e14, 1e16).unwrap();
        assert!((a.value() - (0.01f64).ln()).abs() < 1e-14);
        assert!(Alpha::from_cutoff(1.0, 0.5).is_err());
    }

    #[test]
    fn bogoliubov_identity() {
        let sq = squeezing_from_params(&bd(0.4));
        assert!((sq.cosh_r().powi(2) - sq.sinh_r().powi(2) - 1.0).abs() < 1e-13);
        assert!((sq.r.tanh() - sq.tanh_r).abs() < 1e-15);
    }
}
