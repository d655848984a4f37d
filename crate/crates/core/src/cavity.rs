//! Teleportation through cavities entangled by a passing two-level atom.
//!
//! Alice's cavity lives in the conformal (planar) chart, Bob's in the static
//! chart. A single atom crosses both; its emission amplitudes C_A and C_B set
//! the channel C_A|1_A 0_B⟩ + C_B|0_A 1_B⟩ used for teleportation.
//!
//! Emission amplitudes integrate the conjugate mode function,
//! −i ∫ ε(τ) φ*(x(τ)) e^{−iΩτ} dτ, which is the one-quantum matrix element
//! ⟨1|φ̂(x)|0⟩ = φ*(x).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freemode::OutcomeCoefficients;
use crate::quadrature::{integrate, QuadratureResult, QuadratureSettings};
use crate::qubit::{apply2, BellOutcome, LogicalQubit};
use crate::vacua::Alpha;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// sin(nπ/2), exact.
fn sin_half_pi(n: u32) -> f64 {
    match n % 4 {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

/// Alice's cavity, mirrors at z₁ and z₁ + L in the conformal chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalCavity {
    pub z1: f64,
    pub length: f64,
    pub mode: u32,
    /// N_A; only the C_A/C_B ratio matters after renormalization.
    pub norm: f64,
    pub alpha: Alpha,
}

impl ConformalCavity {
    pub fn new(z1: f64, length: f64, mode: u32, alpha: Alpha) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) || !z1.is_finite() {
            return Err(Error::InvalidArgument(format!("cavity z1 = {z1}, L = {length}")));
        }
        if mode == 0 {
            return Err(Error::InvalidArgument("cavity mode index must be positive".into()));
        }
        Ok(ConformalCavity {
            z1,
            length,
            mode,
            norm: 1.0,
            alpha,
        })
    }

    pub fn with_norm(mut self, norm: f64) -> Self {
        self.norm = norm;
        self
    }

    /// kₙ = nπ/L.
    pub fn wavenumber(&self) -> f64 {
        self.mode as f64 * PI / self.length
    }

    pub fn center(&self) -> f64 {
        self.z1 + 0.5 * self.length
    }

    /// L' = L/√(1 + L²H²), the cavity length seen from the static chart.
    pub fn static_length(&self, hubble: f64) -> f64 {
        self.length / (self.length * hubble).hypot(1.0)
    }

    /// Bob's cavity with the same mode index and the length this cavity has in
    /// the static chart.
    pub fn to_static(&self, hubble: f64) -> Result<StaticCavity> {
        StaticCavity::new(self.static_length(hubble), self.mode, hubble)
    }

    /// N_A/√(kₙ(1−e^{2α})) · sin(kₙ(z−z₁)) · (e^{−ikₙη} + e^α e^{ikₙη}).
    pub fn mode_function(&self, eta: f64, z: f64) -> Result<Complex64> {
        let slack = 1e-12 * self.length.max(1.0);
        if z < self.z1 - slack || z > self.z1 + self.length + slack {
            return Err(Error::Domain(format!(
                "z = {z} outside cavity [{}, {}]",
                self.z1,
                self.z1 + self.length
            )));
        }
        let k = self.wavenumber();
        let spatial = (k * (z - self.z1)).sin();
        let temporal = match self.alpha {
            Alpha::BunchDavies => Complex64::from_polar(1.0, -k * eta),
            Alpha::Finite(a) => {
                Complex64::from_polar(1.0, -k * eta) + Complex64::from_polar(a.exp(), k * eta)
            }
        };
        Ok(temporal * (self.norm * self.alpha.normalization() / k.sqrt() * spatial))
    }
}

pub fn conformal_mode_function(c: &ConformalCavity, eta: f64, z: f64) -> Result<Complex64> {
    c.mode_function(eta, z)
}

/// Bob's cavity between r = 0 and r = L' in the static chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticCavity {
    pub length: f64,
    pub mode: u32,
    pub norm: f64,
    pub hubble: f64,
}

impl StaticCavity {
    pub fn new(length: f64, mode: u32, hubble: f64) -> Result<Self> {
        if !(hubble > 0.0 && length > 0.0) || mode == 0 {
            return Err(Error::InvalidArgument(format!(
                "static cavity L' = {length}, n = {mode}, H = {hubble}"
            )));
        }
        if length * hubble >= 1.0 {
            return Err(Error::Horizon(format!(
                "cavity length L' = {length} reaches the horizon 1/H = {}",
                1.0 / hubble
            )));
        }
        Ok(StaticCavity {
            length,
            mode,
            norm: 1.0,
            hubble,
        })
    }

    pub fn with_norm(mut self, norm: f64) -> Self {
        self.norm = norm;
        self
    }

    /// k'ₙ = 2nπH / ln((1+HL')/(1−HL')) = nπH / atanh(HL').
    pub fn wavenumber(&self) -> f64 {
        self.mode as f64 * PI * self.hubble / (self.hubble * self.length).atanh()
    }

    /// N_B/√k'ₙ · sin[(k'ₙ/H)(atanh(Hr) − atanh(HL'))] · e^{−ik'ₙt}.
    pub fn mode_function(&self, t: f64, r: f64) -> Result<Complex64> {
        let h = self.hubble;
        if r * h >= 1.0 {
            return Err(Error::Horizon(format!("r = {r} at or beyond 1/H = {}", 1.0 / h)));
        }
        let slack = 1e-12 * self.length;
        if r < -slack || r > self.length + slack {
            return Err(Error::Domain(format!("r = {r} outside cavity [0, {}]", self.length)));
        }
        let k = self.wavenumber();
        let phase = k / h * ((h * r).atanh() - (h * self.length).atanh());
        Ok(Complex64::from_polar(self.norm / k.sqrt() * phase.sin(), -k * t))
    }
}

pub fn static_mode_function(c: &StaticCavity, t: f64, r: f64) -> Result<Complex64> {
    c.mode_function(t, r)
}

/// (t, r) → (η, z): η = −e^{−tH}/(H√(1−r²H²)), z = r e^{−tH}/√(1−r²H²).
pub fn chart_transform(t: f64, r: f64, hubble: f64) -> Result<(f64, f64)> {
    let s = r * hubble;
    if s.abs() >= 1.0 {
        return Err(Error::Horizon(format!("|rH| = {} ≥ 1", s.abs())));
    }
    let scale = (-t * hubble).exp() / ((1.0 - s) * (1.0 + s)).sqrt();
    Ok((-scale / hubble, r * scale))
}

/// (η, z) → (t, r) on the static patch η < 0, |z| < |η|.
pub fn chart_inverse(eta: f64, z: f64, hubble: f64) -> Result<(f64, f64)> {
    if eta.is_nan() || eta >= 0.0 {
        return Err(Error::Domain(format!("conformal time η = {eta} must be negative")));
    }
    let s = z / eta;
    if s.abs() >= 1.0 {
        return Err(Error::Horizon(format!("|z/η| = {} ≥ 1", s.abs())));
    }
    // e^{−tH} = H√(η² − z²) = −Hη √(1 − s²)
    let t = -((-hubble * eta).ln() + 0.5 * (-s * s).ln_1p()) / hubble;
    Ok((t, -s / hubble))
}

/// ε e^{−(τ−τ₀)²/w²}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSwitch {
    pub strength: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianSwitch {
    pub fn new(strength: f64, center: f64, width: f64) -> Result<Self> {
        if width.is_nan() || width <= 0.0 || !strength.is_finite() || !center.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "switching ε = {strength}, τ₀ = {center}, w = {width}"
            )));
        }
        Ok(GaussianSwitch {
            strength,
            center,
            width,
        })
    }

    pub fn value(&self, tau: f64) -> f64 {
        let u = (tau - self.center) / self.width;
        self.strength * (-u * u).exp()
    }
}

/// Atom at fixed conformal position Z, crossing both cavities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomPath {
    pub position: f64,
    pub omega: f64,
    pub switch_a: GaussianSwitch,
    /// `None` selects the default: same ε and w as cavity A, centred where
    /// the trajectory crosses r = L'/2.
    pub switch_b: Option<GaussianSwitch>,
    /// Integration half-window, in switching widths.
    pub window: f64,
}

impl AtomPath {
    /// Atom through the centre of `cavity` with Gaussian switching peaked at `eta_a`.
    pub fn through(cavity: &ConformalCavity, omega: f64, eps: f64, width: f64, eta_a: f64) -> Result<Self> {
        Ok(AtomPath {
            position: cavity.center(),
            omega,
            switch_a: GaussianSwitch::new(eps, eta_a, width)?,
            switch_b: None,
            window: 8.0,
        })
    }

    pub fn with_switch_b(mut self, switch: GaussianSwitch) -> Self {
        self.switch_b = Some(switch);
        self
    }

    pub fn with_window(mut self, widths: f64) -> Self {
        self.window = widths;
        self
    }

    /// τ at which r(τ) = −Z/(Hτ) equals L'/2.
    pub fn static_transit(&self, cavity: &StaticCavity) -> f64 {
        -2.0 * self.position / (cavity.hubble * cavity.length)
    }

    pub fn switch_b_for(&self, cavity: &StaticCavity) -> GaussianSwitch {
        self.switch_b.unwrap_or(GaussianSwitch {
            center: self.static_transit(cavity),
            ..self.switch_a
        })
    }

    /// Static coordinates of the atom at proper time τ.
    pub fn static_coordinates(&self, tau: f64, hubble: f64) -> Result<(f64, f64)> {
        chart_inverse(tau, self.position, hubble)
    }
}

/// Closed-form C_A for Gaussian switching:
///
/// −iεwN_A √(π/(kₙ(1−e^{2α}))) sin(nπ/2)
///   · [e^{−δ₋²w²/4 + iδ₋η_A} + e^{−δ₊²w²/4 − iδ₊η_A + α}],  δ± = kₙ ± Ω.
pub fn amplitude_ca_closed_form(c: &ConformalCavity, path: &AtomPath) -> Complex64 {
    let sw = &path.switch_a;
    let k = c.wavenumber();
    let s = sin_half_pi(c.mode);
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (w, eta) = (sw.width, sw.center);
    let dm = k - path.omega;
    let dp = k + path.omega;
    let mut bracket = Complex64::from_polar((-dm * dm * w * w / 4.0).exp(), dm * eta);
    if let Alpha::Finite(a) = c.alpha {
        bracket += Complex64::from_polar((-dp * dp * w * w / 4.0 + a).exp(), -dp * eta);
    }
    let pre = sw.strength * w * c.norm * c.alpha.normalization() * (PI / k).sqrt() * s;
    -I * pre * bracket
}

/// Which cavity an amplitude is computed for.
#[derive(Clone, Copy, Debug)]
pub enum CavityMode<'a> {
    Conformal(&'a ConformalCavity),
    Static(&'a StaticCavity),
}

/// −i ∫ ε(τ) φ*(x(τ)) e^{−iΩτ} dτ along the atom's trajectory, by adaptive quadrature.
pub fn amplitude_numeric(
    mode: CavityMode<'_>,
    path: &AtomPath,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    match mode {
        CavityMode::Conformal(c) => {
            let sw = path.switch_a;
            let lo = sw.center - path.window * sw.width;
            let hi = sw.center + path.window * sw.width;
            let z = path.position;
            emission(|tau| c.mode_function(tau, z), &sw, path.omega, lo, hi, settings)
        }
        CavityMode::Static(c) => {
            let sw = path.switch_b_for(c);
            let h = c.hubble;
            let z = path.position;
            if z.is_nan() || z <= 0.0 {
                return Err(Error::Domain(format!(
                    "atom at Z = {z} never enters the static cavity at r ≥ 0"
                )));
            }
            let lo = sw.center - path.window * sw.width;
            let hi = sw.center + path.window * sw.width;
            // r(τ) = −Z/(Hτ) reaches 1/H at τ = −Z.
            if hi >= -z {
                return Err(Error::Horizon(format!(
                    "switching window [{lo}, {hi}] reaches r = 1/H at τ = {}",
                    -z
                )));
            }
            // The mode vanishes outside the mirrors; r ≤ L' for τ ≤ −Z/(HL').
            let exit = -z / (h * c.length);
            let hi = hi.min(exit);
            if lo >= hi {
                return Ok(QuadratureResult {
                    value: Complex64::new(0.0, 0.0),
                    error: 0.0,
                    intervals: 0,
                    evaluations: 0,
                });
            }
            emission(
                |tau| {
                    let (t, r) = path.static_coordinates(tau, h)?;
                    c.mode_function(t, r.min(c.length))
                },
                &sw,
                path.omega,
                lo,
                hi,
                settings,
            )
        }
    }
}

fn emission<F>(
    mode: F,
    sw: &GaussianSwitch,
    omega: f64,
    lo: f64,
    hi: f64,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut r = integrate(
        |tau| Ok(mode(tau)?.conj() * Complex64::from_polar(sw.value(tau), -omega * tau)),
        lo,
        hi,
        settings,
    )?;
    r.value *= -I;
    Ok(r)
}

/// C_A|1_A 0_B⟩ + C_B|0_A 1_B⟩, kept raw and renormalized to |C_A|² + |C_B|² = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledChannel {
    pub raw_a: Complex64,
    pub raw_b: Complex64,
    pub c_a: Complex64,
    pub c_b: Complex64,
}

impl EntangledChannel {
    pub fn new(raw_a: Complex64, raw_b: Complex64) -> Result<Self> {
        if raw_a.norm() < 1e-30 && raw_b.norm() < 1e-30 {
            return Err(Error::DegenerateChannel);
        }
        let n = raw_a.norm().hypot(raw_b.norm());
        Ok(EntangledChannel {
            raw_a,
            raw_b,
            c_a: raw_a / n,
            c_b: raw_b / n,
        })
    }

    /// |C_A|² after renormalization.
    pub fn weight_a(&self) -> f64 {
        self.c_a.norm_sqr()
    }

    /// Entropy (bits) of the distribution (|C_A|², |C_B|²).
    pub fn entanglement_entropy(&self) -> f64 {
        let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        h(self.c_a.norm_sqr()) + h(self.c_b.norm_sqr())
    }

    /// 2/3 + (2/3)|C_A||C_B|: Haar average of the outcome-weighted fidelity.
    pub fn haar_average_fidelity(&self) -> f64 {
        2.0 / 3.0 * (1.0 + self.c_a.norm() * self.c_b.norm())
    }
}

/// Channel factors (u, v) on Bob's (|0⟩, |1⟩) components after the Pauli
/// correction, so that the corrected state is u·a|0⟩ + v·b|1⟩.
fn corrected_factors(outcome: BellOutcome, ch: &EntangledChannel) -> (Complex64, Complex64) {
    match (outcome.i(), outcome.j()) {
        (_, 0) => (ch.c_b, ch.c_a),
        _ => (ch.c_a, ch.c_b),
    }
}

/// Bob's conditional (x, y) for the cavity channel:
/// (x₀₀,y₀₀) = (C_A b, C_B a), (x₀₁,y₀₁) = (C_A a, C_B b),
/// (x₁₀,y₁₀) = (−C_A b, C_B a), (x₁₁,y₁₁) = (C_A a, −C_B b).
pub fn scheme2_coefficients(
    outcome: BellOutcome,
    ch: &EntangledChannel,
    q: &LogicalQubit,
) -> OutcomeCoefficients {
    let (a, b) = (q.a(), q.b());
    let (x, y) = match (outcome.i(), outcome.j()) {
        (0, 0) => (ch.c_a * b, ch.c_b * a),
        (0, 1) => (ch.c_a * a, ch.c_b * b),
        (1, 0) => (-ch.c_a * b, ch.c_b * a),
        _ => (ch.c_a * a, -ch.c_b * b),
    };
    OutcomeCoefficients { x, y }
}

/// Variant with one channel amplitude factored out of each row:
/// (x₀₀,y₀₀) = C_B(b,a), (x₀₁,y₀₁) = C_A(a,b), (x₁₀,y₁₀) = C_B(−b,a), (x₁₁,y₁₁) = C_A(a,−b).
/// Every conditional state is then pure, so it cannot describe a partially
/// entangled channel; kept for comparison.
pub fn scheme2_coefficients_factored(
    outcome: BellOutcome,
    ch: &EntangledChannel,
    q: &LogicalQubit,
) -> OutcomeCoefficients {
    let (a, b) = (q.a(), q.b());
    let (x, y) = match (outcome.i(), outcome.j()) {
        (0, 0) => (ch.c_b * b, ch.c_b * a),
        (0, 1) => (ch.c_a * a, ch.c_a * b),
        (1, 0) => (-ch.c_b * b, ch.c_b * a),
        _ => (ch.c_a * a, -ch.c_a * b),
    };
    OutcomeCoefficients { x, y }
}

/// Pauli correction for the cavity table: (0,0) X, (0,1) I, (1,0) X then Z, (1,1) Z.
pub fn scheme2_correction(outcome: BellOutcome) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    match (outcome.i(), outcome.j()) {
        (0, 0) => [[o, l], [l, o]],
        (0, 1) => [[l, o], [o, l]],
        (1, 0) => [[o, l], [-l, o]],
        _ => [[l, o], [o, -l]],
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeDetail {
    pub outcome: BellOutcome,
    /// Probability averaged over the input samples.
    pub mean_probability: f64,
    /// Fidelity averaged over the input samples (unweighted).
    pub mean_fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme2Report {
    pub average_fidelity: f64,
    pub per_outcome: Vec<OutcomeDetail>,
}

/// Per-outcome probability and corrected fidelity for one input, using the
/// given coefficient table.
fn scheme2_branches<T>(ch: &EntangledChannel, q: &LogicalQubit, table: T) -> [(f64, f64); 4]
where
    T: Fn(BellOutcome, &EntangledChannel, &LogicalQubit) -> OutcomeCoefficients,
{
    let mut out = [(0.0, 0.0); 4];
    let mut total = 0.0;
    for (slot, outcome) in out.iter_mut().zip(BellOutcome::ALL) {
        let c = table(outcome, ch, q);
        let (x, y) = apply2(&scheme2_correction(outcome), c.x, c.y);
        // local phase gate removing the known channel phase
        let (u, v) = corrected_factors(outcome, ch);
        let phase = if u.norm() > 0.0 && v.norm() > 0.0 {
            Complex64::from_polar(1.0, u.arg() - v.arg())
        } else {
            Complex64::new(1.0, 0.0)
        };
        let y = y * phase;
        let weight = x.norm_sqr() + y.norm_sqr();
        let fidelity = if weight > 0.0 {
            (q.a().conj() * x + q.b().conj() * y).norm_sqr() / weight
        } else {
            0.0
        };
        total += weight;
        *slot = (weight, fidelity);
    }
    for slot in out.iter_mut() {
        slot.0 /= total;
    }
    out
}

fn scheme2_with<T>(ch: &EntangledChannel, samples: &[LogicalQubit], table: T) -> Result<Scheme2Report>
where
    T: Fn(BellOutcome, &EntangledChannel, &LogicalQubit) -> OutcomeCoefficients + Copy,
{
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no input samples".into()));
    }
    let mut average = 0.0;
    let mut sums = [(0.0, 0.0); 4];
    for q in samples {
        let branches = scheme2_branches(ch, q, table);
        average += branches.iter().map(|(p, f)| p * f).sum::<f64>();
        for (s, b) in sums.iter_mut().zip(branches) {
            s.0 += b.0;
            s.1 += b.1;
        }
    }
    let n = samples.len() as f64;
    Ok(Scheme2Report {
        average_fidelity: average / n,
        per_outcome: BellOutcome::ALL
            .iter()
            .zip(sums)
            .map(|(&outcome, (p, f))| OutcomeDetail {
                outcome,
                mean_probability: p / n,
                mean_fidelity: f / n,
            })
            .collect(),
    })
}

/// Outcome-probability-weighted fidelity averaged over `samples`.
pub fn scheme2_fidelity(ch: &EntangledChannel, samples: &[LogicalQubit]) -> Result<Scheme2Report> {
    scheme2_with(ch, samples, scheme2_coefficients)
}

/// Same average with the factored table; every branch is then pure.
pub fn scheme2_fidelity_factored(
    ch: &EntangledChannel,
    samples: &[LogicalQubit],
) -> Result<Scheme2Report> {
    scheme2_with(ch, samples, scheme2_coefficients_factored)
}
