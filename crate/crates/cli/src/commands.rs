//! Grid computations behind `fig2`, `sweep` and `cavity`.
//!
//! Grid points run in parallel; rows come back in grid order so the CSV is
//! byte-identical between runs.

use std::io::Write;

use desitter_core::cavity::{
    amplitude_ca_closed_form, amplitude_numeric, scheme2_fidelity, AtomPath, CavityMode,
    ConformalCavity, EntangledChannel, GaussianSwitch,
};
use desitter_core::freemode::{closed_form_fidelity, teleport};
use desitter_core::quadrature::QuadratureSettings;
use desitter_core::vacua::{squeezing_from_params, truncation_tail_bound};
use desitter_core::{bloch_samples, Alpha, BellOutcome, Complex64, DeSitterParams, LogicalQubit, Truncation};
use rayon::prelude::*;

use crate::config::{CavityConfig, SweepConfig};
use crate::error::CliError;
use crate::format::{num, write_csv};

/// Input state used for the brute-force columns; generic, with no special
/// symmetry between the rails.
pub fn probe_state() -> LogicalQubit {
    LogicalQubit::from_bloch(1.1, 0.7)
}

fn alpha_field(a: Alpha) -> String {
    match a {
        Alpha::BunchDavies => "-inf".into(),
        Alpha::Finite(v) => num(v),
    }
}

/// The cutoff for one grid point: the override, or the tail bound at `tol`.
pub fn truncation_for(p: &DeSitterParams, n_max: Option<u32>, tol: f64) -> Result<Truncation, CliError> {
    Ok(match n_max {
        Some(n) => Truncation::new(n, tol),
        None => Truncation::new(truncation_tail_bound(p, tol)?, tol),
    })
}

/// Extremes of the brute-force fidelity over the four outcomes for `q`.
pub fn brute_force_range(
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<(f64, f64), CliError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for o in BellOutcome::ALL {
        let f = teleport(o, q, p, trunc)?.fidelity_numeric;
        lo = lo.min(f);
        hi = hi.max(f);
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig2Row {
    pub h_over_k: f64,
    pub alpha: Alpha,
    pub fidelity_closed_form: f64,
    /// Smallest brute-force fidelity over the four outcomes.
    pub fidelity_brute_force: f64,
}

fn grid(cfg: &SweepConfig) -> Vec<(Alpha, f64)> {
    cfg.alphas
        .iter()
        .flat_map(|&a| cfg.hubble.iter().map(move |&h| (a, h)))
        .collect()
}

/// One row per (α, H), sorted by α then H/k.
pub fn fig2_rows(cfg: &SweepConfig) -> Result<Vec<Fig2Row>, CliError> {
    cfg.validate()?;
    let q = probe_state();
    grid(cfg)
        .into_par_iter()
        .map(|(alpha, h)| {
            let p = DeSitterParams::new(h, cfg.k, alpha)?;
            let trunc = truncation_for(&p, cfg.n_max, cfg.tolerance)?;
            let (lo, _) = brute_force_range(&q, &p, trunc)?;
            Ok(Fig2Row {
                h_over_k: h / cfg.k,
                alpha,
                fidelity_closed_form: closed_form_fidelity(&p),
                fidelity_brute_force: lo,
            })
        })
        .collect()
}

pub const FIG2_HEADER: [&str; 4] = ["H_over_k", "alpha", "fidelity_closed_form", "fidelity_brute_force"];

pub fn write_fig2<W: Write>(w: W, rows: &[Fig2Row]) -> std::io::Result<()> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.h_over_k),
                alpha_field(r.alpha),
                num(r.fidelity_closed_form),
                num(r.fidelity_brute_force),
            ]
        })
        .collect();
    write_csv(w, &FIG2_HEADER, &rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub hubble: f64,
    pub k: f64,
    pub alpha: Alpha,
    pub n_max: u32,
    pub q: f64,
    pub fidelity_closed_form: f64,
    pub fidelity_brute_force_min: f64,
    pub fidelity_brute_force_max: f64,
}

/// Fuller table than `fig2`: cutoff, squeezing and the outcome spread.
pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let q = probe_state();
    grid(cfg)
        .into_par_iter()
        .map(|(alpha, h)| {
            let p = DeSitterParams::new(h, cfg.k, alpha)?;
            let trunc = truncation_for(&p, cfg.n_max, cfg.tolerance)?;
            let (lo, hi) = brute_force_range(&q, &p, trunc)?;
            Ok(SweepRow {
                hubble: h,
                k: cfg.k,
                alpha,
                n_max: trunc.n_max,
                q: squeezing_from_params(&p).q,
                fidelity_closed_form: closed_form_fidelity(&p),
                fidelity_brute_force_min: lo,
                fidelity_brute_force_max: hi,
            })
        })
        .collect()
}

pub const SWEEP_HEADER: [&str; 8] = [
    "H",
    "k",
    "alpha",
    "n_max",
    "q",
    "fidelity_closed_form",
    "fidelity_brute_force_min",
    "fidelity_brute_force_max",
];

pub fn write_sweep<W: Write>(w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.hubble),
                num(r.k),
                alpha_field(r.alpha),
                r.n_max.to_string(),
                num(r.q),
                num(r.fidelity_closed_form),
                num(r.fidelity_brute_force_min),
                num(r.fidelity_brute_force_max),
            ]
        })
        .collect();
    write_csv(w, &SWEEP_HEADER, &rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityRow {
    pub hubble: f64,
    pub c_a: Complex64,
    pub c_a_numeric: Complex64,
    pub c_b: Complex64,
    pub channel: EntangledChannel,
    pub scheme2_fidelity: f64,
}

/// Cavity A and the atom path described by `cfg`.
pub fn cavity_setup(cfg: &CavityConfig) -> Result<(ConformalCavity, AtomPath), CliError> {
    let cav = ConformalCavity::new(cfg.z1, cfg.length, cfg.mode, cfg.alpha)?.with_norm(cfg.norm_a);
    let path = AtomPath::through(&cav, cfg.omega, cfg.eps, cfg.width, cfg.eta_a)?.with_window(cfg.window);
    Ok((cav, path))
}

/// One row per Hubble rate: C_A (closed form and quadrature), C_B and the
/// resulting channel.
pub fn cavity_rows(cfg: &CavityConfig) -> Result<Vec<CavityRow>, CliError> {
    let (cav, path) = cavity_setup(cfg)?;
    let settings = QuadratureSettings::default();
    let c_a = amplitude_ca_closed_form(&cav, &path);
    let c_a_numeric = amplitude_numeric(CavityMode::Conformal(&cav), &path, &settings)?.value;
    let samples = bloch_samples(cfg.samples);
    cfg.hubble
        .par_iter()
        .map(|&h| {
            let sc = cav.to_static(h)?.with_norm(cfg.norm_b);
            let default = path.switch_b_for(&sc);
            let sw = GaussianSwitch::new(
                cfg.eps_b.unwrap_or(default.strength),
                cfg.eta_b.unwrap_or(default.center),
                cfg.width_b.unwrap_or(default.width),
            )?;
            let c_b = amplitude_numeric(CavityMode::Static(&sc), &path.with_switch_b(sw), &settings)?.value;
            let channel = EntangledChannel::new(c_a, c_b)?;
            Ok(CavityRow {
                hubble: h,
                c_a,
                c_a_numeric,
                c_b,
                channel,
                scheme2_fidelity: scheme2_fidelity(&channel, &samples)?.average_fidelity,
            })
        })
        .collect()
}

pub const CAVITY_HEADER: [&str; 9] = [
    "H",
    "C_A_re",
    "C_A_im",
    "C_A_numeric_re",
    "C_A_numeric_im",
    "C_B_re",
    "C_B_im",
    "channel_weight_CA",
    "scheme2_fidelity",
];

pub fn write_cavity<W: Write>(w: W, rows: &[CavityRow]) -> std::io::Result<()> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.hubble),
                num(r.c_a.re),
                num(r.c_a.im),
                num(r.c_a_numeric.re),
                num(r.c_a_numeric.im),
                num(r.c_b.re),
                num(r.c_b.im),
                num(r.channel.weight_a()),
                num(r.scheme2_fidelity),
            ]
        })
        .collect();
    write_csv(w, &CAVITY_HEADER, &rows)
}
