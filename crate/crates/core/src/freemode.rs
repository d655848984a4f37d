//! Dual-rail teleportation with free scalar modes.
//!
//! Bob's logical kets are |0_B⟩ = |1ᵅ⟩|0ᵅ⟩ and |1_B⟩ = |0ᵅ⟩|1ᵅ⟩ over his two
//! rails, and every rail ket is itself a two-mode (region I, region II)
//! expansion. Register layout for Bob is `[rail1 I, rail1 II, rail2 I, rail2 II]`.
//! Alice's qubits are exact dual-rail kets |1,0⟩ and |0,1⟩.
//!
//! The fidelity is computed by brute force (build Bob's state, trace out
//! region II, correct, overlap) and compared with the closed form (1 − q)³.

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{DensityOperator, OccupationState, Region, Register, StateVector};
use crate::qubit::{apply2, BellOutcome, LogicalQubit};
use crate::vacua::{
    alpha_one_particle_state, alpha_vacuum_state, raw_one_particle, raw_vacuum,
    squeezing_from_params, DeSitterParams, SqueezingParams, Truncation,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// (x, y) in Bob's conditional state x|0_B⟩ + y|1_B⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeCoefficients {
    pub x: Complex64,
    pub y: Complex64,
}

/// (x₀₀,y₀₀) = (a,b), (x₀₁,y₀₁) = (b,a), (x₁₀,y₁₀) = (a,−b), (x₁₁,y₁₁) = (−b,a).
pub fn outcome_coefficients(outcome: BellOutcome, q: &LogicalQubit) -> OutcomeCoefficients {
    let (a, b) = (q.a(), q.b());
    let (x, y) = match (outcome.i(), outcome.j()) {
        (0, 0) => (a, b),
        (0, 1) => (b, a),
        (1, 0) => (a, -b),
        _ => (-b, a),
    };
    OutcomeCoefficients { x, y }
}

/// Bob's dual-rail logical kets on four modes.
#[derive(Clone, Debug)]
pub struct BobRails {
    pub zero: StateVector,
    pub one: StateVector,
}

impl BobRails {
    /// Renormalized truncated expansions.
    pub fn new(p: &DeSitterParams, trunc: Truncation) -> Result<Self> {
        let vac = alpha_vacuum_state(p, trunc.n_max, trunc.tol)?.state;
        let one = alpha_one_particle_state(p, trunc.n_max, trunc.tol)?.state;
        BobRails::from_pieces(&vac, &one)
    }

    /// Truncated expansions without renormalization or tail check. Entries of
    /// the region-I state with total excitation ≤ `n_max` are exact.
    pub fn raw(sq: &SqueezingParams, n_max: u32) -> Result<Self> {
        BobRails::from_pieces(&raw_vacuum(sq, n_max)?, &raw_one_particle(sq, n_max)?)
    }

    fn from_pieces(vac: &StateVector, one: &StateVector) -> Result<Self> {
        Ok(BobRails {
            zero: one.tensor(vac)?,
            one: vac.tensor(one)?,
        })
    }

    pub fn combine(&self, x: Complex64, y: Complex64) -> Result<StateVector> {
        self.zero.scale(x).add(&self.one.scale(y))
    }
}

fn alice_register(n_max: u32) -> Register {
    Register::uniform(n_max, 2, Region::I)
}

/// Exact dual-rail ket on two region-I modes: |0⟩ = |1,0⟩, |1⟩ = |0,1⟩.
fn dual_rail(n_max: u32, bit: u8) -> Result<StateVector> {
    let occ: [u32; 2] = if bit == 0 { [1, 0] } else { [0, 1] };
    StateVector::basis(alice_register(n_max), &occ)
}

/// (|0_A⟩|0_B⟩ + |1_A⟩|1_B⟩)/√2 on `[A1, A2, B1 I, B1 II, B2 I, B2 II]`.
pub fn bell_channel_state(p: &DeSitterParams, trunc: Truncation) -> Result<StateVector> {
    let rails = BobRails::new(p, trunc)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    dual_rail(trunc.n_max, 0)?
        .tensor(&rails.zero)?
        .add(&dual_rail(trunc.n_max, 1)?.tensor(&rails.one)?)
        .map(|v| v.scale(s))
}

/// Conditional state on Bob's four modes for one measurement outcome, normalized.
pub fn bob_conditional_state(
    outcome: BellOutcome,
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<StateVector> {
    let c = outcome_coefficients(outcome, q);
    BobRails::new(p, trunc)?.combine(c.x, c.y)?.normalize()
}

/// One branch of Alice's measurement obtained by explicit projection.
#[derive(Clone, Debug)]
pub struct MeasuredBranch {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Bob's normalized conditional state.
    pub bob: StateVector,
}

/// Teleports `q` by building |ψ_C⟩|β_AB⟩ on eight modes and projecting
/// `(C, A)` onto β_ij = (|0⟩|j⟩ + (−1)^i |1⟩|1−j⟩)/√2.
///
/// Independent of [`outcome_coefficients`]; used to confirm the table and the
/// outcome probabilities.
pub fn bell_measurement(
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<Vec<MeasuredBranch>> {
    let n = trunc.n_max;
    let psi_c = dual_rail(n, 0)?.scale(q.a()).add(&dual_rail(n, 1)?.scale(q.b()))?;
    let total = psi_c.tensor(&bell_channel_state(p, trunc)?)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    BellOutcome::ALL
        .iter()
        .map(|&outcome| {
            let sign = if outcome.i() == 0 { ONE } else { -ONE };
            let first = dual_rail(n, 0)?.tensor(&dual_rail(n, outcome.j())?)?;
            let second = dual_rail(n, 1)?.tensor(&dual_rail(n, 1 - outcome.j())?)?;
            let bell = first.add(&second.scale(sign))?.scale(s);
            let bob = total.project(&[0, 1, 2, 3], &bell)?;
            Ok(MeasuredBranch {
                outcome,
                probability: bob.norm_sqr(),
                bob: bob.normalize()?,
            })
        })
        .collect()
}

/// Bob's region-I state: trace of |φ_ij⟩⟨φ_ij| over both region-II modes.
pub fn bob_region1_density(
    outcome: BellOutcome,
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<DensityOperator> {
    bob_conditional_state(outcome, q, p, trunc)?.reduced(Region::I)
}

/// (1 − tanh² r Δ²)³.
pub fn closed_form_fidelity(p: &DeSitterParams) -> f64 {
    squeezing_from_params(p).one_minus_q().powi(3)
}

/// Region-I rail basis {|1,0⟩, |0,1⟩}.
pub fn region1_rail_basis() -> [OccupationState; 2] {
    [OccupationState::new(vec![1, 0]), OccupationState::new(vec![0, 1])]
}

fn correct(outcome: BellOutcome, rho: &DensityOperator) -> Result<DensityOperator> {
    let u = outcome.correction();
    let rows: Vec<Vec<Complex64>> = u.iter().map(|r| r.to_vec()).collect();
    rho.conjugate_restricted(&region1_rail_basis(), &rows)
}

fn target_state(q: &LogicalQubit, n_max: u32) -> Result<StateVector> {
    let [zero, one] = region1_rail_basis();
    StateVector::from_amplitudes(
        Register::uniform(n_max, 2, Region::I),
        [(zero, q.a()), (one, q.b())],
    )
}

/// ⟨ψ_I|U ρᴵ U†|ψ_I⟩ with ψ_I = a|1,0⟩ + b|0,1⟩ and U the outcome's correction.
pub fn fidelity_brute_force(
    outcome: BellOutcome,
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<f64> {
    let rho = bob_region1_density(outcome, q, p, trunc)?;
    fidelity_of(outcome, q, &rho, trunc.n_max)
}

fn fidelity_of(outcome: BellOutcome, q: &LogicalQubit, rho: &DensityOperator, n_max: u32) -> Result<f64> {
    let corrected = correct(outcome, rho)?;
    crate::fock::fidelity_pure_mixed(&target_state(q, n_max)?, &corrected)
}

/// p₀ = 0, pₙ = qⁿ⁻¹(1 − q)³ for n = 1..=n_max.
pub fn block_weights(sq: &SqueezingParams, n_max: u32) -> Vec<f64> {
    let c = sq.one_minus_q().powi(3);
    std::iter::once(0.0)
        .chain((1..=n_max).map(|n| c * sq.q.powi(n as i32 - 1)))
        .collect()
}

/// Trace of each total-excitation sector of a region-I operator, index = excitation.
pub fn block_traces(rho: &DensityOperator, n_max: u32) -> Vec<f64> {
    let mut out = vec![0.0; n_max as usize + 1];
    for ((a, b), v) in rho.iter() {
        if a == b {
            let n = a.total() as usize;
            if n < out.len() {
                out[n] += v.re;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TeleportResult {
    pub rho_i: DensityOperator,
    pub fidelity_numeric: f64,
    pub fidelity_closed_form: f64,
    /// pₙ for n = 0..=n_max.
    pub block_weights: Vec<f64>,
    /// Trace of the excitation-n sector of `rho_i`; equals pₙ·n(n+1)/2.
    pub block_traces: Vec<f64>,
}

pub fn teleport(
    outcome: BellOutcome,
    q: &LogicalQubit,
    p: &DeSitterParams,
    trunc: Truncation,
) -> Result<TeleportResult> {
    let rho_i = bob_region1_density(outcome, q, p, trunc)?;
    let fidelity_numeric = fidelity_of(outcome, q, &rho_i, trunc.n_max)?;
    let sq = squeezing_from_params(p);
    Ok(TeleportResult {
        block_traces: block_traces(&rho_i, trunc.n_max),
        block_weights: block_weights(&sq, trunc.n_max),
        fidelity_numeric,
        fidelity_closed_form: closed_form_fidelity(p),
        rho_i,
    })
}

/// Closed-form reference for Bob's region-I operator, on sectors
/// with total excitation ≤ `n_max`:
///
/// (1−q)³ Σₙ Σₘ [ qⁿ⁻¹((n−m)|x|² + m|y|²) |m,n−m⟩⟨m,n−m|
///               + (x y* qⁿ √((m+1)(n−m+1)) |m,n−m+1⟩⟨m+1,n−m| + h.c.) ]
pub fn reference_region1_density(
    x: Complex64,
    y: Complex64,
    sq: &SqueezingParams,
    n_max: u32,
) -> Result<DensityOperator> {
    let reg = Register::uniform(n_max, 2, Region::I);
    let mut rho = DensityOperator::zero(reg);
    let pre = sq.one_minus_q().powi(3);
    for n in 0..=n_max {
        for m in 0..=n {
            if n >= 1 {
                let w = pre
                    * sq.q.powi(n as i32 - 1)
                    * ((n - m) as f64 * x.norm_sqr() + m as f64 * y.norm_sqr());
                let o = OccupationState::new(vec![m, n - m]);
                rho.add_entry(o.clone(), o, Complex64::new(w, 0.0))?;
            }
            if n < n_max {
                let c = x
                    * y.conj()
                    * pre
                    * sq.q.powi(n as i32)
                    * (((m + 1) * (n - m + 1)) as f64).sqrt();
                let left = OccupationState::new(vec![m, n - m + 1]);
                let right = OccupationState::new(vec![m + 1, n - m]);
                rho.add_entry(left.clone(), right.clone(), c)?;
                rho.add_entry(right, left, c.conj())?;
            }
        }
    }
    Ok(rho)
}

/// Brute-force vs reference reduced state.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceComparison {
    /// Max entry deviation from the reference expression.
    pub literal: f64,
    /// Max entry deviation after exchanging x and y in the reference expression.
    pub exchanged: f64,
}

/// Compares the first-principles region-I state (unnormalized truncation,
/// sectors with total excitation ≤ `n_max`) with the reference expression.
pub fn compare_with_reference(
    outcome: BellOutcome,
    q: &LogicalQubit,
    p: &DeSitterParams,
    n_max: u32,
) -> Result<ReferenceComparison> {
    let sq = squeezing_from_params(p);
    let c = outcome_coefficients(outcome, q);
    let brute = BobRails::raw(&sq, n_max)?.combine(c.x, c.y)?.reduced(Region::I)?;
    let brute = restrict_sectors(&brute, n_max)?;
    let literal = reference_region1_density(c.x, c.y, &sq, n_max)?;
    let exchanged = reference_region1_density(c.y, c.x, &sq, n_max)?;
    Ok(ReferenceComparison {
        literal: brute.max_deviation(&literal)?,
        exchanged: brute.max_deviation(&exchanged)?,
    })
}

fn restrict_sectors(rho: &DensityOperator, n_max: u32) -> Result<DensityOperator> {
    DensityOperator::from_entries(
        rho.register().clone(),
        rho.iter()
            .filter(|((a, b), _)| a.total() <= n_max as u64 && b.total() <= n_max as u64)
            .map(|(k, v)| (k.clone(), *v)),
    )
}

/// Bob's unnormalized state after his Pauli correction, in logical coordinates.
pub fn corrected_logical(outcome: BellOutcome, q: &LogicalQubit) -> (Complex64, Complex64) {
    let c = outcome_coefficients(outcome, q);
    apply2(&outcome.correction(), c.x, c.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vacua::Alpha;

    fn params(k_over_h: f64, alpha: Alpha) -> DeSitterParams {
        DeSitterParams::from_ratio(k_over_h, alpha).unwrap()
    }

    fn trunc(p: &DeSitterParams) -> Truncation {
        Truncation::for_params(p, 1e-12).unwrap()
    }

    fn sample_qubit() -> LogicalQubit {
        LogicalQubit::from_bloch(1.1, 0.4)
    }

    #[test]
    fn flat_channel_has_no_region_two_excitation() {
        let p = DeSitterParams::new(1e-3, 1.0, Alpha::BunchDavies).unwrap();
        let bell = bell_channel_state(&p, trunc(&p)).unwrap();
        assert_eq!(bell.len(), 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |10⟩_A |1,0,0,0⟩_B + |01⟩_A |0,0,1,0⟩_B
        assert!((bell.amplitude(&vec![1, 0, 1, 0, 0, 0].into()).re - s).abs() < 1e-15);
        assert!((bell.amplitude(&vec![0, 1, 0, 0, 1, 0].into()).re - s).abs() < 1e-15);
    }

    #[test]
    fn alice_marginal_is_maximally_mixed() {
        let p = params(0.5, Alpha::Finite(-4.0));
        let bell = bell_channel_state(&p, trunc(&p)).unwrap();
        assert!((bell.norm() - 1.0).abs() < 1e-12);
        let alice = bell.reduced_modes(&[0, 1]).unwrap();
        let [z, o] = region1_rail_basis();
        assert!((alice.entry(&z, &z).re - 0.5).abs() < 1e-12);
        assert!((alice.entry(&o, &o).re - 0.5).abs() < 1e-12);
        assert!(alice.entry(&z, &o).norm() < 1e-12);
    }

    #[test]
    fn conditional_state_rows() {
        let p = params(1.0, Alpha::Finite(-3.0));
        let t = trunc(&p);
        let rails = BobRails::new(&p, t).unwrap();
        let q = LogicalQubit::zero();
        let s00 = bob_conditional_state(BellOutcome::new(0, 0).unwrap(), &q, &p, t).unwrap();
        assert!(s00.distance(&rails.zero).unwrap() < 1e-14);
        let s01 = bob_conditional_state(BellOutcome::new(0, 1).unwrap(), &LogicalQubit::one(), &p, t)
            .unwrap();
        assert!(s01.distance(&rails.zero).unwrap() < 1e-14);
        let q = sample_qubit();
        let s10 = bob_conditional_state(BellOutcome::new(1, 0).unwrap(), &q, &p, t).unwrap();
        let expected = rails.combine(q.a(), -q.b()).unwrap();
        assert!(s10.distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn explicit_projection_matches_table() {
        let p = params(0.8, Alpha::Finite(-2.0));
        let t = trunc(&p);
        let q = sample_qubit();
        for branch in bell_measurement(&q, &p, t).unwrap() {
            assert!((branch.probability - 0.25).abs() < 1e-12, "{}", branch.outcome);
            let table = bob_conditional_state(branch.outcome, &q, &p, t).unwrap();
            // equal up to a global phase
            let overlap = table.inner(&branch.bob).unwrap().norm();
            assert!((overlap - 1.0).abs() < 1e-12, "{}", branch.outcome);
        }
    }

    #[test]
    fn region1_trace_and_hermiticity() {
        let p = params(0.5, Alpha::Finite(-1.0));
        let rho = bob_region1_density(BellOutcome::new(1, 1).unwrap(), &sample_qubit(), &p, trunc(&p))
            .unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!(rho.trace().im.abs() < 1e-14);
        assert!(rho.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn generic_partial_trace_agrees_with_fast_path() {
        let p = params(0.6, Alpha::Finite(-2.0));
        let t = Truncation::new(6, 1e-3);
        let o = BellOutcome::new(0, 1).unwrap();
        let phi = bob_conditional_state(o, &sample_qubit(), &p, t).unwrap();
        let slow = phi.density().partial_trace(Region::I).unwrap();
        let fast = phi.reduced(Region::I).unwrap();
        assert!(slow.max_deviation(&fast).unwrap() < 1e-15);
        assert!(slow.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn flat_space_is_pure_and_perfect() {
        let p = DeSitterParams::new(1e-3, 1.0, Alpha::BunchDavies).unwrap();
        let q = sample_qubit();
        for o in BellOutcome::ALL {
            let r = teleport(o, &q, &p, trunc(&p)).unwrap();
            assert!((r.fidelity_numeric - 1.0).abs() < 1e-14);
            assert_eq!(r.fidelity_closed_form, 1.0);
            assert!(r.rho_i.len() <= 4);
        }
    }

    #[test]
    fn closed_form_values() {
        let pi = std::f64::consts::PI;
        let f1 = closed_form_fidelity(&params(1.0, Alpha::BunchDavies));
        assert!((f1 - (1.0 - (-2.0 * pi).exp()).powi(3)).abs() < 1e-15);
        assert!((f1 - 0.99441).abs() < 1e-5);
        let fh = closed_form_fidelity(&params(0.5, Alpha::BunchDavies));
        assert!((fh - 0.8759).abs() < 1e-4);
    }

    #[test]
    fn brute_force_matches_closed_form() {
        let q = sample_qubit();
        for k in [0.3, 1.0, 3.0] {
            for a in [Alpha::BunchDavies, Alpha::Finite(-5.0), Alpha::Finite(-1.0)] {
                let p = params(k, a);
                for o in BellOutcome::ALL {
                    let f = fidelity_brute_force(o, &q, &p, trunc(&p)).unwrap();
                    assert!((f - closed_form_fidelity(&p)).abs() < 1e-8, "k/H={k} α={a} {o}");
                }
            }
        }
    }

    #[test]
    fn block_structure() {
        let p = params(0.4, Alpha::Finite(-2.0));
        let t = trunc(&p);
        let r = teleport(BellOutcome::new(0, 0).unwrap(), &sample_qubit(), &p, t).unwrap();
        assert_eq!(r.block_weights[0], 0.0);
        assert_eq!(r.block_traces[0], 0.0);
        let mut recombined = 0.0;
        for n in 1..=t.n_max as usize {
            let sector = (n * (n + 1) / 2) as f64;
            assert!((r.block_traces[n] - r.block_weights[n] * sector).abs() < 1e-11, "n = {n}");
            recombined += r.block_weights[n] * sector;
        }
        assert!((recombined - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reference_expression_matches_after_exchange() {
        let p = params(0.3, Alpha::Finite(-1.0));
        let q = LogicalQubit::from_bloch(0.7, 1.3);
        let cmp = compare_with_reference(BellOutcome::new(0, 0).unwrap(), &q, &p, 20).unwrap();
        assert!(cmp.exchanged < 1e-12, "{cmp:?}");
        assert!(cmp.literal > 1e-3, "{cmp:?}");
    }
}
