//! Truncated multi-mode bosonic Fock space.
//!
//! States and operators are stored sparsely, keyed by occupation tuples. A
//! [`Register`] fixes the number of modes, the per-mode cutoff `n_max` and
//! which side of the horizon every mode lives on. Two-mode squeezed states
//! are Schmidt-diagonal, so the number of stored amplitudes grows linearly in
//! the cutoff rather than with the full `(n_max + 1)^modes` basis.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes whose magnitude falls below this are not stored.
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-16;

/// Side of the cosmological horizon a mode belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// Accessible to the static observer.
    I,
    /// Beyond the horizon.
    II,
}

/// Photon number in every mode of a register.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState(Vec<u32>);

impl OccupationState {
    pub fn new(occupations: Vec<u32>) -> Self {
        OccupationState(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        OccupationState(vec![0; modes])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of quanta.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&n| n as u64).sum()
    }

    fn concat(&self, other: &OccupationState) -> OccupationState {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        OccupationState(v)
    }

    fn select(&self, modes: &[usize]) -> OccupationState {
        OccupationState(modes.iter().map(|&m| self.0[m]).collect())
    }
}

impl From<Vec<u32>> for OccupationState {
    fn from(v: Vec<u32>) -> Self {
        OccupationState(v)
    }
}

impl From<&[u32]> for OccupationState {
    fn from(v: &[u32]) -> Self {
        OccupationState(v.to_vec())
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Mode layout shared by every state and operator on the same system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    n_max: u32,
    regions: Vec<Region>,
}

impl Register {
    pub fn new(n_max: u32, regions: Vec<Region>) -> Self {
        Register { n_max, regions }
    }

    /// `modes` modes, all in `region`.
    pub fn uniform(n_max: u32, modes: usize, region: Region) -> Self {
        Register::new(n_max, vec![region; modes])
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn mode_count(&self) -> usize {
        self.regions.len()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Indices of the modes labelled `region`, in register order.
    pub fn modes_in(&self, region: Region) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&m| self.regions[m] == region)
            .collect()
    }

    fn select(&self, modes: &[usize]) -> Register {
        Register::new(self.n_max, modes.iter().map(|&m| self.regions[m]).collect())
    }

    fn concat(&self, other: &Register) -> Result<Register> {
        if self.n_max != other.n_max {
            return Err(Error::Configuration(format!(
                "cutoff mismatch: n_max {} vs {}",
                self.n_max, other.n_max
            )));
        }
        let mut regions = self.regions.clone();
        regions.extend_from_slice(&other.regions);
        Ok(Register::new(self.n_max, regions))
    }

    fn check(&self, occ: &OccupationState) -> Result<()> {
        if occ.len() != self.mode_count() {
            return Err(Error::InvalidArgument(format!(
                "occupation {occ} has {} modes, register has {}",
                occ.len(),
                self.mode_count()
            )));
        }
        if let Some(&n) = occ.as_slice().iter().find(|&&n| n > self.n_max) {
            return Err(Error::InvalidArgument(format!(
                "occupation {n} in {occ} exceeds cutoff {}",
                self.n_max
            )));
        }
        Ok(())
    }

    fn split_for(&self, keep: Region) -> Result<(Vec<usize>, Vec<usize>)> {
        let kept = self.modes_in(keep);
        let traced: Vec<usize> = (0..self.mode_count())
            .filter(|&m| self.regions[m] != keep)
            .collect();
        if kept.is_empty() || traced.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "partial trace keeping region {keep:?} needs modes on both sides, register has {:?}",
                self.regions
            )));
        }
        Ok((kept, traced))
    }

    fn check_same(&self, other: &Register) -> Result<()> {
        if self != other {
            return Err(Error::InvalidArgument(format!(
                "register mismatch: {} modes/n_max {} vs {} modes/n_max {}",
                self.mode_count(),
                self.n_max,
                other.mode_count(),
                other.n_max
            )));
        }
        Ok(())
    }
}

/// Sparse pure state on a [`Register`].
#[derive(Clone, Debug)]
pub struct StateVector {
    register: Register,
    amplitudes: BTreeMap<OccupationState, Complex64>,
    prune: f64,
}

impl StateVector {
    /// The zero vector.
    pub fn zero(register: Register) -> Self {
        StateVector {
            register,
            amplitudes: BTreeMap::new(),
            prune: DEFAULT_PRUNE_THRESHOLD,
        }
    }

    pub fn basis(register: Register, occupations: &[u32]) -> Result<Self> {
        let mut s = StateVector::zero(register);
        s.add_amplitude(OccupationState::from(occupations), Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn from_amplitudes<I>(register: Register, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationState, Complex64)>,
    {
        let mut s = StateVector::zero(register);
        for (occ, amp) in amplitudes {
            s.add_amplitude(occ, amp)?;
        }
        Ok(s)
    }

    pub fn with_prune_threshold(mut self, threshold: f64) -> Self {
        self.prune = threshold;
        self.amplitudes.retain(|_, a| a.norm() >= threshold);
        self
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune
    }

    /// Adds `amp` to the amplitude of `occ`, dropping the entry if the result
    /// is below the prune threshold.
    pub fn add_amplitude(&mut self, occ: OccupationState, amp: Complex64) -> Result<()> {
        self.register.check(&occ)?;
        match self.amplitudes.entry(occ) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += amp;
                if e.get().norm() < self.prune {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if amp.norm() >= self.prune {
                    e.insert(amp);
                }
            }
        }
        Ok(())
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn mode_count(&self) -> usize {
        self.register.mode_count()
    }

    pub fn n_max(&self) -> u32 {
        self.register.n_max()
    }

    pub fn amplitude(&self, occ: &OccupationState) -> Complex64 {
        self.amplitudes
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationState, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Number of stored amplitudes.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let prune = self.prune;
        StateVector {
            register: self.register.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, a)| (k.clone(), a * c))
                .filter(|(_, a)| a.norm() >= prune)
                .collect(),
            prune,
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        self.register.check_same(&other.register)?;
        let mut out = self.clone();
        for (k, a) in &other.amplitudes {
            *out.amplitudes.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        let prune = out.prune;
        out.amplitudes.retain(|_, a| a.norm() >= prune);
        Ok(out)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.register.check_same(&other.register)?;
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// Euclidean distance ‖self − other‖.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.register.check_same(&other.register)?;
        Ok(self.add(&other.scale(Complex64::new(-1.0, 0.0)))?.norm())
    }

    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let register = self.register.concat(&other.register)?;
        let prune = self.prune.min(other.prune);
        let mut amplitudes = BTreeMap::new();
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &other.amplitudes {
                let v = a * b;
                if v.norm() >= prune {
                    amplitudes.insert(ka.concat(kb), v);
                }
            }
        }
        Ok(StateVector {
            register,
            amplitudes,
            prune,
        })
    }

    /// Contracts `modes` with ⟨onto|, leaving an unnormalized state on the
    /// remaining modes. Its squared norm is the probability of the projection.
    pub fn project(&self, modes: &[usize], onto: &StateVector) -> Result<Self> {
        if modes.len() != onto.mode_count() {
            return Err(Error::InvalidArgument(format!(
                "projecting {} modes onto a {}-mode state",
                modes.len(),
                onto.mode_count()
            )));
        }
        if modes.iter().any(|&m| m >= self.mode_count()) {
            return Err(Error::InvalidArgument("projection mode out of range".into()));
        }
        let rest: Vec<usize> = (0..self.mode_count()).filter(|m| !modes.contains(m)).collect();
        let mut out = StateVector::zero(self.register.select(&rest)).with_prune_threshold(self.prune);
        let mut acc: BTreeMap<OccupationState, Complex64> = BTreeMap::new();
        for (k, a) in &self.amplitudes {
            let b = onto.amplitude(&k.select(modes));
            if b.norm_sqr() == 0.0 {
                continue;
            }
            *acc.entry(k.select(&rest)).or_insert(Complex64::new(0.0, 0.0)) += b.conj() * a;
        }
        acc.retain(|_, a| a.norm() >= self.prune);
        out.amplitudes = acc;
        Ok(out)
    }

    /// |self⟩⟨self|.
    pub fn density(&self) -> DensityOperator {
        let mut entries = BTreeMap::new();
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &self.amplitudes {
                entries.insert((ka.clone(), kb.clone()), a * b.conj());
            }
        }
        DensityOperator {
            register: self.register.clone(),
            entries,
        }
    }

    /// Reduced state of |self⟩⟨self| on the modes labelled `keep`.
    ///
    /// Equivalent to `partial_trace(&self.density(), keep)` without building
    /// the full outer product.
    pub fn reduced(&self, keep: Region) -> Result<DensityOperator> {
        let (kept, _) = self.register.split_for(keep)?;
        self.reduced_modes(&kept)
    }

    /// Reduced state on the listed modes (in the given order). Amplitudes are
    /// grouped by their traced-out occupation and each group contributes its
    /// own outer product.
    pub fn reduced_modes(&self, kept: &[usize]) -> Result<DensityOperator> {
        if kept.is_empty() || kept.iter().any(|&m| m >= self.mode_count()) {
            return Err(Error::InvalidArgument(format!(
                "cannot keep modes {kept:?} of a {}-mode state",
                self.mode_count()
            )));
        }
        let traced: Vec<usize> = (0..self.mode_count()).filter(|m| !kept.contains(m)).collect();
        let mut groups: BTreeMap<OccupationState, Vec<(OccupationState, Complex64)>> =
            BTreeMap::new();
        for (k, a) in &self.amplitudes {
            groups
                .entry(k.select(&traced))
                .or_default()
                .push((k.select(kept), *a));
        }
        let mut entries: BTreeMap<(OccupationState, OccupationState), Complex64> = BTreeMap::new();
        for members in groups.values() {
            for (ka, a) in members {
                for (kb, b) in members {
                    *entries
                        .entry((ka.clone(), kb.clone()))
                        .or_insert(Complex64::new(0.0, 0.0)) += a * b.conj();
                }
            }
        }
        Ok(DensityOperator {
            register: self.register.select(kept),
            entries,
        })
    }
}

/// Sparse operator on a [`Register`]; entry `(a, b)` is ⟨a|ρ|b⟩.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    register: Register,
    entries: BTreeMap<(OccupationState, OccupationState), Complex64>,
}

impl DensityOperator {
    pub fn zero(register: Register) -> Self {
        DensityOperator {
            register,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(register: Register, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((OccupationState, OccupationState), Complex64)>,
    {
        let mut rho = DensityOperator::zero(register);
        for ((a, b), v) in entries {
            rho.add_entry(a, b, v)?;
        }
        Ok(rho)
    }

    /// Diagonal operator Σ wᵢ|oᵢ⟩⟨oᵢ|.
    pub fn diagonal<I>(register: Register, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationState, f64)>,
    {
        DensityOperator::from_entries(
            register,
            weights
                .into_iter()
                .map(|(o, w)| ((o.clone(), o), Complex64::new(w, 0.0))),
        )
    }

    pub fn add_entry(&mut self, a: OccupationState, b: OccupationState, v: Complex64) -> Result<()> {
        self.register.check(&a)?;
        self.register.check(&b)?;
        *self.entries.entry((a, b)).or_insert(Complex64::new(0.0, 0.0)) += v;
        Ok(())
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn mode_count(&self) -> usize {
        self.register.mode_count()
    }

    pub fn entry(&self, a: &OccupationState, b: &OccupationState) -> Complex64 {
        // BTreeMap keyed by tuples needs an owned key for lookup.
        self.entries
            .get(&(a.clone(), b.clone()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(OccupationState, OccupationState), &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|(_, v)| *v)
            .sum()
    }

    /// max |ρ(a,b) − conj ρ(b,a)|.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|((a, b), v)| (v - self.entry(b, a).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DensityOperator {
            register: self.register.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &DensityOperator) -> Result<Self> {
        self.register.check_same(&other.register)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            *out.entries.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(out)
    }

    /// Largest entrywise difference |self − other|.
    pub fn max_deviation(&self, other: &DensityOperator) -> Result<f64> {
        self.register.check_same(&other.register)?;
        let a = self
            .entries
            .iter()
            .map(|((x, y), v)| (v - other.entry(x, y)).norm());
        let b = other
            .entries
            .iter()
            .map(|((x, y), v)| (v - self.entry(x, y)).norm());
        Ok(a.chain(b).fold(0.0, f64::max))
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let register = self.register.concat(&other.register)?;
        let mut entries = BTreeMap::new();
        for ((a1, b1), v1) in &self.entries {
            for ((a2, b2), v2) in &other.entries {
                entries.insert((a1.concat(a2), b1.concat(b2)), v1 * v2);
            }
        }
        Ok(DensityOperator { register, entries })
    }

    pub fn partial_trace(&self, keep: Region) -> Result<Self> {
        let (kept, traced) = self.register.split_for(keep)?;
        let mut entries: BTreeMap<(OccupationState, OccupationState), Complex64> = BTreeMap::new();
        for ((a, b), v) in &self.entries {
            if a.select(&traced) != b.select(&traced) {
                continue;
            }
            *entries
                .entry((a.select(&kept), b.select(&kept)))
                .or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(DensityOperator {
            register: self.register.select(&kept),
            entries,
        })
    }

    /// ⟨ψ|ρ|ψ⟩ for a state on the same register.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        self.register.check_same(psi.register())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, ca) in psi.iter() {
            for (b, cb) in psi.iter() {
                acc += ca.conj() * self.entry(a, b) * cb;
            }
        }
        Ok(acc)
    }

    /// Conjugates by a unitary acting on span{`basis`} and as the identity on
    /// its orthogonal complement: ρ → UρU†. `unitary[i][j]` is ⟨basisᵢ|U|basisⱼ⟩.
    pub fn conjugate_restricted(
        &self,
        basis: &[OccupationState],
        unitary: &[Vec<Complex64>],
    ) -> Result<Self> {
        let d = basis.len();
        if unitary.len() != d || unitary.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidArgument(format!(
                "unitary must be {d}x{d} to match the restricted basis"
            )));
        }
        for o in basis {
            self.register.check(o)?;
        }
        let image = |o: &OccupationState| -> Vec<(OccupationState, Complex64)> {
            match basis.iter().position(|b| b == o) {
                Some(j) => (0..d)
                    .filter(|&i| unitary[i][j].norm_sqr() > 0.0)
                    .map(|i| (basis[i].clone(), unitary[i][j]))
                    .collect(),
                None => vec![(o.clone(), Complex64::new(1.0, 0.0))],
            }
        };
        let mut out = DensityOperator::zero(self.register.clone());
        for ((a, b), v) in &self.entries {
            let ia = image(a);
            let ib = image(b);
            for (x, ux) in &ia {
                for (y, uy) in &ib {
                    *out.entries
                        .entry((x.clone(), y.clone()))
                        .or_insert(Complex64::new(0.0, 0.0)) += ux * v * uy.conj();
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix over the occupations that appear in any entry.
    pub fn to_dense(&self) -> (Vec<OccupationState>, DMatrix<Complex64>) {
        let mut support: Vec<OccupationState> = self
            .entries
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        support.sort();
        support.dedup();
        let index: BTreeMap<&OccupationState, usize> =
            support.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let mut m = DMatrix::zeros(support.len(), support.len());
        for ((a, b), v) in &self.entries {
            m[(index[a], index[b])] += *v;
        }
        (support, m)
    }

    /// Smallest eigenvalue of the Hermitian part. Dense; intended for small supports.
    pub fn min_eigenvalue(&self) -> f64 {
        let (support, m) = self.to_dense();
        if support.is_empty() {
            return 0.0;
        }
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

pub fn partial_trace(rho: &DensityOperator, keep: Region) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

/// ⟨ψ|ρ|ψ⟩ for normalized ψ.
pub fn fidelity_pure_mixed(psi: &StateVector, rho: &DensityOperator) -> Result<f64> {
    let f = rho.expectation(psi)?;
    Ok(f.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn single(n_max: u32) -> Register {
        Register::uniform(n_max, 1, Region::I)
    }

    #[test]
    fn basis_tensor() {
        let one = StateVector::basis(single(3), &[1]).unwrap();
        let zero = StateVector::basis(single(3), &[0]).unwrap();
        let p = tensor_product(&one, &zero).unwrap();
        assert_eq!(p.mode_count(), 2);
        assert_eq!(p.len(), 1);
        assert_eq!(p.amplitude(&vec![1, 0].into()), c(1.0));
    }

    #[test]
    fn superposition_tensor() {
        let s = 1.0 / 2f64.sqrt();
        let plus = StateVector::from_amplitudes(
            single(2),
            [(vec![0].into(), c(s)), (vec![1].into(), c(s))],
        )
        .unwrap();
        let zero = StateVector::basis(single(2), &[0]).unwrap();
        let p = plus.tensor(&zero).unwrap();
        assert!((p.amplitude(&vec![0, 0].into()) - c(s)).norm() < 1e-15);
        assert!((p.amplitude(&vec![1, 0].into()) - c(s)).norm() < 1e-15);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn tensor_cutoff_mismatch() {
        let a = StateVector::basis(single(2), &[0]).unwrap();
        let b = StateVector::basis(single(3), &[0]).unwrap();
        assert!(matches!(a.tensor(&b), Err(Error::Configuration(_))));
    }

    #[test]
    fn occupation_above_cutoff_rejected() {
        assert!(StateVector::basis(single(2), &[3]).is_err());
        assert!(StateVector::basis(single(2), &[1, 0]).is_err());
    }

    #[test]
    fn pruning_drops_tiny_amplitudes() {
        let s = StateVector::from_amplitudes(
            single(2),
            [(vec![0].into(), c(1.0)), (vec![1].into(), c(1e-17))],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        let mut s = StateVector::zero(single(2)).with_prune_threshold(1e-20);
        s.add_amplitude(vec![1].into(), c(1e-17)).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn normalize_zero_is_error() {
        assert!(StateVector::zero(single(1)).normalize().is_err());
    }

    #[test]
    fn trace_over_product_state() {
        let reg = Register::new(5, vec![Region::I, Region::II]);
        let s = StateVector::basis(reg, &[0, 5]).unwrap();
        let rho = partial_trace(&s.density(), Region::I).unwrap();
        assert_eq!(rho.mode_count(), 1);
        assert_eq!(rho.len(), 1);
        assert_eq!(rho.entry(&vec![0].into(), &vec![0].into()), c(1.0));
    }

    #[test]
    fn trace_needs_both_regions() {
        let s = StateVector::basis(Register::uniform(2, 2, Region::I), &[0, 0]).unwrap();
        assert!(matches!(
            partial_trace(&s.density(), Region::I),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(s.reduced(Region::II), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn squeezed_marginal_is_thermal() {
        // Schmidt weights (1 − q) qⁿ summed directly, no library code.
        let q: f64 = 0.3;
        let n_max = 50u32;
        let reg = Register::new(n_max, vec![Region::I, Region::II]);
        let amps = (0..=n_max).map(|n| {
            (
                OccupationState::new(vec![n, n]),
                c(((1.0 - q) * q.powi(n as i32)).sqrt()),
            )
        });
        let s = StateVector::from_amplitudes(reg, amps).unwrap();
        let rho = partial_trace(&s.density(), Region::I).unwrap();
        let fast = s.reduced(Region::I).unwrap();
        for n in 0..=n_max {
            let o = OccupationState::new(vec![n]);
            let expected = (1.0 - q) * q.powi(n as i32);
            assert!((rho.entry(&o, &o).re - expected).abs() < 1e-15);
            assert!((fast.entry(&o, &o).re - expected).abs() < 1e-15);
        }
        assert!(rho.max_deviation(&fast).unwrap() < 1e-15);
        for ((a, b), v) in rho.iter() {
            if a != b {
                assert!(v.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis(single(4), &[0]).unwrap();
        let one = StateVector::basis(single(4), &[1]).unwrap();
        assert_eq!(fidelity_pure_mixed(&zero, &zero.density()).unwrap(), 1.0);
        assert_eq!(fidelity_pure_mixed(&zero, &one.density()).unwrap(), 0.0);
        let q: f64 = 0.25;
        let thermal = DensityOperator::diagonal(
            single(4),
            (0..=4).map(|n| (OccupationState::new(vec![n]), (1.0 - q) * q.powi(n as i32))),
        )
        .unwrap();
        assert!((fidelity_pure_mixed(&zero, &thermal).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn fidelity_register_mismatch() {
        let a = StateVector::basis(single(4), &[0]).unwrap();
        let b = StateVector::basis(Register::uniform(4, 2, Region::I), &[0, 0]).unwrap();
        assert!(matches!(
            fidelity_pure_mixed(&a, &b.density()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn restricted_unitary_swaps_rails() {
        let reg = Register::uniform(3, 2, Region::I);
        let r10 = OccupationState::new(vec![1, 0]);
        let r01 = OccupationState::new(vec![0, 1]);
        let rho = DensityOperator::diagonal(
            reg.clone(),
            [(r10.clone(), 0.7), (OccupationState::new(vec![2, 0]), 0.3)],
        )
        .unwrap();
        let x = vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]];
        let out = rho.conjugate_restricted(&[r10.clone(), r01.clone()], &x).unwrap();
        assert_eq!(out.entry(&r01, &r01), c(0.7));
        assert_eq!(out.entry(&r10, &r10).norm(), 0.0);
        let two = OccupationState::new(vec![2, 0]);
        assert_eq!(out.entry(&two, &two), c(0.3));
    }

    #[test]
    fn projection_gives_conditional_state() {
        // (|00⟩ + |11⟩)/√2 projected on ⟨1| of mode 0 leaves |1⟩/√2.
        let s = 1.0 / 2f64.sqrt();
        let reg = Register::uniform(1, 2, Region::I);
        let bell = StateVector::from_amplitudes(
            reg,
            [(vec![0, 0].into(), c(s)), (vec![1, 1].into(), c(s))],
        )
        .unwrap();
        let one = StateVector::basis(single(1), &[1]).unwrap();
        let rest = bell.project(&[0], &one).unwrap();
        assert_eq!(rest.mode_count(), 1);
        assert!((rest.amplitude(&vec![1].into()) - c(s)).norm() < 1e-15);
        assert!((rest.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn min_eigenvalue_of_projector() {
        let s = 1.0 / 2f64.sqrt();
        let plus = StateVector::from_amplitudes(
            single(1),
            [(vec![0].into(), c(s)), (vec![1].into(), c(s))],
        )
        .unwrap();
        let rho = plus.density();
        assert!(rho.min_eigenvalue().abs() < 1e-14);
        assert!(rho.hermiticity_defect() < 1e-15);
    }
}
