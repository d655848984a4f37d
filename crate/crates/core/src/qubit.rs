//! Logical qubits, Bell outcomes and the deterministic Bloch-sphere sample set.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// a|0⟩ + b|1⟩ with |a|² + |b|² = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalQubit {
    a: Complex64,
    b: Complex64,
}

impl LogicalQubit {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "logical qubit amplitudes have |a|²+|b|² = {n}"
            )));
        }
        Ok(LogicalQubit { a, b })
    }

    /// Normalizes (a, b); fails on the zero vector.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("zero logical qubit".into()));
        }
        Ok(LogicalQubit { a: a / n, b: b / n })
    }

    /// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        LogicalQubit {
            a: Complex64::new((theta / 2.0).cos(), 0.0),
            b: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn zero() -> Self {
        LogicalQubit::from_bloch(0.0, 0.0)
    }

    pub fn one() -> Self {
        LogicalQubit::from_bloch(PI, 0.0)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }
}

/// Fibonacci-sphere points: zᵢ = 1 − (2i+1)/n, φᵢ = i·π(3 − √5).
///
/// Uniform in z, so |a|² = (1+z)/2 is sampled at the midpoints of `n` equal
/// bins; the set is fixed for a given `n`.
pub fn bloch_samples(n: usize) -> Vec<LogicalQubit> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            LogicalQubit::from_bloch(z.clamp(-1.0, 1.0).acos(), (i as f64 * golden) % (2.0 * PI))
        })
        .collect()
}

/// Result |i⟩⊗|j⟩ of Alice's joint measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellOutcome {
    i: u8,
    j: u8,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome { i: 0, j: 0 },
        BellOutcome { i: 0, j: 1 },
        BellOutcome { i: 1, j: 0 },
        BellOutcome { i: 1, j: 1 },
    ];

    pub fn new(i: u8, j: u8) -> Result<Self> {
        if i > 1 || j > 1 {
            return Err(Error::InvalidArgument(format!("Bell outcome ({i},{j})")));
        }
        Ok(BellOutcome { i, j })
    }

    pub fn i(&self) -> u8 {
        self.i
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    /// Bob's standard Pauli correction on {|0⟩, |1⟩}, as ⟨r|U|c⟩ rows:
    /// (0,0) I, (0,1) X, (1,0) Z, (1,1) X followed by Z.
    pub fn correction(&self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match (self.i, self.j) {
            (0, 0) => [[l, o], [o, l]],
            (0, 1) => [[o, l], [l, o]],
            (1, 0) => [[l, o], [o, -l]],
            _ => [[o, l], [-l, o]],
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Apply a 2×2 matrix to (x, y).
pub(crate) fn apply2(u: &[[Complex64; 2]; 2], x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    (u[0][0] * x + u[0][1] * y, u[1][0] * x + u[1][1] * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(LogicalQubit::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
        assert!(LogicalQubit::normalized(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
        let q = LogicalQubit::normalized(Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)).unwrap();
        assert!((q.a().re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn samples_are_unit_and_cover_poles() {
        let s = bloch_samples(50);
        assert_eq!(s.len(), 50);
        for q in &s {
            assert!((q.a().norm_sqr() + q.b().norm_sqr() - 1.0).abs() < 1e-14);
        }
        let mean_p: f64 = s.iter().map(|q| q.a().norm_sqr()).sum::<f64>() / 50.0;
        assert!((mean_p - 0.5).abs() < 1e-12);
        assert_eq!(bloch_samples(7), bloch_samples(7));
    }

    #[test]
    fn corrections_undo_table_rows() {
        let a = Complex64::new(0.6, 0.1);
        let b = Complex64::new(0.3, -0.7);
        let rows = [(a, b), (b, a), (a, -b), (-b, a)];
        for (o, (x, y)) in BellOutcome::ALL.iter().zip(rows) {
            let (x2, y2) = apply2(&o.correction(), x, y);
            assert!((x2 - a).norm() < 1e-15 && (y2 - b).norm() < 1e-15, "{o}");
        }
        assert!(BellOutcome::new(2, 0).is_err());
    }
}
