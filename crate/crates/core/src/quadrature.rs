//! Globally adaptive Gauss-Kronrod (G7/K15) quadrature for complex integrands.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol·|I|)`. The local estimate is
//! the raw |K15 − G7| difference, which overstates the true error for smooth
//! integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of subintervals.
    pub max_intervals: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadratureSettings {
    /// Same settings with tolerances divided by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        QuadratureSettings {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            max_intervals: self.max_intervals * 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx)? + f(center + dx)?;
        k += sum * WGK[j];
        if j % 2 == 1 {
            g += sum * WG[j / 2];
        }
    }
    Ok(Segment {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).norm(),
    })
}

/// ∫ₐᵇ f(x) dx.
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration limits [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = 15;
    heap.push(first);
    loop {
        let target = settings.abs_tol.max(settings.rel_tol * value.norm());
        if error <= target {
            break;
        }
        if heap.len() >= settings.max_intervals {
            return Err(Error::Quadrature {
                a,
                b,
                estimate: format!("{value}"),
                error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        error,
        intervals: heap.len(),
        evaluations,
    })
}
