//! Zak transform and the finite matrices attached to a Gabor system at
//! rational density `ab = p/q`.
//!
//! `Φ` and `Θ` have an exact path at `(x, t) = (0, 0)`. Every matrix also has a
//! complex double-precision path for arbitrary `(x, t)`.

mod complex;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::bspline::PiecewisePolynomial;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix};

pub use complex::{min_singular_value, numerical_rank, singular_values, ComplexMatrix};

/// Lattice `aZ x bZ` with `ab = p/q` reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeParams {
    pub a: Rational,
    pub b: Rational,
    pub p: u64,
    pub q: u64,
}

impl LatticeParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        lattice_params(a, b)
    }

    pub fn density(&self) -> Rational {
        &self.a * &self.b
    }
}

pub fn lattice_params(a: Rational, b: Rational) -> Result<LatticeParams> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::NonPositiveLattice);
    }
    let ab = &a * &b;
    let p = ab.numer().to_u64().ok_or_else(|| Error::InvalidParams(format!("p too large in {ab}")))?;
    let q = ab.denom().to_u64().ok_or_else(|| Error::InvalidParams(format!("q too large in {ab}")))?;
    Ok(LatticeParams { a, b, p, q })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvaluationPoint {
    pub x: f64,
    pub t: f64,
}

impl EvaluationPoint {
    pub const ORIGIN: EvaluationPoint = EvaluationPoint { x: 0.0, t: 0.0 };

    pub fn new(x: f64, t: f64) -> Self {
        EvaluationPoint { x, t }
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Integer range `j` with `lo <= offset + step * j <= hi`, widened by `margin`
/// on both sides. Terms outside the support evaluate to zero, so the margin
/// only matters for testing truncation.
fn float_index_range(lo: f64, hi: f64, offset: f64, step: f64, margin: i64) -> std::ops::RangeInclusive<i64> {
    let first = ((lo - offset) / step).ceil() as i64 - 1 - margin;
    let last = ((hi - offset) / step).floor() as i64 + 1 + margin;
    first..=last
}

fn support_f64(g: &PiecewisePolynomial) -> (f64, f64) {
    let (lo, hi) = g.support();
    (lo.to_f64(), hi.to_f64())
}

/// `Z_α g(x, t) = Σ_n g(x - αn) e^{2πiαnt}`.
pub fn zak(g: &PiecewisePolynomial, alpha: &Rational, x: f64, t: f64) -> Complex64 {
    zak_with_margin(g, alpha, x, t, 0)
}

/// [`zak`] with the summation window widened by `margin` extra indices per side.
pub fn zak_with_margin(g: &PiecewisePolynomial, alpha: &Rational, x: f64, t: f64, margin: i64) -> Complex64 {
    let al = alpha.to_f64();
    let (lo, hi) = support_f64(g);
    // x - αn in [lo, hi]  <=>  n in [(x - hi)/α, (x - lo)/α]
    let range = float_index_range(-hi, -lo, -x, al, margin);
    range
        .map(|n| {
            let v = g.eval_float(x - al * n as f64);
            if v == 0.0 {
                Complex64::zero()
            } else {
                cis(2.0 * PI * al * n as f64 * t) * v
            }
        })
        .sum()
}

/// The Zibulski-Zeevi matrix `Ψ` (p x q):
/// entry `(k, l) = Z_a g(x + ak/p, t - bl) e^{2πikl/q}`.
pub fn zz_matrix(g: &PiecewisePolynomial, params: &LatticeParams, pt: EvaluationPoint) -> ComplexMatrix {
    let a = params.a.to_f64();
    let b = params.b.to_f64();
    let (p, q) = (params.p as usize, params.q as usize);
    ComplexMatrix::from_fn(p, q, |k, l| {
        let z = zak(g, &params.a, pt.x + a * k as f64 / p as f64, pt.t - b * l as f64);
        z * cis(2.0 * PI * (k * l) as f64 / q as f64)
    })
}

/// `Θ` (p x q): entry `(k, l) = Σ_n g(x + aqn + al + k/b) e^{-2πiaqnt}`.
pub fn theta_matrix(g: &PiecewisePolynomial, params: &LatticeParams, pt: EvaluationPoint) -> ComplexMatrix {
    theta_matrix_with_margin(g, params, pt, 0)
}

pub fn theta_matrix_with_margin(
    g: &PiecewisePolynomial,
    params: &LatticeParams,
    pt: EvaluationPoint,
    margin: i64,
) -> ComplexMatrix {
    let a = params.a.to_f64();
    let b = params.b.to_f64();
    let aq = a * params.q as f64;
    let (lo, hi) = support_f64(g);
    ComplexMatrix::from_fn(params.p as usize, params.q as usize, |k, l| {
        let offset = pt.x + a * l as f64 + k as f64 / b;
        float_index_range(lo, hi, offset, aq, margin)
            .map(|n| {
                let v = g.eval_float(offset + aq * n as f64);
                if v == 0.0 {
                    Complex64::zero()
                } else {
                    cis(-2.0 * PI * aq * n as f64 * pt.t) * v
                }
            })
            .sum()
    })
}

/// Exact `Σ_j g(offset + step * j)` over the `j` with the argument in `supp(g)`.
fn exact_periodized(g: &PiecewisePolynomial, offset: &Rational, step: &Rational) -> Rational {
    let (lo, hi) = g.support();
    let first = ((lo - offset) / step).ceil();
    let last = ((hi - offset) / step).floor();
    let mut sum = Rational::zero();
    let mut j = first;
    while j <= last {
        sum = sum + g.eval_exact(&(offset + step * Rational::from(j.clone())));
        j += 1;
    }
    sum
}

/// `Θ(0, 0)` in exact arithmetic: entry `(k, l) = Σ_n g(aqn + al + k/b)`.
pub fn theta_matrix_exact(g: &PiecewisePolynomial, params: &LatticeParams) -> RationalMatrix {
    let aq = &params.a * Rational::from(params.q as i64);
    let inv_b = params.b.recip().expect("b > 0");
    RationalMatrix::from_fn(params.p as usize, params.q as usize, |k, l| {
        let offset = &params.a * Rational::from(l as i64) + &inv_b * Rational::from(k as i64);
        exact_periodized(g, &offset, &aq)
    })
}

/// `Φ_sn(0, 0) = Σ_j g(aqj + as - n/b)` for an explicit, possibly unreduced `q`.
pub fn phi_entry_exact(g: &PiecewisePolynomial, a: &Rational, b: &Rational, q: u64, s: i64, n: i64) -> Rational {
    let aq = a * Rational::from(q as i64);
    let offset = a * Rational::from(s) - Rational::from(n) / b;
    exact_periodized(g, &offset, &aq)
}

/// `Φ(0, 0)` (q x p) for the reduced lattice.
pub fn phi_matrix_exact(g: &PiecewisePolynomial, params: &LatticeParams) -> RationalMatrix {
    phi_matrix_exact_with_q(g, &params.a, &params.b, params.p, params.q)
}

/// `Φ(0, 0)` built with `p = ab·q` for a `q` that need not be reduced.
pub fn phi_matrix_exact_with_q(g: &PiecewisePolynomial, a: &Rational, b: &Rational, p: u64, q: u64) -> RationalMatrix {
    RationalMatrix::from_fn(q as usize, p as usize, |s, n| {
        phi_entry_exact(g, a, b, q, s as i64, n as i64)
    })
}

/// `Φ(x, t)` (q x p): entry `(s, n) = Σ_k g(x + aqk + as - n/b) e^{2πikt}`.
pub fn phi_matrix_float(g: &PiecewisePolynomial, params: &LatticeParams, pt: EvaluationPoint) -> ComplexMatrix {
    let a = params.a.to_f64();
    let b = params.b.to_f64();
    let aq = a * params.q as f64;
    let (lo, hi) = support_f64(g);
    ComplexMatrix::from_fn(params.q as usize, params.p as usize, |s, n| {
        let offset = pt.x + a * s as f64 - n as f64 / b;
        float_index_range(lo, hi, offset, aq, 0)
            .map(|k| {
                let v = g.eval_float(offset + aq * k as f64);
                if v == 0.0 {
                    Complex64::zero()
                } else {
                    cis(2.0 * PI * k as f64 * pt.t) * v
                }
            })
            .sum()
    })
}
