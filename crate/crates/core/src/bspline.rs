//! Centered B-splines as exact piecewise polynomials.
//!
//! `Q_1` is the indicator of `[-1/2, 1/2]` and `Q_{n+1} = Q_n * Q_1`. Every
//! convolution is carried out symbolically, so all breakpoints and coefficients
//! stay rational.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Poly(Vec<Rational>);

impl Poly {
    fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x - c`
    fn shifted_x(c: &Rational) -> Self {
        Poly::new(vec![-c, Rational::one()])
    }

    fn add_assign(&mut self, other: &Poly) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), Rational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = &*a + b;
        }
        *self = Poly::new(std::mem::take(&mut self.0));
    }

    fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(&other.scale(&Rational::from(-1)));
        out
    }

    fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::default();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational::zero()];
        for (i, c) in self.0.iter().enumerate() {
            out.push(c / Rational::from(i as i64 + 1));
        }
        Poly::new(out)
    }

    /// Coefficients of `p(x + c)`.
    fn taylor_shift(&self, c: &Rational) -> Poly {
        let shift = Poly::new(vec![c.clone(), Rational::one()]);
        let mut out = Poly::default();
        for coeff in self.0.iter().rev() {
            out = out.mul(&shift);
            out.add_assign(&Poly::constant(coeff.clone()));
        }
        out
    }
}

/// Polynomial in `t` whose coefficients are polynomials in `x`.
struct Bivariate(Vec<Poly>);

impl Bivariate {
    /// `q(x - t)`
    fn reflected(q: &Poly) -> Self {
        let mut by_t: Vec<Poly> = vec![Poly::default(); q.0.len().max(1)];
        for (d, qd) in q.0.iter().enumerate() {
            let mut binom = Rational::one();
            for e in 0..=d {
                // qd * C(d, e) * x^{d-e} * (-t)^e
                let mut coeff = vec![Rational::zero(); d - e + 1];
                let sign = if e % 2 == 0 { 1 } else { -1 };
                coeff[d - e] = qd * &binom * Rational::from(sign);
                by_t[e].add_assign(&Poly::new(coeff));
                binom = binom * Rational::from((d - e) as i64) / Rational::from(e as i64 + 1);
            }
        }
        Bivariate(by_t)
    }

    /// `p(t) * self`
    fn mul_t_poly(&self, p: &Poly) -> Self {
        let len = (self.0.len() + p.0.len()).saturating_sub(1);
        let mut out = vec![Poly::default(); len];
        for (r, pr) in p.0.iter().enumerate() {
            for (e, ce) in self.0.iter().enumerate() {
                out[r + e].add_assign(&ce.scale(pr));
            }
        }
        Bivariate(out)
    }

    fn antiderivative_t(&self) -> Self {
        let mut out = vec![Poly::default()];
        for (j, c) in self.0.iter().enumerate() {
            out.push(c.scale(&Rational::frac(1, j as i64 + 1)));
        }
        Bivariate(out)
    }

    /// Substitutes `t = bound(x)`, giving a polynomial in `x`.
    fn at(&self, bound: &Poly) -> Poly {
        let mut out = Poly::default();
        for c in self.0.iter().rev() {
            out = out.mul(bound);
            out.add_assign(c);
        }
        out
    }
}

/// A compactly supported piecewise polynomial with rational data.
///
/// Piece `i` lives on `[breakpoints[i], breakpoints[i + 1]]` and stores its
/// coefficients in ascending degree. The function is zero outside
/// `[breakpoints[0], breakpoints[last]]`; the support is treated as closed.
#[derive(Clone, Debug)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
    float: FloatPieces,
}

/// Double-precision copy used on the scanning path. Each piece is expanded
/// around its interval midpoint to limit cancellation.
#[derive(Clone, Debug)]
struct FloatPieces {
    breakpoints: Vec<f64>,
    centers: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl PartialEq for PiecewisePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.breakpoints == other.breakpoints && self.pieces == other.pieces
    }
}

impl Eq for PiecewisePolynomial {}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Vec<Rational>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewise("need at least two breakpoints"));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPiecewise("need one piece per interval"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise("breakpoints must be strictly increasing"));
        }
        Ok(Self::from_parts(breakpoints, pieces.into_iter().map(Poly::new).collect()))
    }

    fn from_parts(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Self {
        let mut centers = Vec::with_capacity(pieces.len());
        let mut coeffs = Vec::with_capacity(pieces.len());
        for (w, piece) in breakpoints.windows(2).zip(&pieces) {
            let mid = (&w[0] + &w[1]) / Rational::from(2);
            centers.push(mid.to_f64());
            coeffs.push(piece.taylor_shift(&mid).0.iter().map(Rational::to_f64).collect());
        }
        let float = FloatPieces {
            breakpoints: breakpoints.iter().map(Rational::to_f64).collect(),
            centers,
            coeffs,
        };
        PiecewisePolynomial {
            breakpoints,
            pieces,
            float,
        }
    }

    /// Indicator of the closed interval `[lo, hi]`.
    pub fn indicator(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(vec![lo, hi], vec![vec![Rational::one()]])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    /// Coefficients of each piece, ascending degree.
    pub fn pieces(&self) -> impl Iterator<Item = &[Rational]> {
        self.pieces.iter().map(|p| p.0.as_slice())
    }

    pub fn support(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], &self.breakpoints[self.breakpoints.len() - 1])
    }

    /// Index of the piece used at `x`: the leftmost interval that contains it.
    fn piece_index(&self, x: &Rational) -> Option<usize> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return None;
        }
        let i = match self.breakpoints.binary_search(x) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i - 1,
        };
        Some(i.min(self.pieces.len() - 1))
    }

    /// Exact value at `x`.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        match self.piece_index(x) {
            Some(i) => self.pieces[i].eval(x),
            None => Rational::zero(),
        }
    }

    /// Double-precision value at `x`.
    pub fn eval_float(&self, x: f64) -> f64 {
        let bp = &self.float.breakpoints;
        if !(x >= bp[0] && x <= bp[bp.len() - 1]) {
            return 0.0;
        }
        let i = match bp.binary_search_by(|b| b.partial_cmp(&x).unwrap_or(Ordering::Less)) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i - 1,
        }
        .min(self.pieces.len() - 1);
        let u = x - self.float.centers[i];
        self.float.coeffs[i].iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Exact integral over the support.
    pub fn integral(&self) -> Rational {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| {
                let anti = p.antiderivative();
                anti.eval(&w[1]) - anti.eval(&w[0])
            })
            .sum()
    }
}

/// Exact convolution `(f * g)(x) = ∫ f(t) g(x - t) dt`.
///
/// On each interval between consecutive sums of breakpoints the active limits
/// of every piece-pair integral are fixed, so the result there is a single
/// polynomial obtained from antiderivatives.
pub fn convolve(f: &PiecewisePolynomial, g: &PiecewisePolynomial) -> PiecewisePolynomial {
    let mut knots: Vec<Rational> = f
        .breakpoints
        .iter()
        .flat_map(|a| g.breakpoints.iter().map(move |c| a + c))
        .collect();
    knots.sort();
    knots.dedup();

    // For each piece pair, the integrand f_i(t) g_j(x - t) antidifferentiated in t.
    struct PairTerm {
        f_lo: Rational,
        f_hi: Rational,
        g_lo: Rational,
        g_hi: Rational,
        anti: Bivariate,
    }
    let mut terms = Vec::new();
    for (fw, fp) in f.breakpoints.windows(2).zip(&f.pieces) {
        for (gw, gp) in g.breakpoints.windows(2).zip(&g.pieces) {
            if fp.0.is_empty() || gp.0.is_empty() {
                continue;
            }
            let anti = Bivariate::reflected(gp).mul_t_poly(fp).antiderivative_t();
            terms.push(PairTerm {
                f_lo: fw[0].clone(),
                f_hi: fw[1].clone(),
                g_lo: gw[0].clone(),
                g_hi: gw[1].clone(),
                anti,
            });
        }
    }

    let two = Rational::from(2);
    let mut pieces = Vec::with_capacity(knots.len() - 1);
    for w in knots.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let mut piece = Poly::default();
        for term in &terms {
            // t ranges over [max(f_lo, x - g_hi), min(f_hi, x - g_lo)].
            let lower_is_f = &term.f_lo >= &(&mid - &term.g_hi);
            let upper_is_f = &term.f_hi <= &(&mid - &term.g_lo);
            let lower_val = if lower_is_f { term.f_lo.clone() } else { &mid - &term.g_hi };
            let upper_val = if upper_is_f { term.f_hi.clone() } else { &mid - &term.g_lo };
            if lower_val >= upper_val {
                continue;
            }
            let lower = if lower_is_f {
                Poly::constant(term.f_lo.clone())
            } else {
                Poly::shifted_x(&term.g_hi)
            };
            let upper = if upper_is_f {
                Poly::constant(term.f_hi.clone())
            } else {
                Poly::shifted_x(&term.g_lo)
            };
            piece.add_assign(&term.anti.at(&upper).sub(&term.anti.at(&lower)));
        }
        pieces.push(piece);
    }
    PiecewisePolynomial::from_parts(knots, pieces)
}

/// The centered B-spline `Q_n`, supported on `[-n/2, n/2]`.
pub fn bspline(n: u32) -> Result<PiecewisePolynomial> {
    if n == 0 {
        return Err(Error::NonPositiveOrder);
    }
    let q1 = PiecewisePolynomial::indicator(Rational::frac(-1, 2), Rational::frac(1, 2))?;
    let mut q = q1.clone();
    for _ in 1..n {
        q = convolve(&q, &q1);
    }
    Ok(q)
}

/// Order `n` if `g` is exactly the centered B-spline `Q_n`.
pub fn bspline_order_of(g: &PiecewisePolynomial) -> Option<u32> {
    let (lo, hi) = g.support();
    let width = hi - lo;
    if !width.is_integer() || !(lo + hi).is_zero() {
        return None;
    }
    let n = u32::try_from(width.floor()).ok()?;
    (n >= 1 && bspline(n).ok()? == *g).then_some(n)
}
