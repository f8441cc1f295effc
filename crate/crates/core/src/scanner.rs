//! Floating-point exploration of the frame set.
//!
//! Each lattice point `(a, b)` gets the minimum over an `(x, t)` grid of the
//! smallest singular value of `Ψ`. Points on the two obstruction families are
//! additionally backed by exact certificates. The strongest positive verdict is
//! "no obstruction found"; a grid search never proves the frame property.

use std::io::Write;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bspline::{bspline_order_of, PiecewisePolynomial};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::gabor::{lattice_params, min_singular_value, zz_matrix, EvaluationPoint, LatticeParams};
use crate::obstruction::{
    a_range, a_sn_closed, a_sn_direct, certify_conj1, certify_conj2, ConjectureOneParams, ConjectureTwoParams,
    ObstructionCertificate,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRegion {
    pub a_min: Rational,
    pub a_max: Rational,
    pub b_min: Rational,
    pub b_max: Rational,
    pub a_steps: usize,
    pub b_steps: usize,
    pub grid_n: usize,
    pub rational_denominator_cap: u64,
}

impl ScanRegion {
    pub fn validate(&self) -> Result<()> {
        if !self.a_min.is_positive() || !self.b_min.is_positive() {
            return Err(Error::InvalidRegion("a and b must be positive".into()));
        }
        if self.a_min >= self.a_max || self.b_min >= self.b_max {
            return Err(Error::InvalidRegion("need a_min < a_max and b_min < b_max".into()));
        }
        if self.a_steps == 0 || self.b_steps == 0 || self.grid_n == 0 || self.rational_denominator_cap == 0 {
            return Err(Error::InvalidRegion("steps, grid and cap must be positive".into()));
        }
        Ok(())
    }
}

/// Thresholds on `min_sigma`: below `degenerate_below` is numerically
/// degenerate, at or above `clear_above` is clear, in between is borderline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    pub degenerate_below: f64,
    pub clear_above: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            degenerate_below: 1e-8,
            clear_above: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedNonframe,
    NumericallyDegenerate,
    NoObstructionFound,
    KnownObstruction,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedNonframe => "certified-nonframe",
            Verdict::NumericallyDegenerate => "numerically-degenerate",
            Verdict::NoObstructionFound => "no-obstruction-found",
            Verdict::KnownObstruction => "known-obstruction",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub a: Rational,
    pub b: Rational,
    pub p: u64,
    pub q: u64,
    pub min_sigma: f64,
    pub argmin_x: f64,
    pub argmin_t: f64,
    pub verdict: Verdict,
    /// Set when `min_sigma` falls between the two thresholds.
    pub borderline: bool,
    #[serde(skip)]
    pub certificate: Option<ObstructionCertificate>,
}

/// Minimum of `σ_min(Ψ(x_i, t_j))` over `x_i = i·a/N`, `t_j = j/(a·N)`,
/// `0 <= i, j < N`. Returns `(σ, x, t)` at the first minimizer in row order.
pub fn grid_min_sigma(g: &PiecewisePolynomial, params: &LatticeParams, grid_n: usize) -> (f64, f64, f64) {
    let a = params.a.to_f64();
    let n = grid_n as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid_n {
        let x = i as f64 * a / n;
        for j in 0..grid_n {
            let t = j as f64 / (a * n);
            let sigma = min_singular_value(&zz_matrix(g, params, EvaluationPoint::new(x, t)));
            if sigma < best.0 {
                best = (sigma, x, t);
            }
        }
    }
    best
}

/// True iff `b > 3/2` and `|b - ⌊b + 1/2⌋| <= 1/(nq)`, with `q` the reduced
/// denominator of `ab`.
pub fn known_obstruction_filter(a: &Rational, b: &Rational, n: u32) -> bool {
    if b <= &Rational::frac(3, 2) {
        return false;
    }
    let ab = a * b;
    let nearest = Rational::from((b + Rational::frac(1, 2)).floor());
    let bound = Rational::one() / (Rational::from(i64::from(n)) * Rational::from(ab.denom().clone()));
    (b - nearest).abs() <= bound
}

/// An exact certificate for `(a, b)` if it lies on either obstruction family.
pub fn find_certificate(a: &Rational, b: &Rational) -> Option<ObstructionCertificate> {
    if let Some(cert) = family_two_certificate(a, b) {
        return Some(cert);
    }
    family_one_certificate(a, b)
}

fn family_two_certificate(a: &Rational, b: &Rational) -> Option<ObstructionCertificate> {
    let inv = a.recip()?;
    if !inv.is_integer() || !(b * Rational::from(2)).is_integer() {
        return None;
    }
    let two_m = inv.floor().to_u32()?;
    let two_k1 = (b * Rational::from(2)).floor().to_u32()?;
    if two_m % 2 == 1 || two_k1 % 2 == 0 {
        return None;
    }
    let (m, k) = (two_m / 2, (two_k1 - 1) / 2);
    ConjectureTwoParams::new(m, k).ok()?;
    certify_conj2(m, k).ok()
}

fn family_one_certificate(a: &Rational, b: &Rational) -> Option<ObstructionCertificate> {
    let ab = a * b;
    let p = ab.numer().to_u64()?;
    let q = ab.denom().to_u64()?;
    if p % 2 == 0 || q % 4 != 2 {
        return None;
    }
    // ab = (2k+1)/(2(2m+1)) with 2k+1 = g·p and 2m+1 = g·q/2 for odd g.
    let half_q = q / 2;
    let limit = (a.recip()?.to_f64() * 2.0) as u64 + 3;
    let mut g = 1u64;
    while g * half_q <= limit {
        let m = u32::try_from((g * half_q - 1) / 2).ok()?;
        let k = u32::try_from((g * p - 1) / 2).ok()?;
        if ConjectureOneParams::new(m, k, a.clone()).is_ok() {
            return certify_conj1(m, k, a).ok();
        }
        g += 2;
    }
    None
}

fn classify(sigma: f64, config: &ScanConfig) -> (Verdict, bool) {
    if sigma < config.degenerate_below {
        (Verdict::NumericallyDegenerate, false)
    } else {
        (Verdict::NoObstructionFound, sigma < config.clear_above)
    }
}

/// Scans one lattice point. `order` enables the known-obstruction filter and,
/// for order 2, certificate lookup.
pub fn scan_point(
    g: &PiecewisePolynomial,
    order: Option<u32>,
    params: &LatticeParams,
    grid_n: usize,
    config: &ScanConfig,
) -> ScanRecord {
    let (min_sigma, argmin_x, argmin_t) = grid_min_sigma(g, params, grid_n);
    let certificate = if order == Some(2) {
        find_certificate(&params.a, &params.b)
    } else {
        None
    };
    let (verdict, borderline) = if certificate.is_some() {
        (Verdict::CertifiedNonframe, false)
    } else if order.is_some_and(|n| known_obstruction_filter(&params.a, &params.b, n)) {
        (Verdict::KnownObstruction, false)
    } else {
        classify(min_sigma, config)
    };
    ScanRecord {
        a: params.a.clone(),
        b: params.b.clone(),
        p: params.p,
        q: params.q,
        min_sigma,
        argmin_x,
        argmin_t,
        verdict,
        borderline,
        certificate,
    }
}

/// `steps` evenly spaced rationals from `lo` to `hi` inclusive.
pub fn linspace(lo: &Rational, hi: &Rational, steps: usize) -> Vec<Rational> {
    if steps <= 1 {
        return vec![lo.clone()];
    }
    let span = hi - lo;
    let last = Rational::from(steps as i64 - 1);
    (0..steps)
        .map(|i| lo + &span * Rational::from(i as i64) / &last)
        .collect()
}

/// Lattice points of the region after snapping `a` and `b` to denominators at
/// most the cap. Points whose `ab` has `q` above the cap are skipped.
pub fn region_points(region: &ScanRegion) -> Result<Vec<LatticeParams>> {
    region.validate()?;
    let cap = region.rational_denominator_cap;
    let a_values: Vec<_> = linspace(&region.a_min, &region.a_max, region.a_steps)
        .iter()
        .map(|a| a.best_approximation(cap))
        .collect();
    let b_values: Vec<_> = linspace(&region.b_min, &region.b_max, region.b_steps)
        .iter()
        .map(|b| b.best_approximation(cap))
        .collect();
    let mut points = Vec::new();
    let mut skipped = 0usize;
    for a in &a_values {
        for b in &b_values {
            if !a.is_positive() || !b.is_positive() {
                skipped += 1;
                continue;
            }
            let params = lattice_params(a.clone(), b.clone())?;
            if params.q > cap {
                log::debug!("skipping (a, b) = ({a}, {b}): q = {} exceeds cap {cap}", params.q);
                skipped += 1;
                continue;
            }
            points.push(params);
        }
    }
    let candidates = points.len();
    points.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    points.dedup();
    log::info!(
        "{} lattice points, {skipped} skipped over cap, {} duplicates after snapping",
        points.len(),
        candidates - points.len()
    );
    Ok(points)
}

/// Scans every lattice point of the region in parallel; output sorted by `(a, b)`.
pub fn scan_region(g: &PiecewisePolynomial, region: &ScanRegion, config: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let points = region_points(region)?;
    let order = bspline_order_of(g);
    let records: Vec<ScanRecord> = points
        .par_iter()
        .map(|params| scan_point(g, order, params, region.grid_n, config))
        .collect();
    Ok(records)
}

/// Certificates at `samples` values of `a` spread evenly over `a_range(m, k)`,
/// both ends included. When the closed forms apply, each sample is also checked
/// against them.
pub fn sweep_hyperbola_conj1(m: u32, k: u32, samples: usize) -> Result<Vec<ObstructionCertificate>> {
    if samples < 2 {
        return Err(Error::InvalidParams("samples must be at least 2".into()));
    }
    let (lo, hi) = a_range(m, k)?;
    let closed_forms = k % 2 == 0 && m >= 2 && (2 * (2 * m + 1)).gcd(&(2 * k + 1)) == 1;
    let a_values = linspace(&lo, &hi, samples);
    a_values
        .par_iter()
        .map(|a| {
            let cert = certify_conj1(m, k, a)?;
            if closed_forms {
                for s in 1..=2 * m {
                    for n in 1..=k {
                        let closed = a_sn_closed(m, k, a, s, n)?;
                        let direct = a_sn_direct(m, k, a, s, n)?;
                        if closed != direct {
                            return Err(Error::LemmaViolation(format!(
                                "closed form {closed} != direct {direct} at (m,k,a,s,n) = ({m},{k},{a},{s},{n})"
                            )));
                        }
                    }
                }
            }
            Ok(cert)
        })
        .collect()
}

/// `[β0 - α0(k-m)/2, β0 + α0(k-m)/2]` with `α0 = 1/(2m)`, `β0 = (2k+1)/2`.
pub fn conj2_b_interval(m: u32, k: u32) -> Result<(Rational, Rational)> {
    let params = ConjectureTwoParams::new(m, k)?;
    let half_width = params.a() * Rational::frac(i64::from(k) - i64::from(m), 2);
    Ok((params.b() - &half_width, params.b() + half_width))
}

/// Numerical sweep along `ab = (2k+1)/(4m)` over the conjectured `b` interval.
/// Only the center `b = (2k+1)/2` is certified; it is added if not sampled.
pub fn sweep_hyperbola_conj2(
    m: u32,
    k: u32,
    samples: usize,
    grid_n: usize,
    config: &ScanConfig,
) -> Result<Vec<ScanRecord>> {
    if samples < 2 {
        return Err(Error::InvalidParams("samples must be at least 2".into()));
    }
    let params = ConjectureTwoParams::new(m, k)?;
    let (lo, hi) = conj2_b_interval(m, k)?;
    let density = Rational::frac(2 * i64::from(k) + 1, 4 * i64::from(m));
    let center = params.b();
    let mut b_values = linspace(&lo, &hi, samples);
    if !b_values.contains(&center) {
        b_values.push(center.clone());
        b_values.sort();
    }
    let g = crate::obstruction::hat();
    b_values
        .par_iter()
        .map(|b| {
            let lp = lattice_params(&density / b, b.clone())?;
            let (min_sigma, argmin_x, argmin_t) = grid_min_sigma(g, &lp, grid_n);
            let (verdict, borderline, certificate) = if *b == center {
                (Verdict::CertifiedNonframe, false, Some(certify_conj2(m, k)?))
            } else {
                let (v, bl) = classify(min_sigma, config);
                (v, bl, None)
            };
            Ok(ScanRecord {
                a: lp.a,
                b: lp.b,
                p: lp.p,
                q: lp.q,
                min_sigma,
                argmin_x,
                argmin_t,
                verdict,
                borderline,
                certificate,
            })
        })
        .collect()
}

/// Header plus one row per record: `a,b,p,q,min_sigma,argmin_x,argmin_t,verdict`.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "p", "q", "min_sigma", "argmin_x", "argmin_t", "verdict"])?;
    for r in records {
        w.write_record([
            r.a.to_string(),
            r.b.to_string(),
            r.p.to_string(),
            r.q.to_string(),
            r.min_sigma.to_string(),
            r.argmin_x.to_string(),
            r.argmin_t.to_string(),
            r.verdict.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
