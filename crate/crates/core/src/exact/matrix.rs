use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{common_denominator, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
///
/// JSON form: `{"rows": r, "cols": c, "entries": ["num/den", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl TryFrom<RawMatrix> for RationalMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        RationalMatrix::new(raw.rows, raw.cols, raw.entries)
    }
}

impl From<RationalMatrix> for RawMatrix {
    fn from(m: RationalMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries,
        }
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    /// Fallible variant of [`from_fn`](Self::from_fn).
    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<Rational>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j)?);
            }
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::Shape {
                expected: n_cols,
                actual: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: n_rows,
            cols: n_cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// `M·v` for an integer vector.
    pub fn mul_int_vec(&self, v: &[BigInt]) -> Vec<Rational> {
        let v: Vec<Rational> = v.iter().cloned().map(Rational::from).collect();
        self.mul_vec(&v)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rational::to_f64).collect())
            .collect()
    }
}

/// Rank and right-nullspace basis of a rational matrix.
///
/// Basis vectors are primitive integer vectors (content 1, first nonzero entry
/// positive), one per free column of the echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullspaceResult {
    pub rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

/// Integer row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
}

/// Clears denominators row by row, then runs Bareiss elimination with
/// largest-magnitude partial pivoting. Every division is exact.
fn bareiss_echelon(m: &RationalMatrix) -> Echelon {
    let (n_rows, n_cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..n_rows)
        .map(|i| {
            let row = m.row(i);
            let den = common_denominator(row);
            row.iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..n_rows {
            if a[i][c].is_zero() {
                continue;
            }
            if best.map_or(true, |b| a[i][c].abs() > a[b][c].abs()) {
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        a.swap(r, p);

        let (upper, lower) = a.split_at_mut(r + 1);
        let pivot_row = &upper[r];
        let pivot = &pivot_row[c];
        for row in lower.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..n_cols {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination lost exactness");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        pivot_cols.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivot_cols }
}

/// Exact rank over the rationals.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    bareiss_echelon(m).pivot_cols.len()
}

/// Rank plus an exact basis of `{v : M v = 0}`.
///
/// Each basis vector is checked against `M` before returning.
pub fn nullspace_exact(m: &RationalMatrix) -> NullspaceResult {
    let ech = bareiss_echelon(m);
    let rank = ech.pivot_cols.len();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }

    let mut basis = Vec::with_capacity(n - rank);
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &pc) in ech.rows.iter().zip(&ech.pivot_cols).rev() {
            let tail: Rational = (pc + 1..n)
                .filter(|&j| !v[j].is_zero())
                .map(|j| Rational::from(row[j].clone()) * &v[j])
                .sum();
            v[pc] = -tail / Rational::from(row[pc].clone());
        }
        let v = primitive_integer_vector(&v);
        let image = m.mul_int_vec(&v);
        assert!(
            image.iter().all(Rational::is_zero),
            "nullspace vector failed exact verification"
        );
        basis.push(v);
    }
    NullspaceResult { rank, basis }
}

/// Scales a nonzero rational vector to integers with gcd 1 and first nonzero
/// entry positive. The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if content.is_zero() {
        return ints;
    }
    let negate = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut ints {
        *x = &*x / &content;
        if negate {
            *x = -&*x;
        }
    }
    ints
}
