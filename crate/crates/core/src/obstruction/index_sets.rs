//! The row sets `S_1a..S_4a`, the boundary sets `I_11..I_22` and the
//! lattice-point count behind `#S = k - m`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::check_pair;
use super::lemmas::{a_sn_direct, b_of, check_a};
use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSetReport {
    pub s1a: BTreeSet<u32>,
    pub s2a: BTreeSet<u32>,
    pub s3a: BTreeSet<u32>,
    pub s4a: BTreeSet<u32>,
    pub i11: BTreeSet<u32>,
    pub i12: BTreeSet<u32>,
    pub i21: BTreeSet<u32>,
    pub i22: BTreeSet<u32>,
    /// `W_n = 2(2m+1)n/(2k+1)` for `n = 1..k`.
    pub w: Vec<Rational>,
    /// `V = 2m+1 - 1/a`.
    pub v: Rational,
}

impl IndexSetReport {
    /// `S_a = S_1a ∪ S_2a`.
    pub fn s_a(&self) -> BTreeSet<u32> {
        self.s1a.union(&self.s2a).copied().collect()
    }

    /// `T_a = S_3a ∪ S_4a`.
    pub fn t_a(&self) -> BTreeSet<u32> {
        self.s3a.union(&self.s4a).copied().collect()
    }

    /// Disjointness and the sign-of-`V` emptiness rules.
    pub fn structure_holds(&self) -> bool {
        let one = Rational::one();
        let disjoint = self.s1a.is_disjoint(&self.s2a)
            && self.s3a.is_disjoint(&self.s4a)
            && self.s_a().is_disjoint(&self.t_a());
        let by_sign = if !self.v.is_negative() && self.v < one {
            self.t_a().is_empty()
        } else if self.v.is_negative() && self.v > -one {
            self.s_a().is_empty()
        } else {
            true
        };
        disjoint && by_sign
    }
}

fn require_even(k: u32) -> Result<()> {
    if k % 2 == 1 {
        return Err(Error::InvalidParams(format!("k = {k} must be even")));
    }
    Ok(())
}

/// `α = 2m+1 - (k-m)/(2k+1)`; `1/α` is the right end of the admissible `a`.
pub fn alpha(m: u32, k: u32) -> Rational {
    Rational::from(i64::from(2 * m + 1)) - Rational::frac(i64::from(k) - i64::from(m), i64::from(2 * k + 1))
}

/// `β = 2m+1 + (k-m)/(2k+1)`; `1/β` is the left end of the admissible `a`.
pub fn beta(m: u32, k: u32) -> Rational {
    Rational::from(i64::from(2 * m + 1)) + Rational::frac(i64::from(k) - i64::from(m), i64::from(2 * k + 1))
}

/// Enumerates `S_1a..S_4a` by comparing each `A_sn` (direct sums) with the
/// defining expression, and fills in the `I` sets, `W_n` and `V`.
pub fn s_sets(m: u32, k: u32, a: &Rational) -> Result<IndexSetReport> {
    require_even(k)?;
    check_a(m, k, a)?;
    let b = b_of(m, k, a);
    let one = Rational::one();
    let big_k = Rational::from(i64::from(2 * k + 1));
    let (mut s1a, mut s2a, mut s3a, mut s4a) = Default::default();
    let insert = |set: &mut BTreeSet<u32>, s: u32, hit: bool| {
        if hit {
            set.insert(s);
        }
    };
    for s in 1..=m {
        let sr = Rational::from(i64::from(s));
        let refl = Rational::from(i64::from(2 * m + 1 - s));
        for n in 1..=k / 2 {
            let nr = Rational::from(i64::from(n));
            let value = a_sn_direct(m, k, a, 2 * m + 1 - s, n)?;
            insert(&mut s1a, s, value == &one - a * &refl + &nr / &b);
            insert(&mut s3a, s, value == -&one - a * &refl + (&big_k + &nr) / &b);
        }
        for n in k / 2 + 1..=k {
            let nr = Rational::from(i64::from(n));
            let value = a_sn_direct(m, k, a, s, n)?;
            insert(&mut s2a, s, value == &one + a * &sr - &nr / &b);
            insert(&mut s4a, s, value == -&one + a * &sr + (&big_k - &nr) / &b);
        }
    }
    let (i11, i12, i21, i22) = i_sets(m, k)?;
    let w = (1..=k)
        .map(|n| Rational::frac(i64::from(2 * (2 * m + 1) * n), i64::from(2 * k + 1)))
        .collect();
    let v = Rational::from(i64::from(2 * m + 1)) - a.recip().expect("a > 0");
    Ok(IndexSetReport {
        s1a,
        s2a,
        s3a,
        s4a,
        i11,
        i12,
        i21,
        i22,
        w,
        v,
    })
}

/// `S_1a` and `S_2a` from their inequality description in terms of `W_n`.
pub fn s_sets_by_inequality(m: u32, k: u32, a: &Rational) -> Result<(BTreeSet<u32>, BTreeSet<u32>)> {
    require_even(k)?;
    check_a(m, k, a)?;
    let inv_a = a.recip().expect("a > 0");
    let top = Rational::from(i64::from(2 * (2 * m + 1)));
    let w = |n: u32| Rational::frac(i64::from(2 * (2 * m + 1) * n), i64::from(2 * k + 1));
    let within = |x: u32, n: u32| {
        let x = Rational::from(i64::from(x));
        &inv_a - w(n) <= x && x <= &top - w(n) - &inv_a
    };
    let s1 = (1..=m)
        .filter(|&s| (1..=k / 2).any(|n| within(2 * m + 1 - s, n)))
        .collect();
    let s2 = (1..=m)
        .filter(|&s| (k / 2 + 1..=k).any(|n| within(s, n)))
        .collect();
    Ok((s1, s2))
}

/// `(I_11, I_12, I_21, I_22)` by exact membership tests.
pub fn i_sets(m: u32, k: u32) -> Result<(BTreeSet<u32>, BTreeSet<u32>, BTreeSet<u32>, BTreeSet<u32>)> {
    require_even(k)?;
    check_pair(m, k)?;
    let (mi, ki) = (i64::from(m), i64::from(k));
    let plus = |n: u32| Rational::frac(2 * i64::from(n) * (2 * mi + 1) + ki - mi, 2 * ki + 1);
    let minus = |n: u32| Rational::frac(2 * i64::from(n) * (2 * mi + 1) - (ki - mi), 2 * ki + 1);
    let (mut i11, mut i12, mut i21, mut i22) = Default::default();
    for s in 1..=m {
        let sr = Rational::from(i64::from(s));
        let refl = Rational::from(i64::from(2 * m + 1 - s));
        for n in 1..=k / 2 {
            if plus(n) == sr {
                BTreeSet::insert(&mut i11, s);
            }
            if minus(n) == sr {
                BTreeSet::insert(&mut i21, s);
            }
        }
        for n in k / 2 + 1..=k {
            if plus(n) == refl {
                BTreeSet::insert(&mut i12, s);
            }
            if minus(n) == refl {
                BTreeSet::insert(&mut i22, s);
            }
        }
    }
    Ok((i11, i12, i21, i22))
}

/// `φ(n) = 1` if `n ≡ 0, 1 (mod 4)`, else `-1`.
pub fn phi_weight(n: u32) -> i64 {
    if n % 4 <= 1 {
        1
    } else {
        -1
    }
}

/// `Σ_{n=1}^{2k} φ(n) ⌊n(k-m)/(2k+1)⌋ + (k - m)`.
pub fn cardinality_floor_sum(m: u32, k: u32) -> Result<i64> {
    require_even(k)?;
    check_pair(m, k)?;
    let (d, den) = (i64::from(k - m), i64::from(2 * k + 1));
    let sum: i64 = (1..=2 * k)
        .map(|n| phi_weight(n) * (i64::from(n) * d).div_euclid(den))
        .sum();
    Ok(sum + d)
}
