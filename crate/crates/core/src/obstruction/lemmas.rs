//! Offsets `X_sn`, the threshold `Y`, and the column differences `A_sn`.

use num_integer::Integer;

use super::{check_pair, hat};
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix};
use crate::gabor::phi_entry_exact;

pub(crate) fn check_index(name: &'static str, value: u32, lo: u32, hi: u32) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::IndexOutOfRange {
            name,
            value: i64::from(value),
            lo: i64::from(lo),
            hi: i64::from(hi),
        });
    }
    Ok(())
}

fn r(n: u32) -> Rational {
    Rational::from(i64::from(n))
}

/// `X_sn = s/(2(2m+1)) - n/(2k+1)`.
pub fn x_sn(m: u32, k: u32, s: u32, n: u32) -> Result<Rational> {
    check_index("s", s, 0, 4 * m + 1)?;
    check_index("n", n, 0, 2 * k)?;
    Ok(x_raw(m, k, s, n))
}

fn x_raw(m: u32, k: u32, s: u32, n: u32) -> Rational {
    r(s) / r(2 * (2 * m + 1)) - r(n) / r(2 * k + 1)
}

/// `X~_sn = s/(4m) - n/(2k+1)`.
pub fn x_sn_tilde(m: u32, k: u32, s: u32, n: u32) -> Result<Rational> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be positive".into()));
    }
    check_index("s", s, 0, 4 * m - 1)?;
    check_index("n", n, 1, 2 * k)?;
    Ok(r(s) / r(4 * m) - r(n) / r(2 * k + 1))
}

/// `Y = 1/(2a(2m+1))`.
pub fn y_of(a: &Rational, m: u32) -> Rational {
    (Rational::from(2) * a * r(2 * m + 1)).recip().expect("a > 0")
}

/// Closed interval of admissible `a`:
/// `[(2k+1)/(4km+3k+m+1), (2k+1)/(4km+k+3m+1)]`.
pub fn a_range(m: u32, k: u32) -> Result<(Rational, Rational)> {
    check_pair(m, k)?;
    let (m, k) = (i64::from(m), i64::from(k));
    Ok((
        Rational::frac(2 * k + 1, 4 * k * m + 3 * k + m + 1),
        Rational::frac(2 * k + 1, 4 * k * m + k + 3 * m + 1),
    ))
}

pub(crate) fn check_a(m: u32, k: u32, a: &Rational) -> Result<()> {
    let (lo, hi) = a_range(m, k)?;
    if a < &lo || a > &hi {
        return Err(Error::InvalidParams(format!(
            "a = {a} outside [{lo}, {hi}] for (m, k) = ({m}, {k})"
        )));
    }
    Ok(())
}

/// `b = (2k+1)/(2(2m+1)a)`, the partner of `a` on the hyperbola.
pub fn b_of(m: u32, k: u32, a: &Rational) -> Rational {
    r(2 * k + 1) / (r(2 * (2 * m + 1)) * a)
}

fn hat_value(x: Rational) -> Rational {
    let v = Rational::one() - x.abs();
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

/// `Φ_sn(0,0)` as the two surviving terms `Q2(2a(2m+1)(l + X_sn))`:
/// `l ∈ {-1, 0}` when `X_sn > 0` and `l ∈ {0, 1}` when `X_sn < 0`.
pub fn phi_entry_closed(m: u32, k: u32, a: &Rational, s: u32, n: u32) -> Result<Rational> {
    check_a(m, k, a)?;
    check_index("s", s, 1, 4 * m + 1)?;
    check_index("n", n, 1, 2 * k)?;
    let x = x_raw(m, k, s, n);
    let c = Rational::from(2) * a * r(2 * m + 1);
    let one = Rational::one();
    let (first, second) = if x.is_positive() {
        (&x - &one, x.clone())
    } else if x.is_negative() {
        (x.clone(), &x + &one)
    } else {
        return Err(Error::ZeroOffset { s, n });
    };
    Ok(hat_value(&c * first) + hat_value(&c * second))
}

/// `Φ_sn(0,0)` for the unreduced `q = 2(2m+1)`.
fn phi_unreduced(m: u32, a: &Rational, b: &Rational, s: u32, n: u32) -> Rational {
    phi_entry_exact(hat(), a, b, u64::from(2 * (2 * m + 1)), i64::from(s), i64::from(n))
}

/// `A_sn = Φ_sn(0,0) - Φ_{s,2k+1-n}(0,0)` by direct summation.
pub fn a_sn_direct(m: u32, k: u32, a: &Rational, s: u32, n: u32) -> Result<Rational> {
    check_pair(m, k)?;
    if !a.is_positive() {
        return Err(Error::NonPositiveLattice);
    }
    check_index("s", s, 0, 4 * m + 1)?;
    check_index("n", n, 1, k)?;
    let b = b_of(m, k, a);
    Ok(phi_unreduced(m, a, &b, s, n) - phi_unreduced(m, a, &b, s, 2 * k + 1 - n))
}

/// `A_sn` from the piecewise closed forms, for `1 <= s <= 2m`, `1 <= n <= k`.
///
/// Defined only for even `k`, `m >= 2`, `gcd(2(2m+1), 2k+1) = 1` and `a` in
/// [`a_range`]. Branches are tested in the order below; within each block the
/// conditions are mutually exclusive.
pub fn a_sn_closed(m: u32, k: u32, a: &Rational, s: u32, n: u32) -> Result<Rational> {
    check_pair(m, k)?;
    if k % 2 == 1 {
        return Err(Error::NoClosedForm(format!("k = {k} is odd")));
    }
    if m < 2 {
        return Err(Error::NoClosedForm("m = 1".into()));
    }
    let g = (2 * (2 * m + 1)).gcd(&(2 * k + 1));
    if g != 1 {
        return Err(Error::NoClosedForm(format!(
            "gcd({}, {}) = {g}",
            2 * (2 * m + 1),
            2 * k + 1
        )));
    }
    check_a(m, k, a)?;
    check_index("s", s, 1, 2 * m)?;
    check_index("n", n, 1, k)?;

    let b = b_of(m, k, a);
    let y = y_of(a, m);
    let zero = Rational::zero();
    let one = Rational::one();
    let two = Rational::from(2);
    let (sr, nr) = (r(s), r(n));
    let big_k = r(2 * k + 1);
    let reflected = 2 * m + 1 - s;
    let inside = |x: &Rational| &zero < x && x < &y;
    let inside_neg = |x: &Rational| &-&y < x && x < &zero;
    let ym1 = &y - &one;

    let value = if n <= k / 2 {
        if s <= m {
            let x = x_raw(m, k, s, n);
            if inside(&x) {
                Some(&two * &nr / &b)
            } else if inside_neg(&x) {
                Some(&two * a * &sr)
            } else {
                None
            }
        } else {
            let x = x_raw(m, k, s, 2 * k + 1 - n);
            if inside_neg(&x) && x >= ym1 {
                Some(&two * a * r(reflected))
            } else if -&one < x && x <= -&y && x < ym1 {
                Some(&two * &nr / &b)
            } else if -&y < x && x < ym1 {
                Some(-&one - a * &sr + (&big_k + &nr) / &b)
            } else if ym1 <= x && x <= -&y {
                Some(&one - a * &sr + &nr / &b)
            } else {
                None
            }
        }
    } else if s <= m {
        let x = x_raw(m, k, s, 2 * k + 1 - n);
        if inside_neg(&x) && x >= ym1 {
            Some((&big_k - &two * &nr) / &b)
        } else if -&one < x && x <= -&y && x < ym1 {
            Some(&two * a * &sr)
        } else if -&y < x && x < ym1 {
            Some(-&one + a * &sr + (&big_k - &nr) / &b)
        } else if ym1 <= x && x <= -&y {
            Some(&one + a * &sr - &nr / &b)
        } else {
            None
        }
    } else {
        let x = x_raw(m, k, s, n);
        if inside(&x) {
            Some(&two * a * r(reflected))
        } else if inside_neg(&x) {
            Some((&big_k - &two * &nr) / &b)
        } else {
            None
        }
    };
    value.ok_or_else(|| Error::NoClosedForm(format!("no branch applies at (s, n) = ({s}, {n})")))
}

/// The `2m x k` matrix of `A_sn`, `s = 1..2m`, `n = 1..k`.
pub fn build_a(m: u32, k: u32, a: &Rational) -> Result<RationalMatrix> {
    check_a(m, k, a)?;
    RationalMatrix::try_from_fn((2 * m) as usize, k as usize, |i, j| {
        a_sn_direct(m, k, a, i as u32 + 1, j as u32 + 1)
    })
}

/// `A~_sn = Φ~_sn(0,0) - Φ~_{s,2k+1-n}(0,0)` with `a = 1/(2m)`, `b = (2k+1)/2`,
/// `q = 4m`; valid for `0 <= s <= 4m-1`, `1 <= n <= k`.
pub fn a_tilde_sn(m: u32, k: u32, s: u32, n: u32) -> Result<Rational> {
    let params = super::ConjectureTwoParams::new(m, k)?;
    check_index("s", s, 0, 4 * m - 1)?;
    check_index("n", n, 1, k)?;
    let (a, b) = (params.a(), params.b());
    let q = u64::from(4 * m);
    let entry = |col: u32| phi_entry_exact(hat(), &a, &b, q, i64::from(s), i64::from(col));
    Ok(entry(n) - entry(2 * k + 1 - n))
}

/// The `(2m-1) x k` matrix of `A~_sn`, `s = 1..2m-1`, `n = 1..k`.
pub fn build_a_tilde(m: u32, k: u32) -> Result<RationalMatrix> {
    super::ConjectureTwoParams::new(m, k)?;
    RationalMatrix::try_from_fn((2 * m - 1) as usize, k as usize, |i, j| {
        a_tilde_sn(m, k, i as u32 + 1, j as u32 + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rank_exact;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn offsets() {
        assert_eq!(x_sn(1, 2, 1, 1).unwrap(), q(-1, 30));
        assert_eq!(x_sn(3, 5, 0, 0).unwrap(), q(0, 1));
        assert_eq!(x_sn(1, 2, 3, 0).unwrap(), q(1, 2));
        assert!(x_sn(1, 2, 6, 0).is_err());
        assert!(x_sn(1, 2, 0, 5).is_err());
        assert_eq!(x_sn_tilde(2, 3, 1, 1).unwrap(), q(-1, 56));
        assert_eq!(x_sn_tilde(2, 3, 3, 6).unwrap(), q(-27, 56));
        for n in 1..=6 {
            assert_eq!(x_sn_tilde(2, 3, 4, n).unwrap(), -x_sn_tilde(2, 3, 4, 7 - n).unwrap());
        }
        assert!(x_sn_tilde(2, 3, 8, 1).is_err());
        assert!(x_sn_tilde(2, 3, 1, 0).is_err());
    }

    #[test]
    fn threshold_and_range() {
        assert_eq!(y_of(&q(1, 3), 1), q(1, 2));
        let (lo, hi) = a_range(1, 2).unwrap();
        assert_eq!((lo.clone(), hi.clone()), (q(5, 16), q(5, 14)));
        assert_eq!(y_of(&lo, 1) * q(2, 1) * &lo * q(3, 1), q(1, 1));
        // Left end: Y = (4km+3k+m+1)/(2(2m+1)(2k+1)).
        let (lo, _) = a_range(3, 5).unwrap();
        assert_eq!(y_of(&lo, 3), q(60 + 15 + 3 + 1, 2 * 7 * 11));
        for (m, k) in [(1, 2), (2, 3), (2, 4), (5, 8), (6, 12)] {
            let (lo, hi) = a_range(m, k).unwrap();
            let a0 = q(1, 2 * i64::from(m) + 1);
            assert!(lo <= a0 && a0 <= hi);
        }
        // The middle of the (1, 2) interval lands on b inside [7/3, 8/3].
        let (lo, hi) = a_range(1, 2).unwrap();
        let b = b_of(1, 2, &((lo + hi) / q(2, 1)));
        assert!(q(7, 3) <= b && b <= q(8, 3));
        assert!(a_range(1, 1).is_err());
        assert!(a_range(2, 5).is_err());
    }

    #[test]
    fn two_term_entries() {
        let a = q(1, 3);
        assert_eq!(phi_entry_closed(1, 2, &a, 1, 1).unwrap(), q(14, 15));
        assert_eq!(phi_entry_closed(1, 2, &a, 5, 4).unwrap(), q(14, 15));
        let err = phi_entry_closed(1, 2, &q(1, 2), 1, 1).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn two_term_entries_match_direct_sums() {
        for (m, k) in [(1, 2), (2, 3), (2, 4), (3, 5), (4, 6)] {
            let (lo, hi) = a_range(m, k).unwrap();
            for i in 0..=4 {
                let a = &lo + (&hi - &lo) * q(i, 4);
                let b = b_of(m, k, &a);
                for s in 1..=4 * m + 1 {
                    for n in 1..=2 * k {
                        assert_eq!(
                            phi_entry_closed(m, k, &a, s, n).unwrap(),
                            phi_unreduced(m, &a, &b, s, n),
                            "(m,k,a,s,n)=({m},{k},{a},{s},{n})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn direct_differences() {
        let a = q(1, 3);
        assert_eq!(a_sn_direct(1, 2, &a, 0, 1).unwrap(), q(0, 1));
        assert_eq!(a_sn_direct(1, 2, &a, 1, 1).unwrap(), q(2, 3));
        assert_eq!(a_sn_direct(1, 2, &a, 2, 2).unwrap(), q(2, 5));
        assert!(a_sn_direct(1, 2, &a, 1, 3).is_err());
    }

    #[test]
    fn closed_forms_at_the_middle_row() {
        // Row s = m: 2n/b below k/2 and 2am at n = k/2.
        for (m, k) in [(2, 4), (5, 8), (6, 10)] {
            let (lo, hi) = a_range(m, k).unwrap();
            for a in [lo.clone(), (&lo + &hi) / q(2, 1), hi.clone()] {
                let b = b_of(m, k, &a);
                for n in 1..k / 2 {
                    assert_eq!(a_sn_closed(m, k, &a, m, n).unwrap(), q(2, 1) * r(n) / &b);
                }
                assert_eq!(a_sn_closed(m, k, &a, m, k / 2).unwrap(), q(2, 1) * &a * r(m));
            }
        }
    }

    #[test]
    fn closed_forms_refuse_unsupported_cases() {
        let a = q(1, 3);
        assert!(matches!(a_sn_closed(1, 2, &a, 1, 1), Err(Error::NoClosedForm(_))));
        let (lo, _) = a_range(2, 3).unwrap();
        assert!(matches!(a_sn_closed(2, 3, &lo, 1, 1), Err(Error::NoClosedForm(_))));
        let (lo, _) = a_range(7, 10).unwrap();
        assert!(matches!(a_sn_closed(7, 10, &lo, 1, 1), Err(Error::NoClosedForm(_))));
    }

    #[test]
    fn a_matrix_small_case() {
        let a = build_a(1, 2, &q(1, 3)).unwrap();
        let expected = RationalMatrix::from_rows(vec![vec![q(2, 3), q(2, 5)], vec![q(2, 3), q(2, 5)]]).unwrap();
        assert_eq!(a, expected);
        assert_eq!(rank_exact(&a), 1);
    }

    #[test]
    fn a_tilde_small_case() {
        let at = build_a_tilde(2, 3).unwrap();
        let expected = RationalMatrix::from_rows(vec![
            vec![q(1, 2), q(1, 2), q(2, 7)],
            vec![q(4, 7), q(6, 7), q(2, 7)],
            vec![q(1, 2), q(1, 2), q(2, 7)],
        ])
        .unwrap();
        assert_eq!(at, expected);
        assert!(rank_exact(&at) <= 2);
        for n in 1..=3 {
            assert!(a_tilde_sn(2, 3, 4, n).unwrap().is_zero());
            assert!(a_tilde_sn(2, 3, 0, n).unwrap().is_zero());
        }
        let err = build_a_tilde(3, 4).unwrap_err();
        assert_eq!(err.to_string(), "requires gcd(12, 9) = 1, got 3");
    }
}
