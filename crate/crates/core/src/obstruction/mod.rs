//! Exact non-frame certificates for `Q2` on the two obstruction families, and
//! the closed-form machinery behind them.
//!
//! Family 1: `ab = (2k+1)/(2(2m+1))` with `m+1 <= k <= 2m` and `a` in
//! [`a_range`]. Family 2: `a = 1/(2m)`, `b = (2k+1)/2` with `k > m`,
//! `2k+1 < 4m` and `gcd(4m, 2k+1) = 1`.

mod index_sets;
mod lemmas;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bspline::{bspline, PiecewisePolynomial};
use crate::error::{Error, Result};
use crate::exact::{nullspace_exact, Rational, RationalMatrix};
use crate::gabor::{lattice_params, phi_matrix_exact};

pub use index_sets::{
    alpha, beta, cardinality_floor_sum, i_sets, phi_weight, s_sets, s_sets_by_inequality, IndexSetReport,
};
pub use lemmas::{
    a_range, a_sn_closed, a_sn_direct, a_tilde_sn, b_of, build_a, build_a_tilde, phi_entry_closed, x_sn,
    x_sn_tilde, y_of,
};

/// The hat function `Q2`, built once.
pub fn hat() -> &'static PiecewisePolynomial {
    static Q2: OnceLock<PiecewisePolynomial> = OnceLock::new();
    Q2.get_or_init(|| bspline(2).expect("order 2 is valid"))
}

pub(crate) fn check_pair(m: u32, k: u32) -> Result<()> {
    if m == 0 || k < m + 1 || k > 2 * m {
        return Err(Error::InvalidParams(format!(
            "(m, k) = ({m}, {k}) violates m >= 1 and m+1 <= k <= 2m"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureOneParams {
    pub m: u32,
    pub k: u32,
    pub a: Rational,
}

impl ConjectureOneParams {
    pub fn new(m: u32, k: u32, a: Rational) -> Result<Self> {
        lemmas::check_a(m, k, &a)?;
        Ok(ConjectureOneParams { m, k, a })
    }

    /// Center of the family, `a0 = 1/(2m+1)`.
    pub fn centered(m: u32, k: u32) -> Result<Self> {
        Self::new(m, k, Rational::frac(1, 2 * i64::from(m) + 1))
    }

    pub fn b(&self) -> Rational {
        b_of(self.m, self.k, &self.a)
    }

    /// `(m1, k1)` with `ab = (2k1+1)/(2(2m1+1))` in lowest terms.
    pub fn reduced(&self) -> (u32, u32) {
        let d = (2 * self.k + 1).gcd(&(2 * (2 * self.m + 1)));
        ((((2 * self.m + 1) / d) - 1) / 2, (((2 * self.k + 1) / d) - 1) / 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureTwoParams {
    pub m: u32,
    pub k: u32,
}

impl ConjectureTwoParams {
    pub fn new(m: u32, k: u32) -> Result<Self> {
        if m == 0 || k <= m || 2 * k + 1 >= 4 * m {
            return Err(Error::InvalidParams(format!(
                "(m, k) = ({m}, {k}) violates k > m and 2k+1 < 4m"
            )));
        }
        let g = (4 * m).gcd(&(2 * k + 1));
        if g != 1 {
            return Err(Error::NotCoprime {
                p: u64::from(2 * k + 1),
                q: u64::from(4 * m),
                gcd: u64::from(g),
            });
        }
        Ok(ConjectureTwoParams { m, k })
    }

    pub fn a(&self) -> Rational {
        Rational::frac(1, 2 * i64::from(self.m))
    }

    pub fn b(&self) -> Rational {
        Rational::frac(2 * i64::from(self.k) + 1, 2)
    }
}

/// A nonzero integer vector `gamma` with `Φ(0,0)·gamma = 0`, together with the
/// matrix it annihilates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub conjecture: u8,
    pub m: u32,
    pub k: u32,
    pub a: Rational,
    pub b: Rational,
    pub p: u64,
    pub q: u64,
    pub rank: usize,
    #[serde(with = "int_vec")]
    pub gamma: Vec<BigInt>,
    pub matrix: RationalMatrix,
    pub verified: bool,
}

mod int_vec {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(v.len()))?;
        for x in v {
            let x = x
                .to_i64()
                .ok_or_else(|| serde::ser::Error::custom(format!("{x} does not fit in 64 bits")))?;
            seq.serialize_element(&x)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<i64>::deserialize(deserializer)?.into_iter().map(BigInt::from).collect())
    }
}

fn certify(conjecture: u8, m: u32, k: u32, a: Rational, b: Rational) -> Result<ObstructionCertificate> {
    let params = lattice_params(a, b)?;
    let matrix = phi_matrix_exact(hat(), &params);
    let null = nullspace_exact(&matrix);
    let Some(gamma) = null.basis.into_iter().next() else {
        return Err(Error::CertificateFailed {
            rank: null.rank,
            matrix: Box::new(matrix),
        });
    };
    let mut cert = ObstructionCertificate {
        conjecture,
        m,
        k,
        a: params.a,
        b: params.b,
        p: params.p,
        q: params.q,
        rank: null.rank,
        gamma,
        matrix,
        verified: false,
    };
    cert.verified = verify_certificate(&cert);
    if !cert.verified {
        return Err(Error::CertificateFailed {
            rank: cert.rank,
            matrix: Box::new(cert.matrix),
        });
    }
    Ok(cert)
}

/// Certificate on the first family. A non-reduced `ab` is handled by building
/// `Φ` for the reduced `p/q`.
pub fn certify_conj1(m: u32, k: u32, a: &Rational) -> Result<ObstructionCertificate> {
    let params = ConjectureOneParams::new(m, k, a.clone())?;
    let b = params.b();
    let (m1, k1) = params.reduced();
    if (m1, k1) != (m, k) {
        log::debug!("(m, k) = ({m}, {k}) reduces to ({m1}, {k1})");
    }
    certify(1, m, k, params.a, b)
}

/// Certificate on the second family.
pub fn certify_conj2(m: u32, k: u32) -> Result<ObstructionCertificate> {
    let params = ConjectureTwoParams::new(m, k)?;
    certify(2, m, k, params.a(), params.b())
}

/// Rebuilds `Φ(0,0)` from `a` and `b`, checks it against the stored matrix, and
/// re-multiplies. True iff `gamma` is nonzero and annihilated exactly.
pub fn verify_certificate(cert: &ObstructionCertificate) -> bool {
    let Ok(params) = lattice_params(cert.a.clone(), cert.b.clone()) else {
        return false;
    };
    if (params.p, params.q) != (cert.p, cert.q) || cert.gamma.len() as u64 != cert.p {
        return false;
    }
    let phi = phi_matrix_exact(hat(), &params);
    if phi != cert.matrix {
        return false;
    }
    if cert.gamma.iter().all(BigInt::is_zero) {
        return false;
    }
    phi.mul_int_vec(&cert.gamma).iter().all(Rational::is_zero)
}

/// Entries of `gamma` as machine integers, when they fit.
pub fn gamma_i64(cert: &ObstructionCertificate) -> Option<Vec<i64>> {
    cert.gamma.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn first_family_small_instance() {
        let cert = certify_conj1(1, 2, &q(1, 3)).unwrap();
        assert!(cert.verified);
        assert_eq!((cert.p, cert.q, cert.rank), (5, 6, 4));
        assert_eq!(gamma_i64(&cert).unwrap(), vec![0, 3, -5, 5, -3]);
        assert_eq!(cert.b, q(5, 2));
    }

    #[test]
    fn first_family_range_ends_and_centers() {
        let (lo, hi) = a_range(1, 2).unwrap();
        for a in [lo, hi] {
            let cert = certify_conj1(1, 2, &a).unwrap();
            assert!(cert.verified && cert.rank <= 4);
        }
        let cert = certify_conj1(2, 3, &q(1, 5)).unwrap();
        assert!(cert.verified && cert.rank < 7);
        // 5/13 is past the right end 5/14.
        assert!(certify_conj1(1, 2, &q(5, 13)).is_err());
    }

    #[test]
    fn non_coprime_instance_is_reduced() {
        let params = ConjectureOneParams::centered(7, 10).unwrap();
        assert_eq!(params.reduced(), (2, 3));
        let cert = certify_conj1(7, 10, &params.a).unwrap();
        assert_eq!((cert.p, cert.q), (7, 10));
        assert!(cert.verified);
    }

    #[test]
    fn second_family() {
        let cert = certify_conj2(2, 3).unwrap();
        assert_eq!((cert.p, cert.q), (7, 8));
        assert!(cert.verified && cert.rank <= 6);
        let cert = certify_conj2(3, 5).unwrap();
        assert_eq!((cert.a.clone(), cert.b.clone()), (q(1, 6), q(11, 2)));
        assert!(cert.verified);
        let err = certify_conj2(3, 4).unwrap_err();
        assert!(matches!(err, Error::NotCoprime { gcd: 3, .. }));
    }

    #[test]
    fn verification_rejects_tampering() {
        let cert = certify_conj1(1, 2, &q(1, 3)).unwrap();
        assert!(verify_certificate(&cert));
        let mut bumped = cert.clone();
        bumped.gamma[1] += 1;
        assert!(!verify_certificate(&bumped));
        let mut zero = cert.clone();
        zero.gamma.iter_mut().for_each(|g| *g = BigInt::zero());
        assert!(!verify_certificate(&zero));
        let mut other = cert.clone();
        other.matrix.set(0, 0, q(0, 1));
        assert!(!verify_certificate(&other));
        let mut short = cert;
        short.gamma.pop();
        assert!(!verify_certificate(&short));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = certify_conj1(1, 2, &q(1, 3)).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["gamma"], serde_json::json!([0, 3, -5, 5, -3]));
        assert_eq!(json["a"], "1/3");
        assert_eq!(json["b"], "5/2");
        assert_eq!(json["conjecture"], 1);
        let back: ObstructionCertificate = serde_json::from_value(json).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&back));
    }
}
