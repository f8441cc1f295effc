//! Pass/fail report over the lemma identities for one parameter pair.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rank_exact, Rational};
use crate::obstruction::{
    a_sn_closed, a_sn_direct, a_tilde_sn, alpha, beta, build_a, build_a_tilde, cardinality_floor_sum,
    certify_conj1, certify_conj2, i_sets, phi_entry_closed, s_sets, x_sn, y_of, ConjectureOneParams,
    ConjectureTwoParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    /// Counterexample on failure, reason when skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub conjecture: u8,
    pub m: u32,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Rational>,
    pub checks: Vec<Check>,
    /// `#S` at the right end of the `a` interval, when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_count: Option<usize>,
    pub all_passed: bool,
}

impl LemmaReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "conjecture {} lemma checks for (m, k) = ({}, {})", self.conjecture, self.m, self.k);
        if let Some(a) = &self.a {
            let _ = write!(out, ", a = {a}");
        }
        out.push('\n');
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "  {tag}  {}", c.name);
            if let Some(d) = &c.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
        }
        if let Some(n) = self.s_count {
            let _ = writeln!(out, "#S = {n}");
        }
        out.push_str(if self.all_passed { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn record(&mut self, name: &'static str, outcome: Result<Option<String>>) {
        let (status, detail) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(counterexample)) => (Status::Fail, Some(counterexample)),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        self.checks.push(Check { name, status, detail });
    }

    fn skip(&mut self, name: &'static str, reason: impl Into<String>) {
        self.checks.push(Check {
            name,
            status: Status::Skipped,
            detail: Some(reason.into()),
        });
    }
}

/// First `(s, n)` in the given ranges where `ok` fails, formatted.
fn first_violation(
    s_range: impl IntoIterator<Item = u32> + Clone,
    n_range: impl IntoIterator<Item = u32> + Clone,
    mut ok: impl FnMut(u32, u32) -> Result<Option<String>>,
) -> Result<Option<String>> {
    for s in s_range {
        for n in n_range.clone() {
            if let Some(msg) = ok(s, n)? {
                return Ok(Some(format!("(s, n) = ({s}, {n}): {msg}")));
            }
        }
    }
    Ok(None)
}

fn unequal(lhs: Rational, rhs: Rational) -> Option<String> {
    (lhs != rhs).then(|| format!("{lhs} != {rhs}"))
}

/// Runs every identity that applies to `(m, k)`. For the first family `a`
/// defaults to `1/(2m+1)`.
pub fn lemma_report(conjecture: u8, m: u32, k: u32, a: Option<Rational>) -> Result<LemmaReport> {
    match conjecture {
        1 => report_one(m, k, a),
        2 => {
            if a.is_some() {
                return Err(Error::InvalidParams("--a does not apply to conjecture 2".into()));
            }
            report_two(m, k)
        }
        other => Err(Error::InvalidParams(format!("unknown conjecture {other}"))),
    }
}

fn report_one(m: u32, k: u32, a: Option<Rational>) -> Result<LemmaReport> {
    let params = match a {
        Some(a) => ConjectureOneParams::new(m, k, a)?,
        None => ConjectureOneParams::centered(m, k)?,
    };
    let a = params.a.clone();
    let d = (2 * (2 * m + 1)).gcd(&(2 * k + 1));
    let coprime = d == 1;
    let not_coprime = || format!("gcd({}, {}) = {d}", 2 * (2 * m + 1), 2 * k + 1);
    let mut b = Builder { checks: Vec::new() };

    b.record(
        "boundary rows vanish",
        first_violation(1..=k, [0u32], |n, _| {
            let (top, bottom) = (a_sn_direct(m, k, &a, 0, n)?, a_sn_direct(m, k, &a, 2 * m + 1, n)?);
            Ok((!top.is_zero() || !bottom.is_zero()).then(|| format!("A_0n = {top}, A_(2m+1)n = {bottom}")))
        }),
    );
    b.record(
        "rows reflect with a sign across 4m+2",
        first_violation(1..=2 * m, 1..=k, |s, n| {
            Ok(unequal(a_sn_direct(m, k, &a, s, n)?, -a_sn_direct(m, k, &a, 4 * m + 2 - s, n)?))
        }),
    );
    b.record(
        "middle rows coincide",
        first_violation([m], 1..=k, |s, n| {
            Ok(unequal(a_sn_direct(m, k, &a, s, n)?, a_sn_direct(m, k, &a, s + 1, n)?))
        }),
    );
    b.record("rank of A at most k-1", {
        build_a(m, k, &a).map(|mat| {
            let r = rank_exact(&mat);
            (r + 1 > k as usize).then(|| format!("rank {r}"))
        })
    });

    if coprime {
        let y = y_of(&a, m);
        b.record(
            "offsets lie in (-1, 1) and are nonzero",
            first_violation(1..=4 * m + 1, 1..=2 * k, |s, n| {
                let x = x_sn(m, k, s, n)?;
                let ok = x > -Rational::one() && x < Rational::one() && !x.is_zero();
                Ok((!ok).then(|| format!("X = {x}")))
            })
            .map(|v| v.or_else(|| (!(y.is_positive() && y < Rational::one())).then(|| format!("Y = {y}")))),
        );
        b.record(
            "two-term entries match direct sums",
            first_violation(1..=4 * m + 1, 1..=k, |s, n| {
                let lhs = phi_entry_closed(m, k, &a, s, n)? - phi_entry_closed(m, k, &a, s, 2 * k + 1 - n)?;
                Ok(unequal(lhs, a_sn_direct(m, k, &a, s, n)?))
            }),
        );
    } else {
        b.skip("offsets lie in (-1, 1) and are nonzero", not_coprime());
        b.skip("two-term entries match direct sums", not_coprime());
    }

    let closed_name = "closed forms match direct sums";
    if m == 1 {
        b.skip(closed_name, "m=1 guard");
    } else if k % 2 == 1 {
        b.skip(closed_name, "odd k");
    } else if !coprime {
        b.skip(closed_name, not_coprime());
    } else {
        b.record(
            closed_name,
            first_violation(1..=2 * m, 1..=k, |s, n| {
                Ok(unequal(a_sn_closed(m, k, &a, s, n)?, a_sn_direct(m, k, &a, s, n)?))
            }),
        );
    }

    let mut s_count = None;
    let sets_names = ["boundary index sets", "row sets are disjoint", "#S and #T at the interval ends equal k-m"];
    if k % 2 == 1 || !coprime {
        let reason = if k % 2 == 1 { "odd k".to_string() } else { not_coprime() };
        for name in sets_names {
            b.skip(name, reason.clone());
        }
    } else {
        b.record(
            sets_names[0],
            i_sets(m, k).map(|(i11, i12, i21, i22)| {
                let ok = i11.is_empty() && i12.is_empty() && i22.is_empty() && i21.len() == 1 && i21.contains(&m);
                (!ok).then(|| format!("I11 = {i11:?}, I12 = {i12:?}, I21 = {i21:?}, I22 = {i22:?}"))
            }),
        );
        b.record(
            sets_names[1],
            s_sets(m, k, &a).map(|rep| (!rep.structure_holds()).then(|| format!("{rep:?}"))),
        );
        let counts = (|| -> Result<Option<String>> {
            let at_alpha = s_sets(m, k, &alpha(m, k).recip().expect("alpha > 0"))?;
            let at_beta = s_sets(m, k, &beta(m, k).recip().expect("beta > 0"))?;
            let (s, t) = (at_alpha.s_a().len(), at_beta.t_a().len());
            let formula = cardinality_floor_sum(m, k)?;
            s_count = Some(s);
            let want = (k - m) as usize;
            Ok((s != want || t != want || formula != i64::from(k - m))
                .then(|| format!("#S = {s}, #T = {t}, floor sum = {formula}, k-m = {want}")))
        })();
        b.record(sets_names[2], counts);
    }

    b.record("certificate verifies", certify_conj1(m, k, &a).map(|c| (!c.verified).then(|| "unverified".into())));

    Ok(finish(1, m, k, Some(a), b, s_count))
}

fn report_two(m: u32, k: u32) -> Result<LemmaReport> {
    ConjectureTwoParams::new(m, k)?;
    let mut b = Builder { checks: Vec::new() };
    b.record(
        "boundary rows vanish",
        first_violation(1..=k, [0u32], |n, _| {
            let (top, mid) = (a_tilde_sn(m, k, 0, n)?, a_tilde_sn(m, k, 2 * m, n)?);
            Ok((!top.is_zero() || !mid.is_zero()).then(|| format!("A~_0n = {top}, A~_(2m)n = {mid}")))
        }),
    );
    b.record(
        "rows reflect with a sign across 4m",
        first_violation(1..2 * m, 1..=k, |s, n| {
            Ok(unequal(a_tilde_sn(m, k, s, n)?, -a_tilde_sn(m, k, 4 * m - s, n)?))
        }),
    );
    b.record(
        "rows mirror across m",
        first_violation(1..2 * m, 1..=k, |s, n| {
            Ok(unequal(a_tilde_sn(m, k, s, n)?, a_tilde_sn(m, k, 2 * m - s, n)?))
        }),
    );
    b.record("rank of A~ at most k-1", {
        build_a_tilde(m, k).map(|mat| {
            let r = rank_exact(&mat);
            (r + 1 > k as usize).then(|| format!("rank {r}"))
        })
    });
    b.record("certificate verifies", certify_conj2(m, k).map(|c| (!c.verified).then(|| "unverified".into())));
    Ok(finish(2, m, k, None, b, None))
}

fn finish(conjecture: u8, m: u32, k: u32, a: Option<Rational>, b: Builder, s_count: Option<usize>) -> LemmaReport {
    let all_passed = b.checks.iter().all(|c| c.status != Status::Fail);
    LemmaReport {
        conjecture,
        m,
        k,
        a,
        checks: b.checks,
        s_count,
        all_passed,
    }
}
