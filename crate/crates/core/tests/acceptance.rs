//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Criterion 10 asks for literal equality of `Φ(0,0)` and `Θ(0,0)ᵀ`. That
//! equality does not hold, and the line reports it as a known failure. Every
//! other failure makes the process exit nonzero.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gfl::bspline::bspline;
use gfl::exact::{rank_exact, Rational};
use gfl::gabor::{
    lattice_params, numerical_rank, phi_matrix_exact, theta_matrix_exact, zz_matrix, EvaluationPoint, LatticeParams,
};
use gfl::obstruction::{
    a_range, a_sn_closed, a_sn_direct, alpha, build_a, build_a_tilde, cardinality_floor_sum, certify_conj1,
    certify_conj2, hat, i_sets, s_sets, verify_certificate, ConjectureTwoParams,
};
use gfl::scanner::{conj2_b_interval, grid_min_sigma, scan_point, sweep_hyperbola_conj2, ScanConfig, Verdict};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// `(m, k, a)` for `1 <= m <= 6`, `m+1 <= k <= 2m`, nine evenly spaced `a`.
fn family_one_sweep() -> Vec<(u32, u32, Rational)> {
    let mut out = Vec::new();
    for m in 1..=6u32 {
        for k in m + 1..=2 * m {
            let (lo, hi) = a_range(m, k).unwrap();
            for i in 0..9 {
                out.push((m, k, &lo + (&hi - &lo) * q(i, 8)));
            }
        }
    }
    out
}

fn family_two_pairs() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 2..=8u32 {
        for k in m + 1.. {
            if 2 * k + 1 >= 4 * m {
                break;
            }
            if ConjectureTwoParams::new(m, k).is_ok() {
                out.push((m, k));
            }
        }
    }
    out
}

fn coprime_one(m: u32, k: u32) -> bool {
    (2 * (2 * m + 1)).gcd(&(2 * k + 1)) == 1
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_gfl"))
        .args(["certify", "--conjecture", "1", "--m", "1", "--k", "2", "--a", "1/3"])
        .output()
        .expect("run gfl");
    let elapsed = start.elapsed();
    if !output.status.success() {
        return outcome(false, format!("exit status {}", output.status));
    }
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).expect("certificate json");
    let gamma: Vec<i64> = json["gamma"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    let reference = [0i64, -3, 5, -5, 3];
    // Proportional: every 2x2 minor of (gamma, reference) vanishes.
    let proportional = gamma.iter().any(|&g| g != 0)
        && (0..5).all(|i| (0..5).all(|j| gamma[i] * reference[j] == gamma[j] * reference[i]));
    let rank = json["rank"].as_u64().unwrap();
    let verified = json["verified"].as_bool().unwrap();
    let pass = verified && rank == 4 && json["p"] == 5 && proportional && elapsed < Duration::from_secs(1);
    outcome(pass, format!("rank {rank} < 5, gamma {gamma:?}, verified {verified}, {}", secs(elapsed)))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sweep = family_one_sweep();
    let mut failures = Vec::new();
    for (m, k, a) in &sweep {
        match certify_conj1(*m, *k, a) {
            Ok(c) if c.verified && c.rank < c.p as usize && verify_certificate(&c) => {}
            Ok(c) => failures.push(format!("({m},{k},{a}) rank {}", c.rank)),
            Err(e) => failures.push(format!("({m},{k},{a}) {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(60),
        format!("{} certificates, {} failures {:?}, {}", sweep.len(), failures.len(), failures, secs(elapsed)),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let pairs = family_two_pairs();
    let mut failures = Vec::new();
    for &(m, k) in &pairs {
        match certify_conj2(m, k) {
            Ok(c) if c.verified && c.rank < (2 * k + 1) as usize && verify_certificate(&c) => {}
            Ok(c) => failures.push(format!("({m},{k}) rank {}", c.rank)),
            Err(e) => failures.push(format!("({m},{k}) {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!("{} pairs, {} failures {:?}, {}", pairs.len(), failures.len(), failures, secs(elapsed)),
    )
}

fn criterion_4() -> Outcome {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for (m, k, a) in family_one_sweep() {
        let d = |s, n| a_sn_direct(m, k, &a, s, n).unwrap();
        for n in 1..=k {
            checked += 3;
            if !d(0, n).is_zero() || !d(2 * m + 1, n).is_zero() {
                violations.push(format!("boundary ({m},{k},{a},n={n})"));
            }
            if (1..=2 * m).any(|s| d(s, n) != -d(4 * m + 2 - s, n)) {
                violations.push(format!("reflection ({m},{k},{a},n={n})"));
            }
            if d(m, n) != d(m + 1, n) {
                violations.push(format!("middle ({m},{k},{a},n={n})"));
            }
        }
    }
    outcome(violations.is_empty(), format!("{checked} identity groups, {} violations {violations:?}", violations.len()))
}

fn criterion_5() -> Outcome {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let mut excluded = BTreeSet::new();
    for (m, k, a) in family_one_sweep() {
        if k % 2 == 1 || m < 2 {
            continue;
        }
        if !coprime_one(m, k) {
            excluded.insert((m, k));
            continue;
        }
        for s in 1..=2 * m {
            for n in 1..=k {
                checked += 1;
                let direct = a_sn_direct(m, k, &a, s, n).unwrap();
                match a_sn_closed(m, k, &a, s, n) {
                    Ok(v) if v == direct => {}
                    Ok(v) => violations.push(format!("({m},{k},{a},{s},{n}) {v} != {direct}")),
                    Err(e) => violations.push(format!("({m},{k},{a},{s},{n}) {e}")),
                }
            }
        }
    }
    outcome(
        violations.is_empty() && excluded.is_empty(),
        format!("{checked} entries, {} violations {violations:?}, non-coprime pairs {excluded:?}", violations.len()),
    )
}

fn criterion_6() -> Outcome {
    let mut details = Vec::new();
    let mut excluded = Vec::new();
    let mut pass = true;
    let mut checked = 0;
    for m in 1..=10u32 {
        for k in (m + 1..=2 * m).filter(|k| k % 2 == 0) {
            let a = alpha(m, k).recip().unwrap();
            let enumerated = s_sets(m, k, &a).unwrap().s_a().len() as i64;
            let formula = cardinality_floor_sum(m, k).unwrap();
            let want = i64::from(k - m);
            if !coprime_one(m, k) {
                excluded.push(format!("({m},{k}): enum {enumerated}, floor sum {formula}, k-m {want}"));
                continue;
            }
            checked += 1;
            if enumerated != want || formula != want {
                pass = false;
                details.push(format!("({m},{k}): enum {enumerated}, floor sum {formula}, k-m {want}"));
            }
        }
    }
    let spot = cardinality_floor_sum(5, 8).unwrap();
    let spot_enum = s_sets(5, 8, &alpha(5, 8).recip().unwrap()).unwrap().s_a().len();
    pass &= spot == 3 && spot_enum == 3;
    outcome(
        pass,
        format!(
            "{checked} coprime pairs agree with k-m, (5,8) -> {spot}/{spot_enum}, mismatches {details:?}; \
             outside the gcd(2(2m+1),2k+1)=1 hypothesis: {excluded:?}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut violations = Vec::new();
    let mut excluded = Vec::new();
    let mut checked = 0;
    for m in 1..=20u32 {
        for k in (m + 1..=2 * m).filter(|k| k % 2 == 0) {
            let (i11, i12, i21, i22) = i_sets(m, k).unwrap();
            let ok = i11.is_empty() && i12.is_empty() && i22.is_empty() && i21 == BTreeSet::from([m]);
            let shown = format!("({m},{k}): {i11:?} {i12:?} {i21:?} {i22:?}");
            if !coprime_one(m, k) {
                if !ok {
                    excluded.push(shown);
                }
                continue;
            }
            checked += 1;
            if !ok {
                violations.push(shown);
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{checked} coprime pairs, {} violations {violations:?}; non-coprime pairs that differ: {excluded:?}",
            violations.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for (m, k, a) in family_one_sweep() {
        count += 1;
        let r = rank_exact(&build_a(m, k, &a).unwrap());
        if r > (k - 1) as usize {
            bad.push(format!("A ({m},{k},{a}) rank {r}"));
        }
    }
    for (m, k) in family_two_pairs() {
        count += 1;
        let r = rank_exact(&build_a_tilde(m, k).unwrap());
        if r > (k - 1) as usize {
            bad.push(format!("A~ ({m},{k}) rank {r}"));
        }
    }
    outcome(bad.is_empty(), format!("{count} matrices, {} above k-1 {bad:?}", bad.len()))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let params = lattice_params(q(1, 2), q(3, 2)).unwrap();
    let rec = scan_point(hat(), Some(2), &params, 64, &ScanConfig::default());
    outcome(
        rec.verdict == Verdict::NoObstructionFound && rec.min_sigma > 1e-6 && !rec.borderline,
        format!(
            "verdict {}, min_sigma {:.6} at (x, t) = ({}, {}), {}",
            rec.verdict,
            rec.min_sigma,
            rec.argmin_x,
            rec.argmin_t,
            secs(start.elapsed())
        ),
    )
}

/// 50 parameter sets: half generic lattices with small denominators, half
/// drawn from the two obstruction families so that rank drops occur.
fn random_parameter_sets() -> Vec<LatticeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    while out.len() < 50 {
        let params = match out.len() % 4 {
            0 | 1 => {
                let qd = rng.gen_range(2..=12i64);
                let p = rng.gen_range(1..=qd);
                if p.gcd(&qd) != 1 {
                    continue;
                }
                let a = q(rng.gen_range(1..=12), rng.gen_range(2..=13));
                lattice_params(a.clone(), q(p, qd) / a).unwrap()
            }
            2 => {
                let m = rng.gen_range(1..=4u32);
                let k = rng.gen_range(m + 1..=2 * m);
                let (lo, hi) = a_range(m, k).unwrap();
                let a = &lo + (&hi - &lo) * q(rng.gen_range(0..=6), 6);
                let b = gfl::obstruction::b_of(m, k, &a);
                lattice_params(a, b).unwrap()
            }
            _ => {
                let (m, k) = family_two_pairs()[rng.gen_range(0..4)];
                let c = ConjectureTwoParams::new(m, k).unwrap();
                lattice_params(c.a(), c.b()).unwrap()
            }
        };
        out.push(params);
    }
    out
}

/// Returns the outcome and whether the failure is the documented one.
fn criterion_10() -> (Outcome, bool) {
    let sets = random_parameter_sets();
    let mut literal_equal = 0;
    let mut reflected_equal = 0;
    let mut rank_agree = 0;
    let mut rank_mismatch = Vec::new();
    let mut deficient = 0;
    for lp in &sets {
        let phi = phi_matrix_exact(hat(), lp);
        let theta = theta_matrix_exact(hat(), lp);
        if phi == theta.transpose() {
            literal_equal += 1;
        }
        let qn = lp.q as usize;
        let reflected =
            (0..qn).all(|s| (0..lp.p as usize).all(|n| phi.get(s, n) == theta.get(n, (qn - s) % qn)));
        if reflected {
            reflected_equal += 1;
        }
        let exact = rank_exact(&phi);
        if exact < lp.p as usize {
            deficient += 1;
        }
        let numeric = numerical_rank(&zz_matrix(hat(), lp, EvaluationPoint::ORIGIN));
        if numeric == exact {
            rank_agree += 1;
        } else {
            rank_mismatch.push(format!("({}, {}) exact {exact} numeric {numeric}", lp.a, lp.b));
        }
    }
    let n = sets.len();
    let literal_ok = literal_equal == n;
    let rest_ok = reflected_equal == n && rank_agree == n;
    let detail = format!(
        "Phi = Theta^T exactly on {literal_equal}/{n}; Phi_(s,n) = Theta_(n,(q-s) mod q) on {reflected_equal}/{n}; \
         numerical rank of Psi(0,0) matches exact rank of Phi(0,0) on {rank_agree}/{n} \
         ({deficient} rank-deficient) {rank_mismatch:?}"
    );
    // The literal transpose identity is false as stated; only that part may fail.
    (outcome(literal_ok && rest_ok, detail), !literal_ok && rest_ok)
}

fn criterion_11() -> Outcome {
    let mut problems = Vec::new();
    for n in 1..=5u32 {
        let g = bspline(n).unwrap();
        if g.integral() != Rational::one() {
            problems.push(format!("Q{n} mass {}", g.integral()));
        }
        let reach = i64::from(n) + 2;
        for num in -60..=60 {
            let x = q(num, 17);
            if g.eval_exact(&x) != g.eval_exact(&-x.clone()) {
                problems.push(format!("Q{n} symmetry at {x}"));
            }
            let base = x.floor();
            let total: Rational = (-reach..=reach)
                .map(|j| g.eval_exact(&(&x - Rational::from(base.clone() + j))))
                .sum();
            if total != Rational::one() {
                problems.push(format!("Q{n} partition at {x}: {total}"));
            }
        }
    }
    let peak = bspline(3).unwrap().eval_exact(&Rational::zero());
    if peak != q(3, 4) {
        problems.push(format!("Q3(0) = {peak}"));
    }
    outcome(problems.is_empty(), format!("n = 1..5 on 121 points each, Q3(0) = {peak}, problems {problems:?}"))
}

/// Records the conjecture-2 hyperbola probe. Informational only.
fn hyperbola_probe() -> String {
    let config = ScanConfig::default();
    let recs = sweep_hyperbola_conj2(2, 3, 9, 16, &config).unwrap();
    let inside_max = recs.iter().map(|r| r.min_sigma).fold(0.0, f64::max);
    let center = recs.iter().find(|r| r.verdict == Verdict::CertifiedNonframe).map(|r| r.b.to_string());
    let (lo, hi) = conj2_b_interval(2, 3).unwrap();
    let half = (&hi - &lo) / q(2, 1);
    let mid = (&lo + &hi) / q(2, 1);
    let outside: Vec<String> = [&mid - &half * q(11, 10), &mid + &half * q(11, 10)]
        .into_iter()
        .map(|b| {
            let lp = lattice_params(q(7, 8) / &b, b.clone()).unwrap();
            format!("b = {b}: {:.3e}", grid_min_sigma(hat(), &lp, 16).0)
        })
        .collect();
    format!(
        "(m, k) = (2, 3), 9 samples on b in [{lo}, {hi}], grid 16: max min_sigma {inside_max:.3e}, \
         certified center {center:?}; 10% outside: {outside:?}"
    )
}

fn main() {
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> (Outcome, bool)>)> = vec![
        (1, "first-family instance certificate", Box::new(|| (criterion_1(), false))),
        (2, "first-family certificate sweep", Box::new(|| (criterion_2(), false))),
        (3, "second-family certificate sweep", Box::new(|| (criterion_3(), false))),
        (4, "boundary, reflection and middle-row identities", Box::new(|| (criterion_4(), false))),
        (5, "closed forms equal direct sums", Box::new(|| (criterion_5(), false))),
        (6, "cardinality identity", Box::new(|| (criterion_6(), false))),
        (7, "boundary index sets", Box::new(|| (criterion_7(), false))),
        (8, "rank bounds", Box::new(|| (criterion_8(), false))),
        (9, "positive control", Box::new(|| (criterion_9(), false))),
        (10, "cross-representation consistency", Box::new(criterion_10)),
        (11, "B-spline properties", Box::new(|| (criterion_11(), false))),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let (result, known) = run();
        let tag = match (result.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("[{tag}] criterion {id:>2} {name}: {}", result.detail);
    }
    println!("[INFO] second-family hyperbola probe: {}", hyperbola_probe());
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
