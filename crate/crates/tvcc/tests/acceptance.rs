//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible under `cargo test --test acceptance -- --nocapture`).

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvcc::{
    block_input, build_tvece, convert, oracle_check, periodic_check, realize_periodic,
    realize_rational, unblock_output, verify_same_code, BitStream, PeriodicEncoder, Poly,
    RationalPeriodicEncoder, Verdict,
};

fn report(n: usize, desc: &str, pass: bool) {
    println!(
        "criterion {n}: {} - {desc}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {desc}");
}

/// Largest-degree common divisor by exhaustive trial division, for
/// confirming gcd values independently of the Euclid path.
fn trial_division_gcd(a: &Poly, b: &Poly) -> Poly {
    let d = a
        .degree()
        .finite()
        .unwrap()
        .min(b.degree().finite().unwrap());
    let mut best = Poly::one();
    for bits in 1u64..(1u64 << (d + 1)) {
        let coeffs: Vec<u8> = (0..=d).map(|i| ((bits >> i) & 1) as u8).collect();
        let cand = Poly::from_coeffs(&coeffs);
        if cand.divides(a) && cand.divides(b) && cand.degree() > best.degree() {
            best = cand;
        }
    }
    best
}

#[test]
fn criterion_1_classic_golden_check() {
    let e = classic();
    let started = Instant::now();
    let report_out = periodic_check(&e).unwrap();
    let elapsed = started.elapsed();

    let confirmed = trial_division_gcd(&poly("11"), &poly("101"));
    let pass = report_out.verdict == Verdict::Catastrophic
        && report_out.f == poly("11")
        && report_out.f == confirmed
        && elapsed < Duration::from_millis(10);
    report(
        1,
        &format!(
            "classic encoder flagged catastrophic with f=1+D in {:?}",
            elapsed
        ),
        pass,
    );
}

#[test]
fn criterion_2_weight_three_codeword() {
    let r = RationalPeriodicEncoder::new(classic(), poly("11")).unwrap();
    let impulse = BitStream::from_bits(1, &[1]).unwrap();
    let out = r.encode(&impulse, 64).unwrap();
    let pass = out.len() == 64 && out.weight() == 3;
    report(
        2,
        &format!(
            "impulse through [1+D, 1+D^2]/(1+D) has weight {} over 64 epochs",
            out.weight()
        ),
        pass,
    );
}

#[test]
fn criterion_3_blocked_equivalence_sweep() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7E0E);
    let mut pass = true;
    for _ in 0..500 {
        let e = random_periodic(&mut rng, 4, 2, 3, 4);
        let p = e.period();
        let t = build_tvece(&e);
        pass &= t.encoder().k() == e.k() * p;
        pass &= t.encoder().n() == e.n() * p;
        pass &= t.encoder().memory() <= e.memory().div_ceil(p);

        let len = rng.random_range(0..=16 * p);
        let u = random_stream(&mut rng, e.k(), len);
        let padded = u.zero_extended(len.div_ceil(p) * p);
        let serial = e.encode_serial(&padded).unwrap();
        let wide = PeriodicEncoder::from_time_invariant(t.encoder().clone())
            .encode_serial(&block_input(&u, p))
            .unwrap();
        pass &= unblock_output(&wide, p).unwrap() == serial;
        if !pass {
            break;
        }
    }
    let elapsed = started.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    report(
        3,
        &format!("500 blocked equivalents match shape, memory bound, and encoding ({elapsed:?})"),
        pass,
    );
}

/// The criterion-4 sweep, reused by criterion 5: 300 random encoders
/// (p <= 3, k = 1, n <= 3, m <= 4) that are not rank-deficient.
fn verdict_sweep() -> Vec<PeriodicEncoder> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA93E);
    let mut out = Vec::with_capacity(300);
    while out.len() < 300 {
        let e = random_periodic(&mut rng, 3, 1, 3, 4);
        if periodic_check(&e).is_ok() {
            out.push(e);
        }
    }
    out
}

#[test]
fn criterion_4_divisor_test_agrees_with_oracle() {
    let mut disagreements = 0;
    let mut catastrophic = 0;
    for e in verdict_sweep() {
        let graph = realize_periodic(&e).unwrap();
        assert!(graph.state_bits() <= 12, "sweep must stay within the guard");
        let algebraic = periodic_check(&e).unwrap().verdict == Verdict::Catastrophic;
        let oracle = oracle_check(&graph).is_catastrophic();
        if algebraic != oracle {
            disagreements += 1;
        }
        if algebraic {
            catastrophic += 1;
        }
    }
    let pass = disagreements == 0 && catastrophic > 0;
    report(
        4,
        &format!(
            "300-encoder sweep: {disagreements} disagreements, {catastrophic} catastrophic cases"
        ),
        pass,
    );
}

#[test]
fn criterion_5_conversion_soundness() {
    let mut converted_count = 0;
    let mut oracle_failures = 0;
    let mut code_failures = 0;
    for e in verdict_sweep() {
        if periodic_check(&e).unwrap().verdict != Verdict::Catastrophic {
            continue;
        }
        let fixed = convert(&e).unwrap();
        converted_count += 1;
        let graph = realize_rational(&fixed).unwrap();
        if oracle_check(&graph).is_catastrophic() {
            oracle_failures += 1;
        }
        if !verify_same_code(&e, &fixed, 100, 64, 0xC0DE).unwrap() {
            code_failures += 1;
        }
    }
    let pass = converted_count > 0 && oracle_failures == 0 && code_failures == 0;
    report(
        5,
        &format!(
            "{converted_count} conversions: {oracle_failures} oracle failures, {code_failures} same-code failures"
        ),
        pass,
    );
}

#[test]
fn criterion_6_complexity_trend() {
    let started = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_tvcc"))
        .args(["bench", "--m-min", "2", "--m-max", "14", "--machine"])
        .output()
        .expect("bench runs");
    assert!(output.status.success(), "bench exited nonzero");
    let text = String::from_utf8(output.stdout).unwrap();

    let field = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("missing {key} in bench output"))
            .parse()
            .unwrap()
    };
    let ms: Vec<usize> = (2..=14).collect();
    let gcd_ops: Vec<f64> = ms.iter().map(|m| field(&format!("gcd_ops_m{m}"))).collect();
    let edges: Vec<f64> = ms
        .iter()
        .map(|m| field(&format!("oracle_edges_m{m}")))
        .collect();

    // least-squares slope of ln(ops) against ln(m)
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = gcd_ops.iter().map(|&o| o.ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mean_x).powi(2)).sum::<f64>();

    let ratios: Vec<f64> = edges.windows(2).map(|w| w[1] / w[0]).collect();
    let ratios_ok = ratios.iter().all(|r| (1.8..=2.2).contains(r));

    let elapsed = started.elapsed();
    let pass = gcd_ops.iter().all(|&o| o >= 1.0)
        && slope < 1.3
        && ratios_ok
        && elapsed < Duration::from_secs(60);
    report(
        6,
        &format!(
            "divisor-path slope {slope:.3} (log-log, < 1.3), oracle edges double per unit m ({elapsed:?})"
        ),
        pass,
    );
}

#[test]
fn criterion_7_serial_equals_parallel() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E71);
    let mut mismatches = 0;
    for _ in 0..500 {
        let e = random_periodic(&mut rng, 4, 2, 4, 4);
        let len = rng.random_range(0..=64);
        let u = random_stream(&mut rng, e.k(), len);
        if e.encode_serial(&u).unwrap() != e.encode_parallel(&u).unwrap() {
            mismatches += 1;
        }
    }
    report(
        7,
        &format!("500 random serial/parallel encodings, {mismatches} mismatches"),
        mismatches == 0,
    );
}

#[test]
fn criterion_8_negative_controls() {
    let dir = std::env::temp_dir().join(format!("tvcc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // convert on a non-catastrophic encoder must refuse with exit 1
    let clean = dir.join("clean.enc");
    std::fs::write(&clean, "1 1 2\n1 11\n").unwrap();
    let out_path = dir.join("out.enc");
    let refuse = Command::new(env!("CARGO_BIN_EXE_tvcc"))
        .args(["convert"])
        .arg(&clean)
        .arg("-o")
        .arg(&out_path)
        .output()
        .unwrap();
    let refuse_msg = String::from_utf8(refuse.stderr).unwrap();
    let refuse_ok = refuse.status.code() == Some(1)
        && refuse_msg == "error: encoder is not catastrophic; nothing to convert\n";

    // a rank-deficient matrix must error with exit 1, not produce a verdict
    let deficient = dir.join("deficient.enc");
    std::fs::write(&deficient, "1 1 2\n0 0\n").unwrap();
    let rank = Command::new(env!("CARGO_BIN_EXE_tvcc"))
        .args(["check"])
        .arg(&deficient)
        .output()
        .unwrap();
    let rank_msg = String::from_utf8(rank.stderr).unwrap();
    let rank_ok = rank.status.code() == Some(1)
        && rank_msg == "error: rank-deficient matrix: every minor of order 1 is zero\n";

    std::fs::remove_dir_all(&dir).ok();
    report(
        8,
        &format!(
            "convert refusal pinned ({}), rank-deficiency pinned ({})",
            refuse_ok, rank_ok
        ),
        refuse_ok && rank_ok,
    );
}
