//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tvcc::{BitStream, PeriodicEncoder, Poly, PolyMatrix, TimeInvariantEncoder};

pub fn poly(s: &str) -> Poly {
    s.parse().unwrap()
}

pub fn tie(rows: &[&[&str]]) -> TimeInvariantEncoder {
    let g = PolyMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| poly(s)).collect())
            .collect(),
    )
    .unwrap();
    TimeInvariantEncoder::new(g).unwrap()
}

/// The classic catastrophic rate-1/2 encoder G = [1+D, 1+D^2], period 1.
pub fn classic() -> PeriodicEncoder {
    PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]))
}

/// Random polynomial with degree at most `max_deg` (possibly zero).
pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let coeffs: Vec<u8> = (0..=max_deg).map(|_| rng.random_range(0..=1)).collect();
    Poly::from_coeffs(&coeffs)
}

pub fn random_tie(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: usize,
    max_deg: usize,
) -> TimeInvariantEncoder {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| random_poly(rng, max_deg)).collect())
        .collect();
    TimeInvariantEncoder::new(PolyMatrix::from_rows(rows).unwrap()).unwrap()
}

/// Random periodic encoder with period up to `max_p`, rate bounds
/// `k <= max_k`, `n <= max_n` (always k < n), memory at most `max_m`.
pub fn random_periodic(
    rng: &mut ChaCha8Rng,
    max_p: usize,
    max_k: usize,
    max_n: usize,
    max_m: usize,
) -> PeriodicEncoder {
    let p = rng.random_range(1..=max_p);
    let k = rng.random_range(1..=max_k.min(max_n - 1));
    let n = rng.random_range(k + 1..=max_n);
    let m = rng.random_range(0..=max_m);
    let constituents = (0..p).map(|_| random_tie(rng, k, n, m)).collect();
    PeriodicEncoder::new(constituents).unwrap()
}

pub fn random_stream(rng: &mut ChaCha8Rng, width: usize, len: usize) -> BitStream {
    let bits: Vec<u8> = (0..width * len).map(|_| rng.random_range(0..=1)).collect();
    BitStream::from_bits(width, &bits).unwrap()
}
