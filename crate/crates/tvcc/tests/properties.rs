//! Cross-module consistency sweeps: the state graph must reproduce the
//! algebraic encoders exactly, and every witness the oracle emits must
//! replay cleanly.

mod common;

use common::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvcc::{
    oracle_check, periodic_check, realize_periodic, realize_rational, OracleVerdict,
    RationalPeriodicEncoder, Verdict,
};

#[test]
fn graph_walk_reproduces_serial_encoding() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51D3);
    for _ in 0..100 {
        let e = random_periodic(&mut rng, 4, 2, 4, 3);
        let g = realize_periodic(&e).unwrap();
        let len = rng.random_range(0..=48);
        let u = random_stream(&mut rng, e.k(), len);
        assert_eq!(g.simulate(&u).unwrap(), e.encode_serial(&u).unwrap());
    }
}

#[test]
fn graph_walk_reproduces_rational_encoding() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7A7E);
    for _ in 0..100 {
        let base = random_periodic(&mut rng, 3, 2, 4, 3);
        // random causal denominator of degree <= 3
        let den = loop {
            let cand = random_poly(&mut rng, 3);
            if cand.constant_term() {
                break cand;
            }
        };
        let r = RationalPeriodicEncoder::new(base, den).unwrap();
        let g = realize_rational(&r).unwrap();
        let len = rng.random_range(0..=48);
        let u = random_stream(&mut rng, r.k(), len);
        assert_eq!(g.simulate(&u).unwrap(), r.encode(&u, len).unwrap());
    }
}

#[test]
fn every_witness_replays() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let mut witnesses = 0;
    for _ in 0..200 {
        let e = random_periodic(&mut rng, 3, 1, 3, 4);
        let g = realize_periodic(&e).unwrap();
        if let OracleVerdict::Catastrophic(w) = oracle_check(&g) {
            assert!(w.validate(&g), "witness failed replay");
            assert_eq!(w.output_weight(), 0);
            assert!(w.input_weight() > 0);
            assert!(w.len() <= g.phases() * g.num_states());
            witnesses += 1;
        }
    }
    assert!(witnesses > 5, "sweep found too few witnesses ({witnesses})");
}

#[test]
fn divisor_test_and_oracle_agree_on_period_one() {
    // quick exhaustive slice at p=1: all tap pairs of degree <= 2, skipping
    // rank-deficient pairs, must agree between the two routes
    let mut disagreements = 0;
    for a_bits in 0u32..8 {
        for b_bits in 0u32..8 {
            if a_bits == 0 && b_bits == 0 {
                continue;
            }
            let bits = |v: u32| format!("{}{}{}", v & 1, (v >> 1) & 1, (v >> 2) & 1);
            let e =
                tvcc::PeriodicEncoder::from_time_invariant(tie(&[&[&bits(a_bits), &bits(b_bits)]]));
            let algebraic = periodic_check(&e).unwrap().verdict == Verdict::Catastrophic;
            let graph = oracle_check(&realize_periodic(&e).unwrap()).is_catastrophic();
            if algebraic != graph {
                disagreements += 1;
            }
        }
    }
    assert_eq!(disagreements, 0);
}
