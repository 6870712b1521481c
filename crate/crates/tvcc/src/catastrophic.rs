//! Deciding whether an encoder is catastrophic, and repairing it when it is.
//!
//! A catastrophic encoder maps some infinite-weight input to a finite-weight
//! codeword, so a handful of channel errors can corrupt an unbounded stretch
//! of decoded data. For a time-invariant encoder the divisor test decides
//! this: the encoder is non-catastrophic exactly when the gcd of the
//! k-by-k minors of its transfer matrix is a pure delay `D^l`. The periodic
//! check reduces the time-varying case to that test through the blocked
//! equivalent encoder, and the conversion divides the constituent matrices
//! by the offending divisor, inflated to the period's time scale.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::encoder::{
    power_series_quotient, BitStream, EncoderError, PeriodicEncoder, RationalPeriodicEncoder,
    TimeInvariantEncoder,
};
use crate::gf2poly::Poly;
use crate::polymatrix::{MatrixError, PolyMatrix};
use crate::tvece::build_tvece;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatastrophicError {
    #[error("encoder is not catastrophic; nothing to convert")]
    NotCatastrophic,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Catastrophic,
    NonCatastrophic,
}

/// Outcome of the divisor test.
///
/// `f` is the gcd of the relevant minors, split as `f = D^delay_l · g` with
/// `g(0) = 1`. A pure-delay gcd is harmless, so the verdict only looks at
/// `g`: the encoder is non-catastrophic exactly when `g = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatastrophicReport {
    pub verdict: Verdict,
    /// Gcd of all minors of the tested order.
    pub f: Poly,
    /// Exponent of the pure-delay factor of `f`.
    pub delay_l: usize,
    /// `f` with the delay stripped; `g(0) = 1`.
    pub g: Poly,
}

impl CatastrophicReport {
    fn from_minor_gcd(f: Poly) -> Self {
        let (delay_l, g) = f.split_delay().expect("minor gcd is nonzero");
        let verdict = if g.is_one() {
            Verdict::NonCatastrophic
        } else {
            Verdict::Catastrophic
        };
        CatastrophicReport {
            verdict,
            f,
            delay_l,
            g,
        }
    }
}

/// The divisor test for a time-invariant encoder: non-catastrophic if and
/// only if the gcd of all k-by-k minors of the transfer matrix is a pure
/// delay.
///
/// A matrix whose minors are all zero has rank below k and does not define
/// an encoder of the stated rate; that surfaces as
/// [`MatrixError::RankDeficient`] rather than a verdict.
pub fn massey_sain_check(
    e: &TimeInvariantEncoder,
) -> Result<CatastrophicReport, CatastrophicError> {
    let f = e.matrix().minor_gcd(e.k())?;
    Ok(CatastrophicReport::from_minor_gcd(f))
}

/// The divisor test for a periodic encoder: build the blocked equivalent
/// encoder and test it at minor order k·p. The two encoders define the same
/// input-output map, so the verdict transfers.
pub fn periodic_check(e: &PeriodicEncoder) -> Result<CatastrophicReport, CatastrophicError> {
    massey_sain_check(build_tvece(e).encoder())
}

/// Convert a catastrophic periodic encoder into a non-catastrophic one by
/// dividing every constituent matrix by `g(D^p)`, where `g` is the
/// delay-stripped minor gcd of the blocked equivalent encoder.
///
/// The pure-delay part `D^l` of the gcd is deliberately not divided out:
/// `1/D` is not realizable by a causal circuit, and a delay factor carries
/// no catastrophe. When `g(D^p)` divides every entry exactly the quotient is
/// taken entry-wise and the result stays feedforward (denominator 1);
/// otherwise the constituents are returned unchanged over the shared
/// denominator `g(D^p)`.
///
/// Refuses a non-catastrophic input: converting it would be a silent no-op.
pub fn convert(e: &PeriodicEncoder) -> Result<RationalPeriodicEncoder, CatastrophicError> {
    let report = periodic_check(e)?;
    if report.verdict == Verdict::NonCatastrophic {
        return Err(CatastrophicError::NotCatastrophic);
    }
    let divisor = report.g.inflate(e.period());

    let exact = e
        .constituents()
        .iter()
        .all(|c| c.matrix().entries().all(|entry| divisor.divides(entry)));
    if exact {
        let constituents = e
            .constituents()
            .iter()
            .map(|c| {
                let g = c.matrix();
                let rows = (0..g.rows())
                    .map(|r| {
                        (0..g.cols())
                            .map(|col| {
                                g.get(r, col)
                                    .divmod(&divisor)
                                    .expect("divisor is nonzero")
                                    .0
                            })
                            .collect()
                    })
                    .collect();
                TimeInvariantEncoder::new(PolyMatrix::from_rows(rows).expect("shape kept"))
                    .expect("rate kept")
            })
            .collect();
        let base = PeriodicEncoder::new(constituents).expect("period kept");
        Ok(RationalPeriodicEncoder::new(base, Poly::one()).expect("den 1 is causal"))
    } else {
        Ok(RationalPeriodicEncoder::new(e.clone(), divisor)
            .expect("g(0) = 1 after delay stripping"))
    }
}

/// Check, on random inputs, that the converted encoder emits codewords of
/// the original with the corresponding divided input.
///
/// For each trial input `u` of `len` epochs, the converted output on `u`
/// must equal the original's output on the power-series quotient
/// `u / g(D^p)`, where `g` is recomputed from the original's own report (so
/// a corrupted conversion fails the comparison rather than being taken at
/// its word). One-directional containment suffices: division by a
/// unit-constant-term polynomial permutes the full input space, so every
/// original codeword is also reachable by the converted encoder.
pub fn verify_same_code(
    original: &PeriodicEncoder,
    converted: &RationalPeriodicEncoder,
    trials: usize,
    len: usize,
    seed: u64,
) -> Result<bool, CatastrophicError> {
    if original.k() != converted.k() || original.n() != converted.n() {
        return Err(EncoderError::StreamShapeMismatch.into());
    }
    let report = periodic_check(original)?;
    let divisor = match report.verdict {
        Verdict::Catastrophic => report.g.inflate(original.period()),
        Verdict::NonCatastrophic => Poly::one(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = original.k();
    for _ in 0..trials {
        let bits: Vec<u8> = (0..len * k).map(|_| rng.random_range(0..=1u8)).collect();
        let u = BitStream::from_bits(k, &bits).expect("length by construction");
        let converted_out = converted.encode(&u, len)?;
        let q = power_series_quotient(&u, &divisor, len + original.memory())?;
        let original_out = original.encode_serial(&q)?.truncated(len);
        if converted_out != original_out {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymatrix::MatrixError;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn tie(rows: &[&[&str]]) -> TimeInvariantEncoder {
        let g = PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| p(s)).collect())
                .collect(),
        )
        .unwrap();
        TimeInvariantEncoder::new(g).unwrap()
    }

    #[test]
    fn divisor_test_on_classic_example() {
        let report = massey_sain_check(&tie(&[&["11", "101"]])).unwrap();
        assert_eq!(report.verdict, Verdict::Catastrophic);
        assert_eq!(report.f, p("11"));
        assert_eq!(report.delay_l, 0);
        assert_eq!(report.g, p("11"));
    }

    #[test]
    fn unit_minor_means_clean() {
        let report = massey_sain_check(&tie(&[&["1", "11"]])).unwrap();
        assert_eq!(report.verdict, Verdict::NonCatastrophic);
        assert_eq!(report.f, Poly::one());
        assert_eq!(report.delay_l, 0);
    }

    #[test]
    fn pure_delay_is_stripped_before_the_verdict() {
        // D · [1+D, 1+D^2]: the gcd picks up the delay factor, which must
        // not flip the verdict and must be reported separately.
        let report = massey_sain_check(&tie(&[&["011", "0101"]])).unwrap();
        assert_eq!(report.verdict, Verdict::Catastrophic);
        assert_eq!(report.f, p("011"));
        assert_eq!(report.delay_l, 1);
        assert_eq!(report.g, p("11"));

        // a delayed clean encoder stays clean
        let clean = massey_sain_check(&tie(&[&["01", "011"]])).unwrap();
        assert_eq!(clean.verdict, Verdict::NonCatastrophic);
        assert_eq!(clean.delay_l, 1);
        assert_eq!(clean.g, Poly::one());
    }

    #[test]
    fn rank_deficient_is_propagated() {
        let zero_row = tie(&[&["0", "0"]]);
        assert_eq!(
            massey_sain_check(&zero_row),
            Err(CatastrophicError::Matrix(MatrixError::RankDeficient {
                order: 1
            }))
        );
    }

    #[test]
    fn periodic_check_examples() {
        // both constituents equal: encodes identically to the classic
        // time-invariant catastrophic encoder
        let same = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]); 2]).unwrap();
        let report = periodic_check(&same).unwrap();
        assert_eq!(report.verdict, Verdict::Catastrophic);
        assert_eq!(report.g, p("11"));

        let mixed =
            PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        let report = periodic_check(&mixed).unwrap();
        assert_eq!(report.verdict, Verdict::NonCatastrophic);
        assert_eq!(report.f, Poly::one());

        // degenerate period: identical to the direct test
        let single = PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]));
        assert_eq!(
            periodic_check(&single).unwrap(),
            massey_sain_check(single.constituent(0)).unwrap()
        );
    }

    #[test]
    fn convert_divides_exactly_when_possible() {
        let e = PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]));
        let converted = convert(&e).unwrap();
        assert_eq!(converted.den(), &Poly::one());
        let base = converted.base().constituent(0);
        assert_eq!(base.matrix().get(0, 0), &p("1"));
        assert_eq!(base.matrix().get(0, 1), &p("11"));
        assert_eq!(
            massey_sain_check(base).unwrap().verdict,
            Verdict::NonCatastrophic
        );
    }

    #[test]
    fn convert_falls_back_to_shared_denominator() {
        let e = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]); 2]).unwrap();
        let converted = convert(&e).unwrap();
        // numerators unchanged, denominator is g inflated to the period
        assert_eq!(converted.base(), &e);
        let g = periodic_check(&e).unwrap().g;
        assert_eq!(converted.den(), &g.inflate(2));
    }

    #[test]
    fn convert_refuses_clean_encoders() {
        let e = PeriodicEncoder::from_time_invariant(tie(&[&["1", "11"]]));
        assert_eq!(convert(&e), Err(CatastrophicError::NotCatastrophic));
    }

    #[test]
    fn verify_accepts_true_conversions() {
        let original = PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]));
        let converted = convert(&original).unwrap();
        assert!(verify_same_code(&original, &converted, 100, 64, 7).unwrap());

        // identical encoders with a unit denominator: trivially the same code
        let clean = PeriodicEncoder::from_time_invariant(tie(&[&["1", "11"]]));
        let same = RationalPeriodicEncoder::new(clean.clone(), Poly::one()).unwrap();
        assert!(verify_same_code(&clean, &same, 20, 32, 7).unwrap());
    }

    #[test]
    fn verify_rejects_corrupted_denominator() {
        let original = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]); 2]).unwrap();
        let converted = convert(&original).unwrap();
        assert!(verify_same_code(&original, &converted, 50, 64, 11).unwrap());

        // flip the D coefficient of the denominator
        let corrupted =
            RationalPeriodicEncoder::new(converted.base().clone(), converted.den() + &p("01"))
                .unwrap();
        assert!(!verify_same_code(&original, &corrupted, 50, 64, 11).unwrap());
    }

    #[test]
    fn delay_scaling_grows_the_reported_delay() {
        // multiplying a k=2 matrix by D^j multiplies each order-2 minor by
        // D^{2j}, so delay_l grows by k·j while the verdict is unchanged
        let base = tie(&[&["1", "0", "1"], &["0", "1", "1"]]);
        let report = massey_sain_check(&base).unwrap();
        assert_eq!(report.verdict, Verdict::NonCatastrophic);
        let l0 = report.delay_l;

        for j in 1..=3 {
            let d = Poly::monomial(j);
            let rows = (0..2)
                .map(|r| (0..3).map(|c| base.matrix().get(r, c) * &d).collect())
                .collect();
            let scaled = TimeInvariantEncoder::new(PolyMatrix::from_rows(rows).unwrap()).unwrap();
            let scaled_report = massey_sain_check(&scaled).unwrap();
            assert_eq!(scaled_report.verdict, Verdict::NonCatastrophic);
            assert_eq!(scaled_report.delay_l, l0 + 2 * j);
            assert_eq!(scaled_report.g, Poly::one());
        }
    }
}
