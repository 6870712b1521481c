//! Encoder domain model: time-invariant, periodically time-varying (serial
//! and parallel descriptions) and rational (feedback) encoders, plus the
//! time-domain encoding maps.
//!
//! Encoding always starts from cleared registers, and the core maps are
//! length-preserving: output length equals input length, with no tail
//! flush. Callers that want the registers drained append zero epochs.

use std::fmt;

use thiserror::Error;

use crate::gf2poly::Poly;
use crate::polymatrix::PolyMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncoderError {
    #[error("input width {got} does not match encoder input width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("encoder rate requires 1 <= k < n, got k={k}, n={n}")]
    InvalidRate { k: usize, n: usize },
    #[error("periodic encoder needs at least one constituent")]
    EmptyPeriod,
    #[error("constituent {index} is {k}x{n}, expected {expect_k}x{expect_n}")]
    MixedConstituents {
        index: usize,
        k: usize,
        n: usize,
        expect_k: usize,
        expect_n: usize,
    },
    #[error("denominator constant term must be 1 for a causal realization")]
    NonCausalDenominator,
    #[error("bit count {bits} is not a multiple of tuple width {width}")]
    RaggedStream { bits: usize, width: usize },
    #[error("streams must share one length and width")]
    StreamShapeMismatch,
    #[error("stream length {len} is not divisible by {p}")]
    NotDivisible { len: usize, p: usize },
    #[error("tuple width must be divisible by {p}, got {width}")]
    WidthNotDivisible { width: usize, p: usize },
}

/// A finite sequence of fixed-width binary tuples: one tuple per encoding
/// epoch. Bits are stored flat, epoch-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BitStream {
    width: usize,
    bits: Vec<u8>,
}

impl BitStream {
    /// Empty stream of the given tuple width.
    pub fn new(width: usize) -> Self {
        assert!(width >= 1, "tuple width must be at least 1");
        BitStream {
            width,
            bits: Vec::new(),
        }
    }

    /// All-zero stream of `len` epochs.
    pub fn zeros(width: usize, len: usize) -> Self {
        assert!(width >= 1, "tuple width must be at least 1");
        BitStream {
            width,
            bits: vec![0; width * len],
        }
    }

    /// Build from flat epoch-major bits; nonzero bytes count as 1.
    pub fn from_bits(width: usize, bits: &[u8]) -> Result<Self, EncoderError> {
        assert!(width >= 1, "tuple width must be at least 1");
        if !bits.len().is_multiple_of(width) {
            return Err(EncoderError::RaggedStream {
                bits: bits.len(),
                width,
            });
        }
        Ok(BitStream {
            width,
            bits: bits.iter().map(|&b| (b != 0) as u8).collect(),
        })
    }

    pub fn push_tuple(&mut self, tuple: &[u8]) -> Result<(), EncoderError> {
        if tuple.len() != self.width {
            return Err(EncoderError::WidthMismatch {
                expected: self.width,
                got: tuple.len(),
            });
        }
        self.bits.extend(tuple.iter().map(|&b| (b != 0) as u8));
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of epochs.
    pub fn len(&self) -> usize {
        self.bits.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn tuple(&self, t: usize) -> &[u8] {
        &self.bits[t * self.width..(t + 1) * self.width]
    }

    /// Bit `i` of epoch `t`, or 0 for epochs before the start of time.
    fn bit_or_zero(&self, t: isize, i: usize) -> u8 {
        if t < 0 || t as usize >= self.len() {
            0
        } else {
            self.bits[t as usize * self.width + i]
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Total number of set bits.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn xor(&self, other: &BitStream) -> Result<BitStream, EncoderError> {
        if self.width != other.width || self.len() != other.len() {
            return Err(EncoderError::StreamShapeMismatch);
        }
        Ok(BitStream {
            width: self.width,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    /// First `len` epochs (or the whole stream when shorter).
    pub fn truncated(&self, len: usize) -> BitStream {
        let cut = self.bits.len().min(len * self.width);
        BitStream {
            width: self.width,
            bits: self.bits[..cut].to_vec(),
        }
    }

    /// Zero-padded at the tail to exactly `len` epochs (never shortens).
    pub fn zero_extended(&self, len: usize) -> BitStream {
        let mut bits = self.bits.clone();
        if len * self.width > bits.len() {
            bits.resize(len * self.width, 0);
        }
        BitStream {
            width: self.width,
            bits,
        }
    }

    /// The stream shifted `epochs` later, with an all-zero prefix.
    pub fn delayed(&self, epochs: usize) -> BitStream {
        let mut bits = vec![0; epochs * self.width];
        bits.extend_from_slice(&self.bits);
        BitStream {
            width: self.width,
            bits,
        }
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in 0..self.len() {
            if t > 0 {
                f.write_str(" ")?;
            }
            for &b in self.tuple(t) {
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream[{}]({self})", self.width)
    }
}

/// A rate k/n time-invariant convolutional encoder given by its k-by-n
/// transfer matrix of generator polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeInvariantEncoder {
    g: PolyMatrix,
}

impl TimeInvariantEncoder {
    pub fn new(g: PolyMatrix) -> Result<Self, EncoderError> {
        if g.rows() < 1 || g.rows() >= g.cols() {
            return Err(EncoderError::InvalidRate {
                k: g.rows(),
                n: g.cols(),
            });
        }
        Ok(TimeInvariantEncoder { g })
    }

    /// Inputs per epoch.
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    /// Outputs per epoch.
    pub fn n(&self) -> usize {
        self.g.cols()
    }

    /// Memory: the largest generator degree (0 for an all-zero matrix).
    pub fn memory(&self) -> usize {
        self.g.max_degree().finite().unwrap_or(0)
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.g
    }

    /// Time-invariant convolution of the whole input, zero initial state.
    pub fn encode(&self, input: &BitStream) -> Result<BitStream, EncoderError> {
        if input.width() != self.k() {
            return Err(EncoderError::WidthMismatch {
                expected: self.k(),
                got: input.width(),
            });
        }
        let m = self.memory();
        let mut out = BitStream::new(self.n());
        let mut tuple = vec![0u8; self.n()];
        for t in 0..input.len() {
            for (j, slot) in tuple.iter_mut().enumerate() {
                let mut acc = 0u8;
                for i in 0..self.k() {
                    let gen = self.g.get(i, j);
                    for d in 0..=m {
                        if gen.coeff(d) {
                            acc ^= input.bit_or_zero(t as isize - d as isize, i);
                        }
                    }
                }
                *slot = acc;
            }
            out.push_tuple(&tuple).expect("width fixed");
        }
        Ok(out)
    }
}

/// A periodically time-varying convolutional encoder: a cycle of `p`
/// constituent tap sets sharing one rate. Epoch `t` uses constituent
/// `t mod p`, so epoch 0 is encoded by the first constituent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicEncoder {
    constituents: Vec<TimeInvariantEncoder>,
}

impl PeriodicEncoder {
    pub fn new(constituents: Vec<TimeInvariantEncoder>) -> Result<Self, EncoderError> {
        let first = constituents.first().ok_or(EncoderError::EmptyPeriod)?;
        let (k, n) = (first.k(), first.n());
        for (index, c) in constituents.iter().enumerate() {
            if c.k() != k || c.n() != n {
                return Err(EncoderError::MixedConstituents {
                    index,
                    k: c.k(),
                    n: c.n(),
                    expect_k: k,
                    expect_n: n,
                });
            }
        }
        Ok(PeriodicEncoder { constituents })
    }

    /// The degenerate period-1 wrapper around a time-invariant encoder.
    pub fn from_time_invariant(e: TimeInvariantEncoder) -> Self {
        PeriodicEncoder {
            constituents: vec![e],
        }
    }

    pub fn period(&self) -> usize {
        self.constituents.len()
    }

    pub fn k(&self) -> usize {
        self.constituents[0].k()
    }

    pub fn n(&self) -> usize {
        self.constituents[0].n()
    }

    /// Encoder memory: the largest constituent memory.
    pub fn memory(&self) -> usize {
        self.constituents
            .iter()
            .map(TimeInvariantEncoder::memory)
            .max()
            .unwrap_or(0)
    }

    pub fn constituent(&self, i: usize) -> &TimeInvariantEncoder {
        &self.constituents[i]
    }

    pub fn constituents(&self) -> &[TimeInvariantEncoder] {
        &self.constituents
    }

    /// Serial description: one circuit whose output taps are rewired every
    /// epoch. The registers hold the input history; epoch `t` combines it
    /// with the taps of constituent `t mod p`.
    pub fn encode_serial(&self, input: &BitStream) -> Result<BitStream, EncoderError> {
        if input.width() != self.k() {
            return Err(EncoderError::WidthMismatch {
                expected: self.k(),
                got: input.width(),
            });
        }
        let (k, n, m, p) = (self.k(), self.n(), self.memory(), self.period());
        let mut out = BitStream::new(n);
        let mut tuple = vec![0u8; n];
        for t in 0..input.len() {
            let active = &self.constituents[t % p];
            for (j, slot) in tuple.iter_mut().enumerate() {
                let mut acc = 0u8;
                for i in 0..k {
                    let gen = active.matrix().get(i, j);
                    for d in 0..=m {
                        if gen.coeff(d) {
                            acc ^= input.bit_or_zero(t as isize - d as isize, i);
                        }
                    }
                }
                *slot = acc;
            }
            out.push_tuple(&tuple).expect("width fixed");
        }
        Ok(out)
    }

    /// Parallel description: all `p` constituents encode the full input as
    /// time-invariant encoders and epoch `t` keeps the n-tuple of
    /// constituent `t mod p`, puncturing the rest. Defines the same map as
    /// [`PeriodicEncoder::encode_serial`]; the agreement is a test target,
    /// so the two are implemented independently.
    pub fn encode_parallel(&self, input: &BitStream) -> Result<BitStream, EncoderError> {
        let laps: Vec<BitStream> = self
            .constituents
            .iter()
            .map(|c| c.encode(input))
            .collect::<Result<_, _>>()?;
        let p = self.period();
        let mut out = BitStream::new(self.n());
        for t in 0..input.len() {
            out.push_tuple(laps[t % p].tuple(t)).expect("width fixed");
        }
        Ok(out)
    }
}

/// A periodic encoder whose constituent matrices sit over one shared
/// denominator polynomial: the output of converting a catastrophic encoder.
/// The denominator has constant term 1, so the feedback circuit is causal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPeriodicEncoder {
    base: PeriodicEncoder,
    den: Poly,
}

impl RationalPeriodicEncoder {
    pub fn new(base: PeriodicEncoder, den: Poly) -> Result<Self, EncoderError> {
        if !den.constant_term() {
            return Err(EncoderError::NonCausalDenominator);
        }
        Ok(RationalPeriodicEncoder { base, den })
    }

    pub fn base(&self) -> &PeriodicEncoder {
        &self.base
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn period(&self) -> usize {
        self.base.period()
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Encode `len` epochs by power-series division of the input followed by
    /// the polynomial serial map: the quotient `input / den` is expanded to
    /// `len + m` terms, pushed through the numerator constituents, and
    /// truncated to `len`. The input is zero-extended past its end.
    pub fn encode(&self, input: &BitStream, len: usize) -> Result<BitStream, EncoderError> {
        if input.width() != self.k() {
            return Err(EncoderError::WidthMismatch {
                expected: self.k(),
                got: input.width(),
            });
        }
        let q = power_series_quotient(input, &self.den, len + self.base.memory())?;
        Ok(self.base.encode_serial(&q)?.truncated(len))
    }
}

/// First `len` epochs of the power series `input / den`, computed
/// component-wise over the tuple entries. The input is treated as zero past
/// its end. Requires `den(0) = 1`.
pub fn power_series_quotient(
    input: &BitStream,
    den: &Poly,
    len: usize,
) -> Result<BitStream, EncoderError> {
    if !den.constant_term() {
        return Err(EncoderError::NonCausalDenominator);
    }
    let width = input.width();
    let deg = den.degree().finite().expect("den has constant term 1");
    let mut q = BitStream::new(width);
    let mut tuple = vec![0u8; width];
    for t in 0..len {
        for (i, slot) in tuple.iter_mut().enumerate() {
            // q_t = u_t + sum_{d>=1} den_d q_{t-d}
            let mut acc = input.bit_or_zero(t as isize, i);
            for d in 1..=deg {
                if den.coeff(d) {
                    acc ^= q.bit_or_zero(t as isize - d as isize, i);
                }
            }
            *slot = acc;
        }
        q.push_tuple(&tuple).expect("width fixed");
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

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

    fn stream(width: usize, bits: &[u8]) -> BitStream {
        BitStream::from_bits(width, bits).unwrap()
    }

    /// The classic catastrophic rate-1/2 example: G = [1+D, 1+D^2].
    fn classic() -> PeriodicEncoder {
        PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]))
    }

    #[test]
    fn serial_classic_impulse_train() {
        // All-ones input over 3 epochs. Each output lane is the truncated
        // product of the input polynomial with the lane generator, which is
        // the independent transform-domain route:
        //   (1+D+D^2)(1+D)   = 1+D^3    -> lane bits 1,0,0
        //   (1+D+D^2)(1+D^2) = 1+D+D^3+D^4 -> lane bits 1,1,0
        let u = stream(1, &[1, 1, 1]);
        let got = classic().encode_serial(&u).unwrap();
        let lane0 = &p("111") * &p("11");
        let lane1 = &p("111") * &p("101");
        for t in 0..3 {
            assert_eq!(got.tuple(t)[0], lane0.coeff(t) as u8);
            assert_eq!(got.tuple(t)[1], lane1.coeff(t) as u8);
        }
        assert_eq!(got, stream(2, &[1, 1, 0, 1, 0, 0]));
    }

    #[test]
    fn serial_zero_input_stays_zero() {
        let u = BitStream::zeros(1, 9);
        let got = classic().encode_serial(&u).unwrap();
        assert_eq!(got, BitStream::zeros(2, 9));
    }

    #[test]
    fn serial_alternating_taps() {
        // p=2 with G1=[1+D, 1+D^2], G2=[1, 1+D] on an impulse: epoch 0 uses
        // G1 taps, epoch 1 uses G2 taps on the remembered input, epoch 2 is
        // back to G1.
        let e = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        let u = stream(1, &[1, 0, 0]);
        let got = e.encode_serial(&u).unwrap();
        assert_eq!(got, stream(2, &[1, 1, 0, 1, 0, 1]));
    }

    #[test]
    fn parallel_agrees_on_examples() {
        let e2 = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        for bits in [&[1u8, 0, 0][..], &[1, 1, 1], &[0, 1, 0, 1, 1]] {
            let u = stream(1, bits);
            assert_eq!(
                e2.encode_serial(&u).unwrap(),
                e2.encode_parallel(&u).unwrap()
            );
        }

        // degenerate period: parallel equals the single constituent
        let e1 = classic();
        let u = stream(1, &[1, 1, 0, 1]);
        assert_eq!(
            e1.encode_parallel(&u).unwrap(),
            e1.constituent(0).encode(&u).unwrap()
        );

        let empty = BitStream::new(1);
        assert_eq!(e1.encode_parallel(&empty).unwrap().len(), 0);
    }

    #[test]
    fn rational_unit_denominator_is_plain_encoding() {
        let r = RationalPeriodicEncoder::new(classic(), Poly::one()).unwrap();
        let u = stream(1, &[1, 0, 1, 1]);
        assert_eq!(
            r.encode(&u, 4).unwrap(),
            classic().encode_serial(&u).unwrap()
        );
    }

    #[test]
    fn rational_impulse_has_weight_three() {
        // Numerators [1+D, 1+D^2] over 1+D: the impulse expands to the
        // all-ones quotient, and the output collapses to three set bits.
        let r = RationalPeriodicEncoder::new(classic(), p("11")).unwrap();
        let u = stream(1, &[1]);
        let got = r.encode(&u, 64).unwrap();
        assert_eq!(got.len(), 64);
        assert_eq!(got.weight(), 3);
        assert_eq!(got.truncated(3), stream(2, &[1, 1, 0, 1, 0, 0]));
    }

    #[test]
    fn rational_zero_input_stays_zero() {
        let r = RationalPeriodicEncoder::new(classic(), p("11")).unwrap();
        let u = BitStream::zeros(1, 5);
        assert_eq!(r.encode(&u, 8).unwrap(), BitStream::zeros(2, 8));
    }

    #[test]
    fn quotient_expands_impulse() {
        let u = stream(1, &[1]);
        let q = power_series_quotient(&u, &p("11"), 6).unwrap();
        assert_eq!(q, stream(1, &[1, 1, 1, 1, 1, 1]));

        // multiplying back by the denominator recovers the impulse
        let back: Vec<u8> = (0..6)
            .map(|t| {
                let mut acc = q.tuple(t)[0];
                if t >= 1 {
                    acc ^= q.tuple(t - 1)[0];
                }
                acc
            })
            .collect();
        assert_eq!(back, vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn constructor_guards() {
        let square = PolyMatrix::identity(2).unwrap();
        assert_eq!(
            TimeInvariantEncoder::new(square),
            Err(EncoderError::InvalidRate { k: 2, n: 2 })
        );

        assert_eq!(PeriodicEncoder::new(vec![]), Err(EncoderError::EmptyPeriod));

        let mixed = PeriodicEncoder::new(vec![tie(&[&["1", "1"]]), tie(&[&["1", "1", "1"]])]);
        assert!(matches!(
            mixed,
            Err(EncoderError::MixedConstituents { index: 1, .. })
        ));

        assert_eq!(
            RationalPeriodicEncoder::new(classic(), p("01")),
            Err(EncoderError::NonCausalDenominator)
        );

        let u = stream(2, &[1, 0]);
        assert_eq!(
            classic().encode_serial(&u),
            Err(EncoderError::WidthMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    fn arb_poly(max_coeffs: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(prop::bool::ANY, 0..max_coeffs)
            .prop_map(|bits| Poly::from_coeffs(&bits.iter().map(|&b| b as u8).collect::<Vec<_>>()))
    }

    fn arb_periodic() -> impl Strategy<Value = PeriodicEncoder> {
        (1usize..=4, 1usize..=2, 0usize..=4).prop_flat_map(|(period, k, extra_n)| {
            let n = (k + 1 + extra_n).min(4);
            prop::collection::vec(prop::collection::vec(arb_poly(5), k * n), period).prop_map(
                move |mats| {
                    let constituents = mats
                        .into_iter()
                        .map(|entries| {
                            TimeInvariantEncoder::new(PolyMatrix::new(k, n, entries).unwrap())
                                .unwrap()
                        })
                        .collect();
                    PeriodicEncoder::new(constituents).unwrap()
                },
            )
        })
    }

    fn arb_input(width: usize) -> impl Strategy<Value = BitStream> {
        prop::collection::vec(prop::bool::ANY, 0..(64 * width)).prop_map(move |bits| {
            let cut = bits.len() - bits.len() % width;
            BitStream::from_bits(
                width,
                &bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn serial_equals_parallel(e in arb_periodic(), seed_bits in prop::collection::vec(prop::bool::ANY, 0..128)) {
            let width = e.k();
            let cut = seed_bits.len() - seed_bits.len() % width;
            let u = BitStream::from_bits(width, &seed_bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(e.encode_serial(&u).unwrap(), e.encode_parallel(&u).unwrap());
        }

        #[test]
        fn encoding_is_linear(e in arb_periodic(), a_bits in prop::collection::vec(prop::bool::ANY, 64), b_bits in prop::collection::vec(prop::bool::ANY, 64)) {
            let width = e.k();
            let cut = 64 - 64 % width;
            let a = BitStream::from_bits(width, &a_bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
            let b = BitStream::from_bits(width, &b_bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
            let lhs = e.encode_serial(&a.xor(&b).unwrap()).unwrap();
            let rhs = e.encode_serial(&a).unwrap().xor(&e.encode_serial(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn time_invariant_shift_property(u in arb_input(1)) {
            let e = PeriodicEncoder::from_time_invariant(
                TimeInvariantEncoder::new(
                    PolyMatrix::from_rows(vec![vec!["11".parse().unwrap(), "101".parse().unwrap()]]).unwrap()
                ).unwrap()
            );
            let direct = e.encode_serial(&u.delayed(1)).unwrap();
            let shifted = e.encode_serial(&u).unwrap().delayed(1);
            prop_assert_eq!(direct, shifted);
        }

        #[test]
        fn periodic_shift_by_period(e in arb_periodic(), bits in prop::collection::vec(prop::bool::ANY, 48)) {
            let width = e.k();
            let cut = 48 - 48 % width;
            let u = BitStream::from_bits(width, &bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
            let p = e.period();
            let direct = e.encode_serial(&u.delayed(p)).unwrap();
            let shifted = e.encode_serial(&u).unwrap().delayed(p);
            prop_assert_eq!(direct, shifted);
        }
    }
}
