//! The time-varying equivalent convolutional encoder (TVECE): every period-p
//! rate-k/n periodic encoder is strictly equivalent to one rate-kp/np
//! time-invariant encoder that consumes p input epochs per step, and this
//! module builds it, together with the stream blocking and round-robin
//! (de)serialization that connect the two time scales.

use crate::encoder::{BitStream, EncoderError, PeriodicEncoder, TimeInvariantEncoder};
use crate::gf2poly::Poly;
use crate::polymatrix::PolyMatrix;

/// The blocked time-invariant equivalent of a periodic encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tvece {
    encoder: TimeInvariantEncoder,
    source_p: usize,
}

impl Tvece {
    /// The equivalent encoder, with `k·p` inputs and `n·p` outputs.
    pub fn encoder(&self) -> &TimeInvariantEncoder {
        &self.encoder
    }

    /// Period of the encoder this was built from, kept so reports can speak
    /// in terms of the original.
    pub fn source_p(&self) -> usize {
        self.source_p
    }

    pub fn into_encoder(self) -> TimeInvariantEncoder {
        self.encoder
    }
}

/// Build the time-invariant equivalent of a periodic encoder.
///
/// Derivation of the cell formula: in the scalar (unblocked) picture, the
/// output at epoch `j` is produced by the constituent active at `j`, and the
/// input entered at epoch `r` contributes to it through tap age `j - r`. So
/// the scalar generator picture has the k-by-n binary tap matrix of
/// constituent `j mod p` at age `j - r` sitting at (input epoch `r`, output
/// epoch `j`). Grouping epochs in runs of `p` (row block index = input epoch
/// mod p, column block index c = output epoch mod p, block delay `l` = whole
/// periods between them) rewrites `j - r` as `l·p + c - r`, giving the cell
///
/// ```text
/// cell(r, c, l) = taps of constituent c at age l·p + c - r   (0-based c)
/// ```
///
/// whenever that age lands in `0..=m`, and an all-zero cell otherwise. The
/// largest `l` with a live cell is `ceil(m / p)`, the memory of the blocked
/// encoder.
///
/// ```
/// use tvcc::{build_tvece, PeriodicEncoder, PolyMatrix, TimeInvariantEncoder};
///
/// let g1 = PolyMatrix::from_rows(vec![vec!["11".parse().unwrap(), "101".parse().unwrap()]]).unwrap();
/// let g2 = PolyMatrix::from_rows(vec![vec!["1".parse().unwrap(), "11".parse().unwrap()]]).unwrap();
/// let e = PeriodicEncoder::new(vec![
///     TimeInvariantEncoder::new(g1).unwrap(),
///     TimeInvariantEncoder::new(g2).unwrap(),
/// ]).unwrap();
///
/// let t = build_tvece(&e);
/// assert_eq!(t.encoder().k(), 2);
/// assert_eq!(t.encoder().n(), 4);
/// assert_eq!(t.encoder().memory(), 1);
/// ```
pub fn build_tvece(e: &PeriodicEncoder) -> Tvece {
    let (p, k, n, m) = (e.period(), e.k(), e.n(), e.memory());
    let m_star = m.div_ceil(p);
    let mut g = PolyMatrix::zero(k * p, n * p).expect("positive shape");
    for r in 0..p {
        for c in 0..p {
            let taps = e.constituent(c).matrix();
            for i in 0..k {
                for j in 0..n {
                    let mut cell = Poly::zero();
                    for l in 0..=m_star {
                        let age = (l * p + c) as isize - r as isize;
                        if age < 0 || age as usize > m {
                            continue;
                        }
                        if taps.get(i, j).coeff(age as usize) {
                            cell += &Poly::monomial(l);
                        }
                    }
                    g.set(r * k + i, c * n + j, cell);
                }
            }
        }
    }
    Tvece {
        encoder: TimeInvariantEncoder::new(g).expect("kp < np follows from k < n"),
        source_p: p,
    }
}

/// Round-robin interleaving of `p` equal-shape streams: output epoch
/// `t·p + i` carries stream `i`'s symbol at epoch `t`.
pub fn serialize(streams: &[BitStream]) -> Result<BitStream, EncoderError> {
    let first = streams.first().ok_or(EncoderError::StreamShapeMismatch)?;
    let (width, len) = (first.width(), first.len());
    if streams.iter().any(|s| s.width() != width || s.len() != len) {
        return Err(EncoderError::StreamShapeMismatch);
    }
    let mut out = BitStream::new(width);
    for t in 0..len {
        for s in streams {
            out.push_tuple(s.tuple(t)).expect("width checked");
        }
    }
    Ok(out)
}

/// Exact inverse of [`serialize`]: splits a stream into `p` phase streams.
pub fn deserialize(stream: &BitStream, p: usize) -> Result<Vec<BitStream>, EncoderError> {
    assert!(p >= 1, "period must be at least 1");
    if !stream.len().is_multiple_of(p) {
        return Err(EncoderError::NotDivisible {
            len: stream.len(),
            p,
        });
    }
    let mut out = vec![BitStream::new(stream.width()); p];
    for t in 0..stream.len() {
        out[t % p].push_tuple(stream.tuple(t)).expect("width fixed");
    }
    Ok(out)
}

/// Group `p` consecutive k-tuples into one kp-tuple, zero-padding the tail
/// so the length divides evenly. This is the input adapter from a periodic
/// encoder's time scale to its blocked equivalent.
pub fn block_input(input: &BitStream, p: usize) -> BitStream {
    assert!(p >= 1, "period must be at least 1");
    let padded = input.zero_extended(input.len().div_ceil(p) * p);
    let mut out = BitStream::new(input.width() * p);
    for t in 0..padded.len() / p {
        let mut tuple = Vec::with_capacity(input.width() * p);
        for i in 0..p {
            tuple.extend_from_slice(padded.tuple(t * p + i));
        }
        out.push_tuple(&tuple).expect("width fixed");
    }
    out
}

/// Split each wide tuple into `p` consecutive narrow tuples: the output
/// adapter inverse to [`block_input`]. The tuple width must divide by `p`.
pub fn unblock_output(stream: &BitStream, p: usize) -> Result<BitStream, EncoderError> {
    assert!(p >= 1, "period must be at least 1");
    if !stream.width().is_multiple_of(p) {
        return Err(EncoderError::WidthNotDivisible {
            width: stream.width(),
            p,
        });
    }
    let narrow = stream.width() / p;
    let mut out = BitStream::new(narrow);
    for t in 0..stream.len() {
        let wide = stream.tuple(t);
        for i in 0..p {
            out.push_tuple(&wide[i * narrow..(i + 1) * narrow])
                .expect("width fixed");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::PeriodicEncoder;
    use crate::polymatrix::PolyMatrix;
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

    #[test]
    fn period_one_is_identity() {
        let e = PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]));
        let t = build_tvece(&e);
        assert_eq!(t.encoder(), e.constituent(0));
        assert_eq!(t.source_p(), 1);
    }

    #[test]
    fn worked_period_two_example() {
        // G1 = [1+D, 1+D^2], G2 = [1, 1+D]: expanding the block structure by
        // hand gives [[1, 1+D, 0, 1], [D, 0, 1, 1]] with blocked memory 1.
        let e = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        let t = build_tvece(&e);
        let expect = PolyMatrix::from_rows(vec![
            vec![p("1"), p("11"), p("0"), p("1")],
            vec![p("01"), p("0"), p("1"), p("1")],
        ])
        .unwrap();
        assert!(t.encoder().matrix() == &expect);
        assert_eq!(t.encoder().memory(), 1);
    }

    #[test]
    fn blocked_memory_is_ceiling() {
        // memory-3 constituents: p=2 blocks to memory 2, p=3 to memory 1
        let c = tie(&[&["1001", "11"]]);
        for (period, want) in [(2usize, 2usize), (3, 1)] {
            let e = PeriodicEncoder::new(vec![c.clone(); period]).unwrap();
            let t = build_tvece(&e);
            assert_eq!(t.encoder().memory(), want, "period {period}");
            assert_eq!(t.encoder().k(), period);
            assert_eq!(t.encoder().n(), 2 * period);
        }
    }

    #[test]
    fn serialize_round_robin() {
        let a = stream(1, &[1, 0]);
        let b = stream(1, &[1, 1]);
        let s = serialize(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s, stream(1, &[1, 1, 0, 1]));
        assert_eq!(deserialize(&s, 2).unwrap(), vec![a.clone(), b]);

        // p = 1 is the identity
        assert_eq!(serialize(std::slice::from_ref(&a)).unwrap(), a.clone());
        assert_eq!(deserialize(&a, 1).unwrap(), vec![a]);
    }

    #[test]
    fn serialize_shape_guards() {
        assert_eq!(serialize(&[]), Err(EncoderError::StreamShapeMismatch));
        let uneven = [stream(1, &[1]), stream(1, &[1, 0])];
        assert_eq!(serialize(&uneven), Err(EncoderError::StreamShapeMismatch));
        assert_eq!(
            deserialize(&stream(1, &[1, 0, 1]), 2),
            Err(EncoderError::NotDivisible { len: 3, p: 2 })
        );
    }

    #[test]
    fn blocking_examples() {
        let u = stream(1, &[1, 0, 1, 1]);
        let blocked = block_input(&u, 2);
        assert_eq!(blocked, stream(2, &[1, 0, 1, 1]));

        // odd length pads with a zero epoch
        let odd = stream(1, &[1, 1, 1]);
        assert_eq!(block_input(&odd, 2), stream(2, &[1, 1, 1, 0]));

        assert_eq!(block_input(&u, 1), u);

        let wide = stream(4, &[1, 0, 1, 1, 0, 1, 0, 0]);
        assert_eq!(
            unblock_output(&wide, 2).unwrap(),
            stream(2, &[1, 0, 1, 1, 0, 1, 0, 0])
        );
        assert_eq!(
            unblock_output(&stream(3, &[1, 0, 1]), 2),
            Err(EncoderError::WidthNotDivisible { width: 3, p: 2 })
        );
    }

    #[test]
    fn blocked_encoding_matches_serial_on_worked_example() {
        let e = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        let t = build_tvece(&e);
        let u = stream(1, &[1, 0, 0, 1, 1, 0]);
        let serial = e.encode_serial(&u).unwrap();
        let blocked = block_input(&u, 2);
        let wide = PeriodicEncoder::from_time_invariant(t.encoder().clone())
            .encode_serial(&blocked)
            .unwrap();
        assert_eq!(unblock_output(&wide, 2).unwrap(), serial);
    }

    fn arb_poly(max_coeffs: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(prop::bool::ANY, 0..max_coeffs)
            .prop_map(|bits| Poly::from_coeffs(&bits.iter().map(|&b| b as u8).collect::<Vec<_>>()))
    }

    fn arb_streams() -> impl Strategy<Value = Vec<BitStream>> {
        (1usize..=4, 1usize..=3, 0usize..=12).prop_flat_map(|(p, width, len)| {
            prop::collection::vec(
                prop::collection::vec(prop::bool::ANY, width * len).prop_map(move |bits| {
                    BitStream::from_bits(width, &bits.iter().map(|&b| b as u8).collect::<Vec<_>>())
                        .unwrap()
                }),
                p,
            )
        })
    }

    proptest! {
        #[test]
        fn serialize_deserialize_inverse(streams in arb_streams()) {
            let p = streams.len();
            let s = serialize(&streams).unwrap();
            prop_assert_eq!(deserialize(&s, p).unwrap(), streams);
        }

        #[test]
        fn blocking_round_trips(width in 1usize..=2, p in 1usize..=4, bits in prop::collection::vec(prop::bool::ANY, 0..48)) {
            let cut = bits.len() - bits.len() % width;
            let u = BitStream::from_bits(width, &bits[..cut].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
            let blocked = block_input(&u, p);
            let back = unblock_output(&blocked, p).unwrap();
            prop_assert_eq!(back.truncated(u.len()), u.clone());
            prop_assert_eq!(back.len(), u.len().div_ceil(p) * p);
        }

        #[test]
        fn tvece_shape_and_memory_bound(
            (period, k, n, mats) in (1usize..=4, 1usize..=2, 0usize..=1, 0usize..=4).prop_flat_map(|(period, k, extra, m)| {
                let n = k + 1 + extra;
                (
                    Just(period),
                    Just(k),
                    Just(n),
                    prop::collection::vec(prop::collection::vec(arb_poly(m + 1), k * n), period),
                )
            })
        ) {
            let constituents: Vec<TimeInvariantEncoder> = mats
                .into_iter()
                .map(|entries| TimeInvariantEncoder::new(PolyMatrix::new(k, n, entries).unwrap()).unwrap())
                .collect();
            let e = PeriodicEncoder::new(constituents).unwrap();
            let t = build_tvece(&e);
            prop_assert_eq!(t.encoder().k(), k * period);
            prop_assert_eq!(t.encoder().n(), n * period);
            prop_assert!(t.encoder().memory() <= e.memory().div_ceil(period));
        }
    }
}
