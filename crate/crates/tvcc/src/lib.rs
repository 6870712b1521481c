//! Catastrophicity analysis for periodically time-varying convolutional
//! encoders.
//!
//! A convolutional encoder is *catastrophic* when some input of infinite
//! Hamming weight encodes into a codeword of finite weight; after such a
//! codeword crosses a noisy channel, a handful of channel errors can
//! corrupt an unbounded stretch of decoded data. For a time-invariant
//! encoder the classic divisor test settles the question: the encoder is
//! non-catastrophic exactly when the gcd of the k-by-k minors of its
//! transfer matrix is a pure delay `D^l`.
//!
//! This crate extends the test to encoders whose tap matrices cycle with
//! period p. Every such encoder is strictly equivalent — same code, same
//! input-to-output map — to one blocked time-invariant encoder of rate
//! kp/np and memory `ceil(m/p)` ([`build_tvece`]); running the divisor test
//! there decides the periodic case in polynomial time ([`periodic_check`]),
//! where state-diagram inspection would grow exponentially with memory. A
//! catastrophic encoder is repaired by dividing its constituent matrices by
//! the offending divisor, inflated to the period's time scale
//! ([`convert`]). An exhaustive state-graph search ([`oracle_check`])
//! stays available as an independent cross-check and conversion certifier.
//!
//! The `book/` directory of the repository is an mdbook guide to the
//! concepts; its code snippets compile and run as doctests of this crate,
//! so the guide cannot drift from the API.

pub mod catastrophic;
pub mod cli;
pub mod encoder;
pub mod gf2poly;
pub mod oracle;
pub mod polymatrix;
pub mod tvece;

pub use catastrophic::{
    convert, massey_sain_check, periodic_check, verify_same_code, CatastrophicError,
    CatastrophicReport, Verdict,
};
pub use encoder::{
    power_series_quotient, BitStream, EncoderError, PeriodicEncoder, RationalPeriodicEncoder,
    TimeInvariantEncoder,
};
pub use gf2poly::{gcd_many, Degree, ParsePolyError, Poly, PolyError};
pub use oracle::{
    oracle_check, realize_periodic, realize_rational, OracleError, OracleVerdict, StateGraph,
    WitnessCycle, MAX_STATE_BITS,
};
pub use polymatrix::{MatrixError, PolyMatrix, MAX_DET_SIDE};
pub use tvece::{block_input, build_tvece, deserialize, serialize, unblock_output, Tvece};

// The guide chapters double as doctests; see book/src/*.md.
#[cfg(doctest)]
mod book;
