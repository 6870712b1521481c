//! Exact arithmetic in GF(2)\[D\], the ring of binary polynomials in the
//! delay operator `D`.
//!
//! Coefficients are bit-packed little-endian by degree: bit `i` holds the
//! coefficient of `D^i`. The textual form follows the same convention, so
//! `"11"` is `1 + D` and `"101"` is `1 + D^2`. Addition is coefficient-wise
//! XOR, every nonzero polynomial is its own additive inverse, and every
//! nonzero polynomial is monic, so gcds need no normalization step.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

const LIMB_BITS: usize = 64;

static COEFF_OPS: AtomicU64 = AtomicU64::new(0);

/// Total coefficient-level operations (XORed coefficient positions)
/// performed by polynomial arithmetic in this process so far.
///
/// The counter is global and monotone; measure a region by differencing two
/// reads. It exists so the `bench` command can put an abstract cost for the
/// divisor-based catastrophicity check next to the state-graph edge count,
/// independent of timer noise.
pub fn coeff_op_count() -> u64 {
    COEFF_OPS.load(Ordering::Relaxed)
}

#[inline]
fn tally(n: usize) {
    COEFF_OPS.fetch_add(n as u64, Ordering::Relaxed);
}

/// Degree of a binary polynomial.
///
/// The zero polynomial has no highest set coefficient; its degree is the
/// distinguished `MinusInfinity`, which compares below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    /// The finite value, if any.
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

/// Errors from the partial operations on [`Poly`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of all-zero polynomials is undefined")]
    GcdOfAllZero,
    #[error("the zero polynomial has no delay factorization")]
    SplitDelayOfZero,
}

/// Parse failure for the little-endian binary text form.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("empty polynomial string")]
    Empty,
    #[error("invalid character {ch:?} at position {pos}, expected '0' or '1'")]
    BadChar { ch: char, pos: usize },
}

/// A polynomial over GF(2) in the delay indeterminate `D`.
///
/// Held in canonical form: the backing words never end in a zero word, and
/// the zero polynomial stores no words at all.
///
/// ```
/// use tvcc::gf2poly::Poly;
///
/// let a: Poly = "11".parse().unwrap();  // 1 + D
/// let b: Poly = "101".parse().unwrap(); // 1 + D^2
/// assert_eq!((&a * &a), b);             // squaring is coefficient spreading
/// assert_eq!((&a + &a), Poly::zero());  // characteristic 2
/// ```
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    limbs: Vec<u64>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { limbs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Poly { limbs: vec![1] }
    }

    /// The monomial `D^i`.
    pub fn monomial(i: usize) -> Self {
        let mut limbs = vec![0; i / LIMB_BITS + 1];
        limbs[i / LIMB_BITS] = 1u64 << (i % LIMB_BITS);
        Poly { limbs }
    }

    /// Build from coefficient bits, little-endian by degree. Values are
    /// taken mod 2, so any nonzero byte is a set coefficient.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut limbs = vec![0u64; coeffs.len() / LIMB_BITS + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                limbs[i / LIMB_BITS] |= 1u64 << (i % LIMB_BITS);
            }
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }

    /// Build from the exponents of the set coefficients.
    pub fn from_support(support: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &i in support {
            p.flip_coeff(i);
        }
        p.normalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Coefficient of `D^i`.
    pub fn coeff(&self, i: usize) -> bool {
        match self.limbs.get(i / LIMB_BITS) {
            Some(limb) => (limb >> (i % LIMB_BITS)) & 1 == 1,
            None => false,
        }
    }

    /// Constant term, the coefficient of `D^0`.
    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    pub fn degree(&self) -> Degree {
        match self.degree_index() {
            Some(d) => Degree::Finite(d),
            None => Degree::MinusInfinity,
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Exponents of the set coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (li, &limb) in self.limbs.iter().enumerate() {
            let mut w = limb;
            while w != 0 {
                out.push(li * LIMB_BITS + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn degree_index(&self) -> Option<usize> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * LIMB_BITS + (LIMB_BITS - 1 - last.leading_zeros() as usize))
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    fn flip_coeff(&mut self, i: usize) {
        let limb = i / LIMB_BITS;
        if limb >= self.limbs.len() {
            self.limbs.resize(limb + 1, 0);
        }
        self.limbs[limb] ^= 1u64 << (i % LIMB_BITS);
    }

    /// XOR `other << shift` (shift in coefficient positions) into `self`.
    fn xor_shifted(&mut self, other: &Poly, shift: usize) {
        let word = shift / LIMB_BITS;
        let bit = shift % LIMB_BITS;
        let needed = word + other.limbs.len() + 1;
        if self.limbs.len() < needed {
            self.limbs.resize(needed, 0);
        }
        for (i, &src) in other.limbs.iter().enumerate() {
            self.limbs[word + i] ^= src << bit;
            if bit != 0 {
                self.limbs[word + i + 1] ^= src >> (LIMB_BITS - bit);
            }
        }
        self.normalize();
    }

    /// Drop the lowest `shift` coefficient positions (exact division by `D^shift`
    /// when they are all zero; lower bits are simply discarded otherwise).
    fn shifted_down(&self, shift: usize) -> Poly {
        let word = shift / LIMB_BITS;
        let bit = shift % LIMB_BITS;
        if word >= self.limbs.len() {
            return Poly::zero();
        }
        let mut limbs = Vec::with_capacity(self.limbs.len() - word);
        for i in word..self.limbs.len() {
            let mut v = self.limbs[i] >> bit;
            if bit != 0 && i + 1 < self.limbs.len() {
                v |= self.limbs[i + 1] << (LIMB_BITS - bit);
            }
            limbs.push(v);
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }

    /// Carry-less product.
    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // XOR one shifted copy of the longer operand per set bit of the shorter.
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let cost = long.degree_index().expect("nonzero") + 1;
        let mut acc = Poly::zero();
        for shift in short.support() {
            acc.xor_shifted(long, shift);
            tally(cost);
        }
        acc
    }

    /// Quotient and remainder of polynomial long division.
    ///
    /// Returns `(q, r)` with `self = q·rhs + r` and `degree(r) < degree(rhs)`.
    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly), PolyError> {
        let db = rhs.degree_index().ok_or(PolyError::DivisionByZero)?;
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree_index() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            q.flip_coeff(shift);
            r.xor_shifted(rhs, shift);
            tally(db + 1);
        }
        q.normalize();
        Ok((q, r))
    }

    /// True when `self` divides `other` exactly.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).expect("nonzero divisor").1.is_zero()
    }

    /// Greatest common divisor by Euclid's algorithm.
    ///
    /// Over GF(2) every nonzero polynomial is monic, so the nonzero gcd is
    /// unique as returned. `gcd(a, 0) = a`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfAllZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Substitute `D -> D^p`, moving the coefficient of `D^i` to `D^{i·p}`.
    ///
    /// This is a ring homomorphism for every `p >= 1`.
    ///
    /// # Panics
    ///
    /// Panics when `p == 0`.
    pub fn inflate(&self, p: usize) -> Poly {
        assert!(p >= 1, "inflation factor must be at least 1");
        if p == 1 {
            return self.clone();
        }
        let mut out = Poly::zero();
        for i in self.support() {
            out.flip_coeff(i * p);
        }
        out.normalize();
        out
    }

    /// Split off the pure-delay factor: `self = D^l · g` with `g(0) = 1`.
    ///
    /// `l` is the index of the lowest set coefficient.
    pub fn split_delay(&self) -> Result<(usize, Poly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::SplitDelayOfZero);
        }
        let l = self
            .limbs
            .iter()
            .enumerate()
            .find(|(_, &limb)| limb != 0)
            .map(|(i, &limb)| i * LIMB_BITS + limb.trailing_zeros() as usize)
            .expect("nonzero");
        Ok((l, self.shifted_down(l)))
    }
}

/// Fold of pairwise gcd over a sequence, skipping zero entries.
///
/// Rectangular transfer matrices routinely have some zero minors while
/// still having full rank, so zeros are ignored rather than rejected.
/// Errors only when every entry is zero.
pub fn gcd_many<'a, I>(polys: I) -> Result<Poly, PolyError>
where
    I: IntoIterator<Item = &'a Poly>,
{
    let mut acc: Option<Poly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.clone(),
            Some(g) => {
                if g.is_one() {
                    return Ok(g);
                }
                g.gcd(p).expect("nonzero operand")
            }
        });
    }
    acc.ok_or(PolyError::GcdOfAllZero)
}

impl Add<&Poly> for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.limbs.len() >= rhs.limbs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut limbs = long.limbs.clone();
        for (i, &src) in short.limbs.iter().enumerate() {
            limbs[i] ^= src;
        }
        if let Some(d) = long.degree_index() {
            tally(d + 1);
        }
        let mut p = Poly { limbs };
        p.normalize();
        p
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        Poly::mul(&self, &rhs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree_index() {
            None => f.write_str("0"),
            Some(d) => {
                for i in 0..=d {
                    f.write_str(if self.coeff(i) { "1" } else { "0" })?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParsePolyError::Empty);
        }
        let mut coeffs = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => coeffs.push(0),
                '1' => coeffs.push(1),
                _ => return Err(ParsePolyError::BadChar { ch, pos }),
            }
        }
        Ok(Poly::from_coeffs(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    /// Schoolbook convolution over coefficient vectors; independent of the
    /// shifted-XOR path in `Poly::mul`.
    fn schoolbook_mul(a: &Poly, b: &Poly) -> Poly {
        let (da, db) = match (a.degree().finite(), b.degree().finite()) {
            (Some(da), Some(db)) => (da, db),
            _ => return Poly::zero(),
        };
        let mut coeffs = vec![0u8; da + db + 1];
        for i in 0..=da {
            for j in 0..=db {
                coeffs[i + j] ^= (a.coeff(i) && b.coeff(j)) as u8;
            }
        }
        Poly::from_coeffs(&coeffs)
    }

    /// Largest-degree common divisor found by trial division over every
    /// nonzero polynomial up to the smaller degree. Exhaustive, so only for
    /// desk-scale inputs.
    fn trial_division_gcd(a: &Poly, b: &Poly) -> Poly {
        assert!(!a.is_zero() && !b.is_zero());
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
    fn add_examples() {
        assert_eq!(&p("11") + &p("11"), Poly::zero());
        assert_eq!(&p("11") + &p("101"), p("011"));
        assert_eq!(&Poly::zero() + &p("101"), p("101"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("11") * &p("11"), p("101"));
        let product = &p("11") * &p("111");
        assert_eq!(product, schoolbook_mul(&p("11"), &p("111")));
        assert_eq!(product, p("1001"));
        assert_eq!(&p("1011") * &Poly::zero(), Poly::zero());
    }

    #[test]
    fn mul_degree_adds() {
        let a = p("1101");
        let b = p("011");
        let dd = (&a * &b).degree().finite().unwrap();
        assert_eq!(dd, 3 + 2);
    }

    #[test]
    fn divmod_examples() {
        assert_eq!(p("101").divmod(&p("11")).unwrap(), (p("11"), Poly::zero()));

        let (q, r) = p("1001").divmod(&p("101")).unwrap();
        assert_eq!((q.clone(), r.clone()), (p("01"), p("11")));
        // reconstruction through the independent mul/add routes
        assert_eq!(&(&q * &p("101")) + &r, p("1001"));

        assert_eq!(p("1").divmod(&p("11")).unwrap(), (Poly::zero(), p("1")));
        assert_eq!(p("1").divmod(&Poly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let g = p("11").gcd(&p("101")).unwrap();
        assert_eq!(g, trial_division_gcd(&p("11"), &p("101")));
        assert_eq!(g, p("11"));

        let a = p("1101");
        assert_eq!(a.gcd(&Poly::zero()).unwrap(), a);
        assert_eq!(p("1").gcd(&p("100101")).unwrap(), Poly::one());
        assert_eq!(
            Poly::zero().gcd(&Poly::zero()),
            Err(PolyError::GcdOfAllZero)
        );
    }

    #[test]
    fn gcd_many_examples() {
        let list = [p("11"), p("101"), Poly::zero()];
        assert_eq!(gcd_many(&list).unwrap(), p("11"));

        let with_unit = [p("1"), p("0101"), p("11")];
        assert_eq!(gcd_many(&with_unit).unwrap(), Poly::one());

        // [D, D^2, D + D^2]: every pairwise trial-division gcd folds to D
        let delays = [p("01"), p("001"), p("011")];
        let folded = trial_division_gcd(&trial_division_gcd(&delays[0], &delays[1]), &delays[2]);
        assert_eq!(gcd_many(&delays).unwrap(), folded);
        assert_eq!(folded, p("01"));

        let zeros = [Poly::zero(), Poly::zero()];
        assert_eq!(gcd_many(&zeros), Err(PolyError::GcdOfAllZero));
    }

    #[test]
    fn inflate_examples() {
        assert_eq!(p("11").inflate(2), p("101"));
        let a = p("10110");
        assert_eq!(a.inflate(1), a);
        assert_eq!(p("111").inflate(3), p("1001001"));
    }

    #[test]
    fn split_delay_examples() {
        assert_eq!(p("0011").split_delay().unwrap(), (2, p("11")));
        assert_eq!(p("11").split_delay().unwrap(), (0, p("11")));
        assert_eq!(p("000001").split_delay().unwrap(), (5, p("1")));
        assert_eq!(Poly::zero().split_delay(), Err(PolyError::SplitDelayOfZero));
    }

    #[test]
    fn zero_degree_is_minus_infinity() {
        assert_eq!(Poly::zero().degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
        assert_eq!(Poly::one().degree(), Degree::Finite(0));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("11").to_string(), "11");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("0100").to_string(), "01"); // canonical form drops high zeros
        assert_eq!("".parse::<Poly>(), Err(ParsePolyError::Empty));
        assert_eq!(
            "1x1".parse::<Poly>(),
            Err(ParsePolyError::BadChar { ch: 'x', pos: 1 })
        );
    }

    #[test]
    fn monomial_and_support() {
        assert_eq!(Poly::monomial(5), p("000001"));
        assert_eq!(Poly::from_support(&[0, 3]), p("1001"));
        assert_eq!(p("1001").support(), vec![0, 3]);
    }

    #[test]
    fn cross_limb_arithmetic() {
        // degree far past one backing word
        let a = Poly::monomial(130) + Poly::one();
        let b = Poly::monomial(70) + Poly::one();
        let prod = &a * &b;
        assert_eq!(prod, schoolbook_mul(&a, &b));
        let (q, r) = prod.divmod(&b).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    fn arb_poly(max_coeffs: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(prop::bool::ANY, 0..max_coeffs)
            .prop_map(|bits| Poly::from_coeffs(&bits.iter().map(|&b| b as u8).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn add_group_laws(a in arb_poly(96), b in arb_poly(96), c in arb_poly(96)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &a, Poly::zero());
            prop_assert_eq!(&a + &Poly::zero(), a.clone());
        }

        #[test]
        fn mul_ring_laws(a in arb_poly(48), b in arb_poly(48), c in arb_poly(48)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn mul_matches_schoolbook(a in arb_poly(48), b in arb_poly(48)) {
            prop_assert_eq!(&a * &b, schoolbook_mul(&a, &b));
        }

        #[test]
        fn divmod_reconstructs(a in arb_poly(96), b in arb_poly(48)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_and_commutes(a in arb_poly(48), b in arb_poly(48)) {
            prop_assume!(!a.is_zero() || !b.is_zero());
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
            prop_assert_eq!(g, b.gcd(&a).unwrap());
        }

        #[test]
        fn inflate_is_ring_homomorphism(a in arb_poly(32), b in arb_poly(32), p in 1usize..=4) {
            prop_assert_eq!((&a * &b).inflate(p), &a.inflate(p) * &b.inflate(p));
            prop_assert_eq!((&a + &b).inflate(p), &a.inflate(p) + &b.inflate(p));
        }

        #[test]
        fn split_delay_round_trips(a in arb_poly(96)) {
            prop_assume!(!a.is_zero());
            let (l, g) = a.split_delay().unwrap();
            prop_assert!(g.constant_term());
            prop_assert_eq!(&Poly::monomial(l) * &g, a);
        }

        #[test]
        fn text_round_trips(a in arb_poly(96)) {
            let shown = a.to_string();
            prop_assert_eq!(shown.parse::<Poly>().unwrap(), a);
        }
    }
}
