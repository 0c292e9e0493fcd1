//! The free graded-commutative algebra `Λ(a1*, b1*, …, ag*, bg*) ⊗ Z[c*]`.
//!
//! Odd generators live in a bitmask with the interleaved order
//! `a1* < b1* < a2* < b2* < …`, so `ai*` is bit `2(i-1)` and `bi*` is bit
//! `2(i-1)+1`. A stored [`Monomial`] always means the product of its odd
//! generators in increasing order, times a power of `c*`.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest genus representable by the 64-bit odd-generator mask.
pub const MAX_GENUS: u32 = 32;

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),
    #[error("coefficient modulus mismatch")]
    ModulusMismatch,
    #[error("genus {0} exceeds the supported maximum {MAX_GENUS}")]
    GenusTooLarge(u32),
    #[error("generator index {index} out of range for genus {g}")]
    GeneratorOutOfRange { index: u32, g: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    A,
    B,
}

/// One of the degree-one generators `ai*` or `bi*`; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorId {
    pub kind: GeneratorKind,
    pub index: u32,
}

impl GeneratorId {
    pub fn a(index: u32) -> Self {
        GeneratorId { kind: GeneratorKind::A, index }
    }

    pub fn b(index: u32) -> Self {
        GeneratorId { kind: GeneratorKind::B, index }
    }

    pub fn bit(self) -> u32 {
        2 * (self.index - 1) + u32::from(self.kind == GeneratorKind::B)
    }

    pub fn from_bit(bit: u32) -> Self {
        let index = bit / 2 + 1;
        if bit.is_multiple_of(2) {
            GeneratorId::a(index)
        } else {
            GeneratorId::b(index)
        }
    }

    fn check(self, g: u32) -> Result<(), RingError> {
        if self.index == 0 || self.index > g {
            return Err(RingError::GeneratorOutOfRange { index: self.index, g });
        }
        Ok(())
    }
}

impl PartialOrd for GeneratorId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeneratorId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bit().cmp(&other.bit())
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::A => write!(f, "a{}*", self.index),
            GeneratorKind::B => write!(f, "b{}*", self.index),
        }
    }
}

/// A basis word: a set of odd generators and a power of `c*`.
///
/// The derived order compares the mask as an integer first, then `c_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub ext: u64,
    pub c_exp: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { ext: 0, c_exp: 0 };

    pub fn new(ext: u64, c_exp: u32) -> Self {
        Monomial { ext, c_exp }
    }

    pub fn c_power(k: u32) -> Self {
        Monomial { ext: 0, c_exp: k }
    }

    pub fn generator(gen: GeneratorId) -> Self {
        Monomial { ext: 1 << gen.bit(), c_exp: 0 }
    }

    pub fn odd_degree(self) -> u32 {
        self.ext.count_ones()
    }

    pub fn degree(self) -> u32 {
        self.ext.count_ones() + 2 * self.c_exp
    }

    pub fn generators(self) -> impl Iterator<Item = GeneratorId> {
        let ext = self.ext;
        (0..64u32).filter(move |b| ext >> b & 1 == 1).map(GeneratorId::from_bit)
    }

    /// Product of two monomials as `(sign, monomial)`, or `None` when an odd
    /// generator repeats. The sign counts the transpositions needed to merge
    /// the two increasing generator lists.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Monomial) -> Option<(i8, Monomial)> {
        if self.ext & other.ext != 0 {
            return None;
        }
        let sign = if merge_parity(self.ext, other.ext) { -1 } else { 1 };
        Some((sign, Monomial { ext: self.ext | other.ext, c_exp: self.c_exp + other.c_exp }))
    }

    /// Odd generators that appear without their partner (`ai*` without
    /// `bi*` or vice versa). Monomial products and every relation of the
    /// quotient ring are homogeneous for the grading `ai* -> +ei`,
    /// `bi* -> -ei`, `c* -> 0`, and this mask determines that weight.
    pub fn signature(self) -> u64 {
        let pairs = self.ext & (self.ext >> 1) & EVEN_BITS;
        self.ext & !(pairs | (pairs << 1))
    }
}

/// The signature a monomial must pair with to land in weight zero.
pub fn dual_signature(sig: u64) -> u64 {
    ((sig & EVEN_BITS) << 1) | ((sig >> 1) & EVEN_BITS)
}

/// Parity of the number of pairs `(x, y)` with `x` in `left`, `y` in
/// `right` and `x > y` in generator order.
fn merge_parity(left: u64, right: u64) -> bool {
    let mut count = 0u32;
    let mut r = right;
    while r != 0 {
        let bit = r.trailing_zeros();
        let above = if bit >= 63 { 0 } else { left >> (bit + 1) };
        count += above.count_ones();
        r &= r - 1;
    }
    count % 2 == 1
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ext == 0 && self.c_exp == 0 {
            return write!(f, "1");
        }
        for gen in self.generators() {
            write!(f, "{gen}")?;
        }
        match self.c_exp {
            0 => Ok(()),
            1 => write!(f, "c*"),
            k => write!(f, "c*^{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulus {
    Integers,
    Two,
}

/// Degree of an element: `Zero` is compatible with every degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Pure(u32),
    Mixed,
}

/// A sparse integer (or mod-2) combination of monomials for a fixed genus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    g: u32,
    modulus: Modulus,
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero(g: u32, modulus: Modulus) -> Self {
        RingElement { g, modulus, terms: BTreeMap::new() }
    }

    pub fn one(g: u32, modulus: Modulus) -> Self {
        Self::from_monomial(g, modulus, Monomial::ONE, BigInt::one())
    }

    pub fn from_monomial(g: u32, modulus: Modulus, m: Monomial, coeff: BigInt) -> Self {
        let mut e = Self::zero(g, modulus);
        e.add_term(m, coeff);
        e
    }

    /// Builds an element from `(monomial, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(g: u32, modulus: Modulus, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut e = Self::zero(g, modulus);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn generator(g: u32, gen: GeneratorId) -> Result<Self, RingError> {
        gen.check(g)?;
        Ok(Self::from_monomial(g, Modulus::Integers, Monomial::generator(gen), BigInt::one()))
    }

    pub fn a(g: u32, i: u32) -> Result<Self, RingError> {
        Self::generator(g, GeneratorId::a(i))
    }

    pub fn b(g: u32, i: u32) -> Result<Self, RingError> {
        Self::generator(g, GeneratorId::b(i))
    }

    pub fn c(g: u32) -> Self {
        Self::from_monomial(g, Modulus::Integers, Monomial::c_power(1), BigInt::one())
    }

    pub fn c_power(g: u32, k: u32) -> Self {
        Self::from_monomial(g, Modulus::Integers, Monomial::c_power(k), BigInt::one())
    }

    /// `ai* bi*` in canonical order.
    pub fn pair(g: u32, i: u32) -> Result<Self, RingError> {
        GeneratorId::a(i).check(g)?;
        let m = Monomial::new(0b11 << (2 * (i - 1)), 0);
        Ok(Self::from_monomial(g, Modulus::Integers, m, BigInt::one()))
    }

    /// `θ = Σ ai* bi*`.
    pub fn theta(g: u32) -> Self {
        let terms = (0..g).map(|i| (Monomial::new(0b11 << (2 * i), 0), BigInt::one()));
        Self::from_terms(g, Modulus::Integers, terms)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, BigInt> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn normalize_coeff(&self, c: BigInt) -> BigInt {
        match self.modulus {
            Modulus::Integers => c,
            Modulus::Two => c.mod_floor(&BigInt::from(2)),
        }
    }

    pub fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        let coeff = self.normalize_coeff(coeff);
        if coeff.is_zero() {
            return;
        }
        let sum = self.terms.remove(&m).unwrap_or_default() + coeff;
        let v = self.normalize_coeff(sum);
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), RingError> {
        if self.g != other.g {
            return Err(RingError::GenusMismatch(self.g, other.g));
        }
        if self.modulus != other.modulus {
            return Err(RingError::ModulusMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.try_add(&-other)
    }

    /// Bilinear product with Koszul signs.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.g, self.modulus);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((sign, m)) = m1.mul(*m2) {
                    let p = c1 * c2;
                    out.add_term(m, if sign < 0 { -p } else { p });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_terms(self.g, self.modulus, self.terms.iter().map(|(m, c)| (*m, c * k)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.g, self.modulus);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree(&self) -> Degree {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => Degree::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Degree::Pure(d)
                } else {
                    Degree::Mixed
                }
            }
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn homogeneous_part(&self, q: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == q);
        Self::from_terms(self.g, self.modulus, terms.map(|(m, c)| (*m, c.clone())))
    }

    /// Drops every term of degree above `max`.
    pub fn truncate(&self, max: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= max);
        Self::from_terms(self.g, self.modulus, terms.map(|(m, c)| (*m, c.clone())))
    }

    pub fn reduce_mod2(&self) -> Self {
        Self::from_terms(
            self.g,
            Modulus::Two,
            self.terms.iter().map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Lifts a mod-2 element to the integers with 0/1 coefficients.
    pub fn lift_integral(&self) -> Self {
        Self::from_terms(
            self.g,
            Modulus::Integers,
            self.terms.iter().map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Exact division of every coefficient; `None` if some coefficient is
    /// not divisible by `k`.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut out = Self::zero(self.g, self.modulus);
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.add_term(*m, q);
        }
        Some(out)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement(g={}, {:?}, {})", self.g, self.modulus, self)
    }
}

/// Renders e.g. `3c* - a1*b1* - a2*b2*`: ascending degree, `c*` powers
/// first inside a degree, then generator words in lexicographic order.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.degree(), Reverse(m.c_exp), Reverse(m.ext.reverse_bits())));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = *m == Monomial::ONE;
            if !abs.is_one() || unit {
                write!(f, "{abs}")?;
            }
            if !unit {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &RingElement {
            type Output = RingElement;
            /// Panics on mismatched genus or modulus; use the `try_` form to
            /// handle that as an error.
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).expect("incompatible ring elements")
            }
        }
        impl $trait for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$checked(&rhs).expect("incompatible ring elements")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::from_terms(self.g, self.modulus, self.terms.iter().map(|(m, c)| (*m, -c)))
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

/// Every monomial of degree `q` in genus `g`, in ascending canonical order.
pub fn monomials_of_degree(g: u32, q: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let n_odd = 2 * g;
    for k in 0..=n_odd.min(q) {
        if !(q - k).is_multiple_of(2) {
            continue;
        }
        let c_exp = (q - k) / 2;
        for_each_subset(n_odd, k, |mask| out.push(Monomial::new(mask, c_exp)));
    }
    out.sort();
    out
}

/// Calls `f` on every `k`-element subset of `0..n` encoded as a bitmask.
pub fn for_each_subset(n: u32, k: u32, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    // Gosper's hack over n-bit words.
    let mut s: u64 = (1u64 << k) - 1;
    let limit: u128 = 1u128 << n;
    while (s as u128) < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
}
