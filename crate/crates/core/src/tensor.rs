//! `H*(X) ⊗ H*(X)` with Koszul signs, zero-divisors, and the product of
//! squared zero-divisors used as a lower bound for topological complexity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::macdonald::MacdonaldRing;
use crate::ring::{Monomial, RingElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("the certificate is only defined for n >= 2 (got n = {0})")]
    OutOfScope(u32),
}

/// Sparse combination of `x ⊗ y` with both factors basis monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Monomial, Monomial), BigInt>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::pure(&Monomial::ONE, &Monomial::ONE, BigInt::one())
    }

    fn pure(x: &Monomial, y: &Monomial, v: BigInt) -> Self {
        let mut t = Self::zero();
        t.add_term(*x, *y, v);
        t
    }

    /// `x ⊗ y` for ring elements already in normal form.
    pub fn tensor(x: &RingElement, y: &RingElement) -> Self {
        let mut t = Self::zero();
        for (mx, vx) in x.terms() {
            for (my, vy) in y.terms() {
                t.add_term(*mx, *my, vx * vy);
            }
        }
        t
    }

    pub fn add_term(&mut self, x: Monomial, y: Monomial, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let e = self.terms.entry((x, y)).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.terms.remove(&(x, y));
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: Monomial, y: Monomial) -> BigInt {
        self.terms.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((x, y), v) in &other.terms {
            t.add_term(*x, *y, -v);
        }
        t
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((x, y), v)) in self.terms.iter().enumerate() {
            let sep = match (k, v < &BigInt::zero()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let abs = if v < &BigInt::zero() { -v } else { v.clone() };
            let show = |m: &Monomial| if *m == Monomial::ONE { "1".to_string() } else { m.to_string() };
            write!(f, "{sep}{abs}({}⊗{})", show(x), show(y))?;
        }
        Ok(())
    }
}

/// `(x ⊗ y)(x' ⊗ y') = (-1)^(|y||x'|) (x x') ⊗ (y y')`, with both factors
/// brought back to normal form.
pub fn mul(r: &MacdonaldRing, a: &TensorElement, b: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for ((x, y), u) in &a.terms {
        for ((x2, y2), v) in &b.terms {
            let koszul = if (y.degree() * x2.degree()) % 2 == 1 { -1 } else { 1 };
            let (Some((s1, xx)), Some((s2, yy))) = (x.mul(*x2), y.mul(*y2)) else {
                continue;
            };
            let left = r.reduce_monomial(xx);
            let right = r.reduce_monomial(yy);
            if left.is_zero() || right.is_zero() {
                continue;
            }
            let coeff = u * v * (koszul * i32::from(s1) * i32::from(s2));
            for (lm, lv) in left.terms() {
                for (rm, rv) in right.terms() {
                    out.add_term(*lm, *rm, &coeff * lv * rv);
                }
            }
        }
    }
    out
}

pub fn pow(r: &MacdonaldRing, a: &TensorElement, k: u32) -> TensorElement {
    (0..k).fold(TensorElement::one(), |acc, _| mul(r, &acc, a))
}

/// `x ⊗ 1 - 1 ⊗ x`.
pub fn zero_divisor(r: &MacdonaldRing, x: &RingElement) -> TensorElement {
    let x = r.normal_form(x);
    let one = RingElement::one(r.g(), r.modulus());
    TensorElement::tensor(&x, &one).sub(&TensorElement::tensor(&one, &x))
}

/// The multiplication map `x ⊗ y -> x y`.
pub fn diagonal(r: &MacdonaldRing, t: &TensorElement) -> RingElement {
    let mut acc = r.zero();
    for ((x, y), v) in t.terms() {
        if let Some((s, m)) = x.mul(*y) {
            for (bm, bv) in r.reduce_monomial(m).terms() {
                acc.add_term(*bm, v * bv * i32::from(s));
            }
        }
    }
    acc
}

/// Zero-divisor factors from which a certificate is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroDivisorFactor {
    A(u32),
    B(u32),
    C,
}

impl fmt::Display for ZeroDivisorFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroDivisorFactor::A(i) => write!(f, "bar(a{i}*)"),
            ZeroDivisorFactor::B(i) => write!(f, "bar(b{i}*)"),
            ZeroDivisorFactor::C => write!(f, "bar(c*)"),
        }
    }
}

impl ZeroDivisorFactor {
    pub fn element(self, r: &MacdonaldRing) -> TensorElement {
        let g = r.g();
        let x = match self {
            ZeroDivisorFactor::A(i) => RingElement::a(g, i).expect("in range"),
            ZeroDivisorFactor::B(i) => RingElement::b(g, i).expect("in range"),
            ZeroDivisorFactor::C => RingElement::c(g),
        };
        zero_divisor(r, &x)
    }
}

#[derive(Debug, Clone)]
pub struct TcCertificate {
    /// Factors in multiplication order, with repetition.
    pub factors: Vec<ZeroDivisorFactor>,
    pub product: TensorElement,
    /// Number of zero-divisor factors, `4n` or `2n + 2g`.
    pub length: u32,
    /// `w` with target term `nf(w) ⊗ nf(w)`.
    pub target: Monomial,
    /// `lambda` with `product = lambda * nf(w) ⊗ nf(w)`, or 0 if the product
    /// is not a multiple of the target term.
    pub leading_coefficient: BigInt,
    /// The coefficient the closed formula predicts.
    pub expected_coefficient: BigInt,
}

impl TcCertificate {
    pub fn is_nonzero(&self) -> bool {
        !self.product.is_zero()
    }

    pub fn matches_expected(&self) -> bool {
        self.leading_coefficient == self.expected_coefficient
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Predicted coefficient: `2^(2n)` for `n <= g`, else
/// `(-1)^(n-g) 2^(2g) C(2n-2g, n-g)`.
pub fn expected_leading_coefficient(n: u32, g: u32) -> BigInt {
    if n <= g {
        BigInt::one() << (2 * n)
    } else {
        let d = n - g;
        let sign = if d % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        sign * (BigInt::one() << (2 * g)) * binomial(2 * d, d)
    }
}

/// Factor list: `(bar ai*)^2 (bar bi*)^2` for `i <= min(n, g)`, then
/// `(bar c*)^(2n-2g)` when `n > g`.
pub fn certificate_factors(n: u32, g: u32) -> Vec<ZeroDivisorFactor> {
    let mut out = Vec::new();
    for i in 1..=n.min(g) {
        out.extend([ZeroDivisorFactor::A(i); 2]);
        out.extend([ZeroDivisorFactor::B(i); 2]);
    }
    if n > g {
        out.extend(std::iter::repeat_n(ZeroDivisorFactor::C, 2 * (n - g) as usize));
    }
    out
}

/// Multiplies out a list of zero-divisor factors.
pub fn product_of(r: &MacdonaldRing, factors: &[ZeroDivisorFactor]) -> TensorElement {
    let mut acc = TensorElement::one();
    for f in factors {
        acc = mul(r, &acc, &f.element(r));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

pub fn tc_certificate(r: &MacdonaldRing) -> Result<TcCertificate, TensorError> {
    let (n, g) = (r.n(), r.g());
    if n < 2 {
        return Err(TensorError::OutOfScope(n));
    }
    let factors = certificate_factors(n, g);
    let product = product_of(r, &factors);
    let k = n.min(g);
    let ext = (0..2 * k).fold(0u64, |m, b| m | 1 << b);
    let target = Monomial::new(ext, n - k);
    let w = r.reduce_monomial(target);
    let t = TensorElement::tensor(&w, &w);
    let leading_coefficient = proportionality(&product, &t);
    Ok(TcCertificate {
        length: factors.len() as u32,
        factors,
        product,
        target,
        leading_coefficient,
        expected_coefficient: expected_leading_coefficient(n, g),
    })
}

/// `lambda` with `p = lambda * t`, or 0 if there is none (or `p = 0`).
fn proportionality(p: &TensorElement, t: &TensorElement) -> BigInt {
    let Some(((x, y), tv)) = t.terms().next() else {
        return BigInt::zero();
    };
    let pv = p.coefficient(*x, *y);
    if pv.is_zero() || &pv % tv != BigInt::zero() {
        return BigInt::zero();
    }
    let lambda = &pv / tv;
    let mut scaled = TensorElement::zero();
    for ((a, b), v) in t.terms() {
        scaled.add_term(*a, *b, v * &lambda);
    }
    if &scaled == p {
        lambda
    } else {
        BigInt::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macdonald::build;

    #[test]
    fn zero_divisors_lie_in_the_kernel() {
        let r = build(3, 2).unwrap();
        for f in [ZeroDivisorFactor::A(1), ZeroDivisorFactor::B(2), ZeroDivisorFactor::C] {
            assert!(diagonal(&r, &f.element(&r)).is_zero());
        }
        let prod = mul(&r, &ZeroDivisorFactor::A(1).element(&r), &ZeroDivisorFactor::C.element(&r));
        assert!(diagonal(&r, &prod).is_zero());
    }

    #[test]
    fn odd_zero_divisors_square_to_zero() {
        // With graded signs (a⊗1)(1⊗a) = a⊗a and (1⊗a)(a⊗1) = -a⊗a.
        let r = build(2, 2).unwrap();
        let a = ZeroDivisorFactor::A(1).element(&r);
        assert!(mul(&r, &a, &a).is_zero());
    }

    #[test]
    fn even_zero_divisor_square() {
        let r = build(2, 1).unwrap();
        let c = ZeroDivisorFactor::C.element(&r);
        let sq = mul(&r, &c, &c);
        let (cm, one) = (Monomial::c_power(1), Monomial::ONE);
        assert_eq!(sq.coefficient(cm, cm), BigInt::from(-2));
        assert_eq!(sq.coefficient(Monomial::c_power(2), one), BigInt::one());
        assert_eq!(sq.coefficient(one, Monomial::c_power(2)), BigInt::one());
        assert_eq!(sq.len(), 3);
    }

    #[test]
    fn projective_space_certificate() {
        for n in 2..=5 {
            let r = build(n, 0).unwrap();
            let cert = tc_certificate(&r).unwrap();
            assert_eq!(cert.length, 2 * n);
            assert!(cert.matches_expected(), "n={n}: {}", cert.leading_coefficient);
        }
    }

    #[test]
    fn expected_values() {
        assert_eq!(expected_leading_coefficient(2, 3), BigInt::from(16));
        assert_eq!(expected_leading_coefficient(3, 1), BigInt::from(24));
        assert_eq!(expected_leading_coefficient(2, 2), BigInt::from(16));
        assert_eq!(certificate_factors(3, 1).len(), 8);
    }

    #[test]
    fn out_of_scope_for_surfaces() {
        let r = build(1, 2).unwrap();
        assert_eq!(tc_certificate(&r).unwrap_err(), TensorError::OutOfScope(1));
    }

    #[test]
    fn one_more_factor_vanishes() {
        let r = build(3, 0).unwrap();
        let mut f = certificate_factors(3, 0);
        f.push(ZeroDivisorFactor::C);
        assert!(product_of(&r, &f).is_zero());
    }
}
