//! Chern and Stiefel-Whitney classes of `SP^n(M_g)`.
//!
//! The total Chern class is `(1 + c*)^(n-2g+1) * prod_i (1 + c* - ai* bi*)`.
//! When the exponent is negative, `(1 + c*)` is inverted as the truncated
//! geometric series, which is exact because everything above degree `2n`
//! vanishes.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::macdonald::MacdonaldRing;
use crate::ring::{Modulus, RingElement};

/// `(1 + c*)^e` truncated to degree `max_degree`, any integer `e`.
pub fn one_plus_c_power(g: u32, e: i64, max_degree: u32) -> RingElement {
    let mut out = RingElement::zero(g, Modulus::Integers);
    let mut coeff = BigInt::one();
    for k in 0..=max_degree / 2 {
        if coeff.is_zero() {
            break;
        }
        out.add_term(crate::ring::Monomial::c_power(k), coeff.clone());
        // C(e, k+1) = C(e, k) * (e - k) / (k + 1), exact for any integer e.
        coeff = coeff * BigInt::from(e - k as i64) / BigInt::from(k + 1);
    }
    out
}

/// `theta = sum_i ai* bi*`.
pub fn theta(g: u32) -> RingElement {
    RingElement::theta(g)
}

/// `sum_{i<j} ai* bi* aj* bj*`, the second elementary symmetric function of
/// the pair classes; equals `theta^2 / 2`.
pub fn pair_square_sum(g: u32) -> RingElement {
    let mut out = RingElement::zero(g, Modulus::Integers);
    for i in 1..=g {
        for j in i + 1..=g {
            let p = RingElement::pair(g, i).expect("in range");
            let q = RingElement::pair(g, j).expect("in range");
            out = out + &p * &q;
        }
    }
    out
}

/// `prod_{i<=g} ai* bi*`.
pub fn pair_product(g: u32) -> RingElement {
    (1..=g).fold(RingElement::one(g, Modulus::Integers), |acc, i| {
        &acc * &RingElement::pair(g, i).expect("in range")
    })
}

/// Total Chern class in the free algebra, truncated to degree `2n`.
pub fn chern_total_free(n: u32, g: u32) -> RingElement {
    chern_total_series(n, g, 2 * n)
}

/// The same product truncated at an arbitrary degree.
pub fn chern_total_series(n: u32, g: u32, top: u32) -> RingElement {
    let e = i64::from(n) - 2 * i64::from(g) + 1;
    let mut acc = one_plus_c_power(g, e, top);
    for i in 1..=g {
        let f = RingElement::one(g, Modulus::Integers) + RingElement::c(g)
            - RingElement::pair(g, i).expect("in range");
        acc = (&acc * &f).truncate(top);
    }
    acc
}

/// `c1 = (n - g + 1) c* - theta` in the free algebra.
pub fn c1_free(n: u32, g: u32) -> RingElement {
    RingElement::c(g).scale(&BigInt::from(i64::from(n) - i64::from(g) + 1)) - theta(g)
}

/// `c2 = C(n-g+1, 2) c*^2 - (n-g) c* theta + theta^2 / 2` in the free
/// algebra. Only stated for `g > 1`.
pub fn c2_closed_free(n: u32, g: u32) -> Option<RingElement> {
    if g <= 1 {
        return None;
    }
    let d = i64::from(n) - i64::from(g);
    let t = theta(g);
    let half_sq = (&t * &t).div_exact(&BigInt::from(2))?;
    let c = RingElement::c(g);
    Some(
        RingElement::c_power(g, 2).scale(&BigInt::from((d + 1) * d / 2))
            - (&c * &t).scale(&BigInt::from(d))
            + half_sq,
    )
}

pub fn chern_total(r: &MacdonaldRing) -> RingElement {
    r.normal_form(&chern_total_free(r.n(), r.g()))
}

pub fn c1(r: &MacdonaldRing) -> RingElement {
    r.normal_form(&c1_free(r.n(), r.g()))
}

/// Second Chern class: the closed form for `g > 1`, otherwise the degree-4
/// part of the total class.
pub fn c2(r: &MacdonaldRing) -> RingElement {
    match c2_closed_free(r.n(), r.g()) {
        Some(x) => r.normal_form(&x),
        None => r.normal_form(&chern_total_free(r.n(), r.g()).homogeneous_part(4)),
    }
}

/// `w2 = c1 mod 2`.
pub fn w2(r: &MacdonaldRing) -> RingElement {
    c1(r).reduce_mod2()
}

#[derive(Debug, Clone)]
pub struct CharClassSet {
    pub total_chern: RingElement,
    pub c1: RingElement,
    pub c2: RingElement,
    /// Whether `c2` came from the closed formula (`g > 1`).
    pub c2_closed_form: bool,
    pub theta: RingElement,
    pub w2: RingElement,
}

pub fn char_classes(r: &MacdonaldRing) -> CharClassSet {
    CharClassSet {
        total_chern: chern_total(r),
        c1: c1(r),
        c2: c2(r),
        c2_closed_form: r.g() > 1,
        theta: r.normal_form(&theta(r.g())),
        w2: w2(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macdonald::build;
    use num_rational::BigRational;

    // Generalized binomial via rationals, as an independent check.
    fn binom_q(e: i64, k: u32) -> BigInt {
        let mut acc = BigRational::one();
        for i in 0..k {
            acc *= BigRational::new(BigInt::from(e - i64::from(i)), BigInt::from(i + 1));
        }
        assert!(acc.is_integer());
        acc.to_integer()
    }

    #[test]
    fn power_series_coefficients() {
        for e in -7..=7 {
            let p = one_plus_c_power(0, e, 16);
            for k in 0..=8 {
                let m = crate::ring::Monomial::c_power(k);
                assert_eq!(p.coefficient(&m), binom_q(e, k), "e={e} k={k}");
            }
        }
    }

    #[test]
    fn projective_space_total_class() {
        for n in 1..=5 {
            let r = build(n, 0).unwrap();
            let c = chern_total(&r);
            for k in 0..=n {
                let m = crate::ring::Monomial::c_power(k);
                assert_eq!(c.coefficient(&m), binom_q(i64::from(n) + 1, k));
            }
        }
    }

    #[test]
    fn c1_low_parts() {
        let r = build(3, 1).unwrap();
        assert_eq!(c1(&r).to_string(), "3c* - a1*b1*");
        for (n, g) in [(2, 2), (3, 2), (4, 3), (2, 0), (1, 3)] {
            let r = build(n, g).unwrap();
            assert_eq!(chern_total(&r).homogeneous_part(2), c1(&r));
        }
    }

    #[test]
    fn c2_closed_form_matches_total_class() {
        for g in 2..=4 {
            for n in 1..=4 {
                let free = chern_total_series(n, g, 4).homogeneous_part(4);
                assert_eq!(free, c2_closed_free(n, g).unwrap(), "free, n={n} g={g}");
            }
        }
        for (n, g) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            let r = build(n, g).unwrap();
            assert_eq!(chern_total(&r).homogeneous_part(4), c2(&r));
        }
    }

    #[test]
    fn theta_square_identity() {
        for g in 2..=5 {
            let t = theta(g);
            assert_eq!(&t * &t, pair_square_sum(g).scale(&BigInt::from(2)));
        }
        assert_eq!(&theta(2) * &theta(2), pair_product(2).scale(&BigInt::from(2)));
    }

    #[test]
    fn w2_for_odd_difference() {
        let r = build(3, 2).unwrap();
        assert_eq!(w2(&r), r.normal_form(&theta(2)).reduce_mod2());
    }
}
