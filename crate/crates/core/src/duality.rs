//! Top-degree pairing, second homology, and spin structures.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charclasses;
use crate::macdonald::MacdonaldRing;
use crate::ring::{dual_signature, Degree, GeneratorId, Monomial, RingElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error("degrees {0} and {1} do not add up to the top degree {2}")]
    DegreeMismatch(u32, u32, u32),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("pairing of {cohomology} with {homology} is not determined")]
    NotDetermined { cohomology: String, homology: String },
    #[error("evaluation needs a degree-2 class, got degree {0:?}")]
    NotDegreeTwo(Degree),
    #[error("top degree has rank {0}, expected 1")]
    NoFundamentalClass(usize),
}

/// Basis elements of `H_2` in Pontryagin-product form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum H2Term {
    C,
    AA(u32, u32),
    BB(u32, u32),
    AB(u32, u32),
}

impl fmt::Display for H2Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H2Term::C => write!(f, "c"),
            H2Term::AA(i, j) => write!(f, "a{i}.a{j}"),
            H2Term::BB(i, j) => write!(f, "b{i}.b{j}"),
            H2Term::AB(i, j) => write!(f, "a{i}.b{j}"),
        }
    }
}

/// All basis terms: `c`, `ai.aj` and `bi.bj` for `i < j`, `ai.bj` for all `i, j`.
pub fn h2_basis(g: u32) -> Vec<H2Term> {
    let mut out = vec![H2Term::C];
    for i in 1..=g {
        for j in i + 1..=g {
            out.push(H2Term::AA(i, j));
        }
    }
    for i in 1..=g {
        for j in i + 1..=g {
            out.push(H2Term::BB(i, j));
        }
    }
    for i in 1..=g {
        for j in 1..=g {
            out.push(H2Term::AB(i, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Class {
    pub g: u32,
    pub terms: BTreeMap<H2Term, BigInt>,
}

impl H2Class {
    pub fn from_terms(g: u32, terms: impl IntoIterator<Item = (H2Term, i64)>) -> Self {
        let mut out = BTreeMap::new();
        for (t, v) in terms {
            let e = out.entry(t).or_insert_with(BigInt::zero);
            *e += v;
        }
        out.retain(|_, v: &mut BigInt| !v.is_zero());
        H2Class { g, terms: out }
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, v)) in self.terms.iter().enumerate() {
            let abs = v.abs();
            match (k, v.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `u = c - sum_i ai.bi`.
pub fn spherical_u(g: u32) -> H2Class {
    H2Class::from_terms(g, std::iter::once((H2Term::C, 1)).chain((1..=g).map(|i| (H2Term::AB(i, i), -1))))
}

/// Which pair class `ai* bi*` a monomial is, if any.
fn as_pair(m: Monomial) -> Option<u32> {
    if m.c_exp != 0 || m.ext.count_ones() != 2 {
        return None;
    }
    let lo = m.ext.trailing_zeros();
    let a = GeneratorId::from_bit(lo);
    (lo.is_multiple_of(2) && m.ext == 0b11 << lo).then_some(a.index)
}

/// The partial Kronecker pairing between degree-2 monomials and `H_2` terms.
pub fn evaluation_table(m: Monomial, t: H2Term) -> Result<i64, DualityError> {
    let undetermined = || DualityError::NotDetermined { cohomology: m.to_string(), homology: t.to_string() };
    if m == Monomial::c_power(1) {
        return match t {
            H2Term::C => Ok(1),
            H2Term::AB(i, j) if i == j => Ok(0),
            _ => Err(undetermined()),
        };
    }
    if let Some(i) = as_pair(m) {
        return match t {
            H2Term::C => Ok(1),
            H2Term::AB(j, k) if j == k => Ok(i64::from(i == j)),
            _ => Err(undetermined()),
        };
    }
    Err(undetermined())
}

/// Bilinear extension of [`evaluation_table`]. Mod-2 inputs yield an
/// integer whose parity is the meaningful part.
pub fn evaluate(x: &RingElement, z: &H2Class) -> Result<BigInt, DualityError> {
    match x.degree() {
        Degree::Pure(2) | Degree::Zero => {}
        d => return Err(DualityError::NotDegreeTwo(d)),
    }
    let mut acc = BigInt::zero();
    for (m, a) in x.terms() {
        for (t, b) in &z.terms {
            acc += a * b * evaluation_table(*m, *t)?;
        }
    }
    Ok(acc)
}

fn fundamental(r: &MacdonaldRing) -> Result<Monomial, DualityError> {
    r.top_monomial().ok_or_else(|| DualityError::NoFundamentalClass(r.basis(r.top_degree()).len()))
}

/// Sign `e` with `normal_form(c*^n) = e * top_monomial`.
pub fn orientation_sign(r: &MacdonaldRing) -> Result<BigInt, DualityError> {
    Ok(r.reduce_monomial(Monomial::c_power(r.n())).coefficient(&fundamental(r)?))
}

fn pure_degree(x: &RingElement) -> Result<Option<u32>, DualityError> {
    match x.degree() {
        Degree::Zero => Ok(None),
        Degree::Pure(q) => Ok(Some(q)),
        Degree::Mixed => Err(DualityError::NotHomogeneous),
    }
}

/// Coefficient of the fundamental class in `x y`, oriented so that
/// `c*^a` pairs with `c*^(n-a)` to `+1`.
pub fn top_pair(r: &MacdonaldRing, x: &RingElement, y: &RingElement) -> Result<BigInt, DualityError> {
    let (Some(p), Some(q)) = (pure_degree(x)?, pure_degree(y)?) else {
        return Ok(BigInt::zero());
    };
    if p + q != r.top_degree() {
        return Err(DualityError::DegreeMismatch(p, q, r.top_degree()));
    }
    let prod = r.mul(x, y);
    Ok(prod.coefficient(&fundamental(r)?) * orientation_sign(r)?)
}

fn monomial_pair(r: &MacdonaldRing, top: &Monomial, eps: &BigInt, x: Monomial, y: Monomial) -> BigInt {
    let Some((sign, m)) = x.mul(y) else {
        return BigInt::zero();
    };
    r.reduce_monomial(m).coefficient(top) * eps * i64::from(sign)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePairing {
    pub degree: u32,
    pub rank: usize,
    pub dual_rank: usize,
    /// Determinant of the full pairing matrix up to sign, as the product of
    /// the weight-block determinants.
    pub determinant: String,
    pub unimodular: bool,
}

/// Pairing matrix of `basis(q)` against `basis(2n - q)`, decomposed by
/// weight: a monomial of signature `s` can only pair with signature
/// `dual_signature(s)`.
pub fn pairing_determinant(r: &MacdonaldRing, q: u32) -> Result<DegreePairing, DualityError> {
    let fund = fundamental(r)?;
    let eps = orientation_sign(r)?;
    let top = r.top_degree();
    let left = r.basis(q);
    let right = r.basis(top - q);
    let mut blocks: BTreeMap<u64, (Vec<Monomial>, Vec<Monomial>)> = BTreeMap::new();
    for m in left {
        blocks.entry(m.signature()).or_default().0.push(*m);
    }
    for m in right {
        blocks.entry(dual_signature(m.signature())).or_default().1.push(*m);
    }
    let mut det = BigInt::one();
    if left.len() != right.len() {
        det = BigInt::zero();
    }
    for (rows, cols) in blocks.values() {
        if det.is_zero() {
            break;
        }
        if rows.len() != cols.len() {
            det = BigInt::zero();
            break;
        }
        let mat: Vec<Vec<BigInt>> =
            rows.iter().map(|x| cols.iter().map(|y| monomial_pair(r, &fund, &eps, *x, *y)).collect()).collect();
        det *= bareiss_det(mat);
    }
    let det = det.abs();
    Ok(DegreePairing {
        degree: q,
        rank: left.len(),
        dual_rank: right.len(),
        unimodular: det.is_one(),
        determinant: det.to_string(),
    })
}

pub fn pairing_report(r: &MacdonaldRing) -> Result<Vec<DegreePairing>, DualityError> {
    (0..=r.top_degree()).map(|q| pairing_determinant(r, q)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinStatus {
    pub manifold_spin: bool,
    pub cover_spin: bool,
    /// Set for `n = 1`, where the answer is the surface itself.
    pub degenerate: bool,
}

/// Spin table by rule: for `g > 0` and `n >= 2` the manifold is never spin
/// and its universal cover is spin iff `n - g` is odd; for `g = 0` the
/// manifold is projective space, spin iff `n` is odd.
pub fn spin_status(n: u32, g: u32) -> SpinStatus {
    if n == 1 {
        return SpinStatus { manifold_spin: true, cover_spin: true, degenerate: true };
    }
    if g == 0 {
        let s = n % 2 == 1;
        return SpinStatus { manifold_spin: s, cover_spin: s, degenerate: false };
    }
    let odd = (i64::from(n) - i64::from(g)).rem_euclid(2) == 1;
    SpinStatus { manifold_spin: false, cover_spin: odd, degenerate: false }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinEvaluation {
    /// `<w2, u>` mod 2.
    pub w2_on_u: u8,
    /// `<w2, a1.b1>` mod 2, for `g > 0`.
    pub w2_on_a1b1: Option<u8>,
    pub status: SpinStatus,
}

/// Spin status derived from evaluating `w2` on `u` and on `a1.b1`. The
/// cover is spin iff `w2` kills the spherical class `u`; the manifold is
/// spin iff `w2` also kills `a1.b1` (for `g = 0`, `H_2` is spanned by `u`).
pub fn spin_from_evaluation(r: &MacdonaldRing) -> Result<SpinEvaluation, DualityError> {
    let (n, g) = (r.n(), r.g());
    let w2 = charclasses::w2(r);
    let parity = |v: BigInt| -> u8 { v.mod_floor(&BigInt::from(2)).to_u8().unwrap_or(0) };
    let on_u = parity(evaluate(&w2, &spherical_u(g))?);
    if n == 1 {
        return Ok(SpinEvaluation { w2_on_u: on_u, w2_on_a1b1: None, status: spin_status(1, g) });
    }
    let on_ab = if g > 0 {
        Some(parity(evaluate(&w2, &H2Class::from_terms(g, [(H2Term::AB(1, 1), 1)]))?))
    } else {
        None
    };
    let cover_spin = on_u == 0;
    let manifold_spin = cover_spin && on_ab.unwrap_or(0) == 0;
    Ok(SpinEvaluation {
        w2_on_u: on_u,
        w2_on_a1b1: on_ab,
        status: SpinStatus { manifold_spin, cover_spin, degenerate: false },
    })
}

/// `1` if already spin, `2^g` if only the universal cover is spin, `None`
/// if no cover is spin.
pub fn spin_cover_sheets(n: u32, g: u32) -> Option<u64> {
    let s = spin_status(n, g);
    if s.manifold_spin {
        Some(1)
    } else if s.cover_spin {
        Some(1u64 << g)
    } else {
        None
    }
}

/// Coordinates of every degree-`q` basis monomial's dual under the top
/// pairing, used for diagnostics.
pub fn pairing_lookup(
    r: &MacdonaldRing,
    q: u32,
) -> Result<HashMap<Monomial, Vec<(Monomial, BigInt)>>, DualityError> {
    let fund = fundamental(r)?;
    let eps = orientation_sign(r)?;
    let mut out = HashMap::new();
    for x in r.basis(q) {
        let row: Vec<(Monomial, BigInt)> = r
            .basis(r.top_degree() - q)
            .iter()
            .map(|y| (*y, monomial_pair(r, &fund, &eps, *x, *y)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out.insert(*x, row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macdonald::build;
    use crate::ring::Modulus;

    #[test]
    fn basis_size() {
        for g in 0..=5u32 {
            assert_eq!(h2_basis(g).len() as u32, 1 + g * (g.saturating_sub(1)) + g * g);
        }
    }

    #[test]
    fn spherical_class_rendering() {
        assert_eq!(spherical_u(0).to_string(), "c");
        assert_eq!(spherical_u(2).to_string(), "c - a1.b1 - a2.b2");
    }

    #[test]
    fn evaluations() {
        let g = 3;
        let t = RingElement::theta(g);
        assert_eq!(evaluate(&t, &spherical_u(g)).unwrap(), BigInt::zero());
        assert_eq!(evaluate(&RingElement::c(g), &spherical_u(g)).unwrap(), BigInt::one());
        let ab = H2Class::from_terms(g, [(H2Term::AB(1, 1), 1)]);
        assert_eq!(evaluate(&t, &ab).unwrap(), BigInt::one());
    }

    #[test]
    fn undefined_pairs_are_errors() {
        let g = 2;
        let x = &RingElement::a(g, 1).unwrap() * &RingElement::a(g, 2).unwrap();
        assert!(matches!(evaluate(&x, &spherical_u(g)), Err(DualityError::NotDetermined { .. })));
        let z = H2Class::from_terms(g, [(H2Term::AB(1, 2), 1)]);
        assert!(evaluate(&RingElement::c(g), &z).is_err());
    }

    #[test]
    fn top_pairing_orientation() {
        let r = build(3, 2).unwrap();
        for a in 0..=3 {
            let x = RingElement::c_power(2, a);
            let y = RingElement::c_power(2, 3 - a);
            assert_eq!(top_pair(&r, &x, &y).unwrap(), BigInt::one());
        }
        assert!(top_pair(&r, &RingElement::c(2), &RingElement::c(2)).is_err());
        assert!(top_pair(&r, &RingElement::c(2), &RingElement::zero(2, Modulus::Integers)).unwrap().is_zero());
    }

    #[test]
    fn unimodular_small_cases() {
        for (n, g) in [(1, 2), (2, 2), (3, 2), (2, 3), (4, 1)] {
            let r = build(n, g).unwrap();
            assert!(pairing_report(&r).unwrap().iter().all(|d| d.unimodular), "({n},{g})");
        }
    }

    #[test]
    fn bareiss_matches_rational() {
        let m = vec![vec![2i64, 3, 1], vec![4, 1, -2], vec![0, 5, 7]];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|v| BigInt::from(*v)).collect()).collect();
        let rat = crate::oracle::rational_det(&m);
        assert_eq!(num_rational::BigRational::from_integer(bareiss_det(big)), rat);
    }

    #[test]
    fn spin_routes_agree() {
        for n in 1..=5 {
            for g in 0..=4 {
                let r = build(n, g).unwrap();
                let ev = spin_from_evaluation(&r).unwrap();
                assert_eq!(ev.status, spin_status(n, g), "({n},{g})");
            }
        }
        assert_eq!(spin_cover_sheets(3, 2), Some(4));
        assert_eq!(spin_cover_sheets(3, 0), Some(1));
        assert_eq!(spin_cover_sheets(4, 2), None);
    }
}
