//! The quotient ring `H*(SP^n(M_g); Z)`.
//!
//! The ideal is generated by the relation words
//! `a_I b_J (c* - a_k1* b_k1*)…(c* - a_kr* b_kr*) (c*)^s` with pairwise
//! distinct indices and `|I| + |J| + 2r + s >= n + 1`. Only the minimal
//! words (`= n + 1`) are generated; each degree slice of the ideal is then
//! the span of the minimal words of that degree together with the products
//! of every generator with the (already reduced) slice one or two degrees
//! down. Each slice is brought to Hermite normal form under a fixed column
//! order, and the quotient basis is the set of non-pivot monomials.
//!
//! The integral construction requires every Hermite pivot to be a unit.
//! That holds whenever the quotient is free on the non-pivot monomials; a
//! non-unit pivot is reported as an error rather than silently accepted.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::echelon::{Coefficient, Echelon, Gf2, Row};
use crate::int::Int;
use crate::ring::{
    monomials_of_degree, GeneratorId, Modulus, Monomial, RingElement, RingError, MAX_GENUS,
};

/// Default bound on `2^(2g) * (n + 1)`, the number of free monomials.
pub const DEFAULT_GUARD: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("n must be at least 1")]
    InvalidN,
    #[error(
        "(n, g) = ({n}, {g}) needs {cells} free monomials, above the limit {limit}; \
         pass the guard override to build it anyway"
    )]
    TooLarge { n: u32, g: u32, cells: u128, limit: u64 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("non-unit Hermite pivot {pivot} at {monomial} in degree {degree}")]
    NonUnitPivot { degree: u32, monomial: Monomial, pivot: String },
}

/// Number of free monomials `2^(2g) * (n + 1)` the guard is applied to.
pub fn free_monomial_count(n: u32, g: u32) -> u128 {
    (1u128 << (2 * g.min(63))) * (u128::from(n) + 1)
}

pub fn check_guard(n: u32, g: u32, override_guard: bool) -> Result<(), BuildError> {
    if n == 0 {
        return Err(BuildError::InvalidN);
    }
    if g > MAX_GENUS {
        return Err(RingError::GenusTooLarge(g).into());
    }
    let cells = free_monomial_count(n, g);
    if !override_guard && cells > u128::from(DEFAULT_GUARD) {
        return Err(BuildError::TooLarge { n, g, cells, limit: DEFAULT_GUARD });
    }
    Ok(())
}

/// Relation words grouped by the kinds of factors they contain, used to knock
/// out part of the generating set when testing that the checks are not
/// vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFamily {
    /// Only odd generators: `r = 0`, `s = 0`.
    OddWord,
    /// At least one factor `c* - ak* bk*` and no power of `c*`.
    PairFactor,
    /// A positive power of `c*`.
    CPower,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 3] =
        [RelationFamily::OddWord, RelationFamily::PairFactor, RelationFamily::CPower];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::OddWord => "odd_word",
            RelationFamily::PairFactor => "pair_factor",
            RelationFamily::CPower => "c_power",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// One relation word. Index sets are bitmasks over `0..g` (bit `i-1` for
/// index `i`) and are pairwise disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationInstance {
    pub a_indices: u64,
    pub b_indices: u64,
    pub pair_indices: u64,
    pub s: u32,
}

impl RelationInstance {
    pub fn l(&self) -> u32 {
        self.a_indices.count_ones()
    }

    pub fn m(&self) -> u32 {
        self.b_indices.count_ones()
    }

    pub fn r(&self) -> u32 {
        self.pair_indices.count_ones()
    }

    /// `l + m + 2r + s`.
    pub fn weight(&self) -> u32 {
        self.l() + self.m() + 2 * self.r() + self.s
    }

    pub fn degree(&self) -> u32 {
        self.l() + self.m() + 2 * self.r() + 2 * self.s
    }

    pub fn family(&self) -> RelationFamily {
        match (self.r(), self.s) {
            (0, 0) => RelationFamily::OddWord,
            (_, 0) => RelationFamily::PairFactor,
            _ => RelationFamily::CPower,
        }
    }

    /// The relation as an element of the free algebra, factors multiplied
    /// in the order `a_I`, `b_J`, `(c* - a_k* b_k*)`, `(c*)^s`.
    pub fn expand(&self, g: u32) -> RingElement {
        let mut acc = RingElement::one(g, Modulus::Integers);
        for i in indices(self.a_indices) {
            acc = &acc * &RingElement::a(g, i).expect("index in range");
        }
        for j in indices(self.b_indices) {
            acc = &acc * &RingElement::b(g, j).expect("index in range");
        }
        for k in indices(self.pair_indices) {
            let factor = RingElement::c(g) - RingElement::pair(g, k).expect("index in range");
            acc = &acc * &factor;
        }
        &acc * &RingElement::c_power(g, self.s)
    }
}

fn indices(mask: u64) -> impl Iterator<Item = u32> {
    (0..64u32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

/// Enumerates relation words with weight in `weight_range` and degree at
/// most `max_degree`.
fn enumerate_instances(
    g: u32,
    min_weight: u32,
    max_weight: u32,
    max_degree: u32,
) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    let mut stack = RelationInstance { a_indices: 0, b_indices: 0, pair_indices: 0, s: 0 };
    fn rec(
        i: u32,
        g: u32,
        cur: &mut RelationInstance,
        min_w: u32,
        max_w: u32,
        max_d: u32,
        out: &mut Vec<RelationInstance>,
    ) {
        let base_deg = cur.l() + cur.m() + 2 * cur.r();
        if base_deg > max_d || base_deg > max_w {
            return;
        }
        if i == g {
            // weight = base + s, degree = base + 2s.
            let s_lo = min_w.saturating_sub(base_deg);
            let s_hi_w = max_w - base_deg;
            let s_hi_d = (max_d - base_deg) / 2;
            for s in s_lo..=s_hi_w.min(s_hi_d) {
                out.push(RelationInstance { s, ..*cur });
            }
            return;
        }
        let bit = 1u64 << i;
        rec(i + 1, g, cur, min_w, max_w, max_d, out);
        cur.a_indices |= bit;
        rec(i + 1, g, cur, min_w, max_w, max_d, out);
        cur.a_indices &= !bit;
        cur.b_indices |= bit;
        rec(i + 1, g, cur, min_w, max_w, max_d, out);
        cur.b_indices &= !bit;
        cur.pair_indices |= bit;
        rec(i + 1, g, cur, min_w, max_w, max_d, out);
        cur.pair_indices &= !bit;
    }
    rec(0, g, &mut stack, min_weight, max_weight, max_degree, &mut out);
    out.sort();
    out
}

/// Relation words of weight exactly `n + 1` and degree at most `2n`.
pub fn minimal_instances(n: u32, g: u32) -> Vec<RelationInstance> {
    enumerate_instances(g, n + 1, n + 1, 2 * n)
}

/// Every relation word of weight at least `n + 1` and degree at most `2n`.
pub fn all_instances(n: u32, g: u32) -> Vec<RelationInstance> {
    enumerate_instances(g, n + 1, u32::MAX / 4, 2 * n)
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub modulus: Modulus,
    pub override_guard: bool,
    /// Debug knob: leave one family out of the generating set.
    pub drop_family: Option<RelationFamily>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { modulus: Modulus::Integers, override_guard: false, drop_family: None }
    }
}

/// One degree of the quotient.
#[derive(Debug, Clone)]
pub struct DegreeSlice {
    degree: u32,
    /// Free monomials in column order (descending canonical order).
    columns: Vec<Monomial>,
    basis: Vec<Monomial>,
    basis_pos: HashMap<Monomial, usize>,
    /// Pivot monomial -> its expression in basis monomials.
    reduction: HashMap<Monomial, Vec<(Monomial, BigInt)>>,
    /// Hermite rows of the ideal slice, in pivot order.
    ideal_rows: Vec<Vec<(Monomial, BigInt)>>,
}

impl DegreeSlice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn ideal_rows(&self) -> &[Vec<(Monomial, BigInt)>] {
        &self.ideal_rows
    }
}

/// `H*(SP^n(M_g))` presented by its monomial basis and reduction maps.
#[derive(Debug, Clone)]
pub struct MacdonaldRing {
    n: u32,
    g: u32,
    modulus: Modulus,
    dropped: Option<RelationFamily>,
    slices: Vec<DegreeSlice>,
}

pub fn build(n: u32, g: u32) -> Result<MacdonaldRing, BuildError> {
    build_with(n, g, &BuildOptions::default())
}

pub fn build_with(n: u32, g: u32, opts: &BuildOptions) -> Result<MacdonaldRing, BuildError> {
    check_guard(n, g, opts.override_guard)?;
    let instances: Vec<RelationInstance> = minimal_instances(n, g)
        .into_iter()
        .filter(|r| Some(r.family()) != opts.drop_family)
        .collect();
    let slices = match opts.modulus {
        Modulus::Integers => build_slices::<Int>(n, g, &instances, |c| Int::from(c), |c| c.to_bigint())?,
        Modulus::Two => build_slices::<Gf2>(
            n,
            g,
            &instances,
            |c| Gf2(c.bit(0)),
            |c| if c.0 { BigInt::one() } else { BigInt::zero() },
        )?,
    };
    Ok(MacdonaldRing { n, g, modulus: opts.modulus, dropped: opts.drop_family, slices })
}

fn build_slices<C: Coefficient>(
    n: u32,
    g: u32,
    instances: &[RelationInstance],
    to_coeff: impl Fn(&BigInt) -> C,
    from_coeff: impl Fn(&C) -> BigInt,
) -> Result<Vec<DegreeSlice>, BuildError> {
    let top = 2 * n;
    let odd_gens: Vec<Monomial> =
        (0..2 * g).map(|b| Monomial::generator(GeneratorId::from_bit(b))).collect();
    let mut columns: Vec<Vec<Monomial>> = Vec::new();
    let mut col_of: Vec<HashMap<Monomial, u32>> = Vec::new();
    let mut echelons: Vec<Echelon<C>> = Vec::new();
    let mut slices = Vec::new();

    for q in 0..=top {
        let mut cols = monomials_of_degree(g, q);
        cols.reverse();
        let index: HashMap<Monomial, u32> =
            cols.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let mut ech = Echelon::<C>::new(cols.len());

        for inst in instances.iter().filter(|r| r.degree() == q) {
            let e = inst.expand(g);
            let mut row: Row<C> = e
                .terms()
                .map(|(m, c)| (index[m], to_coeff(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            row.sort_by_key(|(c, _)| *c);
            ech.insert(row);
        }

        let lift = |src: usize, by: Monomial, ech: &mut Echelon<C>| {
            let rows: Vec<Row<C>> = echelons[src].rows().cloned().collect();
            for prev in rows {
                let mut row: Row<C> = Vec::with_capacity(prev.len());
                for (col, v) in prev {
                    let m = columns[src][col as usize];
                    if let Some((sign, prod)) = by.mul(m) {
                        let v = if sign < 0 { v.neg() } else { v };
                        row.push((index[&prod], v));
                    }
                }
                row.sort_by_key(|(c, _)| *c);
                ech.insert(row);
            }
        };
        if q >= 1 {
            for x in &odd_gens {
                lift(q as usize - 1, *x, &mut ech);
            }
        }
        if q >= 2 {
            lift(q as usize - 2, Monomial::c_power(1), &mut ech);
        }

        if let Some((col, pivot)) = ech.first_non_unit_pivot() {
            return Err(BuildError::NonUnitPivot {
                degree: q,
                monomial: cols[col as usize],
                pivot: format!("{pivot:?}"),
            });
        }
        ech.reduce_fully();

        let pivot_set: Vec<bool> = {
            let mut v = vec![false; cols.len()];
            for c in ech.pivot_columns() {
                v[c as usize] = true;
            }
            v
        };
        let basis: Vec<Monomial> =
            cols.iter().zip(&pivot_set).filter(|(_, p)| !**p).map(|(m, _)| *m).collect();
        let basis_pos = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut reduction = HashMap::new();
        let mut ideal_rows = Vec::new();
        for row in ech.rows() {
            let lead = &row[0].1;
            // Unit lead: m_lead = -lead * (rest of row).
            let lead_sign = from_coeff(lead);
            let expr: Vec<(Monomial, BigInt)> = row[1..]
                .iter()
                .map(|(c, v)| (cols[*c as usize], -(&lead_sign * from_coeff(v))))
                .collect();
            reduction.insert(cols[row[0].0 as usize], expr);
            ideal_rows.push(row.iter().map(|(c, v)| (cols[*c as usize], from_coeff(v))).collect());
        }

        slices.push(DegreeSlice { degree: q, columns: cols.clone(), basis, basis_pos, reduction, ideal_rows });
        columns.push(cols);
        col_of.push(index);
        echelons.push(ech);
    }
    Ok(slices)
}

impl MacdonaldRing {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn top_degree(&self) -> u32 {
        2 * self.n
    }

    pub fn dropped_family(&self) -> Option<RelationFamily> {
        self.dropped
    }

    pub fn slice(&self, q: u32) -> Option<&DegreeSlice> {
        self.slices.get(q as usize)
    }

    pub fn basis(&self, q: u32) -> &[Monomial] {
        self.slice(q).map(|s| s.basis()).unwrap_or(&[])
    }

    /// Ranks of the cohomology groups, degrees `0..=2n`.
    pub fn betti(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.basis.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti()
            .iter()
            .enumerate()
            .map(|(q, b)| if q % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    pub fn zero(&self) -> RingElement {
        RingElement::zero(self.g, self.modulus)
    }

    /// Canonical representative in the basis. Degrees above `2n` map to
    /// zero. Integral input is reduced mod 2 first when the ring is mod 2.
    ///
    /// Panics if `x` has a different genus, or is a mod-2 element fed to the
    /// integral ring.
    pub fn normal_form(&self, x: &RingElement) -> RingElement {
        assert_eq!(x.genus(), self.g, "genus mismatch in normal_form");
        let x = match (self.modulus, x.modulus()) {
            (Modulus::Two, Modulus::Integers) => x.reduce_mod2(),
            (Modulus::Integers, Modulus::Two) => panic!("mod-2 element in an integral ring"),
            _ => x.clone(),
        };
        let mut out = self.zero();
        for (m, c) in x.terms() {
            let Some(slice) = self.slices.get(m.degree() as usize) else {
                continue;
            };
            if slice.basis_pos.contains_key(m) {
                out.add_term(*m, c.clone());
            } else if let Some(expr) = slice.reduction.get(m) {
                for (b, v) in expr {
                    out.add_term(*b, c * v);
                }
            }
        }
        out
    }

    pub fn is_zero_in_ring(&self, x: &RingElement) -> bool {
        self.normal_form(x).is_zero()
    }

    /// Product followed by normal form.
    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.normal_form(&(x * y))
    }

    /// Normal form of a single monomial.
    pub fn reduce_monomial(&self, m: Monomial) -> RingElement {
        self.normal_form(&RingElement::from_monomial(self.g, self.modulus, m, BigInt::one()))
    }

    /// Coordinates of the degree-`q` part of `x` in `basis(q)`.
    pub fn coordinates(&self, x: &RingElement, q: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.basis(q).len()];
        let Some(slice) = self.slice(q) else {
            return out;
        };
        for (m, c) in self.normal_form(&x.homogeneous_part(q)).terms() {
            out[slice.basis_pos[m]] = c.clone();
        }
        out
    }

    /// The unique basis monomial in degree `2n`, or `None` when the top
    /// degree does not have rank one (possible only for a mutated ideal).
    pub fn top_monomial(&self) -> Option<Monomial> {
        match self.basis(self.top_degree()) {
            [m] => Some(*m),
            _ => None,
        }
    }
}

/// Conjectural rank formula: the number of triples `(l, m, s)` with
/// `l + m + 2s = q` and `l + m + s <= n`, weighted by `C(g,l) C(g,m)`.
/// Only ever compared against computed ranks, never used for them.
pub fn conjectural_betti(n: u32, g: u32, q: u32) -> u64 {
    let binom = |a: u32, b: u32| -> u64 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u64, |acc, i| acc * u64::from(a - i) / u64::from(i + 1))
    };
    let mut total = 0;
    for s in 0..=q / 2 {
        let odd = q - 2 * s;
        if odd + s > n {
            continue;
        }
        for l in 0..=odd {
            total += binom(g, l) * binom(g, odd - l);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(g: u32, i: u32) -> RingElement {
        RingElement::pair(g, i).unwrap()
    }

    #[test]
    fn projective_space_pattern() {
        for n in 1..=5 {
            let r = build(n, 0).unwrap();
            let expected: Vec<usize> = (0..=2 * n).map(|q| usize::from(q % 2 == 0)).collect();
            assert_eq!(r.betti(), expected);
            for k in 0..=n {
                assert_eq!(r.basis(2 * k), &[Monomial::c_power(k)]);
            }
        }
    }

    #[test]
    fn surfaces() {
        for g in 0..=4 {
            let r = build(1, g).unwrap();
            assert_eq!(r.betti(), vec![1, 2 * g as usize, 1]);
        }
    }

    #[test]
    fn sp2_of_genus_two() {
        assert_eq!(build(2, 2).unwrap().betti(), vec![1, 4, 7, 4, 1]);
    }

    #[test]
    fn minimal_instances_have_weight_n_plus_one() {
        for inst in minimal_instances(3, 3) {
            assert_eq!(inst.weight(), 4);
            assert!(inst.degree() <= 6);
            assert_eq!(inst.a_indices & inst.b_indices, 0);
            assert_eq!(inst.a_indices & inst.pair_indices, 0);
            assert_eq!(inst.b_indices & inst.pair_indices, 0);
        }
    }

    #[test]
    fn remark_relations_at_n_two() {
        let g = 3;
        let r = build(2, g).unwrap();
        let a = |i| RingElement::a(g, i).unwrap();
        let b = |i| RingElement::b(g, i).unwrap();
        assert!(r.is_zero_in_ring(&(&(&a(1) * &b(2)) * &b(3))));
        assert!(r.is_zero_in_ring(&(&(&a(1) * &a(2)) * &b(3))));
        let w = &a(1) * &(RingElement::c(g) - pair(g, 2));
        assert!(r.is_zero_in_ring(&w));
    }

    #[test]
    fn torus_product_equals_c_power() {
        for (n, g) in [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4)] {
            let r = build(n, g).unwrap();
            let prod = (1..=n).fold(RingElement::one(g, Modulus::Integers), |acc, i| &acc * &pair(g, i));
            let lhs = r.normal_form(&prod);
            assert!(!lhs.is_zero());
            assert_eq!(lhs, r.normal_form(&RingElement::c_power(g, n)));
        }
    }

    #[test]
    fn reduction_is_a_retraction() {
        let r = build(3, 2).unwrap();
        for q in 0..=6 {
            for m in r.basis(q) {
                assert_eq!(r.reduce_monomial(*m), RingElement::from_monomial(2, Modulus::Integers, *m, BigInt::one()));
            }
        }
    }

    #[test]
    fn top_group_generated_by_c_power() {
        for (n, g) in [(1, 0), (2, 1), (2, 3), (3, 2), (4, 1)] {
            let r = build(n, g).unwrap();
            let top = r.top_monomial().unwrap();
            let c = r.normal_form(&RingElement::c_power(g, n));
            assert_eq!(c.len(), 1);
            let v = c.coefficient(&top);
            assert!(v == BigInt::one() || v == -BigInt::one());
        }
    }

    #[test]
    fn above_top_degree_is_zero() {
        let r = build(2, 1).unwrap();
        assert!(r.normal_form(&RingElement::c_power(1, 3)).is_zero());
    }

    #[test]
    fn guard_refuses_large_inputs() {
        assert!(matches!(build(2, 10), Err(BuildError::TooLarge { .. })));
        assert!(matches!(build(0, 1), Err(BuildError::InvalidN)));
        let opts = BuildOptions { override_guard: true, ..Default::default() };
        assert!(check_guard(2, 10, opts.override_guard).is_ok());
    }

    #[test]
    fn mod2_ring_matches_reduced_integral_forms() {
        let (n, g) = (3, 2);
        let z = build(n, g).unwrap();
        let f2 = build_with(n, g, &BuildOptions { modulus: Modulus::Two, ..Default::default() }).unwrap();
        assert_eq!(z.betti(), f2.betti());
        for q in 0..=2 * n {
            for m in monomials_of_degree(g, q) {
                let x = RingElement::from_monomial(g, Modulus::Integers, m, BigInt::one());
                assert_eq!(z.normal_form(&x).reduce_mod2(), f2.normal_form(&x), "{m}");
            }
        }
    }

    #[test]
    fn every_family_is_needed_at_two_three() {
        let full = build(2, 3).unwrap().betti();
        for f in RelationFamily::ALL {
            let opts = BuildOptions { drop_family: Some(f), ..Default::default() };
            let cut = build_with(2, 3, &opts).map(|r| r.betti());
            assert_ne!(cut.as_ref().ok(), Some(&full), "{f:?}");
        }
    }

    #[test]
    fn conjectural_formula_on_small_cases() {
        for (n, g) in [(2, 2), (3, 3), (4, 2)] {
            let r = build(n, g).unwrap();
            for (q, b) in r.betti().iter().enumerate() {
                assert_eq!(*b as u64, conjectural_betti(n, g, q as u32));
            }
        }
    }
}
