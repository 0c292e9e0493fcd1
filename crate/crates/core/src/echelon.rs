//! Sparse row echelon forms over Z (Hermite normal form) and over F2.
//!
//! Rows are sorted `(column, value)` lists. The leading entry of a row is
//! its smallest column. Inserting a row reduces it against existing pivots,
//! merging with a pivot through an extended-gcd step whenever the pivot does
//! not divide the new leading entry, so after all insertions the stored rows
//! are an integral basis of the row lattice in echelon shape.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::int::Int;

/// Coefficient domains the eliminator can work over.
pub trait Coefficient: Clone + Eq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self - f * other`.
    fn sub_mul(&self, f: &Self, other: &Self) -> Self;
    /// `x / pivot` if `pivot` divides `x`.
    fn try_div(x: &Self, pivot: &Self) -> Option<Self>;
    /// `(g, s, t)` with `s*a + t*b = g` a generator of `(a, b)`.
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self);
    fn div_exact(&self, d: &Self) -> Self;
    /// Quotient used to reduce entries above a pivot into a canonical range.
    fn reduce_quotient(x: &Self, pivot: &Self) -> Self;
    /// Is this a canonical (e.g. positive) leading coefficient?
    fn is_canonical_lead(&self) -> bool;
}

impl Coefficient for Int {
    fn zero() -> Self {
        Int::Small(0)
    }
    fn one() -> Self {
        Int::Small(1)
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        Int::is_unit(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Self {
        Int::sub_mul(self, f, other)
    }
    fn try_div(x: &Self, pivot: &Self) -> Option<Self> {
        let (q, r) = x.div_mod_floor(pivot);
        r.is_zero().then_some(q)
    }
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        Int::ext_gcd(a, b)
    }
    fn div_exact(&self, d: &Self) -> Self {
        Int::div_exact(self, d)
    }
    fn reduce_quotient(x: &Self, pivot: &Self) -> Self {
        x.div_mod_floor(pivot).0
    }
    fn is_canonical_lead(&self) -> bool {
        !self.is_negative()
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Gf2(pub bool);

impl Coefficient for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn is_unit(&self) -> bool {
        self.0
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, other: &Self) -> Self {
        Gf2(self.0 && other.0)
    }
    fn sub_mul(&self, f: &Self, other: &Self) -> Self {
        Gf2(self.0 ^ (f.0 && other.0))
    }
    fn try_div(x: &Self, pivot: &Self) -> Option<Self> {
        pivot.0.then_some(*x)
    }
    fn ext_gcd(a: &Self, _b: &Self) -> (Self, Self, Self) {
        // Only reached when `a` does not divide `b`, impossible over a field
        // with a nonzero pivot.
        (*a, Gf2(true), Gf2(false))
    }
    fn div_exact(&self, _d: &Self) -> Self {
        *self
    }
    fn reduce_quotient(x: &Self, _pivot: &Self) -> Self {
        *x
    }
    fn is_canonical_lead(&self) -> bool {
        true
    }
}

pub type Row<C> = Vec<(u32, C)>;

/// `a*x + b*y` for sorted sparse rows.
pub fn combine<C: Coefficient>(a: &C, x: &[(u32, C)], b: &C, y: &[(u32, C)]) -> Row<C> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let zero = C::zero();
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, v) = if take_x {
            let v = zero.sub_mul(&a.neg(), &x[i].1);
            i += 1;
            (x[i - 1].0, v)
        } else if take_y {
            let v = zero.sub_mul(&b.neg(), &y[j].1);
            j += 1;
            (y[j - 1].0, v)
        } else {
            let v = zero.sub_mul(&a.neg(), &x[i].1).sub_mul(&b.neg(), &y[j].1);
            i += 1;
            j += 1;
            (x[i - 1].0, v)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// `x - f*y`.
fn sub_scaled<C: Coefficient>(x: &[(u32, C)], f: &C, y: &[(u32, C)]) -> Row<C> {
    combine(&C::one(), x, &f.neg(), y)
}

fn negate<C: Coefficient>(row: &mut Row<C>) {
    for (_, v) in row.iter_mut() {
        *v = v.neg();
    }
}

#[derive(Clone, Debug)]
pub struct Echelon<C> {
    pivots: Vec<Option<Row<C>>>,
}

impl<C: Coefficient> Echelon<C> {
    pub fn new(ncols: usize) -> Self {
        Echelon { pivots: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.pivots.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    pub fn pivot(&self, col: u32) -> Option<&Row<C>> {
        self.pivots[col as usize].as_ref()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(i, _)| i as u32)
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row<C>> {
        self.pivots.iter().flatten()
    }

    /// Adds a row to the lattice spanned so far.
    pub fn insert(&mut self, mut row: Row<C>) {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "unsorted row");
        loop {
            let Some((lead_col, lead)) = row.first().cloned() else {
                return;
            };
            let slot = &mut self.pivots[lead_col as usize];
            let Some(pivot) = slot.as_ref() else {
                if !lead.is_canonical_lead() {
                    negate(&mut row);
                }
                *slot = Some(row);
                return;
            };
            let pv = pivot[0].1.clone();
            if let Some(f) = C::try_div(&lead, &pv) {
                row = sub_scaled(&row, &f, pivot);
                continue;
            }
            let (g, s, t) = C::ext_gcd(&pv, &lead);
            let mut merged = combine(&s, pivot, &t, &row);
            let rest = combine(&lead.div_exact(&g), pivot, &pv.div_exact(&g).neg(), &row);
            if !merged[0].1.is_canonical_lead() {
                negate(&mut merged);
            }
            *slot = Some(merged);
            row = rest;
        }
    }

    /// Brings the stored rows to reduced (Hermite) form: entries above every
    /// pivot are reduced into the canonical residue range of that pivot.
    pub fn reduce_fully(&mut self) {
        let n = self.pivots.len();
        for lead in (0..n).rev() {
            let Some(row) = self.pivots[lead].take() else {
                continue;
            };
            let mut work: BTreeMap<u32, C> = row.into_iter().collect();
            let mut cursor = lead as u32 + 1;
            loop {
                let next = work.range(cursor..).next().map(|(c, v)| (*c, v.clone()));
                let Some((col, v)) = next else { break };
                cursor = col + 1;
                let Some(p) = self.pivots[col as usize].as_ref() else {
                    continue;
                };
                let q = C::reduce_quotient(&v, &p[0].1);
                if q.is_zero() {
                    continue;
                }
                for (pc, pv) in p {
                    let entry = work.entry(*pc).or_insert_with(C::zero);
                    *entry = entry.sub_mul(&q, pv);
                    if entry.is_zero() {
                        work.remove(pc);
                    }
                }
            }
            self.pivots[lead] = Some(work.into_iter().collect());
        }
    }

    /// First pivot whose leading coefficient is not a unit.
    pub fn first_non_unit_pivot(&self) -> Option<(u32, C)> {
        self.pivots
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.as_ref().filter(|r| !r[0].1.is_unit()).map(|r| (i as u32, r[0].1.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(u32, i64)]) -> Row<Int> {
        entries.iter().map(|&(c, v)| (c, Int::from(v))).collect()
    }

    #[test]
    fn gcd_merge_produces_lattice_basis() {
        let mut e = Echelon::new(2);
        e.insert(row(&[(0, 4), (1, 1)]));
        e.insert(row(&[(0, 6), (1, 0)]));
        // Lattice spanned by (4,1), (6,0) has Hermite form (2,2), (0,3).
        e.reduce_fully();
        let rows: Vec<_> = e.rows().cloned().collect();
        assert_eq!(rows, vec![row(&[(0, 2), (1, 2)]), row(&[(1, 3)])]);
        assert_eq!(e.first_non_unit_pivot(), Some((0, Int::from(2))));
    }

    #[test]
    fn dependent_rows_vanish() {
        let mut e = Echelon::new(3);
        e.insert(row(&[(0, 1), (2, -1)]));
        e.insert(row(&[(1, 1), (2, 1)]));
        e.insert(row(&[(0, 2), (1, 3), (2, 1)]));
        assert_eq!(e.rank(), 2);
        e.reduce_fully();
        assert_eq!(e.pivot(0).unwrap(), &row(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn gf2_elimination() {
        let r = |xs: &[u32]| xs.iter().map(|&c| (c, Gf2(true))).collect::<Row<Gf2>>();
        let mut e = Echelon::new(3);
        e.insert(r(&[0, 1]));
        e.insert(r(&[1, 2]));
        e.insert(r(&[0, 2]));
        assert_eq!(e.rank(), 2);
        e.reduce_fully();
        assert_eq!(e.pivot(0).unwrap(), &r(&[0, 2]));
    }
}
