//! Second, independent route to the ranks of the quotient.
//!
//! Nothing here shares code with the main construction: relation words are
//! enumerated by brute force over every weight `>= n + 1`, expanded with a
//! separate sign routine (bubble sort over generator lists), and reduced by
//! Gaussian elimination over the rationals under a column order that sorts
//! by the `c` exponent first.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A free-algebra word as (sorted odd generator list, c exponent).
type Word = (Vec<u32>, u32);

/// Sorts `gens` by adjacent transpositions and returns the sign, or `None`
/// if a generator repeats.
fn sort_with_sign(gens: &mut [u32]) -> Option<i32> {
    let mut sign = 1;
    for i in 0..gens.len() {
        for j in 0..gens.len() - 1 - i {
            if gens[j] == gens[j + 1] {
                return None;
            }
            if gens[j] > gens[j + 1] {
                gens.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if gens.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

type Poly = BTreeMap<Word, i64>;

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((xg, xc), xv) in x {
        for ((yg, yc), yv) in y {
            let mut gens: Vec<u32> = xg.iter().chain(yg).copied().collect();
            if let Some(sign) = sort_with_sign(&mut gens) {
                *out.entry((gens, xc + yc)).or_insert(0) += i64::from(sign) * xv * yv;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn single(gens: Vec<u32>, c: u32, v: i64) -> Poly {
    Poly::from([((gens, c), v)])
}

// Generator numbering: a_i -> 2i - 2, b_i -> 2i - 1.
fn gen_a(i: u32) -> u32 {
    2 * i - 2
}

fn gen_b(i: u32) -> u32 {
    2 * i - 1
}

/// Every relation word of degree exactly `q` and weight `>= n + 1`, expanded.
fn relation_words(n: u32, g: u32, q: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    // role of each index: 0 unused, 1 in I, 2 in J, 3 in K.
    let mut roles = vec![0u8; g as usize];
    loop {
        let l = roles.iter().filter(|r| **r == 1).count() as u32;
        let m = roles.iter().filter(|r| **r == 2).count() as u32;
        let k = roles.iter().filter(|r| **r == 3).count() as u32;
        let odd = l + m + 2 * k;
        if odd <= q && (q - odd).is_multiple_of(2) {
            let s = (q - odd) / 2;
            if l + m + 2 * k + s > n {
                let mut p = single(vec![], 0, 1);
                for (idx, role) in roles.iter().enumerate() {
                    let i = idx as u32 + 1;
                    match role {
                        1 => p = poly_mul(&p, &single(vec![gen_a(i)], 0, 1)),
                        2 => p = poly_mul(&p, &single(vec![gen_b(i)], 0, 1)),
                        _ => {}
                    }
                }
                for (idx, role) in roles.iter().enumerate() {
                    if *role == 3 {
                        let i = idx as u32 + 1;
                        let mut f = single(vec![], 1, 1);
                        f.insert((vec![gen_a(i), gen_b(i)], 0), -1);
                        p = poly_mul(&p, &f);
                    }
                }
                p = poly_mul(&p, &single(vec![], s, 1));
                if !p.is_empty() {
                    out.push(p);
                }
            }
        }
        // Next role assignment in base 4.
        let mut pos = 0;
        loop {
            if pos == roles.len() {
                return out;
            }
            roles[pos] += 1;
            if roles[pos] < 4 {
                break;
            }
            roles[pos] = 0;
            pos += 1;
        }
    }
}

fn all_words(g: u32, q: u32) -> Vec<Word> {
    let mut out = Vec::new();
    for s in 0..=q / 2 {
        let odd = q - 2 * s;
        if odd > 2 * g {
            continue;
        }
        for mask in 0u64..(1u64 << (2 * g)) {
            if mask.count_ones() == odd {
                let gens = (0..2 * g).filter(|b| mask >> b & 1 == 1).collect();
                out.push((gens, s));
            }
        }
    }
    out
}

/// Rank of `H^q(SP^n(M_g))`, computed as the number of degree-`q` words
/// minus the rational rank of the brute-force ideal slice.
pub fn oracle_rank(n: u32, g: u32, q: u32) -> usize {
    if q > 2 * n {
        return 0;
    }
    let words = all_words(g, q);
    // Column order: c exponent ascending, then generator list.
    let mut order = words.clone();
    order.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    let col: HashMap<Word, usize> = order.into_iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut pivots: HashMap<usize, BTreeMap<usize, BigRational>> = HashMap::new();
    for p in relation_words(n, g, q) {
        let mut row: BTreeMap<usize, BigRational> =
            p.into_iter().map(|(w, v)| (col[&w], BigRational::from_integer(v.into()))).collect();
        while let Some((&lead, lead_v)) = row.iter().next() {
            let Some(prow) = pivots.get(&lead) else {
                let inv = lead_v.recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                pivots.insert(lead, row);
                break;
            };
            let f = lead_v.clone();
            for (c, v) in prow {
                let e = row.entry(*c).or_insert_with(BigRational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
    }
    words.len() - pivots.len()
}

/// Ranks in every degree `0..=2n`.
pub fn oracle_betti(n: u32, g: u32) -> Vec<usize> {
    (0..=2 * n).map(|q| oracle_rank(n, g, q)).collect()
}

/// Determinant of a square integer matrix by exact rational elimination.
pub fn rational_det(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer((*v).into())).collect())
        .collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_space() {
        for n in 1..=4 {
            for q in 0..=2 * n {
                assert_eq!(oracle_rank(n, 0, q), usize::from(q % 2 == 0));
            }
        }
    }

    #[test]
    fn genus_two_square() {
        assert_eq!(oracle_rank(2, 2, 2), 7);
        assert_eq!(oracle_betti(2, 2), vec![1, 4, 7, 4, 1]);
    }

    #[test]
    fn sign_routine() {
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut v = vec![1, 0, 1];
        assert_eq!(sort_with_sign(&mut v), None);
    }

    #[test]
    fn det_small() {
        assert_eq!(rational_det(&[vec![0, 1], vec![1, 0]]), BigRational::from_integer((-1).into()));
        assert_eq!(rational_det(&[vec![2, 1], vec![4, 2]]), BigRational::zero());
    }
}
