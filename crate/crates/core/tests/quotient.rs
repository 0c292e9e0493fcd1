use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use symprod_core::macdonald::{self, all_instances, build, build_with, BuildOptions, MacdonaldRing};
use symprod_core::ring::{monomials_of_degree, Modulus, RingElement};

const POINTS: [(u32, u32); 5] = [(2, 1), (2, 2), (3, 2), (3, 3), (4, 2)];

fn rings() -> &'static Vec<MacdonaldRing> {
    static RINGS: OnceLock<Vec<MacdonaldRing>> = OnceLock::new();
    RINGS.get_or_init(|| POINTS.iter().map(|&(n, g)| build(n, g).unwrap()).collect())
}

fn element(g: u32, degree: u32) -> impl Strategy<Value = RingElement> {
    let monos = monomials_of_degree(g, degree);
    prop::collection::vec((0..monos.len(), -4i64..=4), 0..5).prop_map(move |ts| {
        RingElement::from_terms(g, Modulus::Integers, ts.into_iter().map(|(i, c)| (monos[i], BigInt::from(c))))
    })
}

fn case() -> impl Strategy<Value = (usize, RingElement, RingElement, u32, u32)> {
    (0..POINTS.len()).prop_flat_map(|k| {
        let (n, g) = POINTS[k];
        (0..=2 * n, 0..=2 * n)
            .prop_flat_map(move |(p, q)| (Just(k), element(g, p), element(g, q), Just(p), Just(q)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_form_is_idempotent_and_linear((k, x, y, _p, _q) in case()) {
        let r = &rings()[k];
        let nx = r.normal_form(&x);
        prop_assert_eq!(r.normal_form(&nx), nx.clone());
        let s = r.normal_form(&(&x + &y));
        prop_assert_eq!(s, &nx + &r.normal_form(&y));
        let three = BigInt::from(3);
        prop_assert_eq!(r.normal_form(&x.scale(&three)), nx.scale(&three));
    }

    #[test]
    fn normal_form_is_multiplicative((k, x, y, p, q) in case()) {
        let r = &rings()[k];
        let direct = r.normal_form(&(&x * &y));
        prop_assert_eq!(&direct, &r.mul(&r.normal_form(&x), &r.normal_form(&y)));
        let sign = BigInt::from(if (p * q) % 2 == 1 { -1 } else { 1 });
        prop_assert_eq!(direct, r.normal_form(&(&y * &x)).scale(&sign));
    }

    #[test]
    fn normal_form_is_supported_on_the_basis((k, x, _y, p, _q) in case()) {
        let r = &rings()[k];
        let basis = r.basis(p);
        for (m, _) in r.normal_form(&x).terms() {
            prop_assert!(basis.contains(m));
        }
    }
}

// The ideal generated by the minimal words in each degree coincides with the
// lattice spanned by every word of weight at least n + 1, which is closed
// under multiplication by generators.
#[test]
fn minimal_words_generate_every_relation() {
    for (n, g) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let r = build(n, g).unwrap();
        for inst in all_instances(n, g) {
            let w = inst.expand(g);
            assert!(r.is_zero_in_ring(&w), "({n},{g}) {inst:?} survives");
        }
    }
}

#[test]
fn integral_and_mod_two_ranks_agree() {
    for (n, g) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let z = build(n, g).unwrap();
        let opts = BuildOptions { modulus: Modulus::Two, ..Default::default() };
        let f2 = build_with(n, g, &opts).unwrap();
        assert_eq!(z.betti(), f2.betti(), "({n},{g})");
    }
}

#[test]
fn betti_numbers_are_palindromic_and_count_the_euler_characteristic() {
    for n in 1..=5u32 {
        for g in 0..=4u32 {
            let r = build(n, g).unwrap();
            let b = r.betti();
            assert!(b.iter().eq(b.iter().rev()), "({n},{g}) {b:?}");
            // chi(SP^n) is the t^n coefficient of (1 - t)^(2g - 2).
            let e = (0..=n).fold((BigInt::from(1), BigInt::from(0)), |(coef, acc), k| {
                let term = if k == n { coef.clone() } else { BigInt::from(0) };
                let next = coef * BigInt::from(2 * i64::from(g) - 2 - i64::from(k)) / BigInt::from(k + 1);
                (next, acc + term)
            });
            let expected = if n % 2 == 0 { e.1 } else { -e.1 };
            assert_eq!(BigInt::from(r.euler_characteristic()), expected, "({n},{g})");
        }
    }
}

#[test]
fn conjectural_counts_match_on_a_wider_range() {
    for n in 1..=5u32 {
        for g in 0..=4u32 {
            let r = build(n, g).unwrap();
            for (q, b) in r.betti().iter().enumerate() {
                assert_eq!(*b as u64, macdonald::conjectural_betti(n, g, q as u32), "({n},{g}) q={q}");
            }
        }
    }
}
