//! Per-`(n, g)` invariant report.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{spin_cover_sheets, spin_status, SpinStatus};
use crate::macdonald::{self, BuildError, MacdonaldRing};
use crate::ring::{GeneratorId, Monomial};
use crate::tensor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("conflicting rules for {field} at (n, g) = ({n}, {g}): {rules}")]
    Conflict { field: &'static str, n: u32, g: u32, rules: String },
}

/// A value with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cited<T> {
    pub value: T,
    pub citation: String,
}

fn cited<T>(value: T, citation: impl Into<String>) -> Cited<T> {
    Cited { value, citation: citation.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Exists,
    NotExists,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureStatus {
    ExistsGeneric,
    NotExists,
    NotExistsGeneric,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Asphericity {
    YesGeneric,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FundamentalGroup {
    Trivial,
    FreeAbelian { rank: u32 },
    SurfaceGroup { genus: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SecondHomotopy {
    /// Infinite cyclic.
    Integers,
    /// A module over `Z[Z^(2g)]` generated by one element.
    CyclicModule { acting_rank: u32 },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "bound", rename_all = "snake_case")]
pub enum Bound {
    Exact(u32),
    AtMost(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcSummary {
    pub length: u32,
    pub nonzero: bool,
    pub leading_coefficient: String,
    pub expected_coefficient: String,
    pub matches_expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: u32,
    pub g: u32,
    pub real_dimension: u32,
    pub betti: Cited<Vec<usize>>,
    pub euler: Cited<i64>,
    pub pi1: Cited<FundamentalGroup>,
    pub pi2: Cited<SecondHomotopy>,
    pub cat: Cited<u32>,
    pub cup_length: Cited<u32>,
    pub tc: Cited<Option<u32>>,
    pub tc_certificate: Option<TcSummary>,
    pub rationally_essential: Cited<bool>,
    pub spin: Cited<SpinStatus>,
    pub spin_cover_sheets: Cited<Option<u64>>,
    #[serde(rename = "dim_MC")]
    pub dim_big_mc: Cited<Option<u32>>,
    #[serde(rename = "dim_mc")]
    pub dim_small_mc: Cited<Bound>,
    pub psc: Cited<Existence>,
    pub kahler_psc: Cited<Existence>,
    pub nonpositive_hsc_kahler: Cited<CurvatureStatus>,
    pub symplectically_aspherical: Cited<Asphericity>,
    pub notes: Vec<String>,
}

const SURFACE: &str = "n = 1: SP^1(M_g) is the surface M_g itself";

/// Longest nonzero product of distinct odd generators and at most `n`
/// copies of `c*`. A product of generators is, up to sign, the normal form
/// of a single monomial, and once it vanishes every extension does, so the
/// search walks the nonzero monomials outward from `1`.
pub fn cup_length_search(r: &MacdonaldRing) -> u32 {
    let n = r.n();
    let gens = 2 * r.g();
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut stack = vec![Monomial::ONE];
    let mut best = 0;
    seen.insert(Monomial::ONE);
    while let Some(m) = stack.pop() {
        best = best.max(m.ext.count_ones() + m.c_exp);
        let mut next: Vec<Monomial> = (0..gens)
            .filter(|b| m.ext >> b & 1 == 0)
            .map(|b| Monomial::new(m.ext | Monomial::generator(GeneratorId::from_bit(b)).ext, m.c_exp))
            .collect();
        if m.c_exp < n {
            next.push(Monomial::new(m.ext, m.c_exp + 1));
        }
        for x in next {
            if x.degree() <= r.top_degree() && !seen.contains(&x) && !r.reduce_monomial(x).is_zero() {
                seen.insert(x);
                stack.push(x);
            }
        }
    }
    best
}

fn resolve<T: Copy + PartialEq + std::fmt::Debug>(
    field: &'static str,
    n: u32,
    g: u32,
    matches: Vec<(T, &'static str)>,
    fallback: (T, &'static str),
    opposed: impl Fn(T, T) -> bool,
) -> Result<Cited<T>, ClassifyError> {
    for (i, (a, ra)) in matches.iter().enumerate() {
        for (b, rb) in &matches[i + 1..] {
            if opposed(*a, *b) {
                return Err(ClassifyError::Conflict {
                    field,
                    n,
                    g,
                    rules: format!("{ra} gives {a:?}, {rb} gives {b:?}"),
                });
            }
        }
    }
    let (v, why) = matches.first().copied().unwrap_or(fallback);
    Ok(cited(v, why))
}

fn psc_rule(n: u32, g: u32) -> Result<Cited<Existence>, ClassifyError> {
    use Existence::*;
    if n == 1 {
        return Ok(if g == 0 {
            cited(Exists, format!("{SURFACE}; the round sphere"))
        } else {
            cited(NotExists, format!("{SURFACE}; Gauss-Bonnet rules out positive curvature for g >= 1"))
        });
    }
    let d = i64::from(n) - i64::from(g);
    let mut m = Vec::new();
    if n <= g && d.rem_euclid(2) == 1 {
        m.push((NotExists, "no PSC metric when n <= g and n - g is odd"));
    }
    if n <= g.min(4) {
        m.push((NotExists, "no PSC metric when n <= min(g, 4)"));
    }
    if n + 1 >= 2 * g {
        m.push((Exists, "PSC metric exists when n >= 2g - 1"));
    }
    if n > g && d % 2 == 0 {
        m.push((Exists, "PSC metric exists when n > g and n - g is even"));
    }
    resolve("psc", n, g, m, (Unknown, "not decided by the known PSC rules"), |a, b| a != b)
}

fn kahler_psc_rule(n: u32, g: u32) -> Result<Cited<Existence>, ClassifyError> {
    use Existence::*;
    if n == 1 {
        return Ok(if g == 0 {
            cited(Exists, format!("{SURFACE}; Fubini-Study metric"))
        } else {
            cited(NotExists, format!("{SURFACE}; no PSC metric at all for g >= 1"))
        });
    }
    let mut m = Vec::new();
    if g >= n {
        m.push((NotExists, "no Kaehler PSC metric when g >= n (average scalar curvature argument)"));
    }
    if n + 1 >= 2 * g {
        m.push((Exists, "Kaehler PSC metrics exist when n >= 2g - 1"));
    }
    resolve("kahler_psc", n, g, m, (Unknown, "not decided by the known Kaehler PSC rules"), |a, b| a != b)
}

fn hsc_rule(n: u32, g: u32) -> Result<Cited<CurvatureStatus>, ClassifyError> {
    use CurvatureStatus::*;
    if n == 1 {
        return Ok(if g == 0 {
            cited(NotExists, format!("{SURFACE}; the sphere has no metric of non-positive curvature"))
        } else {
            cited(ExistsGeneric, format!("{SURFACE}; flat or hyperbolic metric"))
        });
    }
    let mut m = Vec::new();
    if g + 1 >= 2 * n {
        m.push((ExistsGeneric, "generic complex structure carries non-positive HSC Kaehler metrics when g >= 2n - 1"));
    }
    if n >= g {
        m.push((NotExists, "no Riemannian metric of non-positive HSC when n >= g"));
    }
    if n > g.div_ceil(2) {
        m.push((NotExistsGeneric, "generic complex structure has no non-positive HSC Kaehler metric when n >= floor((g+1)/2) + 1"));
    }
    let positive = |s: CurvatureStatus| s == ExistsGeneric;
    resolve(
        "nonpositive_hsc_kahler",
        n,
        g,
        m,
        (Unknown, "not decided by the known curvature rules"),
        |a, b| positive(a) != positive(b),
    )
}

fn asphericity_rule(n: u32, g: u32) -> Result<Cited<Asphericity>, ClassifyError> {
    use Asphericity::*;
    if n == 1 {
        return Ok(if g == 0 {
            cited(No, format!("{SURFACE}; the sphere carries a nonzero spherical symplectic area"))
        } else {
            cited(YesGeneric, format!("{SURFACE}; aspherical"))
        });
    }
    let mut m = Vec::new();
    if g + 1 >= 2 * n {
        m.push((YesGeneric, "symplectically aspherical for generic complex structure when g >= 2n - 1"));
    }
    if (n, g) == (2, 2) {
        m.push((No, "SP^2(M_2) is T^4 blown up at a point; the exceptional sphere has positive area"));
    }
    resolve("symplectically_aspherical", n, g, m, (Unknown, "not decided by the known rules"), |a, b| a != b)
}

pub fn classify(n: u32, g: u32) -> Result<InvariantReport, ClassifyError> {
    let r = macdonald::build(n, g)?;
    classify_with_ring(&r)
}

pub fn classify_with_ring(r: &MacdonaldRing) -> Result<InvariantReport, ClassifyError> {
    let (n, g) = (r.n(), r.g());
    let mut notes = Vec::new();
    if n == 1 {
        notes.push(format!("degenerate case: {SURFACE}"));
    }

    let betti = r.betti();
    let euler = r.euler_characteristic();

    let cat = if n <= g {
        cited(2 * n, "cat = 2n for n <= g (cup-length of the torus classes meets the dimension bound)")
    } else {
        cited(n + g, "cat = n + g for n > g (cup-length lower bound, Abel-Jacobi fibration upper bound)")
    };
    let cup_length = cited(cup_length_search(r), "longest nonzero product of generators, exhaustive search");

    let (tc, tc_certificate) = if n == 1 {
        (cited(None, format!("undetermined: the TC formula requires n >= 2; {SURFACE}")), None)
    } else {
        let value = if n <= g { 4 * n } else { 2 * n + 2 * g };
        let cert = tensor::tc_certificate(r).expect("n >= 2");
        if !cert.matches_expected() {
            notes.push(format!(
                "tc certificate: product of {} squared zero-divisors has coefficient {} on the target term, formula predicts {}",
                cert.length, cert.leading_coefficient, cert.expected_coefficient
            ));
        }
        let summary = TcSummary {
            length: cert.length,
            nonzero: cert.is_nonzero(),
            leading_coefficient: cert.leading_coefficient.to_string(),
            expected_coefficient: cert.expected_coefficient.to_string(),
            matches_expected: cert.matches_expected(),
        };
        (cited(Some(value), "TC = 2 cat for n >= 2"), Some(summary))
    };

    let rationally_essential = if n == 1 {
        cited(g >= 1, format!("{SURFACE}; essential iff aspherical"))
    } else if n <= g {
        cited(true, "rationally essential for n <= g (Abel-Jacobi image of the fundamental class is nonzero)")
    } else {
        cited(false, "inessential for n > g: dimension exceeds the cohomological dimension 2g of the torus")
    };

    let pi1 = match (n, g) {
        (1, 0) => cited(FundamentalGroup::Trivial, SURFACE),
        (1, 1) => cited(FundamentalGroup::FreeAbelian { rank: 2 }, SURFACE),
        (1, _) => cited(FundamentalGroup::SurfaceGroup { genus: g }, SURFACE),
        _ => cited(
            FundamentalGroup::FreeAbelian { rank: 2 * g },
            "the Abel-Jacobi map induces an isomorphism onto the fundamental group of the Jacobian",
        ),
    };
    let pi2 = match n {
        1 if g == 0 => cited(SecondHomotopy::Integers, SURFACE),
        1 => cited(SecondHomotopy::Zero, format!("{SURFACE}; aspherical")),
        2 => cited(
            SecondHomotopy::CyclicModule { acting_rank: 2 * g },
            "for n = 2, a nonzero module over the fundamental group ring generated by a single element",
        ),
        _ => cited(SecondHomotopy::Integers, "infinite cyclic for n >= 3"),
    };

    let spin = {
        let s = spin_status(n, g);
        let why = if n == 1 {
            format!("{SURFACE}; orientable surfaces are spin")
        } else if g == 0 {
            "projective space CP^n is spin iff n is odd".to_string()
        } else {
            "never spin for g > 0; universal cover spin iff n - g is odd".to_string()
        };
        cited(s, why)
    };
    let spin_cover_sheets = cited(
        spin_cover_sheets(n, g),
        "1 if spin; 2^g sheets (pullback of a torus cover) if only the universal cover is spin; none otherwise",
    );
    if n >= 2 && g > 0 {
        notes.push(
            "w2 evaluation assumes (ai.bi)* = ai*bi* - c* is Hom-dual to both aj.bj and c".to_string(),
        );
    }

    let (dim_big_mc, dim_small_mc) = if n == 1 {
        let d = if g == 0 { 0 } else { 2 };
        (cited(Some(d), SURFACE), cited(Bound::Exact(d), SURFACE))
    } else if n >= g {
        (
            cited(Some(2 * g), "dim_MC = 2g for n >= g"),
            cited(Bound::Exact(2 * g), "dim_mc = 2g for n >= g"),
        )
    } else if (g - n) % 2 == 0 {
        (
            cited(Some(2 * n), "dim_MC = 2n for n < g"),
            cited(Bound::AtMost(2 * n - 2), "dim_mc <= 2n - 2 for n < g with g - n even"),
        )
    } else {
        (
            cited(Some(2 * n), "dim_MC = 2n for n < g"),
            cited(Bound::AtMost(2 * n - 1), "dim_mc <= 2n - 1 for n < g"),
        )
    };

    let psc = psc_rule(n, g)?;
    let kahler_psc = kahler_psc_rule(n, g)?;
    if psc.value == Existence::NotExists && kahler_psc.value == Existence::Exists {
        return Err(ClassifyError::Conflict {
            field: "kahler_psc",
            n,
            g,
            rules: format!("{} versus {}", psc.citation, kahler_psc.citation),
        });
    }
    if (n, g) == (1, 1) {
        notes.push("torus: the n >= 2g - 1 existence rule does not apply to n = 1".to_string());
    }

    Ok(InvariantReport {
        n,
        g,
        real_dimension: 2 * n,
        betti: cited(betti, "ranks of the quotient ring, exact integer elimination"),
        euler: cited(euler, "alternating sum of Betti numbers"),
        pi1,
        pi2,
        cat,
        cup_length,
        tc,
        tc_certificate,
        rationally_essential,
        spin,
        spin_cover_sheets,
        dim_big_mc,
        dim_small_mc,
        psc,
        kahler_psc,
        nonpositive_hsc_kahler: hsc_rule(n, g)?,
        symplectically_aspherical: asphericity_rule(n, g)?,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_points() {
        let r = classify(2, 3).unwrap();
        assert_eq!((r.cat.value, r.tc.value), (4, Some(8)));
        assert!(r.rationally_essential.value);
        assert_eq!(r.dim_big_mc.value, Some(4));
        assert_eq!(r.dim_small_mc.value, Bound::AtMost(3));
        assert_eq!(r.psc.value, Existence::NotExists);
        assert!(r.spin.value.cover_spin && !r.spin.value.manifold_spin);

        let r = classify(4, 2).unwrap();
        assert_eq!((r.cat.value, r.tc.value), (6, Some(12)));
        assert!(!r.rationally_essential.value);
        assert_eq!(r.dim_small_mc.value, Bound::Exact(4));
        assert_eq!(r.psc.value, Existence::Exists);
        assert!(!r.spin.value.cover_spin);

        let r = classify(1, 1).unwrap();
        assert_eq!(r.psc.value, Existence::NotExists);
        assert_eq!(r.cat.value, 2);
        assert_eq!(r.dim_small_mc.value, Bound::Exact(2));
        assert_eq!(r.tc.value, None);
    }

    #[test]
    fn projective_plane() {
        let r = classify(2, 0).unwrap();
        assert_eq!(r.betti.value, vec![1, 0, 1, 0, 1]);
        assert_eq!((r.cat.value, r.tc.value), (2, Some(4)));
        assert!(!r.spin.value.manifold_spin);
        assert!(r.tc_certificate.unwrap().matches_expected);
    }

    #[test]
    fn cup_length_matches_cat() {
        for n in 1..=4 {
            for g in 0..=4 {
                let r = classify(n, g).unwrap();
                assert_eq!(r.cup_length.value, r.cat.value, "({n},{g})");
            }
        }
    }

    #[test]
    fn genus_two_square_is_not_aspherical() {
        let r = classify(2, 2).unwrap();
        assert_eq!(r.symplectically_aspherical.value, Asphericity::No);
        assert_eq!(r.psc.value, Existence::NotExists);
    }
}
