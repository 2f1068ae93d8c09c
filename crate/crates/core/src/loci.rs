//! Asymptotic base loci, computed twice: from intersection numbers, and from
//! limiting Okounkov bodies. Also the body-driven recovery of the divisorial
//! Zariski decomposition.

use std::collections::BTreeSet;

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::model::SurfaceModel;
use crate::nslattice::{DivisorClass, SurfaceGeometry};
use crate::okounkov::{limiting_body, Flag2D, PointOnSurface};
use crate::scalar::Field;
use crate::zariski::{zariski_decompose, ZariskiDecomposition};

/// A base locus on the surface model. Numerical base loci have no isolated
/// points, so on a surface they are unions of curves or everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseLocus {
    Empty,
    Curves(BTreeSet<String>),
    All,
}

impl BaseLocus {
    fn from_curves(curves: BTreeSet<String>) -> Self {
        if curves.is_empty() {
            BaseLocus::Empty
        } else {
            BaseLocus::Curves(curves)
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, BaseLocus::Empty)
    }

    pub fn contains_point(&self, x: &PointOnSurface) -> bool {
        match self {
            BaseLocus::Empty => false,
            BaseLocus::All => true,
            BaseLocus::Curves(cs) => cs.iter().any(|c| x.lies_on(c)),
        }
    }

    /// Curve components; `None` for the whole surface.
    pub fn curves(&self) -> Option<BTreeSet<String>> {
        match self {
            BaseLocus::Empty => Some(BTreeSet::new()),
            BaseLocus::Curves(cs) => Some(cs.clone()),
            BaseLocus::All => None,
        }
    }

    /// Set inclusion, with `All` as the top element.
    pub fn is_subset(&self, other: &BaseLocus) -> bool {
        match (self.curves(), other.curves()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.is_subset(&b),
        }
    }
}

impl std::fmt::Display for BaseLocus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaseLocus::Empty => write!(f, "∅"),
            BaseLocus::All => write!(f, "X"),
            BaseLocus::Curves(cs) => {
                write!(
                    f,
                    "{{{}}}",
                    cs.iter().cloned().collect::<Vec<_>>().join(", ")
                )
            }
        }
    }
}

/// `B₋(D)`: the support of the negative part, or everything off the pseudoeffective cone.
pub fn restricted_base_locus<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
) -> Result<BaseLocus> {
    if !geom.is_pseudoeffective(d)? {
        return Ok(BaseLocus::All);
    }
    let zd = zariski_decompose(geom, d)?;
    Ok(BaseLocus::from_curves(
        zd.support()
            .iter()
            .map(|&i| geom.label(i).to_string())
            .collect(),
    ))
}

/// `B₊(D)`: the curves orthogonal to the positive part when `D` is big.
pub fn augmented_base_locus<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
) -> Result<BaseLocus> {
    if !geom.is_big(d)? {
        return Ok(BaseLocus::All);
    }
    let zd = zariski_decompose(geom, d)?;
    Ok(BaseLocus::from_curves(
        (0..geom.num_curves())
            .filter(|&i| geom.pair_curve(&zd.positive, i).is_zero())
            .map(|i| geom.label(i).to_string())
            .collect(),
    ))
}

/// Body test for `x ∈ B₋(D)`: the origin is missing from the limiting body.
pub fn criterion_bminus<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
) -> Result<bool> {
    Ok(!limiting_body(geom, d, flag)?.contains_origin())
}

/// Body test for `x ∈ B₊(D)`: no orthant neighborhood of the origin fits in the body.
pub fn criterion_bplus<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
) -> Result<bool> {
    Ok(!limiting_body(geom, d, flag)?.has_orthant_neighborhood())
}

fn all_flags<F: Field>(
    model: &SurfaceModel<F>,
    d: &DivisorClass<F>,
    test: impl Fn(&ConvexBody<F>) -> bool,
) -> Result<bool> {
    for flag in model.enumerate_flags() {
        if !test(&limiting_body(&model.geometry, d, &flag)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn nef_via_bodies<F: Field>(model: &SurfaceModel<F>, d: &DivisorClass<F>) -> Result<bool> {
    all_flags(model, d, ConvexBody::contains_origin)
}

pub fn ample_via_bodies<F: Field>(model: &SurfaceModel<F>, d: &DivisorClass<F>) -> Result<bool> {
    all_flags(model, d, ConvexBody::has_orthant_neighborhood)
}

pub fn movable_via_bodies<F: Field>(model: &SurfaceModel<F>, d: &DivisorClass<F>) -> Result<bool> {
    all_flags(model, d, |b| !b.slice_first_zero(1).is_empty())
}

/// One subtraction of the body-driven procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorialStep<F: Field> {
    pub curve: usize,
    pub coefficient: F,
    /// Body of the class before the step, flag `(curve, general point)`.
    pub body: ConvexBody<F>,
    /// Body of the class after subtracting `coefficient * curve`, same flag.
    pub reduced_body: ConvexBody<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorialProcedure<F: Field> {
    pub decomposition: ZariskiDecomposition<F>,
    pub steps: Vec<DivisorialStep<F>>,
}

/// Recovers `D = P + N` from limiting bodies alone.
///
/// A catalog curve `E` belongs to `div(Δ^lim(D))` when the body for the flag
/// `(E, general point)` is nonempty with empty `x1 = 0` slice; its coefficient
/// is the least `x1` on that body. Subtract and repeat, lowest catalog index
/// first, until no curve qualifies.
pub fn divisorial_zd_via_bodies<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
) -> Result<DivisorialProcedure<F>> {
    if !geom.is_pseudoeffective(d)? {
        return Err(Error::NotPseudoeffective);
    }
    let mut current = d.clone();
    let mut coeffs = vec![F::zero(); geom.num_curves()];
    let mut steps = Vec::new();
    loop {
        let mut found = None;
        for idx in 0..geom.num_curves() {
            let flag = Flag2D::general(geom.label(idx));
            let body = limiting_body(geom, &current, &flag)?;
            if !body.is_empty() && body.slice_first_zero(1).is_empty() {
                found = Some((idx, flag, body));
                break;
            }
        }
        let Some((idx, flag, body)) = found else {
            break;
        };
        if steps.len() >= geom.num_curves() {
            return Err(Error::Support(format!(
                "body procedure revisits `{}`",
                geom.label(idx)
            )));
        }
        let a = body.min_coordinate(0).expect("nonempty body");
        current = current.add_scaled(&-a.clone(), geom.curve_class(idx));
        let reduced_body = limiting_body(geom, &current, &flag)?;
        coeffs[idx] = coeffs[idx].clone() + a.clone();
        steps.push(DivisorialStep {
            curve: idx,
            coefficient: a,
            body,
            reduced_body,
        });
    }
    Ok(DivisorialProcedure {
        decomposition: ZariskiDecomposition {
            positive: current,
            negative: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, a)| a.is_positive())
                .collect(),
        },
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{build_fixture, FixtureSpec};
    use num_rational::BigRational;

    type Q = BigRational;

    fn d(xs: &[i64]) -> DivisorClass<Q> {
        DivisorClass::from_ints(xs)
    }

    fn model(spec: FixtureSpec) -> SurfaceModel<Q> {
        build_fixture::<Q>(spec).unwrap()
    }

    fn curves(cs: &[&str]) -> BaseLocus {
        BaseLocus::Curves(cs.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn oracle_loci() {
        let blp2 = model(FixtureSpec::Blp2);
        let p2 = model(FixtureSpec::P2 { m: 1 });
        let f2 = model(FixtureSpec::Fe { e: 2 });
        assert_eq!(
            restricted_base_locus(&blp2.geometry, &d(&[1, 1])).unwrap(),
            curves(&["E"])
        );
        assert_eq!(
            restricted_base_locus(&p2.geometry, &d(&[1])).unwrap(),
            BaseLocus::Empty
        );
        assert_eq!(
            restricted_base_locus(&p2.geometry, &d(&[-1])).unwrap(),
            BaseLocus::All
        );

        assert_eq!(
            augmented_base_locus(&blp2.geometry, &d(&[1, 0])).unwrap(),
            curves(&["E"])
        );
        assert_eq!(
            augmented_base_locus(&blp2.geometry, &d(&[2, -1])).unwrap(),
            BaseLocus::Empty
        );
        assert_eq!(
            augmented_base_locus(&f2.geometry, &d(&[1, 0])).unwrap(),
            BaseLocus::All
        );
    }

    #[test]
    fn body_criteria() {
        let blp2 = model(FixtureSpec::Blp2);
        let g = &blp2.geometry;
        assert!(criterion_bminus(g, &d(&[1, 1]), &Flag2D::general("E")).unwrap());
        assert!(!criterion_bminus(g, &d(&[1, 1]), &blp2.flag("H_line", "xgen").unwrap()).unwrap());
        let f2 = model(FixtureSpec::Fe { e: 2 });
        assert!(criterion_bminus(&f2.geometry, &d(&[1, 1]), &f2.flag("f", "x0").unwrap()).unwrap());

        assert!(criterion_bplus(g, &d(&[1, 0]), &Flag2D::general("E")).unwrap());
        let p2 = model(FixtureSpec::P2 { m: 2 });
        for flag in p2.enumerate_flags() {
            assert!(!criterion_bplus(&p2.geometry, &d(&[1]), &flag).unwrap());
        }
        assert!(criterion_bplus(&f2.geometry, &d(&[1, 0]), &Flag2D::general("f")).unwrap());
    }

    #[test]
    fn positivity_via_bodies() {
        let blp2 = model(FixtureSpec::Blp2);
        assert!(nef_via_bodies(&blp2, &d(&[2, -1])).unwrap());
        assert!(ample_via_bodies(&blp2, &d(&[2, -1])).unwrap());
        assert!(nef_via_bodies(&blp2, &d(&[1, 0])).unwrap());
        assert!(!ample_via_bodies(&blp2, &d(&[1, 0])).unwrap());
        let f2 = model(FixtureSpec::Fe { e: 2 });
        assert!(!nef_via_bodies(&f2, &d(&[1, 1])).unwrap());
        assert!(!movable_via_bodies(&f2, &d(&[1, 1])).unwrap());
        assert!(movable_via_bodies(&blp2, &d(&[2, -1])).unwrap());
        let p2 = model(FixtureSpec::P2 { m: 1 });
        assert!(movable_via_bodies(&p2, &d(&[1])).unwrap());
    }

    #[test]
    fn body_procedure() {
        let blp2 = model(FixtureSpec::Blp2);
        let run = divisorial_zd_via_bodies(&blp2.geometry, &d(&[1, 1])).unwrap();
        assert_eq!(run.decomposition.negative, vec![(0, Q::from_int(1))]);
        assert_eq!(run.decomposition.positive, d(&[1, 0]));
        assert_eq!(run.steps.len(), 1);

        let f2 = model(FixtureSpec::Fe { e: 2 });
        let run = divisorial_zd_via_bodies(&f2.geometry, &d(&[1, 1])).unwrap();
        assert_eq!(run.decomposition.negative, vec![(0, Q::half())]);

        let p2 = model(FixtureSpec::P2 { m: 1 });
        let run = divisorial_zd_via_bodies(&p2.geometry, &d(&[1])).unwrap();
        assert!(run.decomposition.negative.is_empty());
        assert!(run.steps.is_empty());
    }
}
