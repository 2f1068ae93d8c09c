//! Maximal sub-simplex lengths and the resulting bounds on (moving) Seshadri
//! constants, with the curve-ratio value as a cross-check for nef classes.

use crate::error::{Error, Result};
use crate::nslattice::{DivisorClass, SurfaceGeometry};
use crate::okounkov::{limiting_body, Flag2D, PointOnSurface};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeshadriBounds<F> {
    /// Largest `λ_min` over flags centered at the point.
    pub lower: F,
    /// Smallest `λ_2` over flags centered at the point.
    pub upper: F,
    /// `min D.C / mult_x C` over catalog curves through the point, for nef `D`.
    pub oracle: Option<F>,
}

impl<F: Field> SeshadriBounds<F> {
    pub fn scale(&self, c: &F) -> Self {
        SeshadriBounds {
            lower: self.lower.clone() * c.clone(),
            upper: self.upper.clone() * c.clone(),
            oracle: self.oracle.as_ref().map(|o| o.clone() * c.clone()),
        }
    }
}

/// `(λ1, λ2)` of the maximal sub-simplex of the limiting body.
pub fn lambda_lengths<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
) -> Result<(F, F)> {
    let s = limiting_body(geom, d, flag)?.max_subsimplex();
    let mut it = s.lengths.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap()))
}

pub fn seshadri_curve_oracle<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    x: &PointOnSurface,
) -> Result<F> {
    if !geom.is_nef(d)? {
        return Err(Error::NotNef);
    }
    (0..geom.num_curves())
        .filter_map(|i| {
            let m = x.mult(geom.label(i));
            (m > 0).then(|| geom.pair_curve(d, i) / F::from_int(m as i64))
        })
        .min()
        .ok_or_else(|| Error::IsolatedPoint(x.label.clone()))
}

/// Bounds from every catalog flag centered at `x`.
pub fn moving_seshadri_bounds<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    x: &PointOnSurface,
) -> Result<SeshadriBounds<F>> {
    if !geom.is_pseudoeffective(d)? {
        return Err(Error::NotPseudoeffective);
    }
    let flags: Vec<Flag2D> = geom
        .curves()
        .iter()
        .filter(|c| x.mult(&c.label) == 1)
        .map(|c| Flag2D::new(c.label.clone(), x.clone()))
        .collect();
    if flags.is_empty() {
        return Err(Error::IsolatedPoint(x.label.clone()));
    }
    let mut lower: Option<F> = None;
    let mut upper: Option<F> = None;
    for flag in &flags {
        let (l1, l2) = lambda_lengths(geom, d, flag)?;
        let lmin = l1.min(l2.clone());
        if lower.as_ref().is_none_or(|l| lmin > *l) {
            lower = Some(lmin);
        }
        if upper.as_ref().is_none_or(|u| l2 < *u) {
            upper = Some(l2);
        }
    }
    let oracle = if geom.is_nef(d)? {
        Some(seshadri_curve_oracle(geom, d, x)?)
    } else {
        None
    };
    Ok(SeshadriBounds {
        lower: lower.unwrap(),
        upper: upper.unwrap(),
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{build_fixture, FixtureSpec};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64, r: i64) -> Q {
        Q::ratio(p, r)
    }

    fn d(xs: &[i64]) -> DivisorClass<Q> {
        DivisorClass::from_ints(xs)
    }

    #[test]
    fn lambdas() {
        let p2 = build_fixture::<Q>(FixtureSpec::P2 { m: 2 }).unwrap();
        let flag = p2.flag("conic", "xgen").unwrap();
        assert_eq!(
            lambda_lengths(&p2.geometry, &d(&[1]), &flag).unwrap(),
            (q(1, 2), q(2, 1))
        );
        let fpp = build_fixture::<Q>(FixtureSpec::Fpp { k: 2 }).unwrap();
        let flag = fpp.flag("C", "x").unwrap();
        assert_eq!(
            lambda_lengths(&fpp.geometry, &d(&[1]), &flag).unwrap(),
            (q(1, 2), q(2, 1))
        );
        let blp2 = build_fixture::<Q>(FixtureSpec::Blp2).unwrap();
        let flag = blp2.flag("E", "xE").unwrap();
        assert_eq!(
            lambda_lengths(&blp2.geometry, &d(&[1, 1]), &flag).unwrap(),
            (q(0, 1), q(0, 1))
        );
    }

    #[test]
    fn curve_oracle() {
        let p2 = build_fixture::<Q>(FixtureSpec::P2 { m: 1 }).unwrap();
        let x = p2.point("xgen").unwrap();
        assert_eq!(
            seshadri_curve_oracle(&p2.geometry, &d(&[1]), x).unwrap(),
            q(1, 1)
        );
        let blp2 = build_fixture::<Q>(FixtureSpec::Blp2).unwrap();
        let x = blp2.point("xE").unwrap();
        assert_eq!(
            seshadri_curve_oracle(&blp2.geometry, &d(&[1, 0]), x).unwrap(),
            q(0, 1)
        );
        let f2 = build_fixture::<Q>(FixtureSpec::Fe { e: 2 }).unwrap();
        let x = f2.point("x0").unwrap();
        let half_c0_f = DivisorClass::new(vec![q(1, 2), q(1, 1)]);
        assert_eq!(
            seshadri_curve_oracle(&f2.geometry, &half_c0_f, x).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            seshadri_curve_oracle(&f2.geometry, &d(&[1, 1]), x),
            Err(Error::NotNef)
        );
        let lonely = PointOnSurface::new("p");
        assert!(matches!(
            seshadri_curve_oracle(&p2.geometry, &d(&[1]), &lonely),
            Err(Error::IsolatedPoint(_))
        ));
    }

    #[test]
    fn bounds() {
        let p2 = build_fixture::<Q>(FixtureSpec::P2 { m: 2 }).unwrap();
        let b = moving_seshadri_bounds(&p2.geometry, &d(&[1]), p2.point("xgen").unwrap()).unwrap();
        assert_eq!(
            (b.lower, b.upper, b.oracle),
            (q(1, 1), q(1, 1), Some(q(1, 1)))
        );

        for k in 2..=4 {
            let fpp = build_fixture::<Q>(FixtureSpec::Fpp { k }).unwrap();
            let b =
                moving_seshadri_bounds(&fpp.geometry, &d(&[1]), fpp.point("x").unwrap()).unwrap();
            assert_eq!((b.lower, b.upper), (q(1, k), q(k, 1)));
        }

        let blp2 = build_fixture::<Q>(FixtureSpec::Blp2).unwrap();
        let b =
            moving_seshadri_bounds(&blp2.geometry, &d(&[1, 0]), blp2.point("xE").unwrap()).unwrap();
        assert_eq!(b.lower, q(0, 1));
        assert_eq!(
            moving_seshadri_bounds(&blp2.geometry, &d(&[1, -2]), blp2.point("xE").unwrap()),
            Err(Error::NotPseudoeffective)
        );
    }
}
