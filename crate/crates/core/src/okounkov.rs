//! Okounkov polygons of big classes, limiting bodies on the pseudoeffective
//! boundary, and valuation vectors of catalog-supported effective divisors.
//!
//! For a flag `(Y1, x)` and big `D`, the body is the region
//! `nu <= t <= mu, alpha(t) <= y <= beta(t)` where `nu = ord_Y1(||D||)`, `mu`
//! is the pseudoeffective threshold of `D` along `Y1`, and with
//! `D - tY1 = P_t + N_t`:
//!
//! * `alpha(t) = ord_x(N_t|Y1)`,
//! * `beta(t) = alpha(t) + P_t . Y1`.
//!
//! Both are affine on each chamber of the walk, so the polygon is exact.

use std::collections::BTreeMap;

use crate::convex::{ConvexBody, Point};
use crate::error::{Error, Result};
use crate::nslattice::{DivisorClass, SurfaceGeometry};
use crate::scalar::{inverse_power, Field};
use crate::zariski::{self, Affine};

/// Local data of a curve through a point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Membership {
    /// `mult_x(E)`, at least 1.
    pub mult: u32,
    /// `ord_x(E|C)` keyed by flag-curve label. Missing entries default to `mult`
    /// (transverse intersection).
    pub ord_on: BTreeMap<String, u32>,
}

impl Membership {
    pub fn smooth() -> Self {
        Membership {
            mult: 1,
            ord_on: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointOnSurface {
    pub label: String,
    /// Catalog curves through the point. Curves not listed miss it.
    pub memberships: BTreeMap<String, Membership>,
}

impl PointOnSurface {
    pub fn new(label: impl Into<String>) -> Self {
        PointOnSurface {
            label: label.into(),
            memberships: BTreeMap::new(),
        }
    }

    pub fn with_curve(mut self, curve: &str, membership: Membership) -> Self {
        self.memberships.insert(curve.to_string(), membership);
        self
    }

    /// A point of `curve` lying on no other catalog curve.
    pub fn general_on(curve: &str) -> Self {
        PointOnSurface::new(format!("gen@{curve}")).with_curve(curve, Membership::smooth())
    }

    pub fn is_synthesized(&self) -> bool {
        self.label.starts_with("gen@")
    }

    pub fn lies_on(&self, curve: &str) -> bool {
        self.memberships.contains_key(curve)
    }

    pub fn mult(&self, curve: &str) -> u32 {
        self.memberships.get(curve).map_or(0, |m| m.mult)
    }

    /// `ord_x(curve|flag_curve)`.
    pub fn ord_on(&self, curve: &str, flag_curve: &str) -> u32 {
        self.memberships
            .get(curve)
            .map_or(0, |m| m.ord_on.get(flag_curve).copied().unwrap_or(m.mult))
    }
}

/// An admissible flag `X ⊇ Y1 ∋ x` with `Y1` smooth at `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag2D {
    pub curve: String,
    pub point: PointOnSurface,
}

impl Flag2D {
    pub fn new(curve: impl Into<String>, point: PointOnSurface) -> Self {
        Flag2D {
            curve: curve.into(),
            point,
        }
    }

    pub fn general(curve: &str) -> Self {
        Flag2D::new(curve, PointOnSurface::general_on(curve))
    }
}

impl std::fmt::Display for Flag2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.curve, self.point.label)
    }
}

/// Catalog index of the flag curve, after checking admissibility.
pub fn resolve_flag<F: Field>(geom: &SurfaceGeometry<F>, flag: &Flag2D) -> Result<usize> {
    let idx = geom.curve_index(&flag.curve)?;
    for label in flag.point.memberships.keys() {
        geom.curve_index(label)?;
    }
    match flag.point.mult(&flag.curve) {
        1 => Ok(idx),
        0 => Err(Error::InadmissibleFlag(format!(
            "point `{}` is not on `{}`",
            flag.point.label, flag.curve
        ))),
        m => Err(Error::InadmissibleFlag(format!(
            "`{}` has multiplicity {m} at `{}`",
            flag.curve, flag.point.label
        ))),
    }
}

/// A nonnegative combination of catalog curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveCombination<F> {
    pub coeffs: BTreeMap<String, F>,
}

impl<F: Field> EffectiveCombination<F> {
    pub fn new(coeffs: BTreeMap<String, F>) -> Result<Self> {
        if let Some((label, _)) = coeffs.iter().find(|(_, c)| c.is_negative()) {
            return Err(Error::NegativeCoefficient(label.clone()));
        }
        Ok(EffectiveCombination { coeffs })
    }

    pub fn class(&self, geom: &SurfaceGeometry<F>) -> Result<DivisorClass<F>> {
        let mut d = DivisorClass::zero(geom.rank());
        for (label, c) in &self.coeffs {
            d = d.add_scaled(c, geom.curve_class(geom.curve_index(label)?));
        }
        Ok(d)
    }
}

/// Valuation vector `(nu1, nu2)` of an effective combination.
pub fn nu_vector<F: Field>(
    geom: &SurfaceGeometry<F>,
    divisor: &EffectiveCombination<F>,
    flag: &Flag2D,
) -> Result<(F, F)> {
    resolve_flag(geom, flag)?;
    let mut nu1 = F::zero();
    let mut nu2 = F::zero();
    for (label, c) in &divisor.coeffs {
        geom.curve_index(label)?;
        if *label == flag.curve {
            nu1 = nu1 + c.clone();
        } else {
            let ord = flag.point.ord_on(label, &flag.curve);
            nu2 = nu2 + c.clone() * F::from_int(ord as i64);
        }
    }
    Ok((nu1, nu2))
}

/// One chamber of the polygon: `alpha <= y <= beta` over `[t_lo, t_hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSegment<F> {
    pub t_lo: F,
    pub t_hi: F,
    pub support: Vec<usize>,
    pub lower: Affine<F>,
    pub upper: Affine<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkounkovPolygon<F> {
    /// Increasing in `t`, contiguous.
    pub segments: Vec<PolygonSegment<F>>,
}

impl<F: Field> OkounkovPolygon<F> {
    fn boundary_points(&self) -> Vec<Point<F>> {
        let mut pts = Vec::new();
        for s in &self.segments {
            for t in [&s.t_lo, &s.t_hi] {
                pts.push(vec![t.clone(), s.lower.eval(t)]);
                pts.push(vec![t.clone(), s.upper.eval(t)]);
            }
        }
        pts
    }

    pub fn to_body(&self) -> ConvexBody<F> {
        ConvexBody::from_points(2, self.boundary_points()).expect("polygon lies in the orthant")
    }

    /// Canonical vertex list.
    pub fn vertices(&self) -> Vec<Point<F>> {
        self.to_body().vertices().to_vec()
    }

    pub fn t_range(&self) -> Option<(F, F)> {
        Some((
            self.segments.first()?.t_lo.clone(),
            self.segments.last()?.t_hi.clone(),
        ))
    }
}

/// The Okounkov polygon of a big class.
pub fn okounkov_polygon<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
) -> Result<OkounkovPolygon<F>> {
    let y1 = resolve_flag(geom, flag)?;
    if !geom.is_big(d)? {
        return Err(Error::NotBig);
    }
    polygon_unchecked(geom, d, y1, &flag.point)
}

fn polygon_unchecked<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    y1: usize,
    point: &PointOnSurface,
) -> Result<OkounkovPolygon<F>> {
    let nu = zariski::decompose_unchecked(geom, d)?.coefficient(y1);
    let c = geom.curve_class(y1);
    let mu = geom.pseff_threshold(d, c)?;
    let flag_label = geom.label(y1);
    let chambers = zariski::walk_family(geom, d, &-c, &nu, &mu)?;
    let segments = chambers
        .into_iter()
        .map(|ch| {
            let mut lower = Affine::zero();
            for (&i, a) in ch.support.iter().zip(&ch.coefficients) {
                if i == y1 {
                    continue;
                }
                let ord = point.ord_on(geom.label(i), flag_label);
                if ord > 0 {
                    lower = lower.add(&a.scale(&F::from_int(ord as i64)));
                }
            }
            let upper = lower.add(&ch.positive.pair_curve(geom, y1));
            PolygonSegment {
                t_lo: ch.t_lo,
                t_hi: ch.t_hi,
                support: ch.support,
                lower,
                upper,
            }
        })
        .collect();
    Ok(OkounkovPolygon { segments })
}

/// Controls the `eps -> 0` limit for classes on the boundary of the big cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitOptions {
    /// First exponent `k` in `eps_k = 2^-k`.
    pub k_start: u32,
    /// Give up with `Error::Stabilization` past this exponent.
    pub k_max: u32,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            k_start: 4,
            k_max: 32,
        }
    }
}

pub fn limiting_body<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
) -> Result<ConvexBody<F>> {
    limiting_body_with(geom, d, flag, LimitOptions::default())
}

/// `∩_{eps > 0} Δ(D + eps A)`, empty when `D` is not pseudoeffective.
///
/// On the boundary the bodies of `D + eps A` are computed for `eps = 2^-k`.
/// Once the chamber supports agree across three consecutive exponents, every
/// segment endpoint is affine in `eps` (the chamber systems are linear in both
/// `t` and `eps`), so the `eps = 0` limit is read off exactly by linear
/// extrapolation; the third sample confirms the affine regime.
pub fn limiting_body_with<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    flag: &Flag2D,
    opts: LimitOptions,
) -> Result<ConvexBody<F>> {
    let y1 = resolve_flag(geom, flag)?;
    if !geom.is_pseudoeffective(d)? {
        return Ok(ConvexBody::empty(2));
    }
    if geom.is_big(d)? {
        return Ok(polygon_unchecked(geom, d, y1, &flag.point)?.to_body());
    }

    type Sample<F> = (F, Vec<Vec<usize>>, Vec<Vec<F>>);
    let mut history: Vec<Sample<F>> = Vec::new();
    for k in opts.k_start..=opts.k_max {
        let eps: F = inverse_power(2, k);
        let perturbed = d.add_scaled(&eps, geom.ample());
        let poly = polygon_unchecked(geom, &perturbed, y1, &flag.point)?;
        let signature: Vec<Vec<usize>> = poly.segments.iter().map(|s| s.support.clone()).collect();
        let data: Vec<Vec<F>> = poly
            .segments
            .iter()
            .map(|s| {
                vec![
                    s.t_lo.clone(),
                    s.t_hi.clone(),
                    s.lower.eval(&s.t_lo),
                    s.lower.eval(&s.t_hi),
                    s.upper.eval(&s.t_lo),
                    s.upper.eval(&s.t_hi),
                ]
            })
            .collect();
        history.push((eps, signature, data));
        if history.len() < 3 {
            continue;
        }
        let [a, b, c] = &history[history.len() - 3..] else {
            unreachable!()
        };
        if a.1 != b.1 || b.1 != c.1 {
            continue;
        }
        let early = extrapolate(a, b);
        let late = extrapolate(b, c);
        if early != late {
            continue;
        }
        let pts: Vec<Point<F>> = late
            .iter()
            .flat_map(|seg| {
                [
                    vec![seg[0].clone(), seg[2].clone()],
                    vec![seg[0].clone(), seg[4].clone()],
                    vec![seg[1].clone(), seg[3].clone()],
                    vec![seg[1].clone(), seg[5].clone()],
                ]
            })
            .collect();
        return ConvexBody::from_points(2, pts);
    }
    Err(Error::Stabilization { k_max: opts.k_max })
}

/// Value at `eps = 0` of the line through two samples.
fn extrapolate<F: Field>(
    a: &(F, Vec<Vec<usize>>, Vec<Vec<F>>),
    b: &(F, Vec<Vec<usize>>, Vec<Vec<F>>),
) -> Vec<Vec<F>> {
    let (e1, e2) = (&a.0, &b.0);
    let denom = e2.clone() - e1.clone();
    a.2.iter()
        .zip(&b.2)
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .map(|(v1, v2)| (e2.clone() * v1.clone() - e1.clone() * v2.clone()) / denom.clone())
                .collect()
        })
        .collect()
}

/// Exact area of a planar body by the shoelace formula.
pub fn area<F: Field>(body: &ConvexBody<F>) -> F {
    assert_eq!(body.dim(), 2, "area is defined for planar bodies");
    let vs = body.vertices();
    if vs.len() < 3 {
        return F::zero();
    }
    let n = F::from_int(vs.len() as i64);
    let cx = vs.iter().fold(F::zero(), |a, v| a + v[0].clone()) / n.clone();
    let cy = vs.iter().fold(F::zero(), |a, v| a + v[1].clone()) / n;
    let rel: Vec<(F, F)> = vs
        .iter()
        .map(|v| (v[0].clone() - cx.clone(), v[1].clone() - cy.clone()))
        .collect();
    // angular order about the centroid
    let upper = |p: &(F, F)| p.1.is_positive() || (p.1.is_zero() && p.0.is_positive());
    let mut order: Vec<usize> = (0..rel.len()).collect();
    order.sort_by(|&i, &j| {
        let (p, q) = (&rel[i], &rel[j]);
        upper(q).cmp(&upper(p)).then_with(|| {
            let cr = p.0.clone() * q.1.clone() - p.1.clone() * q.0.clone();
            F::zero().cmp(&cr)
        })
    });
    let mut twice = F::zero();
    for k in 0..order.len() {
        let (p, q) = (&vs[order[k]], &vs[order[(k + 1) % order.len()]]);
        twice = twice + p[0].clone() * q[1].clone() - p[1].clone() * q[0].clone();
    }
    twice.abs() / F::from_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{build_fixture, FixtureSpec};
    use crate::model::SurfaceModel;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64, r: i64) -> Q {
        Q::ratio(p, r)
    }

    fn d(xs: &[i64]) -> DivisorClass<Q> {
        DivisorClass::from_ints(xs)
    }

    fn model(spec: FixtureSpec) -> SurfaceModel<Q> {
        build_fixture::<Q>(spec).unwrap()
    }

    fn pts(ps: &[(Q, Q)]) -> Vec<Point<Q>> {
        let mut v: Vec<Point<Q>> = ps.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect();
        v.sort();
        v
    }

    #[test]
    fn nu_vectors() {
        let f2 = model(FixtureSpec::Fe { e: 2 });
        let flag = f2.flag("f", "x0").unwrap();
        let dd = EffectiveCombination::new(
            [("C0".to_string(), q(1, 2)), ("f".to_string(), q(1, 1))].into(),
        )
        .unwrap();
        assert_eq!(
            nu_vector(&f2.geometry, &dd, &flag).unwrap(),
            (q(1, 1), q(1, 2))
        );

        let blp2 = model(FixtureSpec::Blp2);
        let e = EffectiveCombination::new([("E".to_string(), q(1, 1))].into()).unwrap();
        assert_eq!(
            nu_vector(&blp2.geometry, &e, &Flag2D::general("E")).unwrap(),
            (q(1, 1), q(0, 1))
        );

        let p2 = model(FixtureSpec::P2 { m: 2 });
        let half = EffectiveCombination::new([("conic".to_string(), q(1, 2))].into()).unwrap();
        let flag = p2.flag("conic", "xgen").unwrap();
        assert_eq!(
            nu_vector(&p2.geometry, &half, &flag).unwrap(),
            (q(1, 2), q(0, 1))
        );

        assert!(matches!(
            EffectiveCombination::new([("E".to_string(), q(-1, 1))].into()),
            Err(Error::NegativeCoefficient(_))
        ));
    }

    #[test]
    fn golden_polygons() {
        let p2 = model(FixtureSpec::P2 { m: 2 });
        let poly =
            okounkov_polygon(&p2.geometry, &d(&[1]), &p2.flag("conic", "xgen").unwrap()).unwrap();
        assert_eq!(
            poly.vertices(),
            pts(&[(q(0, 1), q(0, 1)), (q(1, 2), q(0, 1)), (q(0, 1), q(2, 1))])
        );

        let blp2 = model(FixtureSpec::Blp2);
        let flag = Flag2D::general("E");
        let poly = okounkov_polygon(&blp2.geometry, &d(&[1, 0]), &flag).unwrap();
        assert_eq!(
            poly.vertices(),
            pts(&[(q(0, 1), q(0, 1)), (q(1, 1), q(0, 1)), (q(1, 1), q(1, 1))])
        );
        let poly = okounkov_polygon(&blp2.geometry, &d(&[1, 1]), &flag).unwrap();
        assert_eq!(
            poly.vertices(),
            pts(&[(q(1, 1), q(0, 1)), (q(2, 1), q(0, 1)), (q(2, 1), q(1, 1))])
        );

        let f2 = model(FixtureSpec::Fe { e: 2 });
        let poly =
            okounkov_polygon(&f2.geometry, &d(&[1, 1]), &f2.flag("f", "x0").unwrap()).unwrap();
        assert_eq!(
            poly.vertices(),
            pts(&[(q(0, 1), q(1, 2)), (q(1, 1), q(1, 1)), (q(0, 1), q(1, 1))])
        );
    }

    #[test]
    fn polygon_errors() {
        let f2 = model(FixtureSpec::Fe { e: 2 });
        assert_eq!(
            okounkov_polygon(&f2.geometry, &d(&[1, 0]), &Flag2D::general("f")),
            Err(Error::NotBig)
        );
        let off = Flag2D::new("f", PointOnSurface::general_on("C0"));
        assert!(matches!(
            okounkov_polygon(&f2.geometry, &d(&[1, 1]), &off),
            Err(Error::InadmissibleFlag(_))
        ));
        let singular = Flag2D::new(
            "f",
            PointOnSurface::new("p").with_curve(
                "f",
                Membership {
                    mult: 2,
                    ord_on: BTreeMap::new(),
                },
            ),
        );
        assert!(matches!(
            okounkov_polygon(&f2.geometry, &d(&[1, 1]), &singular),
            Err(Error::InadmissibleFlag(_))
        ));
    }

    #[test]
    fn limiting_bodies() {
        let f2 = model(FixtureSpec::Fe { e: 2 });
        // The boundary class C0 collapses to the valuation point of C0 itself.
        let body = limiting_body(&f2.geometry, &d(&[1, 0]), &f2.flag("f", "x0").unwrap()).unwrap();
        assert_eq!(body.vertices(), pts(&[(q(0, 1), q(1, 1))]).as_slice());
        assert_eq!(area(&body), q(0, 1));

        let body = limiting_body(&f2.geometry, &d(&[0, 1]), &Flag2D::general("f")).unwrap();
        assert_eq!(
            body.vertices(),
            pts(&[(q(0, 1), q(0, 1)), (q(1, 1), q(0, 1))]).as_slice()
        );

        let p2 = model(FixtureSpec::P2 { m: 1 });
        assert!(
            limiting_body(&p2.geometry, &d(&[-1]), &Flag2D::general("line"))
                .unwrap()
                .is_empty()
        );

        let blp2 = model(FixtureSpec::Blp2);
        let flag = Flag2D::general("E");
        assert_eq!(
            limiting_body(&blp2.geometry, &d(&[1, 0]), &flag).unwrap(),
            okounkov_polygon(&blp2.geometry, &d(&[1, 0]), &flag)
                .unwrap()
                .to_body()
        );
        assert_eq!(
            limiting_body(&blp2.geometry, &d(&[0, 0]), &flag).unwrap(),
            ConvexBody::origin(2)
        );
    }

    #[test]
    fn stabilization_failure_is_reported() {
        let f2 = model(FixtureSpec::Fe { e: 2 });
        let opts = LimitOptions {
            k_start: 4,
            k_max: 5,
        };
        assert_eq!(
            limiting_body_with(&f2.geometry, &d(&[1, 0]), &Flag2D::general("f"), opts),
            Err(Error::Stabilization { k_max: 5 })
        );
    }

    #[test]
    fn areas() {
        let p2 = model(FixtureSpec::P2 { m: 1 });
        let b = okounkov_polygon(&p2.geometry, &d(&[1]), &p2.flag("line", "xgen").unwrap())
            .unwrap()
            .to_body();
        assert_eq!(area(&b), q(1, 2));
        let f2 = model(FixtureSpec::Fe { e: 2 });
        let b = okounkov_polygon(&f2.geometry, &d(&[1, 1]), &f2.flag("f", "x0").unwrap())
            .unwrap()
            .to_body();
        assert_eq!(area(&b), q(1, 4));
        assert_eq!(area(&ConvexBody::<Q>::empty(2)), q(0, 1));
    }
}
