//! A validated geometry together with its named points.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::nslattice::SurfaceGeometry;
use crate::okounkov::{resolve_flag, Flag2D, PointOnSurface};
use crate::scalar::Field;

/// Label that selects the synthesized general point of a flag curve.
pub const GENERAL_POINT: &str = "gen";

#[derive(Debug, Clone)]
pub struct SurfaceModel<F> {
    pub geometry: SurfaceGeometry<F>,
    pub points: Vec<PointOnSurface>,
}

impl<F: Field> SurfaceModel<F> {
    pub fn new(geometry: SurfaceGeometry<F>, points: Vec<PointOnSurface>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.label.is_empty() || p.label == GENERAL_POINT || !seen.insert(p.label.as_str()) {
                return Err(Error::Label(p.label.clone()));
            }
            for (curve, m) in &p.memberships {
                geometry.curve_index(curve)?;
                if m.mult == 0 {
                    return Err(Error::InadmissibleFlag(format!(
                        "point `{}` declares multiplicity 0 on `{curve}`",
                        p.label
                    )));
                }
                let ci = geometry.curve_index(curve)?;
                for (other, &ord) in &m.ord_on {
                    let oi = geometry.curve_index(other)?;
                    if !p.lies_on(other) {
                        return Err(Error::InadmissibleFlag(format!(
                            "point `{}` gives an order on `{other}` but does not lie on it",
                            p.label
                        )));
                    }
                    let bound = geometry.pair_curve(geometry.curve_class(ci), oi);
                    if ord < m.mult || (other != curve && F::from_int(ord as i64) > bound) {
                        return Err(Error::InadmissibleFlag(format!(
                            "order {ord} of `{curve}` along `{other}` at `{}` is out of range",
                            p.label
                        )));
                    }
                }
            }
        }
        Ok(SurfaceModel { geometry, points })
    }

    pub fn point(&self, label: &str) -> Result<&PointOnSurface> {
        self.points
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// The flag `curve:point`, where `point` may be [`GENERAL_POINT`].
    pub fn flag(&self, curve: &str, point: &str) -> Result<Flag2D> {
        self.geometry.curve_index(curve)?;
        let flag = if point == GENERAL_POINT {
            Flag2D::general(curve)
        } else {
            Flag2D::new(curve, self.point(point)?.clone())
        };
        resolve_flag(&self.geometry, &flag)?;
        Ok(flag)
    }

    /// Flags centered at `point`: catalog curves through it that are smooth there.
    pub fn flags_at(&self, point: &PointOnSurface) -> Vec<Flag2D> {
        self.geometry
            .curves()
            .iter()
            .filter(|c| point.mult(&c.label) == 1)
            .map(|c| Flag2D::new(c.label.clone(), point.clone()))
            .collect()
    }

    /// Every catalog curve paired with each named point on it, then with a
    /// synthesized general point.
    pub fn enumerate_flags(&self) -> Vec<Flag2D> {
        let mut out = Vec::new();
        for c in self.geometry.curves() {
            for p in &self.points {
                if p.mult(&c.label) == 1 {
                    out.push(Flag2D::new(c.label.clone(), p.clone()));
                }
            }
            out.push(Flag2D::general(&c.label));
        }
        out
    }

    /// Named points, then one synthesized general point per catalog curve.
    pub fn centers(&self) -> Vec<PointOnSurface> {
        let mut out = self.points.clone();
        out.extend(
            self.geometry
                .curves()
                .iter()
                .map(|c| PointOnSurface::general_on(&c.label)),
        );
        out
    }
}
