//! JSON geometry files. Rationals are written as `"p/q"` strings; integers are
//! accepted too, floating-point numbers never.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use okx_core::model::SurfaceModel;
use okx_core::nslattice::{validate_geometry, CurveClass, DivisorClass, GeometryData};
use okx_core::okounkov::{Membership, PointOnSurface};
use okx_core::{Model, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational as it appears in JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational(pub Rational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct ExactVisitor;

impl Visitor<'_> for ExactVisitor {
    type Value = ExactRational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactRational, E> {
        parse_rational(v).map(ExactRational).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactRational, E> {
        Ok(ExactRational(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactRational, E> {
        Ok(ExactRational(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactRational, E> {
        Err(E::custom(format!(
            "floating-point value {v} rejected; write rationals as \"p/q\""
        )))
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExactVisitor)
    }
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        bail!("`{s}` is not an exact rational; write it as p/q");
    }
    Rational::from_str(t).map_err(|e| anyhow::anyhow!("`{s}` is not a rational: {e}"))
}

/// Comma-separated rationals in the geometry basis.
pub fn parse_divisor(s: &str) -> Result<DivisorClass<Rational>> {
    let coeffs = s
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("invalid divisor `{s}`"))?;
    Ok(DivisorClass::new(coeffs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub point_label: String,
    pub mult: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ord_on: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub label: String,
    pub class: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub name: String,
    pub rank: usize,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub curves: Vec<CurveEntry>,
    pub effective_generators: Vec<String>,
    pub ample_class: Vec<ExactRational>,
}

impl GeometryFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed geometry file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("geometry files serialize")
    }

    /// Validates the geometry and gathers the named points from the curve entries.
    pub fn into_model(self) -> Result<Model> {
        if self.rank != self.intersection_matrix.len() {
            bail!(okx_core::Error::Dimension {
                expected: self.rank,
                found: self.intersection_matrix.len(),
            });
        }
        let mut points: Vec<PointOnSurface> = Vec::new();
        for c in &self.curves {
            for p in &c.points {
                let membership = Membership {
                    mult: p.mult,
                    ord_on: p.ord_on.clone(),
                };
                let slot = match points.iter().position(|q| q.label == p.point_label) {
                    Some(i) => &mut points[i],
                    None => {
                        points.push(PointOnSurface::new(p.point_label.clone()));
                        points.last_mut().unwrap()
                    }
                };
                if slot
                    .memberships
                    .insert(c.label.clone(), membership)
                    .is_some()
                {
                    bail!("point `{}` is listed twice on `{}`", p.point_label, c.label);
                }
            }
        }
        let data = GeometryData {
            name: self.name,
            intersection_matrix: self.intersection_matrix,
            curves: self
                .curves
                .into_iter()
                .map(|c| CurveClass::new(c.label, c.class))
                .collect(),
            effective_generators: self.effective_generators,
            ample_class: DivisorClass::new(self.ample_class.into_iter().map(|r| r.0).collect()),
        };
        Ok(SurfaceModel::new(validate_geometry(data)?, points)?)
    }

    pub fn from_model(model: &Model) -> Self {
        let data = model.geometry.data();
        GeometryFile {
            name: data.name.clone(),
            rank: data.intersection_matrix.len(),
            intersection_matrix: data.intersection_matrix.clone(),
            curves: data
                .curves
                .iter()
                .map(|c| CurveEntry {
                    label: c.label.clone(),
                    class: c.class.clone(),
                    points: model
                        .points
                        .iter()
                        .filter_map(|p| {
                            p.memberships.get(&c.label).map(|m| PointEntry {
                                point_label: p.label.clone(),
                                mult: m.mult,
                                ord_on: m.ord_on.clone(),
                            })
                        })
                        .collect(),
                })
                .collect(),
            effective_generators: data.effective_generators.clone(),
            ample_class: data
                .ample_class
                .coeffs()
                .iter()
                .cloned()
                .map(ExactRational)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use okx_core::fixtures::{build_fixture, FixtureSpec};

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("-3/6").unwrap(),
            Rational::new((-1).into(), 2.into())
        );
        assert_eq!(
            parse_rational("4").unwrap(),
            Rational::from_integer(4.into())
        );
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_divisor("1,-1/2").unwrap().coeffs().len(), 2);
    }

    #[test]
    fn floats_are_rejected() {
        let mut file = GeometryFile::from_model(&build_fixture(FixtureSpec::Blp2).unwrap());
        file.ample_class[0] = ExactRational(Rational::from_integer(2.into()));
        let text = file.to_json().replace("\"2\"", "2.0");
        let err = GeometryFile::from_json(&text).unwrap_err();
        assert!(format!("{err:#}").contains("floating-point"));
        let ints = file.to_json().replace("\"2\"", "2");
        assert_eq!(GeometryFile::from_json(&ints).unwrap(), file);
    }

    #[test]
    fn fixtures_round_trip() {
        let specs = [
            FixtureSpec::P2 { m: 2 },
            FixtureSpec::Blp2,
            FixtureSpec::Fe { e: 3 },
            FixtureSpec::Fpp { k: 4 },
        ];
        for spec in specs {
            let model: Model = build_fixture(spec).unwrap();
            let file = GeometryFile::from_model(&model);
            let back = GeometryFile::from_json(&file.to_json())
                .unwrap()
                .into_model()
                .unwrap();
            assert_eq!(back.geometry.data(), model.geometry.data());
            assert_eq!(back.points, model.points);
            assert_eq!(GeometryFile::from_model(&back), file);
        }
    }
}
