//! Built-in test surfaces.
//!
//! * `P2(m)`: the projective plane with a line and a degree-`m` curve through a general point.
//! * `BLP2`: the plane blown up at one point, basis `(H, E)`.
//! * `F_e(e)`: the Hirzebruch surface, basis `(C0, f)` with `C0^2 = -e`.
//! * `FPP(k)`: numerics of a fake projective plane, `H^2 = 1`, whose only
//!   catalog curve is a member `C` of `|kH|`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::SurfaceModel;
use crate::nslattice::{validate_geometry, CurveClass, DivisorClass, GeometryData};
use crate::okounkov::{Membership, PointOnSurface};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureSpec {
    P2 { m: i64 },
    Blp2,
    Fe { e: i64 },
    Fpp { k: i64 },
}

impl FixtureSpec {
    /// Parses a fixture name (`p2`, `blp2`, `f_e`, `fpp`) with `key=value` parameters.
    pub fn parse(name: &str, params: &BTreeMap<String, i64>) -> Result<Self> {
        let get = |key: &str, default: i64| -> Result<i64> {
            for k in params.keys() {
                if k != key {
                    return Err(Error::Parameter(format!(
                        "unexpected parameter `{k}` for {name}"
                    )));
                }
            }
            Ok(params.get(key).copied().unwrap_or(default))
        };
        match name.to_ascii_lowercase().as_str() {
            "p2" => Ok(FixtureSpec::P2 { m: get("m", 1)? }),
            "blp2" => {
                if let Some(k) = params.keys().next() {
                    return Err(Error::Parameter(format!(
                        "blp2 takes no parameters, got `{k}`"
                    )));
                }
                Ok(FixtureSpec::Blp2)
            }
            "f_e" | "fe" => Ok(FixtureSpec::Fe { e: get("e", 1)? }),
            "fpp" => Ok(FixtureSpec::Fpp { k: get("k", 2)? }),
            other => Err(Error::Parameter(format!("unknown fixture `{other}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            FixtureSpec::P2 { m } => format!("P2(m={m})"),
            FixtureSpec::Blp2 => "BLP2".to_string(),
            FixtureSpec::Fe { e } => format!("F_e(e={e})"),
            FixtureSpec::Fpp { k } => format!("FPP(k={k})"),
        }
    }
}

/// Label of the degree-`m` plane curve in the `P2(m)` fixture.
pub fn plane_curve_label(m: i64) -> String {
    match m {
        2 => "conic".to_string(),
        3 => "cubic".to_string(),
        _ => format!("deg{m}"),
    }
}

fn through(label: &str, curves: &[&str]) -> PointOnSurface {
    curves.iter().fold(PointOnSurface::new(label), |p, c| {
        p.with_curve(c, Membership::smooth())
    })
}

pub fn build_fixture<F: Field>(spec: FixtureSpec) -> Result<SurfaceModel<F>> {
    let (data, points) = match spec {
        FixtureSpec::P2 { m } => {
            if m < 1 {
                return Err(Error::Parameter(format!("P2 needs m >= 1, got {m}")));
            }
            let curve = plane_curve_label(m);
            (
                GeometryData {
                    name: spec.name(),
                    intersection_matrix: vec![vec![1]],
                    curves: vec![
                        CurveClass::new("line", vec![1]),
                        CurveClass::new(curve.clone(), vec![m]),
                    ],
                    effective_generators: vec!["line".into()],
                    ample_class: DivisorClass::from_ints(&[1]),
                },
                vec![through("xgen", &["line", &curve])],
            )
        }
        FixtureSpec::Blp2 => (
            GeometryData {
                name: spec.name(),
                intersection_matrix: vec![vec![1, 0], vec![0, -1]],
                curves: vec![
                    CurveClass::new("E", vec![0, 1]),
                    CurveClass::new("Lx", vec![1, -1]),
                    CurveClass::new("H_line", vec![1, 0]),
                ],
                effective_generators: vec!["E".into(), "Lx".into()],
                ample_class: DivisorClass::from_ints(&[2, -1]),
            },
            vec![through("xE", &["E", "Lx"]), through("xgen", &["H_line"])],
        ),
        FixtureSpec::Fe { e } => {
            if e < 0 {
                return Err(Error::Parameter(format!("F_e needs e >= 0, got {e}")));
            }
            (
                GeometryData {
                    name: spec.name(),
                    intersection_matrix: vec![vec![-e, 1], vec![1, 0]],
                    curves: vec![
                        CurveClass::new("C0", vec![1, 0]),
                        CurveClass::new("f", vec![0, 1]),
                    ],
                    effective_generators: vec!["C0".into(), "f".into()],
                    ample_class: DivisorClass::from_ints(&[1, e + 1]),
                },
                vec![through("x0", &["C0", "f"])],
            )
        }
        FixtureSpec::Fpp { k } => {
            if k < 2 {
                return Err(Error::Parameter(format!(
                    "FPP needs k > 1 since |H| is empty, got {k}"
                )));
            }
            (
                GeometryData {
                    name: spec.name(),
                    intersection_matrix: vec![vec![1]],
                    curves: vec![CurveClass::new("C", vec![k])],
                    effective_generators: vec!["C".into()],
                    ample_class: DivisorClass::from_ints(&[1]),
                },
                vec![through("x", &["C"])],
            )
        }
    };
    SurfaceModel::new(validate_geometry(data)?, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::okounkov::okounkov_polygon;
    use crate::zariski::zariski_decompose;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn every_fixture_validates() {
        for spec in [
            FixtureSpec::P2 { m: 1 },
            FixtureSpec::P2 { m: 5 },
            FixtureSpec::Blp2,
            FixtureSpec::Fe { e: 0 },
            FixtureSpec::Fe { e: 3 },
            FixtureSpec::Fpp { k: 2 },
        ] {
            build_fixture::<Q>(spec).unwrap();
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            build_fixture::<Q>(FixtureSpec::Fpp { k: 1 }),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            build_fixture::<Q>(FixtureSpec::P2 { m: 0 }),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            build_fixture::<Q>(FixtureSpec::Fe { e: -1 }),
            Err(Error::Parameter(_))
        ));
        let params: BTreeMap<String, i64> = [("e".to_string(), 2)].into();
        assert_eq!(
            FixtureSpec::parse("f_e", &params).unwrap(),
            FixtureSpec::Fe { e: 2 }
        );
        assert!(FixtureSpec::parse("p2", &params).is_err());
        assert!(FixtureSpec::parse("k3", &BTreeMap::new()).is_err());
    }

    #[test]
    fn conic_flag_polygon() {
        let p2 = build_fixture::<Q>(FixtureSpec::P2 { m: 2 }).unwrap();
        let poly = okounkov_polygon(
            &p2.geometry,
            &DivisorClass::from_ints(&[1]),
            &p2.flag("conic", "xgen").unwrap(),
        )
        .unwrap();
        assert_eq!(poly.vertices().len(), 3);
    }

    #[test]
    fn f2_decomposition() {
        let f2 = build_fixture::<Q>(FixtureSpec::Fe { e: 2 }).unwrap();
        let zd = zariski_decompose(&f2.geometry, &DivisorClass::from_ints(&[1, 1])).unwrap();
        assert_eq!(zd.negative, vec![(0, Q::half())]);
    }
}
