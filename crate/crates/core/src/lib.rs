//! Exact Okounkov bodies of divisors on surfaces, and the convex-geometric
//! tests for asymptotic base loci, positivity, divisorial Zariski
//! decompositions and moving Seshadri constants that read off those bodies.
//!
//! Everything is generic over an exact ordered [`Field`]; the aliases below fix
//! it to arbitrary-precision rationals.

pub mod convex;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod loci;
pub mod lp;
pub mod model;
pub mod nslattice;
pub mod okounkov;
pub mod scalar;
pub mod seshadri;
pub mod verify;
pub mod zariski;

pub use error::{Error, Result};
pub use scalar::Field;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type Divisor = nslattice::DivisorClass<Rational>;
pub type Geometry = nslattice::SurfaceGeometry<Rational>;
pub type Model = model::SurfaceModel<Rational>;
pub type Body = convex::ConvexBody<Rational>;
pub type Polygon = okounkov::OkounkovPolygon<Rational>;
pub type Decomposition = zariski::ZariskiDecomposition<Rational>;
pub type Bounds = seshadri::SeshadriBounds<Rational>;
