//! Numerical lattice of a surface: intersection form, curve catalog and the
//! cone-membership queries answered by exact linear programming.

use std::collections::BTreeSet;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, Inertia};
use crate::lp::{LinearProgram, LpOutcome};
use crate::scalar::Field;
use crate::zariski;

/// An irreducible curve of the catalog, by its integral class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub label: String,
    pub class: Vec<i64>,
}

impl CurveClass {
    pub fn new(label: impl Into<String>, class: Vec<i64>) -> Self {
        CurveClass {
            label: label.into(),
            class,
        }
    }
}

/// A numerical divisor class, as coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass<F>(Vec<F>);

impl<F: Field> DivisorClass<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![F::zero(); rank])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &F) -> Self {
        DivisorClass(self.0.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: &F, other: &Self) -> Self {
        DivisorClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + s.clone() * b.clone())
                .collect(),
        )
    }
}

impl<F: Field> Add for &DivisorClass<F> {
    type Output = DivisorClass<F>;
    fn add(self, rhs: Self) -> DivisorClass<F> {
        DivisorClass(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<F: Field> Sub for &DivisorClass<F> {
    type Output = DivisorClass<F>;
    fn sub(self, rhs: Self) -> DivisorClass<F> {
        DivisorClass(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<F: Field> Neg for &DivisorClass<F> {
    type Output = DivisorClass<F>;
    fn neg(self) -> DivisorClass<F> {
        DivisorClass(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<F: Field> std::fmt::Display for DivisorClass<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Unvalidated geometry, as read from a file or assembled by a fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryData<F> {
    pub name: String,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub curves: Vec<CurveClass>,
    pub effective_generators: Vec<String>,
    pub ample_class: DivisorClass<F>,
}

/// A validated surface model: Hodge-index intersection form, a curve catalog
/// whose generators span the effective cone, and an ample class.
#[derive(Debug, Clone)]
pub struct SurfaceGeometry<F> {
    data: GeometryData<F>,
    q: Vec<Vec<F>>,
    curve_divisors: Vec<DivisorClass<F>>,
    // Q * E for each catalog curve, so that D.E is a plain dot product.
    curve_duals: Vec<Vec<F>>,
    generators: Vec<usize>,
}

/// Checks every geometry invariant and returns the validated model.
pub fn validate_geometry<F: Field>(data: GeometryData<F>) -> Result<SurfaceGeometry<F>> {
    let rho = data.intersection_matrix.len();
    if rho == 0 {
        return Err(Error::Dimension {
            expected: 1,
            found: 0,
        });
    }
    for row in &data.intersection_matrix {
        if row.len() != rho {
            return Err(Error::Dimension {
                expected: rho,
                found: row.len(),
            });
        }
    }
    for i in 0..rho {
        for j in 0..i {
            if data.intersection_matrix[i][j] != data.intersection_matrix[j][i] {
                return Err(Error::Asymmetric(i, j));
            }
        }
    }

    let mut seen = BTreeSet::new();
    for c in &data.curves {
        if c.label.is_empty() || !seen.insert(c.label.as_str()) {
            return Err(Error::Label(c.label.clone()));
        }
        if c.class.len() != rho {
            return Err(Error::Dimension {
                expected: rho,
                found: c.class.len(),
            });
        }
        if c.class.iter().all(|&x| x == 0) {
            return Err(Error::ZeroCurve(c.label.clone()));
        }
    }
    if data.effective_generators.is_empty() {
        return Err(Error::Generators("no effective generators".into()));
    }
    let mut generators = Vec::new();
    for g in &data.effective_generators {
        let idx = data
            .curves
            .iter()
            .position(|c| &c.label == g)
            .ok_or_else(|| Error::Generators(format!("`{g}` is not a catalog curve")))?;
        if !generators.contains(&idx) {
            generators.push(idx);
        }
    }
    if data.ample_class.rank() != rho {
        return Err(Error::Dimension {
            expected: rho,
            found: data.ample_class.rank(),
        });
    }

    let q: Vec<Vec<F>> = data
        .intersection_matrix
        .iter()
        .map(|r| r.iter().map(|&x| F::from_int(x)).collect())
        .collect();
    let Inertia {
        positive,
        negative,
        zero,
    } = linalg::inertia(&q);
    if positive != 1 || negative != rho - 1 || zero != 0 {
        return Err(Error::Signature {
            positive,
            negative,
            zero,
            expected_negative: rho - 1,
        });
    }

    let curve_divisors: Vec<DivisorClass<F>> = data
        .curves
        .iter()
        .map(|c| DivisorClass::from_ints(&c.class))
        .collect();
    let curve_duals: Vec<Vec<F>> = curve_divisors
        .iter()
        .map(|e| linalg::mat_vec(&q, e.coeffs()))
        .collect();

    let a = data.ample_class.coeffs();
    let a2 = linalg::dot(a, &linalg::mat_vec(&q, a));
    if !a2.is_positive() {
        return Err(Error::AmpleClass(format!("A.A = {a2}")));
    }
    for (c, dual) in data.curves.iter().zip(&curve_duals) {
        let ae = linalg::dot(a, dual);
        if !ae.is_positive() {
            return Err(Error::AmpleClass(format!("A.{} = {ae}", c.label)));
        }
    }

    let geom = SurfaceGeometry {
        data,
        q,
        curve_divisors,
        curve_duals,
        generators,
    };
    for (idx, c) in geom.data.curves.iter().enumerate() {
        if !geom.is_pseudoeffective(&geom.curve_divisors[idx])? {
            return Err(Error::Generators(format!(
                "`{}` lies outside the cone of the generators",
                c.label
            )));
        }
    }
    Ok(geom)
}

impl<F: Field> SurfaceGeometry<F> {
    pub fn new(data: GeometryData<F>) -> Result<Self> {
        validate_geometry(data)
    }

    pub fn data(&self) -> &GeometryData<F> {
        &self.data
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.data.curves
    }

    pub fn num_curves(&self) -> usize {
        self.data.curves.len()
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.data.curves[idx].label
    }

    pub fn curve_index(&self, label: &str) -> Result<usize> {
        self.data
            .curves
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn curve_class(&self, idx: usize) -> &DivisorClass<F> {
        &self.curve_divisors[idx]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn ample(&self) -> &DivisorClass<F> {
        &self.data.ample_class
    }

    pub fn intersection_form(&self) -> &[Vec<F>] {
        &self.q
    }

    pub fn check_rank(&self, d: &DivisorClass<F>) -> Result<()> {
        if d.rank() != self.rank() {
            return Err(Error::Dimension {
                expected: self.rank(),
                found: d.rank(),
            });
        }
        Ok(())
    }

    /// `D1 . D2`.
    pub fn intersect(&self, d1: &DivisorClass<F>, d2: &DivisorClass<F>) -> Result<F> {
        self.check_rank(d1)?;
        self.check_rank(d2)?;
        Ok(self.pair(d1, d2))
    }

    pub(crate) fn pair(&self, d1: &DivisorClass<F>, d2: &DivisorClass<F>) -> F {
        linalg::dot(d1.coeffs(), &linalg::mat_vec(&self.q, d2.coeffs()))
    }

    /// `D . E_idx` for a catalog curve.
    pub fn pair_curve(&self, d: &DivisorClass<F>, idx: usize) -> F {
        linalg::dot(d.coeffs(), &self.curve_duals[idx])
    }

    pub fn is_pseudoeffective(&self, d: &DivisorClass<F>) -> Result<bool> {
        self.check_rank(d)?;
        let cols: Vec<&DivisorClass<F>> = self
            .generators
            .iter()
            .map(|&g| &self.curve_divisors[g])
            .collect();
        let a: Vec<Vec<F>> = (0..self.rank())
            .map(|r| cols.iter().map(|g| g.coeffs()[r].clone()).collect())
            .collect();
        Ok(LinearProgram::feasibility(a, d.coeffs().to_vec())
            .solve()
            .is_feasible())
    }

    /// Big iff pseudoeffective with positive volume `P.P`.
    pub fn is_big(&self, d: &DivisorClass<F>) -> Result<bool> {
        if !self.is_pseudoeffective(d)? {
            return Ok(false);
        }
        let zd = zariski::zariski_decompose(self, d)?;
        Ok(self.pair(&zd.positive, &zd.positive).is_positive())
    }

    pub fn is_nef(&self, d: &DivisorClass<F>) -> Result<bool> {
        self.check_rank(d)?;
        Ok((0..self.num_curves()).all(|i| !self.pair_curve(d, i).is_negative()))
    }

    /// Nakai-type test against the catalog: `D.E > 0` for every curve and `D.D > 0`.
    pub fn is_ample(&self, d: &DivisorClass<F>) -> Result<bool> {
        self.check_rank(d)?;
        Ok(
            (0..self.num_curves()).all(|i| self.pair_curve(d, i).is_positive())
                && self.pair(d, d).is_positive(),
        )
    }

    /// `max { t >= 0 : D - t C pseudoeffective }`.
    pub fn pseff_threshold(&self, d: &DivisorClass<F>, c: &DivisorClass<F>) -> Result<F> {
        self.check_rank(d)?;
        self.check_rank(c)?;
        // variables: generator weights, then t;  sum w_g G + t C = D
        let ng = self.generators.len();
        let a: Vec<Vec<F>> = (0..self.rank())
            .map(|r| {
                let mut row: Vec<F> = self
                    .generators
                    .iter()
                    .map(|&g| self.curve_divisors[g].coeffs()[r].clone())
                    .collect();
                row.push(c.coeffs()[r].clone());
                row
            })
            .collect();
        let mut obj = vec![F::zero(); ng];
        obj.push(F::one());
        match LinearProgram::new(a, d.coeffs().to_vec(), obj).solve() {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(Error::NotPseudoeffective),
            LpOutcome::Unbounded => Err(Error::UnboundedThreshold),
        }
    }
}
