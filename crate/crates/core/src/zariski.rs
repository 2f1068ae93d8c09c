//! Zariski decompositions on the surface model, asymptotic valuations along
//! catalog curves, and the chamber walk of a one-parameter family `D - tC`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg;
use crate::nslattice::{DivisorClass, SurfaceGeometry};
use crate::scalar::Field;

/// `D = P + N` with `N = sum a_i E_i` over catalog curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition<F> {
    pub positive: DivisorClass<F>,
    /// `(catalog index, coefficient)`, increasing index, coefficients positive.
    pub negative: Vec<(usize, F)>,
}

impl<F: Field> ZariskiDecomposition<F> {
    pub fn coefficient(&self, idx: usize) -> F {
        self.negative
            .iter()
            .find(|(i, _)| *i == idx)
            .map_or_else(F::zero, |(_, a)| a.clone())
    }

    pub fn support(&self) -> Vec<usize> {
        self.negative.iter().map(|(i, _)| *i).collect()
    }

    pub fn negative_class(&self, geom: &SurfaceGeometry<F>) -> DivisorClass<F> {
        self.negative
            .iter()
            .fold(DivisorClass::zero(geom.rank()), |acc, (i, a)| {
                acc.add_scaled(a, geom.curve_class(*i))
            })
    }

    pub fn scale(&self, c: &F) -> Self {
        ZariskiDecomposition {
            positive: self.positive.scale(c),
            negative: self
                .negative
                .iter()
                .map(|(i, a)| (*i, a.clone() * c.clone()))
                .collect(),
        }
    }
}

/// Solves the support system `sum_j a_j (E_i.E_j) = rhs_i`.
fn solve_support<F: Field>(
    geom: &SurfaceGeometry<F>,
    support: &[usize],
    rhs: &[F],
) -> Result<Vec<F>> {
    let gram = gram_matrix(geom, support);
    linalg::solve(&gram, rhs).ok_or_else(|| {
        Error::Support(format!(
            "singular Gram matrix on {{{}}}",
            labels(geom, support).join(", ")
        ))
    })
}

pub fn gram_matrix<F: Field>(geom: &SurfaceGeometry<F>, support: &[usize]) -> Vec<Vec<F>> {
    support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| geom.pair_curve(geom.curve_class(i), j))
                .collect()
        })
        .collect()
}

fn labels<F: Field>(geom: &SurfaceGeometry<F>, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| geom.label(i).to_string()).collect()
}

/// Computes the Zariski decomposition of a pseudoeffective class.
///
/// The support grows monotonically: each round adds every catalog curve that
/// the current positive part meets negatively, then re-solves the Gram system.
pub fn zariski_decompose<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
) -> Result<ZariskiDecomposition<F>> {
    if !geom.is_pseudoeffective(d)? {
        return Err(Error::NotPseudoeffective);
    }
    decompose_unchecked(geom, d)
}

/// Decomposition without the cone-membership LP; callers guarantee `d` is pseudoeffective.
pub(crate) fn decompose_unchecked<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
) -> Result<ZariskiDecomposition<F>> {
    let mut support: BTreeSet<usize> = BTreeSet::new();
    let mut coeffs: Vec<F> = Vec::new();
    loop {
        let sup: Vec<usize> = support.iter().copied().collect();
        let mut p = d.clone();
        for (i, a) in sup.iter().zip(&coeffs) {
            p = p.add_scaled(&-a.clone(), geom.curve_class(*i));
        }
        let fresh: Vec<usize> = (0..geom.num_curves())
            .filter(|i| !support.contains(i) && geom.pair_curve(&p, *i).is_negative())
            .collect();
        if fresh.is_empty() {
            let gram = gram_matrix(geom, &sup);
            if !sup.is_empty() && !linalg::is_negative_definite(&gram) {
                return Err(Error::Support(format!(
                    "Gram matrix on {{{}}} is not negative definite",
                    labels(geom, &sup).join(", ")
                )));
            }
            let mut negative = Vec::new();
            for (i, a) in sup.into_iter().zip(coeffs) {
                if a.is_negative() {
                    return Err(Error::Support(format!(
                        "negative coefficient {a} on {}",
                        geom.label(i)
                    )));
                }
                if a.is_positive() {
                    negative.push((i, a));
                }
            }
            return Ok(ZariskiDecomposition {
                positive: p,
                negative,
            });
        }
        support.extend(fresh);
        let sup: Vec<usize> = support.iter().copied().collect();
        let rhs: Vec<F> = sup.iter().map(|&i| geom.pair_curve(d, i)).collect();
        coeffs = solve_support(geom, &sup, &rhs)?;
    }
}

/// `ord_E(||D||)`: the coefficient of `E` in the negative part.
pub fn asymptotic_valuation<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    curve: &str,
) -> Result<F> {
    let idx = geom.curve_index(curve)?;
    Ok(zariski_decompose(geom, d)?.coefficient(idx))
}

/// Movable iff the negative part vanishes.
pub fn is_movable<F: Field>(geom: &SurfaceGeometry<F>, d: &DivisorClass<F>) -> Result<bool> {
    Ok(zariski_decompose(geom, d)?.negative.is_empty())
}

/// `constant + slope * t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine<F> {
    pub constant: F,
    pub slope: F,
}

impl<F: Field> Affine<F> {
    pub fn new(constant: F, slope: F) -> Self {
        Affine { constant, slope }
    }

    pub fn zero() -> Self {
        Affine::new(F::zero(), F::zero())
    }

    pub fn eval(&self, t: &F) -> F {
        self.constant.clone() + self.slope.clone() * t.clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        Affine::new(
            self.constant.clone() + other.constant.clone(),
            self.slope.clone() + other.slope.clone(),
        )
    }

    pub fn scale(&self, s: &F) -> Self {
        Affine::new(
            self.constant.clone() * s.clone(),
            self.slope.clone() * s.clone(),
        )
    }
}

/// A class varying affinely in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineClass<F> {
    pub constant: DivisorClass<F>,
    pub slope: DivisorClass<F>,
}

impl<F: Field> AffineClass<F> {
    pub fn eval(&self, t: &F) -> DivisorClass<F> {
        self.constant.add_scaled(t, &self.slope)
    }

    pub fn pair_curve(&self, geom: &SurfaceGeometry<F>, idx: usize) -> Affine<F> {
        Affine::new(
            geom.pair_curve(&self.constant, idx),
            geom.pair_curve(&self.slope, idx),
        )
    }
}

/// A maximal interval of the family on which the negative support is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberSegment<F> {
    pub t_lo: F,
    pub t_hi: F,
    pub support: Vec<usize>,
    /// Aligned with `support`.
    pub coefficients: Vec<Affine<F>>,
    pub positive: AffineClass<F>,
}

impl<F: Field> ChamberSegment<F> {
    pub fn coefficient(&self, idx: usize) -> Affine<F> {
        self.support
            .iter()
            .position(|&i| i == idx)
            .map_or_else(Affine::zero, |k| self.coefficients[k].clone())
    }

    pub fn contains(&self, t: &F) -> bool {
        &self.t_lo <= t && t <= &self.t_hi
    }

    pub fn decomposition_at(&self, t: &F) -> ZariskiDecomposition<F> {
        ZariskiDecomposition {
            positive: self.positive.eval(t),
            negative: self
                .support
                .iter()
                .zip(&self.coefficients)
                .map(|(&i, a)| (i, a.eval(t)))
                .filter(|(_, a)| a.is_positive())
                .collect(),
        }
    }
}

/// Walks `D - tC` over `[0, mu]`, `mu` the pseudoeffective threshold.
pub fn chamber_walk<F: Field>(
    geom: &SurfaceGeometry<F>,
    d: &DivisorClass<F>,
    c: &DivisorClass<F>,
) -> Result<Vec<ChamberSegment<F>>> {
    let mu = geom.pseff_threshold(d, c)?;
    walk_family(geom, d, &-c, &F::zero(), &mu)
}

/// The chamber through `t*` for the family `base + t * dir`, unclipped.
fn chamber_at<F: Field>(
    geom: &SurfaceGeometry<F>,
    base: &DivisorClass<F>,
    dir: &DivisorClass<F>,
    t_star: &F,
) -> Result<(Option<F>, Option<F>, ChamberSegment<F>)> {
    let at = base.add_scaled(t_star, dir);
    let support = decompose_unchecked(geom, &at)?.support();
    let (coefficients, positive) = if support.is_empty() {
        (
            Vec::new(),
            AffineClass {
                constant: base.clone(),
                slope: dir.clone(),
            },
        )
    } else {
        let rhs0: Vec<F> = support.iter().map(|&i| geom.pair_curve(base, i)).collect();
        let rhs1: Vec<F> = support.iter().map(|&i| geom.pair_curve(dir, i)).collect();
        let a0 = solve_support(geom, &support, &rhs0)?;
        let a1 = solve_support(geom, &support, &rhs1)?;
        let mut p0 = base.clone();
        let mut p1 = dir.clone();
        for (k, &i) in support.iter().enumerate() {
            p0 = p0.add_scaled(&-a0[k].clone(), geom.curve_class(i));
            p1 = p1.add_scaled(&-a1[k].clone(), geom.curve_class(i));
        }
        (
            a0.into_iter()
                .zip(a1)
                .map(|(c, s)| Affine::new(c, s))
                .collect(),
            AffineClass {
                constant: p0,
                slope: p1,
            },
        )
    };

    // Validity region: every coefficient and every pairing P(t).E stays >= 0.
    let mut lo: Option<F> = None;
    let mut hi: Option<F> = None;
    let constraints = coefficients
        .iter()
        .cloned()
        .chain((0..geom.num_curves()).map(|i| positive.pair_curve(geom, i)));
    for f in constraints {
        if f.slope.is_zero() {
            continue;
        }
        let root = -f.constant.clone() / f.slope.clone();
        if f.slope.is_positive() {
            if lo.as_ref().is_none_or(|l| root > *l) {
                lo = Some(root);
            }
        } else if hi.as_ref().is_none_or(|h| root < *h) {
            hi = Some(root);
        }
    }
    let seg = ChamberSegment {
        t_lo: F::zero(),
        t_hi: F::zero(),
        support,
        coefficients,
        positive,
    };
    Ok((lo, hi, seg))
}

/// Covers `[lo, hi]` of the family `base + t * dir` by chambers, found by
/// probing interval midpoints and recursing into uncovered gaps.
pub(crate) fn walk_family<F: Field>(
    geom: &SurfaceGeometry<F>,
    base: &DivisorClass<F>,
    dir: &DivisorClass<F>,
    lo: &F,
    hi: &F,
) -> Result<Vec<ChamberSegment<F>>> {
    let mut out: Vec<ChamberSegment<F>> = Vec::new();
    if lo == hi {
        let (_, _, mut seg) = chamber_at(geom, base, dir, lo)?;
        seg.t_lo = lo.clone();
        seg.t_hi = hi.clone();
        return Ok(vec![seg]);
    }
    let mut pending = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = pending.pop() {
        let mid = (a.clone() + b.clone()) * F::half();
        let (clo, chi, mut seg) = chamber_at(geom, base, dir, &mid)?;
        let s_lo = match clo {
            Some(l) if l > a => l,
            _ => a.clone(),
        };
        let s_hi = match chi {
            Some(h) if h < b => h,
            _ => b.clone(),
        };
        if s_lo > a {
            pending.push((a, s_lo.clone()));
        }
        if s_hi < b {
            pending.push((s_hi.clone(), b));
        }
        if s_lo < s_hi {
            seg.t_lo = s_lo;
            seg.t_hi = s_hi;
            out.push(seg);
        }
    }
    out.sort_by(|x, y| x.t_lo.cmp(&y.t_lo));
    let mut merged: Vec<ChamberSegment<F>> = Vec::with_capacity(out.len());
    for seg in out {
        match merged.last_mut() {
            Some(last) if last.support == seg.support && last.t_hi == seg.t_lo => {
                last.t_hi = seg.t_hi;
            }
            _ => merged.push(seg),
        }
    }
    Ok(merged)
}
