//! Seeded cross-checks of every body-based construction against its
//! intersection-theoretic counterpart.
//!
//! Classes are sampled deterministically from the seed, checked in parallel,
//! and the outcomes are folded back in sample order, so a report depends only
//! on the model, the sample count and the seed.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::ConvexBody;
use crate::error::Result;
use crate::loci::{
    ample_via_bodies, augmented_base_locus, criterion_bminus, criterion_bplus,
    divisorial_zd_via_bodies, movable_via_bodies, nef_via_bodies, restricted_base_locus,
};
use crate::model::SurfaceModel;
use crate::nslattice::{validate_geometry, DivisorClass, SurfaceGeometry};
use crate::okounkov::{
    area, limiting_body, nu_vector, EffectiveCombination, Flag2D, PointOnSurface,
};
use crate::scalar::Field;
use crate::seshadri::{moving_seshadri_bounds, SeshadriBounds};
use crate::zariski::{chamber_walk, is_movable, zariski_decompose, ZariskiDecomposition};

/// Claim identifiers, in report order.
pub const CLAIMS: &[&str] = &[
    "nslattice.bilinear_symmetric",
    "nslattice.cone_chain",
    "nslattice.big_interior",
    "nslattice.pseff_perturbation",
    "nslattice.threshold_shift",
    "zariski.structure",
    "zariski.permutation_uniqueness",
    "zariski.scaling",
    "zariski.chamber_consistency",
    "zariski.volume",
    "okounkov.valuative_membership",
    "okounkov.zariski_additivity",
    "okounkov.superadditivity",
    "okounkov.slice",
    "okounkov.translation",
    "okounkov.homogeneity",
    "convex.subsimplex",
    "convex.orthant_volume",
    "convex.vertex_order_invariance",
    "convex.minkowski",
    "loci.bminus_criterion",
    "loci.bplus_criterion",
    "loci.flag_independence",
    "loci.positivity",
    "loci.monotonicity",
    "loci.divisorial_procedure",
    "seshadri.sandwich",
    "seshadri.homogeneity",
    "seshadri.bplus_zero",
    "seshadri.general_point_stability",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub inputs: String,
    pub oracle: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub checks: usize,
    pub verdict: Verdict,
    /// First failing instance in sample order.
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub geometry: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    /// The finite flag set standing in for all admissible flags: each catalog
    /// curve with every named point on it and one general point.
    pub flags: Vec<String>,
    pub claims: Vec<ClaimReport>,
}

/// A sampled class together with a random effective combination of catalog curves.
#[derive(Debug, Clone)]
pub struct Sample<F> {
    pub class: DivisorClass<F>,
    pub effective: EffectiveCombination<F>,
}

fn rational<F: Field>(rng: &mut ChaCha8Rng, p_lo: i64, p_hi: i64, q_hi: i64) -> F {
    F::ratio(rng.random_range(p_lo..=p_hi), rng.random_range(1..=q_hi))
}

fn interior<F: Field>(geom: &SurfaceGeometry<F>, rng: &mut ChaCha8Rng) -> DivisorClass<F> {
    geom.generator_indices()
        .iter()
        .fold(DivisorClass::zero(geom.rank()), |d, &g| {
            d.add_scaled(&rational(rng, 1, 6, 4), geom.curve_class(g))
        })
}

/// Deterministic sample stream: mostly interior combinations of generators,
/// with multiples of single generators, positive parts, the zero class and
/// classes pushed just outside the pseudoeffective cone mixed in.
pub fn sample_classes<F: Field>(
    geom: &SurfaceGeometry<F>,
    n: usize,
    seed: u64,
) -> Result<Vec<Sample<F>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = geom.generator_indices();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let class = match i % 8 {
            5 => {
                let g = gens[rng.random_range(0..gens.len())];
                geom.curve_class(g).scale(&rational(&mut rng, 1, 5, 3))
            }
            6 if i == 6 => DivisorClass::zero(geom.rank()),
            6 => zariski_decompose(geom, &interior(geom, &mut rng))?.positive,
            7 => {
                let d = interior(geom, &mut rng);
                let mu = geom.pseff_threshold(&d, geom.ample())?;
                let r: F = rational(&mut rng, 1, 8, 4);
                d.add_scaled(&-(mu + r), geom.ample())
            }
            _ => interior(geom, &mut rng),
        };
        let coeffs: BTreeMap<String, F> = geom
            .curves()
            .iter()
            .map(|c| (c.label.clone(), rational(&mut rng, 0, 4, 3)))
            .collect();
        out.push(Sample {
            class,
            effective: EffectiveCombination::new(coeffs)?,
        });
    }
    Ok(out)
}

fn fmt_body<F: Field>(b: &ConvexBody<F>) -> String {
    if b.is_empty() {
        return "empty".into();
    }
    let pts: Vec<String> = b
        .vertices()
        .iter()
        .map(|v| {
            let cs: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("({})", cs.join(", "))
        })
        .collect();
    format!("[{}]", pts.join(", "))
}

fn fmt_zd<F: Field>(geom: &SurfaceGeometry<F>, zd: &ZariskiDecomposition<F>) -> String {
    let n: Vec<String> = zd
        .negative
        .iter()
        .map(|(i, a)| format!("{a}*{}", geom.label(*i)))
        .collect();
    format!("P={} N=[{}]", zd.positive, n.join(", "))
}

/// Parameters probed along each chamber walk, spread evenly over `[0, mu]`.
const CHAMBER_PROBES: i64 = 50;

/// Outcome of one check: `None` passes.
type Check = Result<Option<Counterexample>>;

fn verdict(ok: bool, inputs: impl FnOnce() -> (String, String, String)) -> Check {
    Ok(if ok {
        None
    } else {
        let (inputs, oracle, body) = inputs();
        Some(Counterexample {
            inputs,
            oracle,
            body,
        })
    })
}

struct Context<'a, F: Field> {
    model: &'a SurfaceModel<F>,
    reversed: SurfaceGeometry<F>,
    flags: Vec<Flag2D>,
}

/// Per-sample memo of limiting bodies, keyed by class and flag.
struct Bodies<'a, F: Field> {
    geom: &'a SurfaceGeometry<F>,
    memo: RefCell<HashMap<String, ConvexBody<F>>>,
}

impl<F: Field> Bodies<'_, F> {
    fn get(&self, d: &DivisorClass<F>, flag: &Flag2D) -> Result<ConvexBody<F>> {
        let key = format!("{d}|{flag}");
        if let Some(b) = self.memo.borrow().get(&key) {
            return Ok(b.clone());
        }
        let b = limiting_body(self.geom, d, flag)?;
        self.memo.borrow_mut().insert(key, b.clone());
        Ok(b)
    }
}

struct Run<'a, F: Field> {
    ctx: &'a Context<'a, F>,
    geom: &'a SurfaceGeometry<F>,
    bodies: Bodies<'a, F>,
    d: DivisorClass<F>,
    next: DivisorClass<F>,
    effective: EffectiveCombination<F>,
    pseff: bool,
    zd: Option<ZariskiDecomposition<F>>,
}

impl<F: Field> Run<'_, F> {
    fn all_flags(&self, mut f: impl FnMut(&Flag2D) -> Check) -> Check {
        for flag in &self.ctx.flags {
            if let Some(ce) = f(flag)? {
                return Ok(Some(ce));
            }
        }
        Ok(None)
    }

    fn input(&self, flag: &Flag2D) -> String {
        format!("D={} flag={flag}", self.d)
    }

    fn bilinear_symmetric(&self) -> Check {
        let g = self.geom;
        let a = g.ample();
        let lhs = g.intersect(&self.d.add_scaled(&F::from_int(2), &self.next), a)?;
        let rhs = g.intersect(&self.d, a)? + F::from_int(2) * g.intersect(&self.next, a)?;
        let ok =
            g.intersect(&self.d, &self.next)? == g.intersect(&self.next, &self.d)? && lhs == rhs;
        verdict(ok, || {
            (
                format!("D={} D'={}", self.d, self.next),
                format!("{lhs} vs {rhs}"),
                String::new(),
            )
        })
    }

    fn cone_chain(&self) -> Check {
        let g = self.geom;
        let (ample, nef, big) = (g.is_ample(&self.d)?, g.is_nef(&self.d)?, g.is_big(&self.d)?);
        let ok = (!ample || nef) && (!nef || self.pseff) && (!big || self.pseff);
        verdict(ok, || {
            (
                format!("D={}", self.d),
                format!("ample={ample} nef={nef} big={big} pseff={}", self.pseff),
                String::new(),
            )
        })
    }

    fn big_interior(&self) -> Check {
        let g = self.geom;
        let big = g.is_big(&self.d)?;
        let inside = self.pseff && g.pseff_threshold(&self.d, g.ample())?.is_positive();
        let mut along_generators = true;
        if big {
            for &i in g.generator_indices() {
                along_generators &= g.pseff_threshold(&self.d, g.curve_class(i))?.is_positive();
            }
        }
        verdict(big == inside && along_generators, || {
            (
                format!("D={}", self.d),
                format!("big={big} interior={inside}"),
                String::new(),
            )
        })
    }

    fn pseff_perturbation(&self) -> Check {
        let g = self.geom;
        for k in [1, 6, 12] {
            let eps: F = crate::scalar::inverse_power(2, k);
            let big = g.is_big(&self.d.add_scaled(&eps, g.ample()))?;
            if self.pseff && !big {
                return verdict(false, || {
                    (
                        format!("D={} eps={eps}", self.d),
                        "D+eps*A not big".into(),
                        String::new(),
                    )
                });
            }
        }
        Ok(None)
    }

    fn threshold_shift(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let g = self.geom;
        let s = F::ratio(1, 3);
        for i in 0..g.num_curves() {
            let c = g.curve_class(i);
            let base = g.pseff_threshold(&self.d, c)?;
            let shifted = g.pseff_threshold(&self.d.add_scaled(&s, c), c)?;
            if shifted != base.clone() + s.clone() {
                return verdict(false, || {
                    (
                        format!("D={} C={}", self.d, g.label(i)),
                        format!("{shifted} != {base} + {s}"),
                        String::new(),
                    )
                });
            }
        }
        Ok(None)
    }

    fn zariski_structure(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        let support = zd.support();
        let recombined = &zd.positive + &zd.negative_class(g);
        let gram = crate::zariski::gram_matrix(g, &support);
        let ok = recombined == self.d
            && g.is_nef(&zd.positive)?
            && support
                .iter()
                .all(|&i| g.pair_curve(&zd.positive, i).is_zero())
            && zd.negative.iter().all(|(_, a)| a.is_positive())
            && (support.is_empty() || crate::linalg::is_negative_definite(&gram))
            && (support.is_empty() == g.is_nef(&self.d)?);
        verdict(ok, || {
            (format!("D={}", self.d), fmt_zd(g, zd), String::new())
        })
    }

    fn permutation_uniqueness(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        let rev = &self.ctx.reversed;
        let other = zariski_decompose(rev, &self.d)?;
        let named = |geom: &SurfaceGeometry<F>, z: &ZariskiDecomposition<F>| {
            z.negative
                .iter()
                .map(|(i, a)| (geom.label(*i).to_string(), a.clone()))
                .collect::<BTreeMap<_, _>>()
        };
        let ok = other.positive == zd.positive && named(g, zd) == named(rev, &other);
        verdict(ok, || {
            (format!("D={}", self.d), fmt_zd(g, zd), fmt_zd(rev, &other))
        })
    }

    fn scaling(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        for c in [F::ratio(3, 2), F::ratio(1, 3)] {
            let scaled = zariski_decompose(self.geom, &self.d.scale(&c))?;
            if scaled != zd.scale(&c) {
                return verdict(false, || {
                    (
                        format!("D={} c={c}", self.d),
                        fmt_zd(self.geom, zd),
                        fmt_zd(self.geom, &scaled),
                    )
                });
            }
        }
        Ok(None)
    }

    fn chamber_consistency(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let g = self.geom;
        for i in 0..g.num_curves() {
            let c = g.curve_class(i);
            let mu = g.pseff_threshold(&self.d, c)?;
            let walk = chamber_walk(g, &self.d, c)?;
            let mut cursor = F::zero();
            for seg in &walk {
                if seg.t_lo != cursor {
                    return verdict(false, || {
                        (
                            format!("D={} C={}", self.d, g.label(i)),
                            format!("gap at {cursor}"),
                            String::new(),
                        )
                    });
                }
                cursor = seg.t_hi.clone();
            }
            if cursor != mu {
                return verdict(false, || {
                    (
                        format!("D={} C={}", self.d, g.label(i)),
                        format!("ends at {cursor}, mu={mu}"),
                        String::new(),
                    )
                });
            }
            for j in 0..CHAMBER_PROBES {
                let t = mu.clone() * F::ratio(j, CHAMBER_PROBES - 1);
                let fresh = zariski_decompose(g, &self.d.add_scaled(&-t.clone(), c))?;
                for seg in walk.iter().filter(|s| s.contains(&t)) {
                    let walked = seg.decomposition_at(&t);
                    if fresh != walked {
                        return verdict(false, || {
                            (
                                format!("D={} C={} t={t}", self.d, g.label(i)),
                                fmt_zd(g, &fresh),
                                fmt_zd(g, &walked),
                            )
                        });
                    }
                }
            }
        }
        Ok(None)
    }

    fn volume(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        let p2 = g.intersect(&zd.positive, &zd.positive)?;
        if g.is_big(&self.d)? != p2.is_positive() {
            return verdict(false, || {
                (format!("D={}", self.d), format!("P^2={p2}"), String::new())
            });
        }
        self.all_flags(|flag| {
            let body = self.bodies.get(&self.d, flag)?;
            let twice = F::from_int(2) * area(&body);
            verdict(twice == p2 && body.volume() == area(&body), || {
                (self.input(flag), format!("P^2={p2}"), fmt_body(&body))
            })
        })
    }

    fn valuative_membership(&self) -> Check {
        let class = self.effective.class(self.geom)?;
        self.all_flags(|flag| {
            let (a, b) = nu_vector(self.geom, &self.effective, flag)?;
            let body = self.bodies.get(&class, flag)?;
            verdict(body.contains_point(&[a.clone(), b.clone()])?, || {
                (
                    format!("E={class} flag={flag}"),
                    format!("nu=({a}, {b})"),
                    fmt_body(&body),
                )
            })
        })
    }

    fn zariski_additivity(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        let n = zd.negative_class(g);
        let bminus = restricted_base_locus(g, &self.d)?;
        self.all_flags(|flag| {
            let body = self.bodies.get(&self.d, flag)?;
            let pb = self.bodies.get(&zd.positive, flag)?;
            let sum = pb.minkowski_sum(&self.bodies.get(&n, flag)?)?;
            let off_support = !bminus.contains_point(&flag.point);
            let ok = sum == body && (!off_support || pb == body);
            verdict(ok, || (self.input(flag), fmt_body(&sum), fmt_body(&body)))
        })
    }

    fn superadditivity(&self) -> Check {
        if !self.pseff || !self.geom.is_pseudoeffective(&self.next)? {
            return Ok(None);
        }
        let total = &self.d + &self.next;
        self.all_flags(|flag| {
            let sum = self
                .bodies
                .get(&self.d, flag)?
                .minkowski_sum(&self.bodies.get(&self.next, flag)?)?;
            let whole = self.bodies.get(&total, flag)?;
            verdict(whole.contains_body(&sum)?, || {
                (
                    format!("D={} D'={} flag={flag}", self.d, self.next),
                    fmt_body(&sum),
                    fmt_body(&whole),
                )
            })
        })
    }

    fn slice(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        self.all_flags(|flag| {
            let y1 = g.curve_index(&flag.curve)?;
            let body = self.bodies.get(&self.d, flag)?;
            let nonempty = !body.slice_first_zero(1).is_empty();
            verdict(nonempty == zd.coefficient(y1).is_zero(), || {
                (
                    self.input(flag),
                    format!("ord_Y1={}", zd.coefficient(y1)),
                    fmt_body(&body),
                )
            })
        })
    }

    fn translation(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        self.all_flags(|flag| {
            let y1 = g.curve_index(&flag.curve)?;
            let a = zd.coefficient(y1);
            if a.is_zero() {
                return Ok(None);
            }
            let body = self.bodies.get(&self.d, flag)?;
            let reduced = self
                .bodies
                .get(&self.d.add_scaled(&-a.clone(), g.curve_class(y1)), flag)?;
            let shifted = body.translate(&[-a.clone(), F::zero()])?;
            verdict(reduced == shifted, || {
                (self.input(flag), fmt_body(&shifted), fmt_body(&reduced))
            })
        })
    }

    fn homogeneity(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let c = F::ratio(2, 3);
        let scaled = self.d.scale(&c);
        self.all_flags(|flag| {
            let expect = self.bodies.get(&self.d, flag)?.scale(&c);
            let got = self.bodies.get(&scaled, flag)?;
            verdict(expect == got, || {
                (self.input(flag), fmt_body(&expect), fmt_body(&got))
            })
        })
    }

    fn subsimplex(&self) -> Check {
        self.all_flags(|flag| {
            let body = self.bodies.get(&self.d, flag)?;
            let s = body.max_subsimplex();
            let expect: Vec<F> = if body.contains_origin() {
                (0..2)
                    .map(|ax| body.axis_extent(ax).unwrap_or_else(F::zero))
                    .collect()
            } else {
                vec![F::zero(); 2]
            };
            verdict(s.lengths == expect, || {
                (self.input(flag), format!("{expect:?}"), fmt_body(&body))
            })
        })
    }

    fn orthant_volume(&self) -> Check {
        self.all_flags(|flag| {
            let body = self.bodies.get(&self.d, flag)?;
            verdict(
                !body.has_orthant_neighborhood() || body.volume().is_positive(),
                || {
                    (
                        self.input(flag),
                        format!("volume={}", body.volume()),
                        fmt_body(&body),
                    )
                },
            )
        })
    }

    fn vertex_order_invariance(&self) -> Check {
        self.all_flags(|flag| {
            let body = self.bodies.get(&self.d, flag)?;
            if body.is_empty() {
                return Ok(None);
            }
            let mut pts: Vec<Vec<F>> = body.vertices().iter().rev().cloned().collect();
            let k = F::from_int(pts.len() as i64);
            let centroid: Vec<F> = (0..2)
                .map(|ax| pts.iter().fold(F::zero(), |s, p| s + p[ax].clone()) / k.clone())
                .collect();
            pts.insert(pts.len() / 2, centroid);
            let rebuilt = ConvexBody::from_points(2, pts)?;
            let ok = rebuilt == body
                && rebuilt.contains_origin() == body.contains_origin()
                && rebuilt.max_subsimplex() == body.max_subsimplex();
            verdict(ok, || {
                (self.input(flag), fmt_body(&body), fmt_body(&rebuilt))
            })
        })
    }

    fn minkowski(&self) -> Check {
        self.all_flags(|flag| {
            let a = self.bodies.get(&self.d, flag)?;
            let b = self.bodies.get(&self.next, flag)?;
            let ab = a.minkowski_sum(&b)?;
            let ba = b.minkowski_sum(&a)?;
            let slices = a
                .slice_first_zero(1)
                .minkowski_sum(&b.slice_first_zero(1))?;
            let c = self.bodies.get(self.geom.ample(), flag)?;
            let associative = ab.minkowski_sum(&c)? == a.minkowski_sum(&b.minkowski_sum(&c)?)?;
            let ok = ab == ba && associative && ab.slice_first_zero(1).contains_body(&slices)?;
            verdict(ok, || {
                (
                    format!("D={} D'={} flag={flag}", self.d, self.next),
                    fmt_body(&ab),
                    fmt_body(&ba),
                )
            })
        })
    }

    fn bminus_criterion(&self) -> Check {
        let locus = restricted_base_locus(self.geom, &self.d)?;
        self.all_flags(|flag| {
            let crit = criterion_bminus(self.geom, &self.d, flag)?;
            verdict(crit == locus.contains_point(&flag.point), || {
                (
                    self.input(flag),
                    format!("B-={locus}"),
                    fmt_body(
                        &self
                            .bodies
                            .get(&self.d, flag)
                            .unwrap_or_else(|_| ConvexBody::empty(2)),
                    ),
                )
            })
        })
    }

    fn bplus_criterion(&self) -> Check {
        let locus = augmented_base_locus(self.geom, &self.d)?;
        self.all_flags(|flag| {
            let crit = criterion_bplus(self.geom, &self.d, flag)?;
            verdict(crit == locus.contains_point(&flag.point), || {
                (
                    self.input(flag),
                    format!("B+={locus}"),
                    fmt_body(
                        &self
                            .bodies
                            .get(&self.d, flag)
                            .unwrap_or_else(|_| ConvexBody::empty(2)),
                    ),
                )
            })
        })
    }

    fn flag_independence(&self) -> Check {
        for x in self.ctx.model.centers() {
            let flags = self.ctx.model.flags_at(&x);
            let mut seen: Option<(bool, bool)> = None;
            for flag in &flags {
                let body = self.bodies.get(&self.d, flag)?;
                let here = (!body.contains_origin(), !body.has_orthant_neighborhood());
                if seen.is_some_and(|s| s != here) {
                    return verdict(false, || {
                        (
                            format!("D={} x={}", self.d, x.label),
                            format!("{seen:?} vs {here:?}"),
                            fmt_body(&body),
                        )
                    });
                }
                seen = Some(here);
            }
        }
        Ok(None)
    }

    fn positivity(&self) -> Check {
        let (g, m) = (self.geom, self.ctx.model);
        let bminus = restricted_base_locus(g, &self.d)?;
        let bplus = augmented_base_locus(g, &self.d)?;
        let nef = (
            nef_via_bodies(m, &self.d)?,
            g.is_nef(&self.d)?,
            bminus.is_empty(),
        );
        let ample = (
            ample_via_bodies(m, &self.d)?,
            g.is_ample(&self.d)?,
            bplus.is_empty(),
        );
        let movable_oracle = self.pseff && is_movable(g, &self.d)?;
        let no_divisorial = bminus.curves().is_some_and(|c| c.is_empty());
        let movable = (
            movable_via_bodies(m, &self.d)?,
            movable_oracle,
            no_divisorial,
        );
        let same = |t: (bool, bool, bool)| t.0 == t.1 && t.1 == t.2;
        verdict(same(nef) && same(ample) && same(movable), || {
            (
                format!("D={}", self.d),
                format!("nef={nef:?} ample={ample:?} movable={movable:?}"),
                String::new(),
            )
        })
    }

    fn monotonicity(&self) -> Check {
        let bminus = restricted_base_locus(self.geom, &self.d)?;
        let bplus = augmented_base_locus(self.geom, &self.d)?;
        verdict(bminus.is_subset(&bplus), || {
            (
                format!("D={}", self.d),
                format!("B-={bminus} B+={bplus}"),
                String::new(),
            )
        })
    }

    fn divisorial_procedure(&self) -> Check {
        let Some(zd) = &self.zd else { return Ok(None) };
        let g = self.geom;
        let run = divisorial_zd_via_bodies(g, &self.d)?;
        if run.decomposition != *zd {
            return verdict(false, || {
                (
                    format!("D={}", self.d),
                    fmt_zd(g, zd),
                    fmt_zd(g, &run.decomposition),
                )
            });
        }
        for step in &run.steps {
            let shifted = step
                .body
                .translate(&[-step.coefficient.clone(), F::zero()])?;
            if shifted != step.reduced_body {
                return verdict(false, || {
                    (
                        format!("D={} curve={}", self.d, g.label(step.curve)),
                        fmt_body(&shifted),
                        fmt_body(&step.reduced_body),
                    )
                });
            }
        }
        Ok(None)
    }

    fn bounds_at(&self, d: &DivisorClass<F>) -> Result<Vec<(String, SeshadriBounds<F>)>> {
        let mut out = Vec::new();
        for x in self.ctx.model.centers() {
            if self.ctx.model.flags_at(&x).is_empty() {
                continue;
            }
            out.push((x.label.clone(), moving_seshadri_bounds(self.geom, d, &x)?));
        }
        Ok(out)
    }

    fn sandwich(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        for (x, b) in self.bounds_at(&self.d)? {
            let ok = b.lower <= b.upper
                && b.oracle
                    .as_ref()
                    .is_none_or(|o| b.lower <= *o && *o <= b.upper);
            if !ok {
                return verdict(false, || {
                    (
                        format!("D={} x={x}", self.d),
                        format!("{:?}", b.oracle),
                        format!("[{}, {}]", b.lower, b.upper),
                    )
                });
            }
        }
        Ok(None)
    }

    fn seshadri_homogeneity(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let c = F::from_int(2);
        let base = self.bounds_at(&self.d)?;
        let scaled = self.bounds_at(&self.d.scale(&c))?;
        for ((x, b), (_, s)) in base.iter().zip(&scaled) {
            if b.scale(&c) != *s {
                return verdict(false, || {
                    (
                        format!("D={} x={x}", self.d),
                        format!("{:?}", b.scale(&c)),
                        format!("{s:?}"),
                    )
                });
            }
        }
        Ok(None)
    }

    fn bplus_zero(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let bplus = augmented_base_locus(self.geom, &self.d)?;
        for x in self.ctx.model.centers() {
            if self.ctx.model.flags_at(&x).is_empty() {
                continue;
            }
            let b = moving_seshadri_bounds(self.geom, &self.d, &x)?;
            if bplus.contains_point(&x) != b.lower.is_zero() {
                return verdict(false, || {
                    (
                        format!("D={} x={}", self.d, x.label),
                        format!("B+={bplus}"),
                        format!("lower={}", b.lower),
                    )
                });
            }
        }
        Ok(None)
    }

    /// Naming every synthesized general point leaves the bounds at the
    /// original named points unchanged.
    fn general_point_stability(&self) -> Check {
        if !self.pseff {
            return Ok(None);
        }
        let model = self.ctx.model;
        let mut points = model.points.clone();
        points.extend(self.geom.curves().iter().map(|c| {
            let mut p = PointOnSurface::general_on(&c.label);
            p.label = format!("named-{}", c.label);
            p
        }));
        let wider = SurfaceModel::new(model.geometry.clone(), points)?;
        for x in &model.points {
            if model.flags_at(x).is_empty() {
                continue;
            }
            let here = moving_seshadri_bounds(self.geom, &self.d, x)?;
            let there = moving_seshadri_bounds(&wider.geometry, &self.d, wider.point(&x.label)?)?;
            if here != there || model.flags_at(x) != wider.flags_at(x) {
                return verdict(false, || {
                    (
                        format!("D={} x={}", self.d, x.label),
                        format!("{here:?}"),
                        format!("{there:?}"),
                    )
                });
            }
        }
        Ok(None)
    }

    fn check(&self, claim: &str) -> Check {
        match claim {
            "nslattice.bilinear_symmetric" => self.bilinear_symmetric(),
            "nslattice.cone_chain" => self.cone_chain(),
            "nslattice.big_interior" => self.big_interior(),
            "nslattice.pseff_perturbation" => self.pseff_perturbation(),
            "nslattice.threshold_shift" => self.threshold_shift(),
            "zariski.structure" => self.zariski_structure(),
            "zariski.permutation_uniqueness" => self.permutation_uniqueness(),
            "zariski.scaling" => self.scaling(),
            "zariski.chamber_consistency" => self.chamber_consistency(),
            "zariski.volume" => self.volume(),
            "okounkov.valuative_membership" => self.valuative_membership(),
            "okounkov.zariski_additivity" => self.zariski_additivity(),
            "okounkov.superadditivity" => self.superadditivity(),
            "okounkov.slice" => self.slice(),
            "okounkov.translation" => self.translation(),
            "okounkov.homogeneity" => self.homogeneity(),
            "convex.subsimplex" => self.subsimplex(),
            "convex.orthant_volume" => self.orthant_volume(),
            "convex.vertex_order_invariance" => self.vertex_order_invariance(),
            "convex.minkowski" => self.minkowski(),
            "loci.bminus_criterion" => self.bminus_criterion(),
            "loci.bplus_criterion" => self.bplus_criterion(),
            "loci.flag_independence" => self.flag_independence(),
            "loci.positivity" => self.positivity(),
            "loci.monotonicity" => self.monotonicity(),
            "loci.divisorial_procedure" => self.divisorial_procedure(),
            "seshadri.sandwich" => self.sandwich(),
            "seshadri.homogeneity" => self.seshadri_homogeneity(),
            "seshadri.bplus_zero" => self.bplus_zero(),
            "seshadri.general_point_stability" => self.general_point_stability(),
            other => unreachable!("unknown claim {other}"),
        }
    }
}

/// The geometry with its curve catalog listed in reverse.
fn reversed_geometry<F: Field>(geom: &SurfaceGeometry<F>) -> Result<SurfaceGeometry<F>> {
    let mut data = geom.data().clone();
    data.curves.reverse();
    data.effective_generators.reverse();
    validate_geometry(data)
}

fn check_sample<F: Field>(
    ctx: &Context<'_, F>,
    sample: &Sample<F>,
    next: &DivisorClass<F>,
) -> Vec<Option<Counterexample>> {
    let geom = &ctx.model.geometry;
    let outcome = |claim: &str, res: Check| {
        res.unwrap_or_else(|e| {
            Some(Counterexample {
                inputs: format!("D={} claim={claim}", sample.class),
                oracle: format!("error: {e}"),
                body: String::new(),
            })
        })
    };
    let pseff = match geom.is_pseudoeffective(&sample.class) {
        Ok(p) => p,
        Err(e) => return CLAIMS.iter().map(|c| outcome(c, Err(e.clone()))).collect(),
    };
    let zd = if pseff {
        zariski_decompose(geom, &sample.class).ok()
    } else {
        None
    };
    let run = Run {
        ctx,
        geom,
        bodies: Bodies {
            geom,
            memo: RefCell::new(HashMap::new()),
        },
        d: sample.class.clone(),
        next: next.clone(),
        effective: sample.effective.clone(),
        pseff,
        zd,
    };
    CLAIMS.iter().map(|c| outcome(c, run.check(c))).collect()
}

/// Runs every claim on `samples` seeded classes.
pub fn verify<F: Field>(model: &SurfaceModel<F>, samples: usize, seed: u64) -> Result<Report> {
    let geom = &model.geometry;
    let drawn = sample_classes(geom, samples, seed)?;
    let ctx = Context {
        model,
        reversed: reversed_geometry(geom)?,
        flags: model.enumerate_flags(),
    };
    let outcomes: Vec<Vec<Option<Counterexample>>> = drawn
        .par_iter()
        .enumerate()
        .map(|(i, s)| check_sample(&ctx, s, &drawn[(i + 1) % drawn.len()].class))
        .collect();
    let claims: Vec<ClaimReport> = CLAIMS
        .iter()
        .enumerate()
        .map(|(j, claim)| {
            let counterexample = outcomes.iter().find_map(|o| o[j].clone());
            ClaimReport {
                claim: claim.to_string(),
                checks: outcomes.len(),
                verdict: if counterexample.is_some() {
                    Verdict::Fail
                } else {
                    Verdict::Pass
                },
                counterexample,
            }
        })
        .collect();
    Ok(Report {
        geometry: geom.name().to_string(),
        seed,
        samples,
        passed: claims.iter().all(|c| c.verdict == Verdict::Pass),
        flags: ctx.flags.iter().map(ToString::to_string).collect(),
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{build_fixture, FixtureSpec};
    use num_rational::BigRational;

    #[test]
    fn sampling_is_seeded() {
        let m = build_fixture::<BigRational>(FixtureSpec::Blp2).unwrap();
        let a = sample_classes(&m.geometry, 16, 7).unwrap();
        let b = sample_classes(&m.geometry, 16, 7).unwrap();
        let c = sample_classes(&m.geometry, 16, 8).unwrap();
        let classes =
            |v: &[Sample<BigRational>]| v.iter().map(|s| s.class.clone()).collect::<Vec<_>>();
        assert_eq!(classes(&a), classes(&b));
        assert_ne!(classes(&a), classes(&c));
        assert!(!m.geometry.is_pseudoeffective(&a[7].class).unwrap());
        assert!(a[6].class.is_zero());
    }

    #[test]
    fn small_runs_pass() {
        for spec in [
            FixtureSpec::Blp2,
            FixtureSpec::Fe { e: 2 },
            FixtureSpec::P2 { m: 2 },
        ] {
            let m = build_fixture::<BigRational>(spec).unwrap();
            let report = verify(&m, 16, 1).unwrap();
            let failures: Vec<_> = report
                .claims
                .iter()
                .filter(|c| c.verdict == Verdict::Fail)
                .collect();
            assert!(failures.is_empty(), "{}: {failures:#?}", report.geometry);
            assert_eq!(report, verify(&m, 16, 1).unwrap());
        }
    }
}
