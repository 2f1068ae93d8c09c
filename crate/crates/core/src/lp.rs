//! Exact two-phase simplex for `maximize c·x  s.t.  A x = b, x >= 0`.
//!
//! Dense tableau, Bland's rule throughout, so the method terminates on
//! degenerate problems. Problem sizes here are tiny (tens of variables), which
//! is what makes exact rational pivoting affordable.

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<F> {
    Optimal { value: F, x: Vec<F> },
    Infeasible,
    Unbounded,
}

impl<F: Field> LpOutcome<F> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn value(&self) -> Option<&F> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Equality-form linear program.
#[derive(Debug, Clone)]
pub struct LinearProgram<F> {
    pub a: Vec<Vec<F>>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>, // constraint rows, last entry is the rhs
    basis: Vec<usize>,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, r: usize) -> &F {
        self.rows[r].last().unwrap()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - pv.clone() * f.clone();
                }
            }
        }
        self.basis[r] = col;
    }

    /// Reduced cost of column `j` under objective `c` (maximization).
    fn reduced_cost(&self, c: &[F], j: usize) -> F {
        let mut z = F::zero();
        for (r, &bv) in self.basis.iter().enumerate() {
            if !c[bv].is_zero() && !self.rows[r][j].is_zero() {
                z = z + c[bv].clone() * self.rows[r][j].clone();
            }
        }
        c[j].clone() - z
    }

    /// Runs simplex iterations over the columns in `allowed`. Returns false if unbounded.
    fn optimize(&mut self, c: &[F], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(c, j).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col);
        }
    }

    fn objective(&self, c: &[F]) -> F {
        self.basis
            .iter()
            .enumerate()
            .fold(F::zero(), |acc, (r, &bv)| {
                acc + c[bv].clone() * self.rhs(r).clone()
            })
    }
}

impl<F: Field> LinearProgram<F> {
    pub fn new(a: Vec<Vec<F>>, b: Vec<F>, c: Vec<F>) -> Self {
        LinearProgram { a, b, c }
    }

    /// Feasibility problem (zero objective).
    pub fn feasibility(a: Vec<Vec<F>>, b: Vec<F>) -> Self {
        let n = a.first().map_or(0, Vec::len);
        LinearProgram {
            a,
            b,
            c: vec![F::zero(); n],
        }
    }

    pub fn solve(&self) -> LpOutcome<F> {
        let m = self.a.len();
        let n = self.c.len();
        for row in &self.a {
            assert_eq!(row.len(), n, "constraint width must match objective");
        }
        assert_eq!(self.b.len(), m);

        // Phase one: artificial variables n..n+m on rows normalized to b >= 0.
        let mut rows = Vec::with_capacity(m);
        for (i, row) in self.a.iter().enumerate() {
            let flip = self.b[i].is_negative();
            let mut r: Vec<F> = row
                .iter()
                .map(|v| if flip { -v.clone() } else { v.clone() })
                .collect();
            r.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
            r.push(if flip {
                -self.b[i].clone()
            } else {
                self.b[i].clone()
            });
            rows.push(r);
        }
        let mut t = Tableau {
            rows,
            basis: (n..n + m).collect(),
        };
        let mut phase1 = vec![F::zero(); n + m];
        for v in phase1.iter_mut().skip(n) {
            *v = -F::one();
        }
        t.optimize(&phase1, n + m);
        if !t.objective(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }

        // Drive artificials out of the basis; drop rows that are redundant.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n {
                if let Some(col) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, col);
                } else {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.truncate(n);
            row.push(rhs);
        }

        if !t.optimize(&self.c, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![F::zero(); n];
        for (r, &bv) in t.basis.iter().enumerate() {
            x[bv] = t.rhs(r).clone();
        }
        LpOutcome::Optimal {
            value: t.objective(&self.c),
            x,
        }
    }
}
