//! Small dense exact linear algebra.

#![allow(clippy::needless_range_loop)]

use crate::scalar::Field;

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn mat_vec<F: Field>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Solves `a x = b` for square `a` by Gaussian elimination. `None` if singular.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = m[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let v = m[col][j].clone() * f.clone();
                    m[r][j] = m[r][j].clone() - v;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() / pv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A nonzero vector orthogonal to every row, when the rows have corank one.
pub fn null_vector<F: Field>(rows: &[Vec<F>], width: usize) -> Option<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    if pivots.len() + 1 != width {
        return None;
    }
    let free = (0..width).find(|c| !pivots.contains(c))?;
    let mut v = vec![F::zero(); width];
    v[free] = F::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[i][free].clone();
    }
    Some(v)
}

pub fn determinant<F: Field>(a: &[Vec<F>]) -> F {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = m[r][col].clone() / pv.clone();
                for j in col..n {
                    let v = m[col][j].clone() * f.clone();
                    m[r][j] = m[r][j].clone() - v;
                }
            }
        }
    }
    det
}

/// Counts of positive, negative and zero entries in a diagonal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia of a symmetric matrix by exact congruence diagonalization.
///
/// Pivots on a nonzero diagonal entry when one is available; otherwise a
/// nonzero off-diagonal entry `a[k][j]` is folded into the diagonal by adding
/// row/column `j` to row/column `k`, which leaves `2 a[k][j]` on the diagonal.
pub fn inertia<F: Field>(q: &[Vec<F>]) -> Inertia {
    let n = q.len();
    let mut a = q.to_vec();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] = a[k][c].clone() + v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] = row[k].clone() + v;
                }
            }
        }
        let p = a[k][k].clone();
        if p.is_zero() {
            // Row k is entirely zero past the eliminated block.
            out.zero += 1;
            continue;
        }
        if p.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / p.clone();
            for c in k..n {
                let v = a[k][c].clone() * f.clone();
                a[i][c] = a[i][c].clone() - v;
            }
            for row in a.iter_mut().skip(k) {
                let v = row[k].clone() * f.clone();
                row[i] = row[i].clone() - v;
            }
        }
    }
    out
}

pub fn is_negative_definite<F: Field>(g: &[Vec<F>]) -> bool {
    inertia(g).negative == g.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn inertia_of_standard_forms() {
        let i = inertia(&q(&[&[1, 0], &[0, -1]]));
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let i = inertia(&q(&[&[-2, 1], &[1, 0]]));
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        // hyperbolic plane: zero diagonal forces the off-diagonal pivot
        let i = inertia(&q(&[&[0, 1], &[1, 0]]));
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let i = inertia(&q(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -3]]));
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 1));
        let i = inertia(&q(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]));
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 1));
    }

    #[test]
    fn solve_and_determinant() {
        let a = q(&[&[2, 1], &[1, 3]]);
        let b = vec![BigRational::from_int(3), BigRational::from_int(5)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![BigRational::ratio(4, 5), BigRational::ratio(7, 5)]);
        assert_eq!(determinant(&a), BigRational::from_int(5));
        assert!(solve(&q(&[&[1, 2], &[2, 4]]), &b).is_none());
    }

    #[test]
    fn null_vector_of_corank_one() {
        let rows = q(&[&[1, 1, 0], &[0, 1, 1]]);
        let v = null_vector(&rows, 3).unwrap();
        for r in &rows {
            assert!(dot(r, &v).is_zero());
        }
        assert!(null_vector(&q(&[&[1, 0, 0]]), 3).is_none());
    }
}
