//! Gauge (Minkowski functional) of a centrally symmetric polytope given by
//! generators: `min sum lambda_k  s.t.  sum lambda_k v_k = delta, lambda >= 0`.
//!
//! Solved with a dense two-phase tableau simplex under Bland's rule.

use super::TransportError;
use crate::scalar::LpScalar;

struct Tableau<T> {
    /// `rows x (vars + 1)`; the last column is the right-hand side.
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    vars: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.a[r][self.vars]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for x in self.a[row].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.a[row].clone();
        for (r, line) in self.a.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col].clone();
            if f == T::zero() {
                continue;
            }
            for (x, pv) in line.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * pv.clone();
            }
        }
        self.basis[row] = col;
    }

    /// Reduced cost of column `col` for objective `cost` (indexed by variable).
    fn reduced(&self, cost: &[T], col: usize) -> T {
        let mut z = cost[col].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            z = z - cost[b].clone() * self.a[r][col].clone();
        }
        z
    }

    /// Primal simplex restricted to columns where `allowed(col)`.
    fn optimize(&mut self, cost: &[T], allowed: impl Fn(usize) -> bool) -> Result<(), TransportError> {
        for _ in 0..100_000 {
            let entering = (0..self.vars)
                .filter(|&c| allowed(c) && !self.basis.contains(&c))
                .find(|&c| self.reduced(cost, c).is_improving());
            let Some(col) = entering else { return Ok(()) };
            // Ratio test; ties broken by smallest basic variable index.
            let mut best: Option<(T, usize, usize)> = None;
            for r in 0..self.a.len() {
                let coef = self.a[r][col].clone();
                if !coef.is_positive_tol() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / coef;
                let better = match &best {
                    None => true,
                    Some((br, _, bvar)) => {
                        let diff = ratio.clone() - br.clone();
                        if diff.is_negligible() {
                            self.basis[r] < *bvar
                        } else {
                            ratio < *br
                        }
                    }
                };
                if better {
                    best = Some((ratio, r, self.basis[r]));
                }
            }
            let Some((_, row, _)) = best else {
                return Err(TransportError::Unbounded);
            };
            self.pivot(row, col);
        }
        Err(TransportError::PivotLimit(100_000))
    }
}

/// Smallest `r >= 0` with `delta` in `r * conv(generators)`, for a centrally
/// symmetric generator set. Coordinates of `delta` and every generator sum
/// to zero, so the last coordinate is dropped as redundant.
pub fn gauge<T: LpScalar>(delta: &[T], generators: &[Vec<T>]) -> Result<T, TransportError> {
    let dim = delta.len();
    if dim < 2 {
        return Err(TransportError::DimensionMismatch { expected: 2, got: dim });
    }
    if let Some(g) = generators.iter().find(|g| g.len() != dim) {
        return Err(TransportError::DimensionMismatch {
            expected: dim,
            got: g.len(),
        });
    }
    if delta.iter().all(|x| x.is_negligible() && *x == T::zero()) {
        return Ok(T::zero());
    }
    let rows = dim - 1;
    let k = generators.len();
    let vars = k + rows;
    let mut a = vec![vec![T::zero(); vars + 1]; rows];
    for r in 0..rows {
        let flip = delta[r] < T::zero();
        let sign = |x: T| if flip { -x } else { x };
        for (c, g) in generators.iter().enumerate() {
            a[r][c] = sign(g[r].clone());
        }
        a[r][k + r] = T::one();
        a[r][vars] = sign(delta[r].clone());
    }
    let mut t = Tableau {
        a,
        basis: (k..vars).collect(),
        vars,
    };

    let mut phase1 = vec![T::zero(); vars];
    for c in phase1.iter_mut().skip(k) {
        *c = T::one();
    }
    t.optimize(&phase1, |_| true)?;
    let infeas = (0..rows)
        .filter(|&r| t.basis[r] >= k)
        .map(|r| t.rhs(r).clone())
        .fold(T::zero(), |s, x| s + x);
    if !infeas.is_negligible() {
        return Err(TransportError::Infeasible);
    }
    // Drive zero-level artificials out of the basis where possible.
    for r in 0..rows {
        if t.basis[r] >= k {
            if let Some(c) = (0..k).find(|&c| !t.a[r][c].is_negligible()) {
                t.pivot(r, c);
            }
        }
    }

    let mut phase2 = vec![T::zero(); vars];
    for c in phase2.iter_mut().take(k) {
        *c = T::one();
    }
    t.optimize(&phase2, |c| c < k)?;
    let value = (0..rows)
        .filter(|&r| t.basis[r] < k)
        .map(|r| t.rhs(r).clone())
        .fold(T::zero(), |s, x| s + x);
    Ok(value)
}
