//! Transportation simplex on the complete bipartite graph `rows x cols`.
//!
//! The basis is a spanning tree of `rows + cols - 1` cells. Entering and
//! leaving cells follow Bland's rule (smallest row-major index), which keeps
//! degenerate pivots from cycling.

use std::collections::VecDeque;

use super::TransportError;
use crate::scalar::LpScalar;

const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct TransportSolution<T> {
    /// Row-major `rows x cols` flow.
    pub flow: Vec<Vec<T>>,
    pub cost: T,
    pub pivots: usize,
}

struct Basis<T> {
    rows: usize,
    cols: usize,
    cells: Vec<(usize, usize)>,
    in_basis: Vec<bool>,
    flow: Vec<Vec<T>>,
}

impl<T: LpScalar> Basis<T> {
    /// North-west corner rule. Always emits exactly `rows + cols - 1` cells
    /// forming a staircase tree, zero-flow cells included.
    fn north_west(supply: &[T], demand: &[T]) -> Self {
        let (rows, cols) = (supply.len(), demand.len());
        let mut s = supply.to_vec();
        let mut d = demand.to_vec();
        let mut flow = vec![vec![T::zero(); cols]; rows];
        let mut in_basis = vec![false; rows * cols];
        let mut cells = Vec::with_capacity(rows + cols - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = if i == rows - 1 && j == cols - 1 {
                // Last cell absorbs whatever is left (identical for exact input).
                let rest = s[i].clone();
                if rest > T::zero() {
                    rest
                } else {
                    T::zero()
                }
            } else if s[i] < d[j] {
                s[i].clone()
            } else {
                d[j].clone()
            };
            let x = if x < T::zero() { T::zero() } else { x };
            s[i] = s[i].clone() - x.clone();
            d[j] = d[j].clone() - x.clone();
            flow[i][j] = x;
            in_basis[i * cols + j] = true;
            cells.push((i, j));
            if i == rows - 1 && j == cols - 1 {
                break;
            }
            if i == rows - 1 {
                j += 1;
            } else if j == cols - 1 || s[i].is_negligible() {
                i += 1;
            } else {
                j += 1;
            }
        }
        Basis {
            rows,
            cols,
            cells,
            in_basis,
            flow,
        }
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        // Nodes 0..rows are rows, rows..rows+cols are columns; edge payload is
        // the basis cell.
        let mut adj = vec![Vec::new(); self.rows + self.cols];
        for &(i, j) in &self.cells {
            adj[i].push((self.rows + j, i * self.cols + j));
            adj[self.rows + j].push((i, i * self.cols + j));
        }
        adj
    }

    fn potentials(&self, cost: &[Vec<T>], adj: &[Vec<(usize, usize)>]) -> (Vec<T>, Vec<T>) {
        let mut u: Vec<Option<T>> = vec![None; self.rows];
        let mut v: Vec<Option<T>> = vec![None; self.cols];
        u[0] = Some(T::zero());
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &(next, cell) in &adj[node] {
                let (i, j) = (cell / self.cols, cell % self.cols);
                if node < self.rows {
                    if v[j].is_none() {
                        let ui = u[i].clone().expect("row potential set");
                        v[j] = Some(cost[i][j].clone() - ui);
                        queue.push_back(next);
                    }
                } else if u[i].is_none() {
                    let vj = v[j].clone().expect("column potential set");
                    u[i] = Some(cost[i][j].clone() - vj);
                    queue.push_back(next);
                }
            }
        }
        (
            u.into_iter().map(|x| x.expect("basis spans every row")).collect(),
            v.into_iter().map(|x| x.expect("basis spans every column")).collect(),
        )
    }

    /// Tree path from node `from` to node `to`, as the list of cells on it.
    fn tree_path(&self, adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.rows + self.cols];
        let mut seen = vec![false; self.rows + self.cols];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(node) = queue.pop_front() {
            if node == to {
                break;
            }
            for &(next, cell) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, cell));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = to;
        while node != from {
            let (prev, cell) = parent[node].expect("basis tree is connected");
            path.push(cell);
            node = prev;
        }
        path.reverse();
        path
    }
}

/// Minimizes `sum cost[i][j] * x[i][j]` over nonnegative `x` with row sums
/// `supply` and column sums `demand`.
pub fn solve_transportation<T: LpScalar>(
    supply: &[T],
    demand: &[T],
    cost: &[Vec<T>],
) -> Result<TransportSolution<T>, TransportError> {
    let (rows, cols) = (supply.len(), demand.len());
    if rows == 0 || cols == 0 {
        return Err(TransportError::DimensionMismatch { expected: 1, got: 0 });
    }
    if cost.len() != rows || cost.iter().any(|r| r.len() != cols) {
        return Err(TransportError::DimensionMismatch {
            expected: rows * cols,
            got: cost.iter().map(Vec::len).sum(),
        });
    }
    let total_s = supply.iter().cloned().fold(T::zero(), |a, b| a + b);
    let total_d = demand.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !(total_s.clone() - total_d.clone()).is_negligible() {
        return Err(TransportError::Unbalanced {
            supply: total_s.to_f64(),
            demand: total_d.to_f64(),
        });
    }

    let mut basis = Basis::north_west(supply, demand);
    let mut pivots = 0;
    loop {
        let adj = basis.adjacency();
        let (u, v) = basis.potentials(cost, &adj);
        let entering = (0..rows * cols).find(|&cell| {
            if basis.in_basis[cell] {
                return false;
            }
            let (i, j) = (cell / cols, cell % cols);
            (cost[i][j].clone() - u[i].clone() - v[j].clone()).is_improving()
        });
        let Some(enter) = entering else { break };
        if pivots >= MAX_PIVOTS {
            return Err(TransportError::PivotLimit(MAX_PIVOTS));
        }
        pivots += 1;

        let (ei, ej) = (enter / cols, enter % cols);
        // Cycle: +enter, then alternate -,+,... along the tree path from
        // column ej back to row ei.
        let path = basis.tree_path(&adj, rows + ej, ei);
        let minus: Vec<usize> = path.iter().step_by(2).copied().collect();
        let plus: Vec<usize> = path.iter().skip(1).step_by(2).copied().collect();
        let theta = minus
            .iter()
            .map(|&c| basis.flow[c / cols][c % cols].clone())
            .fold(None, |acc: Option<T>, x| match acc {
                Some(a) if a <= x => Some(a),
                _ => Some(x),
            })
            .expect("cycle has a decreasing cell");
        let leave = *minus
            .iter()
            .filter(|&&c| (basis.flow[c / cols][c % cols].clone() - theta.clone()).is_negligible())
            .min()
            .expect("some cell attains theta");

        for &c in &plus {
            let f = &mut basis.flow[c / cols][c % cols];
            *f = f.clone() + theta.clone();
        }
        for &c in &minus {
            let f = &mut basis.flow[c / cols][c % cols];
            *f = f.clone() - theta.clone();
        }
        basis.flow[ei][ej] = theta;
        basis.flow[leave / cols][leave % cols] = T::zero();
        basis.in_basis[leave] = false;
        basis.in_basis[enter] = true;
        let slot = basis
            .cells
            .iter()
            .position(|&(i, j)| i * cols + j == leave)
            .expect("leaving cell is basic");
        basis.cells[slot] = (ei, ej);
    }

    let mut total = T::zero();
    for i in 0..rows {
        for j in 0..cols {
            // Clamp float round-off; exact flows are already nonnegative.
            if basis.flow[i][j] < T::zero() {
                basis.flow[i][j] = T::zero();
            }
            total = total + cost[i][j].clone() * basis.flow[i][j].clone();
        }
    }
    Ok(TransportSolution {
        flow: basis.flow,
        cost: total,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q, Q};

    fn costs(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn classic_balanced_instance() {
        // Optimum 735 cross-checked with an external LP solver.
        let s = [int(20), int(30), int(25)];
        let d = [int(10), int(35), int(30)];
        let c = costs(&[&[8, 6, 10], &[9, 12, 13], &[14, 9, 16]]);
        let sol = solve_transportation(&s, &d, &c).unwrap();
        let brute = crate::transport::brute::min_over_basis_trees(&s, &d, &c);
        assert_eq!(sol.cost, brute);
        assert_eq!(sol.cost, int(735));
        for i in 0..3 {
            assert_eq!(sol.flow[i].iter().sum::<Q>(), s[i]);
        }
    }

    #[test]
    fn degenerate_marginals_terminate() {
        let s = [q(1, 2), q(1, 2), q(0, 1)];
        let d = [q(1, 2), q(1, 2), q(0, 1)];
        let c = costs(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let sol = solve_transportation(&s, &d, &c).unwrap();
        assert_eq!(sol.cost, int(0));
    }

    #[test]
    fn float_path_matches_exact() {
        let c = costs(&[&[0, 2, 3], &[2, 0, 4], &[3, 4, 0]]);
        let cf: Vec<Vec<f64>> = c.iter().map(|r| r.iter().map(crate::rational::to_f64).collect()).collect();
        let exact = solve_transportation(&[q(1, 2), q(1, 4), q(1, 4)], &[q(0, 1), q(1, 3), q(2, 3)], &c).unwrap();
        let float = solve_transportation(&[0.5, 0.25, 0.25], &[0.0, 1.0 / 3.0, 2.0 / 3.0], &cf).unwrap();
        assert!((float.cost - crate::rational::to_f64(&exact.cost)).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbalanced() {
        let c = costs(&[&[0, 1], &[1, 0]]);
        assert!(matches!(
            solve_transportation(&[int(1), int(0)], &[int(0), int(0)], &c),
            Err(TransportError::Unbalanced { .. })
        ));
    }
}
