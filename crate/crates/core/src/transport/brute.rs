//! Exhaustive oracle: every basic solution of a transportation polytope is
//! carried by a spanning tree of the bipartite support graph, so the optimum
//! is the cheapest tree whose (unique) flow is nonnegative.

use crate::rational::Q;
use num_traits::{Signed, Zero};

/// Minimum cost over all spanning-tree basic feasible solutions.
pub(crate) fn min_over_basis_trees(supply: &[Q], demand: &[Q], cost: &[Vec<Q>]) -> Q {
    let (rows, cols) = (supply.len(), demand.len());
    let need = rows + cols - 1;
    let mut best: Option<Q> = None;
    let mut chosen = Vec::with_capacity(need);
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    enumerate(0, rows, cols, need, &mut chosen, &mut parent, &mut |tree| {
        if let Some(cost) = tree_cost(tree, supply, demand, cost) {
            if best.as_ref().is_none_or(|b| &cost < b) {
                best = Some(cost);
            }
        }
    });
    best.expect("the transportation polytope is nonempty")
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn enumerate(
    next: usize,
    rows: usize,
    cols: usize,
    need: usize,
    chosen: &mut Vec<(usize, usize)>,
    parent: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if chosen.len() == need {
        visit(chosen);
        return;
    }
    let total = rows * cols;
    if total - next < need - chosen.len() {
        return;
    }
    let (i, j) = (next / cols, next % cols);
    let (ri, rj) = (find(parent, i), find(parent, rows + j));
    if ri != rj {
        let saved = parent.clone();
        parent[ri] = rj;
        chosen.push((i, j));
        enumerate(next + 1, rows, cols, need, chosen, parent, visit);
        chosen.pop();
        *parent = saved;
    }
    enumerate(next + 1, rows, cols, need, chosen, parent, visit);
}

/// Solves the tree's flow by peeling leaves; `None` if some flow is negative.
fn tree_cost(tree: &[(usize, usize)], supply: &[Q], demand: &[Q], cost: &[Vec<Q>]) -> Option<Q> {
    let rows = supply.len();
    let nodes = rows + demand.len();
    let mut residual: Vec<Q> = supply.iter().chain(demand.iter()).cloned().collect();
    let mut degree = vec![0usize; nodes];
    for &(i, j) in tree {
        degree[i] += 1;
        degree[rows + j] += 1;
    }
    let mut alive = vec![true; tree.len()];
    let mut total = Q::zero();
    for _ in 0..tree.len() {
        let (e, leaf) = tree
            .iter()
            .enumerate()
            .filter(|(e, _)| alive[*e])
            .find_map(|(e, &(i, j))| {
                if degree[i] == 1 {
                    Some((e, i))
                } else if degree[rows + j] == 1 {
                    Some((e, rows + j))
                } else {
                    None
                }
            })?;
        let (i, j) = tree[e];
        let flow = residual[leaf].clone();
        if flow.is_negative() {
            return None;
        }
        let other = if leaf == i { rows + j } else { i };
        residual[other] -= &flow;
        residual[leaf] = Q::zero();
        total += &cost[i][j] * &flow;
        alive[e] = false;
        degree[i] -= 1;
        degree[rows + j] -= 1;
    }
    Some(total)
}
