use super::Generator;
use crate::error::{Error, Result};

/// Embedded jump chain: `Q̃_KL = Q_KL / (−Q_KK)`, with a unit self-loop on
/// every absorbing state.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpChain {
    rows: Vec<Vec<(usize, f64)>>,
}

impl JumpChain {
    /// A chain from explicit rows; each row must be a probability vector.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, p)| p).sum();
            let bad = row.iter().any(|&(j, p)| j >= n || !(0.0..=1.0).contains(&p));
            if bad || (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("row {i} is not a probability vector")));
            }
        }
        Ok(Self { rows })
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, k: usize) -> &[(usize, f64)] {
        &self.rows[k]
    }

    /// `Q̃_KL`.
    pub fn prob(&self, k: usize, l: usize) -> f64 {
        self.rows[k].iter().filter(|&&(j, _)| j == l).map(|&(_, p)| p).sum()
    }
}

pub fn jump_chain(q: &Generator) -> JumpChain {
    let rows = (0..q.n_states())
        .map(|k| {
            let rate = q.exit_rates()[k];
            if rate == 0.0 {
                vec![(k, 1.0)]
            } else {
                q.out_rates(k).iter().map(|&(l, r)| (l, r / rate)).collect()
            }
        })
        .collect();
    JumpChain { rows }
}

/// Directed graph of the jump chain without self-loops: `K → L` when the
/// chain can step from `K` to `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowGraph {
    succ: Vec<Vec<usize>>,
}

pub fn flow_graph(qt: &JumpChain) -> FlowGraph {
    let succ = (0..qt.n_states())
        .map(|k| {
            qt.row(k)
                .iter()
                .filter(|&&(l, p)| l != k && p > 0.0)
                .map(|&(l, _)| l)
                .collect()
        })
        .collect();
    FlowGraph { succ }
}

/// Outcome of [`assert_forest`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestCheck {
    pub is_forest: bool,
    /// A closed walk `[K, …, K]` when a cycle exists.
    pub cycle: Option<Vec<usize>>,
}

impl FlowGraph {
    pub fn n_states(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, k: usize) -> &[usize] {
        &self.succ[k]
    }

    pub fn n_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Whether `l` is reachable from `k` (`k` is upstream of `l`).
    pub fn is_upstream(&self, k: usize, l: usize) -> bool {
        let mut seen = vec![false; self.n_states()];
        let mut stack = vec![k];
        while let Some(s) = stack.pop() {
            for &n in &self.succ[s] {
                if n == l {
                    return true;
                }
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        false
    }

    /// States in an order where every edge points forward, or `None` if the
    /// graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let check = assert_forest(self);
        if !check.is_forest {
            return None;
        }
        let mut order = post_order(self);
        order.reverse();
        Some(order)
    }
}

fn post_order(g: &FlowGraph) -> Vec<usize> {
    let n = g.n_states();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if done[root] {
            continue;
        }
        done[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (s, ref mut i)) = stack.last_mut() {
            if let Some(&next) = g.succ[s].get(*i) {
                *i += 1;
                if !done[next] {
                    done[next] = true;
                    stack.push((next, 0));
                }
            } else {
                order.push(s);
                stack.pop();
            }
        }
    }
    order
}

/// True iff the graph is acyclic; otherwise returns one cycle as witness.
pub fn assert_forest(g: &FlowGraph) -> ForestCheck {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = g.n_states();
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        mark[root] = Mark::Active;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (s, ref mut i)) = stack.last_mut() {
            if let Some(&next) = g.succ[s].get(*i) {
                *i += 1;
                match mark[next] {
                    Mark::New => {
                        mark[next] = Mark::Active;
                        stack.push((next, 0));
                    }
                    Mark::Active => {
                        let from = stack.iter().position(|&(v, _)| v == next).unwrap();
                        let mut cycle: Vec<usize> = stack[from..].iter().map(|&(v, _)| v).collect();
                        cycle.push(next);
                        return ForestCheck { is_forest: false, cycle: Some(cycle) };
                    }
                    Mark::Done => {}
                }
            } else {
                mark[s] = Mark::Done;
                stack.pop();
            }
        }
    }
    ForestCheck { is_forest: true, cycle: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle_chain() {
        let q = Generator::from_rates(1, vec![vec![(1, 2.0)], vec![]]).unwrap();
        let qt = jump_chain(&q);
        assert_eq!(qt.prob(0, 1), 1.0);
        assert_eq!(qt.row(1), &[(1, 1.0)]);
        let g = flow_graph(&qt);
        assert_eq!(g.n_edges(), 1);
        assert!(g.is_upstream(0, 1));
        assert!(!g.is_upstream(1, 0));
        assert!(assert_forest(&g).is_forest);
    }

    #[test]
    fn split_outflow() {
        let q = Generator::from_rates(1, vec![vec![(1, 3.0), (2, 1.0)], vec![], vec![]]).unwrap();
        let qt = jump_chain(&q);
        assert_eq!(qt.prob(0, 1), 0.75);
        assert_eq!(qt.prob(0, 2), 0.25);
    }

    #[test]
    fn two_cycle_is_detected() {
        let qt = JumpChain::from_rows(vec![vec![(1, 1.0)], vec![(0, 1.0)]]).unwrap();
        let check = assert_forest(&flow_graph(&qt));
        assert!(!check.is_forest);
        assert_eq!(check.cycle, Some(vec![0, 1, 0]));
    }

    #[test]
    fn longer_cycle_behind_a_tree() {
        let qt = JumpChain::from_rows(vec![
            vec![(1, 0.5), (4, 0.5)],
            vec![(2, 1.0)],
            vec![(3, 1.0)],
            vec![(1, 1.0)],
            vec![(4, 1.0)],
        ])
        .unwrap();
        let g = flow_graph(&qt);
        let check = assert_forest(&g);
        assert_eq!(check.cycle, Some(vec![1, 2, 3, 1]));
        assert!(g.topological_order().is_none());
    }

    #[test]
    fn topological_order_respects_edges() {
        let qt = JumpChain::from_rows(vec![
            vec![(2, 1.0)],
            vec![(0, 0.5), (2, 0.5)],
            vec![(3, 1.0)],
            vec![(3, 1.0)],
        ])
        .unwrap();
        let g = flow_graph(&qt);
        let order = g.topological_order().unwrap();
        let pos = |s: usize| order.iter().position(|&v| v == s).unwrap();
        for s in 0..4 {
            for &n in g.successors(s) {
                assert!(pos(s) < pos(n));
            }
        }
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(JumpChain::from_rows(vec![vec![(0, 0.5)]]).is_err());
        assert!(JumpChain::from_rows(vec![vec![(3, 1.0)]]).is_err());
    }
}
