use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::expm::expm_action;
use super::graph::{flow_graph, jump_chain};
use super::Generator;
use crate::error::{Error, Result};

/// Survival `Φ_K(t) = (exp(Q t) 1_𝒯)_K` of every triangle.
pub fn exit_time_distribution(q: &Generator, t: f64) -> Result<Vec<f64>> {
    let n = q.n_transient();
    let mut ones = vec![0.0; q.n_states()];
    ones[..n].iter_mut().for_each(|x| *x = 1.0);
    let phi = expm_action(q, t, &ones)?;
    Ok(phi[..n].iter().map(|p| p.clamp(0.0, 1.0)).collect())
}

/// Expected exit time of every triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitTimes {
    /// `Ψ_K`, infinite for stranded triangles.
    pub psi: Vec<f64>,
    /// Triangles from which the boundary is not reached almost surely.
    pub stranded: Vec<usize>,
}

impl ExitTimes {
    /// Unweighted mean of `Ψ` over the triangles.
    pub fn mean(&self) -> f64 {
        self.psi.iter().sum::<f64>() / self.psi.len() as f64
    }

    /// Mean of `Ψ` weighted by `weights` (typically element areas).
    pub fn weighted_mean(&self, weights: &[f64]) -> f64 {
        let total: f64 = weights.iter().sum();
        self.psi.iter().zip(weights).map(|(p, w)| p * w).sum::<f64>() / total
    }

    pub fn all_finite(&self) -> bool {
        self.stranded.is_empty()
    }
}

/// Triangles with positive probability of never leaving: those that can
/// reach a triangle without a path to the boundary.
pub fn stranded_states(q: &Generator) -> Vec<bool> {
    let n = q.n_states();
    let mut pred = vec![Vec::new(); n];
    for k in 0..n {
        for &(l, _) in q.out_rates(k) {
            pred[l].push(k);
        }
    }
    let reverse_closure = |seeds: Vec<usize>| {
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = seeds.into();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &pred[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    };
    let drains = reverse_closure((q.n_transient()..n).collect());
    let traps = (0..q.n_transient()).filter(|&k| !drains[k]).collect();
    reverse_closure(traps)
}

/// Solves `−Q_𝒯𝒯 Ψ = 1` on the triangles that drain almost surely.
///
/// Acyclic flow graphs are solved by back-substitution in topological
/// order; otherwise a dense LU factorization is used.
pub fn expected_exit_times(q: &Generator) -> Result<ExitTimes> {
    let n = q.n_transient();
    let stranded_mask = stranded_states(q);
    let stranded: Vec<usize> = (0..n).filter(|&k| stranded_mask[k]).collect();
    let mut psi = vec![f64::INFINITY; n];

    let graph = flow_graph(&jump_chain(q));
    if let Some(order) = graph.topological_order() {
        for &k in order.iter().rev() {
            if k >= n || stranded_mask[k] {
                continue;
            }
            let downstream: f64 = q
                .out_rates(k)
                .iter()
                .filter(|&&(l, _)| l < n)
                .map(|&(l, r)| r * psi[l])
                .sum();
            psi[k] = (1.0 + downstream) / q.exit_rates()[k];
        }
    } else {
        let finite: Vec<usize> = (0..n).filter(|&k| !stranded_mask[k]).collect();
        let mut slot = vec![usize::MAX; n];
        for (i, &k) in finite.iter().enumerate() {
            slot[k] = i;
        }
        let m = finite.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (i, &k) in finite.iter().enumerate() {
            a[(i, i)] = q.exit_rates()[k];
            for &(l, r) in q.out_rates(k) {
                if l < n {
                    a[(i, slot[l])] -= r;
                }
            }
        }
        let b = DVector::from_element(m, 1.0);
        let x = a
            .clone()
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::numeric("transient block of the generator is singular", f64::NAN))?;
        let res = (&a * &x - &b).norm() / b.norm();
        if !(res <= 1e-10) {
            return Err(Error::numeric("exit-time solve did not reach tolerance", res));
        }
        for (i, &k) in finite.iter().enumerate() {
            psi[k] = x[i];
        }
    }
    Ok(ExitTimes { psi, stranded })
}

// Gauss-Kronrod 7-15 abscissae and weights on [−1, 1], positive half.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights of the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// The 15 nodes in increasing order with their Kronrod and Gauss weights.
fn gk15() -> [(f64, f64, f64); 15] {
    std::array::from_fn(|i| {
        let (j, sign) = if i < 7 { (i, -1.0) } else { (14 - i, 1.0) };
        let g = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        (sign * XGK[j], WGK[j], g)
    })
}

/// `Ψ` by adaptive Gauss-Kronrod quadrature of `∫ Φ(t) dt`, for
/// cross-checking [`expected_exit_times`]. Integration stops once every
/// draining triangle has `Φ < 1e−10`. Stranded triangles get `∞`.
pub fn expected_exit_times_quadrature(q: &Generator) -> Result<Vec<f64>> {
    let n = q.n_transient();
    let stranded = stranded_states(q);
    let active: Vec<usize> = (0..n).filter(|&k| !stranded[k]).collect();
    let mut integral = vec![0.0; n];
    let lambda = q.max_exit_rate();
    if lambda == 0.0 || active.is_empty() {
        return Ok((0..n).map(|k| if stranded[k] { f64::INFINITY } else { 0.0 }).collect());
    }

    let nodes = gk15();
    let mut state = vec![0.0; q.n_states()];
    state[..n].iter_mut().for_each(|x| *x = 1.0);
    let mut t = 0.0;
    let mut h = 0.5 / lambda;
    let mut panels = 0usize;
    loop {
        panels += 1;
        if panels > 100_000 {
            return Err(Error::numeric("exit-time quadrature did not converge", f64::NAN));
        }
        let mut kronrod = vec![0.0; n];
        let mut gauss = vec![0.0; n];
        let mut x = state.clone();
        let mut pos = -1.0;
        for &(node, wk, wg) in &nodes {
            x = expm_action(q, 0.5 * h * (node - pos), &x)?;
            pos = node;
            for &k in &active {
                kronrod[k] += wk * x[k];
                gauss[k] += wg * x[k];
            }
        }
        let err = active
            .iter()
            .map(|&k| {
                let scale = (integral[k] + 0.5 * h * kronrod[k]).max(1e-300);
                0.5 * h * (kronrod[k] - gauss[k]).abs() / scale
            })
            .fold(0.0, f64::max);
        if err > 1e-10 && h * lambda > 1e-6 {
            h *= 0.5;
            continue;
        }
        let end = expm_action(q, 0.5 * h * (1.0 - pos), &x)?;
        for &k in &active {
            integral[k] += 0.5 * h * kronrod[k];
        }
        t += h;
        state = end;
        let done = active.iter().all(|&k| {
            let phi = state[k].max(0.0);
            phi < 1e-10 && phi * t < 1e-8 * integral[k]
        });
        if done {
            break;
        }
        h *= 2.0;
    }
    Ok((0..n)
        .map(|k| if stranded[k] { f64::INFINITY } else { integral[k] })
        .collect())
}
