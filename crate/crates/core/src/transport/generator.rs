use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fields::ElementField2;
use crate::mesh::{LiftedGeometry, Neighbor, Triangulation};

/// Normal fluxes below this fraction of the largest element speed are
/// treated as zero, so round-off cannot open a reverse path across an edge.
pub const FLUX_NOISE_FLOOR: f64 = 1e-12;

/// Rate matrix of the transport chain.
///
/// States `0..n_transient` are triangles, the rest are boundary
/// edge-elements, whose rows are identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    n_transient: usize,
    /// Off-diagonal positive rates of each row, sorted by target state.
    out: Vec<Vec<(usize, f64)>>,
    /// `−Q_KK`.
    exit_rate: Vec<f64>,
}

impl Generator {
    /// Builds a generator from explicit off-diagonal rates. Rows of states
    /// `n_transient..` must be empty.
    pub fn from_rates(n_transient: usize, out: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = out.len();
        if n_transient > n {
            return Err(Error::InvalidInput(format!(
                "{n_transient} transient states out of {n}"
            )));
        }
        let mut rows = Vec::with_capacity(n);
        let mut exit_rate = Vec::with_capacity(n);
        for (i, mut row) in out.into_iter().enumerate() {
            if i >= n_transient && !row.is_empty() {
                return Err(Error::InvalidInput(format!("absorbing state {i} has outgoing rates")));
            }
            for &(j, r) in &row {
                if j >= n || j == i || !(r.is_finite() && r >= 0.0) {
                    return Err(Error::InvalidInput(format!("invalid rate {r} from {i} to {j}")));
                }
            }
            row.retain(|&(_, r)| r > 0.0);
            row.sort_by_key(|&(j, _)| j);
            exit_rate.push(row.iter().map(|&(_, r)| r).sum());
            rows.push(row);
        }
        Ok(Self { n_transient, out: rows, exit_rate })
    }

    pub fn n_states(&self) -> usize {
        self.out.len()
    }

    pub fn n_transient(&self) -> usize {
        self.n_transient
    }

    /// `Q_KK`.
    pub fn diagonal(&self, k: usize) -> f64 {
        -self.exit_rate[k]
    }

    /// `−Q_KK` for every state.
    pub fn exit_rates(&self) -> &[f64] {
        &self.exit_rate
    }

    /// Positive off-diagonal entries of row `k`.
    pub fn out_rates(&self, k: usize) -> &[(usize, f64)] {
        &self.out[k]
    }

    /// `Q_KL`.
    pub fn rate(&self, k: usize, l: usize) -> f64 {
        if k == l {
            return self.diagonal(k);
        }
        self.out[k]
            .binary_search_by_key(&l, |&(j, _)| j)
            .map(|i| self.out[k][i].1)
            .unwrap_or(0.0)
    }

    /// Largest exit rate, the uniformization constant.
    pub fn max_exit_rate(&self) -> f64 {
        self.exit_rate.iter().copied().fold(0.0, f64::max)
    }

    /// States with no way out.
    pub fn is_absorbing(&self, k: usize) -> bool {
        self.exit_rate[k] == 0.0
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n_states();
        let mut q = DMatrix::zeros(n, n);
        for k in 0..n {
            q[(k, k)] = -self.exit_rate[k];
            for &(l, r) in &self.out[k] {
                q[(k, l)] = r;
            }
        }
        q
    }

    /// `y = Q x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_states())
            .map(|k| {
                self.out[k].iter().map(|&(l, r)| r * x[l]).sum::<f64>() - self.exit_rate[k] * x[k]
            })
            .collect()
    }
}

/// Canonical normal flux through every edge, seen from its owner:
/// the mean of the two one-sided fluxes on interfaces, `v_K·ν` on the
/// boundary. Values below the noise floor are zeroed.
pub fn edge_fluxes(v: &ElementField2, t: &Triangulation) -> Vec<f64> {
    let floor = FLUX_NOISE_FLOOR * v.max_norm();
    t.edges()
        .iter()
        .map(|e| {
            let f = match e.right {
                Some(l) => 0.5 * (v.0[e.left] + v.0[l]).dot(&e.nu),
                None => v.0[e.left].dot(&e.nu),
            };
            if f.abs() <= floor {
                0.0
            } else {
                f
            }
        })
        .collect()
}

/// Transport generator of the planar master field `v` on the lifted mesh.
///
/// The rate from `K` across edge `e` is `σ^ζ_e / |K^ζ| · (v_K·ν_{K|e})⁺`,
/// with lifted edge lengths and areas and the planar normal flux.
pub fn generator(v: &ElementField2, geo: &LiftedGeometry, t: &Triangulation) -> Result<Generator> {
    if v.len() != t.n_triangles() || geo.area3d.len() != t.n_triangles() {
        return Err(Error::InvalidInput("field, geometry and mesh sizes differ".into()));
    }
    let flux = edge_fluxes(v, t);
    let mut out = vec![Vec::new(); t.n_ext()];
    for (k, row) in out.iter_mut().enumerate().take(t.n_triangles()) {
        for &(e, neighbor) in t.adjacency(k) {
            let edge = &t.edges()[e];
            let f = if edge.left == k { flux[e] } else { -flux[e] };
            if f > 0.0 {
                let target = match neighbor {
                    Neighbor::Triangle(l) => l,
                    Neighbor::Boundary(b) => b,
                };
                row.push((target, geo.edge_length[e] / geo.area3d[k] * f));
            }
        }
    }
    Generator::from_rates(t.n_triangles(), out)
}
