//! Nodal P1 scalar fields and element-wise constant vector fields.

use crate::error::{Error, Result};
use crate::mesh::{LiftedGeometry, Triangulation};
use crate::{Vec2, Vec3};

/// Absolute tolerance on normal-component jumps, relative to the largest
/// element vector of the field.
pub const CONSERVATION_TOL: f64 = 1e-10;

/// One value per mesh vertex, interpolated linearly on each triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalScalarField(pub Vec<f64>);

impl NodalScalarField {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Nodal interpolant of `f` on the mesh vertices.
    pub fn interpolate(t: &Triangulation, f: impl Fn(Vec2) -> f64) -> Self {
        Self(t.vertices().iter().map(|&p| f(p)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Planar vector field, constant on each triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementField2(pub Vec<Vec2>);

/// Spatial vector field, constant on each lifted triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementField3(pub Vec<Vec3>);

impl ElementField2 {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Vec2::zeros(); n])
    }

    pub fn constant(n: usize, v: Vec2) -> Self {
        Self(vec![v; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest element vector norm.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }
}

impl ElementField3 {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|w_K · n_K| / |w_K|` over the elements.
    pub fn max_normal_component(&self, geo: &LiftedGeometry) -> f64 {
        self.0
            .iter()
            .zip(&geo.normal)
            .map(|(w, n)| {
                let norm = w.norm();
                if norm == 0.0 {
                    0.0
                } else {
                    w.dot(n).abs() / norm
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Gradients of the three hat functions of a triangle, in corner order.
pub fn hat_gradients(t: &Triangulation, k: usize) -> [Vec2; 3] {
    let p = t.corners(k);
    let two_area = 2.0 * t.area(k);
    std::array::from_fn(|i| {
        let (pj, pk) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        Vec2::new(pj.y - pk.y, pk.x - pj.x) / two_area
    })
}

/// Gradient of the P1 interpolant of `q` on each triangle.
pub fn gradient_p1(q: &NodalScalarField, t: &Triangulation) -> ElementField2 {
    assert_eq!(q.len(), t.n_vertices(), "nodal field length");
    ElementField2(
        (0..t.n_triangles())
            .map(|k| {
                let tri = t.triangles()[k];
                let g = hat_gradients(t, k);
                q.0[tri[0]] * g[0] + q.0[tri[1]] * g[1] + q.0[tri[2]] * g[2]
            })
            .collect(),
    )
}

/// Interleaved flattening `(x_1, y_1, x_2, y_2, ...)` in triangle order.
pub fn numb(v: &ElementField2) -> Vec<f64> {
    v.0.iter().flat_map(|w| [w.x, w.y]).collect()
}

/// Inverse of [`numb`].
pub fn unnumb(x: &[f64]) -> Result<ElementField2> {
    if x.len() % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "numbered vector has odd length {}",
            x.len()
        )));
    }
    Ok(ElementField2(
        x.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect(),
    ))
}

/// Normal-component jump `v_K · ν_{K|L} + v_L · ν_{L|K}` on each interface
/// edge, in the order of [`Triangulation::interface_edges`].
pub fn conservation_residual(v: &ElementField2, t: &Triangulation) -> Vec<f64> {
    t.interface_edges()
        .iter()
        .map(|&e| {
            let edge = &t.edges()[e];
            let (k, l) = (edge.left, edge.right.unwrap());
            (v.0[k] - v.0[l]).dot(&edge.nu)
        })
        .collect()
}

/// Whether `v` lies in the conservative space at the default tolerance.
pub fn is_conservative(v: &ElementField2, t: &Triangulation) -> bool {
    let scale = v.max_norm().max(f64::MIN_POSITIVE);
    conservation_residual(v, t)
        .iter()
        .all(|r| r.abs() <= CONSERVATION_TOL * scale)
}
