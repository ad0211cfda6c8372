//! Orthogonal projection of an element field onto the conservative space.
//!
//! A field is conservative exactly when its numbered vector lies in the
//! kernel of the characterizing matrix `A`, whose row for the interface
//! `K|L` holds `ν_{K|L}` in the two columns of `K` and `ν_{L|K}` in those of
//! `L`. The closest conservative field is `x − Aᵀ y` with `(A Aᵀ) y = A x`.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use sprs::{CsMat, TriMat};

use crate::error::{Error, Result};
use crate::fields::{numb, unnumb, ElementField2};
use crate::linalg;
use crate::mesh::Triangulation;

/// Largest mesh accepted by the dense [`projection_oracle`].
pub const ORACLE_MAX_TRIANGLES: usize = 200;

#[derive(Clone, Debug)]
pub struct CharacterizingMatrix {
    /// `#interfaces × 2·#triangles`, row-compressed.
    pub a: CsMat<f64>,
    /// Interface edge of each row.
    pub row_edges: Vec<usize>,
}

impl CharacterizingMatrix {
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        linalg::mat_vec(&self.a, x)
    }

    /// `Aᵀ y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.cols()];
        for (v, (i, j)) in self.a.iter() {
            x[j] += v * y[i];
        }
        x
    }

    /// `A Aᵀ`, square over the interfaces.
    pub fn normal_matrix(&self) -> CsMat<f64> {
        let at = self.a.transpose_view().to_csr();
        &self.a * &at
    }

    /// Writes `A` in Matrix Market coordinate format.
    pub fn write_matrix_market(&self, path: &Path) -> Result<()> {
        sprs::io::write_matrix_market(path, &self.a).map_err(|e| Error::io(path, e))
    }
}

pub fn characterizing_matrix(t: &Triangulation) -> CharacterizingMatrix {
    let rows = t.interface_edges().len();
    let mut tri = TriMat::with_capacity((rows, 2 * t.n_triangles()), 4 * rows);
    for (i, &e) in t.interface_edges().iter().enumerate() {
        let edge = &t.edges()[e];
        let (k, l) = (edge.left, edge.right.expect("interface edge has two sides"));
        let nu = edge.nu;
        tri.add_triplet(i, 2 * k, nu.x);
        tri.add_triplet(i, 2 * k + 1, nu.y);
        tri.add_triplet(i, 2 * l, -nu.x);
        tri.add_triplet(i, 2 * l + 1, -nu.y);
    }
    CharacterizingMatrix {
        a: tri.to_csr(),
        row_edges: t.interface_edges().to_vec(),
    }
}

/// Closest conservative field to `v0` in the Euclidean norm of the
/// numbered vector.
///
/// `A Aᵀ` is factorized directly; if that fails the minimum-norm
/// least-squares solution is used instead.
pub fn project_conservative(v0: &ElementField2, a: &CharacterizingMatrix) -> Result<ElementField2> {
    if 2 * v0.len() != a.cols() {
        return Err(Error::InvalidInput(format!(
            "field has {} elements but the matrix expects {}",
            v0.len(),
            a.cols() / 2
        )));
    }
    let x = numb(v0);
    if a.rows() == 0 {
        return Ok(v0.clone());
    }
    let rhs = a.apply(&x);
    let normal = a.normal_matrix();
    let y = match linalg::solve_spd(&normal, &rhs) {
        Ok(y) => y,
        Err(_) => linalg::solve_least_squares(&normal, &rhs)?,
    };
    let correction = a.apply_transpose(&y);
    let v: Vec<f64> = x.iter().zip(&correction).map(|(p, q)| p - q).collect();
    unnumb(&v)
}

/// Dense reference projection: `x − Q Qᵀ x` with `Q` the thin QR factor of
/// `Aᵀ`. Limited to [`ORACLE_MAX_TRIANGLES`] triangles.
pub fn projection_oracle(v0: &ElementField2, t: &Triangulation) -> Result<ElementField2> {
    let n = t.n_triangles();
    if n > ORACLE_MAX_TRIANGLES {
        return Err(Error::InvalidInput(format!(
            "dense projection oracle supports at most {ORACLE_MAX_TRIANGLES} triangles, got {n}"
        )));
    }
    let rows = t.interface_edges().len();
    if rows == 0 {
        return Ok(v0.clone());
    }
    let mut at = DMatrix::<f64>::zeros(2 * n, rows);
    for (i, &e) in t.interface_edges().iter().enumerate() {
        let edge = &t.edges()[e];
        let (k, l) = (edge.left, edge.right.unwrap());
        at[(2 * k, i)] = edge.nu.x;
        at[(2 * k + 1, i)] = edge.nu.y;
        at[(2 * l, i)] = -edge.nu.x;
        at[(2 * l + 1, i)] = -edge.nu.y;
    }
    let q = at.qr().q();
    let x = DVector::from_vec(numb(v0));
    let v = &x - &q * (q.transpose() * &x);
    unnumb(v.as_slice())
}
