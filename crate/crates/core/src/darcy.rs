//! Drained Darcy problem: pressure correction and primary velocity field.
//!
//! The correction `p0` vanishes on the boundary and solves the P1 weak form
//!
//! ```text
//! ∫ ∇p0·∇φ = −∫ (ρg ∇ζ + ∇P)·∇φ     for every interior hat function φ,
//! ```
//!
//! after which `v0 = −(∇p0 + ∇P + ρg ∇ζ) / a` element by element.

use serde::{Deserialize, Serialize};
use sprs::CsMat;

use crate::error::{Error, Result};
use crate::fields::{gradient_p1, hat_gradients, ElementField2, NodalScalarField};
use crate::linalg;
use crate::mesh::Triangulation;

/// Physical parameters of the fluid layer, in coherent SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    /// Flow resistance, kg/(m³·s).
    pub a: f64,
    /// Density, kg/m³.
    pub rho: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
    /// Depth of the flowing layer, m.
    pub depth: f64,
    /// Darcy-Weisbach friction coefficient.
    pub gamma: f64,
}

impl Default for FluidParams {
    fn default() -> Self {
        Self {
            a: 1.3071e3,
            rho: 100.0,
            g: 9.81,
            depth: 0.01,
            gamma: 0.03,
        }
    }
}

impl FluidParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [("a", self.a), ("rho", self.rho), ("g", self.g), ("depth", self.depth)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("fluid parameter {name} must be positive, got {v}")));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Config(format!(
                "fluid parameter gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// P1 stiffness matrix restricted to the interior vertices.
#[derive(Clone, Debug)]
pub struct PoissonSystem {
    pub matrix: CsMat<f64>,
    /// Mesh vertex of each unknown.
    pub interior: Vec<usize>,
    /// Unknown index of each mesh vertex, `None` on the boundary.
    pub unknown: Vec<Option<usize>>,
}

impl PoissonSystem {
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }
}

pub fn assemble_poisson(t: &Triangulation) -> PoissonSystem {
    let mut unknown = vec![None; t.n_vertices()];
    let mut interior = Vec::new();
    for v in 0..t.n_vertices() {
        if !t.is_boundary_vertex(v) {
            unknown[v] = Some(interior.len());
            interior.push(v);
        }
    }
    let mut triplets = Vec::with_capacity(9 * t.n_triangles());
    for (k, tri) in t.triangles().iter().enumerate() {
        let grads = hat_gradients(t, k);
        let area = t.area(k);
        for i in 0..3 {
            let Some(r) = unknown[tri[i]] else { continue };
            for j in 0..3 {
                let Some(c) = unknown[tri[j]] else { continue };
                triplets.push((r, c, area * grads[i].dot(&grads[j])));
            }
        }
    }
    PoissonSystem {
        matrix: linalg::assemble(interior.len(), &triplets),
        interior,
        unknown,
    }
}

/// Pressure correction, zero on every boundary vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PressureSolution {
    pub p0: NodalScalarField,
}

/// Solves for `p0` given nodal heights `zeta` and the nodal interpolant of
/// the applied pressure `pressure`.
pub fn solve_pressure(
    t: &Triangulation,
    zeta: &NodalScalarField,
    pressure: &NodalScalarField,
    params: &FluidParams,
) -> Result<PressureSolution> {
    for (name, f) in [("height", zeta), ("pressure", pressure)] {
        if f.len() != t.n_vertices() {
            return Err(Error::InvalidInput(format!(
                "{name} field has {} values for {} vertices",
                f.len(),
                t.n_vertices()
            )));
        }
    }
    let system = assemble_poisson(t);
    let mut p0 = NodalScalarField::zeros(t.n_vertices());
    if system.is_empty() {
        return Ok(PressureSolution { p0 });
    }

    let grad_zeta = gradient_p1(zeta, t);
    let grad_p = gradient_p1(pressure, t);
    let mut load = vec![0.0; system.len()];
    for (k, tri) in t.triangles().iter().enumerate() {
        let forcing = params.rho * params.g * grad_zeta.0[k] + grad_p.0[k];
        let grads = hat_gradients(t, k);
        for i in 0..3 {
            if let Some(r) = system.unknown[tri[i]] {
                load[r] -= t.area(k) * forcing.dot(&grads[i]);
            }
        }
    }
    let x = linalg::solve_spd(&system.matrix, &load)?;
    for (r, &v) in system.interior.iter().enumerate() {
        p0.0[v] = x[r];
    }
    Ok(PressureSolution { p0 })
}

/// `v0 = −(∇p0 + ∇P + ρg ∇ζ) / a` on every triangle.
pub fn primary_field(
    p: &PressureSolution,
    pressure: &NodalScalarField,
    zeta: &NodalScalarField,
    params: &FluidParams,
    t: &Triangulation,
) -> ElementField2 {
    let gp0 = gradient_p1(&p.p0, t);
    let gp = gradient_p1(pressure, t);
    let gz = gradient_p1(zeta, t);
    ElementField2(
        (0..t.n_triangles())
            .map(|k| -(gp0.0[k] + gp.0[k] + params.rho * params.g * gz.0[k]) / params.a)
            .collect(),
    )
}
