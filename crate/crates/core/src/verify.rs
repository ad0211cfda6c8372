//! Invariant checks on small built-in meshes, run by `fissure verify`.

use crate::config::{ExperimentConfig, MeshConfig, ReferenceExample, SurfaceConfig};
use crate::darcy::{assemble_poisson, primary_field, solve_pressure, FluidParams};
use crate::error::Result;
use crate::fields::{conservation_residual, ElementField2, NodalScalarField};
use crate::lifting::{lift_field, mean_streamline};
use crate::mesh::{lift_geometry, Triangulation};
use crate::pipeline::simulate;
use crate::projection::{characterizing_matrix, project_conservative};
use crate::transport::{
    expected_exit_times, expected_exit_times_quadrature, generator, transition,
};
use crate::{Vec2, Vec3};

/// Outcome of one invariant check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn unit_square() -> Result<Triangulation> {
    let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    Triangulation::delaunay(v)
}

fn square_with_center() -> Result<Triangulation> {
    let v = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(0.5, 0.5),
    ];
    Triangulation::new(v, Some(&[[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]]))
}

fn small_config(surface: SurfaceConfig) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::reference_example(ReferenceExample::Ridge, false, 7);
    cfg.surface = surface;
    cfg.mesh = MeshConfig { target_elements: 80, ..MeshConfig::default() };
    cfg
}

/// Runs every check; an error means a check could not be evaluated at all.
pub fn run_invariant_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let sq = unit_square()?;
    out.push(check(
        "unit square has one interface and four boundary edges",
        sq.interface_edges().len() == 1 && sq.boundary_edges().len() == 4,
        format!("{} interface, {} boundary", sq.interface_edges().len(), sq.boundary_edges().len()),
    ));
    let a = characterizing_matrix(&sq);
    let s = 0.5f64.sqrt();
    let row: Vec<f64> = a.a.outer_view(0).unwrap().iter().map(|(_, &x)| x.abs()).collect();
    out.push(check(
        "characterizing matrix row holds four unit-normal entries",
        row.len() == 4 && row.iter().all(|x| (x - s).abs() < 1e-15),
        format!("{row:?}"),
    ));

    let sc = square_with_center()?;
    let sys = assemble_poisson(&sc);
    let k = sys.matrix.get(0, 0).copied().unwrap_or(f64::NAN);
    out.push(check(
        "stiffness of the centre vertex is 4",
        sys.len() == 1 && (k - 4.0).abs() < 1e-14,
        format!("{k}"),
    ));

    // affine surface without pressure: no correction, nothing to project
    let params = FluidParams::default();
    let zeta = NodalScalarField::interpolate(&sc, |p| 0.3 * p.x - 0.7 * p.y);
    let zero = NodalScalarField::zeros(sc.n_vertices());
    let sol = solve_pressure(&sc, &zeta, &zero, &params)?;
    let v0 = primary_field(&sol, &zero, &zeta, &params, &sc);
    let v = project_conservative(&v0, &characterizing_matrix(&sc))?;
    let p0_max = sol.p0.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let moved = v.0.iter().zip(&v0.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    out.push(check(
        "planar surface needs no pressure correction or projection",
        p0_max <= 1e-12 && moved <= 1e-12 * v0.max_norm(),
        format!("max |p0| {p0_max:e}, projection moved {moved:e}"),
    ));

    let res = simulate(&small_config(SurfaceConfig::Example1))?;
    let vmax = res.v.max_norm();
    let resid = conservation_residual(&res.v, &res.t).iter().fold(0.0f64, |m, r| m.max(r.abs()));
    out.push(check(
        "projected field is conservative",
        resid <= 1e-10 * vmax,
        format!("max residual {resid:e}, max speed {vmax:e}"),
    ));
    let again = project_conservative(&res.v, &res.a)?;
    let drift = again.0.iter().zip(&res.v.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    out.push(check("projection is idempotent", drift <= 1e-10 * vmax, format!("{drift:e}")));

    let (mut iso, mut tangent) = (0.0f64, 0.0f64);
    for k in 0..res.t.n_triangles() {
        iso = iso.max((res.u.0[k].norm() - res.v.0[k].norm()).abs());
        tangent = tangent.max(res.u.0[k].dot(&res.geo.normal[k]).abs());
    }
    out.push(check(
        "lifting preserves speed and stays tangent",
        iso <= 1e-12 * vmax.max(1.0) && tangent <= 1e-12 * vmax.max(1.0),
        format!("speed error {iso:e}, normal component {tangent:e}"),
    ));

    let t_ref = res.report.mean_exit_time;
    let mut worst_row = 0.0f64;
    for f in [0.01, 0.1, 1.0, 10.0] {
        let tm = transition(&res.generator, f * t_ref)?;
        for r in 0..tm.nrows() {
            worst_row = worst_row.max((tm.row(r).sum() - 1.0).abs());
        }
    }
    out.push(check("transition rows sum to one", worst_row <= 1e-8, format!("{worst_row:e}")));

    let quad = expected_exit_times_quadrature(&res.generator)?;
    let rel = res
        .exit_times
        .psi
        .iter()
        .zip(&quad)
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max);
    out.push(check("exit times agree with quadrature", rel <= 1e-6, format!("max relative {rel:e}")));
    out.push(check(
        "flow graph is a forest",
        res.forest.is_forest,
        format!("cycle {:?}", res.forest.cycle),
    ));

    let tri = Triangulation::new(vec![Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)], None)?;
    let geo = lift_geometry(&tri, &[0.0; 3])?;
    let one = ElementField2(vec![Vec2::new(1.0, 0.0)]);
    let psi = expected_exit_times(&generator(&one, &geo, &tri)?)?.psi[0];
    out.push(check("single triangle drains in 0.5", (psi - 0.5).abs() <= 1e-12, format!("{psi}")));

    let cases = [(Vec2::new(1.0, 0.0), 1.0, 0.5), (Vec2::new(1.0, 1.0), 0.5, 2f64.sqrt() / 4.0), (Vec2::zeros(), 0.0, 0.0)];
    let mut worst = 0.0f64;
    for (vk, alpha, d) in cases {
        let u = lift_field(&ElementField2(vec![vk]), &geo)?;
        let s = mean_streamline(0, &vk, &u.0[0], &tri);
        worst = worst.max((s.alpha - alpha).abs()).max((s.d - d).abs());
    }
    out.push(check("streamline reference triangles", worst <= 1e-12, format!("{worst:e}")));

    let flat = simulate(&small_config(SurfaceConfig::Flat))?;
    out.push(check(
        "flat surface carries no flow",
        flat.v.max_norm() == 0.0 && flat.report.mean_exit_time.is_infinite(),
        format!("max speed {}, mean exit time {}", flat.v.max_norm(), flat.report.mean_exit_time),
    ));

    let plane = simulate(&small_config(SurfaceConfig::Plane { slope: [0.2, -0.5] }))?;
    let scale = plane.params.rho
        * plane.params.depth
        * plane.u.max_norm().powi(2)
        * plane.geo.total_area();
    out.push(check(
        "planar surface has no curvature dissipation",
        plane.report.u_curv.abs() <= 1e-10 * scale,
        format!("{:e}", plane.report.u_curv),
    ));
    let m = plane.report.m_u;
    let u0: Vec3 = plane.u.0[0];
    out.push(check(
        "preferential direction of a uniform lifted field",
        (m - u0).norm() <= 1e-12 * u0.norm(),
        format!("{m:?} vs {u0:?}"),
    ));

    Ok(out)
}
