//! Pressure correction and primary velocity on a ridge surface with and
//! without a distant well.
//!
//! ```text
//! cargo run --example darcy_pressure
//! ```

use fissure::darcy::{primary_field, solve_pressure, FluidParams};
use fissure::fields::NodalScalarField;
use fissure::mesh::Triangulation;
use fissure::presets::{example1_surface, log_well, random_points};
use fissure::Vec2;

fn main() -> fissure::Result<()> {
    let t = Triangulation::delaunay(random_points(188, 1))?;
    let params = FluidParams::default();
    let zeta = NodalScalarField::interpolate(&t, example1_surface);
    let well = Vec2::new(110.0, -10.0);

    for (label, pressure) in [
        ("gravity only", NodalScalarField::zeros(t.n_vertices())),
        ("with well", NodalScalarField::interpolate(&t, |p| log_well(4000.0, well, p))),
    ] {
        let sol = solve_pressure(&t, &zeta, &pressure, &params)?;
        let v0 = primary_field(&sol, &pressure, &zeta, &params, &t);
        let p0_max = sol.p0.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mean = v0.0.iter().enumerate().fold(Vec2::zeros(), |acc, (k, v)| acc + v * t.area(k));
        println!("{label:>12}: max |p0| {p0_max:.3e} Pa, max speed {:.4} m/s, mean v0 ({:.4}, {:.4}) m/s", v0.max_norm(), mean.x, mean.y);
    }
    Ok(())
}
