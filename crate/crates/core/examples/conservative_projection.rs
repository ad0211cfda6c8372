//! Projection of a raw element field onto the conservative space, checked
//! against the dense constrained least-squares oracle.
//!
//! ```text
//! cargo run --example conservative_projection
//! ```

use fissure::fields::{conservation_residual, ElementField2};
use fissure::mesh::Triangulation;
use fissure::presets::random_points;
use fissure::projection::{characterizing_matrix, project_conservative, projection_oracle};
use fissure::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn main() -> fissure::Result<()> {
    let t = Triangulation::delaunay(random_points(60, 5))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let v0 = ElementField2(
        (0..t.n_triangles())
            .map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    let a = characterizing_matrix(&t);
    println!("A is {} x {} with {} nonzeros", a.rows(), a.cols(), a.a.nnz());

    let v = project_conservative(&v0, &a)?;
    let oracle = projection_oracle(&v0, &t)?;
    let gap = v.0.iter().zip(&oracle.0).map(|(x, y)| (x - y).amax()).fold(0.0, f64::max);
    println!("interface residual before {:.3e}, after {:.3e}", max_abs(&conservation_residual(&v0, &t)), max_abs(&conservation_residual(&v, &t)));
    println!("largest component gap to the oracle {gap:.3e}");
    let norm = |f: &ElementField2| f.0.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt();
    println!("norm {:.4} -> {:.4}", norm(&v0), norm(&v));
    Ok(())
}
