//! Lifting planar element velocities into the tangent planes of a tilted
//! surface, and the mean streamline of each element.
//!
//! ```text
//! cargo run --example lift_and_streamlines
//! ```

use fissure::fields::ElementField2;
use fissure::lifting::{lift_field, lifting_matrix, mean_streamline};
use fissure::mesh::{lift_geometry, Triangulation};
use fissure::{Vec2, Vec3};

fn main() -> fissure::Result<()> {
    let s = 0.5f64.sqrt();
    println!("lifting matrix for a 45 degree tilt:\n{}", lifting_matrix(&Vec3::new(s, 0.0, s))?);

    let t = Triangulation::new(vec![Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)], None)?;
    for (label, heights) in [("flat", [0.0, 0.0, 0.0]), ("plane z = x", [0.0, 1.0, 0.0])] {
        let geo = lift_geometry(&t, &heights)?;
        for v in [Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::zeros()] {
            let u = lift_field(&ElementField2(vec![v]), &geo)?.0[0];
            let sl = mean_streamline(0, &v, &u, &t);
            println!(
                "{label:>12}  v ({:.1}, {:.1})  u ({:+.4}, {:+.4}, {:+.4})  alpha {:.4}  d {:.4}  chord {:?}",
                v.x, v.y, u.x, u.y, u.z, sl.alpha, sl.d, sl.chord.map(|c| [(c[0].x, c[0].y), (c[1].x, c[1].y)])
            );
        }
    }
    Ok(())
}
