//! Both reference experiments, with and without the well, over five seeds.
//!
//! ```text
//! cargo run --release --example reference_tables
//! ```

use fissure::config::{ExperimentConfig, ReferenceExample};
use fissure::pipeline::simulate;

fn main() -> fissure::Result<()> {
    for which in [ReferenceExample::Ridge, ReferenceExample::Ripple] {
        for well in [false, true] {
            for seed in 1..=5 {
                let cfg = ExperimentConfig::reference_example(which, well, seed);
                let res = simulate(&cfg)?;
                let r = res.report.to_cgs();
                println!(
                    "{:<17} seed {seed}  {:>5} el  m_u ({:+.4}, {:+.4}, {:+.4}) cm/s  \
                     curv {:.4e}  fric {:.4e}  grav {:+.4e} erg/s  exit {:.4} s  forest {}",
                    cfg.name,
                    res.t.n_triangles(),
                    r.m_u.x,
                    r.m_u.y,
                    r.m_u.z,
                    r.u_curv,
                    r.u_fric,
                    r.u_grav,
                    r.mean_exit_time,
                    res.forest.is_forest,
                );
            }
        }
    }
    Ok(())
}
