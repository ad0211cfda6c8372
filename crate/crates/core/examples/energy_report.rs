//! Preferential direction and energy rates of one run, written as the
//! report CSV.
//!
//! ```text
//! cargo run --release --example energy_report
//! ```

use fissure::config::{ExperimentConfig, ReferenceExample};
use fissure::output::report_csv;
use fissure::pipeline::simulate;

fn main() -> fissure::Result<()> {
    let mut rows = Vec::new();
    for well in [false, true] {
        let cfg = ExperimentConfig::reference_example(ReferenceExample::Ripple, well, 2);
        let res = simulate(&cfg)?;
        let q = res.discharge();
        println!("{}: total discharge {:.4e} m^3/s, {} triangles", cfg.name, q.iter().sum::<f64>(), res.t.n_triangles());
        rows.push((cfg.name, res.report));
    }
    let refs: Vec<(&str, _)> = rows.iter().map(|(n, r)| (n.as_str(), r)).collect();
    print!("{}", report_csv(&refs));
    Ok(())
}
