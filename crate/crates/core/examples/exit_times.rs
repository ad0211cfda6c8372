//! Solute transport as a Markov chain: expected exit times, survival curves
//! and a Monte Carlo cross-check on the reference ridge surface.
//!
//! ```text
//! cargo run --release --example exit_times
//! ```

use fissure::config::{ExperimentConfig, ReferenceExample};
use fissure::pipeline::simulate;
use fissure::transport::{evolve_mass, exit_time_distribution, expected_exit_times_quadrature, monte_carlo_exit};

fn main() -> fissure::Result<()> {
    let res = simulate(&ExperimentConfig::reference_example(ReferenceExample::Ridge, false, 1))?;
    let q = &res.generator;
    let psi = &res.exit_times.psi;
    println!("{} triangles, {} absorbing edges, flow graph is a forest: {}", q.n_transient(), q.n_states() - q.n_transient(), res.forest.is_forest);

    let quad = expected_exit_times_quadrature(q)?;
    let rel = psi.iter().zip(&quad).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max);
    println!("mean exit time {:.4} s, quadrature agrees to {rel:.2e}", res.exit_times.mean());

    let k = (0..psi.len()).max_by(|&a, &b| psi[a].total_cmp(&psi[b])).unwrap();
    let est = monte_carlo_exit(q, k, 10_000, 42, 1e6)?;
    println!("slowest triangle {k}: psi {:.4} s, Monte Carlo {:.4} +- {:.4} s", psi[k], est.mean, est.std_error);

    let t_ref = res.exit_times.mean();
    let mut mass = vec![0.0; q.n_states()];
    let area: f64 = res.geo.total_area();
    for (m, a) in mass.iter_mut().zip(&res.geo.area3d) {
        *m = a / area;
    }
    for f in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let phi = exit_time_distribution(q, f * t_ref)?;
        let c = evolve_mass(q, f * t_ref, &mass)?;
        let inside: f64 = c[..q.n_transient()].iter().sum();
        println!("t = {:.3} s: survival of triangle {k} {:.4}, mass still inside {:.4}", f * t_ref, phi[k], inside);
    }
    Ok(())
}
