use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Generator;
use crate::error::{Error, Result};

/// Sample statistics of simulated exit times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_particles: usize,
    /// Particles still inside at the horizon, counted at the horizon time.
    pub censored: usize,
}

/// Simulates `n_particles` walks of the chain from `start`.
///
/// Particle `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
/// result does not depend on scheduling. Holding times are exponential with
/// rate `−Q_KK`; the next state is drawn from the jump chain.
pub fn monte_carlo_exit(
    q: &Generator,
    start: usize,
    n_particles: usize,
    seed: u64,
    horizon: f64,
) -> Result<ExitEstimate> {
    if n_particles == 0 {
        return Err(Error::InvalidInput("at least one particle is required".into()));
    }
    if start >= q.n_states() {
        return Err(Error::InvalidInput(format!("start state {start} out of range")));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let samples: Vec<(f64, bool)> = (0..n_particles)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            walk(q, start, horizon, &mut rng)
        })
        .collect();

    let n = n_particles as f64;
    let mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let var = if n_particles > 1 {
        samples.iter().map(|s| (s.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(ExitEstimate {
        mean,
        std_error: (var / n).sqrt(),
        n_particles,
        censored: samples.iter().filter(|s| s.1).count(),
    })
}

/// One particle: exit time and whether it was censored.
fn walk(q: &Generator, start: usize, horizon: f64, rng: &mut ChaCha8Rng) -> (f64, bool) {
    let mut state = start;
    let mut time = 0.0;
    while state < q.n_transient() {
        let rate = q.exit_rates()[state];
        if rate == 0.0 {
            return (horizon, true);
        }
        let u: f64 = rng.gen();
        time += -(1.0 - u).ln() / rate;
        if time >= horizon {
            return (horizon, true);
        }
        let target = rng.gen::<f64>() * rate;
        let row = q.out_rates(state);
        let mut acc = 0.0;
        let mut next = row[row.len() - 1].0;
        for &(l, r) in row {
            acc += r;
            if target < acc {
                next = l;
                break;
            }
        }
        state = next;
    }
    (time, false)
}
