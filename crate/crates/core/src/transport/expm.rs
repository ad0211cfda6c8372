//! `exp(Q t)` by uniformization: with `Λ ≥ max −Q_KK` and the stochastic
//! matrix `P = I + Q/Λ`, `exp(Q t) = Σ_k e^{−Λt} (Λt)^k / k! · P^k`.

use nalgebra::DMatrix;

use super::Generator;
use crate::error::{Error, Result};

/// Poisson tail mass left out of each truncated series.
const TRUNCATION: f64 = 1e-14;

/// Largest `Λ·dt` handled in one step of the vector action.
const ACTION_STEP: f64 = 20.0;

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("time must be finite and non-negative, got {t}")))
    }
}

/// Poisson weights `e^{−λ} λ^k / k!` up to the truncation tolerance.
fn poisson_weights(lambda: f64) -> Vec<f64> {
    let mut w = vec![(-lambda).exp()];
    let mut total = w[0];
    let mut k = 0;
    // past the mode the terms decrease, so stopping on the tail is safe
    while 1.0 - total > TRUNCATION && (k as f64) < lambda + 40.0 * lambda.sqrt() + 40.0 {
        k += 1;
        let next = w[k - 1] * lambda / k as f64;
        w.push(next);
        total += next;
    }
    // renormalize so the truncated series stays stochastic
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// `y = P x` for the uniformized chain.
fn apply_p(q: &Generator, lambda: f64, x: &[f64], y: &mut [f64]) {
    for (k, yk) in y.iter_mut().enumerate() {
        let mut s = (1.0 - q.exit_rates()[k] / lambda) * x[k];
        for &(l, r) in q.out_rates(k) {
            s += r / lambda * x[l];
        }
        *yk = s;
    }
}

/// Dense transition matrix `T(t) = exp(Q t)`.
///
/// Scaling and squaring: the series is summed for `t / 2^s` with
/// `Λt / 2^s ≤ 1`, then squared `s` times. Entries are clamped at zero.
pub fn transition(q: &Generator, t: f64) -> Result<DMatrix<f64>> {
    check_time(t)?;
    let n = q.n_states();
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let squarings = (lambda * t).log2().ceil().max(0.0) as u32;
    let tau = lambda * t / 2f64.powi(squarings as i32);
    let weights = poisson_weights(tau);

    let mut result = DMatrix::<f64>::zeros(n, n);
    // P^k applied column by column, starting from the identity
    let mut col = vec![0.0; n];
    let mut next = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|c| *c = 0.0);
        col[j] = 1.0;
        for (k, &w) in weights.iter().enumerate() {
            if k > 0 {
                apply_p(q, lambda, &col, &mut next);
                std::mem::swap(&mut col, &mut next);
            }
            for i in 0..n {
                result[(i, j)] += w * col[i];
            }
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(result)
}

/// `exp(Q t) x` without forming the matrix.
pub fn expm_action(q: &Generator, t: f64, x: &[f64]) -> Result<Vec<f64>> {
    check_time(t)?;
    if x.len() != q.n_states() {
        return Err(Error::InvalidInput(format!(
            "vector has {} entries for {} states",
            x.len(),
            q.n_states()
        )));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(x.to_vec());
    }
    let steps = (lambda * t / ACTION_STEP).ceil().max(1.0) as usize;
    let weights = poisson_weights(lambda * t / steps as f64);
    let mut v = x.to_vec();
    let mut term = vec![0.0; v.len()];
    let mut next = vec![0.0; v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&v);
        let mut acc: Vec<f64> = term.iter().map(|a| weights[0] * a).collect();
        for &w in &weights[1..] {
            apply_p(q, lambda, &term, &mut next);
            std::mem::swap(&mut term, &mut next);
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += w * b;
            }
        }
        v = acc;
    }
    Ok(v)
}

/// Mass distribution after time `t` from the initial distribution `c0`:
/// `c(t)ᵀ = c0ᵀ exp(Q t)`.
pub fn evolve_mass(q: &Generator, t: f64, c0: &[f64]) -> Result<Vec<f64>> {
    check_time(t)?;
    let n = q.n_states();
    if c0.len() != n {
        return Err(Error::InvalidInput(format!("mass vector has {} entries for {n} states", c0.len())));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(c0.to_vec());
    }
    let steps = (lambda * t / ACTION_STEP).ceil().max(1.0) as usize;
    let weights = poisson_weights(lambda * t / steps as f64);
    let apply_pt = |x: &[f64], y: &mut [f64]| {
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = (1.0 - q.exit_rates()[k] / lambda) * x[k];
        }
        for (k, &xk) in x.iter().enumerate() {
            for &(l, r) in q.out_rates(k) {
                y[l] += r / lambda * xk;
            }
        }
    };
    let mut c = c0.to_vec();
    let mut term = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        term.copy_from_slice(&c);
        let mut acc: Vec<f64> = term.iter().map(|a| weights[0] * a).collect();
        for &w in &weights[1..] {
            apply_pt(&term, &mut next);
            std::mem::swap(&mut term, &mut next);
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += w * b;
            }
        }
        c = acc;
    }
    Ok(c)
}
