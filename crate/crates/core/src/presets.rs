//! Analytic surfaces, pressure wells and seeded sample-point placement on
//! the unit square.
//!
//! Random placement uses `ChaCha8Rng::seed_from_u64(seed)` (the `rand_chacha`
//! crate): the four corners, `m = ⌊√count⌋ − 1` evenly spaced points on each
//! side, and the remaining points thrown uniformly in the interior with a
//! minimum separation, shrunk by 10% whenever 1000 throws in a row fail.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Vec2;

/// `0.8 (sin(2πx) e^{−2πy} + y)`.
pub fn example1_surface(p: Vec2) -> f64 {
    0.8 * ((2.0 * PI * p.x).sin() * (-2.0 * PI * p.y).exp() + p.y)
}

/// `0.5 x sin(2πx) + 0.5 x + 0.075 sin(6πy)`.
pub fn example2_surface(p: Vec2) -> f64 {
    0.5 * p.x * (2.0 * PI * p.x).sin() + 0.5 * p.x + 0.075 * (6.0 * PI * p.y).sin()
}

/// Height of a named analytic surface: `example1`, `example2` or `flat`.
pub fn surface_preset(name: &str, p: Vec2) -> Result<f64> {
    match name {
        "example1" => Ok(example1_surface(p)),
        "example2" => Ok(example2_surface(p)),
        "flat" => Ok(0.0),
        other => Err(Error::Config(format!("unknown surface preset `{other}`"))),
    }
}

/// `strength · log((x − h)² + (y − k)²)`, the potential of a well at
/// `center`.
pub fn log_well(strength: f64, center: Vec2, p: Vec2) -> f64 {
    strength * (p - center).norm_squared().ln()
}

/// Rejects well centres inside the closed box `[lo, hi]`.
pub fn check_well_center(center: Vec2, lo: Vec2, hi: Vec2) -> Result<()> {
    let inside = (lo.x..=hi.x).contains(&center.x) && (lo.y..=hi.y).contains(&center.y);
    if inside {
        return Err(Error::Config(format!(
            "well center ({}, {}) lies inside the domain [{}, {}] x [{}, {}]",
            center.x, center.y, lo.x, hi.x, lo.y, hi.y
        )));
    }
    Ok(())
}

/// How interior sample points are placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    #[default]
    Random,
    Halton,
}

/// Points per side of the boundary ring, excluding corners.
fn ring_size(count: usize) -> usize {
    let m = ((count as f64).sqrt().floor() as usize).saturating_sub(1);
    m.min(count.saturating_sub(4) / 4)
}

fn boundary_ring(m: usize) -> Vec<Vec2> {
    let mut pts = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    for i in 1..=m {
        let s = i as f64 / (m + 1) as f64;
        pts.push(Vec2::new(s, 0.0));
        pts.push(Vec2::new(1.0, s));
        pts.push(Vec2::new(1.0 - s, 1.0));
        pts.push(Vec2::new(0.0, 1.0 - s));
    }
    pts
}

/// Minimum spacing target for `count` points in the unit square.
fn spacing(count: usize) -> f64 {
    1.0 / (count as f64).sqrt()
}

/// `count` seeded sample positions whose convex hull is the unit square.
pub fn random_points(count: usize, seed: u64) -> Vec<Vec2> {
    let count = count.max(4);
    let mut pts = boundary_ring(ring_size(count));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_sep = 0.6 * spacing(count);
    let mut failures = 0;
    while pts.len() < count {
        let p = Vec2::new(rng.gen::<f64>(), rng.gen::<f64>());
        let margin = p.x.min(p.y).min(1.0 - p.x).min(1.0 - p.y);
        let clear = margin >= 0.5 * min_sep && pts.iter().all(|q| (p - q).norm() >= min_sep);
        if clear {
            pts.push(p);
            failures = 0;
        } else {
            failures += 1;
            if failures == 1000 {
                min_sep *= 0.9;
                failures = 0;
            }
        }
    }
    pts
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Boundary ring plus a Halton (2, 3) sequence in the interior, skipping
/// points too close to the boundary.
pub fn halton_points(count: usize) -> Vec<Vec2> {
    let count = count.max(4);
    let mut pts = boundary_ring(ring_size(count));
    let margin = 0.3 * spacing(count);
    let mut i = 1;
    while pts.len() < count {
        let p = Vec2::new(radical_inverse(i, 2), radical_inverse(i, 3));
        i += 1;
        if p.x.min(p.y).min(1.0 - p.x).min(1.0 - p.y) >= margin {
            pts.push(p);
        }
    }
    pts
}

pub fn place_points(count: usize, seed: u64, placement: Placement) -> Vec<Vec2> {
    match placement {
        Placement::Random => random_points(count, seed),
        Placement::Halton => halton_points(count),
    }
}

/// Delaunay element count of a placement of `count` points: all ring points
/// lie on the hull, so `2·count − 2 − #ring`.
pub fn expected_elements(count: usize) -> usize {
    let count = count.max(4);
    let hull = 4 + 4 * ring_size(count);
    2 * count - 2 - hull
}

/// Smallest point count whose Delaunay mesh has at least `target` elements.
pub fn count_for_elements(target: usize) -> usize {
    (4..).find(|&c| expected_elements(c) >= target).unwrap()
}
