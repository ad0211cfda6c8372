#![allow(dead_code)]

use fissure::fields::{ElementField2, NodalScalarField};
use fissure::mesh::{lift_geometry, LiftedGeometry, Triangulation};
use fissure::presets::random_points;
use fissure::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Delaunay mesh of `count` seeded points on the unit square.
pub fn mesh(count: usize, seed: u64) -> Triangulation {
    Triangulation::delaunay(random_points(count, seed)).unwrap()
}

/// A smooth non-planar height function with seeded coefficients.
pub fn wavy(seed: u64) -> impl Fn(Vec2) -> f64 {
    let mut r = rng(seed ^ 0x5eed);
    let (a, b, c, d) = (r.gen_range(-1.0..1.0), r.gen_range(1.0..4.0), r.gen_range(-1.0..1.0), r.gen_range(-0.5..0.5));
    move |p: Vec2| a * (b * p.x).sin() + c * p.y * p.y + d * p.x * p.y
}

pub fn surface(t: &Triangulation, seed: u64) -> (NodalScalarField, LiftedGeometry) {
    let zeta = NodalScalarField::interpolate(t, wavy(seed));
    let geo = lift_geometry(t, zeta.values()).unwrap();
    (zeta, geo)
}

pub fn random_field(n: usize, r: &mut ChaCha8Rng) -> ElementField2 {
    ElementField2((0..n).map(|_| Vec2::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect())
}

pub fn max_abs(x: impl IntoIterator<Item = f64>) -> f64 {
    x.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Conservative fields spanning part of the kernel: the two constants and
/// the rotated gradient of every interior hat function.
pub fn conservative_basis(t: &Triangulation) -> Vec<ElementField2> {
    let n = t.n_triangles();
    let mut out = vec![
        ElementField2::constant(n, Vec2::new(1.0, 0.0)),
        ElementField2::constant(n, Vec2::new(0.0, 1.0)),
    ];
    for v in (0..t.n_vertices()).filter(|&v| !t.is_boundary_vertex(v)) {
        let mut hat = NodalScalarField::zeros(t.n_vertices());
        hat.0[v] = 1.0;
        let g = fissure::fields::gradient_p1(&hat, t);
        out.push(ElementField2(g.0.iter().map(|x| Vec2::new(x.y, -x.x)).collect()));
    }
    out
}
