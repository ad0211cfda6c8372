//! Lifting of the planar master field onto the tangent planes of the lifted
//! triangles, and the mean streamline length of each element.

use nalgebra::{Matrix2, Matrix3x2, Vector2};

use crate::error::{Error, Result};
use crate::fields::{ElementField2, ElementField3};
use crate::mesh::{LiftedGeometry, Triangulation};
use crate::{Vec2, Vec3};

/// Rotation taking the horizontal plane onto the plane with unit normal `n`,
/// restricted to horizontal vectors.
///
/// ```text
/// [ 1 − n1²/(1+n3)    −n1 n2/(1+n3) ]
/// [ −n1 n2/(1+n3)     1 − n2²/(1+n3) ]
/// [ −n1               −n2            ]
/// ```
pub fn lifting_matrix(n: &Vec3) -> Result<Matrix3x2<f64>> {
    if !(n.z > 0.0) {
        return Err(Error::Geometry(format!(
            "normal ({:.3e}, {:.3e}, {:.3e}) does not point upwards",
            n.x, n.y, n.z
        )));
    }
    if n.x == 0.0 && n.y == 0.0 {
        return Ok(Matrix3x2::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0));
    }
    let c = 1.0 / (1.0 + n.z);
    Ok(Matrix3x2::new(
        1.0 - n.x * n.x * c,
        -n.x * n.y * c,
        -n.x * n.y * c,
        1.0 - n.y * n.y * c,
        -n.x,
        -n.y,
    ))
}

/// `u_K = F_K v_K` on every element.
pub fn lift_field(v: &ElementField2, geo: &LiftedGeometry) -> Result<ElementField3> {
    if v.len() != geo.normal.len() {
        return Err(Error::InvalidInput(format!(
            "field has {} elements, geometry has {}",
            v.len(),
            geo.normal.len()
        )));
    }
    v.0.iter()
        .zip(&geo.normal)
        .map(|(vk, n)| Ok(lifting_matrix(n)? * vk))
        .collect::<Result<Vec<_>>>()
        .map(ElementField3)
}

/// Lifted flux jump `u_K·ν̂_{K|L} + u_L·ν̂_{L|K}` on each interface edge,
/// using the in-plane conormals of the lifted triangles.
pub fn lifted_conservation_residual(
    u: &ElementField3,
    geo: &LiftedGeometry,
    t: &Triangulation,
) -> Vec<f64> {
    t.interface_edges()
        .iter()
        .map(|&e| {
            let edge = &t.edges()[e];
            let (k, l) = (edge.left, edge.right.unwrap());
            let ik = t.local_index(k, e).unwrap();
            let il = t.local_index(l, e).unwrap();
            u.0[k].dot(&geo.conormal[k][ik]) + u.0[l].dot(&geo.conormal[l][il])
        })
        .collect()
}

/// Per-element streamline scale `α_K` and mean streamline length `d_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamlineData {
    pub alpha: Vec<f64>,
    pub d: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamlineEntry {
    pub alpha: f64,
    pub d: f64,
    /// Longest chord of the triangle parallel to the flow, in the plane.
    /// `None` when the element carries no flow.
    pub chord: Option<[Vec2; 2]>,
}

/// Longest chord of triangle `tri` parallel to `v_k`, with `α` such that
/// the chord is `α v_k`, and `d = α‖u_k‖ / 2`.
///
/// When `v_k` is parallel to an edge (normal component below
/// `1e−12 ‖v_k‖`) the chord is that edge, the longest one on ties.
/// Otherwise exactly one edge has a normal component of the opposite sign
/// to the other two; the chord joins the opposite vertex to that edge.
pub fn mean_streamline(tri: usize, v_k: &Vec2, u_k: &Vec3, t: &Triangulation) -> StreamlineEntry {
    let speed = v_k.norm();
    if speed == 0.0 {
        return StreamlineEntry { alpha: 0.0, d: 0.0, chord: None };
    }
    let corners = t.corners(tri);
    let e: [Vec2; 3] = std::array::from_fn(|i| t.edge_vector(tri, i));
    let f: [f64; 3] = std::array::from_fn(|i| t.local_nu(tri, i).dot(v_k));
    let tol = 1e-12 * speed;

    let parallel = (0..3)
        .filter(|&i| f[i].abs() <= tol)
        .max_by(|&i, &j| e[i].norm_squared().total_cmp(&e[j].norm_squared()));
    let (alpha, chord) = if let Some(i) = parallel {
        let alpha = e[i].norm() / speed;
        let (a, b) = (corners[i], corners[(i + 1) % 3]);
        let chord = if e[i].dot(v_k) >= 0.0 { [a, b] } else { [b, a] };
        (alpha, chord)
    } else {
        let positive = f.iter().filter(|&&x| x > 0.0).count();
        let want_positive = positive == 1;
        let s = (0..3).find(|&i| (f[i] > 0.0) == want_positive).unwrap();
        let sign = f[s].signum();
        let (e1, e3) = (e[s], e[(s + 2) % 3]);
        // e3 + β e1 − sign·α v = 0
        let m = Matrix2::new(e1.x, -sign * v_k.x, e1.y, -sign * v_k.y);
        let sol = m
            .lu()
            .solve(&Vector2::new(-e3.x, -e3.y))
            .unwrap_or_else(|| Vector2::new(0.0, e[s].norm() / speed));
        let alpha = sol[1];
        let start = corners[(s + 2) % 3];
        let end = start + e3 + sol[0] * e1;
        let chord = if sign > 0.0 { [start, end] } else { [end, start] };
        (alpha, chord)
    };
    StreamlineEntry {
        alpha,
        d: 0.5 * alpha * u_k.norm(),
        chord: Some(chord),
    }
}

/// [`mean_streamline`] over all elements.
pub fn streamline_data(v: &ElementField2, u: &ElementField3, t: &Triangulation) -> StreamlineData {
    let (alpha, d) = (0..t.n_triangles())
        .map(|k| {
            let s = mean_streamline(k, &v.0[k], &u.0[k], t);
            (s.alpha, s.d)
        })
        .unzip();
    StreamlineData { alpha, d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::lift_geometry;

    fn reference_triangle() -> Triangulation {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        Triangulation::new(v, None).unwrap()
    }

    #[test]
    fn horizontal_normal_gives_embedding() {
        let f = lifting_matrix(&Vec3::z()).unwrap();
        assert_eq!(f, Matrix3x2::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn tilt_about_y_axis() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = lifting_matrix(&Vec3::new(s, 0.0, s)).unwrap();
        // 1 − n1²/(1 + n3) = 1 − (1/2)/(1 + s) = s
        let want = Matrix3x2::new(s, 0.0, 0.0, 1.0, -s, 0.0);
        assert!((f - want).norm() < 1e-15);
    }

    #[test]
    fn downward_normal_is_rejected() {
        assert!(matches!(lifting_matrix(&Vec3::new(1.0, 0.0, 0.0)), Err(Error::Geometry(_))));
        assert!(lifting_matrix(&-Vec3::z()).is_err());
    }

    #[test]
    fn plane_z_equals_x() {
        let t = reference_triangle();
        let heights: Vec<f64> = t.vertices().iter().map(|p| p.x).collect();
        let geo = lift_geometry(&t, &heights).unwrap();
        let u = lift_field(&ElementField2(vec![Vec2::new(1.0, 0.0)]), &geo).unwrap();
        // n = (−1, 0, 1)/√2: the unit vector climbing the slope along x
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.0[0] - Vec3::new(s, 0.0, s)).norm() < 1e-15);
        assert!(u.0[0].dot(&geo.normal[0]).abs() < 1e-15);
    }

    #[test]
    fn flat_lift_is_embedding() {
        let t = reference_triangle();
        let geo = lift_geometry(&t, &[0.0; 3]).unwrap();
        let u = lift_field(&ElementField2(vec![Vec2::new(0.3, -2.0)]), &geo).unwrap();
        assert_eq!(u.0[0], Vec3::new(0.3, -2.0, 0.0));
    }

    #[test]
    fn streamline_parallel_to_bottom_edge() {
        let t = reference_triangle();
        let v = Vec2::new(1.0, 0.0);
        let s = mean_streamline(0, &v, &Vec3::new(1.0, 0.0, 0.0), &t);
        assert!((s.alpha - 1.0).abs() < 1e-12);
        assert!((s.d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn streamline_towards_hypotenuse() {
        let t = reference_triangle();
        let v = Vec2::new(1.0, 1.0);
        let s = mean_streamline(0, &v, &Vec3::new(1.0, 1.0, 0.0), &t);
        assert!((s.alpha - 0.5).abs() < 1e-12);
        assert!((s.d - std::f64::consts::SQRT_2 / 4.0).abs() < 1e-12);
        let [a, b] = s.chord.unwrap();
        assert!((a - Vec2::zeros()).norm() < 1e-15);
        assert!((b - Vec2::new(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn streamline_reversed_flow_has_same_length() {
        let t = reference_triangle();
        let v = Vec2::new(-1.0, -1.0);
        let s = mean_streamline(0, &v, &Vec3::new(-1.0, -1.0, 0.0), &t);
        assert!((s.alpha - 0.5).abs() < 1e-12);
        let [a, b] = s.chord.unwrap();
        assert!((a - Vec2::new(0.5, 0.5)).norm() < 1e-15 && b.norm() < 1e-15);
    }

    #[test]
    fn streamline_without_flow() {
        let t = reference_triangle();
        let s = mean_streamline(0, &Vec2::zeros(), &Vec3::zeros(), &t);
        assert_eq!((s.alpha, s.d, s.chord), (0.0, 0.0, None));
    }
}
