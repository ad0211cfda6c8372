use super::{lifted, Triangulation};
use crate::error::{Error, Result};
use crate::Vec3;

/// Per-element data of the triangulated surface `z = ζ(x, y)`.
#[derive(Clone, Debug)]
pub struct LiftedGeometry {
    /// Area of each lifted triangle.
    pub area3d: Vec<f64>,
    /// Upward unit normal of each lifted triangle.
    pub normal: Vec<Vec3>,
    /// Length of each lifted edge, indexed like [`Triangulation::edges`].
    pub edge_length: Vec<f64>,
    /// In-plane outward unit normal of each local edge of each triangle:
    /// orthogonal to the element normal and to the lifted edge.
    pub conormal: Vec<[Vec3; 3]>,
}

/// Lifts every triangle to the points `(x, y, ζ)` given one height per vertex.
pub fn lift_geometry(t: &Triangulation, heights: &[f64]) -> Result<LiftedGeometry> {
    if heights.len() != t.n_vertices() {
        return Err(Error::InvalidInput(format!(
            "expected {} vertex heights, got {}",
            t.n_vertices(),
            heights.len()
        )));
    }
    let point = |v: usize| lifted(t.vertices()[v], heights[v]);

    let edge_length = t
        .edges()
        .iter()
        .map(|e| (point(e.endpoints[1]) - point(e.endpoints[0])).norm())
        .collect();

    let n = t.n_triangles();
    let mut area3d = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut conormal = Vec::with_capacity(n);
    for tri in t.triangles() {
        let p = [point(tri[0]), point(tri[1]), point(tri[2])];
        let cross = (p[1] - p[0]).cross(&(p[2] - p[0]));
        let len = cross.norm();
        // counter-clockwise in the plane, so the z component is 2|K| > 0
        let nk = cross / len;
        area3d.push(0.5 * len);
        normal.push(nk);
        let mut cn = [Vec3::zeros(); 3];
        for (i, c) in cn.iter_mut().enumerate() {
            let edge = p[(i + 1) % 3] - p[i];
            *c = edge.cross(&nk).normalize();
        }
        conormal.push(cn);
    }
    Ok(LiftedGeometry {
        area3d,
        normal,
        edge_length,
        conormal,
    })
}

impl LiftedGeometry {
    /// Total lifted surface area.
    pub fn total_area(&self) -> f64 {
        self.area3d.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec2;

    fn reference_triangle() -> Triangulation {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        Triangulation::new(v, None).unwrap()
    }

    #[test]
    fn flat_surface_matches_plane() {
        let t = reference_triangle();
        let g = lift_geometry(&t, &[0.0; 3]).unwrap();
        assert_eq!(g.normal[0], Vec3::z());
        assert!((g.area3d[0] - t.area(0)).abs() < 1e-15);
        for (e, edge) in t.edges().iter().enumerate() {
            assert!((g.edge_length[e] - edge.length).abs() < 1e-15);
        }
        for i in 0..3 {
            let nu = t.local_nu(0, i);
            assert!((g.conormal[0][i] - Vec3::new(nu.x, nu.y, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn plane_z_equals_x() {
        let t = reference_triangle();
        let heights: Vec<f64> = t.vertices().iter().map(|p| p.x).collect();
        let g = lift_geometry(&t, &heights).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.normal[0] - Vec3::new(-s, 0.0, s)).norm() < 1e-15);
        assert!((g.area3d[0] - s).abs() < 1e-15);
    }

    #[test]
    fn wrong_height_count() {
        let t = reference_triangle();
        assert!(lift_geometry(&t, &[0.0; 2]).is_err());
    }
}
