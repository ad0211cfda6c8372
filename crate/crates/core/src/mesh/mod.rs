//! Planar triangulation of the sample domain and its lifted counterpart.
//!
//! Triangles are stored counter-clockwise. Local edge `i` of a triangle joins
//! its vertices `i` and `(i + 1) % 3`. Every edge has an owner, the lowest
//! indexed triangle touching it, and stores the unit normal pointing out of
//! the owner; the other side sees the negated vector.
//!
//! Boundary edges double as absorbing states of the transport chain. The
//! extended state space numbers all triangles first, then boundary edges in
//! the order of [`Triangulation::boundary_edges`].

mod delaunay;
pub mod io;
mod lifted;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::{Vec2, Vec3};

pub use lifted::{lift_geometry, LiftedGeometry};

/// Minimum interior angle accepted in a triangle, in degrees.
pub const MIN_ANGLE_DEG: f64 = 0.5;
/// Minimum triangle area relative to the bounding-box area of the vertices.
pub const MIN_RELATIVE_AREA: f64 = 1e-12;

/// A surveyed point of the fissure: horizontal position and surface height.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub position: Vec2,
    pub height: f64,
}

impl SamplePoint {
    pub fn new(x: f64, y: f64, height: f64) -> Self {
        Self {
            position: Vec2::new(x, y),
            height,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Interface,
    Boundary,
}

/// What lies across an edge of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Triangle(usize),
    /// Boundary edge-element, carrying its index in the extended state space.
    Boundary(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub endpoints: [usize; 2],
    pub length: f64,
    pub kind: EdgeKind,
    /// Owning triangle (lowest index among the adjacent ones).
    pub left: usize,
    /// The other triangle, for interface edges.
    pub right: Option<usize>,
    /// Unit normal pointing out of `left`.
    pub nu: Vec2,
}

/// Conforming triangulation of the planar sample domain.
#[derive(Clone, Debug)]
pub struct Triangulation {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    /// Global edge index of each local edge.
    tri_edges: Vec<[usize; 3]>,
    adjacency: Vec<[(usize, Neighbor); 3]>,
    interface_edges: Vec<usize>,
    boundary_edges: Vec<usize>,
    /// Extended-state index of each edge (boundary edges only).
    boundary_slot: Vec<Option<usize>>,
    boundary_vertex: Vec<bool>,
    areas: Vec<f64>,
}

fn signed_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * ((b - a).perp(&(c - a)))
}

/// Outward unit normal of the counter-clockwise edge `a -> b`.
fn outward_normal(a: Vec2, b: Vec2) -> Vec2 {
    let d = b - a;
    Vec2::new(d.y, -d.x) / d.norm()
}

/// Builds the triangulation of `points`.
///
/// Without `connectivity` the Delaunay triangulation of the point set is
/// used, which covers the convex hull. Supplied triangles are re-oriented
/// counter-clockwise and checked for conformity.
pub fn build_triangulation(
    points: &[SamplePoint],
    connectivity: Option<&[[usize; 3]]>,
) -> Result<Triangulation> {
    let positions: Vec<Vec2> = points.iter().map(|p| p.position).collect();
    Triangulation::new(positions, connectivity)
}

/// Splits the edges into (interface, boundary) index lists.
pub fn classify_edges(t: &Triangulation) -> (Vec<usize>, Vec<usize>) {
    (t.interface_edges.clone(), t.boundary_edges.clone())
}

impl Triangulation {
    pub fn new(vertices: Vec<Vec2>, connectivity: Option<&[[usize; 3]]>) -> Result<Self> {
        check_points(&vertices)?;
        let triangles = match connectivity {
            Some(tris) => orient(&vertices, tris)?,
            None => delaunay::triangulate(&vertices)?,
        };
        Self::assemble(vertices, triangles)
    }

    /// Delaunay triangulation of bare positions.
    pub fn delaunay(vertices: Vec<Vec2>) -> Result<Self> {
        Self::new(vertices, None)
    }

    fn assemble(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Mesh("triangulation has no triangles".into()));
        }
        check_degeneracy(&vertices, &triangles)?;

        let mut edges: Vec<Edge> = Vec::with_capacity(triangles.len() * 3 / 2 + 3);
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        // Directed copies seen so far, to catch overlapping or folded triangles.
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tri_edges = vec![[0usize; 3]; triangles.len()];

        for (k, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                if let Some(other) = directed.insert((a, b), k) {
                    return Err(Error::Mesh(format!(
                        "edge ({a}, {b}) is traversed in the same direction by triangles {other} and {k}; \
                         triangles overlap"
                    )));
                }
                let key = (a.min(b), a.max(b));
                match lookup.get(&key) {
                    Some(&e) => {
                        let edge = &mut edges[e];
                        if edge.right.is_some() {
                            return Err(Error::Mesh(format!(
                                "edge ({}, {}) is shared by more than two triangles",
                                key.0, key.1
                            )));
                        }
                        edge.right = Some(k);
                        edge.kind = EdgeKind::Interface;
                        tri_edges[k][i] = e;
                    }
                    None => {
                        let (pa, pb) = (vertices[a], vertices[b]);
                        lookup.insert(key, edges.len());
                        tri_edges[k][i] = edges.len();
                        edges.push(Edge {
                            endpoints: [a, b],
                            length: (pb - pa).norm(),
                            kind: EdgeKind::Boundary,
                            left: k,
                            right: None,
                            nu: outward_normal(pa, pb),
                        });
                    }
                }
            }
        }

        let interface_edges: Vec<usize> = (0..edges.len())
            .filter(|&e| edges[e].kind == EdgeKind::Interface)
            .collect();
        let boundary_edges: Vec<usize> = (0..edges.len())
            .filter(|&e| edges[e].kind == EdgeKind::Boundary)
            .collect();

        let mut boundary_slot = vec![None; edges.len()];
        let mut boundary_vertex = vec![false; vertices.len()];
        for (j, &e) in boundary_edges.iter().enumerate() {
            boundary_slot[e] = Some(triangles.len() + j);
            for &v in &edges[e].endpoints {
                boundary_vertex[v] = true;
            }
        }
        check_hanging_vertices(&vertices, &edges, &boundary_edges)?;

        let adjacency = (0..triangles.len())
            .map(|k| {
                let mut adj = [(0, Neighbor::Triangle(0)); 3];
                for (i, slot) in adj.iter_mut().enumerate() {
                    let e = tri_edges[k][i];
                    let edge = &edges[e];
                    let neighbor = match edge.kind {
                        EdgeKind::Boundary => Neighbor::Boundary(boundary_slot[e].unwrap()),
                        EdgeKind::Interface => {
                            if edge.left == k {
                                Neighbor::Triangle(edge.right.unwrap())
                            } else {
                                Neighbor::Triangle(edge.left)
                            }
                        }
                    };
                    *slot = (e, neighbor);
                }
                adj
            })
            .collect();

        let areas = triangles
            .iter()
            .map(|t| signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]))
            .collect();

        Ok(Self {
            vertices,
            triangles,
            edges,
            tri_edges,
            adjacency,
            interface_edges,
            boundary_edges,
            boundary_slot,
            boundary_vertex,
            areas,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Number of states of the extended triangulation (triangles plus
    /// boundary edge-elements).
    pub fn n_ext(&self) -> usize {
        self.triangles.len() + self.boundary_edges.len()
    }

    pub fn interface_edges(&self) -> &[usize] {
        &self.interface_edges
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    /// Extended-state index of a boundary edge.
    pub fn boundary_state(&self, edge: usize) -> Option<usize> {
        self.boundary_slot[edge]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn area(&self, tri: usize) -> f64 {
        self.areas[tri]
    }

    /// Corner positions of a triangle, counter-clockwise.
    pub fn corners(&self, tri: usize) -> [Vec2; 3] {
        let t = self.triangles[tri];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    /// Global edge index of local edge `local` of `tri`.
    pub fn edge_of(&self, tri: usize, local: usize) -> usize {
        self.tri_edges[tri][local]
    }

    /// Local position of a global edge within `tri`.
    pub fn local_index(&self, tri: usize, edge: usize) -> Option<usize> {
        self.tri_edges[tri].iter().position(|&e| e == edge)
    }

    /// The three `(edge, neighbor)` pairs of a triangle, in local edge order.
    pub fn adjacency(&self, tri: usize) -> &[(usize, Neighbor); 3] {
        &self.adjacency[tri]
    }

    /// Unit normal of `edge` pointing out of `tri`.
    pub fn nu(&self, tri: usize, edge: usize) -> Vec2 {
        let e = &self.edges[edge];
        if e.left == tri {
            e.nu
        } else {
            debug_assert_eq!(e.right, Some(tri));
            -e.nu
        }
    }

    /// Outward unit normal of local edge `local` of `tri`.
    pub fn local_nu(&self, tri: usize, local: usize) -> Vec2 {
        self.nu(tri, self.tri_edges[tri][local])
    }

    /// Counter-clockwise edge vector of local edge `local`.
    pub fn edge_vector(&self, tri: usize, local: usize) -> Vec2 {
        let t = self.triangles[tri];
        self.vertices[t[(local + 1) % 3]] - self.vertices[t[local]]
    }

    /// Axis-aligned bounding box `(min, max)` of the vertices.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        bounding_box(&self.vertices)
    }

    /// Longest edge length of a triangle.
    pub fn diameter(&self, tri: usize) -> f64 {
        self.tri_edges[tri]
            .iter()
            .map(|&e| self.edges[e].length)
            .fold(0.0, f64::max)
    }
}

fn bounding_box(points: &[Vec2]) -> (Vec2, Vec2) {
    let mut lo = Vec2::repeat(f64::INFINITY);
    let mut hi = Vec2::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

fn check_points(points: &[Vec2]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "at least 3 sample points are required, got {}",
            points.len()
        )));
    }
    if let Some((i, p)) = points
        .iter()
        .enumerate()
        .find(|(_, p)| !p.x.is_finite() || !p.y.is_finite())
    {
        return Err(Error::InvalidInput(format!(
            "sample point {i} has non-finite coordinates ({}, {})",
            p.x, p.y
        )));
    }
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        // +0.0 so that -0.0 and 0.0 compare equal
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if let Some(j) = seen.insert(key, i) {
            return Err(Error::InvalidInput(format!(
                "sample points {j} and {i} coincide at ({}, {})",
                p.x, p.y
            )));
        }
    }
    let (lo, hi) = bounding_box(points);
    let scale = (hi - lo).norm();
    let a = points[0];
    let far = points
        .iter()
        .copied()
        .max_by(|p, q| (p - a).norm().total_cmp(&(q - a).norm()))
        .unwrap();
    let collinear = points
        .iter()
        .all(|&p| signed_area(a, far, p).abs() <= 1e-14 * scale * scale);
    if collinear {
        return Err(Error::InvalidInput("all sample points are collinear".into()));
    }
    Ok(())
}

fn orient(vertices: &[Vec2], tris: &[[usize; 3]]) -> Result<Vec<[usize; 3]>> {
    tris.iter()
        .enumerate()
        .map(|(k, t)| {
            if let Some(&v) = t.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::Mesh(format!(
                    "triangle {k} references vertex {v}, but only {} vertices exist",
                    vertices.len()
                )));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Mesh(format!("triangle {k} repeats a vertex: {t:?}")));
            }
            let area = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            Ok(if area < 0.0 { [t[0], t[2], t[1]] } else { *t })
        })
        .collect()
}

fn check_degeneracy(vertices: &[Vec2], triangles: &[[usize; 3]]) -> Result<()> {
    let (lo, hi) = bounding_box(vertices);
    let box_area = (hi.x - lo.x) * (hi.y - lo.y);
    let min_cos = MIN_ANGLE_DEG.to_radians().cos();
    for (k, t) in triangles.iter().enumerate() {
        let p = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
        let area = signed_area(p[0], p[1], p[2]);
        if area < MIN_RELATIVE_AREA * box_area {
            return Err(Error::Mesh(format!(
                "triangle {k} {t:?} is degenerate (area {area:.3e})"
            )));
        }
        for i in 0..3 {
            let a = p[(i + 1) % 3] - p[i];
            let b = p[(i + 2) % 3] - p[i];
            let cos = a.dot(&b) / (a.norm() * b.norm());
            if cos > min_cos {
                return Err(Error::Mesh(format!(
                    "triangle {k} {t:?} has an angle of {:.4} degrees at vertex {}, below {MIN_ANGLE_DEG}",
                    cos.clamp(-1.0, 1.0).acos().to_degrees(),
                    t[i]
                )));
            }
        }
    }
    Ok(())
}

/// A vertex sitting inside a boundary edge means two triangles meet along a
/// partial edge (a T-junction), which is not conforming.
fn check_hanging_vertices(vertices: &[Vec2], edges: &[Edge], boundary: &[usize]) -> Result<()> {
    let mut on_boundary = vec![false; vertices.len()];
    for &e in boundary {
        for &v in &edges[e].endpoints {
            on_boundary[v] = true;
        }
    }
    for &e in boundary {
        let [a, b] = edges[e].endpoints;
        let (pa, pb) = (vertices[a], vertices[b]);
        let d = pb - pa;
        let len2 = d.norm_squared();
        for (v, &p) in vertices.iter().enumerate() {
            if v == a || v == b || !on_boundary[v] {
                continue;
            }
            let s = (p - pa).dot(&d) / len2;
            let dist = d.perp(&(p - pa)).abs() / len2.sqrt();
            if s > 1e-9 && s < 1.0 - 1e-9 && dist <= 1e-9 * len2.sqrt() {
                return Err(Error::Mesh(format!(
                    "edge ({a}, {b}) is not conforming: vertex {v} lies in its interior"
                )));
            }
        }
    }
    Ok(())
}

/// Lifted 3D position of a vertex.
pub(crate) fn lifted(p: Vec2, z: f64) -> Vec3 {
    Vec3::new(p.x, p.y, z)
}
