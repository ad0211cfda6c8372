//! Seeded sample points on the unit square, their Delaunay mesh lifted onto
//! a surface, and the mesh written as legacy VTK.
//!
//! ```text
//! cargo run --example triangulate_surface -- [out.vtk]
//! ```

use fissure::mesh::io::{format_mesh, format_vtk, parse_mesh, CellData, MeshInput};
use fissure::mesh::{lift_geometry, SamplePoint, Triangulation};
use fissure::presets::{count_for_elements, example1_surface, random_points};
use fissure::Vec3;

fn main() -> fissure::Result<()> {
    let count = count_for_elements(322);
    let points = random_points(count, 1);
    let t = Triangulation::delaunay(points)?;
    let heights: Vec<f64> = t.vertices().iter().map(|p| example1_surface(*p)).collect();
    let geo = lift_geometry(&t, &heights)?;

    println!("{count} points, {} triangles", t.n_triangles());
    println!("{} interface edges, {} boundary edges", t.interface_edges().len(), t.boundary_edges().len());
    println!("planar area 1, lifted area {:.6}", geo.total_area());

    // the plain-text mesh format round-trips
    let input = MeshInput {
        points: t.vertices().iter().zip(&heights).map(|(p, z)| SamplePoint::new(p.x, p.y, *z)).collect(),
        triangles: Some(t.triangles().to_vec()),
    };
    assert_eq!(parse_mesh(&format_mesh(&input))?, input);

    let lifted: Vec<Vec3> = input.points.iter().map(|p| Vec3::new(p.position.x, p.position.y, p.height)).collect();
    let vtk = format_vtk("example1 surface", &lifted, t.triangles(), &[CellData::Scalars("area", &geo.area3d)]);
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, vtk).expect("write vtk");
        println!("wrote {path}");
    }
    Ok(())
}
