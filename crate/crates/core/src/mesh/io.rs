//! Plain-text mesh input and legacy VTK output.

use std::fmt::Write as _;
use std::path::Path;

use super::SamplePoint;
use crate::error::{Error, Result};
use crate::Vec3;

/// Sample points plus optional connectivity read from a mesh file.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshInput {
    pub points: Vec<SamplePoint>,
    pub triangles: Option<Vec<[usize; 3]>>,
}

/// Parses the mesh text format.
///
/// ```text
/// n_points [n_triangles]
/// x y zeta        (n_points lines)
/// i j k           (n_triangles lines, 0-based)
/// ```
///
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_mesh(text: &str) -> Result<MeshInput> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let bad = |line: usize, msg: &str| Error::InvalidInput(format!("mesh file line {line}: {msg}"));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("mesh file is empty".into()))?;
    let counts: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad(hline, "header must be `n_points [n_triangles]`"))?;
    let (n_points, n_tris) = match counts[..] {
        [n] => (n, None),
        [n, t] => (n, Some(t)),
        _ => return Err(bad(hline, "header must be `n_points [n_triangles]`")),
    };

    let mut points = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("mesh file ends before {n_points} points")))?;
        let xs: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(ln, "expected `x y zeta`"))?;
        match xs[..] {
            [x, y, z] => points.push(SamplePoint::new(x, y, z)),
            _ => return Err(bad(ln, "expected `x y zeta`")),
        }
    }

    let triangles = match n_tris {
        None => None,
        Some(nt) => {
            let mut tris = Vec::with_capacity(nt);
            for _ in 0..nt {
                let (ln, l) = lines.next().ok_or_else(|| {
                    Error::InvalidInput(format!("mesh file ends before {nt} triangles"))
                })?;
                let ids: Vec<usize> = l
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad(ln, "expected `i j k`"))?;
                match ids[..] {
                    [i, j, k] => tris.push([i, j, k]),
                    _ => return Err(bad(ln, "expected `i j k`")),
                }
            }
            Some(tris)
        }
    };
    if let Some((ln, _)) = lines.next() {
        return Err(bad(ln, "unexpected trailing content"));
    }
    Ok(MeshInput { points, triangles })
}

pub fn read_mesh(path: &Path) -> Result<MeshInput> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text)
}

/// Writes the mesh text format.
pub fn format_mesh(input: &MeshInput) -> String {
    let mut out = String::new();
    match &input.triangles {
        Some(t) => writeln!(out, "{} {}", input.points.len(), t.len()),
        None => writeln!(out, "{}", input.points.len()),
    }
    .unwrap();
    for p in &input.points {
        writeln!(out, "{:e} {:e} {:e}", p.position.x, p.position.y, p.height).unwrap();
    }
    for t in input.triangles.iter().flatten() {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

/// A per-cell attribute for the VTK export.
#[derive(Clone, Debug)]
pub enum CellData<'a> {
    Scalars(&'a str, &'a [f64]),
    Vectors(&'a str, &'a [Vec3]),
}

/// Legacy ASCII VTK (3.0) unstructured grid of triangles (cell type 5).
pub fn format_vtk(
    title: &str,
    points: &[Vec3],
    triangles: &[[usize; 3]],
    cell_data: &[CellData<'_>],
) -> String {
    let mut out = String::with_capacity(64 * (points.len() + triangles.len()));
    out.push_str("# vtk DataFile Version 3.0\n");
    // the title line is limited to one line
    writeln!(out, "{}", title.lines().next().unwrap_or("")).unwrap();
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(out, "POINTS {} double", points.len()).unwrap();
    for p in points {
        writeln!(out, "{:e} {:e} {:e}", p.x, p.y, p.z).unwrap();
    }
    writeln!(out, "CELLS {} {}", triangles.len(), 4 * triangles.len()).unwrap();
    for t in triangles {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(out, "CELL_TYPES {}", triangles.len()).unwrap();
    for _ in triangles {
        out.push_str("5\n");
    }
    if !cell_data.is_empty() {
        writeln!(out, "CELL_DATA {}", triangles.len()).unwrap();
    }
    for data in cell_data {
        match data {
            CellData::Scalars(name, values) => {
                assert_eq!(values.len(), triangles.len(), "cell scalars `{name}`");
                writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
                for v in values.iter() {
                    writeln!(out, "{v:e}").unwrap();
                }
            }
            CellData::Vectors(name, values) => {
                assert_eq!(values.len(), triangles.len(), "cell vectors `{name}`");
                writeln!(out, "VECTORS {name} double").unwrap();
                for v in values.iter() {
                    writeln!(out, "{:e} {:e} {:e}", v.x, v.y, v.z).unwrap();
                }
            }
        }
    }
    out
}
