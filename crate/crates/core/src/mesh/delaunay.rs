use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation as _};

use crate::error::{Error, Result};
use crate::Vec2;

struct Site {
    position: Point2<f64>,
    index: usize,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Delaunay triangles of `points`, counter-clockwise, in canonical order.
///
/// Points are inserted in index order, so ties between co-circular
/// configurations resolve the same way on every run. Each triangle is
/// rotated to start at its smallest vertex index and the list is sorted.
pub(super) fn triangulate(points: &[Vec2]) -> Result<Vec<[usize; 3]>> {
    let mut dt: DelaunayTriangulation<Site> = DelaunayTriangulation::new();
    for (index, p) in points.iter().enumerate() {
        dt.insert(Site {
            position: Point2::new(p.x, p.y),
            index,
        })
        .map_err(|e| Error::InvalidInput(format!("cannot insert sample point {index}: {e:?}")))?;
    }
    if dt.num_vertices() != points.len() {
        return Err(Error::InvalidInput(
            "Delaunay construction merged coincident sample points".into(),
        ));
    }

    let mut tris: Vec<[usize; 3]> = dt
        .inner_faces()
        .map(|f| {
            let [a, b, c] = f.vertices().map(|v| v.data().index);
            let pa = points[a];
            let ccw = (points[b] - pa).perp(&(points[c] - pa)) > 0.0;
            let t = if ccw { [a, b, c] } else { [a, c, b] };
            let r = (0..3).min_by_key(|&i| t[i]).unwrap();
            [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
        })
        .collect();
    tris.sort_unstable();
    Ok(tris)
}
