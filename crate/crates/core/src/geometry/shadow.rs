use rayon::prelude::*;

use super::TriMesh;

/// Default raster resolution per axis.
pub const DEFAULT_SHADOW_GRID: usize = 1024;

/// Area of the projection of `mesh` onto the plane normal to `z`.
///
/// Triangles are scan-converted onto an `grid × grid` raster over the
/// projected bounding box; a cell counts as covered when its centre lies in
/// at least one projected triangle. Overlaps are counted once, so
/// non-convex bodies are handled.
pub fn shadow_area(mesh: &TriMesh, grid: usize) -> f64 {
    let grid = grid.max(1);
    let (lo, hi) = mesh.bounds();
    let (width, height) = (hi.x - lo.x, hi.y - lo.y);
    let (dx, dy) = (width / grid as f64, height / grid as f64);

    // Triangles bucketed by the raster rows they span.
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); grid];
    for t in 0..mesh.len() {
        let [a, b, c] = mesh.corners(t);
        let projected_area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).abs();
        if projected_area <= 1e-14 * width * height {
            continue;
        }
        let ymin = a.y.min(b.y).min(c.y);
        let ymax = a.y.max(b.y).max(c.y);
        let first = ((ymin - lo.y) / dy - 0.5).ceil().max(0.0) as usize;
        let last = ((ymax - lo.y) / dy - 0.5).floor();
        if last < 0.0 {
            continue;
        }
        let last = (last as usize).min(grid - 1);
        for row in rows.iter_mut().take(last + 1).skip(first) {
            row.push(t);
        }
    }

    let covered: Vec<usize> = rows
        .par_iter()
        .enumerate()
        .map(|(r, tris)| {
            let y = lo.y + (r as f64 + 0.5) * dy;
            let mut cells = vec![false; grid];
            for &t in tris {
                let Some((x0, x1)) = scanline_interval(mesh, t, y) else {
                    continue;
                };
                let first = ((x0 - lo.x) / dx - 0.5).ceil().max(0.0) as usize;
                let last = ((x1 - lo.x) / dx - 0.5).floor();
                if last < 0.0 {
                    continue;
                }
                let last = (last as usize).min(grid - 1);
                for cell in cells.iter_mut().take(last + 1).skip(first) {
                    *cell = true;
                }
            }
            cells.iter().filter(|&&c| c).count()
        })
        .collect();

    covered.iter().sum::<usize>() as f64 * dx * dy
}

fn scanline_interval(mesh: &TriMesh, t: usize, y: f64) -> Option<(f64, f64)> {
    let corners = mesh.corners(t);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..3 {
        let (p, q) = (corners[k], corners[(k + 1) % 3]);
        if (y - p.y) * (y - q.y) > 0.0 || p.y == q.y {
            continue;
        }
        let x = p.x + (y - p.y) / (q.y - p.y) * (q.x - p.x);
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (lo <= hi).then_some((lo, hi))
}
