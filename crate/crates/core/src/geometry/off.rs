//! Reading and writing the OFF mesh format (triangles only).

use std::fmt::Write as _;

use super::TriMesh;
use crate::{Error, Result, Vec3};

/// Parses OFF text into a validated mesh.
///
/// Blank lines and `#` comments are skipped. Faces must be triangles with
/// 0-based vertex indices.
pub fn parse_off(text: &str) -> Result<TriMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty document".into()))?;
    // The counts may share the header line ("OFF 8 12 0").
    let rest = header
        .strip_prefix("OFF")
        .ok_or_else(|| parse_err(line, format!("expected `OFF` header, found `{header}`")))?
        .trim();
    let (count_line, counts) = if rest.is_empty() {
        lines
            .next()
            .ok_or_else(|| parse_err(line, "missing counts line".into()))?
    } else {
        (line, rest)
    };
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(count_line, format!("bad counts line: {e}")))?;
    if counts.len() < 2 {
        return Err(parse_err(count_line, "counts line needs `nv nf [ne]`".into()));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {nv} vertices, found {}", vertices.len())))?;
        let coords: Vec<f64> = text
            .split_whitespace()
            .take(3)
            .map(str::parse::<f64>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(line, format!("bad vertex: {e}")))?;
        if coords.len() != 3 {
            return Err(parse_err(line, "vertex needs three coordinates".into()));
        }
        vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
    }

    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {nf} faces, found {}", triangles.len())))?;
        let idx: Vec<usize> = text
            .split_whitespace()
            .map(str::parse::<usize>)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(line, format!("bad face: {e}")))?;
        match idx.as_slice() {
            [3, a, b, c, ..] => triangles.push([*a, *b, *c]),
            [n, ..] => {
                return Err(parse_err(line, format!("only triangles are supported, face has {n} vertices")))
            }
            [] => return Err(parse_err(line, "empty face".into())),
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after faces".into()));
    }

    TriMesh::new(vertices, triangles)
}

/// Serializes a mesh to OFF with 17 significant digits per coordinate.
pub fn write_off(mesh: &TriMesh) -> String {
    let mut out = String::new();
    out.push_str("OFF\n");
    let _ = writeln!(out, "{} {} 0", mesh.vertices().len(), mesh.len());
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CUBE: &str = "OFF
8 12 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
3 0 2 1
3 0 3 2
3 4 5 6
3 4 6 7
3 0 1 5
3 0 5 4
3 1 2 6
3 1 6 5
3 2 3 7
3 2 7 6
3 3 0 4
3 3 4 7
";

    #[test]
    fn unit_cube_volume_is_exact() {
        let m = parse_off(CUBE).unwrap();
        assert_eq!(m.len(), 12);
        assert!((m.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deleting_a_face_opens_the_surface() {
        let text = CUBE.replace("8 12 0", "8 11 0").replace("3 3 4 7\n", "");
        let err = parse_off(&text).unwrap_err();
        assert!(matches!(err, Error::Topology(_)));
        assert!(err.to_string().contains("open surface"));
    }

    #[test]
    fn malformed_text() {
        assert!(matches!(parse_off("OFF\n8 x 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_off("PLY\n"), Err(Error::Parse { line: 1, .. })));
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(parse_off(quad), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn writer_round_trips_bitwise() {
        let m = parse_off(CUBE).unwrap().transformed(0.3, Vec3::new(0.1, -1.0 / 3.0, 2.0)).unwrap();
        let back = parse_off(&write_off(&m)).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
    }
}
