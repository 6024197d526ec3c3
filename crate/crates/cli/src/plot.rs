//! Static scenes of lattice polytopes: SVG for plane polygons, Wavefront
//! OBJ for polytopes in space.

use std::fmt::Write;

use anyhow::{bail, Result};
use sparseres::geometry::{LatticePoint, Polytope};

fn check(p: &Polytope, dim: usize) -> Result<()> {
    if p.is_empty() {
        bail!("cannot plot an empty polytope");
    }
    if p.ambient_dim() != dim {
        bail!("expected a polytope in {dim} dimensions, found {}", p.ambient_dim());
    }
    Ok(())
}

fn as_f64(p: &LatticePoint) -> Vec<f64> {
    p.coords().iter().map(|&c| c as f64).collect()
}

/// Sorts points of a plane polygon counterclockwise around their centroid,
/// given coordinates in the plane.
fn cyclic_order(planar: &[(f64, f64)]) -> Vec<usize> {
    let n = planar.len() as f64;
    let cx = planar.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = planar.iter().map(|p| p.1).sum::<f64>() / n;
    let mut idx: Vec<usize> = (0..planar.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = (planar[a].1 - cy).atan2(planar[a].0 - cx);
        let tb = (planar[b].1 - cy).atan2(planar[b].0 - cx);
        ta.total_cmp(&tb)
    });
    idx
}

const CELL: f64 = 40.0;
const MARGIN: f64 = 20.0;

/// SVG drawing of a polygon, segment or point in the plane, with its
/// lattice points marked.
pub fn svg(p: &Polytope) -> Result<String> {
    check(p, 2)?;
    let points = p.lattice_points();
    let xs = points.iter().map(|q| q.coords()[0]);
    let ys = points.iter().map(|q| q.coords()[1]);
    let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let width = (x1 - x0) as f64 * CELL + 2.0 * MARGIN;
    let height = (y1 - y0) as f64 * CELL + 2.0 * MARGIN;
    // Flip y so that the picture has the usual orientation.
    let map = |q: &LatticePoint| {
        (
            (q.coords()[0] - x0) as f64 * CELL + MARGIN,
            (y1 - q.coords()[1]) as f64 * CELL + MARGIN,
        )
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    let planar: Vec<(f64, f64)> = p.vertices.iter().map(map).collect();
    let path: Vec<String> = cyclic_order(&planar)
        .into_iter()
        .map(|k| format!("{},{}", planar[k].0, planar[k].1))
        .collect();
    writeln!(
        out,
        r##"  <polygon points="{}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="2"/>"##,
        path.join(" ")
    )
    .unwrap();
    for q in &points {
        let (x, y) = map(q);
        let r = if p.vertices.binary_search(q).is_ok() { 4 } else { 2 };
        writeln!(out, r#"  <circle cx="{x}" cy="{y}" r="{r}"/>"#).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vertex indices of a face with the given outer normal, in cyclic order
/// seen from outside.
fn face_loop(verts: &[Vec<f64>], face: &[usize], normal: &[f64]) -> Vec<usize> {
    let origin = &verts[face[0]];
    let e1 = sub(&verts[face[1]], origin);
    let e2 = cross(normal, &e1);
    let planar: Vec<(f64, f64)> = face
        .iter()
        .map(|&k| {
            let d = sub(&verts[k], origin);
            (dot(&d, &e1), dot(&d, &e2))
        })
        .collect();
    cyclic_order(&planar).into_iter().map(|k| face[k]).collect()
}

/// OBJ mesh of a polytope in space: one face per facet, or a single face
/// or polyline for polytopes of lower dimension.
pub fn obj(p: &Polytope) -> Result<String> {
    check(p, 3)?;
    let verts: Vec<Vec<f64>> = p.vertices.iter().map(as_f64).collect();
    let mut out = String::new();
    for v in &p.vertices {
        let c = v.coords();
        writeln!(out, "v {} {} {}", c[0], c[1], c[2]).unwrap();
    }
    match p.dim() {
        Some(3) => {
            for f in &p.facets {
                let face: Vec<usize> = (0..p.vertices.len()).filter(|&k| f.eval(&p.vertices[k]) == 0).collect();
                // Stored normals point inward.
                let outer: Vec<f64> = f.normal.iter().map(|&u| -(u as f64)).collect();
                let lp = face_loop(&verts, &face, &outer);
                let ids: Vec<String> = lp.iter().map(|k| (k + 1).to_string()).collect();
                writeln!(out, "f {}", ids.join(" ")).unwrap();
            }
        }
        Some(2) => {
            let a = sub(&verts[1], &verts[0]);
            let normal = (2..verts.len())
                .map(|k| cross(&a, &sub(&verts[k], &verts[0])))
                .find(|c| dot(c, c) > 0.0)
                .expect("a polygon has three affinely independent vertices");
            let all: Vec<usize> = (0..verts.len()).collect();
            let ids: Vec<String> = face_loop(&verts, &all, &normal).iter().map(|k| (k + 1).to_string()).collect();
            writeln!(out, "f {}", ids.join(" ")).unwrap();
        }
        Some(1) => out.push_str("l 1 2\n"),
        _ => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[&[i64]]) -> Polytope {
        Polytope::hull(&pts.iter().map(|p| LatticePoint(p.to_vec())).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_svg_marks_all_lattice_points() {
        let s = svg(&hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]])).unwrap();
        assert_eq!(s.matches("<circle").count(), 9);
        assert_eq!(s.matches(r#"r="4""#).count(), 4);
    }

    #[test]
    fn cube_obj_has_six_quads() {
        let cube: Vec<Vec<i64>> = (0..8).map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1]).collect();
        let refs: Vec<&[i64]> = cube.iter().map(Vec::as_slice).collect();
        let s = obj(&hull(&refs)).unwrap();
        let faces: Vec<&str> = s.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 6);
        assert!(faces.iter().all(|f| f.split(' ').count() == 5));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let e = svg(&hull(&[&[0], &[1]])).unwrap_err();
        assert_eq!(e.to_string(), "expected a polytope in 2 dimensions, found 1");
        assert!(obj(&hull(&[&[0, 0], &[1, 0]])).is_err());
    }
}
