//! Ear-clipping triangulation of the polygons, with side adjacency across
//! gluings and the edge-class chain carried by each triangle side.

use std::collections::HashMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geom;
use crate::surface::EdgeRef;

/// Integer chain over glued-edge classes.
pub type Chain = Vec<i64>;

/// A triangle of some polygon. Side `s` runs from `pts[s]` to
/// `pts[(s + 1) % 3]`; corner `c` sits at `pts[c]`.
#[derive(Clone, Debug)]
pub(crate) struct Tri {
    pub poly: usize,
    pub verts: [usize; 3],
    pub pts: [C64; 3],
    pub class: [usize; 3],
    /// Triangle and side glued to each side.
    pub nbr: [(usize, usize); 3],
    pub side_chain: [Chain; 3],
    /// Polygon edge underlying each side, `None` for interior diagonals.
    pub side_edge: [Option<EdgeRef>; 3],
}

#[derive(Clone, Debug)]
pub(crate) struct Triangulation {
    pub tris: Vec<Tri>,
    /// Triangle corners grouped by vertex class.
    pub corners: Vec<Vec<(usize, usize)>>,
}

#[inline]
pub(crate) fn next(i: usize) -> usize {
    (i + 1) % 3
}

#[inline]
pub(crate) fn prev(i: usize) -> usize {
    (i + 2) % 3
}

/// Vertex index triples of an ear-clipping triangulation of a simple
/// counterclockwise polygon.
pub(crate) fn ear_clip(pts: &[C64], eps: f64) -> Option<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len() - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut found = None;
        for i in 0..m {
            let (a, b, c) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
            let scale = (pb - pa).norm().max((pc - pb).norm());
            if geom::cross(pb - pa, pc - pa) <= eps * scale {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != a && j != b && j != c && geom::in_triangle_closed(pts[j], pa, pb, pc, eps)
            });
            if !blocked {
                found = Some((i, [a, b, c]));
                break;
            }
        }
        let (i, tri) = found?;
        out.push(tri);
        idx.remove(i);
    }
    out.push([idx[0], idx[1], idx[2]]);
    Some(out)
}

impl Triangulation {
    pub fn build(
        polygons: &[Vec<C64>],
        partner: &[Vec<EdgeRef>],
        vertex_class: &[Vec<usize>],
        edge_class: &[Vec<(usize, i64)>],
        n_edge_classes: usize,
        eps: f64,
    ) -> Result<Triangulation> {
        let edge_chain = |p: usize, e: usize| {
            let mut ch = vec![0; n_edge_classes];
            let (id, sign) = edge_class[p][e];
            ch[id] += sign;
            ch
        };
        // Chain of the path along the polygon boundary from vertex u
        // counterclockwise to vertex w, with a canonical orientation so that
        // the reverse diagonal carries exactly the negated chain.
        let diagonal_chain = |p: usize, u: usize, w: usize| {
            let (lo, hi, sign) = if u < w { (u, w, 1) } else { (w, u, -1) };
            let mut ch = vec![0; n_edge_classes];
            for e in lo..hi {
                let (id, s) = edge_class[p][e];
                ch[id] += sign * s;
            }
            ch
        };

        let mut tris = Vec::new();
        let mut side_index: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
        for (p, pts) in polygons.iter().enumerate() {
            let n = pts.len();
            let ears = ear_clip(pts, eps).ok_or_else(|| {
                Error::Malformed(format!("polygon {p} could not be triangulated"))
            })?;
            for verts in ears {
                let t = tris.len();
                let mut side_chain: [Chain; 3] = Default::default();
                let mut side_edge = [None; 3];
                for s in 0..3 {
                    let (u, w) = (verts[s], verts[next(s)]);
                    if w == (u + 1) % n {
                        side_chain[s] = edge_chain(p, u);
                        side_edge[s] = Some(EdgeRef { polygon: p, edge: u });
                    } else {
                        side_chain[s] = diagonal_chain(p, u, w);
                    }
                    side_index.insert((p, u, w), (t, s));
                }
                tris.push(Tri {
                    poly: p,
                    verts,
                    pts: [pts[verts[0]], pts[verts[1]], pts[verts[2]]],
                    class: [
                        vertex_class[p][verts[0]],
                        vertex_class[p][verts[1]],
                        vertex_class[p][verts[2]],
                    ],
                    nbr: [(usize::MAX, 0); 3],
                    side_chain,
                    side_edge,
                });
            }
        }
        for t in 0..tris.len() {
            for s in 0..3 {
                let p = tris[t].poly;
                let key = match tris[t].side_edge[s] {
                    Some(e) => {
                        let q = partner[e.polygon][e.edge];
                        let nq = polygons[q.polygon].len();
                        (q.polygon, q.edge, (q.edge + 1) % nq)
                    }
                    None => (p, tris[t].verts[next(s)], tris[t].verts[s]),
                };
                let nb = *side_index
                    .get(&key)
                    .ok_or_else(|| Error::Malformed("inconsistent triangulation".into()))?;
                tris[t].nbr[s] = nb;
            }
        }
        let n_classes = vertex_class.iter().flatten().max().map_or(0, |m| m + 1);
        let mut corners = vec![Vec::new(); n_classes];
        for (t, tri) in tris.iter().enumerate() {
            for c in 0..3 {
                corners[tri.class[c]].push((t, c));
            }
        }
        Ok(Triangulation { tris, corners })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;

    #[test]
    fn ear_clip_handles_collinear_vertices() {
        let pts = [
            C64::new(0.0, 0.0),
            C64::new(0.3, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 1.0),
            C64::new(0.3, 1.0),
            C64::new(0.0, 1.0),
        ];
        let ears = ear_clip(&pts, 1e-12).unwrap();
        assert_eq!(ears.len(), 4);
        let total: f64 = ears
            .iter()
            .map(|t| geom::signed_area(&[pts[t[0]], pts[t[1]], pts[t[2]]]))
            .sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(ears
            .iter()
            .all(|t| geom::signed_area(&[pts[t[0]], pts[t[1]], pts[t[2]]]) > 0.0));
    }

    #[test]
    fn neighbours_are_symmetric_and_translate() {
        for b in [
            Builtin::RegularOctagon { side: 1.0 },
            Builtin::SlitTori { t: 0.3 },
            Builtin::SplitTorus { a: 0.4 },
        ] {
            let s = b.build().unwrap();
            let tr = s.triangulation();
            for (t, tri) in tr.tris.iter().enumerate() {
                for side in 0..3 {
                    let (u, y) = tri.nbr[side];
                    assert_eq!(tr.tris[u].nbr[y], (t, side));
                    let v = tri.pts[next(side)] - tri.pts[side];
                    let w = tr.tris[u].pts[next(y)] - tr.tris[u].pts[y];
                    assert!((v + w).norm() < 1e-12);
                    let sum: Vec<i64> = tri.side_chain[side]
                        .iter()
                        .zip(&tr.tris[u].side_chain[y])
                        .map(|(a, b)| a + b)
                        .collect();
                    assert!(sum.iter().all(|&x| x == 0));
                }
            }
        }
    }
}
