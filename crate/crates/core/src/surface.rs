//! Marked translation surfaces given by Euclidean polygons glued along
//! edges by translations.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom;
use crate::triangulation::Triangulation;

/// Edge `edge` of polygon `polygon`, running from vertex `edge` to vertex
/// `edge + 1` (cyclically).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub polygon: usize,
    pub vertex: usize,
}

/// A marked point `p_i`: a vertex class with its declared zero order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub vertex: VertexRef,
    pub order: u32,
    pub free: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute geometric tolerance, multiplied by the surface diameter.
    pub geom: f64,
    /// Tolerance in radians for cone angles.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geom: 1e-9,
            angle: 1e-7,
        }
    }
}

/// On-disk surface record. Field names are the file format keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDescription {
    pub polygons: Vec<Vec<[f64; 2]>>,
    pub gluings: Vec<[[usize; 2]; 2]>,
    pub marked: Vec<MarkSpec>,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkSpec {
    pub vertex: [usize; 2],
    pub order: u32,
    pub free: bool,
}

impl SurfaceDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }
}

/// Vertex class of the glued cell complex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexClass {
    pub corners: Vec<VertexRef>,
    /// Cone angle divided by 2π.
    pub cone_multiple: u32,
    /// Index into the marking list, if this class is marked.
    pub mark: Option<usize>,
}

/// `(g, n, m)` of a stratum `H_n(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSignature {
    pub g: u32,
    pub n: usize,
    pub m: Vec<u32>,
    pub eps_n: u32,
}

impl StratumSignature {
    pub fn new(g: u32, n: usize, m: Vec<u32>) -> Result<Self> {
        let total: u32 = m.iter().sum();
        if g == 0 || total != 2 * g - 2 {
            return Err(Error::SignatureMismatch(format!(
                "sum of orders {total} differs from 2g-2 for g = {g}"
            )));
        }
        if n > m.len() || m[n..].iter().any(|&x| x == 0) {
            return Err(Error::SignatureMismatch(
                "orders of non-free points must be positive".into(),
            ));
        }
        Ok(StratumSignature {
            g,
            n,
            m,
            eps_n: u32::from(n > 0),
        })
    }

    /// Number of non-free marked points.
    pub fn k(&self) -> usize {
        self.m.len() - self.n
    }

    /// Complex dimension of period coordinates, `2g + n + k - 1`.
    pub fn period_dimension(&self) -> usize {
        2 * self.g as usize + self.m.len() - 1
    }
}

/// A validated marked translation surface. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Surface {
    polygons: Vec<Vec<C64>>,
    partner: Vec<Vec<EdgeRef>>,
    markings: Vec<Marking>,
    n_free: usize,
    vertex_class: Vec<Vec<usize>>,
    classes: Vec<VertexClass>,
    edge_class: Vec<Vec<(usize, i64)>>,
    edge_class_rep: Vec<EdgeRef>,
    genus: u32,
    diameter: f64,
    tol: Tolerances,
    triangulation: Arc<Triangulation>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn check_simple(polygon: usize, pts: &[C64], eps: f64) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        if (pts[(i + 1) % n] - pts[i]).norm() <= eps {
            return Err(Error::SelfIntersectingPolygon {
                polygon,
                detail: format!("edge {i} has zero length"),
            });
        }
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if adjacent {
                // Adjacent edges share a vertex; reject only fold-backs.
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = p - shared;
                let v = q - shared;
                if geom::cross(u, v).abs() <= eps * u.norm().max(v.norm())
                    && geom::dot(u, v) > 0.0
                {
                    return Err(Error::SelfIntersectingPolygon {
                        polygon,
                        detail: format!("edges {i} and {j} overlap"),
                    });
                }
            } else if geom::segment_distance(a, b, c, d) <= eps {
                return Err(Error::SelfIntersectingPolygon {
                    polygon,
                    detail: format!("edges {i} and {j} meet"),
                });
            }
        }
    }
    Ok(())
}

fn interior_angle(pts: &[C64], v: usize) -> f64 {
    let n = pts.len();
    let cur = pts[v];
    geom::ccw_angle(pts[(v + 1) % n] - cur, pts[(v + n - 1) % n] - cur)
}

impl Surface {
    /// Validates a parsed description with default tolerances.
    pub fn validate(desc: &SurfaceDescription) -> Result<Surface> {
        Self::validate_with(desc, Tolerances::default())
    }

    pub fn validate_with(desc: &SurfaceDescription, tol: Tolerances) -> Result<Surface> {
        let polygons: Vec<Vec<C64>> = desc
            .polygons
            .iter()
            .map(|poly| poly.iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect();
        let mut pairs = Vec::with_capacity(desc.gluings.len());
        for g in &desc.gluings {
            pairs.push((
                EdgeRef {
                    polygon: g[0][0],
                    edge: g[0][1],
                },
                EdgeRef {
                    polygon: g[1][0],
                    edge: g[1][1],
                },
            ));
        }
        let markings: Vec<Marking> = desc
            .marked
            .iter()
            .map(|m| Marking {
                vertex: VertexRef {
                    polygon: m.vertex[0],
                    vertex: m.vertex[1],
                },
                order: m.order,
                free: m.free,
            })
            .collect();
        Self::from_parts(polygons, &pairs, markings, desc.n, tol)
    }

    /// Builds and validates a surface from polygon coordinates, glued edge
    /// pairs, and the ordered marking list.
    pub fn from_parts(
        polygons: Vec<Vec<C64>>,
        gluings: &[(EdgeRef, EdgeRef)],
        markings: Vec<Marking>,
        n_free: usize,
        tol: Tolerances,
    ) -> Result<Surface> {
        if polygons.is_empty() {
            return Err(Error::Malformed("no polygons".into()));
        }
        for (i, p) in polygons.iter().enumerate() {
            if p.len() < 3 {
                return Err(Error::Malformed(format!("polygon {i} has fewer than 3 vertices")));
            }
            if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Malformed(format!("polygon {i} has non-finite coordinates")));
            }
        }
        let (mut lo, mut hi) = (polygons[0][0], polygons[0][0]);
        for z in polygons.iter().flatten() {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let mut diameter: f64 = 0.0;
        for p in &polygons {
            let (mut a, mut b) = (p[0], p[0]);
            for z in p {
                a = C64::new(a.re.min(z.re), a.im.min(z.im));
                b = C64::new(b.re.max(z.re), b.im.max(z.im));
            }
            diameter = diameter.max((b - a).norm());
        }
        let eps = tol.geom * diameter.max(f64::MIN_POSITIVE);

        for (i, p) in polygons.iter().enumerate() {
            check_simple(i, p, eps)?;
            let area = geom::signed_area(p);
            if area <= eps * eps {
                return Err(Error::NonPositiveArea { polygon: i, area });
            }
        }

        // Gluing involution.
        let mut partner: Vec<Vec<Option<EdgeRef>>> =
            polygons.iter().map(|p| vec![None; p.len()]).collect();
        let in_range = |e: &EdgeRef| e.polygon < polygons.len() && e.edge < polygons[e.polygon].len();
        for (a, b) in gluings {
            if !in_range(a) || !in_range(b) {
                return Err(Error::UnmatchedEdge(format!("gluing {a:?} <-> {b:?} is out of range")));
            }
            if a == b {
                return Err(Error::UnmatchedEdge(format!("edge {a:?} glued to itself")));
            }
            for (x, y) in [(a, b), (b, a)] {
                if partner[x.polygon][x.edge].is_some() {
                    return Err(Error::UnmatchedEdge(format!("edge {x:?} glued more than once")));
                }
                partner[x.polygon][x.edge] = Some(*y);
            }
        }
        let mut partner_full = Vec::with_capacity(polygons.len());
        for (pi, row) in partner.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (ei, x) in row.iter().enumerate() {
                match x {
                    Some(y) => out.push(*y),
                    None => {
                        return Err(Error::UnmatchedEdge(format!(
                            "edge ({pi}, {ei}) has no partner"
                        )))
                    }
                }
            }
            partner_full.push(out);
        }
        let partner = partner_full;
        let edge_vec = |e: EdgeRef| {
            let p = &polygons[e.polygon];
            p[(e.edge + 1) % p.len()] - p[e.edge]
        };
        for (a, b) in gluings {
            let mismatch = (edge_vec(*a) + edge_vec(*b)).norm();
            if mismatch > eps {
                return Err(Error::NonTranslationGluing {
                    a: *a,
                    b: *b,
                    mismatch,
                });
            }
        }

        // Connectedness of the polygon adjacency graph.
        let mut seen = vec![false; polygons.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in &partner[p] {
                if !seen[e.polygon] {
                    seen[e.polygon] = true;
                    stack.push(e.polygon);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }

        // Vertex classes.
        let offsets: Vec<usize> = polygons
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.len();
                Some(o)
            })
            .collect();
        let total: usize = polygons.iter().map(|p| p.len()).sum();
        let mut uf = UnionFind((0..total).collect());
        for (pi, row) in partner.iter().enumerate() {
            let np = polygons[pi].len();
            for (ei, q) in row.iter().enumerate() {
                let nq = polygons[q.polygon].len();
                uf.union(offsets[pi] + ei, offsets[q.polygon] + (q.edge + 1) % nq);
                uf.union(offsets[pi] + (ei + 1) % np, offsets[q.polygon] + q.edge);
            }
        }
        let mut root_to_class = std::collections::HashMap::new();
        let mut vertex_class: Vec<Vec<usize>> = Vec::with_capacity(polygons.len());
        let mut classes: Vec<VertexClass> = Vec::new();
        let mut angles: Vec<f64> = Vec::new();
        for (pi, p) in polygons.iter().enumerate() {
            let mut row = Vec::with_capacity(p.len());
            for vi in 0..p.len() {
                let root = uf.find(offsets[pi] + vi);
                let id = *root_to_class.entry(root).or_insert_with(|| {
                    classes.push(VertexClass {
                        corners: Vec::new(),
                        cone_multiple: 0,
                        mark: None,
                    });
                    angles.push(0.0);
                    classes.len() - 1
                });
                classes[id].corners.push(VertexRef {
                    polygon: pi,
                    vertex: vi,
                });
                angles[id] += interior_angle(p, vi);
                row.push(id);
            }
            vertex_class.push(row);
        }
        for (ci, class) in classes.iter_mut().enumerate() {
            let mult = (angles[ci] / TAU).round();
            if mult < 1.0 || (angles[ci] - mult * TAU).abs() > tol.angle {
                return Err(Error::AngleNotMultipleOf2Pi {
                    class: ci,
                    angle: angles[ci],
                });
            }
            class.cone_multiple = mult as u32;
        }

        // Markings.
        if n_free > markings.len() {
            return Err(Error::SignatureMismatch(format!(
                "n = {n_free} exceeds the number of markings {}",
                markings.len()
            )));
        }
        for (i, m) in markings.iter().enumerate() {
            let v = m.vertex;
            if v.polygon >= polygons.len() || v.vertex >= polygons[v.polygon].len() {
                return Err(Error::Malformed(format!("marking {i} refers to a missing vertex")));
            }
            let c = vertex_class[v.polygon][v.vertex];
            if let Some(j) = classes[c].mark {
                return Err(Error::SignatureMismatch(format!(
                    "markings {j} and {i} designate the same point"
                )));
            }
            classes[c].mark = Some(i);
            if m.free != (i < n_free) {
                return Err(Error::SignatureMismatch(format!(
                    "marking {i}: the first n = {n_free} markings must be exactly the free ones"
                )));
            }
            if !m.free && m.order == 0 {
                return Err(Error::SignatureMismatch(format!(
                    "marking {i} is not free but has order 0"
                )));
            }
            if classes[c].cone_multiple != m.order + 1 {
                return Err(Error::SignatureMismatch(format!(
                    "marking {i} declares order {} but its cone angle is {}·2π",
                    m.order, classes[c].cone_multiple
                )));
            }
        }
        for (ci, class) in classes.iter().enumerate() {
            if class.mark.is_none() && class.cone_multiple != 1 {
                return Err(Error::SignatureMismatch(format!(
                    "vertex class {ci} is a cone point of angle {}·2π but is not marked",
                    class.cone_multiple
                )));
            }
        }
        if markings.is_empty() {
            return Err(Error::SignatureMismatch("at least one marked point is required".into()));
        }

        // Euler characteristic and Gauss-Bonnet.
        let n_edges: usize = total / 2;
        let chi = classes.len() as i64 - n_edges as i64 + polygons.len() as i64;
        if chi > 0 || chi % 2 != 0 {
            return Err(Error::SignatureMismatch(format!(
                "Euler characteristic {chi} is not that of a surface of genus >= 1"
            )));
        }
        let genus = (1 - chi / 2) as u32;
        let order_sum: u32 = markings.iter().map(|m| m.order).sum();
        if order_sum != 2 * genus - 2 {
            return Err(Error::SignatureMismatch(format!(
                "sum of orders {order_sum} differs from 2g-2 = {}",
                2 * genus - 2
            )));
        }

        // Glued edge classes, oriented by their first member.
        let mut edge_class: Vec<Vec<(usize, i64)>> =
            polygons.iter().map(|p| vec![(usize::MAX, 0); p.len()]).collect();
        let mut edge_class_rep = Vec::new();
        for pi in 0..polygons.len() {
            for ei in 0..polygons[pi].len() {
                if edge_class[pi][ei].0 == usize::MAX {
                    let id = edge_class_rep.len();
                    edge_class_rep.push(EdgeRef {
                        polygon: pi,
                        edge: ei,
                    });
                    edge_class[pi][ei] = (id, 1);
                    let q = partner[pi][ei];
                    edge_class[q.polygon][q.edge] = (id, -1);
                }
            }
        }

        let triangulation = Triangulation::build(
            &polygons,
            &partner,
            &vertex_class,
            &edge_class,
            edge_class_rep.len(),
            eps,
        )?;

        Ok(Surface {
            polygons,
            partner,
            markings,
            n_free,
            vertex_class,
            classes,
            edge_class,
            edge_class_rep,
            genus,
            diameter,
            tol,
            triangulation: Arc::new(triangulation),
        })
    }

    pub fn to_description(&self) -> SurfaceDescription {
        let mut gluings = Vec::new();
        for (pi, row) in self.partner.iter().enumerate() {
            for (ei, q) in row.iter().enumerate() {
                if (pi, ei) < (q.polygon, q.edge) {
                    gluings.push([[pi, ei], [q.polygon, q.edge]]);
                }
            }
        }
        SurfaceDescription {
            polygons: self
                .polygons
                .iter()
                .map(|p| p.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            gluings,
            marked: self
                .markings
                .iter()
                .map(|m| MarkSpec {
                    vertex: [m.vertex.polygon, m.vertex.vertex],
                    order: m.order,
                    free: m.free,
                })
                .collect(),
            n: self.n_free,
        }
    }

    pub fn polygons(&self) -> &[Vec<C64>] {
        &self.polygons
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.polygon][e.edge]
    }

    /// All glued pairs `(a, b)` with `a < b`.
    pub fn gluings(&self) -> Vec<(EdgeRef, EdgeRef)> {
        let mut out = Vec::new();
        for (pi, row) in self.partner.iter().enumerate() {
            for (ei, q) in row.iter().enumerate() {
                let a = EdgeRef {
                    polygon: pi,
                    edge: ei,
                };
                if a < *q {
                    out.push((a, *q));
                }
            }
        }
        out
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn n_free(&self) -> usize {
        self.n_free
    }

    pub fn n_marked(&self) -> usize {
        self.markings.len()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// Absolute geometric tolerance for this surface.
    pub fn eps(&self) -> f64 {
        self.tol.geom * self.diameter
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn vertex_class_of(&self, v: VertexRef) -> usize {
        self.vertex_class[v.polygon][v.vertex]
    }

    /// Vertex class of the marking `i`.
    pub fn mark_class(&self, i: usize) -> usize {
        self.vertex_class_of(self.markings[i].vertex)
    }

    pub fn cone_angle(&self, class: usize) -> f64 {
        self.classes[class].cone_multiple as f64 * TAU
    }

    pub fn edge_vector(&self, e: EdgeRef) -> C64 {
        let p = &self.polygons[e.polygon];
        p[(e.edge + 1) % p.len()] - p[e.edge]
    }

    /// Glued-edge class id and orientation sign of a polygon edge.
    pub fn edge_class(&self, e: EdgeRef) -> (usize, i64) {
        self.edge_class[e.polygon][e.edge]
    }

    pub fn n_edge_classes(&self) -> usize {
        self.edge_class_rep.len()
    }

    /// First polygon edge of each glued-edge class; it fixes the class
    /// orientation.
    pub fn edge_class_representatives(&self) -> &[EdgeRef] {
        &self.edge_class_rep
    }

    /// Holonomy of every glued-edge class.
    pub fn edge_class_holonomies(&self) -> Vec<C64> {
        self.edge_class_rep.iter().map(|&e| self.edge_vector(e)).collect()
    }

    pub(crate) fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    /// Stratum signature from the Euler characteristic and cone angles.
    pub fn topology(&self) -> StratumSignature {
        StratumSignature {
            g: self.genus,
            n: self.n_free,
            m: self
                .markings
                .iter()
                .map(|m| self.classes[self.vertex_class_of(m.vertex)].cone_multiple - 1)
                .collect(),
            eps_n: u32::from(self.n_free > 0),
        }
    }

    /// Euler characteristic `V - E + F` of the glued cell complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.classes.len() as i64 - self.edge_class_rep.len() as i64 + self.polygons.len() as i64
    }

    /// Flat area: the sum of the shoelace areas of the polygons.
    pub fn area(&self) -> f64 {
        self.polygons.iter().map(|p| geom::signed_area(p)).sum()
    }

    /// Multiplies the differential by `lambda`.
    pub fn rescale(&self, lambda: C64) -> Result<Surface> {
        if lambda.norm() == 0.0 || !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::ZeroScalar);
        }
        let polygons = self
            .polygons
            .iter()
            .map(|p| p.iter().map(|z| z * lambda).collect())
            .collect();
        Surface::from_parts(
            polygons,
            &self.gluings(),
            self.markings.clone(),
            self.n_free,
            self.tol,
        )
    }

    /// Same surface with polygons renumbered by `perm` (new index of old
    /// polygon `i` is `perm[i]`), cyclic vertex labels preserved.
    pub fn relabel_polygons(&self, perm: &[usize]) -> Result<Surface> {
        let np = self.polygons.len();
        let uniq: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != np || uniq.len() != np || uniq.iter().any(|&x| x >= np) {
            return Err(Error::Malformed("relabeling is not a permutation".into()));
        }
        let mut polygons = vec![Vec::new(); np];
        for (i, p) in self.polygons.iter().enumerate() {
            polygons[perm[i]] = p.clone();
        }
        let map = |e: EdgeRef| EdgeRef {
            polygon: perm[e.polygon],
            edge: e.edge,
        };
        let gluings: Vec<_> = self.gluings().into_iter().map(|(a, b)| (map(a), map(b))).collect();
        let markings = self
            .markings
            .iter()
            .map(|m| Marking {
                vertex: VertexRef {
                    polygon: perm[m.vertex.polygon],
                    vertex: m.vertex.vertex,
                },
                ..*m
            })
            .collect();
        Surface::from_parts(polygons, &gluings, markings, self.n_free, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;

    fn square() -> SurfaceDescription {
        SurfaceDescription {
            polygons: vec![vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]],
            gluings: vec![[[0, 0], [0, 2]], [[0, 1], [0, 3]]],
            marked: vec![MarkSpec {
                vertex: [0, 0],
                order: 0,
                free: true,
            }],
            n: 1,
        }
    }

    #[test]
    fn square_torus_is_valid() {
        let s = Surface::validate(&square()).unwrap();
        assert_eq!(s.vertex_classes().len(), 1);
        assert!((s.cone_angle(0) - TAU).abs() < 1e-12);
        assert_eq!(s.topology(), StratumSignature::new(1, 1, vec![0]).unwrap());
    }

    #[test]
    fn top_glued_to_left_is_rejected() {
        let mut d = square();
        d.gluings = vec![[[0, 2], [0, 3]], [[0, 0], [0, 1]]];
        assert!(matches!(
            Surface::validate(&d),
            Err(Error::NonTranslationGluing { .. })
        ));
    }

    #[test]
    fn unmatched_edge_is_rejected() {
        let mut d = square();
        d.gluings.pop();
        assert!(matches!(Surface::validate(&d), Err(Error::UnmatchedEdge(_))));
        let mut d = square();
        d.gluings.push([[0, 0], [0, 2]]);
        assert!(matches!(Surface::validate(&d), Err(Error::UnmatchedEdge(_))));
    }

    #[test]
    fn bowtie_is_self_intersecting() {
        let mut d = square();
        d.polygons = vec![vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]];
        assert!(matches!(
            Surface::validate(&d),
            Err(Error::SelfIntersectingPolygon { .. }) | Err(Error::NonPositiveArea { .. })
        ));
    }

    #[test]
    fn clockwise_polygon_is_rejected() {
        let mut d = square();
        d.polygons = vec![vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]];
        assert!(matches!(
            Surface::validate(&d),
            Err(Error::NonPositiveArea { .. })
        ));
    }

    #[test]
    fn wrong_order_is_signature_mismatch() {
        let mut d = square();
        d.marked[0].order = 1;
        d.marked[0].free = false;
        d.n = 0;
        assert!(matches!(
            Surface::validate(&d),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn octagon_vertex_has_angle_six_pi() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        assert_eq!(s.vertex_classes().len(), 1);
        assert!((s.cone_angle(0) - 3.0 * TAU).abs() < 1e-12);
        assert_eq!(s.euler_characteristic(), -2);
        assert_eq!(s.topology().m, vec![2]);
        assert!((s.area() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn unmarked_cone_point_is_rejected() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        let mut d = s.to_description();
        d.marked.clear();
        assert!(matches!(
            Surface::validate(&d),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn rescale_by_zero_fails() {
        let s = Surface::validate(&square()).unwrap();
        assert_eq!(s.rescale(C64::new(0.0, 0.0)).unwrap_err(), Error::ZeroScalar);
    }

    #[test]
    fn rescale_by_one_is_identity() {
        let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
        let r = s.rescale(C64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.to_description(), r.to_description());
    }

    #[test]
    fn relabeling_preserves_topology() {
        let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
        let r = s.relabel_polygons(&[1, 0]).unwrap();
        assert_eq!(s.topology(), r.topology());
        assert!((s.area() - r.area()).abs() < 1e-15);
    }

    #[test]
    fn description_round_trips_through_json() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        let text = s.to_description().to_json();
        let back = Surface::validate(&SurfaceDescription::from_json(&text).unwrap()).unwrap();
        assert_eq!(back.to_description(), s.to_description());
    }
}
