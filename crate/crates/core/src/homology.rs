//! Relative homology `H_1(C, P; Z)` of the polygon cell complex, the
//! period map, and its local inverse.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{EdgeRef, Surface};

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> IMat {
        IMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn row_range(&self, from: usize, to: usize) -> IMat {
        IMat {
            rows: to - from,
            cols: self.cols,
            data: self.data[from * self.cols..to * self.cols].to_vec(),
        }
    }

    pub fn col_range(&self, from: usize, to: usize) -> IMat {
        let mut out = IMat::zeros(self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                out[(i, j - from)] = self[(i, j)];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += q * v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += q * v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `U A V = D` with unimodular `U`, `V` and their
/// inverses tracked.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IMat,
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
    pub v_inv: IMat,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }
}

struct SmithState {
    a: IMat,
    u: IMat,
    u_inv: IMat,
    v: IMat,
    v_inv: IMat,
}

impl SmithState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        self.a.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
        self.u_inv.add_col(src, dst, -q);
    }
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        self.a.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        self.v_inv.add_row(src, dst, -q);
    }
    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols {
            self.a[(i, j)] = -self.a[(i, j)];
        }
        for j in 0..self.u.cols {
            self.u[(i, j)] = -self.u[(i, j)];
        }
        for r in 0..self.u_inv.rows {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)];
        }
    }
}

/// Smith normal form with a deterministic pivot rule: the entry of
/// smallest absolute value in the remaining block, ties broken by lowest
/// column, then lowest row.
pub fn smith(a: &IMat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut st = SmithState {
        a: a.clone(),
        u: IMat::identity(m),
        u_inv: IMat::identity(m),
        v: IMat::identity(n),
        v_inv: IMat::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(i64, usize, usize)> = None;
        for j in t..n {
            for i in t..m {
                let x = st.a[(i, j)].abs();
                if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let p = st.a[(t, t)];
            let mut dirty = false;
            for i in (t + 1)..m {
                let q = st.a[(i, t)] / p;
                if q != 0 {
                    st.add_row(i, t, -q);
                }
                if st.a[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in (t + 1)..n {
                let q = st.a[(t, j)] / p;
                if q != 0 {
                    st.add_col(j, t, -q);
                }
                if st.a[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the rest of the block.
                let mut bad = None;
                'scan: for i in (t + 1)..m {
                    for j in (t + 1)..n {
                        if st.a[(i, j)] % p != 0 {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        st.add_row(t, i, 1);
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut best = (st.a[(t, t)].abs(), t, t);
            for i in (t + 1)..m {
                let x = st.a[(i, t)].abs();
                if x != 0 && x < best.0 {
                    best = (x, i, t);
                }
            }
            for j in (t + 1)..n {
                let x = st.a[(t, j)].abs();
                if x != 0 && x < best.0 {
                    best = (x, t, j);
                }
            }
            st.swap_rows(t, best.1);
            st.swap_cols(t, best.2);
        }
        if st.a[(t, t)] < 0 {
            st.negate_row(t);
        }
        t += 1;
    }
    Smith {
        d: st.a,
        u: st.u,
        u_inv: st.u_inv,
        v: st.v,
        v_inv: st.v_inv,
        rank: t,
    }
}

/// Integral basis of relative homology with its period vector.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodChart {
    /// Basis cycles as integer combinations of oriented glued-edge classes.
    pub basis: Vec<Vec<i64>>,
    pub period_vector: Vec<C64>,
    /// `d x E` integer matrix; column `e` is the class of edge class `e`,
    /// row `j` is the cocycle dual to basis cycle `j`.
    pub edge_class_map: Vec<Vec<i64>>,
    /// Relative boundary `E -> unmarked vertex classes`.
    #[serde(skip)]
    boundary: IMat,
}

/// Boundary matrices `(D1, D2)` of the relative cell complex.
fn boundary_matrices(s: &Surface) -> (IMat, IMat) {
    let classes = s.vertex_classes();
    let unmarked: Vec<usize> = (0..classes.len())
        .filter(|&c| classes[c].mark.is_none())
        .collect();
    let row_of = |c: usize| unmarked.iter().position(|&x| x == c);
    let reps = s.edge_class_representatives();
    let e = reps.len();
    let mut d1 = IMat::zeros(unmarked.len(), e);
    for (id, rep) in reps.iter().enumerate() {
        let n = s.polygons()[rep.polygon].len();
        let start = s.vertex_class_of(crate::surface::VertexRef {
            polygon: rep.polygon,
            vertex: rep.edge,
        });
        let end = s.vertex_class_of(crate::surface::VertexRef {
            polygon: rep.polygon,
            vertex: (rep.edge + 1) % n,
        });
        if let Some(r) = row_of(end) {
            d1[(r, id)] += 1;
        }
        if let Some(r) = row_of(start) {
            d1[(r, id)] -= 1;
        }
    }
    let np = s.polygons().len();
    let mut d2 = IMat::zeros(e, np);
    for (p, poly) in s.polygons().iter().enumerate() {
        for edge in 0..poly.len() {
            let (id, sign) = s.edge_class(EdgeRef { polygon: p, edge });
            d2[(id, p)] += sign;
        }
    }
    (d1, d2)
}

impl PeriodChart {
    /// Basis of `H_1(C, P; Z)` by Smith reduction of the boundary maps.
    pub fn compute(s: &Surface) -> Result<PeriodChart> {
        let (d1, d2) = boundary_matrices(s);
        let e = d1.cols;
        let s1 = smith(&d1);
        let r1 = s1.rank;
        let k = s1.v.col_range(r1, e);
        let y = s1.v_inv.mul(&d2).row_range(r1, e);
        let s2 = smith(&y);
        let r2 = s2.rank;
        let expected = s.topology().period_dimension();
        let found = e - r1 - r2;
        if found != expected || s2.diagonal().iter().any(|&x| x != 1) {
            return Err(Error::RankMismatch { expected, found });
        }
        let chains = k.mul(&s2.u_inv.col_range(r2, e - r1));
        let cochain = s2.u.mul(&s1.v_inv.row_range(r1, e)).row_range(r2, e - r1);
        let hol = s.edge_class_holonomies();
        let basis: Vec<Vec<i64>> = (0..found).map(|j| chains.column(j)).collect();
        let period_vector = basis
            .iter()
            .map(|c| c.iter().zip(&hol).map(|(&a, &h)| h * a as f64).sum())
            .collect();
        let edge_class_map = (0..found)
            .map(|r| (0..e).map(|c| cochain[(r, c)]).collect())
            .collect();
        Ok(PeriodChart {
            basis,
            period_vector,
            edge_class_map,
            boundary: d1,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn n_edge_classes(&self) -> usize {
        self.boundary.cols
    }

    /// Whether an edge-class chain has boundary supported on marked points.
    pub fn is_relative_cycle(&self, chain: &[i64]) -> bool {
        self.boundary.mul_vec(chain).iter().all(|&x| x == 0)
    }

    /// Coordinates of a relative cycle in the chart basis.
    pub fn class_of(&self, chain: &[i64]) -> Result<Vec<i64>> {
        if chain.len() != self.n_edge_classes() {
            return Err(Error::SizeMismatch {
                expected: self.n_edge_classes(),
                found: chain.len(),
            });
        }
        if !self.is_relative_cycle(chain) {
            return Err(Error::BoundaryNotMarked);
        }
        Ok(self
            .edge_class_map
            .iter()
            .map(|row| row.iter().zip(chain).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Period of a chain evaluated through the chart.
    pub fn period_of_class(&self, class: &[i64]) -> C64 {
        class
            .iter()
            .zip(&self.period_vector)
            .map(|(&a, &p)| p * a as f64)
            .sum()
    }

    /// Moves the surface to period coordinates `period_vector + delta`.
    pub fn deform(&self, s: &Surface, delta: &[C64]) -> Result<Surface> {
        let d = self.dimension();
        if delta.len() != d {
            return Err(Error::SizeMismatch {
                expected: d,
                found: delta.len(),
            });
        }
        if delta.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return Ok(s.clone());
        }
        let mut hol = s.edge_class_holonomies();
        for (e, h) in hol.iter_mut().enumerate() {
            for j in 0..d {
                let m = self.edge_class_map[j][e];
                if m != 0 {
                    *h += delta[j] * m as f64;
                }
            }
        }
        let eps = s.eps().max(1e-300);
        let mut polygons = Vec::with_capacity(s.polygons().len());
        for (p, poly) in s.polygons().iter().enumerate() {
            let mut pts = Vec::with_capacity(poly.len());
            let mut z = poly[0];
            for edge in 0..poly.len() {
                pts.push(z);
                let (id, sign) = s.edge_class(EdgeRef { polygon: p, edge });
                z += hol[id] * sign as f64;
            }
            let gap = (z - poly[0]).norm();
            if gap > 1e3 * eps {
                return Err(Error::ClosureViolation { polygon: p, gap });
            }
            polygons.push(pts);
        }
        let marks = s.markings().to_vec();
        Surface::from_parts(polygons, &s.gluings(), marks, s.n_free(), s.tolerances()).map_err(
            |err| match err {
                Error::SelfIntersectingPolygon { polygon, .. }
                | Error::NonPositiveArea { polygon, .. } => Error::PolygonDegenerates { polygon },
                other => Error::DeformFailed(other.to_string()),
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;

    fn check_smith(a: &IMat) {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IMat::identity(a.rows));
        assert_eq!(s.v.mul(&s.v_inv), IMat::identity(a.cols));
        for i in 0..a.rows {
            for j in 0..a.cols {
                if i != j || i >= s.rank {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn smith_small_matrices() {
        let a = IMat {
            rows: 3,
            cols: 3,
            data: vec![2, 4, 4, -6, 6, 12, 10, -4, -16],
        };
        check_smith(&a);
        assert_eq!(smith(&a).diagonal(), vec![2, 6, 12]);
        let b = IMat {
            rows: 2,
            cols: 2,
            data: vec![2, 0, 0, 3],
        };
        assert_eq!(smith(&b).diagonal(), vec![1, 6]);
        check_smith(&IMat::zeros(2, 3));
    }

    #[test]
    fn square_torus_chart() {
        let s = Builtin::SquareTorus.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        assert_eq!(ch.dimension(), 2);
        assert_eq!(ch.period_vector, vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
    }

    #[test]
    fn octagon_chart_is_side_vectors() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        assert_eq!(ch.dimension(), 4);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [C64::new(1.0, 0.0), C64::new(h, h), C64::new(0.0, 1.0), C64::new(-h, h)];
        for (a, b) in ch.period_vector.iter().zip(want) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn ranks_of_builtins() {
        for (b, d) in [
            (Builtin::SlitTori { t: 0.3 }, 5),
            (Builtin::MarkedSlitTori { t: 0.2, s: 0.3 }, 6),
            (Builtin::TwoPointTorus { a: 0.25 }, 3),
            (Builtin::SplitTorus { a: 0.5 }, 2),
        ] {
            let s = b.build().unwrap();
            assert_eq!(PeriodChart::compute(&s).unwrap().dimension(), d, "{b}");
        }
    }

    #[test]
    fn basis_cycles_map_to_unit_vectors() {
        let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        for (j, c) in ch.basis.iter().enumerate() {
            let v = ch.class_of(c).unwrap();
            for (i, x) in v.iter().enumerate() {
                assert_eq!(*x, i64::from(i == j));
            }
        }
    }

    #[test]
    fn unmarked_endpoint_is_rejected() {
        let s = Builtin::SplitTorus { a: 0.5 }.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        // The bottom edge of the left rectangle ends at the unmarked cut vertex.
        let (id, _) = s.edge_class(EdgeRef { polygon: 0, edge: 0 });
        let mut chain = vec![0; ch.n_edge_classes()];
        chain[id] = 1;
        assert_eq!(ch.class_of(&chain).unwrap_err(), Error::BoundaryNotMarked);
    }

    #[test]
    fn deform_reaches_target_periods() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        let delta = [
            C64::new(1e-4, -2e-4),
            C64::new(0.5e-4, 0.0),
            C64::new(-1e-4, 1e-4),
            C64::new(0.0, 3e-4),
        ];
        let t = ch.deform(&s, &delta).unwrap();
        let ch2 = PeriodChart::compute(&t).unwrap();
        for j in 0..4 {
            let want = ch.period_vector[j] + delta[j];
            assert!((ch2.period_of_class(&ch.class_of(&ch.basis[j]).unwrap()) - want).norm() < 1e-10);
            assert!((ch2.period_vector[j] - want).norm() < 1e-10);
        }
    }

    #[test]
    fn deform_by_periods_is_rescaling() {
        let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
        let ch = PeriodChart::compute(&s).unwrap();
        let delta: Vec<C64> = ch.period_vector.iter().map(|p| p * 0.1).collect();
        let t = ch.deform(&s, &delta).unwrap();
        assert!((t.area() - 1.21 * s.area()).abs() < 1e-12);
    }
}
