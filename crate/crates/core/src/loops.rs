//! Systole, distances between marked points, and shortest closed
//! geodesics.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom;
use crate::saddle::{SaddleCache, SaddleConnection};
use crate::surface::Surface;
use crate::triangulation::{next, prev, Triangulation};

/// Doublings allowed before an adaptive search gives up.
const MAX_DOUBLINGS: usize = 40;

fn initial_cutoff(s: &Surface) -> f64 {
    s.edge_class_holonomies()
        .iter()
        .map(|h| h.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Shortest saddle connection and its length.
pub fn systole(cache: &SaddleCache<'_>) -> Result<(f64, SaddleConnection)> {
    let mut l = initial_cutoff(cache.surface());
    for _ in 0..MAX_DOUBLINGS {
        let (all, n) = cache.up_to(l)?;
        if n > 0 {
            return Ok((all[0].length, all[0].clone()));
        }
        l *= 2.0;
    }
    Err(Error::BudgetExceeded {
        budget: cache.budget(),
    })
}

/// All-pairs shortest paths over saddle connections of length `<= cutoff`.
/// Entries that exceed `cutoff` are upper bounds only.
pub fn distance_matrix_upto(cache: &SaddleCache<'_>, cutoff: f64) -> Result<Vec<Vec<f64>>> {
    let m = cache.surface().n_marked();
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let (all, n) = cache.up_to(cutoff)?;
    for sc in &all[..n] {
        let (a, b) = (sc.start_mark, sc.end_mark);
        if sc.length < d[a][b] {
            d[a][b] = sc.length;
            d[b][a] = sc.length;
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    Ok(d)
}

/// Certified distances: every finite entry `<= cutoff` is exact. Doubles
/// the cutoff until all pairs are certified.
pub fn distance_matrix(cache: &SaddleCache<'_>) -> Result<(Vec<Vec<f64>>, f64)> {
    let (mut l, _) = systole(cache)?;
    for _ in 0..MAX_DOUBLINGS {
        let d = distance_matrix_upto(cache, l)?;
        if d.iter().flatten().all(|&x| x <= l) {
            return Ok((d, l));
        }
        l *= 2.0;
    }
    Err(Error::BudgetExceeded {
        budget: cache.budget(),
    })
}

/// Flat distance between marked points `i` and `j`.
pub fn distance(cache: &SaddleCache<'_>, i: usize, j: usize) -> Result<f64> {
    let m = cache.surface().n_marked();
    if i >= m || j >= m {
        return Err(Error::ParamOutOfRange(format!(
            "marked point index out of range (have {m})"
        )));
    }
    if i == j {
        return Ok(0.0);
    }
    let (mut l, _) = systole(cache)?;
    for _ in 0..MAX_DOUBLINGS {
        let d = distance_matrix_upto(cache, l)?;
        if d[i][j] <= l {
            return Ok(d[i][j]);
        }
        l *= 2.0;
    }
    Err(Error::BudgetExceeded {
        budget: cache.budget(),
    })
}

/// Minimum distance over the given pairs, certified.
pub fn min_distance(cache: &SaddleCache<'_>, pairs: &[(usize, usize)]) -> Result<Option<f64>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let (mut l, _) = systole(cache)?;
    for _ in 0..MAX_DOUBLINGS {
        let d = distance_matrix_upto(cache, l)?;
        let best = pairs.iter().map(|&(i, j)| d[i][j]).fold(f64::INFINITY, f64::min);
        if best <= l {
            return Ok(Some(best));
        }
        l *= 2.0;
    }
    Err(Error::BudgetExceeded {
        budget: cache.budget(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopReport {
    pub length: f64,
    pub closed_saddle: Option<f64>,
    pub cylinder: Option<f64>,
    /// The two candidate minima are within 10% of each other.
    pub near_tie: bool,
    /// Twice the systole is below the reported loop, so a loop made of
    /// several saddle connections could be shorter.
    pub concatenation_possible: bool,
    pub cutoff: f64,
}

/// Follows the straight flow from local point `q` of triangle `t` in
/// direction `dir` for at most `max_len`. Returns the period if the
/// trajectory closes up without meeting a vertex.
fn flow_period(tr: &Triangulation, t0: usize, q0: C64, dir: C64, max_len: f64, tol: f64) -> Option<f64> {
    let (mut t, mut q) = (t0, q0);
    let mut entered: Option<usize> = None;
    let mut travelled = 0.0;
    let mut first = true;
    while travelled <= max_len {
        let tri = &tr.tris[t];
        let mut exit: Option<(usize, f64, f64)> = None;
        for s in 0..3 {
            if Some(s) == entered {
                continue;
            }
            if let Some((par, u)) = geom::ray_line_intersection(q, dir, tri.pts[s], tri.pts[next(s)]) {
                if par > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) && exit.map_or(true, |e| par < e.1) {
                    exit = Some((s, par, u));
                }
            }
        }
        let (s, par, u) = exit?;
        if !first && t == t0 {
            let w = q0 - q;
            let along = geom::dot(w, dir);
            if geom::cross(dir, w).abs() < tol && along > -tol && along <= par + tol {
                let total = travelled + along;
                return (total <= max_len).then_some(total);
            }
        }
        let side_len = (tri.pts[next(s)] - tri.pts[s]).norm();
        if u * side_len < tol || (1.0 - u) * side_len < tol {
            return None;
        }
        first = false;
        travelled += par;
        let hit = q + dir * par;
        let (nb, ns) = tri.nbr[s];
        q = hit - tri.pts[next(s)] + tr.tris[nb].pts[ns];
        t = nb;
        entered = Some(ns);
    }
    None
}

/// Places a point just off the ray leaving corner `(t, c)` in direction
/// `dir`, on the side given by `sign`, returning its triangle and local
/// coordinates.
fn offset_start(tr: &Triangulation, t: usize, c: usize, dir: C64, sign: f64) -> Option<(usize, C64)> {
    let tri = &tr.tris[t];
    let min_side = (0..3)
        .map(|s| (tri.pts[next(s)] - tri.pts[s]).norm())
        .fold(f64::INFINITY, f64::min);
    let delta = 1e-4 * min_side;
    let p = tri.pts[c] + dir * delta + dir * C64::new(0.0, sign) * (delta * 1e-2);
    let inside = |tri: &crate::triangulation::Tri, p: C64| {
        (0..3).all(|s| geom::cross(tri.pts[next(s)] - tri.pts[s], p - tri.pts[s]) > 0.0)
    };
    if inside(tri, p) {
        return Some((t, p));
    }
    for s in [c, prev(c)] {
        if geom::cross(tri.pts[next(s)] - tri.pts[s], p - tri.pts[s]) <= 0.0 {
            let (nb, ns) = tri.nbr[s];
            let q = p - tri.pts[next(s)] + tr.tris[nb].pts[ns];
            if inside(&tr.tris[nb], q) {
                return Some((nb, q));
            }
        }
    }
    None
}

/// Shortest cylinder circumference among cylinders bounded by the given
/// connections, capped at `max_len`.
pub fn shortest_cylinder(s: &Surface, pool: &[SaddleConnection], max_len: f64) -> Option<f64> {
    let tr = s.triangulation();
    let tol = 1e-9 * s.diameter();
    let mut best: Option<f64> = None;
    for sc in pool {
        let ang = sc.angle();
        if ang >= std::f64::consts::PI {
            continue;
        }
        let dir = sc.holonomy / sc.length;
        let cap = best.unwrap_or(max_len).min(max_len);
        for sign in [1.0, -1.0] {
            if let Some((t, q)) = offset_start(tr, sc.start_corner.0, sc.start_corner.1, dir, sign) {
                if let Some(p) = flow_period(tr, t, q, dir, cap, tol) {
                    if best.map_or(true, |b| p < b) {
                        best = Some(p);
                    }
                }
            }
        }
    }
    best
}

/// Shortest closed geodesic among closed saddle connections and cylinder
/// core curves, with an adaptively doubled certified cutoff.
pub fn shortest_loop(cache: &SaddleCache<'_>) -> Result<LoopReport> {
    let s = cache.surface();
    let (sys, _) = systole(cache)?;
    let mut l = 2.0 * sys;
    for _ in 0..MAX_DOUBLINGS {
        let (all, n) = cache.up_to(l)?;
        let pool = &all[..n];
        let closed = pool.iter().find(|sc| sc.is_closed()).map(|sc| sc.length);
        let cyl = shortest_cylinder(s, pool, l);
        let best = match (closed, cyl) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if let Some(len) = best {
            let near_tie = match (closed, cyl) {
                (Some(a), Some(b)) => (a - b).abs() <= 0.1 * a.min(b) && (a - b).abs() > 1e-9 * a,
                _ => false,
            };
            return Ok(LoopReport {
                length: len,
                closed_saddle: closed,
                cylinder: cyl,
                near_tie,
                concatenation_possible: 2.0 * sys < len * (1.0 - 1e-12),
                cutoff: l,
            });
        }
        l *= 2.0;
    }
    Err(Error::BudgetExceeded {
        budget: cache.budget(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;
    use crate::saddle::DEFAULT_BUDGET;

    fn cache(s: &Surface) -> SaddleCache<'_> {
        SaddleCache::new(s, DEFAULT_BUDGET)
    }

    #[test]
    fn systoles() {
        let sq = Builtin::SquareTorus.build().unwrap();
        assert!((systole(&cache(&sq)).unwrap().0 - 1.0).abs() < 1e-14);
        let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        assert!((systole(&cache(&oct)).unwrap().0 - 1.0).abs() < 1e-12);
        let sl = Builtin::SlitTori { t: 0.1 }.build().unwrap();
        assert!((systole(&cache(&sl)).unwrap().0 - 0.1).abs() < 1e-14);
    }

    #[test]
    fn distances() {
        let sl = Builtin::SlitTori { t: 0.1 }.build().unwrap();
        assert!((distance(&cache(&sl), 0, 1).unwrap() - 0.1).abs() < 1e-14);
        assert_eq!(distance(&cache(&sl), 1, 1).unwrap(), 0.0);
        let tp = Builtin::TwoPointTorus { a: 0.25 }.build().unwrap();
        assert!((distance(&cache(&tp), 0, 1).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn loops() {
        let r = Builtin::RectTorus { w: 1.0, h: 5.0 }.build().unwrap();
        let rep = shortest_loop(&cache(&r)).unwrap();
        assert!((rep.length - 1.0).abs() < 1e-12);
        let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        assert!((shortest_loop(&cache(&oct)).unwrap().length - 1.0).abs() < 1e-12);
        let sl = Builtin::SlitTori { t: 0.1 }.build().unwrap();
        let rep = shortest_loop(&cache(&sl)).unwrap();
        assert!((rep.length - 1.0).abs() < 1e-9);
        assert!(rep.concatenation_possible);
    }

    #[test]
    fn cylinder_without_closed_connection() {
        // Two marks on a torus: the horizontal cylinder has two boundary
        // connections of lengths 0.25 and 0.75, neither closed.
        let tp = Builtin::TwoPointTorus { a: 0.25 }.build().unwrap();
        let c = cache(&tp);
        let (all, n) = c.up_to(1.0).unwrap();
        let pool: Vec<_> = all[..n].iter().filter(|sc| !sc.is_closed()).cloned().collect();
        let cyl = shortest_cylinder(&tp, &pool, 1.5).unwrap();
        assert!((cyl - 1.0).abs() < 1e-9);
    }
}
