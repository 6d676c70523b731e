//! Saddle connection enumeration by unfolding corner wedges through the
//! triangulation.

use std::rc::Rc;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom;
use crate::surface::{EdgeRef, Surface};
use crate::triangulation::{next, prev, Chain, Tri, Triangulation};

pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Relative angular tolerance for collinearity of a vertex with a ray.
const ANG_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub start_mark: usize,
    pub end_mark: usize,
    pub holonomy: C64,
    pub length: f64,
    /// Polygon edges crossed, in order.
    pub crossing_sequence: Vec<EdgeRef>,
    /// Edge-class chain homologous to the segment relative to its endpoints.
    pub chain: Chain,
    /// Triangle and corner the segment leaves from.
    #[serde(skip)]
    pub start_corner: (usize, usize),
}

impl SaddleConnection {
    pub fn angle(&self) -> f64 {
        geom::angle(self.holonomy)
    }

    pub fn is_closed(&self) -> bool {
        self.start_mark == self.end_mark
    }
}

struct Step {
    edge: EdgeRef,
    prev: Option<Rc<Step>>,
}

type Path = Option<Rc<Step>>;

fn push_path(path: &Path, tri: &Tri, side: usize) -> Path {
    match tri.side_edge[side] {
        Some(edge) => Some(Rc::new(Step {
            edge,
            prev: path.clone(),
        })),
        None => path.clone(),
    }
}

fn collect_path(path: &Path) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    let mut cur = path.clone();
    while let Some(step) = cur {
        out.push(step.edge);
        cur = step.prev.clone();
    }
    out.reverse();
    out
}

fn add_chain(a: &Chain, b: &Chain) -> Chain {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

struct Frame {
    tri: usize,
    side: usize,
    off: C64,
    lo: C64,
    hi: C64,
    chain: Chain,
    path: Path,
}

struct Search<'a> {
    surface: &'a Surface,
    tr: &'a Triangulation,
    max_len: f64,
    len_eps: f64,
    budget: usize,
    nodes: &'a AtomicUsize,
    start_mark: usize,
    start_corner: (usize, usize),
    out: Vec<SaddleConnection>,
}

impl<'a> Search<'a> {
    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            Err(Error::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn mark_of(&self, class: usize) -> Option<usize> {
        self.surface.vertex_classes()[class].mark
    }

    /// Offset of triangle `nb` after crossing side `side` of `tri` placed
    /// at offset `off`.
    fn cross_offset(&self, tri: usize, side: usize, off: C64) -> (usize, usize, C64) {
        let t = &self.tr.tris[tri];
        let (nb, ns) = t.nbr[side];
        let n = &self.tr.tris[nb];
        (nb, ns, t.pts[next(side)] + off - n.pts[ns])
    }

    fn side_too_far(&self, tri: usize, side: usize, off: C64) -> bool {
        let t = &self.tr.tris[tri];
        let a = t.pts[side] + off;
        let b = t.pts[next(side)] + off;
        geom::point_segment_distance(C64::new(0.0, 0.0), a, b) > self.max_len + self.len_eps
    }

    /// A straight segment from the origin reached vertex `w` (developed
    /// position) of class `class`.
    fn hit(&mut self, w: C64, class: usize, chain: Chain, path: Path) -> Result<()> {
        let len = w.norm();
        if len > self.max_len + self.len_eps {
            return Ok(());
        }
        match self.mark_of(class) {
            Some(m) => {
                self.out.push(SaddleConnection {
                    start_mark: self.start_mark,
                    end_mark: m,
                    holonomy: w,
                    length: len,
                    crossing_sequence: collect_path(&path),
                    chain,
                    start_corner: self.start_corner,
                });
                Ok(())
            }
            None => self.continue_through(w, class, chain, path),
        }
    }

    /// Continues the ray from the origin through the regular vertex `w`.
    fn continue_through(&mut self, w: C64, class: usize, chain: Chain, path: Path) -> Result<()> {
        let dir = w / w.norm();
        for &(t, c) in &self.tr.corners[class] {
            let tri = &self.tr.tris[t];
            let lo = tri.pts[next(c)] - tri.pts[c];
            let hi = tri.pts[prev(c)] - tri.pts[c];
            let on_lo = geom::cross(lo, dir).abs() <= ANG_TOL * lo.norm() && geom::dot(lo, dir) > 0.0;
            let inside = geom::cross(lo, dir) > ANG_TOL * lo.norm()
                && geom::cross(dir, hi) > ANG_TOL * hi.norm();
            if on_lo || inside {
                let off = w - tri.pts[c];
                return self.ray_from_corner(t, c, off, dir, on_lo, chain, path);
            }
        }
        Err(Error::Malformed(
            "no corner contains the continuation of a ray through a regular vertex".into(),
        ))
    }

    /// Follows a single ray leaving corner `c` of triangle `t`.
    #[allow(clippy::too_many_arguments)]
    fn ray_from_corner(
        &mut self,
        t: usize,
        c: usize,
        off: C64,
        dir: C64,
        along_side: bool,
        chain: Chain,
        path: Path,
    ) -> Result<()> {
        self.tick()?;
        let tri = &self.tr.tris[t];
        let right = add_chain(&chain, &tri.side_chain[c]);
        if along_side {
            let v = tri.pts[next(c)] + off;
            let class = tri.class[next(c)];
            return self.hit(v, class, right, path);
        }
        let opp = next(c);
        if self.side_too_far(t, opp, off) {
            return Ok(());
        }
        let mut path = push_path(&path, tri, opp);
        let (mut cur, mut side, mut off) = self.cross_offset(t, opp, off);
        let mut chain = right;
        loop {
            self.tick()?;
            let n = &self.tr.tris[cur];
            let w = n.pts[prev(side)] + off;
            let cr = geom::cross(dir, w);
            let exit = if cr.abs() <= ANG_TOL * w.norm() && geom::dot(dir, w) > 0.0 {
                let ch = add_chain(&chain, &n.side_chain[next(side)]);
                return self.hit(w, n.class[prev(side)], ch, path);
            } else if cr > 0.0 {
                next(side)
            } else {
                chain = add_chain(&chain, &n.side_chain[next(side)]);
                prev(side)
            };
            if self.side_too_far(cur, exit, off) {
                return Ok(());
            }
            path = push_path(&path, n, exit);
            let (nb, ns, noff) = self.cross_offset(cur, exit, off);
            cur = nb;
            side = ns;
            off = noff;
        }
    }

    fn run_corner(&mut self, t: usize, a: usize) -> Result<()> {
        let tri = &self.tr.tris[t];
        let off = -tri.pts[a];
        let lo = tri.pts[next(a)] + off;
        let hi = tri.pts[prev(a)] + off;
        // The wedge is half open: its first ray runs along side `a`.
        self.ray_from_corner(t, a, off, lo / lo.norm(), true, vec![0; tri.side_chain[0].len()], None)?;
        let opp = next(a);
        if self.side_too_far(t, opp, off) {
            return Ok(());
        }
        let (nb, ns, noff) = self.cross_offset(t, opp, off);
        let mut stack = vec![Frame {
            tri: nb,
            side: ns,
            off: noff,
            lo,
            hi,
            chain: tri.side_chain[a].clone(),
            path: push_path(&None, tri, opp),
        }];
        while let Some(f) = stack.pop() {
            self.tick()?;
            let n = &self.tr.tris[f.tri];
            let w = n.pts[prev(f.side)] + f.off;
            let wn = w.norm();
            let left_of_lo = geom::cross(f.lo, w) > ANG_TOL * f.lo.norm() * wn;
            let right_of_hi = geom::cross(w, f.hi) > ANG_TOL * f.hi.norm() * wn;
            let r_side = next(f.side);
            let l_side = prev(f.side);
            let r_chain = add_chain(&f.chain, &n.side_chain[r_side]);
            let push = |stack: &mut Vec<Frame>, exit: usize, lo: C64, hi: C64, chain: Chain| {
                if !self.side_too_far(f.tri, exit, f.off) {
                    let (nb, ns, noff) = self.cross_offset(f.tri, exit, f.off);
                    stack.push(Frame {
                        tri: nb,
                        side: ns,
                        off: noff,
                        lo,
                        hi,
                        chain,
                        path: push_path(&f.path, n, exit),
                    });
                }
            };
            if left_of_lo && right_of_hi {
                push(&mut stack, r_side, f.lo, w, f.chain.clone());
                push(&mut stack, l_side, w, f.hi, r_chain.clone());
                self.hit(w, n.class[prev(f.side)], r_chain, f.path.clone())?;
            } else if !left_of_lo {
                push(&mut stack, l_side, f.lo, f.hi, r_chain);
            } else {
                push(&mut stack, r_side, f.lo, f.hi, f.chain.clone());
            }
        }
        Ok(())
    }
}

fn sort_key_cmp(a: &SaddleConnection, b: &SaddleConnection) -> std::cmp::Ordering {
    a.length
        .total_cmp(&b.length)
        .then(a.angle().total_cmp(&b.angle()))
        .then(a.start_mark.cmp(&b.start_mark))
        .then(a.end_mark.cmp(&b.end_mark))
        .then(a.holonomy.re.total_cmp(&b.holonomy.re))
        .then(a.holonomy.im.total_cmp(&b.holonomy.im))
}

/// All saddle connections of length at most `max_len`, each once per
/// orientation, sorted by length, angle, start, end.
pub fn enumerate_saddles(s: &Surface, max_len: f64, budget: usize) -> Result<Vec<SaddleConnection>> {
    if !(max_len > 0.0) {
        return Err(Error::ParamOutOfRange(format!(
            "length bound {max_len} must be positive"
        )));
    }
    let tr = s.triangulation();
    let nodes = AtomicUsize::new(0);
    let mut starts = Vec::new();
    for (t, tri) in tr.tris.iter().enumerate() {
        for c in 0..3 {
            if let Some(m) = s.vertex_classes()[tri.class[c]].mark {
                starts.push((t, c, m));
            }
        }
    }
    let parts: Vec<Result<Vec<SaddleConnection>>> = starts
        .par_iter()
        .map(|&(t, c, m)| {
            let mut search = Search {
                surface: s,
                tr,
                max_len,
                len_eps: 1e-9 * max_len,
                budget,
                nodes: &nodes,
                start_mark: m,
                start_corner: (t, c),
                out: Vec::new(),
            };
            search.run_corner(t, c)?;
            Ok(search.out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
    }
    all.sort_by(sort_key_cmp);
    Ok(all)
}

/// Enumeration cache for one surface. Keeps the largest enumeration made
/// so far and answers smaller cutoffs by filtering it.
pub struct SaddleCache<'a> {
    surface: &'a Surface,
    budget: usize,
    cached: Mutex<Option<(f64, Arc<Vec<SaddleConnection>>)>>,
}

impl<'a> SaddleCache<'a> {
    pub fn new(surface: &'a Surface, budget: usize) -> Self {
        SaddleCache {
            surface,
            budget,
            cached: Mutex::new(None),
        }
    }

    pub fn surface(&self) -> &'a Surface {
        self.surface
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Connections of length `<= max_len`, as a sorted slice of the cache.
    pub fn up_to(&self, max_len: f64) -> Result<(Arc<Vec<SaddleConnection>>, usize)> {
        let mut guard = self.cached.lock().expect("saddle cache poisoned");
        let all = match &*guard {
            Some((l, v)) if *l >= max_len => v.clone(),
            _ => {
                let v = Arc::new(enumerate_saddles(self.surface, max_len, self.budget)?);
                *guard = Some((max_len, v.clone()));
                v
            }
        };
        let cut = max_len * (1.0 + 1e-9);
        let count = all.partition_point(|sc| sc.length <= cut);
        Ok((all, count))
    }
}
