//! Named test-surface generators.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::surface::{EdgeRef, Marking, Surface, Tolerances, VertexRef};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    SquareTorus,
    RectTorus { w: f64, h: f64 },
    RegularOctagon { side: f64 },
    SlitTori { t: f64 },
    StretchedSlitTori { t: f64, h: f64 },
    /// Slit tori with an extra free marked point on the bottom edge of the
    /// first torus, `s` to the right of the slit end.
    MarkedSlitTori { t: f64, s: f64 },
    /// Unit square torus with free marks at `0` and `a`.
    TwoPointTorus { a: f64 },
    /// Unit square torus cut into two vertical rectangles at `x = a`; the
    /// cut leaves an unmarked regular vertex class.
    SplitTorus { a: f64 },
}

pub const FAMILY_NAMES: &[&str] = &[
    "square_torus",
    "rect_torus",
    "regular_octagon",
    "slit_tori",
    "stretched_slit_tori",
    "marked_slit_tori",
    "two_point_torus",
    "split_torus",
];

fn c(x: f64, y: f64) -> C64 {
    C64::new(x, y)
}

fn e(polygon: usize, edge: usize) -> EdgeRef {
    EdgeRef { polygon, edge }
}

fn mark(polygon: usize, vertex: usize, order: u32) -> Marking {
    Marking {
        vertex: VertexRef { polygon, vertex },
        order,
        free: order == 0,
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} = {v} must be positive")))
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} = {v} must lie in (0, 1)")))
    }
}

/// Hexagon `[0,1] x [0,h]` with extra vertices at `(t,0)` and `(t,h)`,
/// shifted by `dx`.
fn slit_hexagon(t: f64, h: f64, dx: f64) -> Vec<C64> {
    vec![
        c(dx, 0.0),
        c(dx + t, 0.0),
        c(dx + 1.0, 0.0),
        c(dx + 1.0, h),
        c(dx + t, h),
        c(dx, h),
    ]
}

impl Builtin {
    /// Parses `name` or `name(p1, p2, ...)`.
    pub fn parse(spec: &str) -> Result<Builtin> {
        let spec = spec.trim();
        let (name, args) = match spec.find('(') {
            Some(i) => {
                if !spec.ends_with(')') {
                    return Err(Error::UnknownFamily(format!("malformed family `{spec}`")));
                }
                (&spec[..i], &spec[i + 1..spec.len() - 1])
            }
            None => (spec, ""),
        };
        let params: Vec<f64> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::ParamOutOfRange(format!("`{a}` is not a number")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_name(name.trim(), &params)
    }

    pub fn from_name(name: &str, p: &[f64]) -> Result<Builtin> {
        let want = |n: usize| -> Result<()> {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::ParamOutOfRange(format!(
                    "{name} takes {n} parameter(s), got {}",
                    p.len()
                )))
            }
        };
        let b = match name {
            "square_torus" => {
                want(0)?;
                Builtin::SquareTorus
            }
            "rect_torus" => {
                want(2)?;
                Builtin::RectTorus { w: p[0], h: p[1] }
            }
            "regular_octagon" | "octagon" => match p.len() {
                0 => Builtin::RegularOctagon { side: 1.0 },
                _ => {
                    want(1)?;
                    Builtin::RegularOctagon { side: p[0] }
                }
            },
            "slit_tori" => {
                want(1)?;
                Builtin::SlitTori { t: p[0] }
            }
            "stretched_slit_tori" => {
                want(2)?;
                Builtin::StretchedSlitTori { t: p[0], h: p[1] }
            }
            "marked_slit_tori" => {
                want(2)?;
                Builtin::MarkedSlitTori { t: p[0], s: p[1] }
            }
            "two_point_torus" => {
                want(1)?;
                Builtin::TwoPointTorus { a: p[0] }
            }
            "split_torus" => {
                want(1)?;
                Builtin::SplitTorus { a: p[0] }
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<()> {
        match *self {
            Builtin::SquareTorus => Ok(()),
            Builtin::RectTorus { w, h } => positive("w", w).and(positive("h", h)),
            Builtin::RegularOctagon { side } => positive("s", side),
            Builtin::SlitTori { t } => unit_interval("t", t),
            Builtin::StretchedSlitTori { t, h } => unit_interval("t", t).and(positive("h", h)),
            Builtin::MarkedSlitTori { t, s } => {
                unit_interval("t", t)?;
                positive("s", s)?;
                if t + s >= 1.0 {
                    return Err(Error::ParamOutOfRange(format!("t + s = {} must be < 1", t + s)));
                }
                Ok(())
            }
            Builtin::TwoPointTorus { a } => unit_interval("a", a),
            Builtin::SplitTorus { a } => unit_interval("a", a),
        }
    }

    pub fn build(&self) -> Result<Surface> {
        self.build_with(Tolerances::default())
    }

    pub fn build_with(&self, tol: Tolerances) -> Result<Surface> {
        self.check()?;
        match *self {
            Builtin::SquareTorus => rect(1.0, 1.0, tol),
            Builtin::RectTorus { w, h } => rect(w, h, tol),
            Builtin::RegularOctagon { side } => octagon(side, tol),
            Builtin::SlitTori { t } => slit(t, 1.0, tol),
            Builtin::StretchedSlitTori { t, h } => slit(t, h, tol),
            Builtin::MarkedSlitTori { t, s } => marked_slit(t, s, tol),
            Builtin::TwoPointTorus { a } => two_point(a, tol),
            Builtin::SplitTorus { a } => split(a, tol),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::SquareTorus => write!(f, "square_torus"),
            Builtin::RectTorus { w, h } => write!(f, "rect_torus({w},{h})"),
            Builtin::RegularOctagon { side } => write!(f, "regular_octagon({side})"),
            Builtin::SlitTori { t } => write!(f, "slit_tori({t})"),
            Builtin::StretchedSlitTori { t, h } => write!(f, "stretched_slit_tori({t},{h})"),
            Builtin::MarkedSlitTori { t, s } => write!(f, "marked_slit_tori({t},{s})"),
            Builtin::TwoPointTorus { a } => write!(f, "two_point_torus({a})"),
            Builtin::SplitTorus { a } => write!(f, "split_torus({a})"),
        }
    }
}

fn rect(w: f64, h: f64, tol: Tolerances) -> Result<Surface> {
    let poly = vec![c(0.0, 0.0), c(w, 0.0), c(w, h), c(0.0, h)];
    Surface::from_parts(
        vec![poly],
        &[(e(0, 0), e(0, 2)), (e(0, 1), e(0, 3))],
        vec![mark(0, 0, 0)],
        1,
        tol,
    )
}

fn octagon(s: f64, tol: Tolerances) -> Result<Surface> {
    let mut pts = Vec::with_capacity(8);
    let mut z = c(0.0, 0.0);
    for k in 0..8 {
        pts.push(z);
        z += C64::from_polar(s, PI * k as f64 / 4.0);
    }
    let gluings: Vec<_> = (0..4).map(|k| (e(0, k), e(0, k + 4))).collect();
    Surface::from_parts(vec![pts], &gluings, vec![mark(0, 0, 2)], 0, tol)
}

fn slit(t: f64, h: f64, tol: Tolerances) -> Result<Surface> {
    let a = slit_hexagon(t, 1.0, 0.0);
    let b = slit_hexagon(t, h, 2.0);
    let gluings = [
        (e(0, 1), e(0, 3)),
        (e(0, 2), e(0, 5)),
        (e(1, 1), e(1, 3)),
        (e(1, 2), e(1, 5)),
        (e(0, 0), e(1, 4)),
        (e(1, 0), e(0, 4)),
    ];
    Surface::from_parts(
        vec![a, b],
        &gluings,
        vec![mark(0, 0, 1), mark(0, 1, 1)],
        0,
        tol,
    )
}

fn marked_slit(t: f64, s: f64, tol: Tolerances) -> Result<Surface> {
    let x = t + s;
    let a = vec![
        c(0.0, 0.0),
        c(t, 0.0),
        c(x, 0.0),
        c(1.0, 0.0),
        c(1.0, 1.0),
        c(x, 1.0),
        c(t, 1.0),
        c(0.0, 1.0),
    ];
    let b = slit_hexagon(t, 1.0, 2.0);
    let gluings = [
        (e(0, 1), e(0, 5)),
        (e(0, 2), e(0, 4)),
        (e(0, 3), e(0, 7)),
        (e(1, 1), e(1, 3)),
        (e(1, 2), e(1, 5)),
        (e(0, 0), e(1, 4)),
        (e(1, 0), e(0, 6)),
    ];
    Surface::from_parts(
        vec![a, b],
        &gluings,
        vec![mark(0, 2, 0), mark(0, 0, 1), mark(0, 1, 1)],
        1,
        tol,
    )
}

fn two_point(a: f64, tol: Tolerances) -> Result<Surface> {
    let poly = vec![
        c(0.0, 0.0),
        c(a, 0.0),
        c(1.0, 0.0),
        c(1.0, 1.0),
        c(a, 1.0),
        c(0.0, 1.0),
    ];
    Surface::from_parts(
        vec![poly],
        &[(e(0, 0), e(0, 4)), (e(0, 1), e(0, 3)), (e(0, 2), e(0, 5))],
        vec![mark(0, 0, 0), mark(0, 1, 0)],
        2,
        tol,
    )
}

fn split(a: f64, tol: Tolerances) -> Result<Surface> {
    let left = vec![c(0.0, 0.0), c(a, 0.0), c(a, 1.0), c(0.0, 1.0)];
    let right = vec![c(a, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(a, 1.0)];
    Surface::from_parts(
        vec![left, right],
        &[
            (e(0, 0), e(0, 2)),
            (e(1, 0), e(1, 2)),
            (e(0, 1), e(1, 3)),
            (e(1, 1), e(0, 3)),
        ],
        vec![mark(0, 0, 0)],
        1,
        tol,
    )
}
