//! Evaluation of a functional along a one-parameter builtin family, with a
//! least-squares fit in the family's chart.

use rayon::prelude::*;
use serde::Serialize;

use crate::builtin::Builtin;
use crate::error::{Error, Result};
use crate::functionals::{evaluate, FunctionalKind};

/// `t0` of the stretch family.
pub const STRETCH_SLIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Family {
    /// `slit_tori(t)`
    Slit,
    /// `stretched_slit_tori(0.1, h)`
    Stretch,
    /// `rect_torus(1, h)`
    Rect,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family> {
        match name {
            "slit" => Ok(Family::Slit),
            "stretch" => Ok(Family::Stretch),
            "rect" => Ok(Family::Rect),
            other => Err(Error::UnknownFamily(format!(
                "sweep family `{other}` (expected slit, stretch, rect)"
            ))),
        }
    }

    pub fn member(&self, p: f64) -> Builtin {
        match self {
            Family::Slit => Builtin::SlitTori { t: p },
            Family::Stretch => Builtin::StretchedSlitTori { t: STRETCH_SLIT, h: p },
            Family::Rect => Builtin::RectTorus { w: 1.0, h: p },
        }
    }

    /// Parameter grid: logarithmic for the slit family, linear otherwise.
    pub fn grid(&self, from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
        if steps < 2 || !(from > 0.0) || !(to > from) {
            return Err(Error::ParamOutOfRange(format!(
                "need 0 < from < to and at least 2 steps (got {from}, {to}, {steps})"
            )));
        }
        let m = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                let u = i as f64 / m;
                match self {
                    Family::Slit => (from.ln() + u * (to.ln() - from.ln())).exp(),
                    _ => from + u * (to - from),
                }
            })
            .collect())
    }

    /// Chart `(x, y)` in which the divergence law is linear.
    pub fn chart(&self, p: f64, value: f64) -> (f64, f64) {
        match self {
            Family::Slit => (p.recip().ln(), value.ln()),
            Family::Stretch => (p, value),
            Family::Rect => (p.ln(), value),
        }
    }

    pub fn chart_labels(&self) -> (&'static str, &'static str) {
        match self {
            Family::Slit => ("log(1/t)", "log(value)"),
            Family::Stretch => ("h", "value"),
            Family::Rect => ("log(h)", "value"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub value: Option<f64>,
    pub flags: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
        points: n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub family: Family,
    pub functional: String,
    pub rows: Vec<SweepRow>,
    pub fit: Option<LinearFit>,
}

pub fn family_sweep(
    family: Family,
    from: f64,
    to: f64,
    steps: usize,
    kind: &FunctionalKind,
    budget: usize,
    eps_rank: f64,
) -> Result<SweepTable> {
    let grid = family.grid(from, to, steps)?;
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&p| {
            let res = family
                .member(p)
                .build()
                .and_then(|s| evaluate(&s, kind, budget, eps_rank));
            match res {
                Ok(v) => SweepRow {
                    param: p,
                    value: Some(v.value),
                    flags: v.flags,
                },
                Err(e) => SweepRow {
                    param: p,
                    value: None,
                    flags: vec![format!("error:{}", e.to_string().split(':').next().unwrap_or(""))],
                },
            }
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.value.map(|v| family.chart(r.param, v)))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .unzip();
    Ok(SweepTable {
        family,
        functional: kind.to_string(),
        rows,
        fit: fit_line(&xs, &ys),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert!((f.r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rect_exh_closed_form() {
        let t = family_sweep(Family::Rect, 1.0, 6.0, 6, &FunctionalKind::ExhM, 1_000_000, 1e-8).unwrap();
        for r in &t.rows {
            let h = r.param;
            assert!((r.value.unwrap() - (h + 1.0 / h).ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = Family::Slit.grid(1e-4, 1e-1, 4).unwrap();
        assert!((g[0] - 1e-4).abs() < 1e-18 && (g[3] - 1e-1).abs() < 1e-15);
        assert!((g[1] - 1e-3).abs() < 1e-15);
    }
}
