//! Finite-difference complex Hessians in period coordinates and their
//! eigenvalue signatures.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{Analysis, FunctionalKind};
use crate::homology::PeriodChart;
use crate::matroid::DEFAULT_EPS_RANK;
use crate::saddle::DEFAULT_BUDGET;
use crate::surface::Surface;

pub const DEFAULT_STEP_FACTOR: f64 = 1e-3;
pub const DEFAULT_TOL_REL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_minus, self.n_zero)
    }

    pub fn nonpositive(&self) -> usize {
        self.n_minus + self.n_zero
    }
}

/// Classifies eigenvalues against an absolute threshold.
pub fn classify(eigenvalues: &[f64], tol: f64) -> Signature {
    let mut s = Signature {
        n_plus: 0,
        n_minus: 0,
        n_zero: 0,
    };
    for &e in eigenvalues {
        if e > tol {
            s.n_plus += 1;
        } else if e < -tol {
            s.n_minus += 1;
        } else {
            s.n_zero += 1;
        }
    }
    s
}

/// Sorted real eigenvalues of a Hermitian matrix and the asymmetry
/// `‖H − H†‖`.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Result<(Vec<f64>, f64)> {
    let asym = (h - h.adjoint()).norm();
    let scale = h.norm().max(f64::MIN_POSITIVE);
    if asym > 1e-8 * scale {
        return Err(Error::NotHermitian(asym));
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut eig: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok((eig, asym))
}

/// Eigenvalues and signature with tolerance `tol_rel × spectral radius`.
pub fn signature(h: &DMatrix<C64>, tol_rel: f64) -> Result<(Vec<f64>, Signature, f64)> {
    let (eig, _) = hermitian_eigenvalues(h)?;
    let radius = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let tol = tol_rel * radius;
    Ok((eig.clone(), classify(&eig, tol), tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HessianOptions {
    /// Absolute step; when `None` the step is `step_factor × systole`.
    pub step: Option<f64>,
    pub step_factor: f64,
    pub tol_rel: f64,
    /// Also compute the Hessian at half the step.
    pub richardson: bool,
    pub budget: usize,
    pub eps_rank: f64,
}

impl Default for HessianOptions {
    fn default() -> Self {
        HessianOptions {
            step: None,
            step_factor: DEFAULT_STEP_FACTOR,
            tol_rel: DEFAULT_TOL_REL,
            richardson: true,
            budget: DEFAULT_BUDGET,
            eps_rank: DEFAULT_EPS_RANK,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfStepCheck {
    pub step: f64,
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
    /// `‖H(h) − H(h/2)‖ / ‖H(h)‖`.
    pub relative_difference: f64,
    pub signature_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HessianReport {
    pub functional: String,
    pub dimension: usize,
    pub value: f64,
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
    pub tol_eig: f64,
    pub step: f64,
    pub residual: f64,
    /// `‖H P̄‖ / (‖H‖ ‖P‖)` for the period vector `P`: zero when the
    /// Levi form vanishes along the scaling line.
    pub scaling_residual: f64,
    /// The witness basis changed somewhere in the stencil.
    pub non_smooth: bool,
    pub half_step: Option<HalfStepCheck>,
    /// For scale-invariant functionals: the form on the quotient by the
    /// scaling line, i.e. on the tangent space of the projectivized stratum.
    pub projective: Option<ProjectiveForm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectiveForm {
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
}

impl HessianReport {
    pub fn matrix(&self) -> DMatrix<C64> {
        let d = self.dimension;
        DMatrix::from_fn(d, d, |i, j| C64::new(self.matrix_re[i][j], self.matrix_im[i][j]))
    }
}

/// Real perturbation direction `k` of `2d`: even `k` moves `Re z_{k/2}`,
/// odd `k` moves `Im z_{k/2}`.
fn unit(k: usize) -> (usize, C64) {
    if k % 2 == 0 {
        (k / 2, C64::new(1.0, 0.0))
    } else {
        (k / 2, C64::new(0.0, 1.0))
    }
}

struct Probe {
    values: Vec<f64>,
    keys: Vec<Vec<Vec<i64>>>,
}

fn probe(s: &Surface, chart: &PeriodChart, delta: &[C64], kinds: &[FunctionalKind], opts: &HessianOptions) -> Result<Probe> {
    let t = if delta.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        s.clone()
    } else {
        chart.deform(s, delta).map_err(|e| match e {
            Error::PolygonDegenerates { polygon } => {
                Error::DeformFailed(format!("polygon {polygon} degenerates; reduce the step"))
            }
            other => other,
        })?
    };
    let a = Analysis::with_budget(&t, opts.budget, opts.eps_rank)?;
    let mut values = Vec::with_capacity(kinds.len());
    let mut keys = Vec::with_capacity(kinds.len());
    for k in kinds {
        let v = a.evaluate(k)?;
        values.push(v.value);
        keys.push(v.witness_key);
    }
    Ok(Probe { values, keys })
}

/// Real Hessians (one per functional) on `R^{2d}` by central differences.
fn real_hessians(
    s: &Surface,
    chart: &PeriodChart,
    kinds: &[FunctionalKind],
    h: f64,
    opts: &HessianOptions,
) -> Result<(Vec<DMatrix<f64>>, Vec<f64>, Vec<bool>)> {
    let d = chart.dimension();
    let n = 2 * d;
    // Stencil: center, ±h e_k, and (±h e_k ± h e_l) for k < l.
    let mut points: Vec<Vec<(usize, f64)>> = vec![Vec::new()];
    for k in 0..n {
        points.push(vec![(k, h)]);
        points.push(vec![(k, -h)]);
    }
    for k in 0..n {
        for l in (k + 1)..n {
            for (a, b) in [(h, h), (h, -h), (-h, h), (-h, -h)] {
                points.push(vec![(k, a), (l, b)]);
            }
        }
    }
    let probes: Vec<Result<Probe>> = points
        .par_iter()
        .map(|pt| {
            let mut delta = vec![C64::new(0.0, 0.0); d];
            for &(k, step) in pt {
                let (a, u) = unit(k);
                delta[a] += u * step;
            }
            probe(s, chart, &delta, kinds, opts)
        })
        .collect();
    let probes: Vec<Probe> = probes.into_iter().collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(kinds.len());
    let mut rough = Vec::with_capacity(kinds.len());
    for f in 0..kinds.len() {
        let val = |i: usize| probes[i].values[f];
        let mut r = DMatrix::<f64>::zeros(n, n);
        let f0 = val(0);
        for k in 0..n {
            r[(k, k)] = (val(1 + 2 * k) - 2.0 * f0 + val(2 + 2 * k)) / (h * h);
        }
        let mut idx = 1 + 2 * n;
        for k in 0..n {
            for l in (k + 1)..n {
                let v = (val(idx) - val(idx + 1) - val(idx + 2) + val(idx + 3)) / (4.0 * h * h);
                r[(k, l)] = v;
                r[(l, k)] = v;
                idx += 4;
            }
        }
        out.push(r);
        let key0 = &probes[0].keys[f];
        rough.push(probes.iter().any(|p| &p.keys[f] != key0));
    }
    let centers = probes[0].values.clone();
    Ok((out, centers, rough))
}

/// `H_ab = ¼[(f_{x_a x_b} + f_{y_a y_b}) + i(f_{x_a y_b} − f_{y_a x_b})]`.
pub fn complex_from_real(r: &DMatrix<f64>) -> DMatrix<C64> {
    let d = r.nrows() / 2;
    DMatrix::from_fn(d, d, |a, b| {
        let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        C64::new(r[(xa, xb)] + r[(ya, yb)], r[(xa, yb)] - r[(ya, xb)]) * 0.25
    })
}

fn to_rows(h: &DMatrix<C64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let d = h.nrows();
    let re = (0..d).map(|i| (0..d).map(|j| h[(i, j)].re).collect()).collect();
    let im = (0..d).map(|i| (0..d).map(|j| h[(i, j)].im).collect()).collect();
    (re, im)
}

fn scaling_residual(h: &DMatrix<C64>, periods: &[C64]) -> f64 {
    let p = nalgebra::DVector::from_iterator(periods.len(), periods.iter().map(|z| z.conj()));
    let hp = h * &p;
    let (eig, _) = hermitian_eigenvalues(h).unwrap_or((vec![h.norm()], 0.0));
    let radius = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if radius == 0.0 {
        return 0.0;
    }
    hp.norm() / (radius * p.norm())
}

/// Restricts `h` to the orthogonal complement of `P̄` and classifies it
/// with the absolute tolerance `tol`.
pub fn projective_form(h: &DMatrix<C64>, periods: &[C64], tol: f64) -> Result<ProjectiveForm> {
    let d = periods.len();
    let norm = periods.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut basis: Vec<nalgebra::DVector<C64>> =
        vec![nalgebra::DVector::from_iterator(d, periods.iter().map(|z| z.conj() / norm))];
    for j in 0..d {
        let mut v = nalgebra::DVector::<C64>::zeros(d);
        v[j] = C64::new(1.0, 0.0);
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v / C64::new(n, 0.0));
        }
    }
    let q = DMatrix::from_columns(&basis[1..]);
    let hp = q.adjoint() * h * &q;
    let (eig, _) = hermitian_eigenvalues(&hp)?;
    let signature = classify(&eig, tol);
    Ok(ProjectiveForm { eigenvalues: eig, signature })
}

/// The step used when none is given: `step_factor × systole`.
pub fn default_step(s: &Surface, opts: &HessianOptions) -> Result<f64> {
    match opts.step {
        Some(h) if h > 0.0 => Ok(h),
        Some(h) => Err(Error::ParamOutOfRange(format!("step {h} must be positive"))),
        None => {
            let a = Analysis::with_budget(s, opts.budget, opts.eps_rank)?;
            Ok(opts.step_factor * a.systole()?.0)
        }
    }
}

/// Complex Hessians of several functionals sharing one stencil.
pub fn complex_hessians(s: &Surface, kinds: &[FunctionalKind], opts: &HessianOptions) -> Result<Vec<HessianReport>> {
    let chart = PeriodChart::compute(s)?;
    let h = default_step(s, opts)?;
    let (reals, centers, rough) = real_hessians(s, &chart, kinds, h, opts)?;
    let halves = if opts.richardson {
        Some(real_hessians(s, &chart, kinds, h / 2.0, opts)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(kinds.len());
    for (f, kind) in kinds.iter().enumerate() {
        let hc = complex_from_real(&reals[f]);
        let residual = (&hc - hc.adjoint()).norm();
        let (eig, sig, tol) = signature(&hc, opts.tol_rel)?;
        let mut non_smooth = rough[f];
        let half_step = match &halves {
            Some((hr, _, hrough)) => {
                non_smooth |= hrough[f];
                let hc2 = complex_from_real(&hr[f]);
                let (eig2, sig2, _) = signature(&hc2, opts.tol_rel)?;
                let denom = hc.norm().max(f64::MIN_POSITIVE);
                Some(HalfStepCheck {
                    step: h / 2.0,
                    eigenvalues: eig2,
                    signature: sig2,
                    relative_difference: (&hc - &hc2).norm() / denom,
                    signature_stable: sig2 == sig,
                })
            }
            None => None,
        };
        let projective = if kind.is_projective() {
            Some(projective_form(&hc, &chart.period_vector, tol)?)
        } else {
            None
        };
        let (re, im) = to_rows(&hc);
        out.push(HessianReport {
            functional: kind.to_string(),
            dimension: chart.dimension(),
            value: centers[f],
            matrix_re: re,
            matrix_im: im,
            eigenvalues: eig,
            signature: sig,
            tol_eig: tol,
            step: h,
            residual,
            scaling_residual: scaling_residual(&hc, &chart.period_vector),
            non_smooth,
            half_step,
            projective,
        });
    }
    Ok(out)
}

pub fn complex_hessian_fd(s: &Surface, kind: &FunctionalKind, opts: &HessianOptions) -> Result<HessianReport> {
    Ok(complex_hessians(s, std::slice::from_ref(kind), opts)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub q: usize,
    pub nonpositive: usize,
    pub passes: bool,
    /// For projective functionals: the scaling direction is annihilated.
    pub scaling_ok: Option<bool>,
    pub report: HessianReport,
}

pub const SCALING_TOL: f64 = 1e-4;

/// Checks at most `q − 1` nonpositive eigenvalues on a computed report.
/// Scale-invariant functionals live on the projectivized stratum, so they
/// are counted on the quotient by the scaling line, which must also be a
/// kernel direction.
pub fn convexity_from_report(kind: &FunctionalKind, report: HessianReport, q: usize) -> ConvexityReport {
    let nonpositive = report
        .projective
        .as_ref()
        .map_or(report.signature, |p| p.signature)
        .nonpositive();
    let scaling_ok = kind
        .is_projective()
        .then(|| report.scaling_residual < SCALING_TOL);
    ConvexityReport {
        q,
        nonpositive,
        passes: nonpositive + 1 <= q && scaling_ok.unwrap_or(true),
        scaling_ok,
        report,
    }
}

pub fn convexity_check(s: &Surface, kind: &FunctionalKind, q: usize, opts: &HessianOptions) -> Result<ConvexityReport> {
    let rep = complex_hessian_fd(s, kind, opts)?;
    Ok(convexity_from_report(kind, rep, q))
}
