//! The acceptance suite: ten end-to-end checks, each returning a pass/fail
//! outcome with a one-line detail. Used by the `verify` subcommand and the
//! `acceptance` test target.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtin::Builtin;
use crate::error::{Error, Result};
use crate::functionals::{c_const, chi, Analysis, FunctionalKind};
use crate::hessian::{complex_hessians, convexity_from_report, HessianOptions};
use crate::homology::PeriodChart;
use crate::matroid::{Span, DEFAULT_EPS_RANK};
use crate::saddle::{enumerate_saddles, SaddleConnection, DEFAULT_BUDGET};
use crate::strata::{aut_order, cohdim_bounds, stratification_table, Surjection};
use crate::surface::Surface;
use crate::sweep::{family_sweep, Family};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn outcome(id: u32, name: &'static str, r: Result<(bool, String)>) -> CriterionOutcome {
    match r {
        Ok((passed, detail)) => CriterionOutcome { id, name, passed, detail },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random deformation `δ` with `|Re δ_j|, |Im δ_j| <= scale`.
fn random_delta(r: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<C64> {
    (0..d)
        .map(|_| C64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale)))
        .collect()
}

/// Random small deformations that keep the polygons valid.
fn deformations(s: &Surface, count: usize, rel_scale: f64, seed: u64) -> Result<Vec<Surface>> {
    let chart = PeriodChart::compute(s)?;
    let a = Analysis::new(s)?;
    let scale = rel_scale * a.systole()?.0;
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 20 * count {
            return Err(Error::DeformFailed(format!(
                "only {} of {count} random deformations were valid",
                out.len()
            )));
        }
        let delta = random_delta(&mut r, chart.dimension(), scale);
        match chart.deform(s, &delta) {
            Ok(t) => out.push(t),
            Err(e) if e.is_budget() => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Stratum recognition and Gauss–Bonnet on random deformations.
pub fn criterion_1() -> CriterionOutcome {
    outcome(1, "stratum recognition", (|| {
        let cases: [(Builtin, u32, Vec<u32>); 3] = [
            (Builtin::RegularOctagon { side: 1.0 }, 2, vec![2]),
            (Builtin::SlitTori { t: 0.3 }, 2, vec![1, 1]),
            (Builtin::SquareTorus, 1, vec![0]),
        ];
        let mut checked = 0;
        for (i, (b, g, m)) in cases.iter().enumerate() {
            let s = b.build()?;
            let top = s.topology();
            if top.g != *g || &top.m != m {
                return Ok((false, format!("{b}: got g={} m={:?}", top.g, top.m)));
            }
            for t in deformations(&s, 200, 0.05, 100 + i as u64)? {
                let tt = t.topology();
                let sum: u32 = tt.m.iter().sum();
                if tt.g != *g || &tt.m != m || sum as i64 != 2 * tt.g as i64 - 2 {
                    return Ok((false, format!("{b} deformation: g={} m={:?}", tt.g, tt.m)));
                }
                checked += 1;
            }
        }
        Ok((true, format!("3 surfaces and {checked} deformations match (g, m) with sum m = 2g-2")))
    })())
}

/// Primitive lattice vectors of length at most `l`.
pub fn lattice_oracle(l: f64) -> usize {
    let r = l.floor() as i64 + 1;
    let mut count = 0;
    for p in -r..=r {
        for q in -r..=r {
            if (p, q) != (0, 0) && gcd(p.abs(), q.abs()) == 1 && ((p * p + q * q) as f64) <= l * l {
                count += 1;
            }
        }
    }
    count
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Saddle connection counts on the square torus against the lattice.
pub fn criterion_2() -> CriterionOutcome {
    outcome(2, "saddle connection oracle", (|| {
        let s = Builtin::SquareTorus.build()?;
        let expected = [(1.0, Some(4)), (1.5, Some(8)), (2.3, Some(16)), (5.0, None)];
        let mut parts = Vec::new();
        for (l, fixed) in expected {
            let got = enumerate_saddles(&s, l, DEFAULT_BUDGET)?.len();
            let oracle = lattice_oracle(l);
            if got != oracle || fixed.is_some_and(|f| f != got) {
                return Ok((false, format!("L={l}: enumerated {got}, oracle {oracle}")));
            }
            parts.push(format!("L={l}:{got}"));
        }
        Ok((true, parts.join(" ")))
    })())
}

fn homogeneity_cases() -> Result<Vec<(String, Surface, Surjection)>> {
    let mut v = Vec::new();
    for b in [
        Builtin::RegularOctagon { side: 1.0 },
        Builtin::SlitTori { t: 0.3 },
        Builtin::StretchedSlitTori { t: 0.3, h: 2.0 },
        Builtin::MarkedSlitTori { t: 0.1, s: 0.2 },
    ] {
        let s = b.build()?;
        let id = Surjection::identity(s.n_free(), s.n_marked() - s.n_free());
        v.push((b.to_string(), s, id));
    }
    let b = Builtin::SlitTori { t: 0.002 };
    v.push((format!("{b} collapsed"), b.build()?, Surjection::full_collapse(0, 2)));
    Ok(v)
}

/// Scaling degrees of the functionals under `φ -> λφ`.
pub fn criterion_3() -> CriterionOutcome {
    outcome(3, "homogeneity", (|| {
        let lambdas = [C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.3, 0.4)];
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for (name, s, sigma) in homogeneity_cases()? {
            let kinds: Vec<(FunctionalKind, i32)> = vec![
                (FunctionalKind::Area, 2),
                (FunctionalKind::EllInv2, -2),
                (FunctionalKind::RSigma(sigma.clone()), 1),
                (FunctionalKind::ExhM, 0),
                (FunctionalKind::Eta(sigma.clone()), 0),
                (FunctionalKind::Zeta(sigma.clone()), 0),
                (FunctionalKind::ExhSigma(sigma.clone()), 0),
            ];
            let a0 = Analysis::new(&s)?;
            let base: Vec<f64> = kinds.iter().map(|(k, _)| a0.evaluate(k).map(|v| v.value)).collect::<Result<_>>()?;
            for lam in lambdas {
                let t = s.rescale(lam)?;
                let a1 = Analysis::new(&t)?;
                for ((k, deg), v0) in kinds.iter().zip(&base) {
                    let v1 = a1.evaluate(k)?.value;
                    let e = rel_err(v1, v0 * lam.norm().powi(*deg));
                    count += 1;
                    if e >= 1e-9 {
                        return Ok((false, format!("{name}, {k}, lambda={lam}: relative error {e:.3e}")));
                    }
                    worst = worst.max(e);
                }
            }
        }
        Ok((true, format!("{count} scalings, worst relative error {worst:.2e}")))
    })())
}

/// Area and log-area Hessian signatures.
pub fn criterion_4() -> CriterionOutcome {
    outcome(4, "hessian signatures", (|| {
        let opts = HessianOptions::default();
        let oct = Builtin::RegularOctagon { side: 1.0 }.build()?;
        let reps = complex_hessians(&oct, &[FunctionalKind::Area, FunctionalKind::LogArea], &opts)?;
        let want = [(2, 2, 0), (1, 2, 1)];
        for (r, w) in reps.iter().zip(want) {
            let stable = r.half_step.as_ref().is_some_and(|h| h.signature_stable);
            if r.signature.as_tuple() != w || !stable {
                return Ok((false, format!("octagon {}: signature {:?} (stable {stable})", r.functional, r.signature.as_tuple())));
            }
        }
        let slit = Builtin::SlitTori { t: 0.3 }.build()?;
        let r = complex_hessians(&slit, &[FunctionalKind::Area], &opts)?.remove(0);
        if r.signature.n_zero != 1 {
            return Ok((false, format!("slit_tori area signature {:?}", r.signature.as_tuple())));
        }
        Ok((
            true,
            format!(
                "octagon A {:?}, log A {:?}, stable at h/2; slit_tori A {:?}",
                reps[0].signature.as_tuple(),
                reps[1].signature.as_tuple(),
                r.signature.as_tuple()
            ),
        ))
    })())
}

/// `exh_m` has at most `g` nonpositive eigenvalues and `ℓ⁻²` is strictly
/// plurisubharmonic at random smooth points.
pub fn criterion_5() -> CriterionOutcome {
    outcome(5, "convexity", (|| {
        let opts = HessianOptions {
            richardson: false,
            ..HessianOptions::default()
        };
        let kinds = [FunctionalKind::ExhM, FunctionalKind::EllInv2];
        let mut parts = Vec::new();
        for (i, b) in [
            Builtin::RegularOctagon { side: 1.0 },
            Builtin::SlitTori { t: 0.3 },
            Builtin::StretchedSlitTori { t: 0.3, h: 2.0 },
            Builtin::MarkedSlitTori { t: 0.1, s: 0.2 },
        ]
        .iter()
        .enumerate()
        {
            let s = b.build()?;
            let g = s.genus() as usize;
            let mut smooth = 0;
            let mut skipped = 0;
            let mut worst_nonpos = 0;
            for t in deformations(&s, 200, 0.05, 500 + i as u64)? {
                if smooth == 50 {
                    break;
                }
                let reps = complex_hessians(&t, &kinds, &opts)?;
                if reps.iter().any(|r| r.non_smooth) {
                    skipped += 1;
                    continue;
                }
                smooth += 1;
                let conv = convexity_from_report(&kinds[0], reps[0].clone(), g + 1);
                worst_nonpos = worst_nonpos.max(conv.nonpositive);
                if !conv.passes {
                    return Ok((
                        false,
                        format!(
                            "{b}: exh_m signature {:?}, projectivized {:?}, scaling residual {:.2e}",
                            reps[0].signature.as_tuple(),
                            reps[0].projective.as_ref().map(|p| p.signature.as_tuple()),
                            reps[0].scaling_residual
                        ),
                    ));
                }
                if reps[1].signature.n_plus != reps[1].dimension {
                    return Ok((false, format!("{b}: ell2 signature {:?}", reps[1].signature.as_tuple())));
                }
            }
            if smooth < 50 {
                return Ok((false, format!("{b}: only {smooth} smooth points ({skipped} skipped)")));
            }
            parts.push(format!("{b}: max nonpositive {worst_nonpos} on the projectivized chart ({skipped} non-smooth skipped)"));
        }
        Ok((true, parts.join("; ")))
    })())
}

/// Gauss–Legendre nodes and weights on `[0, 1]` by the Golub–Welsch method.
pub fn gauss_legendre01(n: usize) -> Vec<(f64, f64)> {
    let j = DMatrix::from_fn(n, n, |a, b| {
        if a.abs_diff(b) == 1 {
            let k = a.max(b) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(j);
    let mut nodes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            (0.5 * (x + 1.0), 0.5 * w)
        })
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

/// `∫_0^u z^{m1} (z − u)^{m2} dz` along the straight segment.
pub fn segment_integral(u: C64, m1: i32, m2: i32, nodes: &[(f64, f64)]) -> C64 {
    nodes
        .iter()
        .map(|&(s, w)| {
            let z = u * s;
            z.powi(m1) * (z - u).powi(m2) * u * w
        })
        .sum()
}

fn beta(a: u32, b: u32) -> f64 {
    let f = |n: u32| (1..=n as u64).product::<u64>() as f64;
    f(a) * f(b) / f(a + b + 1)
}

/// Divergence laws along the slit and stretch families and the
/// collision-integral quadrature.
pub fn criterion_6() -> CriterionOutcome {
    outcome(6, "divergence laws", (|| {
        let slit = family_sweep(Family::Slit, 1e-4, 1e-1, 13, &FunctionalKind::EllInv2, DEFAULT_BUDGET, DEFAULT_EPS_RANK)?;
        let slope = slit.fit.ok_or_else(|| Error::DeformFailed("slit sweep has no fit".into()))?.slope;
        if (slope - 2.0).abs() > 0.05 || slit.rows.iter().any(|r| r.value.is_none()) {
            return Ok((false, format!("slit slope {slope:.4}")));
        }

        let area = family_sweep(Family::Stretch, 1.0, 50.0, 50, &FunctionalKind::Area, DEFAULT_BUDGET, DEFAULT_EPS_RANK)?;
        let a_slope = area.fit.map_or(f64::NAN, |f| f.slope);
        // The stretched torus is a horizontal cylinder of circumference 1.
        let circumference = 1.0;
        if !((a_slope - circumference).abs() <= 1e-6) {
            return Ok((false, format!("d(area)/dh = {a_slope}")));
        }
        let exh = family_sweep(Family::Stretch, 1.0, 50.0, 50, &FunctionalKind::ExhM, DEFAULT_BUDGET, DEFAULT_EPS_RANK)?;
        let vals: Vec<f64> = exh.rows.iter().map(|r| r.value.unwrap_or(f64::NAN)).collect();
        if !vals.windows(2).all(|w| w[1] > w[0]) {
            return Ok((false, format!("exh_m not increasing along stretch: {vals:?}")));
        }

        let nodes = gauss_legendre01(8);
        let mut worst: f64 = 0.0;
        for u in [C64::new(0.5, 0.0), C64::new(0.3, 0.2), C64::new(-0.01, 0.07), C64::new(1e-3, 0.0)] {
            let i = segment_integral(u, 1, 1, &nodes);
            worst = worst.max((i.norm() - u.norm().powi(3) / 6.0).abs());
        }
        for (m1, m2) in [(2u32, 1u32), (2, 3), (4, 4)] {
            let u = C64::new(0.4, -0.3);
            let i = segment_integral(u, m1 as i32, m2 as i32, &nodes);
            let want = u.norm().powi((m1 + m2 + 1) as i32) * beta(m1, m2);
            worst = worst.max((i.norm() - want).abs());
        }
        if worst >= 1e-10 {
            return Ok((false, format!("quadrature error {worst:.3e}")));
        }
        Ok((
            true,
            format!(
                "slit slope {slope:.4}, d(area)/dh {a_slope:.9}, exh_m {:.3} -> {:.3}, quadrature error {worst:.1e}",
                vals[0],
                vals[vals.len() - 1]
            ),
        ))
    })())
}

/// A uniformly shuffled independent set of `target` classes from `pool`,
/// extending `seed`; `None` when the pool does not reach the rank.
fn random_basis(pool: &[(Vec<f64>, f64)], seed: &[Vec<f64>], target: usize, r: &mut ChaCha8Rng) -> Option<(f64, Vec<Vec<f64>>)> {
    let mut sp = Span::new(DEFAULT_EPS_RANK);
    for v in seed {
        sp.insert(v);
    }
    let base = sp.rank();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(r);
    let mut sum = 0.0;
    let mut chosen = Vec::new();
    for i in order {
        if sp.rank() - base == target {
            break;
        }
        if sp.insert(&pool[i].0) {
            sum += pool[i].1;
            chosen.push(pool[i].0.clone());
        }
    }
    (sp.rank() - base == target).then_some((sum, chosen))
}

fn weighted_pool<F, W>(a: &Analysis<'_>, list: &[SaddleConnection], keep: F, weight: W) -> Result<Vec<(Vec<f64>, f64)>>
where
    F: Fn(&SaddleConnection) -> bool,
    W: Fn(&SaddleConnection) -> f64,
{
    list.iter()
        .filter(|sc| keep(sc))
        .map(|sc| Ok((a.class_of(sc)?.iter().map(|&x| x as f64).collect(), weight(sc))))
        .collect()
}

/// The greedy value dominates randomly sampled bases. Samples are drawn
/// from a pool three times longer than the greedy cutoff so that most of
/// them are strictly worse.
pub fn criterion_7() -> CriterionOutcome {
    outcome(7, "greedy supremum", (|| {
        const SAMPLES: usize = 1000;
        const WIDEN: f64 = 3.0;
        let oct = Builtin::RegularOctagon { side: 1.0 }.build()?;
        let slit = Builtin::SlitTori { t: 0.001 }.build()?;
        let cases = [
            ("regular_octagon", &oct, Surjection::identity(0, 1)),
            ("slit_tori(0.001)", &slit, Surjection::full_collapse(0, 2)),
        ];
        let mut r = rng(7);
        let mut parts = Vec::new();
        let beats = |sample: f64, greedy: f64| sample > greedy * (1.0 + 1e-12);
        for (name, s, sigma) in cases {
            let a = Analysis::new(s)?;
            let d = a.dimension();
            let inv2 = |sc: &SaddleConnection| sc.length.powi(-2);

            let e = a.ell_inv2()?;
            let (all, n) = a.cache.up_to(WIDEN * e.cutoffs["saddle"])?;
            let pool = weighted_pool(&a, &all[..n], |_| true, inv2)?;
            let mut best: f64 = 0.0;
            let mut strictly_below = 0;
            for _ in 0..SAMPLES {
                let (v, _) = random_basis(&pool, &[], d, &mut r).expect("pool spans");
                best = best.max(v);
                strictly_below += usize::from(v < e.value * (1.0 - 1e-12));
            }
            if beats(best, e.value) {
                return Ok((false, format!("{name} ell2: sample {best} beats greedy {}", e.value)));
            }

            let ev = a.cover_eval(&sigma)?;
            let (all, n) = a.cache.up_to(ev.disk_cutoff)?;
            let dpool = weighted_pool(&a, &all[..n], |sc| Analysis::in_disk(&ev.context, &sigma, sc), |sc| {
                sc.holonomy.norm_sqr()
            })?;
            let (all, n) = a.cache.up_to(WIDEN * ev.cutoff)?;
            let qpool = weighted_pool(&a, &all[..n], |sc| !Analysis::in_disk(&ev.context, &sigma, sc), inv2)?;
            let (mut best_eta, mut best_zeta): (f64, f64) = (0.0, 0.0);
            for _ in 0..SAMPLES {
                let (dsum, dbasis) = random_basis(&dpool, &[], ev.disk_rank, &mut r).expect("disk pool spans");
                let (qsum, _) = random_basis(&qpool, &dbasis, d - ev.disk_rank, &mut r).expect("quotient pool spans");
                best_eta = best_eta.max(ev.area * qsum);
                let z = if ev.disk_rank == 0 { 0.0 } else { dsum * qsum };
                best_zeta = best_zeta.max(z);
            }
            let (eta, zeta) = (ev.eta(), ev.zeta());
            if beats(best_eta, eta) || beats(best_zeta, zeta) {
                return Ok((
                    false,
                    format!("{name}: sampled eta {best_eta} / zeta {best_zeta} beat greedy {eta} / {zeta}"),
                ));
            }
            parts.push(format!(
                "{name}: ell2 {:.6} >= {best:.6} ({strictly_below}/{SAMPLES} strictly below, pool {}), eta {eta:.6} >= {best_eta:.6}, zeta {zeta:.3e} >= {best_zeta:.3e}",
                e.value,
                pool.len()
            ));
        }
        Ok((true, parts.join("; ")))
    })())
}

/// Cover constants, and the behavior of `exh_σ` near the deep stratum and
/// near the exit of `V_σ`.
pub fn criterion_8() -> CriterionOutcome {
    outcome(8, "cover constants and exhaustion", (|| {
        let c = c_const(2, 0);
        if c != 1.0 / 4096.0 || chi(c, 0.0)? != 1.0 || chi(c, c / 2.0)? != 2.0 {
            return Ok((false, format!("c = {c}, chi(0) = {}, chi(c/2) = {}", chi(c, 0.0)?, chi(c, c / 2.0)?)));
        }
        let collapse = Surjection::full_collapse(0, 2);
        let identity = Surjection::identity(0, 2);
        let exh_at = |t: f64, sigma: &Surjection| -> Result<(f64, f64, f64)> {
            let s = Builtin::SlitTori { t }.build()?;
            let a = Analysis::new(&s)?;
            let ev = a.cover_eval(sigma)?;
            let v = a.exh_sigma(sigma)?.value;
            Ok((v, ev.eta(), ev.zeta()))
        };

        // Collapsing the colliding pair keeps everything bounded as t -> 0.
        let mut etas = Vec::new();
        for t in [5e-3, 1e-3, 1e-4, 1e-5] {
            let (v, eta, _) = exh_at(t, &collapse)?;
            if !v.is_finite() {
                return Ok((false, format!("collapsed exh_sigma at t={t} is {v}")));
            }
            etas.push(eta);
        }
        let spread = etas.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / etas.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 2.0 {
            return Ok((false, format!("collapsed eta varies by factor {spread:.3} as t -> 0")));
        }
        // Without the collapse the short slit drives the exhaustion up.
        let (deep, _, _) = exh_at(1e-4, &identity)?;
        if deep.exp() <= 1e3 {
            return Ok((false, format!("identity exp(exh_sigma) at t=1e-4 is {:.3e}", deep.exp())));
        }

        // The V_σ exit: ζ_σ reaches c. Bracket and bisect in t.
        let zeta_at = |t: f64| exh_at(t, &collapse).map(|x| x.2).or_else(|e| match e {
            Error::ZetaOutOfDomain { zeta, .. } => Ok(zeta),
            e => Err(e),
        });
        let (mut lo, mut hi) = (1e-3, 5e-2);
        if !(zeta_at(lo)? < c && zeta_at(hi)? >= c) {
            return Ok((false, "zeta_sigma does not cross c on [1e-3, 5e-2]".into()));
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if zeta_at(mid)? < c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tstar = lo;
        let mut min_ratio = f64::INFINITY;
        let mut last_exp = 0.0;
        for j in 3..=9 {
            let t = tstar * (1.0 - 10f64.powi(-j));
            let (v, _, z) = exh_at(t, &collapse)?;
            min_ratio = min_ratio.min(z / c);
            last_exp = v.exp();
        }
        if min_ratio < 0.9 || last_exp <= 1e3 {
            return Ok((false, format!("exit t*={tstar:.6e}: min zeta/c {min_ratio:.4}, exp(exh) {last_exp:.3e}")));
        }
        Ok((
            true,
            format!(
                "c = 1/4096, chi exact; collapsed eta in [{:.4}, {:.4}]; identity exp(exh) {:.2e} at t=1e-4; exit t*={tstar:.6e}, zeta/c >= {min_ratio:.4}, exp(exh) {last_exp:.2e}",
                etas.iter().cloned().fold(f64::INFINITY, f64::min),
                etas.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                deep.exp()
            ),
        ))
    })())
}

/// Partitions of `total` into positive parts, all of them.
fn all_partitions(total: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=rest.min(max)).rev() {
            cur.push(x);
            rec(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

/// Brute-force table: every prefix in `[0, 2g-2]^n`, every partition of
/// the remainder.
fn brute_force_table(g: u32, n: usize) -> BTreeSet<(usize, Vec<u32>, u128, usize)> {
    let top = 2 * g - 2;
    let max_depth = 2 * g as usize - 3 + usize::from(n > 0);
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (0..=top).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for p in prefixes {
        let s: u32 = p.iter().sum();
        if s > top {
            continue;
        }
        for tail in all_partitions(top - s) {
            let k = tail.len();
            let depth = top as usize - k;
            if depth > max_depth {
                continue;
            }
            let mut sig = p.clone();
            sig.extend(&tail);
            out.insert((depth, sig.clone(), aut_order(n, &sig), 2 * g as usize - 2 + n + k));
        }
    }
    out
}

/// Every surjection on `n + k` points fixing the first `n`.
fn all_surjections(n: usize, k: usize) -> Vec<Surjection> {
    let d = n + k;
    let mut out = BTreeSet::new();
    let total = d.pow(k as u32);
    for code in 0..total {
        let mut images: Vec<usize> = (0..n).collect();
        let mut c = code;
        for _ in 0..k {
            images.push(c % d);
            c /= d;
        }
        if let Ok(s) = Surjection::new(n, images) {
            out.insert(s);
        }
    }
    out.into_iter().collect()
}

fn order_axioms() -> Result<std::result::Result<usize, String>> {
    let mut checks = 0;
    for n in 0..=2 {
        for k in 0..=4 {
            let all = all_surjections(n, k);
            for a in &all {
                if !a.leq(a)? {
                    return Ok(Err(format!("reflexivity fails at {a}")));
                }
                for b in &all {
                    let ab = a.leq(b)?;
                    if ab && b.leq(a)? && a != b {
                        return Ok(Err(format!("antisymmetry fails at {a}, {b}")));
                    }
                    if ab {
                        for c in &all {
                            if b.leq(c)? && !a.leq(c)? {
                                return Ok(Err(format!("transitivity fails at {a}, {b}, {c}")));
                            }
                        }
                    }
                    checks += 1;
                }
                // Pushforward is functorial along every composable pair.
                let m: Vec<u32> = (0..a.domain_size() as u32).map(|i| 2 * i + 1).collect();
                let inner = a.pushforward(&m)?;
                for outer in all_surjections(n, a.codomain_size() - n) {
                    let comp = outer.compose(a)?;
                    if comp.pushforward(&m)? != outer.pushforward(&inner)? || !comp.leq(a)? {
                        return Ok(Err(format!("functoriality fails at {outer} after {a}")));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(Ok(checks))
}

/// Stratification table, order axioms, and adaptedness of the cover.
pub fn criterion_9() -> CriterionOutcome {
    outcome(9, "combinatorics", (|| {
        let mut rows_total = 0;
        for g in 2..=5 {
            for n in 0..=2 {
                let table = stratification_table(g, n)?;
                let got: BTreeSet<_> = table
                    .iter()
                    .map(|r| (r.depth, r.signature.clone(), r.aut_order, r.proj_dimension))
                    .collect();
                if got.len() != table.len() || got != brute_force_table(g, n) {
                    return Ok((false, format!("table mismatch at g={g}, n={n}")));
                }
                rows_total += table.len();
            }
        }
        let checks = match order_axioms()? {
            Ok(c) => c,
            Err(msg) => return Ok((false, msg)),
        };

        let sigmas: Vec<Surjection> = [[1, 1, 2], [1, 2, 1], [1, 2, 2]]
            .iter()
            .map(|im| Surjection::from_one_based(1, im))
            .collect::<Result<_>>()?;
        let mut r = rng(9);
        let (lo, hi) = (1e-3f64.ln(), 0.05f64.ln());
        let mut memberships = [0usize; 3];
        let mut violations = 0;
        for _ in 0..100 {
            let t = r.gen_range(lo..hi).exp();
            let s = r.gen_range(lo..hi).exp();
            let surf = Builtin::MarkedSlitTori { t, s }.build()?;
            let a = Analysis::new(&surf)?;
            let ins: Vec<bool> = sigmas.iter().map(|x| a.in_v_sigma(x).map(|c| c.member)).collect::<Result<_>>()?;
            for (i, &m) in ins.iter().enumerate() {
                memberships[i] += usize::from(m);
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if ins[i] && ins[j] && !sigmas[i].comparable(&sigmas[j])? {
                        violations += 1;
                    }
                }
            }
        }
        Ok((
            violations == 0,
            format!(
                "{rows_total} table rows match; {checks} order/functoriality checks; memberships {memberships:?}, incomparable joint {violations}"
            ),
        ))
    })())
}

/// Bound arithmetic over a grid of `(g, n)`.
pub fn criterion_10() -> CriterionOutcome {
    outcome(10, "bound arithmetic", (|| {
        let mut count = 0;
        for g in 2..=20u32 {
            for n in 0..=20u32 {
                let b = cohdim_bounds(g, n)?;
                let e = u32::from(n > 0);
                let want = (2 * g - 2 + e, 3 * g - 3 + e, g, 2 * g - 3 + e);
                if (b.moduli_bound, b.hodge_bound, b.strata_bound, b.depth) != want || b.hodge_bound != b.strata_bound + b.depth {
                    return Ok((false, format!("g={g}, n={n}: {b:?}")));
                }
                count += 1;
            }
        }
        let small = matches!(cohdim_bounds(1, 0), Err(Error::GenusTooSmall(1)));
        Ok((small, format!("{count} (g, n) pairs exact; genus 1 rejected: {small}")))
    })())
}

pub type Criterion = fn() -> CriterionOutcome;

pub const CRITERIA: [Criterion; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
];

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| c()).collect()
}
