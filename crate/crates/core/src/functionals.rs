//! Area, `ℓ⁻²` over bases of saddle connections, injectivity radii
//! relative to a collision pattern, clashing disks, and the exhaustion
//! functions assembled from them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::PeriodChart;
use crate::loops::{self, LoopReport};
use crate::matroid::{self, Item, Span};
use crate::saddle::{SaddleCache, SaddleConnection, DEFAULT_BUDGET};
use crate::strata::Surjection;
use crate::surface::Surface;

const MAX_DOUBLINGS: usize = 40;

/// `c = 1 / (16 (2g + n)^4)`.
pub fn c_const(g: u32, n: usize) -> f64 {
    let b = (2 * g as usize + n) as f64;
    1.0 / (16.0 * b.powi(4))
}

/// `χ(x) = c / (c − x)` on `x < c`.
pub fn chi(c: f64, x: f64) -> Result<f64> {
    if x >= c {
        return Err(Error::ZetaOutOfDomain { zeta: x, c });
    }
    Ok(c / (c - x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSegment {
    pub start: usize,
    pub end: usize,
    pub re: f64,
    pub im: f64,
    pub length: f64,
    pub weight: f64,
    pub class: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessSegment>>,
    pub components: BTreeMap<String, f64>,
    pub cutoffs: BTreeMap<String, f64>,
    pub flags: Vec<String>,
    /// Sign-normalized, sorted classes of every witness basis involved.
    #[serde(skip)]
    pub witness_key: Vec<Vec<i64>>,
}

impl FunctionalValue {
    fn plain(name: &str, value: f64) -> Self {
        FunctionalValue {
            name: name.to_string(),
            value,
            witness: None,
            components: BTreeMap::new(),
            cutoffs: BTreeMap::new(),
            flags: Vec::new(),
            witness_key: Vec::new(),
        }
    }
}

fn normalized_key(classes: impl Iterator<Item = Vec<i64>>) -> Vec<Vec<i64>> {
    let mut key: Vec<Vec<i64>> = classes
        .map(|mut c| {
            if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            c
        })
        .collect();
    key.sort();
    key
}

/// Clashing-disk data of a surface relative to a surjection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverContext {
    pub sigma: String,
    pub member: bool,
    pub disk_centers: Vec<usize>,
    pub disk_radius: f64,
    pub r_sigma: f64,
    pub c_const: f64,
    /// Distance of each marked point to the center of its disk.
    pub center_distances: Vec<f64>,
    /// Every in-disk connection is shorter than `1/(2g+n)` times every
    /// other connection in the enumerated range.
    pub clashing_ok: Option<bool>,
}

/// Which of the functionals to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalKind {
    Area,
    LogArea,
    EllInv2,
    ExhM,
    RSigma(Surjection),
    Eta(Surjection),
    Zeta(Surjection),
    ExhSigma(Surjection),
    Chain(Vec<Surjection>),
    /// `|P_j|²` of one chart coordinate.
    PeriodSq(usize),
}

impl FunctionalKind {
    pub const NAMES: &'static [&'static str] = &[
        "area", "logarea", "ell2", "exhm", "rsigma", "eta", "zeta", "exhsigma", "chain", "period2",
    ];

    /// Parses a functional name. `sigma` is the raw `--sigma` text (a
    /// `;`-separated chain for `chain`); `n` the number of free marks.
    pub fn parse(name: &str, sigma: Option<&str>, n: usize, n_marked: usize) -> Result<Self> {
        let sized = |s: Surjection| -> Result<Surjection> {
            if s.domain_size() == n_marked {
                Ok(s)
            } else {
                Err(Error::SizeMismatch {
                    expected: n_marked,
                    found: s.domain_size(),
                })
            }
        };
        let need_sigma = || -> Result<Surjection> {
            match sigma {
                Some(t) => sized(Surjection::parse(n, t)?),
                None => Ok(Surjection::identity(n, n_marked - n)),
            }
        };
        Ok(match name {
            "area" => FunctionalKind::Area,
            "logarea" | "log_area" => FunctionalKind::LogArea,
            "ell2" | "ell_inv2" => FunctionalKind::EllInv2,
            "exhm" | "exh_m" => FunctionalKind::ExhM,
            "rsigma" => FunctionalKind::RSigma(need_sigma()?),
            "eta" => FunctionalKind::Eta(need_sigma()?),
            "zeta" => FunctionalKind::Zeta(need_sigma()?),
            "exhsigma" | "exh_sigma" => FunctionalKind::ExhSigma(need_sigma()?),
            "chain" => match sigma {
                Some(t) => FunctionalKind::Chain(
                    Surjection::parse_chain(n, t)?
                        .into_iter()
                        .map(sized)
                        .collect::<Result<_>>()?,
                ),
                None => FunctionalKind::Chain(vec![Surjection::identity(n, n_marked - n)]),
            },
            other => match other.strip_prefix("period2:") {
                Some(j) => FunctionalKind::PeriodSq(
                    j.parse()
                        .map_err(|_| Error::ParamOutOfRange(format!("bad coordinate `{j}`")))?,
                ),
                None => {
                    return Err(Error::ParamOutOfRange(format!(
                        "unknown functional `{other}` (expected one of {})",
                        Self::NAMES.join(", ")
                    )))
                }
            },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionalKind::Area => "area",
            FunctionalKind::LogArea => "logarea",
            FunctionalKind::EllInv2 => "ell2",
            FunctionalKind::ExhM => "exhm",
            FunctionalKind::RSigma(_) => "rsigma",
            FunctionalKind::Eta(_) => "eta",
            FunctionalKind::Zeta(_) => "zeta",
            FunctionalKind::ExhSigma(_) => "exhsigma",
            FunctionalKind::Chain(_) => "chain",
            FunctionalKind::PeriodSq(_) => "period2",
        }
    }

    /// Invariant under the `C*` action up to an additive `log|λ|²` (or
    /// exactly invariant), so the scaling direction lies in the kernel of
    /// its complex Hessian.
    pub fn is_projective(&self) -> bool {
        matches!(
            self,
            FunctionalKind::LogArea
                | FunctionalKind::ExhM
                | FunctionalKind::Eta(_)
                | FunctionalKind::Zeta(_)
                | FunctionalKind::ExhSigma(_)
                | FunctionalKind::Chain(_)
        )
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalKind::RSigma(s)
            | FunctionalKind::Eta(s)
            | FunctionalKind::Zeta(s)
            | FunctionalKind::ExhSigma(s) => write!(f, "{}[{s}]", self.name()),
            FunctionalKind::Chain(c) => {
                let parts: Vec<String> = c.iter().map(|s| s.to_string()).collect();
                write!(f, "chain[{}]", parts.join(";"))
            }
            FunctionalKind::PeriodSq(j) => write!(f, "period2:{j}"),
            _ => write!(f, "{}", self.name()),
        }
    }
}

/// Everything the functionals need from one surface: its chart and a
/// shared saddle connection cache.
pub struct Analysis<'a> {
    pub surface: &'a Surface,
    pub chart: PeriodChart,
    pub cache: SaddleCache<'a>,
    pub eps_rank: f64,
}

/// Intermediate results of the cover functionals for one surjection.
#[derive(Clone, Debug)]
pub struct CoverEval {
    pub context: CoverContext,
    pub area: f64,
    /// Rank of the span of in-disk classes.
    pub disk_rank: usize,
    /// Greedy max of `Σ |P_β|²` over bases of the in-disk span.
    pub disk_sum: f64,
    pub disk_basis: Vec<WitnessSegment>,
    /// Greedy max of `Σ ℓ⁻²` over bases of the quotient.
    pub quotient_sum: f64,
    pub quotient_basis: Vec<WitnessSegment>,
    pub cutoff: f64,
    pub disk_cutoff: f64,
}

impl CoverEval {
    pub fn eta(&self) -> f64 {
        self.area * self.quotient_sum
    }

    pub fn zeta(&self) -> f64 {
        if self.disk_rank == 0 {
            0.0
        } else {
            self.disk_sum * self.quotient_sum
        }
    }
}

impl<'a> Analysis<'a> {
    pub fn new(surface: &'a Surface) -> Result<Self> {
        Self::with_budget(surface, DEFAULT_BUDGET, matroid::DEFAULT_EPS_RANK)
    }

    pub fn with_budget(surface: &'a Surface, budget: usize, eps_rank: f64) -> Result<Self> {
        Ok(Analysis {
            surface,
            chart: PeriodChart::compute(surface)?,
            cache: SaddleCache::new(surface, budget),
            eps_rank,
        })
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    /// Chart coordinates of a saddle connection.
    pub fn class_of(&self, sc: &SaddleConnection) -> Result<Vec<i64>> {
        self.chart.class_of(&sc.chain)
    }

    fn classes_f64(&self, pool: &[SaddleConnection]) -> Result<(Vec<Vec<i64>>, Vec<Vec<f64>>)> {
        let ints: Vec<Vec<i64>> = pool.iter().map(|sc| self.class_of(sc)).collect::<Result<_>>()?;
        let reals = ints
            .iter()
            .map(|c| c.iter().map(|&x| x as f64).collect())
            .collect();
        Ok((ints, reals))
    }

    fn witness(pool: &[SaddleConnection], ints: &[Vec<i64>], basis: &[usize], weights: &[f64]) -> Vec<WitnessSegment> {
        basis
            .iter()
            .map(|&i| WitnessSegment {
                start: pool[i].start_mark,
                end: pool[i].end_mark,
                re: pool[i].holonomy.re,
                im: pool[i].holonomy.im,
                length: pool[i].length,
                weight: weights[i],
                class: ints[i].clone(),
            })
            .collect()
    }

    pub fn area(&self) -> FunctionalValue {
        FunctionalValue::plain("area", self.surface.area())
    }

    pub fn systole(&self) -> Result<(f64, SaddleConnection)> {
        loops::systole(&self.cache)
    }

    pub fn shortest_loop(&self) -> Result<LoopReport> {
        loops::shortest_loop(&self.cache)
    }

    /// Greedy `Σ ℓ⁻²` over bases of the quotient by `seed`, on connections
    /// accepted by `keep`, with a doubled cutoff until the rank is reached.
    fn greedy_inv2<F>(&self, seed: &[Vec<f64>], target: usize, keep: F) -> Result<(f64, Vec<WitnessSegment>, f64)>
    where
        F: Fn(&SaddleConnection) -> bool,
    {
        if target == 0 {
            return Ok((0.0, Vec::new(), 0.0));
        }
        let (mut l, _) = self.systole()?;
        let mut last_err = None;
        for _ in 0..MAX_DOUBLINGS {
            let (all, n) = self.cache.up_to(l)?;
            let pool: Vec<SaddleConnection> = all[..n].iter().filter(|sc| keep(sc)).cloned().collect();
            let (ints, reals) = self.classes_f64(&pool)?;
            let weights: Vec<f64> = pool.iter().map(|sc| sc.length.powi(-2)).collect();
            let items: Vec<Item<'_>> = pool
                .iter()
                .zip(&reals)
                .zip(&weights)
                .map(|((sc, c), &w)| Item {
                    class: c,
                    weight: w,
                    length: sc.length,
                    angle: sc.angle(),
                })
                .collect();
            match matroid::greedy_max_basis(&items, seed, target, self.eps_rank) {
                Ok(r) => return Ok((r.total_weight, Self::witness(&pool, &ints, &r.basis, &weights), l)),
                Err(e @ Error::RankDeficient { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
            l *= 2.0;
        }
        Err(last_err.unwrap_or(Error::BudgetExceeded {
            budget: self.cache.budget(),
        }))
    }

    /// `ℓ⁻²_B`: the largest `Σ ℓ_γ⁻²` over bases of relative homology made
    /// of saddle connections.
    pub fn ell_inv2(&self) -> Result<FunctionalValue> {
        let (sum, witness, cutoff) = self.greedy_inv2(&[], self.dimension(), |_| true)?;
        let mut v = FunctionalValue::plain("ell2", sum);
        v.witness_key = normalized_key(witness.iter().map(|w| w.class.clone()));
        v.witness = Some(witness);
        v.cutoffs.insert("saddle".into(), cutoff);
        Ok(v)
    }

    /// `exh_m = log(A · ℓ⁻²_B)`.
    pub fn exh_m(&self) -> Result<FunctionalValue> {
        let e = self.ell_inv2()?;
        let a = self.surface.area();
        let mut v = FunctionalValue::plain("exhm", (a * e.value).ln());
        v.components.insert("area".into(), a);
        v.components.insert("ell2".into(), e.value);
        v.cutoffs = e.cutoffs;
        v.witness = e.witness;
        v.witness_key = e.witness_key;
        Ok(v)
    }

    fn check_sigma(&self, sigma: &Surjection) -> Result<()> {
        let s = self.surface;
        if sigma.domain_size() != s.n_marked() || sigma.n() != s.n_free() {
            return Err(Error::SizeMismatch {
                expected: s.n_marked(),
                found: sigma.domain_size(),
            });
        }
        Ok(())
    }

    /// `R_σ`: half the minimum of the separated-pair distances and the
    /// shortest closed geodesic.
    pub fn r_sigma(&self, sigma: &Surjection) -> Result<FunctionalValue> {
        self.check_sigma(sigma)?;
        let m = self.surface.n_marked();
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| ((i + 1)..m).map(move |k| (i, k)))
            .filter(|&(i, k)| sigma.image(i) != sigma.image(k))
            .collect();
        let sep = loops::min_distance(&self.cache, &pairs)?;
        let lp = self.shortest_loop()?;
        let min = sep.map_or(lp.length, |d| d.min(lp.length));
        let mut v = FunctionalValue::plain("rsigma", 0.5 * min);
        if let Some(d) = sep {
            v.components.insert("separated_distance".into(), d);
        }
        v.components.insert("shortest_loop".into(), lp.length);
        v.cutoffs.insert("loop".into(), lp.cutoff);
        if lp.near_tie {
            v.flags.push("loop_near_tie".into());
        }
        if lp.concatenation_possible {
            v.flags.push("loop_concatenation_possible".into());
        }
        Ok(v)
    }

    /// Disk data and membership in `V_σ`.
    pub fn in_v_sigma(&self, sigma: &Surjection) -> Result<CoverContext> {
        Ok(self.cover_data(sigma)?.0)
    }

    fn cover_data(&self, sigma: &Surjection) -> Result<(CoverContext, Vec<Vec<f64>>, f64)> {
        let r = self.r_sigma(sigma)?.value;
        let s = self.surface;
        let g = s.genus();
        let n = s.n_free();
        let radius = r / (2.0 * (2 * g as usize + n) as f64);
        let centers = sigma.centers();
        let (sys, _) = self.systole()?;
        let cutoff = (4.0 * radius).max(sys);
        let d = loops::distance_matrix_upto(&self.cache, cutoff)?;
        let center_distances: Vec<f64> = (0..s.n_marked())
            .map(|i| d[i][centers[sigma.image(i)]])
            .collect();
        let member = r > 0.0 && center_distances.iter().all(|&x| x < radius);
        let ctx = CoverContext {
            sigma: sigma.to_string(),
            member,
            disk_centers: centers,
            disk_radius: radius,
            r_sigma: r,
            c_const: c_const(g, n),
            center_distances,
            clashing_ok: None,
        };
        Ok((ctx, d, cutoff))
    }

    /// Whether a connection lies in the disk of its endpoints' class, by
    /// the bound `dist(x, center) <= (ℓ + d_start + d_end) / 2` along it.
    pub fn in_disk(ctx: &CoverContext, sigma: &Surjection, sc: &SaddleConnection) -> bool {
        let (a, b) = (sc.start_mark, sc.end_mark);
        sigma.image(a) == sigma.image(b)
            && 0.5 * (sc.length + ctx.center_distances[a] + ctx.center_distances[b]) < ctx.disk_radius
    }

    /// Shared evaluation behind `η_σ`, `ζ_σ` and `exh_σ`.
    pub fn cover_eval(&self, sigma: &Surjection) -> Result<CoverEval> {
        let (mut ctx, _, disk_cutoff) = self.cover_data(sigma)?;
        if !ctx.member {
            return Err(Error::NotInCover);
        }
        let (all, n) = self.cache.up_to(disk_cutoff)?;
        let disk_pool: Vec<SaddleConnection> = all[..n]
            .iter()
            .filter(|sc| Self::in_disk(&ctx, sigma, sc))
            .cloned()
            .collect();
        let (dints, dreals) = self.classes_f64(&disk_pool)?;
        let disk_rank = matroid::rank(&dreals, self.eps_rank);
        let dweights: Vec<f64> = disk_pool.iter().map(|sc| sc.holonomy.norm_sqr()).collect();
        let items: Vec<Item<'_>> = disk_pool
            .iter()
            .zip(&dreals)
            .zip(&dweights)
            .map(|((sc, c), &w)| Item {
                class: c,
                weight: w,
                length: sc.length,
                angle: sc.angle(),
            })
            .collect();
        let dres = matroid::greedy_max_basis(&items, &[], disk_rank, self.eps_rank)?;
        let disk_basis = Self::witness(&disk_pool, &dints, &dres.basis, &dweights);
        let seed: Vec<Vec<f64>> = dres.basis.iter().map(|&i| dreals[i].clone()).collect();

        let target = self.dimension() - disk_rank;
        let (qsum, qbasis, cutoff) =
            self.greedy_inv2(&seed, target, |sc| !Self::in_disk(&ctx, sigma, sc))?;

        if !disk_pool.is_empty() {
            let longest_in = disk_pool.iter().map(|sc| sc.length).fold(0.0, f64::max);
            let (all, n) = self.cache.up_to(cutoff.max(disk_cutoff))?;
            let shortest_out = all[..n]
                .iter()
                .filter(|sc| !Self::in_disk(&ctx, sigma, sc))
                .map(|sc| sc.length)
                .fold(f64::INFINITY, f64::min);
            let b = (2 * self.surface.genus() as usize + self.surface.n_free()) as f64;
            ctx.clashing_ok = Some(longest_in < shortest_out / b);
        }
        Ok(CoverEval {
            context: ctx,
            area: self.surface.area(),
            disk_rank,
            disk_sum: dres.total_weight,
            disk_basis,
            quotient_sum: qsum,
            quotient_basis: qbasis,
            cutoff,
            disk_cutoff,
        })
    }

    fn cover_value(&self, name: &str, value: f64, ev: &CoverEval) -> FunctionalValue {
        let mut v = FunctionalValue::plain(name, value);
        v.components.insert("area".into(), ev.area);
        v.components.insert("eta".into(), ev.eta());
        v.components.insert("zeta".into(), ev.zeta());
        v.components.insert("disk_rank".into(), ev.disk_rank as f64);
        v.components.insert("disk_sum".into(), ev.disk_sum);
        v.components.insert("quotient_sum".into(), ev.quotient_sum);
        v.components.insert("disk_radius".into(), ev.context.disk_radius);
        v.components.insert("r_sigma".into(), ev.context.r_sigma);
        v.components.insert("c".into(), ev.context.c_const);
        v.cutoffs.insert("saddle".into(), ev.cutoff);
        v.cutoffs.insert("disk".into(), ev.disk_cutoff);
        if ev.context.clashing_ok == Some(false) {
            v.flags.push("clashing_condition_fails".into());
        }
        let mut wit = ev.disk_basis.clone();
        wit.extend(ev.quotient_basis.iter().cloned());
        v.witness_key = normalized_key(wit.iter().map(|w| w.class.clone()));
        v.witness = Some(wit);
        v
    }

    pub fn eta_sigma(&self, sigma: &Surjection) -> Result<FunctionalValue> {
        let ev = self.cover_eval(sigma)?;
        Ok(self.cover_value("eta", ev.eta(), &ev))
    }

    pub fn zeta_sigma(&self, sigma: &Surjection) -> Result<FunctionalValue> {
        let ev = self.cover_eval(sigma)?;
        Ok(self.cover_value("zeta", ev.zeta(), &ev))
    }

    /// `exh_σ = log(η_σ + χ(ζ_σ))`.
    pub fn exh_sigma(&self, sigma: &Surjection) -> Result<FunctionalValue> {
        let ev = self.cover_eval(sigma)?;
        let chi_v = chi(ev.context.c_const, ev.zeta())?;
        let mut v = self.cover_value("exhsigma", (ev.eta() + chi_v).ln(), &ev);
        v.components.insert("chi".into(), chi_v);
        Ok(v)
    }

    /// `exh_{σ•} = Σ exh_{σ_i}` over a strictly decreasing chain.
    pub fn exh_chain(&self, chain: &[Surjection]) -> Result<FunctionalValue> {
        if chain.is_empty() {
            return Err(Error::ChainNotDecreasing("empty chain".into()));
        }
        let sig = self.surface.topology();
        let max = (2 * sig.g as usize).saturating_sub(3) + sig.eps_n as usize;
        if chain.len() - 1 > max {
            return Err(Error::ChainTooDeep {
                depth: chain.len() - 1,
                max,
            });
        }
        for s in chain {
            self.check_sigma(s)?;
        }
        for (i, w) in chain.windows(2).enumerate() {
            if w[0] == w[1] || !w[1].leq(&w[0])? {
                return Err(Error::ChainNotDecreasing(format!(
                    "step {} -> {}: {} is not strictly below {}",
                    i,
                    i + 1,
                    w[1],
                    w[0]
                )));
            }
        }
        let mut total = 0.0;
        let mut v = FunctionalValue::plain("chain", 0.0);
        let mut key = Vec::new();
        for (i, s) in chain.iter().enumerate() {
            let e = self.exh_sigma(s)?;
            total += e.value;
            v.components.insert(format!("exhsigma_{i}"), e.value);
            for (k, c) in e.cutoffs {
                v.cutoffs.insert(format!("{k}_{i}"), c);
            }
            key.extend(e.witness_key);
            v.flags.extend(e.flags);
        }
        v.value = total;
        v.witness_key = key;
        Ok(v)
    }

    /// `|P_j|²` for chart coordinate `j`.
    pub fn period_sq(&self, j: usize) -> Result<FunctionalValue> {
        let p = self.chart.period_vector.get(j).ok_or_else(|| {
            Error::ParamOutOfRange(format!("coordinate {j} out of range (d = {})", self.dimension()))
        })?;
        Ok(FunctionalValue::plain("period2", p.norm_sqr()))
    }

    pub fn evaluate(&self, kind: &FunctionalKind) -> Result<FunctionalValue> {
        match kind {
            FunctionalKind::Area => Ok(self.area()),
            FunctionalKind::LogArea => Ok(FunctionalValue::plain("logarea", self.surface.area().ln())),
            FunctionalKind::EllInv2 => self.ell_inv2(),
            FunctionalKind::ExhM => self.exh_m(),
            FunctionalKind::RSigma(s) => self.r_sigma(s),
            FunctionalKind::Eta(s) => self.eta_sigma(s),
            FunctionalKind::Zeta(s) => self.zeta_sigma(s),
            FunctionalKind::ExhSigma(s) => self.exh_sigma(s),
            FunctionalKind::Chain(c) => self.exh_chain(c),
            FunctionalKind::PeriodSq(j) => self.period_sq(*j),
        }
    }
}

/// One-shot evaluation on a surface.
pub fn evaluate(s: &Surface, kind: &FunctionalKind, budget: usize, eps_rank: f64) -> Result<FunctionalValue> {
    Analysis::with_budget(s, budget, eps_rank)?.evaluate(kind)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdaptednessReport {
    pub sigma: String,
    pub tau: String,
    pub comparable: bool,
    pub samples: usize,
    pub in_sigma: usize,
    pub in_tau: usize,
    pub joint: usize,
    /// Joint memberships of an incomparable pair.
    pub violations: usize,
}

/// Counts joint membership in `V_σ` and `V_τ` over sample surfaces.
pub fn cover_adaptedness_probe(
    samples: &[Surface],
    sigma: &Surjection,
    tau: &Surjection,
    budget: usize,
) -> Result<AdaptednessReport> {
    let comparable = sigma.comparable(tau)?;
    let mut rep = AdaptednessReport {
        sigma: sigma.to_string(),
        tau: tau.to_string(),
        comparable,
        samples: samples.len(),
        in_sigma: 0,
        in_tau: 0,
        joint: 0,
        violations: 0,
    };
    for s in samples {
        let a = Analysis::with_budget(s, budget, matroid::DEFAULT_EPS_RANK)?;
        let x = a.in_v_sigma(sigma)?.member;
        let y = a.in_v_sigma(tau)?.member;
        rep.in_sigma += usize::from(x);
        rep.in_tau += usize::from(y);
        if x && y {
            rep.joint += 1;
            if !comparable {
                rep.violations += 1;
            }
        }
    }
    Ok(rep)
}

/// Rank of a list of class vectors (helper for tests and reports).
pub fn span_rank(classes: &[Vec<i64>], eps: f64) -> usize {
    let mut sp = Span::new(eps);
    for c in classes {
        sp.insert(&c.iter().map(|&x| x as f64).collect::<Vec<_>>());
    }
    sp.rank()
}

/// Holonomy of a witness segment.
pub fn witness_holonomy(w: &WitnessSegment) -> C64 {
    C64::new(w.re, w.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;

    #[test]
    fn square_torus_ell2() {
        let s = Builtin::SquareTorus.build().unwrap();
        let a = Analysis::new(&s).unwrap();
        let v = a.ell_inv2().unwrap();
        assert!((v.value - 2.0).abs() < 1e-12);
        assert!((a.exh_m().unwrap().value - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rect_torus_ell2() {
        for h in [1.5, 3.0, 7.0] {
            let s = Builtin::RectTorus { w: 1.0, h }.build().unwrap();
            let a = Analysis::new(&s).unwrap();
            assert!((a.ell_inv2().unwrap().value - (1.0 + h.powi(-2))).abs() < 1e-12);
            assert!((a.exh_m().unwrap().value - (h + 1.0 / h).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn r_sigma_slit() {
        let s = Builtin::SlitTori { t: 0.1 }.build().unwrap();
        let a = Analysis::new(&s).unwrap();
        let id = Surjection::identity(0, 2);
        assert!((a.r_sigma(&id).unwrap().value - 0.05).abs() < 1e-12);
        let col = Surjection::full_collapse(0, 2);
        let r = a.r_sigma(&col).unwrap().value;
        assert!((r - 0.5).abs() < 1e-9);
    }

    #[test]
    fn cover_membership() {
        let col = Surjection::full_collapse(0, 2);
        let s = Builtin::SlitTori { t: 0.001 }.build().unwrap();
        assert!(Analysis::new(&s).unwrap().in_v_sigma(&col).unwrap().member);
        let s = Builtin::SlitTori { t: 0.4 }.build().unwrap();
        assert!(!Analysis::new(&s).unwrap().in_v_sigma(&col).unwrap().member);
        let id = Surjection::identity(0, 2);
        assert!(Analysis::new(&s).unwrap().in_v_sigma(&id).unwrap().member);
    }

    #[test]
    fn eta_identity_is_exh() {
        let s = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
        let a = Analysis::new(&s).unwrap();
        let id = Surjection::identity(0, 1);
        let eta = a.eta_sigma(&id).unwrap().value;
        assert!((eta.ln() - a.exh_m().unwrap().value).abs() < 1e-12);
        assert_eq!(a.zeta_sigma(&id).unwrap().value, 0.0);
        assert!((a.exh_sigma(&id).unwrap().value - (eta + 1.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn collapsed_slit_quotient() {
        let t = 0.001;
        let s = Builtin::SlitTori { t }.build().unwrap();
        let a = Analysis::new(&s).unwrap();
        let ev = a.cover_eval(&Surjection::full_collapse(0, 2)).unwrap();
        assert_eq!(ev.disk_rank, 1);
        assert_eq!(ev.quotient_basis.len(), 4);
        assert!((ev.disk_sum - t * t).abs() < 1e-15);
        assert!(ev.quotient_basis.iter().all(|w| w.length > 0.5));
    }

    #[test]
    fn chain_checks() {
        let s = Builtin::SlitTori { t: 0.001 }.build().unwrap();
        let a = Analysis::new(&s).unwrap();
        let id = Surjection::identity(0, 2);
        let col = Surjection::full_collapse(0, 2);
        let v = a.exh_chain(&[id.clone(), col.clone()]).unwrap().value;
        let want = a.exh_sigma(&id).unwrap().value + a.exh_sigma(&col).unwrap().value;
        assert!((v - want).abs() < 1e-12);
        assert!(matches!(
            a.exh_chain(&[col.clone(), id.clone()]),
            Err(Error::ChainNotDecreasing(_))
        ));
        assert!(matches!(
            a.exh_chain(&[id.clone(), id]),
            Err(Error::ChainNotDecreasing(_))
        ));
    }

    #[test]
    fn constants() {
        assert_eq!(c_const(2, 0), 1.0 / 4096.0);
        let c = c_const(2, 0);
        assert_eq!(chi(c, 0.0).unwrap(), 1.0);
        assert_eq!(chi(c, c / 2.0).unwrap(), 2.0);
        assert!(chi(c, c).is_err());
    }
}
