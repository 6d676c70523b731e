//! Surjections between marked-point sets, the partial order on them, and
//! the combinatorics of the stratification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A surjection `{1..n+k} -> {1..n+l}` restricting to the identity on
/// `{1..n}`. Stored 0-based and normalized: tail images outside the prefix
/// are labeled in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Surjection {
    n: usize,
    images: Vec<usize>,
    codomain: usize,
}

impl Surjection {
    /// From 0-based images; normalizes the codomain labeling.
    pub fn new(n: usize, images: Vec<usize>) -> Result<Surjection> {
        if n > images.len() {
            return Err(Error::InvalidSurjection(format!(
                "prefix size {n} exceeds domain size {}",
                images.len()
            )));
        }
        for (i, &x) in images.iter().take(n).enumerate() {
            if x != i {
                return Err(Error::InvalidSurjection(format!(
                    "prefix element {} maps to {}, must be fixed",
                    i + 1,
                    x + 1
                )));
            }
        }
        let codomain = images.iter().max().map_or(0, |m| m + 1);
        let mut hit = vec![false; codomain];
        for &x in &images {
            hit[x] = true;
        }
        if let Some(j) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidSurjection(format!("codomain element {} is not hit", j + 1)));
        }
        let mut relabel: BTreeMap<usize, usize> = (0..n).map(|i| (i, i)).collect();
        let mut fresh = n;
        let images = images
            .iter()
            .map(|&x| {
                *relabel.entry(x).or_insert_with(|| {
                    fresh += 1;
                    fresh - 1
                })
            })
            .collect();
        Ok(Surjection { n, images, codomain })
    }

    /// From 1-based images, the CLI convention.
    pub fn from_one_based(n: usize, images: &[usize]) -> Result<Surjection> {
        if images.iter().any(|&x| x == 0) {
            return Err(Error::InvalidSurjection("images are 1-based".into()));
        }
        Self::new(n, images.iter().map(|x| x - 1).collect())
    }

    /// Parses a comma-separated list of 1-based images.
    pub fn parse(n: usize, text: &str) -> Result<Surjection> {
        let images = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSurjection(format!("`{t}` is not an index")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(n, &images)
    }

    /// Parses a `;`-separated chain of surjections.
    pub fn parse_chain(n: usize, text: &str) -> Result<Vec<Surjection>> {
        text.split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| Self::parse(n, p))
            .collect()
    }

    pub fn identity(n: usize, k: usize) -> Surjection {
        Surjection {
            n,
            images: (0..n + k).collect(),
            codomain: n + k,
        }
    }

    /// All tail points sent to one new point (`k >= 1`).
    pub fn full_collapse(n: usize, k: usize) -> Surjection {
        let mut images: Vec<usize> = (0..n).collect();
        images.extend(std::iter::repeat(n).take(k));
        Surjection {
            n,
            images,
            codomain: n + usize::from(k > 0),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    /// `k - l`.
    pub fn depth(&self) -> usize {
        self.domain_size() - self.codomain
    }

    pub fn is_identity(&self) -> bool {
        self.depth() == 0
    }

    /// Smallest `i` with `σ(i) = j`, for each `j`.
    pub fn centers(&self) -> Vec<usize> {
        let mut c = vec![usize::MAX; self.codomain];
        for (i, &j) in self.images.iter().enumerate() {
            if c[j] == usize::MAX {
                c[j] = i;
            }
        }
        c
    }

    /// Whether the prefix is left alone and the tail images form an
    /// initial segment of the codomain tail at every step.
    pub fn is_lexicographic(&self) -> bool {
        let mut seen = self.n;
        for &x in &self.images[self.n..] {
            if x < self.n || x > seen {
                return false;
            }
            if x == seen {
                seen += 1;
            }
        }
        true
    }

    /// `(σ_* m)_j = Σ_{σ(i)=j} m_i`.
    pub fn pushforward(&self, m: &[u32]) -> Result<Vec<u32>> {
        if m.len() != self.domain_size() {
            return Err(Error::SizeMismatch {
                expected: self.domain_size(),
                found: m.len(),
            });
        }
        let mut out = vec![0; self.codomain];
        for (i, &x) in m.iter().enumerate() {
            out[self.images[i]] += x;
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Surjection) -> Result<Surjection> {
        if inner.codomain != self.domain_size() || inner.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.domain_size(),
                found: inner.codomain,
            });
        }
        Surjection::new(self.n, inner.images.iter().map(|&x| self.images[x]).collect())
    }

    /// `self ⪯ other`: `self = τ ∘ other` for some surjection `τ`, i.e. the
    /// fibers of `other` refine those of `self`.
    pub fn leq(&self, other: &Surjection) -> Result<bool> {
        if self.domain_size() != other.domain_size() || self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: other.domain_size(),
                found: self.domain_size(),
            });
        }
        let mut tau = vec![usize::MAX; other.codomain];
        for (i, &j) in other.images.iter().enumerate() {
            let want = self.images[i];
            if tau[j] == usize::MAX {
                tau[j] = want;
            } else if tau[j] != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn comparable(&self, other: &Surjection) -> Result<bool> {
        Ok(self.leq(other)? || other.leq(self)?)
    }
}

impl fmt::Display for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Lexicographic surjections with prefix `n`, `k` tail points, `l` tail
/// images: restricted growth strings of length `k` with `l` blocks.
pub fn enumerate_lex(n: usize, k: usize, l: usize) -> Vec<Surjection> {
    fn rec(n: usize, k: usize, l: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Surjection>) {
        let placed = cur.len() - n;
        if placed == k {
            if used == l {
                out.push(Surjection {
                    n,
                    images: cur.clone(),
                    codomain: n + l,
                });
            }
            return;
        }
        // Not enough points left to open the remaining blocks.
        if l - used > k - placed {
            return;
        }
        for x in 0..used.min(l) {
            cur.push(n + x);
            rec(n, k, l, cur, used, out);
            cur.pop();
        }
        if used < l {
            cur.push(n + used);
            rec(n, k, l, cur, used + 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l > k || (l == 0 && k > 0) {
        return out;
    }
    let mut cur: Vec<usize> = (0..n).collect();
    rec(n, k, l, &mut cur, 0, &mut out);
    out
}

/// Stirling number of the second kind.
pub fn stirling2(k: usize, l: usize) -> u128 {
    let mut s = vec![vec![0u128; l + 1]; k + 1];
    s[0][0] = 1;
    for i in 1..=k {
        for j in 1..=l.min(i) {
            s[i][j] = j as u128 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[k][l]
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Order of the group of tail permutations preserving `m`.
pub fn aut_order(n: usize, m: &[u32]) -> u128 {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in m.iter().skip(n) {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().map(|&c| factorial(c)).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohdimBounds {
    pub moduli_bound: u32,
    pub hodge_bound: u32,
    pub strata_bound: u32,
    pub depth: u32,
    pub harer: u32,
    pub looijenga_conjecture: u32,
}

pub fn cohdim_bounds(g: u32, n: u32) -> Result<CohdimBounds> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let e = u32::from(n > 0);
    let b = CohdimBounds {
        moduli_bound: 2 * g - 2 + e,
        hodge_bound: 3 * g - 3 + e,
        strata_bound: g,
        depth: 2 * g - 3 + e,
        harer: 4 * g - 5 + n + e,
        looijenga_conjecture: g - 2 + e,
    };
    debug_assert_eq!(b.hodge_bound, b.strata_bound + b.depth);
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub depth: usize,
    /// Orders `m_1..m_{n+k}`; the tail is non-increasing.
    pub signature: Vec<u32>,
    pub aut_order: u128,
    pub proj_dimension: usize,
}

/// Positive partitions of `total` into exactly `parts` parts, each part at
/// most `max`, in non-increasing order.
fn partitions(total: u32, parts: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if total < parts as u32 {
        return;
    }
    let hi = max.min(total - (parts as u32 - 1));
    for x in (1..=hi).rev() {
        cur.push(x);
        partitions(total - x, parts - 1, x, cur, out);
        cur.pop();
    }
}

/// Ordered tuples of `len` nonnegative integers summing to `total`.
fn compositions(total: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if len == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for x in 0..=total {
        cur.push(x);
        compositions(total - x, len - 1, cur, out);
        cur.pop();
    }
}

/// Strata of the projectivized Hodge bundle over `M_{g,n}`, by depth.
pub fn stratification_table(g: u32, n: usize) -> Result<Vec<StratumRow>> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    let top = 2 * g as usize - 2;
    let max_depth = 2 * g as usize - 3 + usize::from(n > 0);
    let mut rows = Vec::new();
    for l in 0..=max_depth {
        let k = top - l;
        for s in 0..=(l as u32) {
            let mut prefixes = Vec::new();
            compositions(s, n, &mut Vec::new(), &mut prefixes);
            let mut tails = Vec::new();
            partitions(top as u32 - s, k, u32::MAX, &mut Vec::new(), &mut tails);
            for pre in &prefixes {
                for tail in &tails {
                    let mut sig = pre.clone();
                    sig.extend(tail);
                    rows.push(StratumRow {
                        depth: l,
                        aut_order: aut_order(n, &sig),
                        signature: sig,
                        proj_dimension: 2 * g as usize - 2 + n + k,
                    });
                }
            }
        }
    }
    Ok(rows)
}
