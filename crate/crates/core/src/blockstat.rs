//! Empirical joint block distributions and the conditional block entropy
//! `H_{k,N}(α|β)`.
//!
//! `H_{k,N}` is the conditional entropy of the content block given the
//! condition block when a pair is drawn uniformly from the first `N` pairs,
//! either aligned (`α[(i-1)k..ik]`) or sliding (`α[i..i+k]`). The dimension
//! estimates take min/max of `H_{k,N}/k` over a burn-in window of `N`, then
//! the infimum over `k`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{BitString, Error, Result};

/// Absolute slack used when comparing entropies.
pub const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    Aligned,
    Sliding,
}

impl std::str::FromStr for BlockMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned" => Ok(Self::Aligned),
            "sliding" => Ok(Self::Sliding),
            _ => Err(Error::InvalidArgument(format!("unknown block mode {s:?}"))),
        }
    }
}

impl BlockMode {
    /// Bits of each input needed for `n` pairs of `k`-bit blocks.
    pub fn required_len(self, k: usize, n: usize) -> usize {
        match self {
            Self::Aligned => k * n,
            Self::Sliding => n + k - 1,
        }
    }

    fn start(self, k: usize, i: usize) -> usize {
        match self {
            Self::Aligned => i * k,
            Self::Sliding => i,
        }
    }
}

/// Multiset of `(content block, condition block)` pairs of common length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointBlockDist {
    k: usize,
    total: u64,
    counts: BTreeMap<(BitString, BitString), u64>,
}

impl JointBlockDist {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            total: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, a: BitString, b: BitString) {
        assert!(
            a.len() == self.k && b.len() == self.k,
            "block length must be k"
        );
        *self.counts.entry((a, b)).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn from_pairs(k: usize, pairs: impl IntoIterator<Item = (BitString, BitString)>) -> Self {
        let mut d = Self::new(k);
        for (a, b) in pairs {
            d.add(a, b);
        }
        d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<(BitString, BitString), u64> {
        &self.counts
    }

    /// Pools two distributions over the same block size.
    pub fn merged(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (key, &c) in &other.counts {
            *out.counts.entry(key.clone()).or_insert(0) += c;
        }
        out.total += other.total;
        out
    }
}

fn check_len(x: &BitString, needed: usize) -> Result<()> {
    if x.len() < needed {
        Err(Error::InsufficientLength {
            needed,
            available: x.len(),
        })
    } else {
        Ok(())
    }
}

fn check_block(k: usize, n: usize) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "block size and block count must be positive".into(),
        ));
    }
    Ok(())
}

fn dist_from(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
    start: impl Fn(usize) -> usize,
) -> JointBlockDist {
    JointBlockDist::from_pairs(
        k,
        (0..n).map(|i| {
            let s = start(i);
            (alpha.slice(s..s + k), beta.slice(s..s + k))
        }),
    )
}

/// The first `n` block pairs of `(α, β)`.
pub fn joint_block_dist(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
    mode: BlockMode,
) -> Result<JointBlockDist> {
    check_block(k, n)?;
    let needed = mode.required_len(k, n);
    check_len(alpha, needed)?;
    check_len(beta, needed)?;
    Ok(dist_from(alpha, beta, k, n, |i| mode.start(k, i)))
}

/// `H(𝒜|ℬ)` in bits, with `0·log 0 = 0`.
pub fn cond_entropy(d: &JointBlockDist) -> f64 {
    if d.total == 0 {
        return 0.0;
    }
    let mut per_b: BTreeMap<&BitString, u64> = BTreeMap::new();
    for ((_, b), &c) in &d.counts {
        *per_b.entry(b).or_insert(0) += c;
    }
    let n = d.total as f64;
    let h: f64 = d
        .counts
        .iter()
        .map(|((_, b), &c)| {
            let nb = per_b[b] as f64;
            let c = c as f64;
            (c / n) * (nb / c).log2()
        })
        .sum();
    h.clamp(0.0, d.k as f64)
}

fn xlog2x(n: u64) -> f64 {
    if n <= 1 {
        0.0
    } else {
        let x = n as f64;
        x * x.log2()
    }
}

/// Incremental `H(𝒜|ℬ)` over a growing multiset of packed block pairs.
///
/// Keeps `Σ_B f(n_B)` and `Σ_{A,B} f(n_AB)` with `f(n) = n log₂ n`, so that
/// `H = (Σ_B f(n_B) − Σ_{AB} f(n_AB)) / N`. When every condition determines
/// its content block both sums receive identical increments and `H` is
/// exactly zero.
#[derive(Debug, Clone, Default)]
pub(crate) struct EntropyTracker {
    k: usize,
    total: u64,
    joint: HashMap<u64, u64>,
    cond: HashMap<u64, u64>,
    sum_joint: f64,
    sum_cond: f64,
}

impl EntropyTracker {
    pub(crate) fn new(k: usize) -> Self {
        assert!(k <= 31, "packed tracker supports k <= 31");
        Self {
            k,
            ..Default::default()
        }
    }

    pub(crate) fn add(&mut self, a: u64, b: u64) {
        let nj = self.joint.entry((a << self.k) | b).or_insert(0);
        self.sum_joint += xlog2x(*nj + 1) - xlog2x(*nj);
        *nj += 1;
        let nc = self.cond.entry(b).or_insert(0);
        self.sum_cond += xlog2x(*nc + 1) - xlog2x(*nc);
        *nc += 1;
        self.total += 1;
    }

    pub(crate) fn entropy(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        ((self.sum_cond - self.sum_joint) / self.total as f64).clamp(0.0, self.k as f64)
    }
}

/// `H_{k,N}` sampled along an increasing schedule of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub k: usize,
    pub mode: BlockMode,
    pub points: Vec<(usize, f64)>,
}

pub fn entropy_profile(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    schedule: &[usize],
    mode: BlockMode,
) -> Result<EntropyProfile> {
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "schedule must be strictly increasing".into(),
        ));
    }
    let points = schedule
        .iter()
        .map(|&n| Ok((n, cond_entropy(&joint_block_dist(alpha, beta, k, n, mode)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProfile { k, mode, points })
}

/// Min/max over the burn-in window for one block size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerK {
    /// liminf-style value: min over `N ∈ [burn_in, n_max]`.
    pub inf: f64,
    /// limsup-style value: max over the same window.
    pub sup: f64,
    pub burn_in: usize,
    pub n_max: usize,
}

impl PerK {
    pub(crate) fn empty(burn_in: usize, n_max: usize) -> Self {
        Self {
            inf: f64::INFINITY,
            sup: f64::NEG_INFINITY,
            burn_in,
            n_max,
        }
    }

    pub(crate) fn observe(&mut self, v: f64) {
        self.inf = self.inf.min(v);
        self.sup = self.sup.max(v);
    }
}

/// Finite-horizon estimate of `dim(α|β)` and `Dim(α|β)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimEstimate {
    pub dim_est: f64,
    #[serde(rename = "Dim_est")]
    pub strong_dim_est: f64,
    pub per_k: BTreeMap<usize, PerK>,
    /// Always true: liminf/limsup over infinite N are replaced by min/max
    /// over each block size's `[burn_in, n_max]` window.
    pub finite_horizon: bool,
}

impl DimEstimate {
    /// Aggregates per-k values with an infimum over k.
    pub fn from_per_k(per_k: BTreeMap<usize, PerK>) -> Self {
        let dim_est = per_k.values().map(|p| p.inf).fold(f64::INFINITY, f64::min);
        let strong_dim_est = per_k.values().map(|p| p.sup).fold(f64::INFINITY, f64::min);
        Self {
            dim_est,
            strong_dim_est,
            per_k,
            finite_horizon: true,
        }
    }
}

/// `max(64, n_max/16)`, kept strictly below `n_max`.
pub fn default_burn_in(n_max: usize) -> usize {
    (n_max / 16).max(64).min(n_max.saturating_sub(1)).max(1)
}

pub(crate) fn check_window(burn_in: usize, n_max: usize) -> Result<usize> {
    if n_max == 0 || burn_in >= n_max {
        return Err(Error::InvalidArgument(format!(
            "burn-in {burn_in} must be below n_max {n_max}"
        )));
    }
    Ok(burn_in.max(1))
}

/// `[min, max]` of `H_{k,N}/k` for `N ∈ [burn_in, n_max]`.
pub fn entropy_sweep(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n_max: usize,
    burn_in: usize,
    mode: BlockMode,
) -> Result<PerK> {
    check_block(k, n_max)?;
    let burn_in = check_window(burn_in, n_max)?;
    let needed = mode.required_len(k, n_max);
    check_len(alpha, needed)?;
    check_len(beta, needed)?;
    let mut tracker = EntropyTracker::new(k);
    let mut per_k = PerK::empty(burn_in, n_max);
    for i in 0..n_max {
        let s = mode.start(k, i);
        tracker.add(alpha.code_at(s, k), beta.code_at(s, k));
        if i + 1 >= burn_in {
            per_k.observe(tracker.entropy() / k as f64);
        }
    }
    Ok(per_k)
}

/// Entropy characterization over block sizes `1..=k_max`.
pub fn dim_estimate_entropy(
    alpha: &BitString,
    beta: &BitString,
    k_max: usize,
    n_max: usize,
    burn_in: usize,
    mode: BlockMode,
) -> Result<DimEstimate> {
    let ks: Vec<usize> = (1..=k_max).collect();
    dim_estimate_entropy_for(alpha, beta, &ks, n_max, burn_in, mode)
}

/// Entropy characterization over an explicit list of block sizes.
pub fn dim_estimate_entropy_for(
    alpha: &BitString,
    beta: &BitString,
    ks: &[usize],
    n_max: usize,
    burn_in: usize,
    mode: BlockMode,
) -> Result<DimEstimate> {
    if ks.is_empty() {
        return Err(Error::InvalidArgument("no block sizes".into()));
    }
    let per_k = ks
        .par_iter()
        .map(|&k| Ok((k, entropy_sweep(alpha, beta, k, n_max, burn_in, mode)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DimEstimate::from_per_k(per_k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublingCheck {
    /// `H_{2k,N}/(2k)`
    pub lhs: f64,
    /// `H_{k,2N}/k`
    pub rhs: f64,
    pub holds: bool,
}

/// Doubling the block size never increases entropy per bit:
/// `H_{2k,N}/(2k) ≤ H_{k,2N}/k` (aligned blocks).
pub fn check_doubling(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
) -> Result<DoublingCheck> {
    check_block(k, n)?;
    let lhs = cond_entropy(&joint_block_dist(
        alpha,
        beta,
        2 * k,
        n,
        BlockMode::Aligned,
    )?) / (2 * k) as f64;
    let rhs = cond_entropy(&joint_block_dist(
        alpha,
        beta,
        k,
        2 * n,
        BlockMode::Aligned,
    )?) / k as f64;
    Ok(DoublingCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureCheck {
    /// Entropy of the pooled distribution over all `k` offsets.
    pub h_sliding: f64,
    /// Average of the `k` per-offset aligned entropies.
    pub avg_offsets: f64,
    pub holds: bool,
}

/// `avg ≤ H_mixture ≤ avg + log₂ k`, where the mixture pools the `k`
/// aligned splittings starting at offsets `0..k` (`N` blocks each).
pub fn mixture_bound_check(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
) -> Result<MixtureCheck> {
    check_block(k, n)?;
    let needed = k * n + k - 1;
    check_len(alpha, needed)?;
    check_len(beta, needed)?;
    let per_offset: Vec<JointBlockDist> = (0..k)
        .map(|o| dist_from(alpha, beta, k, n, |i| o + i * k))
        .collect();
    let avg_offsets = per_offset.iter().map(cond_entropy).sum::<f64>() / k as f64;
    let pooled = per_offset
        .iter()
        .skip(1)
        .fold(per_offset[0].clone(), |acc, d| acc.merged(d));
    let h_sliding = cond_entropy(&pooled);
    let holds =
        avg_offsets <= h_sliding + TOL && h_sliding <= avg_offsets + (k as f64).log2() + TOL;
    Ok(MixtureCheck {
        h_sliding,
        avg_offsets,
        holds,
    })
}
