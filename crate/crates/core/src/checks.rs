//! Randomized property suites behind `fsdim check`.
//!
//! Every suite is driven by [`SplitMix64`] from a seed, so a failing case can
//! be replayed from the seed and case count alone.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::apriori::{
    check_superadditivity_ka, gambler_to_measure, process_prob, process_to_gambler,
    KaSuperadditivity, ProbProcess,
};
use crate::autocomplexity::{
    calibration_counts, check_superadditivity_ksd, compile_block_mode, huffman_code, validate_mode,
    CodeFamily, ConditionMap, DescriptionMode, Edge, KsdSuperadditivity, PrefixCode, Split,
};
use crate::bitseq::SplitMix64;
use crate::blockstat::{check_doubling, mixture_bound_check};
use crate::gambler::run_gambler;
use crate::ratio::{self, rat, Rational};
use crate::{BitString, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Doubling,
    Mixture,
    Superadditivity,
    Calibration,
    Bridges,
}

impl Suite {
    pub const ALL: [Self; 5] = [
        Self::Doubling,
        Self::Mixture,
        Self::Superadditivity,
        Self::Calibration,
        Self::Bridges,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Doubling => "doubling",
            Self::Mixture => "mixture",
            Self::Superadditivity => "superadditivity",
            Self::Calibration => "calibration",
            Self::Bridges => "bridges",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    /// Descriptions of failing cases; empty when the suite passes.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases", self.suite.name(), self.cases)?;
        if !self.passed() {
            write!(f, ", {} failing", self.failures.len())?;
        }
        f.write_str(")")?;
        for fail in self.failures.iter().take(5) {
            write!(f, "\n  {fail}")?;
        }
        Ok(())
    }
}

fn biased(rng: &mut SplitMix64, len: usize) -> BitString {
    let num = 1 + rng.below(7);
    BitString::from_bits((0..len).map(|_| rng.chance(num, 8) as u8).collect()).expect("binary")
}

fn stake(rng: &mut SplitMix64) -> Rational {
    match rng.below(6) {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let den = 1 + rng.below(8) as i64;
            rat(rng.below(den as u64 + 1) as i64, den)
        }
    }
}

/// A complete process with up to `max_states` states and random stakes.
pub fn random_process(rng: &mut SplitMix64, max_states: usize) -> ProbProcess {
    let n = 1 + rng.below(max_states as u64) as usize;
    let names = (0..n).map(|i| format!("m{i}")).collect();
    let start = rng.below(n as u64) as usize;
    ProbProcess::from_fn(names, start, |_, _| {
        let q = stake(rng);
        (
            q,
            rng.below(n as u64) as usize,
            rng.below(n as u64) as usize,
        )
    })
    .expect("generated process is complete")
}

/// A random mode with at most three vertices, declared with the valence
/// observed by [`validate_mode`] at the given bounds. Edges without output
/// always consume a description bit.
pub fn random_mode(rng: &mut SplitMix64, l_max: usize, m_max: usize) -> Result<DescriptionMode> {
    let vertices: Vec<String> = (0..1 + rng.below(3)).map(|i| format!("v{i}")).collect();
    let n = vertices.len() as u64;
    let edges: Vec<Edge> = (0..2 + rng.below(6))
        .map(|_| {
            let io = (rng.below(4) != 0).then(|| (rng.bit(), rng.bit()));
            let p = if io.is_none() || rng.bit() == 1 {
                Some(rng.bit())
            } else {
                None
            };
            Edge::new(rng.below(n) as usize, rng.below(n) as usize, io, p)
        })
        .collect();
    let loose = DescriptionMode::new(vertices.clone(), edges.clone(), usize::MAX / 4)?;
    let observed = validate_mode(&loose, l_max, m_max)?.max(1);
    DescriptionMode::new(vertices, edges, observed)
}

pub fn random_split(rng: &mut SplitMix64, max_len: usize) -> Split {
    let l1 = 1 + rng.below(max_len as u64) as usize;
    let l2 = 1 + rng.below(max_len as u64) as usize;
    (rng.bits(l1), rng.bits(l1), rng.bits(l2), rng.bits(l2))
}

/// Huffman code of a random distribution with small integer weights.
pub fn random_code(rng: &mut SplitMix64, k: usize) -> Result<PrefixCode> {
    let weights: Vec<i64> = (0..1 << k).map(|_| rng.below(6) as i64).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return Ok(PrefixCode::uniform(k));
    }
    huffman_code(&weights.iter().map(|&w| rat(w, total)).collect::<Vec<_>>())
}

/// Block modes compiled from up to three random codes and a random map.
pub fn random_block_mode(rng: &mut SplitMix64, k: usize) -> Result<DescriptionMode> {
    let mut family = CodeFamily::new(vec![random_code(rng, k)?])?;
    for _ in 0..rng.below(3) {
        family.intern(random_code(rng, k)?)?;
    }
    let assignment = (0..1 << k)
        .map(|_| rng.below(family.len() as u64) as usize)
        .collect();
    compile_block_mode(k, &family, &ConditionMap::new(k, assignment)?)
}

/// Checks `#{A : K_D(A|B) ≤ m} ≤ c·(2^{m+1} − 1)` for all `|B| ≤ l_max` and
/// `m ≤ m_max`, with `c` the valence observed at the same bounds. Returns a
/// description of the first violation.
pub fn calibration_violation(
    d: &DescriptionMode,
    l_max: usize,
    m_max: usize,
) -> Result<Option<String>> {
    let c = validate_mode(d, l_max, m_max)?;
    for len in 0..=l_max {
        for b in BitString::all_of_len(len) {
            let counts = calibration_counts(d, &b, m_max)?;
            for (m, &count) in counts.iter().enumerate() {
                let bound = c * ((2usize << m) - 1);
                if count > bound {
                    return Ok(Some(format!("B = {b}, m = {m}: {count} strings > {bound}")));
                }
            }
        }
    }
    Ok(None)
}

pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = SplitMix64::new(seed);
    let mut failures = Vec::new();
    match suite {
        Suite::Doubling => {
            for _ in 0..cases {
                let k = [1, 2, 4][rng.below(3) as usize];
                let n = [4, 16, 64][rng.below(3) as usize];
                let (a, b) = (biased(&mut rng, 2 * k * n), biased(&mut rng, 2 * k * n));
                let r = check_doubling(&a, &b, k, n)?;
                if !r.holds {
                    failures.push(format!("k = {k}, N = {n}: {} > {}", r.lhs, r.rhs));
                }
            }
        }
        Suite::Mixture => {
            for _ in 0..cases {
                let k = [2, 4, 8][rng.below(3) as usize];
                let n = 1 + rng.below(64) as usize;
                let (a, b) = (biased(&mut rng, k * n + k), biased(&mut rng, k * n + k));
                let r = mixture_bound_check(&a, &b, k, n)?;
                if !r.holds {
                    failures.push(format!(
                        "k = {k}, N = {n}: pooled {} vs average {}",
                        r.h_sliding, r.avg_offsets
                    ));
                }
            }
        }
        Suite::Superadditivity => {
            let modes = (cases / 50).max(1);
            for i in 0..modes {
                let d = random_mode(&mut rng, 5, 7)?;
                let splits: Vec<Split> = (0..50).map(|_| random_split(&mut rng, 5)).collect();
                if let KsdSuperadditivity::Counterexample { split, .. } =
                    check_superadditivity_ksd(&d, &splits)?
                {
                    failures.push(format!("ksd, mode {i}: split {split:?}"));
                }
            }
            for i in 0..cases {
                let m = random_process(&mut rng, 3);
                let split = random_split(&mut rng, 6);
                if let KaSuperadditivity::Counterexample { split, .. } =
                    check_superadditivity_ka(&m, &[split])?
                {
                    failures.push(format!("KA, process {i}: split {split:?}"));
                }
            }
        }
        Suite::Calibration => {
            for i in 0..cases {
                let k = 1 + rng.below(2) as usize;
                let d = random_block_mode(&mut rng, k)?;
                if let Some(v) = calibration_violation(&d, 4, 6)? {
                    failures.push(format!("block mode {i} (k = {k}): {v}"));
                }
            }
        }
        Suite::Bridges => {
            for i in 0..cases {
                let m = random_process(&mut rng, 3);
                let c = rng.below(3) as usize;
                let n = rng.below(13) as usize;
                let (a, b) = (rng.bits(n), rng.bits(n + c));
                let g = process_to_gambler(&m, c)?;
                let capital = run_gambler(&g, &a, &b, n)?.values[n].clone();
                let p = process_prob(&m, m.start(), &a, &b.slice(c..c + n))?;
                if capital != p * ratio::pow2(n) {
                    failures.push(format!("case {i}: capital identity fails on A = {a}"));
                }
                let total: Rational = gambler_to_measure(&g, &b.prefix(c + n.min(10)))?
                    .values()
                    .sum();
                if !total.is_one() {
                    failures.push(format!("case {i}: measure sums to {total}"));
                }
            }
        }
    }
    Ok(SuiteReport {
        suite,
        cases,
        failures,
    })
}
