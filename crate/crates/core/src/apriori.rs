//! Finite-state conditional random processes and a priori complexity.
//!
//! A process reads one condition bit per step and emits one output bit; in
//! state `s` on condition bit `b` it emits 0 with probability `q(s, b)` and
//! moves to `next_{s,b}(output)`. `m_{M,s}(A|B)` is the probability of
//! output `A` on input `B` from `s`, and `KA_M(A|B) = -log₂ max_s m_{M,s}(A|B)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::autocomplexity::{huffman_cost, Split};
use crate::blockstat::{check_window, DimEstimate, PerK};
use crate::gambler::{self, GamblerSpec};
use crate::ratio::{self, format_rational, in_unit_interval, Rational};
use crate::{BitString, Error, Result};

/// Default limit on the block-process state bound `2^k·2^{k+1}·2^{k+1}`.
pub const DEFAULT_PROCESS_CAP: usize = 1 << 20;

/// Largest block size for which the bridged gambler is built as an explicit
/// automaton; larger sizes step the same process lazily.
pub const MATERIALIZE_MAX_K: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emit {
    /// Probability of emitting 0.
    pub q: Rational,
    /// Successor after emitting 0 and 1.
    pub next: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbProcess {
    states: Vec<String>,
    start: usize,
    emit: Vec<[Option<Emit>; 2]>,
}

impl ProbProcess {
    /// A process with every emission rule missing.
    pub fn new(states: Vec<String>, start: usize) -> Result<Self> {
        if states.is_empty() || start >= states.len() {
            return Err(Error::InvalidProcess(
                "process needs a valid start state".into(),
            ));
        }
        let emit = vec![[None, None]; states.len()];
        Ok(Self {
            states,
            start,
            emit,
        })
    }

    /// Builds a complete process from `(state, condition bit) -> (q, next0, next1)`.
    pub fn from_fn(
        states: Vec<String>,
        start: usize,
        mut rule: impl FnMut(usize, u8) -> (Rational, usize, usize),
    ) -> Result<Self> {
        let mut m = Self::new(states, start)?;
        for s in 0..m.num_states() {
            for b in 0..2u8 {
                let (q, n0, n1) = rule(s, b);
                m.set_emit(s, b, q, n0, n1);
            }
        }
        m.validate()?;
        Ok(m)
    }

    /// One state, fair coin regardless of the condition.
    pub fn uniform() -> Self {
        Self::from_fn(vec!["s".into()], 0, |_, _| (ratio::half(), 0, 0)).expect("valid")
    }

    /// One state, output equals the condition bit.
    pub fn copy() -> Self {
        Self::from_fn(vec!["s".into()], 0, |_, b| {
            (Rational::from_integer((1 - b as i64).into()), 0, 0)
        })
        .expect("valid")
    }

    pub fn set_emit(&mut self, state: usize, bit: u8, q: Rational, next0: usize, next1: usize) {
        self.emit[state][bit as usize] = Some(Emit {
            q,
            next: [next0, next1],
        });
    }

    pub fn emit(&self, state: usize, bit: u8) -> Option<&Emit> {
        self.emit[state][bit as usize].as_ref()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn with_start(mut self, start: usize) -> Result<Self> {
        if start >= self.states.len() {
            return Err(Error::InvalidProcess(format!(
                "no state with index {start}"
            )));
        }
        self.start = start;
        Ok(self)
    }

    /// Totality, `q ∈ [0,1]` and successor indices.
    pub fn validate(&self) -> Result<()> {
        for (s, rules) in self.emit.iter().enumerate() {
            for (b, rule) in rules.iter().enumerate() {
                let name = &self.states[s];
                let e = rule.as_ref().ok_or_else(|| {
                    Error::InvalidProcess(format!("no emission for state {name}, input {b}"))
                })?;
                if !in_unit_interval(&e.q) {
                    return Err(Error::InvalidProcess(format!(
                        "q = {} out of range at state {name}, input {b}",
                        format_rational(&e.q)
                    )));
                }
                if e.next.iter().any(|&n| n >= self.states.len()) {
                    return Err(Error::InvalidProcess(format!(
                        "successor out of range at state {name}, input {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn rule(&self, state: usize, bit: u8) -> Result<&Emit> {
        self.emit(state, bit).ok_or_else(|| {
            Error::InvalidProcess(format!(
                "no emission for state {}, input {bit}",
                self.states[state]
            ))
        })
    }
}

/// `m_{M,s}(A|B)`: product of emission probabilities along the unique path.
pub fn process_prob(m: &ProbProcess, s: usize, a: &BitString, b: &BitString) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if s >= m.num_states() {
        return Err(Error::InvalidProcess(format!("no state with index {s}")));
    }
    let mut p = Rational::one();
    let mut state = s;
    for i in 0..a.len() {
        let e = m.rule(state, b.get(i))?;
        let bit = a.get(i);
        if bit == 0 {
            p *= &e.q;
        } else {
            p *= Rational::one() - &e.q;
        }
        if p.is_zero() {
            return Ok(p);
        }
        state = e.next[bit as usize];
    }
    Ok(p)
}

/// Exact output law of `m` from state `s` on condition `b`.
pub fn output_law(
    m: &ProbProcess,
    s: usize,
    b: &BitString,
) -> Result<BTreeMap<BitString, Rational>> {
    if b.len() > 24 {
        return Err(Error::InvalidArgument(
            "condition too long to enumerate".into(),
        ));
    }
    let mut law = BTreeMap::new();
    let mut stack = vec![(BitString::new(), s, Rational::one())];
    while let Some((x, state, p)) = stack.pop() {
        if x.len() == b.len() {
            law.insert(x, p);
            continue;
        }
        let e = m.rule(state, b.get(x.len()))?;
        for bit in 0..2u8 {
            let f = if bit == 0 {
                e.q.clone()
            } else {
                Rational::one() - &e.q
            };
            let mut y = x.clone();
            y.push(bit);
            stack.push((y, e.next[bit as usize], &p * f));
        }
    }
    Ok(law)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AprioriValue {
    /// `m_{M,s}(A|B)` for each state, as `num/den`.
    #[serde(serialize_with = "ser_rationals")]
    pub per_state: Vec<Rational>,
    /// `-log₂ max_s m_{M,s}(A|B)`; `+∞` if every probability is 0.
    pub ka: f64,
}

impl AprioriValue {
    pub fn max_prob(&self) -> Rational {
        self.per_state
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub fn ka(m: &ProbProcess, a: &BitString, b: &BitString) -> Result<AprioriValue> {
    let per_state = (0..m.num_states())
        .map(|s| process_prob(m, s, a, b))
        .collect::<Result<Vec<_>>>()?;
    let best = per_state
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    Ok(AprioriValue {
        ka: -ratio::log2(&best),
        per_state,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum KaSuperadditivity {
    Ok {
        checked: usize,
    },
    Counterexample {
        split: Split,
        whole: Rational,
        first: Rational,
        second: Rational,
    },
}

/// Checks `max_s m(A₁A₂|B₁B₂) ≤ max_s m(A₁|B₁) · max_s m(A₂|B₂)` exactly,
/// which is superadditivity of `KA` with `+∞` absorbing.
pub fn check_superadditivity_ka(m: &ProbProcess, samples: &[Split]) -> Result<KaSuperadditivity> {
    for s in samples {
        let (a1, b1, a2, b2) = s;
        let whole = ka(m, &a1.concat(a2), &b1.concat(b2))?.max_prob();
        let first = ka(m, a1, b1)?.max_prob();
        let second = ka(m, a2, b2)?.max_prob();
        if whole > &first * &second {
            return Ok(KaSuperadditivity::Counterexample {
                split: s.clone(),
                whole,
                first,
                second,
            });
        }
    }
    Ok(KaSuperadditivity::Ok {
        checked: samples.len(),
    })
}

/// Tree process generating `k`-bit blocks, conditioned on the block of the
/// oracle that is stored while the next one is read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProcess {
    pub process: ProbProcess,
    pub k: usize,
    starts: Vec<usize>,
}

impl BlockProcess {
    /// Look-ahead the process must be fed with.
    pub fn lookahead(&self) -> usize {
        self.k
    }

    /// State holding condition block `b` at the start of a content block.
    pub fn start_for(&self, b: usize) -> usize {
        self.starts[b]
    }
}

/// Subtree masses in heap order: index `2^d + u` is the node with prefix `u`
/// of depth `d`.
fn tree_masses(dist: &[Rational], k: usize) -> Vec<Rational> {
    let mut mass = vec![Rational::zero(); 2 << k];
    for (a, p) in dist.iter().enumerate() {
        mass[(1 << k) + a] = p.clone();
    }
    for i in (1..1 << k).rev() {
        mass[i] = &mass[2 * i] + &mass[2 * i + 1];
    }
    mass
}

pub fn build_block_process(
    k: usize,
    family: &[Vec<Rational>],
    cmap: &[usize],
) -> Result<BlockProcess> {
    build_block_process_with_cap(k, family, cmap, DEFAULT_PROCESS_CAP)
}

/// States are `(stored block, buffer, tree node)` with buffer and node of
/// equal depth `d < k`. While emitting a block from `family[cmap(stored)]`
/// the process buffers the condition bits it reads; at the block boundary
/// the buffer becomes the stored block and the node returns to the root.
/// Unreachable subtrees emit with probability 1/2.
pub fn build_block_process_with_cap(
    k: usize,
    family: &[Vec<Rational>],
    cmap: &[usize],
    cap: usize,
) -> Result<BlockProcess> {
    if k == 0 || 3 * k + 2 >= usize::BITS as usize || (1usize << (3 * k + 2)) > cap {
        return Err(Error::StateCapExceeded { cap });
    }
    if cmap.len() != 1 << k || cmap.iter().any(|&i| i >= family.len()) {
        return Err(Error::InvalidArgument(
            "condition map must be total and index the family".into(),
        ));
    }
    for d in family {
        if d.len() != 1 << k
            || d.iter().any(|p| !in_unit_interval(p))
            || !d.iter().sum::<Rational>().is_one()
        {
            return Err(Error::InvalidDistribution(format!(
                "family member is not a distribution over {k}-bit blocks"
            )));
        }
    }
    let masses: Vec<Vec<Rational>> = family.iter().map(|d| tree_masses(d, k)).collect();
    let layer: usize = (0..k).map(|d| 1usize << (2 * d)).sum();
    let offset = |d: usize| -> usize { (0..d).map(|e| 1usize << (2 * e)).sum() };
    let index = |stored: usize, d: usize, buf: usize, node: usize| {
        stored * layer + offset(d) + (buf << d) + node
    };

    let mut names = Vec::with_capacity(layer << k);
    for stored in 0..1usize << k {
        for d in 0..k {
            for buf in 0..1usize << d {
                for node in 0..1usize << d {
                    names.push(format!(
                        "{}|{}|{}",
                        BitString::from_code(stored as u64, k),
                        BitString::from_code(buf as u64, d),
                        BitString::from_code(node as u64, d)
                    ));
                }
            }
        }
    }
    let mut process = ProbProcess::new(names, 0)?;
    let half = ratio::half();
    for stored in 0..1usize << k {
        let mass = &masses[cmap[stored]];
        for d in 0..k {
            for buf in 0..1usize << d {
                for node in 0..1usize << d {
                    let here = &mass[(1 << d) + node];
                    let q = if here.is_zero() {
                        half.clone()
                    } else {
                        &mass[(2 << d) + 2 * node] / here
                    };
                    let s = index(stored, d, buf, node);
                    for b in 0..2usize {
                        let nbuf = (buf << 1) | b;
                        let next = |a: usize| {
                            if d + 1 == k {
                                index(nbuf, 0, 0, 0)
                            } else {
                                index(stored, d + 1, nbuf, (node << 1) | a)
                            }
                        };
                        process.set_emit(s, b as u8, q.clone(), next(0), next(1));
                    }
                }
            }
        }
    }
    let starts = (0..1usize << k).map(|b| index(b, 0, 0, 0)).collect();
    Ok(BlockProcess { process, k, starts })
}

/// Gambler that stakes `q(s, last window bit)` on 0 and follows the process.
/// Its capital on `(a₁…a_N | b₁…b_{N+c})` is `2^N·m_{M,s₀}(a₁…a_N | b_{1+c}…b_{N+c})`.
pub fn process_to_gambler(m: &ProbProcess, c: usize) -> Result<GamblerSpec> {
    m.validate()?;
    GamblerSpec::from_fn(m.states().to_vec(), m.start(), c, |s, w| {
        let e = m.emit(s, (w & 1) as u8).expect("validated");
        (e.q.clone(), e.next[0], e.next[1])
    })
}

/// `P(X) = m_G(X|B)·2^{-|X|}` for every `X` of length `|B| - c`.
pub fn gambler_to_measure(g: &GamblerSpec, b: &BitString) -> Result<BTreeMap<BitString, Rational>> {
    gambler::validate_gambler(g)?;
    let c = g.lookahead();
    let n = b.len().checked_sub(c).ok_or(Error::InsufficientLength {
        needed: c,
        available: b.len(),
    })?;
    if n > 24 {
        return Err(Error::InvalidArgument(
            "condition too long to enumerate".into(),
        ));
    }
    let mut law = BTreeMap::new();
    let mut stack = vec![(BitString::new(), g.start(), Rational::one())];
    while let Some((x, state, p)) = stack.pop() {
        if x.len() == n {
            law.insert(x, p);
            continue;
        }
        let w = b.code_at(x.len(), c + 1);
        for bit in 0..2u8 {
            let (factor, next) = g.play(state, w, bit);
            let mut y = x.clone();
            y.push(bit);
            stack.push((y, next, &p * factor * ratio::half()));
        }
    }
    Ok(law)
}

fn check_inputs(alpha: &BitString, beta: &BitString, k: usize, n_max: usize) -> Result<()> {
    if k == 0 || k > crate::autocomplexity::MAX_BLOCK {
        return Err(Error::InvalidArgument(format!(
            "block size {k} out of range"
        )));
    }
    for x in [alpha, beta] {
        if x.len() < k * n_max {
            return Err(Error::InsufficientLength {
                needed: k * n_max,
                available: x.len(),
            });
        }
    }
    Ok(())
}

/// Counts `n[b][a]` of aligned block pairs over the first `n` blocks.
fn block_counts(alpha: &BitString, beta: &BitString, k: usize, n: usize) -> Vec<Vec<u64>> {
    let mut counts = vec![vec![0u64; 1 << k]; 1 << k];
    for i in 0..n {
        counts[beta.code_at(i * k, k) as usize][alpha.code_at(i * k, k) as usize] += 1;
    }
    counts
}

/// Empirical conditional distributions of the first `n` aligned blocks, one
/// family member per condition (fixed-length uniform for unseen conditions).
pub fn empirical_family(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
) -> Result<(Vec<Vec<Rational>>, Vec<usize>)> {
    check_inputs(alpha, beta, k, n)?;
    let counts = block_counts(alpha, beta, k, n);
    let family = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                vec![ratio::pow2_neg(k); 1 << k]
            } else {
                row.iter()
                    .map(|&c| Rational::new((c as i64).into(), (total as i64).into()))
                    .collect()
            }
        })
        .collect();
    Ok((family, (0..1 << k).collect()))
}

/// `[min, max]` over `N ∈ [burn_in, n_max]` of the per-bit a priori cost of the
/// first `N` blocks. Each condition block pays the cheaper of its prefix
/// Huffman dyadic distribution and the full-horizon empirical conditional.
pub fn apriori_sweep(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n_max: usize,
    burn_in: usize,
) -> Result<PerK> {
    check_inputs(alpha, beta, k, n_max)?;
    let burn_in = check_window(burn_in, n_max)?;
    let full = block_counts(alpha, beta, k, n_max);
    let weight: Vec<Vec<f64>> = full
        .iter()
        .map(|row| {
            let total = row.iter().sum::<u64>() as f64;
            row.iter()
                .map(|&c| {
                    if c == 0 {
                        0.0
                    } else {
                        (total / c as f64).log2()
                    }
                })
                .collect()
        })
        .collect();
    let size = 1usize << k;
    let mut counts = vec![vec![0u64; size]; size];
    let mut huff = vec![0u64; size];
    let mut cross = vec![0f64; size];
    let mut per_k = PerK::empty(burn_in, n_max);
    for i in 0..n_max {
        let a = alpha.code_at(i * k, k) as usize;
        let b = beta.code_at(i * k, k) as usize;
        counts[b][a] += 1;
        huff[b] = huffman_cost(&counts[b]);
        cross[b] += weight[b][a];
        if i + 1 >= burn_in {
            let total: f64 = huff
                .iter()
                .zip(&cross)
                .map(|(&h, &c)| (h as f64).min(c))
                .sum();
            per_k.observe(total / (k * (i + 1)) as f64);
        }
    }
    Ok(per_k)
}

/// A priori characterization over the given block sizes.
pub fn dim_estimate_apriori(
    alpha: &BitString,
    beta: &BitString,
    ks: &[usize],
    n_max: usize,
    burn_in: usize,
) -> Result<DimEstimate> {
    if ks.is_empty() {
        return Err(Error::InvalidArgument("no block sizes".into()));
    }
    let per_k = ks
        .par_iter()
        .map(|&k| Ok((k, apriori_sweep(alpha, beta, k, n_max, burn_in)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DimEstimate::from_per_k(per_k))
}

/// `log₂` capital after each of the first `k·n` rounds of the gambler bridged
/// from the block process of the empirical conditionals of the first `n`
/// blocks, started at the state holding `β`'s first block. Needs `k` oracle
/// bits beyond `k·n`.
pub fn bridged_gambler_log_capital(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
) -> Result<Vec<f64>> {
    check_inputs(alpha, beta, k, n)?;
    let rounds = k * n;
    if beta.len() < rounds + k {
        return Err(Error::InsufficientLength {
            needed: rounds + k,
            available: beta.len(),
        });
    }
    if k <= MATERIALIZE_MAX_K {
        let (family, cmap) = empirical_family(alpha, beta, k, n)?;
        let bp = build_block_process(k, &family, &cmap)?;
        let start = bp.start_for(beta.code_at(0, k) as usize);
        let g = process_to_gambler(&bp.process.with_start(start)?, k)?;
        // Only log-capital is reported, so skip the exact rational phase.
        return Ok(gambler::run_gambler_with(&g, alpha, beta, rounds, 0)?.log2_values);
    }
    // Same process, stepped directly from subtree counts.
    let counts = block_counts(alpha, beta, k, n);
    let subtree: Vec<Vec<u64>> = counts
        .iter()
        .map(|row| {
            let mut t = vec![0u64; 2 << k];
            t[1 << k..].copy_from_slice(row);
            for i in (1..1 << k).rev() {
                t[i] = t[2 * i] + t[2 * i + 1];
            }
            t
        })
        .collect();
    let mut out = Vec::with_capacity(rounds + 1);
    let mut acc = 0f64;
    out.push(acc);
    for j in 0..n {
        let t = &subtree[beta.code_at(j * k, k) as usize];
        let mut node = 1usize;
        for r in 0..k {
            let bit = alpha.get(j * k + r) as usize;
            let child = 2 * node + bit;
            acc += if t[node] == 0 {
                0.0
            } else if t[child] == 0 {
                f64::NEG_INFINITY
            } else {
                1.0 + (t[child] as f64 / t[node] as f64).log2()
            };
            node = child;
            out.push(acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::SplitMix64;
    use crate::ratio::{pow2, pow2_neg, rat};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn alternating() -> ProbProcess {
        ProbProcess::from_fn(vec!["x".into(), "y".into()], 0, |s, _| {
            let q = if s == 0 { rat(1, 3) } else { rat(2, 3) };
            (q, 1 - s, 1 - s)
        })
        .unwrap()
    }

    #[test]
    fn probability_examples() {
        let u = ProbProcess::uniform();
        assert_eq!(
            process_prob(&u, 0, &bs("0110"), &bs("1111")).unwrap(),
            pow2_neg(4)
        );
        let c = ProbProcess::copy();
        assert_eq!(
            process_prob(&c, 0, &bs("0110"), &bs("0110")).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            process_prob(&c, 0, &bs("0111"), &bs("0110")).unwrap(),
            rat(0, 1)
        );
        let alt = alternating();
        assert_eq!(
            process_prob(&alt, 0, &bs("00"), &bs("00")).unwrap(),
            rat(2, 9)
        );
        assert_eq!(
            process_prob(&alt, 1, &bs("00"), &bs("00")).unwrap(),
            rat(2, 9)
        );
        assert_eq!(
            process_prob(&alt, 0, &bs("01"), &bs("00")).unwrap(),
            rat(1, 9)
        );
        assert!(process_prob(&alt, 0, &bs("0"), &bs("00")).is_err());
    }

    #[test]
    fn ka_examples() {
        let a = bs("01101");
        assert_eq!(
            ka(&ProbProcess::uniform(), &a, &bs("00000")).unwrap().ka,
            5.0
        );
        assert_eq!(ka(&ProbProcess::copy(), &a, &a).unwrap().ka, 0.0);
        assert_eq!(
            ka(&ProbProcess::copy(), &a, &bs("01100")).unwrap().ka,
            f64::INFINITY
        );
    }

    #[test]
    fn output_law_is_normalized() {
        let alt = alternating();
        for b in BitString::all_of_len(5) {
            let law = output_law(&alt, 1, &b).unwrap();
            assert_eq!(law.len(), 32);
            assert_eq!(law.values().sum::<Rational>(), rat(1, 1));
        }
    }

    #[test]
    fn validation() {
        let mut m = ProbProcess::new(vec!["s".into()], 0).unwrap();
        m.set_emit(0, 0, rat(1, 2), 0, 0);
        assert!(m.validate().is_err());
        m.set_emit(0, 1, rat(3, 2), 0, 0);
        assert!(m.validate().is_err());
        m.set_emit(0, 1, rat(1, 2), 0, 1);
        assert!(m.validate().is_err());
        assert!(ProbProcess::new(vec![], 0).is_err());
    }

    #[test]
    fn superadditivity_examples() {
        let split = (bs("01"), bs("11"), bs("1"), bs("0"));
        let ok = KaSuperadditivity::Ok { checked: 1 };
        assert_eq!(
            check_superadditivity_ka(&ProbProcess::uniform(), &[split]).unwrap(),
            ok
        );
        let same = (bs("01"), bs("01"), bs("1"), bs("1"));
        assert_eq!(
            check_superadditivity_ka(&ProbProcess::copy(), &[same]).unwrap(),
            ok
        );
    }

    #[test]
    fn block_process_uniform_k1() {
        let bp = build_block_process(1, &[vec![rat(1, 2), rat(1, 2)]], &[0, 0]).unwrap();
        let mut rng = SplitMix64::new(2);
        let (a, b) = (rng.bits(7), rng.bits(7));
        assert_eq!(ka(&bp.process, &a, &b).unwrap().ka, 7.0);
    }

    #[test]
    fn block_process_tracks_stored_condition() {
        let family = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        let bp = build_block_process(1, &family, &[0, 1]).unwrap();
        let a = bs("011010");
        let shifted = bs("11010").concat(&bs("0"));
        let start = bp.start_for(a.get(0) as usize);
        assert_eq!(
            process_prob(&bp.process, start, &a, &shifted).unwrap(),
            rat(1, 1)
        );
        assert_eq!(ka(&bp.process, &a, &shifted).unwrap().ka, 0.0);
    }

    #[test]
    fn block_process_matches_log_sum() {
        let mut rng = SplitMix64::new(6);
        let k = 2;
        let (a, b) = (rng.bits(24), rng.bits(26));
        let (family, cmap) = empirical_family(&a, &b, k, 12).unwrap();
        let bp = build_block_process(k, &family, &cmap).unwrap();
        let start = bp.start_for(b.code_at(0, k) as usize);
        let p = process_prob(&bp.process, start, &a, &b.slice(k..k + 24)).unwrap();
        let direct: Rational = (0..12)
            .map(|j| {
                family[cmap[b.code_at(j * k, k) as usize]][a.code_at(j * k, k) as usize].clone()
            })
            .product();
        assert_eq!(p, direct);
    }

    #[test]
    fn block_process_cap() {
        let fam = vec![vec![pow2_neg(7); 128]];
        assert_eq!(
            build_block_process(7, &fam, &[0; 128]),
            Err(Error::StateCapExceeded {
                cap: DEFAULT_PROCESS_CAP
            })
        );
        let fam = vec![vec![pow2_neg(6); 64]];
        assert!(build_block_process(6, &fam, &[0; 64]).is_ok());
    }

    #[test]
    fn bridge_examples() {
        let mut rng = SplitMix64::new(12);
        let (a, b) = (rng.bits(10), rng.bits(10));
        let fair = process_to_gambler(&ProbProcess::uniform(), 0).unwrap();
        let t = gambler::run_gambler(&fair, &a, &b, 10).unwrap();
        assert!(t.values.iter().all(|m| m.is_one()));
        let copy = process_to_gambler(&ProbProcess::copy(), 0).unwrap();
        assert_eq!(
            gambler::run_gambler(&copy, &a, &a, 10).unwrap().values[10],
            pow2(10)
        );

        let law = gambler_to_measure(&fair, &bs("0110")).unwrap();
        assert!(law.values().all(|p| *p == pow2_neg(4)));
        let all0 = GamblerSpec::constant(rat(1, 1), 1);
        let law = gambler_to_measure(&all0, &bs("0110")).unwrap();
        assert_eq!(law[&bs("000")], rat(1, 1));
        assert_eq!(law.values().sum::<Rational>(), rat(1, 1));
    }

    #[test]
    fn round_trip_matches_output_law() {
        let alt = alternating();
        let b = bs("0110100");
        for c in 0..3 {
            let g = process_to_gambler(&alt, c).unwrap();
            let law = gambler_to_measure(&g, &b).unwrap();
            assert_eq!(law, output_law(&alt, 0, &b.slice(c..b.len())).unwrap());
        }
    }

    #[test]
    fn apriori_examples() {
        let mut rng = SplitMix64::new(21);
        let a = rng.bits(8 * 256);
        let est = dim_estimate_apriori(&a, &a, &[8], 256, 16).unwrap();
        assert!(est.per_k[&8].sup <= 1e-12);
        let z = BitString::zeros(4 * 1024);
        let est = dim_estimate_apriori(&z, &z, &[4], 1024, 64).unwrap();
        assert!(est.per_k[&4].sup <= 0.05);
    }

    #[test]
    fn materialized_and_lazy_bridges_agree() {
        let mut rng = SplitMix64::new(31);
        let (a, b) = (rng.bits(400), rng.bits(404));
        let k = 4;
        let exact = bridged_gambler_log_capital(&a, &b, k, 100).unwrap();
        let counts = block_counts(&a, &b, k, 100);
        let mut direct = 0f64;
        for j in 0..100 {
            let row = &counts[b.code_at(j * k, k) as usize];
            let total: u64 = row.iter().sum();
            direct += k as f64 + (row[a.code_at(j * k, k) as usize] as f64 / total as f64).log2();
            assert!((exact[(j + 1) * k] - direct).abs() < 1e-9);
        }
    }
}
