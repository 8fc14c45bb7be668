//! Reference oracles and random generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashSet;

use fsdim::autocomplexity::DescriptionMode;
use fsdim::bitseq::SplitMix64;
use fsdim::checks;
pub use fsdim::checks::{random_process, random_split};
use fsdim::gambler::GamblerSpec;
use fsdim::ratio::{rat, Rational};
use fsdim::BitString;
use num_traits::{One, Zero};

/// Stakes drawn from a small grid plus the two extremes.
pub fn random_stake(rng: &mut SplitMix64) -> Rational {
    match rng.below(6) {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let den = 1 + rng.below(8) as i64;
            rat(rng.below(den as u64 + 1) as i64, den)
        }
    }
}

pub fn random_gambler(rng: &mut SplitMix64, states: usize, lookahead: usize) -> GamblerSpec {
    let names = (0..states).map(|i| format!("g{i}")).collect();
    let start = rng.below(states as u64) as usize;
    GamblerSpec::from_fn(names, start, lookahead, |_, _| {
        let q = random_stake(rng);
        let n0 = rng.below(states as u64) as usize;
        let n1 = rng.below(states as u64) as usize;
        (q, n0, n1)
    })
    .unwrap()
}

fn stake_on(g: &GamblerSpec, state: usize, window: u64, bit: u8) -> Rational {
    let q = g.stake(state, window).unwrap().clone();
    if bit == 0 {
        q
    } else {
        Rational::one() - q
    }
}

/// Plays each gambler on its own account, starting from `1/l` each, and
/// pools and splits the total evenly after every `period` rounds. Returns
/// the total after each round, round 0 included.
pub fn simulate_accounts(
    gamblers: &[GamblerSpec],
    period: usize,
    alpha: &BitString,
    beta: &BitString,
    n: usize,
) -> Vec<Rational> {
    let l = gamblers.len() as i64;
    let c = gamblers[0].lookahead();
    let mut accounts = vec![rat(1, l); gamblers.len()];
    let mut states: Vec<usize> = gamblers.iter().map(|g| g.start()).collect();
    let mut totals = vec![Rational::one()];
    for i in 0..n {
        let w = beta.code_at(i, c + 1);
        let bit = alpha.get(i);
        for (j, g) in gamblers.iter().enumerate() {
            accounts[j] = &accounts[j] * stake_on(g, states[j], w, bit) * rat(2, 1);
            states[j] = g.next_state(states[j], w, bit).unwrap();
        }
        let total: Rational = accounts.iter().sum();
        if (i + 1) % period == 0 {
            accounts = vec![&total / rat(l, 1); gamblers.len()];
        }
        totals.push(total);
    }
    totals
}

/// Brute-force `K_D(A|B)`: tries every `P` in order of length and asks
/// whether some path spells exactly `(A, B, P)`. `None` if no `P` of length
/// at most `m_max` works.
pub fn brute_ksd(d: &DescriptionMode, a: &BitString, b: &BitString, m_max: usize) -> Option<usize> {
    (0..=m_max).find(|&m| BitString::all_of_len(m).any(|p| spells(d, a, b, &p)))
}

fn spells(d: &DescriptionMode, a: &BitString, b: &BitString, p: &BitString) -> bool {
    let n = d.vertices().len();
    let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut stack: Vec<(usize, usize, usize)> = (0..n).map(|v| (v, 0, 0)).collect();
    while let Some(cfg) = stack.pop() {
        if !seen.insert(cfg) {
            continue;
        }
        let (v, i, j) = cfg;
        if i == a.len() && j == p.len() {
            return true;
        }
        for e in d.edges().iter().filter(|e| e.from == v) {
            let (mut i2, mut j2) = (i, j);
            if let Some((x, y)) = e.io {
                if i >= a.len() || a.get(i) != x || b.get(i) != y {
                    continue;
                }
                i2 += 1;
            }
            if let Some(bit) = e.p {
                if j >= p.len() || p.get(j) != bit {
                    continue;
                }
                j2 += 1;
            }
            stack.push((e.to, i2, j2));
        }
    }
    false
}

/// A random mode together with its observed (and declared) valence.
pub fn random_validated_mode(
    rng: &mut SplitMix64,
    l_max: usize,
    m_max: usize,
) -> (DescriptionMode, usize) {
    let d = checks::random_mode(rng, l_max, m_max).unwrap();
    let v = d.declared_valence();
    (d, v)
}

/// Biased bits with `P(1) = num/den`.
pub fn biased_bits(rng: &mut SplitMix64, len: usize, num: u64, den: u64) -> BitString {
    BitString::from_bits((0..len).map(|_| rng.chance(num, den) as u8).collect()).unwrap()
}
