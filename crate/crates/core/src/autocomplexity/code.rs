//! Prefix codes over `k`-bit blocks, Huffman construction and code families.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed};

use crate::ratio::{self, Rational};
use crate::{BitString, Error, Result};

/// A prefix-free code over the alphabet `{0,1}^k`; symbol `i` is the block
/// whose big-endian value is `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixCode {
    k: usize,
    codewords: Vec<BitString>,
}

impl PrefixCode {
    /// Checks alphabet size, prefix-freeness and Kraft.
    pub fn new(k: usize, codewords: Vec<BitString>) -> Result<Self> {
        if k == 0 || k > 16 || codewords.len() != 1 << k {
            return Err(Error::InvalidArgument(format!(
                "a code over {k}-bit blocks needs 2^{k} codewords"
            )));
        }
        let code = Self { k, codewords };
        if !code.is_prefix_free() {
            return Err(Error::InvalidArgument("code is not prefix-free".into()));
        }
        if code.kraft_sum() > Rational::one() {
            return Err(Error::InvalidArgument("Kraft sum exceeds 1".into()));
        }
        Ok(code)
    }

    /// The fixed-length code `A ↦ A`.
    pub fn uniform(k: usize) -> Self {
        Self {
            k,
            codewords: BitString::all_of_len(k).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn codewords(&self) -> &[BitString] {
        &self.codewords
    }

    pub fn codeword(&self, symbol: usize) -> &BitString {
        &self.codewords[symbol]
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(BitString::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.codewords.iter().map(BitString::len).max().unwrap_or(0)
    }

    pub fn is_prefix_free(&self) -> bool {
        let mut sorted: Vec<&BitString> = self.codewords.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| !w[0].is_prefix_of(w[1]))
    }

    pub fn kraft_sum(&self) -> Rational {
        self.codewords
            .iter()
            .map(|c| ratio::pow2_neg(c.len()))
            .sum()
    }

    /// `Σ_A Q(A)·len(A)`.
    pub fn expected_length(&self, dist: &[Rational]) -> Rational {
        dist.iter()
            .zip(&self.codewords)
            .map(|(q, c)| q * Rational::from_integer(c.len().into()))
            .sum()
    }
}

fn check_distribution(dist: &[Rational]) -> Result<usize> {
    let n = dist.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidDistribution(format!(
            "alphabet size {n} is not 2^k with k ≥ 1"
        )));
    }
    if dist.iter().any(Signed::is_negative) {
        return Err(Error::InvalidDistribution("negative probability".into()));
    }
    let total: Rational = dist.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {total}"
        )));
    }
    Ok(n.trailing_zeros() as usize)
}

/// Huffman code over the full alphabet. The two least probable nodes merge
/// first, ties going to the node containing the smaller symbol; the first
/// node popped takes bit 0. Zero-probability symbols still get codewords.
pub fn huffman_code(dist: &[Rational]) -> Result<PrefixCode> {
    let k = check_distribution(dist)?;
    let n = dist.len();
    // Node i < n is a leaf; later nodes are merges with (left, right) children.
    let mut children: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(Rational, usize, usize)>> = dist
        .iter()
        .enumerate()
        .map(|(sym, p)| Reverse((p.clone(), sym, sym)))
        .collect();
    while heap.len() > 1 {
        let Reverse((p0, min0, id0)) = heap.pop().unwrap();
        let Reverse((p1, min1, id1)) = heap.pop().unwrap();
        children.push(Some((id0, id1)));
        heap.push(Reverse((p0 + p1, min0.min(min1), children.len() - 1)));
    }
    let mut codewords = vec![BitString::new(); n];
    let mut stack = vec![(children.len() - 1, BitString::new())];
    while let Some((id, prefix)) = stack.pop() {
        match children[id] {
            None => codewords[id] = prefix,
            Some((l, r)) => {
                let mut p0 = prefix.clone();
                p0.push(0);
                let mut p1 = prefix;
                p1.push(1);
                stack.push((l, p0));
                stack.push((r, p1));
            }
        }
    }
    PrefixCode::new(k, codewords)
}

/// Total length `Σ n_A·len(A)` of the full-alphabet Huffman code for integer
/// counts. Optimal totals do not depend on tie-breaking.
pub fn huffman_cost(counts: &[u64]) -> u64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    // Two-queue merge: leaves in sorted order, merged nodes in creation order.
    let mut merged = std::collections::VecDeque::with_capacity(sorted.len());
    let mut leaves = sorted.into_iter().peekable();
    let mut total = 0u64;
    let take = |leaves: &mut std::iter::Peekable<std::vec::IntoIter<u64>>,
                merged: &mut std::collections::VecDeque<u64>| {
        match (leaves.peek(), merged.front()) {
            (Some(&l), Some(&m)) if m < l => merged.pop_front(),
            (Some(_), _) => leaves.next(),
            (None, _) => merged.pop_front(),
        }
    };
    while let Some(a) = take(&mut leaves, &mut merged) {
        let Some(b) = take(&mut leaves, &mut merged) else {
            break;
        };
        total += a + b;
        merged.push_back(a + b);
    }
    total
}

/// `2^{-len}` per symbol, any remainder added to the smallest symbol so the
/// result sums to 1.
pub fn dyadic_distribution(code: &PrefixCode) -> Vec<Rational> {
    let mut dist: Vec<Rational> = code
        .codewords
        .iter()
        .map(|c| ratio::pow2_neg(c.len()))
        .collect();
    let total: Rational = dist.iter().sum();
    dist[0] += Rational::one() - total;
    dist
}

/// Non-empty list of codes over a common alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFamily {
    k: usize,
    codes: Vec<PrefixCode>,
}

impl CodeFamily {
    pub fn new(codes: Vec<PrefixCode>) -> Result<Self> {
        let k = codes
            .first()
            .ok_or_else(|| Error::InvalidArgument("code family is empty".into()))?
            .k;
        if codes.iter().any(|c| c.k != k) {
            return Err(Error::InvalidArgument(
                "codes in a family must share the alphabet".into(),
            ));
        }
        Ok(Self { k, codes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn codes(&self) -> &[PrefixCode] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Index of the first code with the least expected length on `dist`.
    pub fn best_for(&self, dist: &[Rational]) -> (usize, Rational) {
        let mut best = (0, self.codes[0].expected_length(dist));
        for (i, c) in self.codes.iter().enumerate().skip(1) {
            let len = c.expected_length(dist);
            if len < best.1 {
                best = (i, len);
            }
        }
        best
    }

    /// Index of `code`, appending it if new.
    pub fn intern(&mut self, code: PrefixCode) -> Result<usize> {
        if code.k != self.k {
            return Err(Error::InvalidArgument(
                "code alphabet differs from family".into(),
            ));
        }
        Ok(match self.codes.iter().position(|c| *c == code) {
            Some(i) => i,
            None => {
                self.codes.push(code);
                self.codes.len() - 1
            }
        })
    }
}

/// Deduplicated Huffman codes, in order of first appearance.
pub fn build_code_family(dists: &[Vec<Rational>]) -> Result<CodeFamily> {
    let mut codes: Vec<PrefixCode> = Vec::new();
    for d in dists {
        let code = huffman_code(d)?;
        if !codes.contains(&code) {
            codes.push(code);
        }
    }
    CodeFamily::new(codes)
}

/// Total map from condition blocks to family indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionMap {
    k: usize,
    assignment: Vec<usize>,
}

impl ConditionMap {
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        if k == 0 || assignment.len() != 1 << k {
            return Err(Error::InvalidArgument(format!(
                "condition map over {k}-bit blocks needs 2^{k} entries"
            )));
        }
        Ok(Self { k, assignment })
    }

    pub fn constant(k: usize, index: usize) -> Self {
        Self {
            k,
            assignment: vec![index; 1 << k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, condition: usize) -> usize {
        self.assignment[condition]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}
