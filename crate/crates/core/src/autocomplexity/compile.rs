//! The condition-guessing block decoder and the automatic-complexity estimate.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::code::{huffman_code, huffman_cost, CodeFamily, ConditionMap, PrefixCode};
use super::{DescriptionMode, Edge};
use crate::blockstat::{check_window, BlockMode, DimEstimate, JointBlockDist, PerK};
use crate::ratio::Rational;
use crate::{BitString, Error, Result};

/// Largest block size the estimators accept.
pub const MAX_BLOCK: usize = 12;

/// Builds the decoder mode. From a hub it guesses a condition block `G` for
/// free, walks the code tree of `family[cmap(G)]` reading description bits,
/// then emits the decoded block `Â` as `k` edges labelled `(Â_j, G_j)` and
/// returns to the hub. The last description bit and the first output pair
/// share an edge, so no path can enter a block between its codeword and its
/// output. A wrong guess spells a different condition, so it
/// never contributes to triples with the true one.
///
/// The declared valence is `V·2^k`: a start vertex and the guess on a final
/// partial block fix the output.
pub fn compile_block_mode(
    k: usize,
    family: &CodeFamily,
    cmap: &ConditionMap,
) -> Result<DescriptionMode> {
    if family.k() != k || cmap.k() != k {
        return Err(Error::InvalidArgument(
            "family, map and block size disagree".into(),
        ));
    }
    if cmap.assignment().iter().any(|&i| i >= family.len()) {
        return Err(Error::InvalidArgument(
            "condition map points outside the family".into(),
        ));
    }
    let mut vertices = vec!["hub".to_string()];
    let mut edges = Vec::new();
    let add = |vertices: &mut Vec<String>, name: String| {
        vertices.push(name);
        vertices.len() - 1
    };
    for g in 0..1usize << k {
        let guess = BitString::from_code(g as u64, k);
        let root = add(&mut vertices, format!("g{guess}"));
        edges.push(Edge::new(0, root, None, None));
        let code = &family.codes()[cmap.get(g)];
        let mut nodes: HashMap<BitString, usize> = HashMap::from([(BitString::new(), root)]);
        for (sym, word) in code.codewords().iter().enumerate() {
            let (last, inner) = word.bits().split_last().expect("codewords are non-empty");
            let mut at = root;
            let mut prefix = BitString::new();
            for &bit in inner {
                prefix.push(bit);
                at = match nodes.get(&prefix) {
                    Some(&v) => v,
                    None => {
                        let v = add(&mut vertices, format!("g{guess}:{prefix}"));
                        edges.push(Edge::new(at, v, None, Some(bit)));
                        nodes.insert(prefix.clone(), v);
                        v
                    }
                };
            }
            let block = BitString::from_code(sym as u64, k);
            for j in 0..k {
                let to = if j + 1 == k {
                    0
                } else {
                    add(&mut vertices, format!("g{guess}:{word}#{}", j + 1))
                };
                let p = (j == 0).then_some(*last);
                edges.push(Edge::new(at, to, Some((block.get(j), guess.get(j))), p));
                at = to;
            }
        }
    }
    let valence = vertices.len() << k;
    DescriptionMode::new(vertices, edges, valence)
}

/// Per-condition Huffman codes of an empirical joint distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedCode {
    pub family: CodeFamily,
    pub cmap: ConditionMap,
}

/// Huffman code of each empirical conditional distribution; conditions that
/// never occur get the fixed-length code.
pub fn induced_block_code(dist: &JointBlockDist) -> Result<InducedCode> {
    let k = dist.k();
    if k == 0 || k > MAX_BLOCK {
        return Err(Error::InvalidArgument(format!(
            "block size {k} outside 1..={MAX_BLOCK}"
        )));
    }
    let mut counts = vec![vec![0u64; 1 << k]; 1 << k];
    for ((a, b), &n) in dist.counts() {
        counts[b.code() as usize][a.code() as usize] += n;
    }
    let mut family: Option<CodeFamily> = None;
    let mut assignment = Vec::with_capacity(1 << k);
    for row in &counts {
        let total: u64 = row.iter().sum();
        let code = if total == 0 {
            PrefixCode::uniform(k)
        } else {
            let d: Vec<Rational> = row
                .iter()
                .map(|&n| Rational::new((n as i64).into(), (total as i64).into()))
                .collect();
            huffman_code(&d)?
        };
        let index = match family.as_mut() {
            Some(f) => f.intern(code)?,
            None => {
                family = Some(CodeFamily::new(vec![code])?);
                0
            }
        };
        assignment.push(index);
    }
    Ok(InducedCode {
        family: family.expect("at least one condition"),
        cmap: ConditionMap::new(k, assignment)?,
    })
}

/// The compiled decoder for the code induced by the first `n` aligned block pairs.
pub fn induced_block_mode(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n: usize,
) -> Result<DescriptionMode> {
    let dist = crate::blockstat::joint_block_dist(alpha, beta, k, n, BlockMode::Aligned)?;
    let induced = induced_block_code(&dist)?;
    compile_block_mode(k, &induced.family, &induced.cmap)
}

/// `[min, max]` over `N ∈ [burn_in, n_max]` of the per-bit description length
/// of the first `N` aligned blocks, where each condition block gets the
/// Huffman code of its own empirical conditional distribution in that prefix.
pub fn auto_sweep(
    alpha: &BitString,
    beta: &BitString,
    k: usize,
    n_max: usize,
    burn_in: usize,
) -> Result<PerK> {
    if k == 0 || k > MAX_BLOCK {
        return Err(Error::InvalidArgument(format!(
            "block size {k} outside 1..={MAX_BLOCK}"
        )));
    }
    let burn_in = check_window(burn_in, n_max)?;
    for x in [alpha, beta] {
        if x.len() < k * n_max {
            return Err(Error::InsufficientLength {
                needed: k * n_max,
                available: x.len(),
            });
        }
    }
    let size = 1usize << k;
    let mut counts: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut cost = vec![0u64; size];
    let mut total = 0u64;
    let mut per_k = PerK::empty(burn_in, n_max);
    for i in 0..n_max {
        let a = alpha.code_at(i * k, k) as usize;
        let b = beta.code_at(i * k, k) as usize;
        let row = counts.entry(b).or_insert_with(|| vec![0; size]);
        row[a] += 1;
        let fresh = huffman_cost(row);
        total = total - cost[b] + fresh;
        cost[b] = fresh;
        if i + 1 >= burn_in {
            per_k.observe(total as f64 / (k * (i + 1)) as f64);
        }
    }
    Ok(per_k)
}

/// Automatic-complexity characterization over the given block sizes.
pub fn dim_estimate_auto(
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
        .map(|&k| Ok((k, auto_sweep(alpha, beta, k, n_max, burn_in)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DimEstimate::from_per_k(per_k))
}
