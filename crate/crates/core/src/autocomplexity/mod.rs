//! Automatic description modes and the conditional complexity `K_D(A|B)`.
//!
//! A mode is a finite multigraph whose edges carry an optional output pair
//! `(a, b)` and an optional description bit `p`. A path spells a triple
//! `(A, B, P)` and may start and end at any vertex. `K_D(A|B)` is the
//! shortest `P` over all paths spelling `(A, B)`.

mod code;
mod compile;

pub use compile::MAX_BLOCK;

pub use code::{
    build_code_family, dyadic_distribution, huffman_code, huffman_cost, CodeFamily, ConditionMap,
    PrefixCode,
};
pub use compile::{
    auto_sweep, compile_block_mode, dim_estimate_auto, induced_block_code, induced_block_mode,
    InducedCode,
};

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::{BitString, Error, Result};

/// Default bounds for [`validate_mode`].
pub const DEFAULT_L_MAX: usize = 8;
pub const DEFAULT_M_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Output pair `(a, b)`: content bit and condition bit.
    pub io: Option<(u8, u8)>,
    /// Description bit consumed by the edge.
    pub p: Option<u8>,
}

impl Edge {
    pub fn new(from: usize, to: usize, io: Option<(u8, u8)>, p: Option<u8>) -> Self {
        Self { from, to, io, p }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionMode {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    valence: usize,
    out: Vec<Vec<usize>>,
}

impl DescriptionMode {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, valence: usize) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "mode needs at least one vertex".into(),
            ));
        }
        if valence == 0 {
            return Err(Error::InvalidArgument(
                "declared valence must be positive".into(),
            ));
        }
        let mut out = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(Error::InvalidArgument(format!(
                    "edge {i} references a missing vertex"
                )));
            }
            let bad_io = e.io.is_some_and(|(a, b)| a > 1 || b > 1);
            if bad_io || e.p.is_some_and(|p| p > 1) {
                return Err(Error::InvalidArgument(format!(
                    "edge {i} has a non-binary label"
                )));
            }
            out[e.from].push(i);
        }
        Ok(Self {
            vertices,
            edges,
            valence,
            out,
        })
    }

    /// One vertex; `(a, b)` costs the description bit `a`.
    pub fn copy() -> Self {
        let edges = (0..4u8)
            .map(|ab| {
                let (a, b) = (ab >> 1, ab & 1);
                Edge::new(0, 0, Some((a, b)), Some(a))
            })
            .collect();
        Self::new(vec!["v".into()], edges, 1).expect("valid")
    }

    /// One vertex emitting the constant `bit` for free under any condition.
    pub fn constant_emitter(bit: u8) -> Self {
        let edges = (0..2u8)
            .map(|b| Edge::new(0, 0, Some((bit, b)), None))
            .collect();
        Self::new(vec!["v".into()], edges, 1).expect("valid")
    }

    pub fn zero_emitter() -> Self {
        Self::constant_emitter(0)
    }

    /// Disjoint union; vertex names get `l.`/`r.` prefixes and valences add.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.vertices.len();
        let vertices = self
            .vertices
            .iter()
            .map(|v| format!("l.{v}"))
            .chain(other.vertices.iter().map(|v| format!("r.{v}")))
            .collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(
                other
                    .edges
                    .iter()
                    .map(|e| Edge::new(e.from + off, e.to + off, e.io, e.p)),
            )
            .collect();
        Self::new(vertices, edges, self.valence + other.valence).expect("valid")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn declared_valence(&self) -> usize {
        self.valence
    }
}

/// `K_D(A|B)`: fewest description bits over all paths spelling `(A, B)`, or
/// `None` if no path does. 0-1 BFS over `(vertex, position)`.
pub fn ksd(d: &DescriptionMode, a: &BitString, b: &BitString) -> Result<Option<usize>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    let layer = n + 1;
    let mut dist = vec![usize::MAX; d.vertices.len() * layer];
    let mut queue = VecDeque::new();
    for v in 0..d.vertices.len() {
        dist[v * layer] = 0;
        queue.push_back((v, 0usize));
    }
    while let Some((v, i)) = queue.pop_front() {
        let here = dist[v * layer + i];
        if i == n {
            return Ok(Some(here));
        }
        for &ei in &d.out[v] {
            let e = &d.edges[ei];
            let j = match e.io {
                None => i,
                Some((ea, eb)) if i < n && ea == a.get(i) && eb == b.get(i) => i + 1,
                Some(_) => continue,
            };
            let cost = usize::from(e.p.is_some());
            let slot = e.to * layer + j;
            if here + cost < dist[slot] {
                dist[slot] = here + cost;
                if cost == 0 {
                    queue.push_front((e.to, j));
                } else {
                    queue.push_back((e.to, j));
                }
            }
        }
    }
    Ok(None)
}

/// A path configuration: vertex, description so far, content so far.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Config {
    v: u32,
    p_len: u8,
    p_code: u64,
    a_code: u64,
}

fn close(d: &DescriptionMode, seeds: Vec<Config>, m_max: usize) -> HashSet<Config> {
    let mut seen: HashSet<Config> = seeds.iter().copied().collect();
    let mut stack = seeds;
    while let Some(c) = stack.pop() {
        for &ei in &d.out[c.v as usize] {
            let e = &d.edges[ei];
            if e.io.is_some() {
                continue;
            }
            let mut next = Config {
                v: e.to as u32,
                ..c
            };
            if let Some(p) = e.p {
                if c.p_len as usize >= m_max {
                    continue;
                }
                next.p_len += 1;
                next.p_code = (c.p_code << 1) | p as u64;
            }
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen
}

fn check_node(d: &DescriptionMode, b: &BitString, configs: &HashSet<Config>) -> Result<usize> {
    let mut groups: BTreeMap<(u8, u64), BTreeSet<u64>> = BTreeMap::new();
    for c in configs {
        groups
            .entry((c.p_len, c.p_code))
            .or_default()
            .insert(c.a_code);
    }
    let mut best = 0;
    for ((p_len, p_code), a_set) in &groups {
        best = best.max(a_set.len());
        if a_set.len() > d.valence {
            return Err(Error::ValenceExceeded {
                declared: d.valence,
                observed: a_set.len(),
                b: b.to_string(),
                p: BitString::from_code(*p_code, *p_len as usize).to_string(),
                a_set: a_set
                    .iter()
                    .map(|&a| BitString::from_code(a, b.len()).to_string())
                    .collect(),
            });
        }
    }
    Ok(best)
}

fn validate_from(
    d: &DescriptionMode,
    b: BitString,
    configs: HashSet<Config>,
    l_max: usize,
    m_max: usize,
) -> Result<usize> {
    let here = check_node(d, &b, &configs)?;
    if b.len() >= l_max || configs.is_empty() {
        return Ok(here);
    }
    let child = |bit: u8| {
        let seeds: Vec<Config> = configs
            .iter()
            .flat_map(|c| {
                d.out[c.v as usize].iter().filter_map(move |&ei| {
                    let e = &d.edges[ei];
                    match e.io {
                        Some((ea, eb))
                            if eb == bit && e.p.is_none_or(|_| (c.p_len as usize) < m_max) =>
                        {
                            let mut next = Config {
                                v: e.to as u32,
                                a_code: (c.a_code << 1) | ea as u64,
                                ..*c
                            };
                            if let Some(p) = e.p {
                                next.p_len += 1;
                                next.p_code = (c.p_code << 1) | p as u64;
                            }
                            Some(next)
                        }
                        _ => None,
                    }
                })
            })
            .collect();
        let mut nb = b.clone();
        nb.push(bit);
        validate_from(d, nb, close(d, seeds, m_max), l_max, m_max)
    };
    let (zero, one) = if b.len() < 4 {
        rayon::join(|| child(0), || child(1))
    } else {
        (child(0), child(1))
    };
    Ok(here.max(zero?).max(one?))
}

/// Bounded-exhaustive valence check: for every `|B| ≤ l_max` and
/// `|P| ≤ m_max`, counts the distinct `A` realized with `(B, P)`. Returns the
/// largest count, or the first witness exceeding the declared valence
/// (depth-first, `B` in lexicographic order).
pub fn validate_mode(d: &DescriptionMode, l_max: usize, m_max: usize) -> Result<usize> {
    if l_max > 63 || m_max > 63 {
        return Err(Error::InvalidArgument(
            "validation bounds must be at most 63".into(),
        ));
    }
    let seeds = (0..d.vertices.len())
        .map(|v| Config {
            v: v as u32,
            p_len: 0,
            p_code: 0,
            a_code: 0,
        })
        .collect();
    validate_from(d, BitString::new(), close(d, seeds, m_max), l_max, m_max)
}

/// One split `(A₁, B₁, A₂, B₂)` for the superadditivity suites.
pub type Split = (BitString, BitString, BitString, BitString);

#[derive(Debug, Clone, PartialEq)]
pub enum KsdSuperadditivity {
    Ok {
        checked: usize,
    },
    Counterexample {
        split: Split,
        whole: Option<usize>,
        first: Option<usize>,
        second: Option<usize>,
    },
}

/// Checks `K(A₁A₂|B₁B₂) ≥ K(A₁|B₁) + K(A₂|B₂)` with `None` read as `+∞`.
pub fn check_superadditivity_ksd(
    d: &DescriptionMode,
    samples: &[Split],
) -> Result<KsdSuperadditivity> {
    for s in samples {
        let (a1, b1, a2, b2) = s;
        let whole = ksd(d, &a1.concat(a2), &b1.concat(b2))?;
        let first = ksd(d, a1, b1)?;
        let second = ksd(d, a2, b2)?;
        let holds = match (whole, first, second) {
            (None, _, _) => true,
            (Some(w), Some(x), Some(y)) => w >= x + y,
            _ => false,
        };
        if !holds {
            return Ok(KsdSuperadditivity::Counterexample {
                split: s.clone(),
                whole,
                first,
                second,
            });
        }
    }
    Ok(KsdSuperadditivity::Ok {
        checked: samples.len(),
    })
}

/// `#{A : |A| = |B|, K_D(A|B) ≤ m}`.
pub fn calibration_check(d: &DescriptionMode, m: usize, b: &BitString) -> Result<usize> {
    Ok(calibration_counts(d, b, m)?[m])
}

/// Counts for every threshold `0..=m_max` at once.
pub fn calibration_counts(d: &DescriptionMode, b: &BitString, m_max: usize) -> Result<Vec<usize>> {
    if b.len() > 20 {
        return Err(Error::InvalidArgument(
            "condition too long for enumeration".into(),
        ));
    }
    let mut counts = vec![0; m_max + 1];
    for a in BitString::all_of_len(b.len()) {
        if let Some(c) = ksd(d, &a, b)? {
            for slot in counts.iter_mut().skip(c) {
                *slot += 1;
            }
        }
    }
    Ok(counts)
}
