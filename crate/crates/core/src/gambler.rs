//! Finite-state gamblers with oracle look-ahead.
//!
//! In round `i` the gambler in state `s` sees the window `β[i..=i+c]`, stakes
//! the fraction `q = bet(s, w)` of its capital on `0` and the rest on `1`;
//! the part on the revealed bit `α[i]` is doubled. The state then moves to
//! `next(s, w, α[i])`. Capital starts at 1, so the capital function is a
//! martingale in `α` for every fixed oracle.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::ratio::{self, format_rational, in_unit_interval, Rational};
use crate::{BitString, Error, Result};

/// Default round count up to which capital is tracked as an exact rational.
pub const DEFAULT_EXACT_THRESHOLD: usize = 4096;

/// Default cap on reachable states for [`combine_accounts`].
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A finite-state betting strategy. Rule tables are dense over
/// `states × {0,1}^{c+1}`; absent entries are reported by [`validate_gambler`].
#[derive(Debug, Clone, PartialEq)]
pub struct GamblerSpec {
    states: Vec<String>,
    start: usize,
    lookahead: usize,
    bet: Vec<Option<Rational>>,
    next: Vec<Option<usize>>,
}

impl GamblerSpec {
    /// An empty rule table; every transition starts out missing.
    pub fn new(states: Vec<String>, start: usize, lookahead: usize) -> Result<Self> {
        if states.is_empty() || start >= states.len() {
            return Err(Error::InvalidArgument(
                "gambler needs a valid start state".into(),
            ));
        }
        if lookahead > 20 {
            return Err(Error::InvalidArgument(format!(
                "look-ahead {lookahead} too large"
            )));
        }
        let cells = states.len() << (lookahead + 1);
        Ok(Self {
            states,
            start,
            lookahead,
            bet: vec![None; cells],
            next: vec![None; cells * 2],
        })
    }

    /// Builds a complete table from a rule function `(state, window) -> (q, next0, next1)`.
    pub fn from_fn(
        states: Vec<String>,
        start: usize,
        lookahead: usize,
        mut rule: impl FnMut(usize, u64) -> (Rational, usize, usize),
    ) -> Result<Self> {
        let mut g = Self::new(states, start, lookahead)?;
        for s in 0..g.num_states() {
            for w in 0..g.num_windows() as u64 {
                let (q, n0, n1) = rule(s, w);
                g.set_rule(s, w, q, n0, n1);
            }
        }
        Ok(g)
    }

    /// A one-state gambler with a constant stake on 0.
    pub fn constant(stake_on_zero: Rational, lookahead: usize) -> Self {
        Self::from_fn(vec!["s".into()], 0, lookahead, |_, _| {
            (stake_on_zero.clone(), 0, 0)
        })
        .expect("single state is valid")
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_windows(&self) -> usize {
        1 << (self.lookahead + 1)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn lookahead(&self) -> usize {
        self.lookahead
    }

    fn cell(&self, state: usize, window: u64) -> usize {
        state * self.num_windows() + window as usize
    }

    pub fn set_stake(&mut self, state: usize, window: u64, q: Rational) {
        let c = self.cell(state, window);
        self.bet[c] = Some(q);
    }

    pub fn set_next(&mut self, state: usize, window: u64, bit: u8, to: usize) {
        let c = self.cell(state, window);
        self.next[c * 2 + bit as usize] = Some(to);
    }

    pub fn set_rule(&mut self, state: usize, window: u64, q: Rational, next0: usize, next1: usize) {
        self.set_stake(state, window, q);
        self.set_next(state, window, 0, next0);
        self.set_next(state, window, 1, next1);
    }

    pub fn stake(&self, state: usize, window: u64) -> Option<&Rational> {
        self.bet[self.cell(state, window)].as_ref()
    }

    pub fn next_state(&self, state: usize, window: u64, bit: u8) -> Option<usize> {
        self.next[self.cell(state, window) * 2 + bit as usize]
    }

    fn window_str(&self, window: u64) -> String {
        BitString::from_code(window, self.lookahead + 1).to_string()
    }

    /// Capital multiplier and successor for one round.
    pub(crate) fn play(&self, state: usize, window: u64, bit: u8) -> (Rational, usize) {
        let q = self.stake(state, window).expect("validated gambler");
        let part = if bit == 0 {
            q.clone()
        } else {
            Rational::one() - q
        };
        let next = self
            .next_state(state, window, bit)
            .expect("validated gambler");
        (part * Rational::from_integer(2.into()), next)
    }
}

/// Confirms totality of the rule table and `q ∈ [0,1]`; returns the first
/// violation in (state, window, bit) order.
pub fn validate_gambler(g: &GamblerSpec) -> Result<()> {
    for s in 0..g.num_states() {
        for w in 0..g.num_windows() as u64 {
            let window = || g.window_str(w);
            let state = || g.states[s].clone();
            match g.stake(s, w) {
                None => {
                    return Err(Error::MissingTransition {
                        state: state(),
                        window: window(),
                        bit: None,
                    })
                }
                Some(q) if !in_unit_interval(q) => {
                    return Err(Error::StakeOutOfRange {
                        state: state(),
                        window: window(),
                        stake: format_rational(q),
                    })
                }
                Some(_) => {}
            }
            for bit in 0..2u8 {
                if g.next_state(s, w, bit).is_none() {
                    return Err(Error::MissingTransition {
                        state: state(),
                        window: window(),
                        bit: Some(bit),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Capital history `m_0 = 1, m_1, …, m_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapitalTrajectory {
    /// Exact capitals for rounds `0..values.len()`; shorter than
    /// `log2_values` once the run passes the exact threshold.
    #[serde(skip)]
    pub values: Vec<Rational>,
    /// `log₂ m_i` for every round; `-∞` once capital hits zero.
    pub log2_values: Vec<f64>,
}

impl CapitalTrajectory {
    pub fn rounds(&self) -> usize {
        self.log2_values.len() - 1
    }

    /// Whether every round is available as an exact rational.
    pub fn is_exact(&self) -> bool {
        self.values.len() == self.log2_values.len()
    }

    pub fn final_log2(&self) -> f64 {
        *self.log2_values.last().expect("trajectory has round 0")
    }
}

fn check_inputs(g: &GamblerSpec, alpha: &BitString, beta: &BitString, n: usize) -> Result<()> {
    if alpha.len() < n {
        return Err(Error::InsufficientLength {
            needed: n,
            available: alpha.len(),
        });
    }
    if beta.len() < n + g.lookahead {
        return Err(Error::InsufficientLength {
            needed: n + g.lookahead,
            available: beta.len(),
        });
    }
    Ok(())
}

pub fn run_gambler(
    g: &GamblerSpec,
    alpha: &BitString,
    beta: &BitString,
    n: usize,
) -> Result<CapitalTrajectory> {
    run_gambler_with(g, alpha, beta, n, DEFAULT_EXACT_THRESHOLD)
}

/// Plays `n` rounds. Rounds `≤ exact_threshold` are exact rationals; later
/// rounds accumulate `log₂(2q)` terms in double precision.
pub fn run_gambler_with(
    g: &GamblerSpec,
    alpha: &BitString,
    beta: &BitString,
    n: usize,
    exact_threshold: usize,
) -> Result<CapitalTrajectory> {
    validate_gambler(g)?;
    check_inputs(g, alpha, beta, n)?;
    let c = g.lookahead;
    let exact_rounds = n.min(exact_threshold);
    let mut values = Vec::with_capacity(exact_rounds + 1);
    let mut log2_values = Vec::with_capacity(n + 1);
    let mut capital = Rational::one();
    let mut state = g.start;
    values.push(capital.clone());
    log2_values.push(0.0);
    for i in 0..exact_rounds {
        let (factor, next) = g.play(state, beta.code_at(i, c + 1), alpha.get(i));
        capital *= factor;
        state = next;
        log2_values.push(ratio::log2(&capital));
        values.push(capital.clone());
    }
    if exact_rounds < n {
        let mut cache: HashMap<usize, [f64; 2]> = HashMap::new();
        let mut log_capital = *log2_values.last().unwrap();
        for i in exact_rounds..n {
            let w = beta.code_at(i, c + 1);
            let cell = g.cell(state, w);
            let terms = cache.entry(cell).or_insert_with(|| {
                let q = g.stake(state, w).unwrap();
                let two = Rational::from_integer(2.into());
                [
                    ratio::log2(&(q * &two)),
                    ratio::log2(&((Rational::one() - q) * &two)),
                ]
            });
            let bit = alpha.get(i);
            log_capital += terms[bit as usize];
            state = g.next_state(state, w, bit).unwrap();
            log2_values.push(log_capital);
        }
    }
    Ok(CapitalTrajectory {
        values,
        log2_values,
    })
}

/// Growth exponents of `log₂ m_i / i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub limsup_est: f64,
    pub liminf_est: f64,
    pub burn_in: usize,
}

/// Max and min of `log₂ m_i / i` over rounds `i ∈ [burn_in, N]` (round 0 is
/// never used). `-∞` propagates.
pub fn exponent_estimates(traj: &CapitalTrajectory, burn_in: usize) -> Result<ExponentEstimate> {
    let n = traj.rounds();
    if n <= burn_in {
        return Err(Error::InvalidArgument(format!(
            "trajectory of {n} rounds does not pass burn-in {burn_in}"
        )));
    }
    Ok(exponent_over(traj, burn_in.max(1)..=n, burn_in))
}

/// Exponent estimates over an explicit set of rounds.
pub fn exponent_over(
    traj: &CapitalTrajectory,
    rounds: impl IntoIterator<Item = usize>,
    burn_in: usize,
) -> ExponentEstimate {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for i in rounds {
        let v = traj.log2_values[i] / i as f64;
        hi = hi.max(v);
        lo = lo.min(v);
    }
    ExponentEstimate {
        limsup_est: hi,
        liminf_est: lo,
        burn_in,
    }
}

/// Log-values of the `s`-gale `2^{(s-1)i} m_i` plus finite-horizon winning flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SgaleValues {
    pub values: Vec<f64>,
    /// The second half of the run sets a new maximum above the first half.
    pub unbounded: bool,
    /// Every value in the second half exceeds the first half's maximum.
    pub tends_to_infinity: bool,
}

pub fn sgale_values(traj: &CapitalTrajectory, s: &Rational) -> SgaleValues {
    let tax = ratio::to_f64(s) - 1.0;
    let values: Vec<f64> = traj
        .log2_values
        .iter()
        .enumerate()
        .map(|(i, &l)| if tax == 0.0 { l } else { l + tax * i as f64 })
        .collect();
    let mid = values.len() / 2;
    let (head, tail) = values.split_at(mid.max(1).min(values.len()));
    let head_max = head.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let nonempty = !tail.is_empty();
    SgaleValues {
        unbounded: nonempty && tail_max > head_max,
        tends_to_infinity: nonempty && tail_min > head_max,
        values,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct AccountState {
    components: Vec<usize>,
    round: usize,
    shares: Vec<Rational>,
}

/// One finite-state gambler that plays `gamblers` as separate accounts and
/// redistributes the total evenly after every `period` rounds.
///
/// States are `(component states, round in period, capital shares)`; the
/// stake on 0 is the share-weighted average of component stakes. Only states
/// reachable from the uniform start are built; more than `state_cap` of them
/// is an error.
pub fn combine_accounts(
    gamblers: &[GamblerSpec],
    period: usize,
    state_cap: usize,
) -> Result<GamblerSpec> {
    let first = gamblers
        .first()
        .ok_or_else(|| Error::InvalidArgument("no gamblers to combine".into()))?;
    if period == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    let c = first.lookahead;
    for g in gamblers {
        if g.lookahead != c {
            return Err(Error::LookaheadMismatch {
                expected: c,
                found: g.lookahead,
            });
        }
        validate_gambler(g)?;
    }
    let l = gamblers.len();
    let uniform = vec![Rational::new(1.into(), (l as i64).into()); l];
    let windows = 1u64 << (c + 1);

    let start = AccountState {
        components: gamblers.iter().map(|g| g.start).collect(),
        round: 0,
        shares: uniform.clone(),
    };
    let mut index: HashMap<AccountState, usize> = HashMap::new();
    let mut order: Vec<AccountState> = Vec::new();
    let mut queue = VecDeque::new();
    let mut rules: Vec<Vec<(Rational, [usize; 2])>> = Vec::new();
    index.insert(start.clone(), 0);
    order.push(start.clone());
    queue.push_back(start);

    while let Some(st) = queue.pop_front() {
        let mut row = Vec::with_capacity(windows as usize);
        for w in 0..windows {
            let stakes: Vec<&Rational> = gamblers
                .iter()
                .zip(&st.components)
                .map(|(g, &s)| g.stake(s, w).unwrap())
                .collect();
            let q: Rational = st.shares.iter().zip(&stakes).map(|(sh, &qj)| sh * qj).sum();
            let mut succ = [0usize; 2];
            for bit in 0..2u8 {
                let parts: Vec<Rational> = stakes
                    .iter()
                    .map(|&qj| {
                        if bit == 0 {
                            qj.clone()
                        } else {
                            Rational::one() - qj
                        }
                    })
                    .collect();
                let total = if bit == 0 {
                    q.clone()
                } else {
                    Rational::one() - &q
                };
                let round = (st.round + 1) % period;
                let shares = if round == 0 {
                    uniform.clone()
                } else if total.is_zero() {
                    st.shares.clone()
                } else {
                    st.shares
                        .iter()
                        .zip(&parts)
                        .map(|(sh, p)| sh * p / &total)
                        .collect()
                };
                let next = AccountState {
                    components: gamblers
                        .iter()
                        .zip(&st.components)
                        .map(|(g, &s)| g.next_state(s, w, bit).unwrap())
                        .collect(),
                    round,
                    shares,
                };
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = order.len();
                        if id >= state_cap {
                            return Err(Error::StateCapExceeded { cap: state_cap });
                        }
                        index.insert(next.clone(), id);
                        order.push(next.clone());
                        queue.push_back(next);
                        id
                    }
                };
                succ[bit as usize] = id;
            }
            row.push((q, succ));
        }
        rules.push(row);
    }

    let names = order
        .iter()
        .map(|st| {
            let comps: Vec<&str> = gamblers
                .iter()
                .zip(&st.components)
                .map(|(g, &s)| g.states[s].as_str())
                .collect();
            let shares: Vec<String> = st.shares.iter().map(format_rational).collect();
            format!("({})@{}[{}]", comps.join(","), st.round, shares.join(";"))
        })
        .collect();
    let mut out = GamblerSpec::new(names, 0, c)?;
    for (s, row) in rules.into_iter().enumerate() {
        for (w, (q, [n0, n1])) in row.into_iter().enumerate() {
            out.set_rule(s, w as u64, q, n0, n1);
        }
    }
    Ok(out)
}

/// Result of [`martingale_check`].
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum MartingaleCheck {
    Ok {
        checked: usize,
    },
    Counterexample {
        x: BitString,
        m_x: Rational,
        m_x0: Rational,
        m_x1: Rational,
    },
}

/// Verifies `m(X0) + m(X1) = 2 m(X)` exactly for every `|X| < depth`, with
/// the oracle fixed to `b`.
pub fn martingale_check(g: &GamblerSpec, b: &BitString, depth: usize) -> Result<MartingaleCheck> {
    validate_gambler(g)?;
    let c = g.lookahead;
    if b.len() < depth + c {
        return Err(Error::InsufficientLength {
            needed: depth + c,
            available: b.len(),
        });
    }
    let two = Rational::from_integer(2.into());
    let mut stack = vec![(BitString::new(), g.start, Rational::one())];
    let mut checked = 0;
    while let Some((x, state, m)) = stack.pop() {
        if x.len() >= depth {
            continue;
        }
        let w = b.code_at(x.len(), c + 1);
        let (f0, s0) = g.play(state, w, 0);
        let (f1, s1) = g.play(state, w, 1);
        let m0 = &m * f0;
        let m1 = &m * f1;
        checked += 1;
        if &m0 + &m1 != &m * &two {
            return Ok(MartingaleCheck::Counterexample {
                x,
                m_x: m,
                m_x0: m0,
                m_x1: m1,
            });
        }
        let mut x0 = x.clone();
        x0.push(0);
        let mut x1 = x;
        x1.push(1);
        stack.push((x0, s0, m0));
        stack.push((x1, s1, m1));
    }
    Ok(MartingaleCheck::Ok { checked })
}
