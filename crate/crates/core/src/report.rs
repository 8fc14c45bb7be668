//! Runs every characterization on one sequence pair and cross-checks them.
//!
//! Block sizes are independent: for each `k` the horizon is
//! `n_max_k = min(n_max, n/k)` blocks and the default burn-in is
//! [`default_burn_in`]`(n_max_k)`. All per-bit values are evaluated at block
//! boundaries. Reports serialize to JSON with sorted keys and floats rounded
//! to 12 significant digits, so identical configs give identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::apriori::{apriori_sweep, bridged_gambler_log_capital};
use crate::autocomplexity::{auto_sweep, MAX_BLOCK};
use crate::automaton::{read_automaton, Automaton};
use crate::bitseq::{generate, read_bits, shift_oracle, SequenceSpec};
use crate::blockstat::{default_burn_in, entropy_sweep, BlockMode, DimEstimate, PerK};
use crate::gambler::{exponent_estimates, run_gambler, GamblerSpec};
use crate::{BitString, Error, Result};

/// Float slack on inequalities that hold exactly in real arithmetic.
pub const FLOAT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Characterization {
    Entropy,
    Auto,
    Apriori,
    Gambler,
}

impl Characterization {
    pub const ALL: [Self; 4] = [Self::Entropy, Self::Auto, Self::Apriori, Self::Gambler];

    pub fn name(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::Auto => "auto",
            Self::Apriori => "apriori",
            Self::Gambler => "gambler",
        }
    }
}

impl FromStr for Characterization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown characterization {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Everything `estimate_all` needs. Keys of [`RunConfig::set`] double as
/// CLI flags and config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub alpha: SequenceSpec,
    /// Explicit oracle; `zeros` when neither this nor `beta_shift` is set.
    pub beta: Option<SequenceSpec>,
    /// Oracle `β` with `β[i+c] = α[i]`.
    pub beta_shift: Option<usize>,
    pub beta_pad: u8,
    /// Prefix length in bits; defaults to the file length for file inputs.
    pub n: Option<usize>,
    pub k_list: Vec<usize>,
    /// Horizon in blocks, capped per block size at `n/k`.
    pub n_max: Option<usize>,
    pub burn_in: Option<usize>,
    pub mode: BlockMode,
    pub characterizations: BTreeSet<Characterization>,
    pub gambler_specs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl RunConfig {
    pub fn new(alpha: SequenceSpec) -> Self {
        Self {
            alpha,
            beta: None,
            beta_shift: None,
            beta_pad: 0,
            n: None,
            k_list: vec![1, 2, 4],
            n_max: None,
            burn_in: None,
            mode: BlockMode::Aligned,
            characterizations: Characterization::ALL.into_iter().collect(),
            gambler_specs: Vec::new(),
            output: None,
            format: ReportFormat::Json,
        }
    }

    /// Sets one key: `alpha`, `beta`, `beta-shift`, `beta-pad`, `n`, `k`,
    /// `n-max`, `burn-in`, `mode`, `characterizations`, `gambler`, `out`,
    /// `format`. List values are comma-separated.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let num = |v: &str| -> Result<usize> {
            v.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "{key}: expected a non-negative integer, found {v:?}"
                ))
            })
        };
        match key {
            "alpha" => self.alpha = SequenceSpec::parse(value)?,
            "beta" => self.beta = Some(SequenceSpec::parse(value)?),
            "beta-shift" => self.beta_shift = Some(num(value)?),
            "beta-pad" => {
                self.beta_pad = match value {
                    "0" => 0,
                    "1" => 1,
                    _ => {
                        return Err(Error::Config(format!(
                            "beta-pad must be 0 or 1, found {value:?}"
                        )))
                    }
                }
            }
            "n" => self.n = Some(num(value)?),
            "k" => self.k_list = split_list(value).map(num).collect::<Result<_>>()?,
            "n-max" => self.n_max = Some(num(value)?),
            "burn-in" => self.burn_in = Some(num(value)?),
            "mode" => {
                self.mode = value
                    .parse()
                    .map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "characterizations" => {
                self.characterizations = split_list(value).map(str::parse).collect::<Result<_>>()?
            }
            "gambler" => self
                .gambler_specs
                .extend(split_list(value).map(PathBuf::from)),
            "out" => self.output = Some(value.into()),
            "format" => self.format = value.parse()?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses flat `key = value` lines; `#` starts a comment. `alpha` is
    /// required.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg: Option<Self> = None;
        let mut rest = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "alpha" {
                cfg = Some(Self::new(SequenceSpec::parse(v)?));
            } else {
                rest.push((k.to_string(), v.to_string()));
            }
        }
        let mut cfg = cfg.ok_or_else(|| Error::Config("missing alpha".into()))?;
        for (k, v) in rest {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_list.is_empty() {
            return Err(Error::Config("k list is empty".into()));
        }
        if let Some(&k) = self.k_list.iter().find(|&&k| k == 0 || k > MAX_BLOCK) {
            return Err(Error::Config(format!(
                "block size {k} outside 1..={MAX_BLOCK}"
            )));
        }
        if self.beta.is_some() && self.beta_shift.is_some() {
            return Err(Error::Config(
                "give either beta or beta-shift, not both".into(),
            ));
        }
        if self.characterizations.is_empty() {
            return Err(Error::Config("no characterizations selected".into()));
        }
        if self.n_max == Some(0) {
            return Err(Error::Config("n-max must be positive".into()));
        }
        self.alpha.validate()?;
        if let Some(b) = &self.beta {
            b.validate()?;
        }
        Ok(())
    }

    fn k_max(&self) -> usize {
        self.k_list.iter().copied().max().unwrap_or(1)
    }

    /// `(burn_in, n_max)` in blocks for block size `k` on an `n`-bit prefix.
    pub fn window(&self, k: usize, n: usize) -> Result<(usize, usize)> {
        let n_max = self.n_max.map_or(n / k, |m| m.min(n / k));
        let burn_in = self.burn_in.unwrap_or_else(|| default_burn_in(n_max));
        if n_max == 0 || burn_in >= n_max {
            return Err(Error::Config(format!(
                "k = {k}: burn-in {burn_in} must be below the horizon of {n_max} blocks"
            )));
        }
        Ok((burn_in, n_max))
    }
}

/// Inputs materialized from a config; both strings may run past `n`.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub alpha: BitString,
    pub beta: BitString,
    pub n: usize,
}

/// Generates `α` and `β` with `extra` bits of slack beyond `n` where the
/// source allows it.
pub fn load_inputs(cfg: &RunConfig, extra: usize) -> Result<Inputs> {
    let (alpha, n) = match &cfg.alpha {
        SequenceSpec::File { path } => {
            let all = read_bits(path)?;
            let n = cfg.n.unwrap_or(all.len());
            if all.len() < n {
                return Err(Error::InsufficientLength {
                    needed: n,
                    available: all.len(),
                });
            }
            (all.prefix((n + extra).min(all.len())), n)
        }
        spec => {
            let n = cfg
                .n
                .ok_or_else(|| Error::Config("n is required for generated sequences".into()))?;
            (generate(spec, n + extra)?, n)
        }
    };
    let beta = match (&cfg.beta, cfg.beta_shift) {
        (_, Some(c)) => shift_oracle(&alpha, c, cfg.beta_pad),
        (Some(SequenceSpec::File { path }), None) => {
            let all = read_bits(path)?;
            all.prefix((n + extra).min(all.len()))
        }
        (Some(spec), None) => generate(spec, n + extra)?,
        (None, None) => BitString::zeros(n + extra),
    };
    if beta.len() < n {
        return Err(Error::InsufficientLength {
            needed: n,
            available: beta.len(),
        });
    }
    Ok(Inputs { alpha, beta, n })
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn ser_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// One gambler's growth exponents and the dimension-side values `1 - ·`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GamblerSide {
    #[serde(serialize_with = "ser_real")]
    pub limsup_est: f64,
    #[serde(serialize_with = "ser_real")]
    pub liminf_est: f64,
    /// `1 - limsup_est`, clamped to `[0, 1]`.
    pub dim_side: f64,
    /// `1 - liminf_est`, clamped to `[0, 1]`.
    #[serde(rename = "Dim_side")]
    pub strong_dim_side: f64,
    #[serde(serialize_with = "ser_real")]
    pub dim_side_raw: f64,
    #[serde(rename = "Dim_side_raw", serialize_with = "ser_real")]
    pub strong_dim_side_raw: f64,
    /// Set when either raw value fell outside `[0, 1]`.
    pub clamped: bool,
    pub burn_in: usize,
    pub n_max: usize,
}

impl GamblerSide {
    fn new(limsup_est: f64, liminf_est: f64, burn_in: usize, n_max: usize) -> Self {
        let (lo, hi) = (1.0 - limsup_est, 1.0 - liminf_est);
        let clamp = |x: f64| if x.is_nan() { 1.0 } else { x.clamp(0.0, 1.0) };
        Self {
            limsup_est,
            liminf_est,
            dim_side: clamp(lo),
            strong_dim_side: clamp(hi),
            dim_side_raw: lo,
            strong_dim_side_raw: hi,
            clamped: clamp(lo) != lo || clamp(hi) != hi,
            burn_in,
            n_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuppliedGambler {
    pub path: String,
    pub lookahead: usize,
    /// Rounds played; `burn_in` and `n_max` of `result` count rounds.
    pub rounds: usize,
    pub result: GamblerSide,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GamblerReport {
    /// Gamblers bridged from the empirical block process, per block size;
    /// windows count blocks and exponents are taken at block boundaries.
    pub bridged: BTreeMap<usize, GamblerSide>,
    pub supplied: Vec<SuppliedGambler>,
    /// Infimum of the clamped dimension-side values over all gamblers.
    pub dim_est: f64,
    #[serde(rename = "Dim_est")]
    pub strong_dim_est: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spread {
    pub dim: f64,
    #[serde(rename = "Dim")]
    pub strong_dim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<DimEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auto: Option<DimEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apriori: Option<DimEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gambler: Option<GamblerReport>,
    /// Per block size: max minus min over the characterizations present.
    pub spread: BTreeMap<usize, Spread>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub k: usize,
    /// `dim` (window minimum) or `Dim` (window maximum).
    pub style: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// `lhs <= rhs + slack`.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub config: RunConfig,
    pub estimates: Estimates,
    pub cross_checks: Vec<CrossCheck>,
    pub version: String,
}

impl DimensionReport {
    pub fn all_hold(&self) -> bool {
        self.cross_checks.iter().all(|c| c.holds)
    }
}

fn sweep_all(
    ks: &[usize],
    windows: &BTreeMap<usize, (usize, usize)>,
    f: impl Fn(usize, usize, usize) -> Result<PerK> + Sync,
) -> Result<DimEstimate> {
    use rayon::prelude::*;
    let per_k = ks
        .par_iter()
        .map(|&k| {
            let (burn_in, n_max) = windows[&k];
            Ok((k, f(k, n_max, burn_in)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DimEstimate::from_per_k(per_k))
}

fn bridged_side(
    inputs: &Inputs,
    k: usize,
    burn_in: usize,
    n_max: usize,
) -> Result<Option<GamblerSide>> {
    let available = inputs.beta.len().saturating_sub(k) / k;
    if available < n_max {
        return Ok(None);
    }
    let log_cap = bridged_gambler_log_capital(&inputs.alpha, &inputs.beta, k, n_max)?;
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for blocks in burn_in..=n_max {
        let t = k * blocks;
        let v = log_cap[t] / t as f64;
        hi = hi.max(v);
        lo = lo.min(v);
    }
    Ok(Some(GamblerSide::new(hi, lo, burn_in, n_max)))
}

fn supplied_side(inputs: &Inputs, path: &PathBuf) -> Result<SuppliedGambler> {
    let g: GamblerSpec = match read_automaton(path)? {
        Automaton::Gambler(g) => g,
        other => {
            return Err(Error::Config(format!(
                "{} holds a {}, not a gambler",
                path.display(),
                other.kind()
            )))
        }
    };
    let c = g.lookahead();
    let rounds = inputs.n.min(inputs.beta.len().saturating_sub(c));
    let burn_in = default_burn_in(rounds);
    if rounds < 2 {
        return Err(Error::InsufficientLength {
            needed: c + 2,
            available: inputs.beta.len(),
        });
    }
    let traj = run_gambler(&g, &inputs.alpha, &inputs.beta, rounds)?;
    let e = exponent_estimates(&traj, burn_in)?;
    Ok(SuppliedGambler {
        path: path.display().to_string(),
        lookahead: c,
        rounds,
        result: GamblerSide::new(e.limsup_est, e.liminf_est, e.burn_in.max(1), rounds),
    })
}

/// Runs the requested characterizations.
pub fn estimate_all(cfg: &RunConfig) -> Result<DimensionReport> {
    cfg.validate()?;
    let extra = cfg.k_max() + 64;
    let inputs = load_inputs(cfg, extra)?;
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let windows = ks
        .iter()
        .map(|&k| Ok((k, cfg.window(k, inputs.n)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let (a, b) = (&inputs.alpha, &inputs.beta);
    let want = |c| cfg.characterizations.contains(&c);

    let entropy = want(Characterization::Entropy)
        .then(|| {
            sweep_all(&ks, &windows, |k, n, w| {
                entropy_sweep(a, b, k, n, w, cfg.mode)
            })
        })
        .transpose()?;
    let auto = want(Characterization::Auto)
        .then(|| sweep_all(&ks, &windows, |k, n, w| auto_sweep(a, b, k, n, w)))
        .transpose()?;
    let apriori = want(Characterization::Apriori)
        .then(|| sweep_all(&ks, &windows, |k, n, w| apriori_sweep(a, b, k, n, w)))
        .transpose()?;
    let gambler = if want(Characterization::Gambler) {
        let mut bridged = BTreeMap::new();
        for &k in &ks {
            let (burn_in, n_max) = windows[&k];
            if let Some(side) = bridged_side(&inputs, k, burn_in, n_max)? {
                bridged.insert(k, side);
            }
        }
        let supplied = cfg
            .gambler_specs
            .iter()
            .map(|p| supplied_side(&inputs, p))
            .collect::<Result<Vec<_>>>()?;
        let sides = bridged.values().chain(supplied.iter().map(|s| &s.result));
        let (dim_est, strong_dim_est) = sides.fold((f64::INFINITY, f64::INFINITY), |(d, s), g| {
            (d.min(g.dim_side), s.min(g.strong_dim_side))
        });
        Some(GamblerReport {
            bridged,
            supplied,
            dim_est,
            strong_dim_est,
            note: "gamblers shown are a finite subset; their dimension-side values bound the characterization from above"
                .into(),
        })
    } else {
        None
    };

    let mut spread = BTreeMap::new();
    for &k in &ks {
        let mut vals: Vec<(f64, f64)> = [&entropy, &auto, &apriori]
            .into_iter()
            .flatten()
            .filter_map(|e| e.per_k.get(&k).map(|p| (p.inf, p.sup)))
            .collect();
        if let Some(side) = gambler.as_ref().and_then(|g| g.bridged.get(&k)) {
            vals.push((side.dim_side, side.strong_dim_side));
        }
        if vals.len() >= 2 {
            let range = |f: fn(&(f64, f64)) -> f64| {
                let it = vals.iter().map(f);
                it.clone().fold(f64::NEG_INFINITY, f64::max) - it.fold(f64::INFINITY, f64::min)
            };
            spread.insert(
                k,
                Spread {
                    dim: range(|v| v.0),
                    strong_dim: range(|v| v.1),
                },
            );
        }
    }

    let estimates = Estimates {
        entropy,
        auto,
        apriori,
        gambler,
        spread,
    };
    let mut report = DimensionReport {
        config: cfg.clone(),
        estimates,
        cross_checks: Vec::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    report.cross_checks = cross_check(&report);
    Ok(report)
}

/// Per-k inequalities between the characterizations present, each as
/// `lhs <= rhs + slack`:
///
/// - entropy ≤ auto + log₂(k)/k
/// - auto ≤ entropy + 1/k
/// - apriori ≤ auto + 1/k
/// - apriori ≤ bridged gambler (unclamped dimension side)
/// - entropy ≤ apriori
///
/// Each also carries [`FLOAT_SLACK`]. Checks involving the entropy need
/// aligned blocks and are skipped in sliding mode.
pub fn cross_check(report: &DimensionReport) -> Vec<CrossCheck> {
    let est = &report.estimates;
    let aligned = report.config.mode == BlockMode::Aligned;
    let per_k =
        |e: &Option<DimEstimate>, k: usize| e.as_ref().and_then(|e| e.per_k.get(&k).copied());
    let mut ks: Vec<usize> = report.config.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut out = Vec::new();
    for k in ks {
        let kf = k as f64;
        let entropy = per_k(&est.entropy, k).filter(|_| aligned);
        let auto = per_k(&est.auto, k);
        let apriori = per_k(&est.apriori, k);
        let gambler = est
            .gambler
            .as_ref()
            .and_then(|g| g.bridged.get(&k))
            .map(|s| PerK {
                inf: s.dim_side_raw,
                sup: s.strong_dim_side_raw,
                burn_in: s.burn_in,
                n_max: s.n_max,
            });
        let rules: [(&str, Option<PerK>, Option<PerK>, f64); 5] = [
            ("entropy <= auto + log2(k)/k", entropy, auto, kf.log2() / kf),
            ("auto <= entropy + 1/k", auto, entropy, 1.0 / kf),
            ("apriori <= auto + 1/k", apriori, auto, 1.0 / kf),
            ("apriori <= gambler", apriori, gambler, 0.0),
            ("entropy <= apriori", entropy, apriori, 0.0),
        ];
        for (name, lhs, rhs, slack) in rules {
            let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
                continue;
            };
            let slack = slack + FLOAT_SLACK;
            for (style, l, r) in [("dim", lhs.inf, rhs.inf), ("Dim", lhs.sup, rhs.sup)] {
                out.push(CrossCheck {
                    name: name.to_string(),
                    k,
                    style: style.to_string(),
                    lhs: l,
                    rhs: r,
                    slack,
                    holds: l <= r + slack,
                });
            }
        }
    }
    out
}

fn round_value(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{x:.11e}").parse().expect("round trip");
            let r = if r == 0.0 { 0.0 } else { r };
            *v = serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Canonical JSON: sorted keys, floats at 12 significant digits, non-finite
/// values as strings.
pub fn to_json(report: &DimensionReport) -> String {
    let mut v = serde_json::to_value(report).expect("report serializes");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn csv_num(x: f64) -> String {
    if x.is_finite() {
        let r: f64 = format!("{x:.11e}").parse().expect("round trip");
        format!("{}", if r == 0.0 { 0.0 } else { r })
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// One row per (characterization, k); supplied gamblers use their path as
/// the characterization and leave `k` empty.
pub fn to_csv(report: &DimensionReport) -> String {
    let mut out = String::from("characterization,k,dim,Dim,burn_in,n_max\n");
    let est = &report.estimates;
    for (name, e) in [
        ("entropy", &est.entropy),
        ("auto", &est.auto),
        ("apriori", &est.apriori),
    ] {
        if let Some(e) = e {
            for (k, p) in &e.per_k {
                let _ = writeln!(
                    out,
                    "{name},{k},{},{},{},{}",
                    csv_num(p.inf),
                    csv_num(p.sup),
                    p.burn_in,
                    p.n_max
                );
            }
        }
    }
    if let Some(g) = &est.gambler {
        for (k, s) in &g.bridged {
            let _ = writeln!(
                out,
                "gambler,{k},{},{},{},{}",
                csv_num(s.dim_side),
                csv_num(s.strong_dim_side),
                s.burn_in,
                s.n_max
            );
        }
        for s in &g.supplied {
            let path = s.path.replace(['"', ','], "_");
            let r = &s.result;
            let _ = writeln!(
                out,
                "gambler:{path},,{},{},{},{}",
                csv_num(r.dim_side),
                csv_num(r.strong_dim_side),
                r.burn_in,
                r.n_max
            );
        }
    }
    out
}

pub fn render(report: &DimensionReport) -> String {
    match report.config.format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Csv => to_csv(report),
    }
}
