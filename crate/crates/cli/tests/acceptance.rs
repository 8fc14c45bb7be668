//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the verdict lines are always printed.
//! Exits non-zero if any criterion fails, except those listed in
//! `KNOWN_RED`, whose failure is expected and documented in the README.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    biased_bits, brute_ksd, random_gambler, random_process, random_split, random_validated_mode,
    simulate_accounts,
};
use fsdim::apriori::{
    check_superadditivity_ka, gambler_to_measure, process_prob, process_to_gambler,
    KaSuperadditivity,
};
use fsdim::autocomplexity::{
    build_code_family, check_superadditivity_ksd, compile_block_mode, huffman_code,
    induced_block_mode, ksd, validate_mode, CodeFamily, ConditionMap, KsdSuperadditivity,
    PrefixCode,
};
use fsdim::bitseq::{generate, SequenceSpec, SplitMix64};
use fsdim::blockstat::{
    check_doubling, dim_estimate_entropy_for, mixture_bound_check, BlockMode, DimEstimate,
};
use fsdim::checks::{calibration_violation, random_block_mode, random_mode};
use fsdim::gambler::{combine_accounts, run_gambler, DEFAULT_STATE_CAP};
use fsdim::ratio::{self, rat, Rational};
use fsdim::report::{estimate_all, Characterization, DimensionReport, RunConfig};
use fsdim::BitString;
use num_traits::{One, Zero};

/// Criteria allowed to fail; see the README for the analysis.
const KNOWN_RED: &[u32] = &[10, 11];

/// Entropy thresholds for criterion 3, fixed beforehand by
/// `crates/core/tests/oracle/champernowne_entropy.py 1048576 4 262144 16384`.
const CHAMPERNOWNE_THRESHOLDS: [(usize, f64); 3] = [(1, 0.992775), (2, 0.993168), (4, 0.988640)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{}; {:.2?}", o.detail, elapsed);
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail = format!("{} exceeds {limit:?}", o.detail);
        }
    }
    o
}

fn per_k_values(report: &DimensionReport, k: usize) -> Vec<(&'static str, f64, f64)> {
    let est = &report.estimates;
    let mut out = Vec::new();
    for (name, e) in [
        ("entropy", &est.entropy),
        ("auto", &est.auto),
        ("apriori", &est.apriori),
    ] {
        if let Some(p) = e.as_ref().and_then(|e: &DimEstimate| e.per_k.get(&k)) {
            out.push((name, p.inf, p.sup));
        }
    }
    if let Some(g) = est.gambler.as_ref().and_then(|g| g.bridged.get(&k)) {
        out.push(("gambler", g.dim_side, g.strong_dim_side));
    }
    out
}

fn self_condition() -> Outcome {
    let mut cfg = RunConfig::new(SequenceSpec::Champernowne);
    cfg.beta = Some(SequenceSpec::Champernowne);
    cfg.n = Some(1 << 14);
    cfg.k_list = vec![1, 2, 4, 8];
    let report = estimate_all(&cfg).unwrap();
    let mut worst = String::new();
    let mut pass = true;
    for &k in &cfg.k_list {
        let vals = per_k_values(&report, k);
        pass &= vals.len() == 4;
        for (name, lo, hi) in vals {
            let bound = 1.0 / k as f64 + 0.02;
            if lo > bound || hi > bound {
                pass = false;
                worst += &format!(" {name}@k={k}={hi:.4}");
            }
            if name == "entropy" && (lo != 0.0 || hi != 0.0) {
                pass = false;
                worst += &format!(" entropy@k={k} nonzero");
            }
        }
    }
    let auto8 = report.estimates.auto.as_ref().unwrap().per_k[&8].sup;
    outcome(
        pass,
        format!("entropy = 0 for all k, auto k=8 sup = {auto8:.4}{worst}"),
    )
}

fn shift_example() -> Outcome {
    let mut cfg = RunConfig::new(SequenceSpec::Bernoulli {
        p_num: 1,
        p_den: 2,
        seed: 1,
    });
    cfg.n = Some(1 << 14);
    cfg.beta_shift = Some(1);
    cfg.k_list = vec![4, 8];
    cfg.characterizations = [Characterization::Entropy, Characterization::Gambler]
        .into_iter()
        .collect();
    cfg.gambler_specs = vec![fixture("lookahead.gambler")];
    let report = estimate_all(&cfg).unwrap();
    let supplied = &report.estimates.gambler.as_ref().unwrap().supplied[0];
    let r = &supplied.result;
    let exact = r.dim_side_raw == 0.0 && r.limsup_est == 1.0 && r.liminf_est == 1.0;
    let entropy = report.estimates.entropy.as_ref().unwrap();
    let mut pass = exact && supplied.rounds == 1 << 14;
    let mut detail = format!("1 - limsup = {}, liminf = {}", r.dim_side_raw, r.liminf_est);
    for k in [4, 8] {
        let sup = entropy.per_k[&k].sup;
        pass &= sup <= 1.0 / k as f64 + 0.01;
        detail += &format!(", entropy k={k} sup = {sup:.4}");
    }
    outcome(pass, detail)
}

fn champernowne_normality() -> Outcome {
    let alpha = generate(&SequenceSpec::Champernowne, 1 << 20).unwrap();
    let beta = BitString::zeros(1 << 20);
    let est = dim_estimate_entropy_for(
        &alpha,
        &beta,
        &[1, 2, 4],
        1 << 18,
        16384,
        BlockMode::Aligned,
    )
    .unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for (k, t) in CHAMPERNOWNE_THRESHOLDS {
        let v = est.per_k[&k].inf;
        pass &= v >= t;
        detail.push(format!("k={k}: {v:.6} >= {t}"));
    }
    outcome(pass, detail.join(", "))
}

/// Conditional entropy from aligned pair counts.
fn entropy_oracle(alpha: &BitString, beta: &BitString, k: usize, n: usize) -> f64 {
    let mut joint = std::collections::HashMap::<(u64, u64), u64>::new();
    let mut cond = std::collections::HashMap::<u64, u64>::new();
    for i in 0..n {
        let (a, b) = (alpha.code_at(i * k, k), beta.code_at(i * k, k));
        *joint.entry((a, b)).or_default() += 1;
        *cond.entry(b).or_default() += 1;
    }
    joint
        .iter()
        .map(|(&(_, b), &c)| c as f64 / n as f64 * (cond[&b] as f64 / c as f64).log2())
        .sum()
}

fn random_pair(rng: &mut SplitMix64, len: usize) -> (BitString, BitString) {
    let (pa, pb) = (1 + rng.below(7), 1 + rng.below(7));
    (biased_bits(rng, len, pa, 8), biased_bits(rng, len, pb, 8))
}

fn doubling() -> Outcome {
    let mut rng = SplitMix64::new(4);
    let mut fails = 0;
    let mut oracle_gap: f64 = 0.0;
    for _ in 0..200 {
        let k = [1, 2, 4][rng.below(3) as usize];
        let n = [4, 16, 64][rng.below(3) as usize];
        let (a, b) = random_pair(&mut rng, 2 * k * n);
        let r = check_doubling(&a, &b, k, n).unwrap();
        let lhs = entropy_oracle(&a, &b, 2 * k, n) / (2 * k) as f64;
        let rhs = entropy_oracle(&a, &b, k, 2 * n) / k as f64;
        oracle_gap = oracle_gap.max((lhs - r.lhs).abs()).max((rhs - r.rhs).abs());
        fails += usize::from(!(r.holds && lhs <= rhs + 1e-12));
    }
    outcome(
        fails == 0 && oracle_gap < 1e-9,
        format!(
            "{fails} violations in 200 cases, max deviation from count oracle {oracle_gap:.1e}"
        ),
    )
}

fn mixture() -> Outcome {
    let mut rng = SplitMix64::new(5);
    let mut fails = 0;
    for _ in 0..100 {
        let k = [2, 4, 8][rng.below(3) as usize];
        let n = 1 + rng.below(64) as usize;
        let (a, b) = random_pair(&mut rng, k * n + k);
        let r = mixture_bound_check(&a, &b, k, n).unwrap();
        let lower = r.avg_offsets <= r.h_sliding + 1e-12;
        let upper = r.h_sliding <= r.avg_offsets + (k as f64).log2() + 1e-12;
        fails += usize::from(!(r.holds && lower && upper));
    }
    outcome(fails == 0, format!("{fails} violations in 100 cases"))
}

fn superadditivity() -> Outcome {
    let mut rng = SplitMix64::new(6);
    let mut ksd_fail = 0;
    for _ in 0..10 {
        let d = random_mode(&mut rng, 6, 8).unwrap();
        let splits: Vec<_> = (0..50).map(|_| random_split(&mut rng, 5)).collect();
        if let KsdSuperadditivity::Counterexample { .. } =
            check_superadditivity_ksd(&d, &splits).unwrap()
        {
            ksd_fail += 1;
        }
    }
    let mut ka_fail = 0;
    for _ in 0..50 {
        let m = random_process(&mut rng, 3);
        let splits: Vec<_> = (0..10).map(|_| random_split(&mut rng, 6)).collect();
        if let KaSuperadditivity::Counterexample { .. } =
            check_superadditivity_ka(&m, &splits).unwrap()
        {
            ka_fail += 1;
        }
    }
    // Spot-check the shortest-path solver against path enumeration.
    let mut solver_mismatch = 0;
    for _ in 0..10 {
        let (d, _) = random_validated_mode(&mut rng, 4, 6);
        for _ in 0..5 {
            let len = rng.below(5) as usize;
            let (a, b) = (rng.bits(len), rng.bits(len));
            let fast = ksd(&d, &a, &b).unwrap().filter(|&m| m <= 8);
            solver_mismatch += usize::from(fast != brute_ksd(&d, &a, &b, 8));
        }
    }
    outcome(
        ksd_fail + ka_fail + solver_mismatch == 0,
        format!(
            "ksd: 500 splits over 10 modes, {ksd_fail} counterexamples; KA: 500 splits over 50 processes, {ka_fail} counterexamples; solver mismatches {solver_mismatch}"
        ),
    )
}

fn calibration() -> Outcome {
    let mut modes = Vec::new();
    let one_bit = CodeFamily::new(vec![
        PrefixCode::new(1, vec!["0".parse().unwrap(), "1".parse().unwrap()]).unwrap(),
        PrefixCode::new(1, vec!["1".parse().unwrap(), "0".parse().unwrap()]).unwrap(),
    ])
    .unwrap();
    for assignment in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        modes.push(
            compile_block_mode(
                1,
                &one_bit,
                &ConditionMap::new(1, assignment.to_vec()).unwrap(),
            )
            .unwrap(),
        );
    }
    let mut rng = SplitMix64::new(7);
    for _ in 0..12 {
        modes.push(random_block_mode(&mut rng, 2).unwrap());
    }
    for k in [1, 2] {
        for _ in 0..4 {
            let (a, b) = random_pair(&mut rng, 256);
            modes.push(induced_block_mode(&a, &b, k, 256 / k).unwrap());
        }
    }
    let mut violations = Vec::new();
    let mut max_c = 0;
    for d in &modes {
        max_c = max_c.max(validate_mode(d, 6, 8).unwrap());
        if let Some(v) = calibration_violation(d, 6, 8).unwrap() {
            violations.push(v);
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} compiled modes, |B| <= 6, m <= 8, max c_obs = {max_c}, {} violations",
            modes.len(),
            violations.len()
        ),
    )
}

fn shannon(dist: &[Rational]) -> f64 {
    dist.iter()
        .filter(|p| !p.is_zero())
        .map(|p| -ratio::to_f64(p) * ratio::to_f64(p).log2())
        .sum()
}

fn code_family_bound() -> Outcome {
    let mut rng = SplitMix64::new(8);
    let mut worst_gap = f64::NEG_INFINITY;
    let mut depth_ok = true;
    for k in [2, 3] {
        let dists: Vec<Vec<Rational>> = (0..50)
            .map(|_| {
                let w: Vec<i64> = (0..1 << k).map(|_| rng.below(10) as i64).collect();
                let total: i64 = w.iter().sum::<i64>().max(1);
                let mut d: Vec<Rational> = w.iter().map(|&x| rat(x, total)).collect();
                if w.iter().all(|&x| x == 0) {
                    d[0] = Rational::one();
                }
                d
            })
            .collect();
        let family = build_code_family(&dists).unwrap();
        for d in &dists {
            let (_, len) = family.best_for(d);
            worst_gap = worst_gap.max(ratio::to_f64(&len) - shannon(d) - 1.0);
            depth_ok &= huffman_code(d).unwrap().max_len() < 1 << k;
        }
    }
    outcome(
        worst_gap <= 1e-9 && depth_ok,
        format!("max (length - H - 1) = {worst_gap:.4}, Huffman depth bound holds: {depth_ok}"),
    )
}

fn bridge_exactness() -> Outcome {
    let mut rng = SplitMix64::new(9);
    let mut fails = 0;
    for _ in 0..100 {
        let m = random_process(&mut rng, 3);
        let c = rng.below(3) as usize;
        let n = rng.below(13) as usize;
        let (a, b) = (rng.bits(n), rng.bits(n + c));
        let g = process_to_gambler(&m, c).unwrap();
        let capital = run_gambler(&g, &a, &b, n).unwrap().values[n].clone();
        let p = process_prob(&m, m.start(), &a, &b.slice(c..c + n)).unwrap();
        let total: Rational = gambler_to_measure(&g, &b).unwrap().values().sum();
        fails += usize::from(capital != p * ratio::pow2(n) || !total.is_one());
    }
    outcome(fails == 0, format!("{fails} mismatches in 100 exact cases"))
}

fn combiner() -> Outcome {
    let mut rng = SplitMix64::new(10);
    let (mut mismatches, mut bound_fails, mut ceil_fails) = (0, 0, 0);
    for _ in 0..50 {
        let l = 1 + rng.below(3) as usize;
        let period = 1 + rng.below(3) as usize;
        let n = 1 + rng.below(12) as usize;
        let c = rng.below(2) as usize;
        let gamblers: Vec<_> = (0..l)
            .map(|_| {
                let s = 1 + rng.below(3) as usize;
                random_gambler(&mut rng, s, c)
            })
            .collect();
        let (a, b) = (rng.bits(n), rng.bits(n + c));
        let combined = combine_accounts(&gamblers, period, DEFAULT_STATE_CAP).unwrap();
        let got = run_gambler(&combined, &a, &b, n).unwrap().values;
        mismatches += usize::from(got != simulate_accounts(&gamblers, period, &a, &b, n));
        let best = gamblers
            .iter()
            .map(|g| run_gambler(g, &a, &b, n).unwrap().final_log2())
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = best - (n as f64 / period as f64) * (l as f64).log2();
        let log_m = ratio::log2(&got[n]);
        if log_m < bound - 1e-9 {
            bound_fails += 1;
            println!("     literal bound fails: N = {n}, T = {period}, l = {l}, log M = {log_m:.4} < {bound:.4}");
        }
        let periods = n.div_ceil(period) as f64;
        ceil_fails += usize::from(log_m < best - periods * (l as f64).log2() - 1e-9);
    }
    // Exactness and the per-started-period bound are theorems; only the
    // literal N/T form may fail, and only when T does not divide N.
    assert_eq!(
        mismatches + ceil_fails,
        0,
        "combiner mismatch or ceil(N/T) bound violated"
    );
    outcome(
        bound_fails == 0,
        format!(
            "{mismatches} mismatches with the account simulation; (N/T) bound violated in {bound_fails} of 50 cases, ceil(N/T) bound in {ceil_fails}"
        ),
    )
}

fn agreement() -> Outcome {
    let mut rng = SplitMix64::new(11);
    let mut configs = Vec::new();
    for _ in 0..20 {
        let mut cfg = RunConfig::new(SequenceSpec::Bernoulli {
            p_num: 1 + rng.below(7),
            p_den: 8,
            seed: rng.next_u64(),
        });
        cfg.beta = Some(SequenceSpec::Bernoulli {
            p_num: 1 + rng.below(7),
            p_den: 8,
            seed: rng.next_u64(),
        });
        cfg.n = Some(1 << 14);
        cfg.k_list = vec![2, 4];
        configs.push(cfg);
    }
    let mut cfg = RunConfig::new(SequenceSpec::Champernowne);
    cfg.n = Some(1 << 20);
    cfg.n_max = Some(1 << 18);
    cfg.burn_in = Some(16384);
    cfg.k_list = vec![2, 4];
    configs.push(cfg);

    let (mut checks, mut check_fails, mut spread_fails) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for cfg in &configs {
        let report = estimate_all(cfg).unwrap();
        checks += report.cross_checks.len();
        check_fails += report.cross_checks.iter().filter(|c| !c.holds).count();
        let s = &report.estimates.spread[&4];
        worst = worst.max(s.dim).max(s.strong_dim);
        spread_fails += usize::from(s.dim > 0.15 || s.strong_dim > 0.15);
        assert_eq!(per_k_values(&report, 4).len(), 4);
    }
    // The cross-checks are exact finite-horizon theorems; a violation is a bug
    // and is never tolerated, unlike the agreement tolerance.
    assert_eq!(check_fails, 0, "cross-check violated");
    outcome(
        spread_fails == 0,
        format!(
            "{checks} cross-checks over {} pairs, {check_fails} violated; k=4 spread > 0.15 on {spread_fails} pairs (max {worst:.4})",
            configs.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("alpha.txt");
    let config = dir.path().join("run.cfg");
    let bin = env!("CARGO_BIN_EXE_fsdim");
    let gen = Command::new(bin)
        .args(["gen", "--kind", "bernoulli:1/3:21", "--n", "8192", "--out"])
        .arg(&seq)
        .status()
        .unwrap();
    std::fs::write(
        &config,
        format!(
            "alpha = {}\nbeta-shift = 2\nk = 1,2,4\nformat = json\n",
            seq.display()
        ),
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let _ = std::fs::remove_file(&out);
        let status = Command::new(bin)
            .args(["estimate", "--config"])
            .arg(&config)
            .arg("--gambler")
            .arg(fixture("lookahead.gambler"))
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        outputs.push((status.success(), std::fs::read(&out).unwrap_or_default()));
    }
    let same = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
    outcome(
        gen.success() && outputs.iter().all(|o| o.0) && same,
        format!(
            "two estimate runs, {} bytes each, identical: {same}",
            outputs[0].1.len()
        ),
    )
}

fn main() {
    type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (
            1,
            "self-condition gives zero dimension",
            Some(5),
            self_condition,
        ),
        (
            2,
            "shift oracle: look-ahead gambler wins every round",
            Some(5),
            shift_example,
        ),
        (
            3,
            "Champernowne entropy thresholds",
            Some(60),
            champernowne_normality,
        ),
        (4, "doubling inequality", Some(10), doubling),
        (5, "mixture sandwich", None, mixture),
        (6, "superadditivity of ksd and KA", None, superadditivity),
        (7, "calibration of compiled block modes", None, calibration),
        (8, "code-family length bound", None, code_family_bound),
        (
            9,
            "process/gambler bridge exactness",
            None,
            bridge_exactness,
        ),
        (10, "account-redistribution combiner", None, combiner),
        (11, "cross-characterization agreement", None, agreement),
        (12, "byte-identical reports", None, determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        let o = timed(limit.map(Duration::from_secs), run);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_RED.contains(&id) {
            " [known]"
        } else {
            ""
        };
        println!("{verdict} {id:>2} {name}: {}{note}", o.detail);
        if !o.pass && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
