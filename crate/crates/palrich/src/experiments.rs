//! Monte Carlo harness and exact small-scale oracles.
//!
//! Trial `t` of an experiment derives its word from `Seed::new(master, t)`,
//! so trials are order-independent; per-trial measurements are integers and
//! aggregation runs in trial order over exact integer sums, which makes
//! results bit-identical under any worker count.
//!
//! The exact oracles enumerate — all k^n words, or all palindromes of one
//! length combined with the avoidance DP — and return exact rationals. They
//! are the ground truth the statistical machinery is checked against.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::analytic;
use crate::avoidance;
use crate::eertree::Eertree;
use crate::error::{Error, Result};
use crate::squares;
use crate::word::Word;
use crate::wordgen::{self, Seed};

const ENUM_BUDGET_ENV: &str = "PALRICH_ENUM_BUDGET";
/// Default cap on k^n for full enumeration.
pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

const SIM_BUDGET_ENV: &str = "PALRICH_SIM_BUDGET";
/// Default cap on n·trials for Monte Carlo runs.
pub const DEFAULT_SIM_BUDGET: u128 = 20_000_000_000;

/// What each trial measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Total distinct palindromic factors per word.
    Richness,
    /// Richness plus per-length distinct counts.
    RichnessHistogram,
    /// Distinct squares (capped scan).
    Squares,
}

/// One Monte Carlo run over iid random words.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n: usize,
    pub trials: u64,
    pub master_seed: u64,
    /// Worker threads; `None` uses the process-global pool. The choice never
    /// affects results.
    pub jobs: Option<usize>,
    pub mode: Mode,
    /// Half-length cap for squares mode; `None` applies
    /// [`squares::default_cap`].
    pub square_cap: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(k: usize, n: usize, trials: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            k,
            n,
            trials,
            master_seed,
            jobs: None,
            mode: Mode::Richness,
            square_cap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub mean: f64,
    /// Unbiased sample standard deviation; 0 for a single trial.
    pub stddev: f64,
    pub ratio_to_sqrt_n: f64,
    /// Mean distinct count per palindrome length (histogram mode only).
    pub per_length: Option<BTreeMap<usize, f64>>,
    pub trials_completed: u64,
    pub wall_time: Duration,
}

fn sim_budget() -> u128 {
    std::env::var(SIM_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SIM_BUDGET)
}

fn enum_budget() -> u128 {
    std::env::var(ENUM_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}

fn richness_trial(k: usize, n: usize, seed: Seed) -> (u64, Option<Vec<u64>>) {
    let mut src = wordgen::symbols(k, seed).expect("k validated");
    let mut tree = Eertree::new(k).expect("k validated");
    for _ in 0..n {
        tree.push(src.next_symbol()).expect("generated symbol in range");
    }
    (tree.richness(), None)
}

fn histogram_trial(k: usize, n: usize, seed: Seed) -> (u64, Option<Vec<u64>>) {
    let mut src = wordgen::symbols(k, seed).expect("k validated");
    let mut tree = Eertree::new(k).expect("k validated");
    for _ in 0..n {
        tree.push(src.next_symbol()).expect("generated symbol in range");
    }
    let mut counts = Vec::new();
    tree.accumulate_length_counts(&mut counts);
    (tree.richness(), Some(counts))
}

fn squares_trial(k: usize, n: usize, cap: usize, seed: Seed) -> (u64, Option<Vec<u64>>) {
    let word = wordgen::random_word(k, n, seed).expect("k validated");
    let capped = squares::distinct_squares_capped(&word, cap);
    (capped.profile.total, None)
}

/// Runs the configured trials and aggregates. Identical configs produce
/// identical results regardless of `jobs`.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    if config.n == 0 {
        return Err(Error::invalid("word length must be at least 1"));
    }
    if config.k < 2 {
        return Err(Error::AlphabetTooSmall {
            min: 2,
            got: config.k,
        });
    }
    let cost = config.n as u128 * config.trials as u128;
    let budget = sim_budget();
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: "Monte Carlo symbols (n·trials)",
            requested: cost,
            limit: budget,
            env_var: SIM_BUDGET_ENV,
        });
    }

    let start = Instant::now();
    let k = config.k;
    let n = config.n;
    let master = config.master_seed;
    let mode = config.mode;
    let cap = config
        .square_cap
        .unwrap_or_else(|| squares::default_cap(k, n));

    let trial = move |t: u64| -> (u64, Option<Vec<u64>>) {
        let seed = Seed::new(master, t);
        match mode {
            Mode::Richness => richness_trial(k, n, seed),
            Mode::RichnessHistogram => histogram_trial(k, n, seed),
            Mode::Squares => squares_trial(k, n, cap, seed),
        }
    };

    // Indexed parallel map keeps trial order in the collected vector, so the
    // sequential aggregation below never sees scheduling effects.
    let outcomes: Vec<(u64, Option<Vec<u64>>)> = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| (0..config.trials).into_par_iter().map(trial).collect()),
        None => (0..config.trials).into_par_iter().map(trial).collect(),
    };

    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    let mut length_sums: Vec<u64> = Vec::new();
    for (value, counts) in &outcomes {
        sum += *value as u128;
        sum_sq += (*value as u128) * (*value as u128);
        if let Some(counts) = counts {
            if length_sums.len() < counts.len() {
                length_sums.resize(counts.len(), 0);
            }
            for (slot, &c) in length_sums.iter_mut().zip(counts.iter()) {
                *slot += c;
            }
        }
    }

    let trials = config.trials;
    let mean = sum as f64 / trials as f64;
    let stddev = if trials > 1 {
        let numerator = trials as u128 * sum_sq - sum * sum;
        (numerator as f64 / (trials as f64 * (trials - 1) as f64)).sqrt()
    } else {
        0.0
    };
    let per_length = matches!(mode, Mode::RichnessHistogram).then(|| {
        length_sums
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(m, &s)| (m, s as f64 / trials as f64))
            .collect()
    });

    Ok(ExperimentResult {
        mean,
        stddev,
        ratio_to_sqrt_n: mean / (n as f64).sqrt(),
        per_length,
        trials_completed: trials,
        wall_time: start.elapsed(),
    })
}

/// Iterates all k^n words in lexicographic order.
fn for_each_word(k: usize, n: usize, mut visit: impl FnMut(&[u8])) {
    let mut digits = vec![0u8; n];
    loop {
        visit(&digits);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if digits[pos] as usize + 1 < k {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
        }
        if n == 0 {
            return;
        }
    }
}

fn check_enum_budget(k: usize, n: usize) -> Result<()> {
    let budget = enum_budget();
    let words = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if words > budget {
        return Err(Error::BudgetExceeded {
            what: "full word enumeration (k^n)",
            requested: words,
            limit: budget,
            env_var: ENUM_BUDGET_ENV,
        });
    }
    Ok(())
}

/// Exact expected richness `E(n, k)` by full enumeration: the average
/// eertree richness over all k^n words, as an exact rational.
pub fn exact_expectation(k: usize, n: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    check_enum_budget(k, n)?;
    let mut sum: u128 = 0;
    for_each_word(k, n, |digits| {
        let mut tree = Eertree::new(k).expect("k validated");
        for &s in digits {
            tree.push(s).expect("digit in range");
        }
        sum += tree.richness() as u128;
    });
    Ok(BigRational::new(
        BigInt::from(sum),
        BigInt::from(k).pow(n as u32),
    ))
}

/// Exact per-length expectations `E(n, k, m)` for all m at once, by full
/// enumeration of words and eertree histograms.
pub fn exact_expectation_by_length(k: usize, n: usize) -> Result<BTreeMap<usize, BigRational>> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    check_enum_budget(k, n)?;
    let mut sums: Vec<u64> = Vec::new();
    for_each_word(k, n, |digits| {
        let mut tree = Eertree::new(k).expect("k validated");
        for &s in digits {
            tree.push(s).expect("digit in range");
        }
        tree.accumulate_length_counts(&mut sums);
    });
    let denom = BigInt::from(k).pow(n as u32);
    Ok(sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(m, &s)| (m, BigRational::new(BigInt::from(s), denom.clone())))
        .collect())
}

/// Iterates all k^⌈m/2⌉ palindromes of length m.
fn for_each_palindrome(k: usize, m: usize, mut visit: impl FnMut(&[u8])) {
    let half = m.div_ceil(2);
    let mut buf = vec![0u8; m];
    for_each_word(k, half, |prefix| {
        buf[..half].copy_from_slice(prefix);
        for i in half..m {
            buf[i] = buf[m - 1 - i];
        }
        visit(&buf);
    });
}

/// Exact `E(n, k, m)` through the avoidance identity: the sum over all
/// palindromes `w` of length `m` of `1 - A_w(n)/k^n`. A second, structurally
/// different oracle for the per-length expectation.
pub fn exact_length_expectation(k: usize, n: usize, m: usize) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    if m == 0 {
        return Err(Error::invalid("palindrome length must be at least 1"));
    }
    if m > n {
        return Ok(BigRational::zero());
    }
    let budget = enum_budget();
    let pal_count = (k as u128)
        .checked_pow(m.div_ceil(2) as u32)
        .unwrap_or(u128::MAX);
    if pal_count > budget {
        return Err(Error::BudgetExceeded {
            what: "palindrome enumeration (k^⌈m/2⌉)",
            requested: pal_count,
            limit: budget,
            env_var: ENUM_BUDGET_ENV,
        });
    }
    let denom = BigInt::from(k).pow(n as u32);
    let mut total = BigRational::zero();
    let mut failed: Option<Error> = None;
    for_each_palindrome(k, m, |symbols| {
        if failed.is_some() {
            return;
        }
        let word = Word::new(symbols.to_vec(), k).expect("palindrome symbols in range");
        match avoidance::avoidance_count_exact(&word, k, n) {
            Ok(counts) => {
                let avoiding = BigInt::from_biguint(num_bigint::Sign::Plus, counts[n].clone());
                total += BigRational::new(&denom - avoiding, denom.clone());
            }
            Err(e) => failed = Some(e),
        }
    });
    match failed {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// One desk-scale measurement row: an oscillation-phase-targeted length,
/// its Monte Carlo richness ratio, and the analytic prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub k: usize,
    pub scale: u32,
    pub epsilon_target: f64,
    /// `round(k^(2i + 1 + 2ε))`.
    pub n: u64,
    pub epsilon_achieved: f64,
    pub predicted_ratio: f64,
    pub measured_ratio: f64,
    pub relative_error: f64,
    pub mean: f64,
    pub stddev: f64,
    pub trials: u64,
}

/// Builds the length targeting `epsilon_target` at scale `i`, measures the
/// mean richness over `trials` random words, and compares against the
/// analytic ratio at the achieved length.
pub fn table1_desk(
    k: usize,
    epsilon_target: f64,
    scale: u32,
    trials: u64,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<Table1Row> {
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    let exponent = 2.0 * scale as f64 + 1.0 + 2.0 * epsilon_target;
    let n = (k as f64).powf(exponent).round();
    if !(n >= 2.0 && n <= 4e18) {
        return Err(Error::invalid(format!(
            "scale {scale} with ε = {epsilon_target} gives unusable n = {n}"
        )));
    }
    let n = n as u64;
    let mut config = ExperimentConfig::new(k, n as usize, trials, master_seed);
    config.jobs = jobs;
    let result = run(&config)?;
    let predicted = analytic::predicted_ratio(n as f64, k)?;
    Ok(Table1Row {
        k,
        scale,
        epsilon_target,
        n,
        epsilon_achieved: analytic::epsilon(n as f64, k)?,
        predicted_ratio: predicted,
        measured_ratio: result.ratio_to_sqrt_n,
        relative_error: (result.ratio_to_sqrt_n - predicted).abs() / predicted,
        mean: result.mean,
        stddev: result.stddev,
        trials,
    })
}

/// Outcome of sampling border lengths of random palindromes.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderLengthReport {
    pub m: usize,
    pub samples: u64,
    /// Borders at least this long count as violations: `⌊log_k m⌋`.
    pub threshold: usize,
    pub violating_fraction: f64,
    /// The union bound `(2k/(k-1))·k^(-⌊(log_k m)/2⌋)`.
    pub union_bound: f64,
}

/// Samples random palindromes of length `m` and reports how often the
/// longest proper border reaches `⌊log_k m⌋`.
pub fn border_length_experiment(
    k: usize,
    m: usize,
    samples: u64,
    master_seed: u64,
) -> Result<BorderLengthReport> {
    if m < 4 {
        return Err(Error::invalid("border sampling needs m >= 4"));
    }
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let log_km = (m as f64).ln() / (k as f64).ln();
    let threshold = log_km.floor() as usize;
    let c = (log_km / 2.0).floor() as i32;
    let union_bound = (2.0 * k as f64 / (k as f64 - 1.0)) * (k as f64).powi(-c);

    let mut violating = 0u64;
    for t in 0..samples {
        let pal = wordgen::random_palindrome(k, m, Seed::new(master_seed, t))?;
        let borders = avoidance::border_array(&pal)?.border_lengths();
        let longest_proper = borders.get(1).copied().unwrap_or(0);
        if longest_proper >= threshold {
            violating += 1;
        }
    }
    Ok(BorderLengthReport {
        m,
        samples,
        threshold,
        violating_fraction: violating as f64 / samples as f64,
        union_bound: union_bound.min(1.0),
    })
}

/// One length of the squares scaling sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaresScalingRow {
    pub n: usize,
    pub cap: usize,
    pub mean: f64,
    pub stddev: f64,
    pub ratio_to_sqrt_n: f64,
    pub miss_probability_bound: f64,
}

/// Mean distinct squares per √n across a list of lengths; the capped scan's
/// omission bound is reported alongside each row.
pub fn squares_scaling(
    k: usize,
    n_list: &[usize],
    trials: u64,
    cap_override: Option<usize>,
    master_seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<SquaresScalingRow>> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cap = cap_override.unwrap_or_else(|| squares::default_cap(k, n));
        let mut config = ExperimentConfig::new(k, n, trials, master_seed);
        config.mode = Mode::Squares;
        config.square_cap = Some(cap);
        config.jobs = jobs;
        let result = run(&config)?;
        rows.push(SquaresScalingRow {
            n,
            cap,
            mean: result.mean,
            stddev: result.stddev,
            ratio_to_sqrt_n: result.ratio_to_sqrt_n,
            miss_probability_bound: squares::miss_probability_bound(k, n, cap),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn run_is_deterministic_and_parallelism_free() {
        let mut config = ExperimentConfig::new(2, 500, 40, 123);
        config.mode = Mode::RichnessHistogram;
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stddev.to_bits(), b.stddev.to_bits());
        assert_eq!(a.per_length, b.per_length);

        config.jobs = Some(2);
        let c = run(&config).unwrap();
        assert_eq!(a.mean.to_bits(), c.mean.to_bits());
        assert_eq!(a.stddev.to_bits(), c.stddev.to_bits());
        assert_eq!(a.per_length, c.per_length);
    }

    #[test]
    fn run_validates_config() {
        assert!(run(&ExperimentConfig::new(2, 0, 5, 1)).is_err());
        assert!(run(&ExperimentConfig::new(2, 5, 0, 1)).is_err());
        assert!(run(&ExperimentConfig::new(1, 5, 5, 1)).is_err());
        assert!(matches!(
            run(&ExperimentConfig::new(2, usize::MAX / 2, 1_000_000, 1)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn single_trial_has_zero_stddev() {
        let result = run(&ExperimentConfig::new(2, 100, 1, 7)).unwrap();
        assert_eq!(result.stddev, 0.0);
        assert_eq!(result.trials_completed, 1);
    }

    #[test]
    fn exact_expectation_tiny_cases() {
        // both length-1 words have richness 1
        assert_eq!(
            exact_expectation(2, 1).unwrap(),
            BigRational::new(1.into(), 1.into())
        );
        // every length-2 binary word has richness 2: 00 and 11 contribute a
        // letter and a square, 01 and 10 contribute both letters
        assert_eq!(
            exact_expectation(2, 2).unwrap(),
            BigRational::new(2.into(), 1.into())
        );
        // at length 3 every binary word still has richness 3
        assert_eq!(
            exact_expectation(2, 3).unwrap(),
            BigRational::new(3.into(), 1.into())
        );
    }

    #[test]
    fn monte_carlo_agrees_with_exact_small_n() {
        let n = 8;
        let exact = exact_expectation(2, n).unwrap().to_f64().unwrap();
        let mc = run(&ExperimentConfig::new(2, n, 20_000, 99)).unwrap();
        let stderr = mc.stddev / (20_000f64).sqrt();
        assert!(
            (mc.mean - exact).abs() < 4.0 * stderr,
            "mc {} vs exact {exact} (stderr {stderr})",
            mc.mean
        );
    }

    #[test]
    fn length_expectation_oracles_agree_exactly() {
        let (k, n) = (2, 6);
        let by_length = exact_expectation_by_length(k, n).unwrap();
        for m in 1..=4 {
            let via_avoidance = exact_length_expectation(k, n, m).unwrap();
            let via_enumeration = by_length.get(&m).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(via_avoidance, via_enumeration, "m = {m}");
        }
    }

    #[test]
    fn length_expectation_beyond_n_is_zero() {
        assert_eq!(exact_length_expectation(2, 4, 5).unwrap(), BigRational::zero());
    }

    #[test]
    fn border_experiment_bound_holds() {
        let report = border_length_experiment(2, 1000, 2_000, 5).unwrap();
        assert_eq!(report.threshold, 9);
        assert!((report.union_bound - 0.25).abs() < 1e-12);
        assert!(report.violating_fraction <= report.union_bound);
    }

    #[test]
    fn table1_smoke() {
        let row = table1_desk(2, 0.398, 5, 300, 42, None).unwrap();
        assert_eq!(row.n, 3556); // round(2^(11.796))
        assert!(row.relative_error < 0.15, "error {}", row.relative_error);
    }
}
