//! Counting words that avoid a fixed factor.
//!
//! The exact side builds the failure-function automaton of the forbidden
//! word (states are its proper prefixes, the full match is excluded) and
//! runs a counting DP in arbitrary precision, or the same DP carried in
//! per-step-normalized probabilities. The asymptotic side works through the
//! border polynomial `f_w`: the number of avoiding words grows like
//! `C_w · θ_w^n`, where `θ_w` is the dominant eigenvalue of the automaton's
//! transition-count matrix — equivalently the largest root of
//! `(k - x) · f_w(x) = 1` — and `C_w = 1 / (1 - (k - θ_w)² f'_w(θ_w))`.
//!
//! Border convention: a word is a border of itself, so the border array
//! starts with 1 and `f_w` has degree `m - 1`. Standard failure-function
//! code excludes that trivial border; the conversion happens here, in one
//! place.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::Word;

const AVOID_BUDGET_ENV: &str = "PALRICH_AVOID_BUDGET";
/// Default budget for the exact DP, measured in `n · |w|`.
pub const DEFAULT_AVOID_BUDGET: u128 = 20_000_000;

/// Border array and border polynomial of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderProfile {
    word: Word,
    /// `array[i-1]` is ŵ[i]: 1 iff the word has a border of length `m-i+1`.
    array: Vec<u8>,
}

impl BorderProfile {
    pub fn word(&self) -> &Word {
        &self.word
    }

    /// ŵ[1..m] as 0/1 values.
    pub fn border_array(&self) -> &[u8] {
        &self.array
    }

    /// Border lengths in decreasing order; always starts with `m`.
    pub fn border_lengths(&self) -> Vec<usize> {
        let m = self.array.len();
        self.array
            .iter()
            .enumerate()
            .filter(|(_, &bit)| bit == 1)
            .map(|(idx, _)| m - idx)
            .collect()
    }

    /// Coefficients of `f_w`, low degree first: the coefficient of `x^(m-i)`
    /// is ŵ[i], so `coeffs[d] = ŵ[m-d]`.
    pub fn polynomial_coeffs(&self) -> Vec<u8> {
        let mut coeffs: Vec<u8> = self.array.iter().rev().copied().collect();
        // ŵ[1] = 1 guarantees degree m-1
        debug_assert_eq!(coeffs.last(), Some(&1));
        coeffs.truncate(self.array.len());
        coeffs
    }

    /// `f_w(x)` by Horner's rule.
    pub fn poly_value(&self, x: f64) -> f64 {
        self.array.iter().fold(0.0, |acc, &bit| acc * x + bit as f64)
    }

    /// `f'_w(x)`.
    pub fn poly_derivative(&self, x: f64) -> f64 {
        let m = self.array.len();
        let mut acc = 0.0;
        for (idx, &bit) in self.array.iter().enumerate() {
            let degree = m - 1 - idx;
            if degree > 0 && bit == 1 {
                acc += degree as f64 * x.powi(degree as i32 - 1);
            }
        }
        acc
    }

    /// Exact `f_w(k)`, the border array read as a base-`k` number.
    pub fn poly_value_int(&self, k: usize) -> BigUint {
        let k = BigUint::from(k);
        self.array.iter().fold(BigUint::zero(), |acc, &bit| {
            acc * &k + BigUint::from(bit)
        })
    }
}

/// Longest-proper-border table: `fail[i]` is the length of the longest
/// proper border of the prefix `w[0..=i]`.
fn failure_function(w: &[u8]) -> Vec<usize> {
    let mut fail = vec![0usize; w.len()];
    let mut b = 0;
    for i in 1..w.len() {
        while b > 0 && w[i] != w[b] {
            b = fail[b - 1];
        }
        if w[i] == w[b] {
            b += 1;
        }
        fail[i] = b;
    }
    fail
}

/// Border array ŵ of a non-empty word, under the convention that the word is
/// a border of itself.
pub fn border_array(word: &Word) -> Result<BorderProfile> {
    let m = word.len();
    if m == 0 {
        return Err(Error::invalid("border array of the empty word is undefined"));
    }
    let fail = failure_function(word.symbols());
    let mut array = vec![0u8; m];
    array[0] = 1; // the trivial border w itself
    let mut b = fail[m - 1];
    while b > 0 {
        array[m - b] = 1;
        b = fail[b - 1];
    }
    Ok(BorderProfile {
        word: word.clone(),
        array,
    })
}

/// `f_w(x)` of a border profile — convenience wrapper matching the
/// polynomial-evaluation contract.
pub fn border_poly_value(profile: &BorderProfile, x: f64) -> f64 {
    profile.poly_value(x)
}

/// Transition table of the avoidance automaton: states are proper prefixes
/// of `w` (0..m), `delta[q][c]` is the next state or `None` when the symbol
/// would complete a full match.
fn automaton(word: &Word, k: usize) -> Result<Vec<Vec<Option<usize>>>> {
    let m = word.len();
    let w = word.symbols();
    if m == 0 {
        return Err(Error::invalid("cannot avoid the empty word"));
    }
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    if let Some(&s) = w.iter().find(|&&s| s as usize >= k) {
        return Err(Error::SymbolOutOfRange {
            symbol: s,
            alphabet_size: k,
        });
    }
    let fail = failure_function(w);
    let mut delta = vec![vec![None; k]; m];
    for q in 0..m {
        for c in 0..k {
            let target = if w[q] as usize == c {
                q + 1
            } else if q == 0 {
                0
            } else {
                let mut b = fail[q - 1];
                loop {
                    if w[b] as usize == c {
                        break b + 1;
                    }
                    if b == 0 {
                        break 0;
                    }
                    b = fail[b - 1];
                }
            };
            delta[q][c] = if target == m { None } else { Some(target) };
        }
    }
    Ok(delta)
}

fn avoid_budget() -> u128 {
    std::env::var(AVOID_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_AVOID_BUDGET)
}

/// Exact counts `A_w(0..=n)` of `k`-ary words avoiding `word`.
pub fn avoidance_count_exact(word: &Word, k: usize, n: usize) -> Result<Vec<BigUint>> {
    let budget = avoid_budget();
    let cost = n as u128 * word.len() as u128;
    if cost > budget {
        return Err(Error::BudgetExceeded {
            what: "exact avoidance DP (n·|w|)",
            requested: cost,
            limit: budget,
            env_var: AVOID_BUDGET_ENV,
        });
    }
    let delta = automaton(word, k)?;
    let m = word.len();
    let mut state = vec![BigUint::zero(); m];
    state[0] = BigUint::one();
    let mut counts = Vec::with_capacity(n + 1);
    counts.push(BigUint::one()); // A(0): the empty word avoids everything
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); m];
        for q in 0..m {
            if state[q].is_zero() {
                continue;
            }
            for c in 0..k {
                if let Some(r) = delta[q][c] {
                    next[r] += &state[q];
                }
            }
        }
        state = next;
        counts.push(state.iter().sum());
    }
    Ok(counts)
}

/// Survival probabilities `A_w(i) / k^i` for `i = 0..=n`, carried as a
/// per-step-normalized probability DP: no overflow at any `n` the caller has
/// patience for.
pub fn survival_probability(word: &Word, k: usize, n: usize) -> Result<Vec<f64>> {
    let delta = automaton(word, k)?;
    let m = word.len();
    let inv_k = 1.0 / k as f64;
    let mut state = vec![0.0f64; m];
    state[0] = 1.0;
    let mut probs = Vec::with_capacity(n + 1);
    probs.push(1.0);
    for _ in 0..n {
        let mut next = vec![0.0f64; m];
        for q in 0..m {
            let v = state[q];
            if v == 0.0 {
                continue;
            }
            let share = v * inv_k;
            for c in 0..k {
                if let Some(r) = delta[q][c] {
                    next[r] += share;
                }
            }
        }
        state = next;
        probs.push(state.iter().sum());
    }
    Ok(probs)
}

/// Growth rate of `A_w(n)`, with a flag for the degenerate polynomial-growth
/// regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantRoot {
    pub theta: f64,
    /// `A_w(n)` grows subexponentially (θ is 1 within 1e-9); the asymptotic
    /// coefficient `C_w` is not meaningful in this regime.
    pub subexponential: bool,
    pub power_iterations: usize,
}

pub const POWER_ITERATION_CAP: usize = 1_000_000;
const POWER_ITERATION_TOL: f64 = 1e-12;

/// Dominant eigenvalue of the transition-count matrix of the avoidance
/// automaton: power iteration to relative tolerance 1e-12, refined to the
/// last bit by bisecting the characteristic equation `(k - x) f_w(x) = 1` —
/// the tightest downstream comparisons have error bounds near machine
/// precision.
pub fn dominant_root(word: &Word, k: usize) -> Result<DominantRoot> {
    if word.len() < 2 {
        return Err(Error::invalid(
            "dominant root requires a forbidden word of length at least 2",
        ));
    }
    let delta = automaton(word, k)?;
    let m = word.len();

    let mut x = vec![1.0 / m as f64; m];
    let mut lambda = 0.0f64;
    let mut iterations = POWER_ITERATION_CAP;
    for it in 0..POWER_ITERATION_CAP {
        let mut y = vec![0.0f64; m];
        for q in 0..m {
            let v = x[q];
            if v == 0.0 {
                continue;
            }
            for c in 0..k {
                if let Some(r) = delta[q][c] {
                    y[r] += v;
                }
            }
        }
        let norm: f64 = y.iter().sum();
        if norm == 0.0 {
            return Err(Error::NoConvergence(
                "avoidance automaton has no live transitions".into(),
            ));
        }
        for e in &mut y {
            *e /= norm;
        }
        let converged = it > 0 && (norm - lambda).abs() <= POWER_ITERATION_TOL * norm.max(1.0);
        lambda = norm;
        x = y;
        if converged {
            iterations = it + 1;
            break;
        }
    }

    let profile = border_array(word)?;
    let theta = match largest_char_root(&profile, k) {
        Some(root) => root,
        None => {
            // No root above 1: the degenerate polynomial-growth regime.
            // Certify it algebraically: θ = 1 is a root of the
            // characteristic polynomial iff (k-1)·(number of borders) = 1.
            if (k - 1) * profile.border_lengths().len() == 1 {
                1.0
            } else {
                return Err(Error::NoConvergence(format!(
                    "no dominant root found for k = {k} (power iteration gave {lambda})"
                )));
            }
        }
    };
    Ok(DominantRoot {
        theta,
        subexponential: (theta - 1.0).abs() < 1e-9,
        power_iterations: iterations,
    })
}

/// Largest root of `P(x) = 1 + (x - k) f_w(x)` — the characteristic
/// polynomial of the avoidance automaton — in `(1, k)`, or `None` when there
/// is no sign change (θ = 1, subexponential growth). `P(k) = 1 > 0` and P is
/// negative just below the largest root, so a top-down grid scan brackets it
/// and bisection pins it to a unit in the last place.
fn largest_char_root(profile: &BorderProfile, k: usize) -> Option<f64> {
    let kf = k as f64;
    let p = |x: f64| 1.0 + (x - kf) * profile.poly_value(x);
    const GRID: usize = 512;
    let mut lo = None;
    for j in (1..GRID).rev() {
        let x = 1.0 + (kf - 1.0) * j as f64 / GRID as f64;
        if p(x) < 0.0 {
            lo = Some(x);
            break;
        }
    }
    let mut lo = lo?;
    let mut hi = kf;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// θ and C from Guibas–Odlyzko: θ from the closed-form expansion
/// `k - 1/f_w(k) - f'_w(k)/f_w(k)³` (error `O(m²/k^{3m})`), C evaluated at
/// the exact root `θ_w`, where it is the exact leading coefficient of
/// `A_w(n)`.
pub fn asymptotic_theta_c(profile: &BorderProfile, k: usize) -> Result<(f64, f64)> {
    let m = profile.word().len();
    if m <= 3 {
        return Err(Error::invalid(
            "the asymptotic expansion requires |word| > 3",
        ));
    }
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    let kf = k as f64;
    let fk = profile.poly_value(kf);
    let dfk = profile.poly_derivative(kf);
    let theta_expansion = kf - 1.0 / fk - dfk / (fk * fk * fk);

    // C is evaluated at the exact root θ_w, where the Guibas–Odlyzko formula
    // is the exact leading coefficient of A_w(n). Words longer than 3 always
    // grow exponentially, so the root exists.
    let theta_root = largest_char_root(profile, k).ok_or_else(|| {
        Error::NoConvergence("characteristic polynomial has no root above 1".into())
    })?;
    let c = 1.0 / (1.0 - (kf - theta_root).powi(2) * profile.poly_derivative(theta_root));
    Ok((theta_expansion, c))
}

/// Three-term expansion of `θ` for the unary word `a^m`:
/// `k - (k-1)/k^m - m(k-1)²/k^(2m+1)`, error `O((km + m²)/k^{3m})`.
pub fn theta_unary_expansion(m: usize, k: usize) -> Result<f64> {
    if m <= 3 {
        return Err(Error::invalid("the expansion requires m > 3"));
    }
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    let kf = k as f64;
    Ok(kf - (kf - 1.0) * kf.powi(-(m as i32))
        - m as f64 * (kf - 1.0).powi(2) * kf.powi(-(2 * m as i32 + 1)))
}

/// Expansion of `θ` for border polynomial `x^(m-1) + x^c` — a palindrome
/// whose only non-trivial border has length `c + 1`, the typical shape for
/// random palindromes: `k - 1/k^(m-1) + 1/k^(2m-2-c) - (m-1)/k^(2m-1)`.
pub fn theta_palindrome_expansion(m: usize, c: usize, k: usize) -> Result<f64> {
    if m <= 3 {
        return Err(Error::invalid("the expansion requires m > 3"));
    }
    if k < 2 {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    let log_k_m = (m as f64).ln() / (k as f64).ln();
    if c as f64 > log_k_m.floor() {
        return Err(Error::invalid(format!(
            "border exponent c = {c} exceeds ⌊log_{k} {m}⌋ = {}",
            log_k_m.floor() as usize
        )));
    }
    let kf = k as f64;
    Ok(kf - kf.powi(-(m as i32 - 1)) + kf.powi(-(2 * m as i32 - 2 - c as i32))
        - (m as f64 - 1.0) * kf.powi(-(2 * m as i32 - 1)))
}

/// Checks the ordering implication of Guibas–Odlyzko on computed data:
/// `f_u(k) < f_w(k)` must imply `A_u(i) ≤ A_w(i)` for all `i ≤ n`. Returns
/// true when the implication holds (vacuously true when the premise fails).
pub fn ordering_check(u: &Word, w: &Word, k: usize, n: usize) -> Result<bool> {
    if u.len() != w.len() {
        return Err(Error::invalid("ordering check requires |u| = |w|"));
    }
    let fu = border_array(u)?.poly_value_int(k);
    let fw = border_array(w)?.poly_value_int(k);
    if fu >= fw {
        return Ok(true);
    }
    let au = avoidance_count_exact(u, k, n)?;
    let aw = avoidance_count_exact(w, k, n)?;
    Ok(au.iter().zip(aw.iter()).all(|(a, b)| a <= b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str, alphabet: &str) -> Word {
        Word::from_text(text, alphabet).unwrap()
    }

    #[test]
    fn border_array_of_aabaabaa() {
        let profile = border_array(&word("aabaabaa", "ab")).unwrap();
        assert_eq!(profile.border_array(), &[1, 0, 0, 1, 0, 0, 1, 1]);
        assert_eq!(profile.border_lengths(), vec![8, 5, 2, 1]);
        // f_w(x) = x^7 + x^4 + x + 1, so f_w(2) = 128 + 16 + 2 + 1
        assert_eq!(profile.poly_value(2.0), 147.0);
        assert_eq!(profile.poly_value_int(2), BigUint::from(147u32));
    }

    #[test]
    fn border_array_trivial_cases() {
        assert_eq!(border_array(&word("ab", "ab")).unwrap().border_array(), &[1, 0]);
        assert_eq!(border_array(&word("aa", "ab")).unwrap().border_array(), &[1, 1]);
        assert!(border_array(&Word::new(vec![], 2).unwrap()).is_err());
    }

    #[test]
    fn unary_poly_is_geometric_sum() {
        // f_{a^5}(x) = x^4 + x^3 + x^2 + x + 1; at x = 2 that is 31
        let profile = border_array(&word("aaaaa", "ab")).unwrap();
        assert_eq!(profile.poly_value(2.0), 31.0);
        let profile_aa = border_array(&word("aa", "ab")).unwrap();
        for k in 2..6 {
            assert_eq!(profile_aa.poly_value(k as f64), k as f64 + 1.0);
        }
    }

    #[test]
    fn polynomial_coeffs_low_first() {
        let profile = border_array(&word("aabaabaa", "ab")).unwrap();
        assert_eq!(profile.polynomial_coeffs(), vec![1, 1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn avoid_aa_is_fibonacci() {
        let counts = avoidance_count_exact(&word("aa", "ab"), 2, 4).unwrap();
        let expected: Vec<BigUint> = [1u32, 2, 3, 5, 8].iter().map(|&v| v.into()).collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn avoid_ab_is_linear() {
        let counts = avoidance_count_exact(&word("ab", "ab"), 2, 12).unwrap();
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(c, &BigUint::from(n as u32 + 1));
        }
    }

    #[test]
    fn short_words_avoid_everything() {
        for w in ["aab", "abab", "bb"] {
            let w = word(w, "ab");
            let counts = avoidance_count_exact(&w, 2, w.len() - 1).unwrap();
            for (n, c) in counts.iter().enumerate() {
                assert_eq!(c, &BigUint::from(2u32).pow(n as u32));
            }
        }
    }

    #[test]
    fn survival_matches_exact_small() {
        use num_traits::ToPrimitive;
        let w = word("aa", "ab");
        let probs = survival_probability(&w, 2, 8).unwrap();
        assert_eq!(probs[0], 1.0);
        assert_eq!(probs[2], 0.75);
        let counts = avoidance_count_exact(&w, 2, 8).unwrap();
        for i in 0..=8 {
            let exact = counts[i].to_f64().unwrap() / 2f64.powi(i as i32);
            assert!((probs[i] - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn dominant_root_aa_is_golden_ratio() {
        let root = dominant_root(&word("aa", "ab"), 2).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((root.theta - phi).abs() < 1e-12, "theta = {}", root.theta);
        assert!(!root.subexponential);
    }

    #[test]
    fn dominant_root_ab_is_subexponential() {
        let root = dominant_root(&word("ab", "ab"), 2).unwrap();
        assert!(root.subexponential, "theta = {}", root.theta);
        assert!((root.theta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dominant_root_rejects_single_letter() {
        assert!(dominant_root(&word("a", "ab"), 2).is_err());
    }

    #[test]
    fn expansion_rejects_short_words() {
        let profile = border_array(&word("aba", "ab")).unwrap();
        assert!(asymptotic_theta_c(&profile, 2).is_err());
        assert!(theta_unary_expansion(3, 2).is_err());
        assert!(theta_palindrome_expansion(3, 0, 2).is_err());
    }

    #[test]
    fn unary_expansion_close_to_root() {
        for m in [8usize, 10, 12] {
            let w = Word::new(vec![0; m], 2).unwrap();
            let root = dominant_root(&w, 2).unwrap().theta;
            let expansion = theta_unary_expansion(m, 2).unwrap();
            let bound = 10.0 * (2.0 * m as f64 + (m * m) as f64) * 2f64.powi(-(3 * m as i32));
            assert!(
                (root - expansion).abs() <= bound,
                "m={m}: root={root}, expansion={expansion}, bound={bound}"
            );
        }
    }

    #[test]
    fn unary_expansion_limit_and_monotonicity() {
        let mut prev = 0.0;
        for m in 4..=40 {
            let theta = theta_unary_expansion(m, 2).unwrap();
            assert!(theta > prev, "m={m}");
            prev = theta;
        }
        assert!((theta_unary_expansion(500, 2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn palindrome_expansion_c_zero_matches_direct_formula() {
        let m = 12;
        let k = 2;
        let direct = 2.0 - 2f64.powi(-(m - 1)) + 2f64.powi(-(2 * m - 2)) - (m as f64 - 1.0) * 2f64.powi(-(2 * m - 1));
        assert_eq!(theta_palindrome_expansion(m as usize, 0, k).unwrap(), direct);
        assert!(theta_palindrome_expansion(12, 4, 2).is_err()); // ⌊log2 12⌋ = 3
    }

    #[test]
    fn asymptotic_theta_matches_root_for_a8() {
        let w = word("aaaaaaaa", "ab");
        let profile = border_array(&w).unwrap();
        let (theta_exp, c) = asymptotic_theta_c(&profile, 2).unwrap();
        let root = dominant_root(&w, 2).unwrap().theta;
        let m = 8f64;
        let bound = 10.0 * m * m * 2f64.powi(-24);
        assert!((theta_exp - root).abs() <= bound);
        // C → 1 as m grows: here C = 1 + O(m/k^m)
        assert!((c - 1.0).abs() < 10.0 * m / 2f64.powi(8));
    }

    #[test]
    fn asymptotic_theta_matches_root_for_aabaabaa() {
        let w = word("aabaabaa", "ab");
        let profile = border_array(&w).unwrap();
        let (theta_exp, _) = asymptotic_theta_c(&profile, 2).unwrap();
        let root = dominant_root(&w, 2).unwrap().theta;
        let bound = 10.0 * 64.0 * 2f64.powi(-24);
        assert!((theta_exp - root).abs() <= bound);
    }

    #[test]
    fn ordering_check_examples() {
        let u = word("ab", "ab");
        let w = word("aa", "ab");
        assert!(ordering_check(&u, &w, 2, 10).unwrap());
        assert!(ordering_check(&u, &u, 2, 10).unwrap()); // vacuous
        assert!(ordering_check(&u, &word("aaa", "ab"), 2, 5).is_err());
    }

    #[test]
    fn budget_rejects_oversized_dp() {
        let w = word("aaaa", "ab");
        assert!(matches!(
            avoidance_count_exact(&w, 2, 100_000_000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
