//! Distinct square factors (factors of the form `uu`, `u` non-empty).
//!
//! For each half-length `l` a window slides over the word comparing
//! `w[i..i+l]` against `w[i+l..i+2l]` through two independent rolling
//! fingerprints; every candidate that is not already known is confirmed by
//! direct comparison before it is counted, so fingerprint parameters affect
//! speed only. Distinctness is tracked as a set of confirmed fingerprint
//! pairs keyed by half-length.
//!
//! Exact mode scans all half-lengths up to `n/2` and is O(n²) in the worst
//! case; it is gated by a length limit. Capped mode restricts half-lengths
//! to a cap and reports the probability bound for what a uniformly random
//! word could lose to the cap: long squares need long borders, which random
//! words almost never have.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::word::Word;

/// Default input-length limit for [`distinct_squares_exact`]; override with
/// the `PALRICH_EXACT_SQUARES_LIMIT` environment variable.
pub const DEFAULT_EXACT_LIMIT: usize = 100_000;
const EXACT_LIMIT_ENV: &str = "PALRICH_EXACT_SQUARES_LIMIT";

/// Distinct squares bucketed by half-length `|u|`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquareProfile {
    pub total: u64,
    pub by_half_length: BTreeMap<usize, u64>,
}

/// Output of the capped counter: the counts plus the cap actually applied
/// and an upper bound on the probability that a uniformly random word of
/// this length contains any square the cap hides.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedSquares {
    pub profile: SquareProfile,
    pub cap: usize,
    pub miss_probability_bound: f64,
}

/// The cap used by Monte Carlo runs: `⌈4·log_k n⌉ + 16`. Squares longer than
/// this occur in random words with probability that is negligible at any
/// feasible scale.
pub fn default_cap(k: usize, n: usize) -> usize {
    if n < 2 || k < 2 {
        return 16;
    }
    ((n as f64).ln() / (k as f64).ln() * 4.0).ceil() as usize + 16
}

fn exact_limit() -> usize {
    std::env::var(EXACT_LIMIT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_EXACT_LIMIT)
}

/// Exact count of distinct square factors.
pub fn distinct_squares_exact(word: &Word) -> Result<SquareProfile> {
    let limit = exact_limit();
    if word.len() > limit {
        return Err(Error::BudgetExceeded {
            what: "exact distinct-square scan (use the capped mode for long words)",
            requested: word.len() as u128,
            limit: limit as u128,
            env_var: EXACT_LIMIT_ENV,
        });
    }
    Ok(scan(word.symbols(), word.len() / 2))
}

/// Distinct squares `uu` with `|u| ≤ max_half_length`.
pub fn distinct_squares_capped(word: &Word, max_half_length: usize) -> CappedSquares {
    let cap = max_half_length.min(word.len() / 2);
    CappedSquares {
        profile: scan(word.symbols(), cap),
        cap,
        miss_probability_bound: miss_probability_bound(word.alphabet_size(), word.len(), cap),
    }
}

/// P(some square with |u| > cap occurs in a uniform random word) is at most
/// Σ_{l > cap} (n - 2l + 1) k^{-l}: a square occurrence at a fixed position
/// forces its second half, which has probability k^{-l}.
pub fn miss_probability_bound(k: usize, n: usize, cap: usize) -> f64 {
    let k = k as f64;
    let mut sum = 0.0;
    for l in (cap + 1)..=(n / 2) {
        let term = (n as f64 - 2.0 * l as f64 + 1.0) * k.powi(-(l as i32));
        sum += term;
        if term < 1e-300 {
            break;
        }
    }
    sum.min(1.0)
}

const M61: u64 = (1 << 61) - 1;
const M31: u64 = (1 << 31) - 1;
const B61: u64 = 1_234_567_891_234_567;
const B31: u64 = 48_271;

#[inline]
fn mul61(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let folded = ((t >> 61) as u64) + ((t as u64) & M61);
    if folded >= M61 {
        folded - M61
    } else {
        folded
    }
}

#[inline]
fn add61(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= M61 {
        s - M61
    } else {
        s
    }
}

#[inline]
fn mul31(a: u64, b: u64) -> u64 {
    let t = a * b;
    let folded = (t >> 31) + (t & M31);
    if folded >= M31 {
        folded - M31
    } else {
        folded
    }
}

struct Fingerprints {
    h61: Vec<u64>,
    p61: Vec<u64>,
    h31: Vec<u64>,
    p31: Vec<u64>,
}

impl Fingerprints {
    fn new(w: &[u8]) -> Self {
        let n = w.len();
        let mut h61 = Vec::with_capacity(n + 1);
        let mut p61 = Vec::with_capacity(n + 1);
        let mut h31 = Vec::with_capacity(n + 1);
        let mut p31 = Vec::with_capacity(n + 1);
        h61.push(0);
        p61.push(1);
        h31.push(0);
        p31.push(1);
        for i in 0..n {
            let s = w[i] as u64 + 1;
            h61.push(add61(mul61(h61[i], B61), s));
            p61.push(mul61(p61[i], B61));
            let v = mul31(h31[i], B31) + s;
            h31.push(if v >= M31 { v - M31 } else { v });
            p31.push(mul31(p31[i], B31));
        }
        Fingerprints { h61, p61, h31, p31 }
    }

    /// Fingerprint pair of `w[l..r]`.
    #[inline]
    fn get(&self, l: usize, r: usize) -> (u64, u64) {
        let a = {
            let sub = mul61(self.h61[l], self.p61[r - l]);
            let v = self.h61[r] + M61 - sub;
            if v >= M61 {
                v - M61
            } else {
                v
            }
        };
        let b = {
            let sub = mul31(self.h31[l], self.p31[r - l]);
            let v = self.h31[r] + M31 - sub;
            if v >= M31 {
                v - M31
            } else {
                v
            }
        };
        (a, b)
    }
}

fn scan(w: &[u8], max_half: usize) -> SquareProfile {
    let n = w.len();
    let mut by_half_length = BTreeMap::new();
    if n < 2 || max_half == 0 {
        return SquareProfile::default();
    }
    let fp = Fingerprints::new(w);
    let mut seen: HashSet<(usize, u64, u64)> = HashSet::new();
    let mut total = 0u64;
    for l in 1..=max_half.min(n / 2) {
        let mut count = 0u64;
        for i in 0..=(n - 2 * l) {
            // cheap filters: halves must agree on first and last symbols
            if w[i] != w[i + l] || w[i + l - 1] != w[i + 2 * l - 1] {
                continue;
            }
            let a = fp.get(i, i + l);
            if a != fp.get(i + l, i + 2 * l) {
                continue;
            }
            let key = (l, a.0, a.1);
            if seen.contains(&key) {
                continue;
            }
            // confirm before counting: fingerprints alone never accept
            if w[i..i + l] == w[i + l..i + 2 * l] {
                seen.insert(key);
                count += 1;
            }
        }
        if count > 0 {
            by_half_length.insert(l, count);
            total += count;
        }
    }
    SquareProfile {
        total,
        by_half_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(text: &str) -> SquareProfile {
        distinct_squares_exact(&Word::from_text(text, "01").unwrap()).unwrap()
    }

    #[test]
    fn example_0101_has_one_square() {
        let p = profile("0101");
        assert_eq!(p.total, 1);
        assert_eq!(p.by_half_length, [(2, 1)].into());
    }

    #[test]
    fn smallest_square() {
        assert_eq!(profile("00").total, 1);
        assert_eq!(profile("01").total, 0);
        assert_eq!(profile("").total, 0);
    }

    #[test]
    fn unary_run_counts_each_half_length() {
        let p = profile("000000");
        assert_eq!(p.by_half_length, [(1, 1), (2, 1), (3, 1)].into());
        assert_eq!(p.total, 3);
    }

    #[test]
    fn cap_one_keeps_only_letter_squares() {
        let w = Word::from_text("000000", "01").unwrap();
        let c = distinct_squares_capped(&w, 1);
        assert_eq!(c.profile.total, 1);
        assert_eq!(c.profile.by_half_length, [(1, 1)].into());
        assert!(c.miss_probability_bound > 0.0);
    }

    #[test]
    fn capped_equals_exact_when_cap_not_binding() {
        for text in ["0110110", "010010001", "11111111", "0101101001"] {
            let w = Word::from_text(text, "01").unwrap();
            let exact = distinct_squares_exact(&w).unwrap();
            let capped = distinct_squares_capped(&w, w.len() / 2);
            assert_eq!(capped.profile, exact);
        }
    }

    #[test]
    fn fraenkel_simpson_sanity_cap() {
        for text in ["0000000000", "0101010101", "0110011001"] {
            let w = Word::from_text(text, "01").unwrap();
            let p = distinct_squares_exact(&w).unwrap();
            assert!(p.total <= 2 * w.len() as u64);
        }
    }

    #[test]
    fn exact_limit_enforced() {
        let w = Word::new(vec![0; DEFAULT_EXACT_LIMIT + 1], 2).unwrap();
        assert!(matches!(
            distinct_squares_exact(&w),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn default_cap_formula() {
        // ⌈4·log2(10^6)⌉ + 16 = ⌈79.73⌉ + 16
        assert_eq!(default_cap(2, 1_000_000), 96);
        // ⌈4·log3(10^4)⌉ + 16 = ⌈33.53⌉ + 16
        assert_eq!(default_cap(3, 10_000), 50);
    }
}
