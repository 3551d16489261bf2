//! Brute-force oracles, independent of the library's counting structures.
//!
//! Everything here recomputes from first principles: substring scans, full
//! word enumeration, direct containment checks. Nothing calls into the
//! eertree, the fingerprint scanner, or the avoidance DP.
#![allow(dead_code)] // shared by several test targets, each using a subset

use std::collections::HashSet;

/// Distinct palindromic substrings by scanning all (i, j) windows. O(n³).
pub fn slow_palindrome_set(w: &[u8]) -> HashSet<Vec<u8>> {
    let mut set = HashSet::new();
    for i in 0..w.len() {
        for j in i..w.len() {
            let sub = &w[i..=j];
            if sub.iter().eq(sub.iter().rev()) {
                set.insert(sub.to_vec());
            }
        }
    }
    set
}

/// Distinct palindromic substrings by expanding around every center and
/// recording each palindromic window. Fast for random words; still
/// independent of the eertree.
pub fn expanded_palindrome_set(w: &[u8]) -> HashSet<Vec<u8>> {
    let n = w.len();
    let mut set = HashSet::new();
    for center in 0..n {
        // odd lengths
        let (mut l, mut r) = (center, center);
        loop {
            set.insert(w[l..=r].to_vec());
            if l == 0 || r + 1 == n || w[l - 1] != w[r + 1] {
                break;
            }
            l -= 1;
            r += 1;
        }
        // even lengths
        if center + 1 < n && w[center] == w[center + 1] {
            let (mut l, mut r) = (center, center + 1);
            loop {
                set.insert(w[l..=r].to_vec());
                if l == 0 || r + 1 == n || w[l - 1] != w[r + 1] {
                    break;
                }
                l -= 1;
                r += 1;
            }
        }
    }
    set
}

/// Per-length histogram of a palindrome set.
pub fn histogram_of(set: &HashSet<Vec<u8>>) -> std::collections::BTreeMap<usize, u64> {
    let mut hist = std::collections::BTreeMap::new();
    for p in set {
        *hist.entry(p.len()).or_insert(0u64) += 1;
    }
    hist
}

/// Distinct squares uu by direct half comparison over all windows. O(n³).
pub fn slow_square_set(w: &[u8]) -> HashSet<Vec<u8>> {
    let mut set = HashSet::new();
    for l in 1..=w.len() / 2 {
        for i in 0..=w.len() - 2 * l {
            if w[i..i + l] == w[i + l..i + 2 * l] {
                set.insert(w[i..i + 2 * l].to_vec());
            }
        }
    }
    set
}

/// Visits all k^n words of length n in lexicographic order.
pub fn for_each_word(k: usize, n: usize, mut visit: impl FnMut(&[u8])) {
    let mut digits = vec![0u8; n];
    loop {
        visit(&digits);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if (digits[pos] as usize) + 1 < k {
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

/// Does `text` contain `pattern` as a factor? Naive scan.
pub fn contains_factor(text: &[u8], pattern: &[u8]) -> bool {
    if pattern.is_empty() || pattern.len() > text.len() {
        return pattern.is_empty();
    }
    text.windows(pattern.len()).any(|win| win == pattern)
}

/// A_w(n) by enumerating every k-ary word of length n. Exponential.
pub fn slow_avoid_count(w: &[u8], k: usize, n: usize) -> u64 {
    let mut count = 0u64;
    for_each_word(k, n, |text| {
        if !contains_factor(text, w) {
            count += 1;
        }
    });
    count
}

/// Tiny deterministic generator for test-local randomness (not the library
/// RNG on purpose).
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
