//! Deterministic, splittable word generation.
//!
//! Every generator output is a pure function of a [`Seed`]: trial `t` of an
//! experiment uses `Seed::new(master, t)`, so trials can run in any order on
//! any number of workers and still produce identical words.

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::Word;

/// A `(master, stream)` pair identifying one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    /// The RNG for this seed. ChaCha streams are independent, so distinct
    /// `stream` values under one `master` never share state.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// An endless stream of iid uniform symbols over `[0, k)`. This is the
/// single source of randomness for word generation, so streaming consumers
/// (the experiments push symbols straight into an eertree without
/// materializing the word) see exactly the bytes [`random_word`] would
/// produce for the same seed.
pub struct SymbolStream {
    rng: ChaCha8Rng,
    dist: Uniform<u16>,
}

impl SymbolStream {
    #[inline]
    pub fn next_symbol(&mut self) -> u8 {
        self.dist.sample(&mut self.rng) as u8
    }
}

/// The symbol stream for `(k, seed)`.
pub fn symbols(k: usize, seed: Seed) -> Result<SymbolStream> {
    if !(2..=256).contains(&k) {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    Ok(SymbolStream {
        rng: seed.rng(),
        dist: Uniform::new(0u16, k as u16).expect("k >= 2"),
    })
}

/// A uniformly random word: `n` iid symbols over `[0, k)`.
pub fn random_word(k: usize, n: usize, seed: Seed) -> Result<Word> {
    let mut src = symbols(k, seed)?;
    let symbols = (0..n).map(|_| src.next_symbol()).collect();
    Word::new(symbols, k)
}

/// A uniformly random palindrome of length `m`: the first ⌈m/2⌉ symbols are
/// drawn iid and the rest are their mirror image, which is uniform over all
/// k^⌈m/2⌉ palindromes of length m.
pub fn random_palindrome(k: usize, m: usize, seed: Seed) -> Result<Word> {
    if !(2..=256).contains(&k) {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    if m == 0 {
        return Err(Error::invalid("palindrome length must be at least 1"));
    }
    let mut rng = seed.rng();
    let dist = Uniform::new(0u16, k as u16).expect("k >= 2");
    let half = m.div_ceil(2);
    let mut symbols: Vec<u8> = (0..half).map(|_| dist.sample(&mut rng) as u8).collect();
    for i in half..m {
        symbols.push(symbols[m - 1 - i]);
    }
    Word::new(symbols, k)
}

/// A word of length `n` with exactly `l` distinct palindromic factors.
///
/// For `k > 2` the word is a run of the first letter followed by a prefix of
/// the periodic word `(a_1 a_2 ... a_k)^ω`, whose only palindromic factors
/// are single letters; the leading run contributes the remaining `l - k`
/// factors. Valid for `k ≤ l ≤ n`.
///
/// For `k = 2` the base word is `(001101)^ω`, which has exactly 8 palindromic
/// factors, all present in its length-9 prefix; prepending `0^(l-8)` adds the
/// runs `000, ..., 0^(l-6)`. Valid for `8 ≤ l ≤ n` with `n ≥ 9`; `l = n` is
/// the unary word `0^n`.
pub fn rich_construction(k: usize, n: usize, l: usize) -> Result<Word> {
    if !(2..=256).contains(&k) {
        return Err(Error::AlphabetTooSmall { min: 2, got: k });
    }
    if k == 2 {
        if n < 9 || l < 8 || l > n {
            return Err(Error::invalid(format!(
                "for k = 2 the reachable richness range is 8 ..= n with n >= 9; got n = {n}, l = {l}"
            )));
        }
        if l == n {
            return Word::new(vec![0; n], 2);
        }
        const BASE: [u8; 6] = [0, 0, 1, 1, 0, 1];
        let mut symbols = vec![0u8; l - 8];
        symbols.extend((0..n - l + 8).map(|i| BASE[i % 6]));
        return Word::new(symbols, 2);
    }
    if l < k || l > n {
        return Err(Error::invalid(format!(
            "for k = {k} the reachable richness range is {k} ..= n; got n = {n}, l = {l}"
        )));
    }
    let mut symbols = vec![0u8; l - k];
    symbols.extend((0..n - l + k).map(|i| (i % k) as u8));
    Word::new(symbols, k)
}
