//! Online palindromic tree (eertree).
//!
//! One node per distinct non-empty palindromic factor of the processed word,
//! plus two roots of virtual lengths -1 and 0. Extending by one symbol is
//! amortized O(1) link-chasing and creates at most one node, so the running
//! count of distinct palindromic factors (the palindromic richness) is
//! maintained online in linear time.
//!
//! The processed word itself is retained inside the structure: suffix-link
//! chasing needs back-references into the text, so streaming input saves only
//! auxiliary storage, not the word buffer. Node storage is proportional to
//! the number of distinct palindromic factors, not to the word length.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::word::Word;

/// Node index width is a compile-time choice: the default 32-bit indices
/// support words shorter than 2^31 symbols; enable the `idx64` feature for
/// longer inputs.
#[cfg(not(feature = "idx64"))]
pub type NodeIndex = u32;
#[cfg(feature = "idx64")]
pub type NodeIndex = u64;

const NIL: NodeIndex = NodeIndex::MAX;
const ROOT_NEG: NodeIndex = 0; // virtual palindrome of length -1
const ROOT_EMPTY: NodeIndex = 1; // empty palindrome; never counted

/// Outgoing transitions of a node. Direct-address array for alphabets of at
/// most 4 letters (the regime the random-word experiments live in), sorted
/// association list for larger alphabets.
#[derive(Debug, Clone)]
enum Transitions {
    Dense([NodeIndex; 4]),
    Sparse(Vec<(u8, NodeIndex)>),
}

impl Transitions {
    fn new(alphabet_size: usize) -> Self {
        if alphabet_size <= 4 {
            Transitions::Dense([NIL; 4])
        } else {
            Transitions::Sparse(Vec::new())
        }
    }

    #[inline]
    fn get(&self, symbol: u8) -> NodeIndex {
        match self {
            Transitions::Dense(slots) => slots[symbol as usize],
            Transitions::Sparse(list) => match list.binary_search_by_key(&symbol, |e| e.0) {
                Ok(pos) => list[pos].1,
                Err(_) => NIL,
            },
        }
    }

    #[inline]
    fn set(&mut self, symbol: u8, target: NodeIndex) {
        match self {
            Transitions::Dense(slots) => slots[symbol as usize] = target,
            Transitions::Sparse(list) => match list.binary_search_by_key(&symbol, |e| e.0) {
                Ok(pos) => list[pos].1 = target,
                Err(pos) => list.insert(pos, (symbol, target)),
            },
        }
    }
}

#[derive(Debug, Clone)]
struct Node {
    len: i64,
    link: NodeIndex,
    next: Transitions,
}

/// Per-length counts of distinct palindromic factors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RichnessProfile {
    pub total: u64,
    pub by_length: BTreeMap<usize, u64>,
}

/// Online palindromic tree over a fixed alphabet.
///
/// ```
/// use palrich::eertree::Eertree;
///
/// let mut tree = Eertree::new(2).unwrap();
/// let new_per_push: Vec<u32> = [0, 1, 1, 0].iter().map(|&c| tree.push(c).unwrap()).collect();
/// assert_eq!(new_per_push, [1, 1, 1, 1]); // 0; 1; 11; 0110
/// assert_eq!(tree.richness(), 4);
/// ```
#[derive(Debug, Clone)]
pub struct Eertree {
    alphabet_size: usize,
    nodes: Vec<Node>,
    word: Vec<u8>,
    current: NodeIndex,
}

impl Eertree {
    /// Empty tree: two roots, richness 0. `alphabet_size` of 1 is permitted
    /// (degenerate unary words), 0 is rejected.
    pub fn new(alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 || alphabet_size > 256 {
            return Err(Error::AlphabetTooSmall {
                min: 1,
                got: alphabet_size,
            });
        }
        let nodes = vec![
            Node {
                len: -1,
                link: ROOT_NEG,
                next: Transitions::new(alphabet_size),
            },
            Node {
                len: 0,
                link: ROOT_NEG,
                next: Transitions::new(alphabet_size),
            },
        ];
        Ok(Eertree {
            alphabet_size,
            nodes,
            word: Vec::new(),
            current: ROOT_EMPTY,
        })
    }

    /// Builds the tree over a whole word.
    pub fn from_word(word: &Word) -> Result<Self> {
        let mut tree = Eertree::new(word.alphabet_size())?;
        for &symbol in word.symbols() {
            tree.push(symbol)?;
        }
        Ok(tree)
    }

    #[inline]
    fn node(&self, idx: NodeIndex) -> &Node {
        &self.nodes[idx as usize]
    }

    /// Longest palindromic suffix of `word[..=pos]` (starting the search at
    /// node `start`) that can be extended by `symbol` on both sides.
    #[inline]
    fn extendable_suffix(&self, mut start: NodeIndex, symbol: u8, pos: usize) -> NodeIndex {
        loop {
            let node = self.node(start);
            let mirror = pos as i64 - node.len - 1;
            if mirror >= 0 && self.word[mirror as usize] == symbol {
                return start;
            }
            start = node.link;
        }
    }

    /// Extends the processed word by one symbol. Returns the number of new
    /// distinct palindromic factors this creates, which is always 0 or 1;
    /// the cumulative sum of return values is the richness of the processed
    /// word.
    pub fn push(&mut self, symbol: u8) -> Result<u32> {
        if symbol as usize >= self.alphabet_size {
            return Err(Error::SymbolOutOfRange {
                symbol,
                alphabet_size: self.alphabet_size,
            });
        }
        let pos = self.word.len();
        self.word.push(symbol);

        let base = self.extendable_suffix(self.current, symbol, pos);
        let existing = self.node(base).next.get(symbol);
        if existing != NIL {
            self.current = existing;
            return Ok(0);
        }

        let len = self.node(base).len + 2;
        let link = if len == 1 {
            ROOT_EMPTY
        } else {
            let shorter = self.extendable_suffix(self.node(base).link, symbol, pos);
            let target = self.node(shorter).next.get(symbol);
            debug_assert_ne!(target, NIL, "suffix palindrome must already exist");
            target
        };
        let idx = self.nodes.len() as NodeIndex;
        self.nodes.push(Node {
            len,
            link,
            next: Transitions::new(self.alphabet_size),
        });
        self.nodes[base as usize].next.set(symbol, idx);
        self.current = idx;
        Ok(1)
    }

    /// Number of distinct non-empty palindromic factors of the processed word.
    pub fn richness(&self) -> u64 {
        (self.nodes.len() - 2) as u64
    }

    /// Length of the processed word.
    pub fn processed_len(&self) -> usize {
        self.word.len()
    }

    /// The word consumed so far.
    pub fn processed(&self) -> &[u8] {
        &self.word
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Length of the longest palindromic suffix of the processed word.
    pub fn longest_suffix_palindrome_len(&self) -> usize {
        self.node(self.current).len.max(0) as usize
    }

    /// Per-length counts, derived by walking the nodes.
    pub fn histogram(&self) -> RichnessProfile {
        let mut by_length = BTreeMap::new();
        for node in &self.nodes[2..] {
            *by_length.entry(node.len as usize).or_insert(0u64) += 1;
        }
        RichnessProfile {
            total: self.richness(),
            by_length,
        }
    }

    /// Per-length counts accumulated into a dense vector indexed by length
    /// (index 0 unused). Cheaper than [`Self::histogram`] when aggregating
    /// many trials.
    pub fn accumulate_length_counts(&self, counts: &mut Vec<u64>) {
        for node in &self.nodes[2..] {
            let len = node.len as usize;
            if counts.len() <= len {
                counts.resize(len + 1, 0);
            }
            counts[len] += 1;
        }
    }
}

/// Palindromic richness of a word: the number of distinct non-empty
/// palindromic factors.
///
/// ```
/// use palrich::{eertree, Word};
///
/// let w = Word::from_text("001101001", "01").unwrap();
/// assert_eq!(eertree::richness(&w), 8); // 0,1,00,11,010,101,0110,1001
/// ```
pub fn richness(word: &Word) -> u64 {
    Eertree::from_word(word).expect("word symbols are alphabet-checked").richness()
}

/// Distinct palindromic factors of a word, bucketed by length.
pub fn richness_histogram(word: &Word) -> RichnessProfile {
    Eertree::from_word(word)
        .expect("word symbols are alphabet-checked")
        .histogram()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str, alphabet: &str) -> Word {
        Word::from_text(text, alphabet).unwrap()
    }

    #[test]
    fn empty_tree() {
        let tree = Eertree::new(2).unwrap();
        assert_eq!(tree.richness(), 0);
        assert_eq!(tree.histogram(), RichnessProfile::default());
        assert!(Eertree::new(0).is_err());
        // a unary alphabet is degenerate but allowed
        let mut unary = Eertree::new(1).unwrap();
        assert_eq!(unary.push(0).unwrap(), 1);
    }

    #[test]
    fn single_letter() {
        let mut tree = Eertree::new(2).unwrap();
        assert_eq!(tree.push(0).unwrap(), 1);
        assert_eq!(tree.richness(), 1);
    }

    #[test]
    fn push_rejects_out_of_range() {
        let mut tree = Eertree::new(2).unwrap();
        assert_eq!(
            tree.push(2),
            Err(Error::SymbolOutOfRange {
                symbol: 2,
                alphabet_size: 2
            })
        );
    }

    #[test]
    fn unary_pushes_return_one_each() {
        let mut tree = Eertree::new(2).unwrap();
        let increments: Vec<u32> = (0..3).map(|_| tree.push(0).unwrap()).collect();
        assert_eq!(increments, [1, 1, 1]); // 0, 00, 000
    }

    #[test]
    fn alternating_pushes() {
        let mut tree = Eertree::new(2).unwrap();
        let increments: Vec<u32> = [0u8, 1, 0, 1].iter().map(|&c| tree.push(c).unwrap()).collect();
        assert_eq!(increments, [1, 1, 1, 1]); // 0, 1, 010, 101
    }

    #[test]
    fn word_011011_sixth_push_creates_11011() {
        let mut tree = Eertree::new(2).unwrap();
        let increments: Vec<u32> = [0u8, 1, 1, 0, 1, 1]
            .iter()
            .map(|&c| tree.push(c).unwrap())
            .collect();
        // 0; 1; 11; 0110; 101; 11011
        assert_eq!(increments, [1, 1, 1, 1, 1, 1]);
        assert_eq!(tree.richness(), 6);
    }

    #[test]
    fn word_001101001_has_richness_8() {
        // 0,1,00,11,010,101,0110,1001
        assert_eq!(richness(&word("001101001", "01")), 8);
    }

    #[test]
    fn unary_richness_is_length() {
        for n in [1usize, 5, 64] {
            let w = Word::new(vec![0; n], 2).unwrap();
            assert_eq!(richness(&w), n as u64);
        }
    }

    #[test]
    fn aabaabaa_richness_8() {
        // a, b, aa, aba, baab, aabaa, abaaba, aabaabaa
        assert_eq!(richness(&word("aabaabaa", "ab")), 8);
    }

    #[test]
    fn histogram_buckets_by_length() {
        let profile = richness_histogram(&word("001101001", "01"));
        let expected: BTreeMap<usize, u64> = [(1, 2), (2, 2), (3, 2), (4, 2)].into();
        assert_eq!(profile.by_length, expected);
        assert_eq!(profile.total, 8);

        let profile = richness_histogram(&word("000", "01"));
        let expected: BTreeMap<usize, u64> = [(1, 1), (2, 1), (3, 1)].into();
        assert_eq!(profile.by_length, expected);

        assert_eq!(richness_histogram(&word("", "01")), RichnessProfile::default());
    }

    #[test]
    fn histogram_total_consistent() {
        let profile = richness_histogram(&word("aabbabcabc", "abc"));
        assert_eq!(profile.total, profile.by_length.values().sum::<u64>());
    }

    #[test]
    fn sparse_transitions_large_alphabet() {
        let w = Word::new((0..10).chain(0..10).map(|s| s as u8).collect(), 10).unwrap();
        // letters 0..9 plus the factor "9 0"? no palindromes beyond letters:
        // 0123456789 0123456789 has equal letters only at distance 10.
        assert_eq!(richness(&w), 10);
    }
}
