//! Words over small integer alphabets.
//!
//! A [`Word`] is a sequence of symbol ids, each `< alphabet_size`. Symbol ids
//! are `u8`, which caps alphabets at 256 letters; everything in this crate
//! works over small fixed alphabets, so that is plenty.

use crate::error::{Error, Result};

/// A finite word over the alphabet `{0, 1, ..., alphabet_size - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet_size: usize,
}

impl Word {
    /// Builds a word, checking that every symbol is within the alphabet.
    pub fn new(symbols: Vec<u8>, alphabet_size: usize) -> Result<Self> {
        if alphabet_size == 0 || alphabet_size > 256 {
            return Err(Error::AlphabetTooSmall {
                min: 1,
                got: alphabet_size,
            });
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= alphabet_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet_size,
            });
        }
        Ok(Word {
            symbols,
            alphabet_size,
        })
    }

    /// Parses a text word using `alphabet` as the symbol table: the id of a
    /// character is its index in `alphabet`. Reports the first character not
    /// present in the alphabet, with its 0-based position.
    pub fn from_text(text: &str, alphabet: &str) -> Result<Self> {
        let table: Vec<char> = alphabet.chars().collect();
        if table.len() < 1 || table.len() > 256 {
            return Err(Error::AlphabetTooSmall {
                min: 1,
                got: table.len(),
            });
        }
        let mut symbols = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match table.iter().position(|&a| a == ch) {
                Some(id) => symbols.push(id as u8),
                None => return Err(Error::UnknownCharacter { ch, position }),
            }
        }
        Ok(Word {
            symbols,
            alphabet_size: table.len(),
        })
    }

    /// Renders the word back to text through an alphabet table.
    pub fn to_text(&self, alphabet: &str) -> String {
        let table: Vec<char> = alphabet.chars().collect();
        self.symbols
            .iter()
            .map(|&s| table.get(s as usize).copied().unwrap_or('?'))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn is_palindrome(&self) -> bool {
        let s = &self.symbols;
        (0..s.len() / 2).all(|i| s[i] == s[s.len() - 1 - i])
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word {
            symbols,
            alphabet_size: self.alphabet_size,
        }
    }
}
