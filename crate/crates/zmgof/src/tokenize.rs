//! Raw text to canonical token sequences: lowercased alphabetic words with
//! internal apostrophes, or per-character Han ideographs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Words,
    HanChars,
}

#[derive(Debug, Clone, Copy)]
pub struct Tokenizer {
    pub mode: Mode,
    /// join letter-flanked hyphens instead of splitting on them
    pub keep_hyphens: bool,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            mode: Mode::Words,
            keep_hyphens: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub mode: Mode,
    pub source_id: String,
}

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];

fn is_han(c: char) -> bool {
    matches!(u32::from(c),
        0x4E00..=0x9FFF      // CJK Unified Ideographs
        | 0x3400..=0x4DBF    // Extension A
        | 0x20000..=0x2A6DF  // Extension B
        | 0x2A700..=0x2EBEF  // Extensions C-F
    )
}

impl Tokenizer {
    pub fn tokenize(&self, raw: &str, source_id: impl Into<String>) -> Result<TokenSequence> {
        let tokens = match self.mode {
            Mode::Words => self.words(raw),
            Mode::HanChars => raw
                .chars()
                .filter(|&c| is_han(c))
                .map(String::from)
                .collect(),
        };
        if tokens.is_empty() {
            return Err(Error::NoAnalyzableContent);
        }
        Ok(TokenSequence {
            tokens,
            mode: self.mode,
            source_id: source_id.into(),
        })
    }

    fn words(&self, raw: &str) -> Vec<String> {
        let chars: Vec<char> = raw.chars().collect();
        let mut tokens = Vec::new();
        let mut current = String::new();
        for i in 0..chars.len() {
            let c = chars[i];
            let flanked = i > 0
                && i + 1 < chars.len()
                && chars[i - 1].is_alphabetic()
                && chars[i + 1].is_alphabetic();
            if c.is_alphabetic() {
                current.extend(c.to_lowercase());
            } else if APOSTROPHES.contains(&c) && flanked {
                current.push('\'');
            } else if self.keep_hyphens && c == '-' && flanked {
                current.push('-');
            } else if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        tokens
    }
}
