//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use sentlang::lexicon::shipped_data_dir;
use sentlang::tokenizer::SegmentTree;
use sentlang::{LanguageId, LexiconSet};

pub const LANGUAGES: [&str; 4] = ["fr", "en", "es", "de"];

pub fn languages() -> Vec<LanguageId> {
    LANGUAGES.iter().map(|c| c.parse().unwrap()).collect()
}

pub fn shipped() -> LexiconSet {
    LexiconSet::load_shipped(&languages()).unwrap()
}

/// Straight reading of the raw data files, kept apart from the library's
/// loader: lists are scanned linearly and letters compared after
/// `to_lowercase`.
pub struct NaiveLexicon {
    pub words: Vec<Vec<String>>,
    pub letters: Vec<Vec<char>>,
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

impl NaiveLexicon {
    pub fn shipped() -> Self {
        let root = shipped_data_dir();
        let mut words = Vec::new();
        let mut letters = Vec::new();
        for code in LANGUAGES {
            words.push(data_lines(&root.join(code).join("words.txt")));
            let mut alphabet: Vec<char> = Vec::new();
            for line in data_lines(&root.join(code).join("alphabet.txt")) {
                for c in line.to_lowercase().chars() {
                    if !alphabet.contains(&c) {
                        alphabet.push(c);
                    }
                }
            }
            letters.push(alphabet);
        }
        Self { words, letters }
    }

    /// Every letter of every alphabet, any case, as written in the files.
    pub fn all_letters(&self) -> Vec<char> {
        let mut out = Vec::new();
        for code in LANGUAGES {
            for line in data_lines(&shipped_data_dir().join(code).join("alphabet.txt")) {
                out.extend(line.chars());
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn exclusive_owner(&self, c: char) -> Option<usize> {
        let owners: Vec<usize> = (0..self.letters.len())
            .filter(|&i| self.letters[i].contains(&c))
            .collect();
        match owners.as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }

    /// Scores of a sequence of whitespace-free tokens.
    pub fn score(&self, tokens: &[String]) -> Vec<u32> {
        let mut scores = vec![0u32; self.words.len()];
        for token in tokens {
            if token.chars().any(char::is_numeric) {
                continue;
            }
            let lower = token.to_lowercase();
            let is_word = lower.chars().any(char::is_alphabetic);
            for (i, list) in self.words.iter().enumerate() {
                if is_word && list.iter().any(|w| *w == lower) {
                    scores[i] += 1;
                }
            }
            for (i, score) in scores.iter_mut().enumerate() {
                if lower.chars().any(|c| self.exclusive_owner(c) == Some(i)) {
                    *score += 1;
                }
            }
        }
        scores
    }

    /// A random token: a listed word in some casing, a made-up letter
    /// string, a number, a letter-digit mix or a standalone sign.
    pub fn random_token<R: Rng>(&self, rng: &mut R, letters: &[char]) -> String {
        match rng.gen_range(0..10) {
            0..=4 => {
                let list = self.words.choose(rng).unwrap();
                let word = list.choose(rng).unwrap().clone();
                match rng.gen_range(0..3) {
                    0 => word,
                    1 => {
                        let mut chars = word.chars();
                        let first = chars.next().unwrap();
                        first.to_uppercase().chain(chars).collect()
                    }
                    _ => word.to_uppercase(),
                }
            }
            5..=7 => {
                let len = rng.gen_range(1..=8);
                (0..len)
                    .map(|_| *letters.choose(rng).unwrap())
                    .filter(|c| c.is_alphabetic())
                    .chain(std::iter::once('x'))
                    .collect()
            }
            8 => rng.gen_range(0..100_000u32).to_string(),
            _ => {
                let signs = ["¿", "¡", "a1", "3ñ"];
                signs.choose(rng).unwrap().to_string()
            }
        }
    }
}

/// Checks that the tokens of a tree cover every token character of the
/// sentence exactly once, that each token sits in its node's span and
/// outside its children, and that child spans are disjoint and nested.
pub fn check_coverage(sentence: &str, tree: &SegmentTree) -> Result<(), String> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut owner = vec![0u32; chars.len()];
    check_node(&chars, tree, &mut owner)?;
    for (i, &c) in chars.iter().enumerate() {
        let ok = match owner[i] {
            0 => !is_token_char(c),
            1 => !c.is_whitespace(),
            _ => false,
        };
        if !ok {
            return Err(format!("char {c:?} at {i} covered {} times", owner[i]));
        }
    }
    Ok(())
}

/// Letters, digits and combining marks; a token must hold every one.
pub fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || unicode_normalization::char::is_combining_mark(c)
}

fn check_node(chars: &[char], node: &SegmentTree, owner: &mut [u32]) -> Result<(), String> {
    if node.span.end > chars.len() || node.span.start > node.span.end {
        return Err(format!("span {:?} out of range", node.span));
    }
    for token in &node.own_tokens {
        let end = token.offset + token.char_len();
        if token.offset < node.span.start || end > node.span.end {
            return Err(format!("token {:?} outside node {:?}", token.surface, node.span));
        }
        if node
            .children
            .iter()
            .any(|c| token.offset < c.span.end && c.span.start < end)
        {
            return Err(format!("token {:?} overlaps a child", token.surface));
        }
        let surface: String = chars[token.offset..end].iter().collect();
        if surface != token.surface {
            return Err(format!("token {:?} does not match text {surface:?}", token.surface));
        }
        for slot in &mut owner[token.offset..end] {
            *slot += 1;
        }
    }
    for (i, child) in node.children.iter().enumerate() {
        if !node.span.contains_span(&child.span) {
            return Err(format!("child {:?} escapes {:?}", child.span, node.span));
        }
        if let Some(next) = node.children.get(i + 1) {
            if child.span.end > next.span.start {
                return Err(format!("children {:?} and {:?} overlap", child.span, next.span));
            }
        }
        check_node(chars, child, owner)?;
    }
    Ok(())
}
