//! Grammatical-word lexicons and alphabets.
//!
//! A [`LexiconSet`] holds, for every configured language, the closed list of
//! its grammatical words and the characters of its alphabet. Characters that
//! belong to exactly one configured alphabet are indexed as exclusive
//! evidence for that language.
//!
//! On disk every language lives in its own directory:
//!
//! ```text
//! <root>/<code>/words.txt      one word per line
//! <root>/<code>/alphabet.txt   one character per line
//! <root>/<code>/abbrev.txt     optional, one abbreviation per line
//! ```
//!
//! Lines starting with `#` and empty lines are ignored. A trailing carriage
//! return is stripped; any other leading or trailing whitespace is rejected.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Languages of the bundled data set, in their conventional order.
pub const DEFAULT_LANGUAGES: [&str; 4] = ["fr", "en", "es", "de"];

/// Maximum number of languages one set can hold (one bit each in a mask).
pub const MAX_LANGUAGES: usize = 64;

/// Directory holding the lexicon data bundled with this crate.
pub fn shipped_data_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
}

/// Case-folds and normalizes a string: NFC, then the simple (one-to-one)
/// lowercase mapping of every character.
///
/// The result is re-composed so that the fold is idempotent.
pub fn canonicalize(s: &str) -> String {
    if s.is_ascii() {
        return s.to_ascii_lowercase();
    }
    let lowered: String = s.nfc().map(simple_lowercase).collect();
    lowered.nfc().collect()
}

/// Canonical form of a single character, if it stays a single character.
pub fn canonical_char(c: char) -> Option<char> {
    let mut buf = [0u8; 4];
    single_canonical_char(c.encode_utf8(&mut buf))
}

fn single_canonical_char(s: &str) -> Option<char> {
    let folded = canonicalize(s);
    let mut chars = folded.chars();
    match (chars.next(), chars.next()) {
        (Some(first), None) => Some(first),
        _ => None,
    }
}

fn simple_lowercase(c: char) -> char {
    // Only U+0130 has a multi-character full lowercase mapping; its simple
    // mapping is the first character of the full one.
    c.to_lowercase().next().unwrap_or(c)
}

/// Identifier of one configured language, e.g. `fr`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageId(String);

impl LanguageId {
    /// Validates a language code: non-empty, ASCII lowercase letters, digits
    /// or `-`.
    pub fn new(code: &str) -> Result<Self> {
        let valid = !code.is_empty()
            && code
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-');
        if valid {
            Ok(Self(code.to_string()))
        } else {
            Err(Error::Config(format!("invalid language code `{code}`")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl Serialize for LanguageId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

/// Parses a comma-separated list of language codes.
pub fn parse_language_list(list: &str) -> Result<Vec<LanguageId>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(LanguageId::new)
        .collect()
}

/// Set of configured languages, one bit per language index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LanguageMask(u64);

impl LanguageMask {
    pub const EMPTY: Self = Self(0);

    pub fn single(index: usize) -> Self {
        Self(1 << index)
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Language indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let index = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(index)
        })
    }
}

impl std::ops::BitOr for LanguageMask {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for LanguageMask {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

/// The closed list of grammatical words of one language, canonicalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammaticalLexicon {
    pub language: LanguageId,
    pub words: BTreeSet<String>,
}

impl GrammaticalLexicon {
    /// Builds a lexicon from raw entries, folding each one.
    ///
    /// Entries must be non-empty and free of whitespace.
    pub fn new<I, S>(language: LanguageId, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for word in words {
            let word = word.as_ref();
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::Config(format!(
                    "invalid {language} lexicon entry {word:?}"
                )));
            }
            set.insert(canonicalize(word));
        }
        Ok(Self {
            language,
            words: set,
        })
    }
}

/// Characters of one language's orthography, canonicalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetProfile {
    pub language: LanguageId,
    pub letters: BTreeSet<char>,
}

impl AlphabetProfile {
    pub fn new<I: IntoIterator<Item = char>>(language: LanguageId, letters: I) -> Self {
        let letters = letters.into_iter().filter_map(canonical_char).collect();
        Self { language, letters }
    }
}

/// Canonical abbreviations whose trailing period does not end a sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Abbreviations(HashSet<String>);

impl Abbreviations {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self(entries.into_iter().map(|s| canonicalize(s.as_ref())).collect())
    }

    /// Case-insensitive membership test.
    pub fn contains(&self, word: &str) -> bool {
        !self.0.is_empty() && self.0.contains(&canonicalize(word))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Lexicons and alphabets of all configured languages.
///
/// Immutable once built; share it freely between threads.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    languages: Vec<LanguageId>,
    lexicons: Vec<GrammaticalLexicon>,
    alphabets: Vec<AlphabetProfile>,
    abbreviations: Abbreviations,
    word_index: HashMap<String, LanguageMask>,
    exclusive_index: HashMap<char, usize>,
    ascii_exclusive: bool,
}

impl PartialEq for LexiconSet {
    fn eq(&self, other: &Self) -> bool {
        // The indices are derived from the other fields.
        self.languages == other.languages
            && self.lexicons == other.lexicons
            && self.alphabets == other.alphabets
            && self.abbreviations == other.abbreviations
    }
}

impl LexiconSet {
    /// Loads `<root>/<code>/{words,alphabet,abbrev}.txt` for every requested
    /// language.
    pub fn load(root: &Path, languages: &[LanguageId]) -> Result<Self> {
        check_languages(languages)?;
        let mut lexicons = Vec::with_capacity(languages.len());
        let mut alphabets = Vec::with_capacity(languages.len());
        let mut abbreviations = Vec::new();
        for language in languages {
            let dir = root.join(language.as_str());
            let words_path = dir.join("words.txt");
            let alphabet_path = dir.join("alphabet.txt");
            for path in [&words_path, &alphabet_path] {
                if !path.is_file() {
                    return Err(Error::Config(format!(
                        "language `{language}`: missing {}",
                        path.display()
                    )));
                }
            }

            let words = read_entries(&words_path)?
                .into_iter()
                .map(|(line, entry)| parse_word(&words_path, line, &entry))
                .collect::<Result<BTreeSet<_>>>()?;
            lexicons.push(GrammaticalLexicon {
                language: language.clone(),
                words,
            });

            let letters = read_entries(&alphabet_path)?
                .into_iter()
                .map(|(line, entry)| parse_letter(&alphabet_path, line, &entry))
                .collect::<Result<BTreeSet<_>>>()?;
            alphabets.push(AlphabetProfile {
                language: language.clone(),
                letters,
            });

            let abbrev_path = dir.join("abbrev.txt");
            if abbrev_path.is_file() {
                for (line, entry) in read_entries(&abbrev_path)? {
                    abbreviations.push(parse_word(&abbrev_path, line, &entry)?);
                }
            }
        }
        Self::from_parts(lexicons, alphabets, Abbreviations::new(abbreviations))
    }

    /// Loads the bundled data for the given languages.
    pub fn load_shipped(languages: &[LanguageId]) -> Result<Self> {
        Self::load(&shipped_data_dir(), languages)
    }

    /// Assembles a set from in-memory parts; lexicons and alphabets must
    /// list the same languages in the same order.
    pub fn from_parts(
        lexicons: Vec<GrammaticalLexicon>,
        alphabets: Vec<AlphabetProfile>,
        abbreviations: Abbreviations,
    ) -> Result<Self> {
        let languages: Vec<LanguageId> = lexicons.iter().map(|l| l.language.clone()).collect();
        check_languages(&languages)?;
        let alphabet_languages: Vec<&LanguageId> = alphabets.iter().map(|a| &a.language).collect();
        if alphabet_languages != languages.iter().collect::<Vec<_>>() {
            return Err(Error::Config(
                "lexicons and alphabets cover different languages".into(),
            ));
        }

        let mut word_index: HashMap<String, LanguageMask> = HashMap::new();
        for (index, lexicon) in lexicons.iter().enumerate() {
            for word in &lexicon.words {
                word_index
                    .entry(word.clone())
                    .or_default()
                    .insert(index);
            }
        }

        let mut owners: HashMap<char, LanguageMask> = HashMap::new();
        for (index, alphabet) in alphabets.iter().enumerate() {
            for &c in &alphabet.letters {
                owners.entry(c).or_default().insert(index);
            }
        }
        let exclusive_index: HashMap<char, usize> = owners
            .into_iter()
            .filter(|(_, mask)| mask.len() == 1)
            .map(|(c, mask)| (c, mask.iter().next().expect("one owner")))
            .collect();

        let ascii_exclusive = exclusive_index.keys().any(char::is_ascii);
        Ok(Self {
            languages,
            lexicons,
            alphabets,
            abbreviations,
            word_index,
            exclusive_index,
            ascii_exclusive,
        })
    }

    pub fn languages(&self) -> &[LanguageId] {
        &self.languages
    }

    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn index_of(&self, language: &LanguageId) -> Option<usize> {
        self.languages.iter().position(|l| l == language)
    }

    pub fn lexicon(&self, language: &LanguageId) -> Option<&GrammaticalLexicon> {
        self.index_of(language).map(|i| &self.lexicons[i])
    }

    pub fn alphabet(&self, language: &LanguageId) -> Option<&AlphabetProfile> {
        self.index_of(language).map(|i| &self.alphabets[i])
    }

    pub fn lexicons(&self) -> &[GrammaticalLexicon] {
        &self.lexicons
    }

    pub fn alphabets(&self) -> &[AlphabetProfile] {
        &self.alphabets
    }

    pub fn abbreviations(&self) -> &Abbreviations {
        &self.abbreviations
    }

    /// Whether a canonical word belongs to the grammatical words of `language`.
    pub fn contains_word(&self, language: &LanguageId, word: &str) -> Result<bool> {
        let index = self
            .index_of(language)
            .ok_or_else(|| Error::Usage(format!("language `{language}` is not configured")))?;
        Ok(self.word_languages(word).contains(index))
    }

    /// Languages whose lexicon contains the canonical `word`.
    pub fn word_languages(&self, word: &str) -> LanguageMask {
        self.word_index.get(word).copied().unwrap_or_default()
    }

    /// The only configured language whose alphabet contains `c`, if any.
    pub fn exclusive_language_of(&self, c: char) -> Option<&LanguageId> {
        self.exclusive_index_of(c).map(|i| &self.languages[i])
    }

    /// Index form of [`exclusive_language_of`](Self::exclusive_language_of)
    /// for characters that are already canonical.
    pub fn exclusive_index_of(&self, c: char) -> Option<usize> {
        if let Some(&index) = self.exclusive_index.get(&c) {
            return Some(index);
        }
        match canonical_char(c) {
            Some(folded) if folded != c => self.exclusive_index.get(&folded).copied(),
            _ => None,
        }
    }

    /// Lookup for a character known to be canonical already.
    pub fn exclusive_index_of_canonical(&self, c: char) -> Option<usize> {
        self.exclusive_index.get(&c).copied()
    }

    /// Whether any exclusive character is ASCII.
    pub fn has_ascii_exclusive(&self) -> bool {
        self.ascii_exclusive
    }

    /// Every exclusive character with its language, sorted by character.
    pub fn exclusive_characters(&self) -> Vec<(char, &LanguageId)> {
        let mut out: Vec<_> = self
            .exclusive_index
            .iter()
            .map(|(&c, &i)| (c, &self.languages[i]))
            .collect();
        out.sort();
        out
    }

    /// Words listed by two or more languages, sorted.
    pub fn shared_words(&self) -> Vec<(&str, Vec<&LanguageId>)> {
        let mut out: Vec<_> = self
            .word_index
            .iter()
            .filter(|(_, mask)| mask.len() > 1)
            .map(|(word, mask)| {
                (
                    word.as_str(),
                    mask.iter().map(|i| &self.languages[i]).collect(),
                )
            })
            .collect();
        out.sort();
        out
    }
}

fn check_languages(languages: &[LanguageId]) -> Result<()> {
    if languages.is_empty() {
        return Err(Error::Config("no languages configured".into()));
    }
    if languages.len() > MAX_LANGUAGES {
        return Err(Error::Config(format!(
            "at most {MAX_LANGUAGES} languages are supported, got {}",
            languages.len()
        )));
    }
    let mut seen = HashSet::new();
    for language in languages {
        if !seen.insert(language) {
            return Err(Error::Config(format!("duplicate language `{language}`")));
        }
    }
    Ok(())
}

/// Reads a data file and returns its non-comment lines with 1-based line
/// numbers.
fn read_entries(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.trim() != line {
            return Err(parse_error(path, i + 1, "leading or trailing whitespace"));
        }
        out.push((i + 1, line.to_string()));
    }
    Ok(out)
}

fn parse_word(path: &Path, line: usize, entry: &str) -> Result<String> {
    if entry.chars().any(char::is_whitespace) {
        return Err(parse_error(path, line, "entry contains whitespace"));
    }
    let word = canonicalize(entry);
    if word.is_empty() {
        return Err(parse_error(path, line, "entry is empty after folding"));
    }
    Ok(word)
}

fn parse_letter(path: &Path, line: usize, entry: &str) -> Result<char> {
    single_canonical_char(entry)
        .ok_or_else(|| parse_error(path, line, "expected exactly one character"))
}

fn parse_error(path: &Path, line: usize, message: &str) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    }
}

/// Per-language summary used by the lexicon check.
#[derive(Debug, Clone, Serialize)]
pub struct LexiconSummary {
    pub language: LanguageId,
    pub words: usize,
    pub letters: usize,
    pub exclusive: Vec<char>,
}

impl LexiconSet {
    pub fn summaries(&self) -> Vec<LexiconSummary> {
        let mut exclusive: BTreeMap<usize, Vec<char>> = BTreeMap::new();
        for (&c, &i) in &self.exclusive_index {
            exclusive.entry(i).or_default().push(c);
        }
        self.languages
            .iter()
            .enumerate()
            .map(|(i, language)| {
                let mut chars = exclusive.remove(&i).unwrap_or_default();
                chars.sort_unstable();
                LexiconSummary {
                    language: language.clone(),
                    words: self.lexicons[i].words.len(),
                    letters: self.alphabets[i].letters.len(),
                    exclusive: chars,
                }
            })
            .collect()
    }
}
