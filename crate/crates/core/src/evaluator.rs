//! Accuracy reports over labeled corpora.
//!
//! A corpus is a list of sentences with their gold language. Each sentence
//! is classified as a whole (its root tag; embedded segments are ignored for
//! scoring) and counted as unique-correct, unique-wrong, ambiguous or
//! undetermined, per language and per sentence length in words.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::classifier::classify_node;
use crate::error::{Error, Result};
use crate::lexicon::{LanguageId, LexiconSet};
use crate::tokenizer::build_segment_tree;

/// Sentences of at least this many words share the last length bucket.
pub const LAST_BUCKET: usize = 21;

/// Errors with at most this many words are "very short".
pub const VERY_SHORT_WORDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub text: String,
    pub gold: LanguageId,
    /// 1-based line in the corpus file, 0 for in-memory entries.
    pub line: usize,
}

impl CorpusEntry {
    pub fn new(gold: LanguageId, text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            gold,
            line: 0,
        }
    }
}

/// Reads a `<code>\t<sentence>` corpus file; `#` lines and blank lines are
/// skipped.
pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus(&text).map_err(|(line, message)| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    })
}

/// Parses corpus text; errors carry the 1-based line number.
pub fn parse_corpus(text: &str) -> std::result::Result<Vec<CorpusEntry>, (usize, String)> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((code, sentence)) = line.split_once('\t') else {
            return Err((i + 1, "expected `<code>\\t<sentence>`".into()));
        };
        let gold = LanguageId::new(code).map_err(|e| (i + 1, e.to_string()))?;
        if sentence.trim().is_empty() {
            return Err((i + 1, "empty sentence".into()));
        }
        entries.push(CorpusEntry {
            text: sentence.to_string(),
            gold,
            line: i + 1,
        });
    }
    Ok(entries)
}

/// Sentence outcome counts. `n_sentences` is always the sum of the four
/// exclusive outcomes; `ambiguous_with_gold` is a subset of `ambiguous`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub n_sentences: usize,
    pub n_unique_correct: usize,
    pub n_unique_wrong: usize,
    pub n_ambiguous: usize,
    pub n_undetermined: usize,
    pub n_ambiguous_with_gold: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    UniqueCorrect,
    UniqueWrong,
    Ambiguous { contains_gold: bool },
    Undetermined,
}

impl Outcome {
    pub fn is_unique(self) -> bool {
        matches!(self, Outcome::UniqueCorrect | Outcome::UniqueWrong)
    }
}

impl Counters {
    pub fn record(&mut self, outcome: Outcome) {
        self.n_sentences += 1;
        match outcome {
            Outcome::UniqueCorrect => self.n_unique_correct += 1,
            Outcome::UniqueWrong => self.n_unique_wrong += 1,
            Outcome::Ambiguous { contains_gold } => {
                self.n_ambiguous += 1;
                if contains_gold {
                    self.n_ambiguous_with_gold += 1;
                }
            }
            Outcome::Undetermined => self.n_undetermined += 1,
        }
    }

    pub fn merge(&mut self, other: &Counters) {
        self.n_sentences += other.n_sentences;
        self.n_unique_correct += other.n_unique_correct;
        self.n_unique_wrong += other.n_unique_wrong;
        self.n_ambiguous += other.n_ambiguous;
        self.n_undetermined += other.n_undetermined;
        self.n_ambiguous_with_gold += other.n_ambiguous_with_gold;
    }

    pub fn is_consistent(&self) -> bool {
        self.n_sentences
            == self.n_unique_correct + self.n_unique_wrong + self.n_ambiguous + self.n_undetermined
            && self.n_ambiguous_with_gold <= self.n_ambiguous
    }

    pub fn n_unique(&self) -> usize {
        self.n_unique_correct + self.n_unique_wrong
    }

    /// Sentences whose tag contains the gold language.
    pub fn n_containing_gold(&self) -> usize {
        self.n_unique_correct + self.n_ambiguous_with_gold
    }

    fn ratio(&self, n: usize) -> f64 {
        if self.n_sentences == 0 {
            0.0
        } else {
            n as f64 / self.n_sentences as f64
        }
    }

    pub fn unique_correct_rate(&self) -> f64 {
        self.ratio(self.n_unique_correct)
    }

    pub fn containing_gold_rate(&self) -> f64 {
        self.ratio(self.n_containing_gold())
    }

    pub fn unique_rate(&self) -> f64 {
        self.ratio(self.n_unique())
    }

    /// Share of ambiguous or undetermined sentences.
    pub fn unresolved_rate(&self) -> f64 {
        self.ratio(self.n_ambiguous + self.n_undetermined)
    }
}

/// Sentence lengths seen for one language, in words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LengthProfile {
    pub min_length: usize,
    /// Shortest sentence that still received a single-language tag.
    pub min_unique_length: Option<usize>,
    pub max_length: usize,
    /// Smallest `W` such that every sentence of at least `W` words received a
    /// single-language tag; `None` when even the longest sentence did not.
    pub decisive_length: Option<usize>,
}

/// A sentence tagged with a single wrong language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorCase {
    pub line: usize,
    pub text: String,
    pub gold: LanguageId,
    pub tag: Vec<LanguageId>,
    pub word_count: usize,
    /// Words found in no configured lexicon.
    pub unknown_words: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCategory {
    /// More than half the words belong to no configured lexicon.
    UnexpectedLanguage,
    /// At most [`VERY_SHORT_WORDS`] words.
    VeryShort,
    Other,
}

impl ErrorCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::UnexpectedLanguage => "unexpected-language",
            ErrorCategory::VeryShort => "very-short",
            ErrorCategory::Other => "other",
        }
    }
}

impl ErrorCase {
    /// The unexpected-language check runs first: a three-word Latin phrase
    /// is reported as foreign text rather than as merely short.
    pub fn category(&self) -> ErrorCategory {
        if self.word_count > 0 && 2 * self.unknown_words > self.word_count {
            ErrorCategory::UnexpectedLanguage
        } else if self.word_count <= VERY_SHORT_WORDS {
            ErrorCategory::VeryShort
        } else {
            ErrorCategory::Other
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorizedError {
    pub category: ErrorCategory,
    #[serde(flatten)]
    pub case: ErrorCase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub languages: Vec<LanguageId>,
    pub total: Counters,
    pub per_language: BTreeMap<LanguageId, Counters>,
    /// Keyed by word count; the last key, [`LAST_BUCKET`], holds every
    /// longer sentence too.
    pub by_length: BTreeMap<usize, Counters>,
    pub lengths: BTreeMap<LanguageId, LengthProfile>,
    /// Mean share of a sentence's words found in its gold language's
    /// lexicon, over sentences with at least one word.
    pub grammatical_density: BTreeMap<LanguageId, f64>,
    pub errors: Vec<ErrorCase>,
}

impl EvalReport {
    pub fn decisive_length(&self, language: &LanguageId) -> Option<usize> {
        self.lengths.get(language).and_then(|p| p.decisive_length)
    }

    /// Counters over sentences with at least `words` words.
    pub fn at_least(&self, words: usize) -> Counters {
        let mut out = Counters::default();
        for (_, c) in self.by_length.range(words.min(LAST_BUCKET)..) {
            out.merge(c);
        }
        out
    }

    /// Counters over sentences whose length lies in `range`.
    pub fn length_range(&self, range: std::ops::RangeInclusive<usize>) -> Counters {
        let mut out = Counters::default();
        for (_, c) in self.by_length.range(range) {
            out.merge(c);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ReportJson::from(self)).expect("report serializes")
    }

    /// Plain-text tables for a terminal.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let header = format!(
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7} {:>9} {:>8}",
            "", "total", "correct", "wrong", "ambig", "undet", "contains", "density"
        );
        let _ = writeln!(out, "{header}");
        for language in &self.languages {
            let c = &self.per_language[language];
            let density = self.grammatical_density.get(language).copied().unwrap_or(0.0);
            let _ = writeln!(
                out,
                "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7} {:>9} {:>8.3}",
                language.as_str(),
                c.n_sentences,
                c.n_unique_correct,
                c.n_unique_wrong,
                c.n_ambiguous,
                c.n_undetermined,
                c.n_containing_gold(),
                density
            );
        }
        let t = &self.total;
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7} {:>9}",
            "all",
            t.n_sentences,
            t.n_unique_correct,
            t.n_unique_wrong,
            t.n_ambiguous,
            t.n_undetermined,
            t.n_containing_gold()
        );

        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>10} {:>9} {:>7}",
            "isolation", "min", "min-uniq", "decisive", "max"
        );
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        for language in &self.languages {
            let p = &self.lengths[language];
            let _ = writeln!(
                out,
                "{:<10} {:>7} {:>10} {:>9} {:>7}",
                language.as_str(),
                p.min_length,
                opt(p.min_unique_length),
                opt(p.decisive_length),
                p.max_length
            );
        }

        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7}",
            "words", "total", "correct", "wrong", "ambig", "undet"
        );
        for (&bucket, c) in &self.by_length {
            let label = bucket_label(bucket);
            let _ = writeln!(
                out,
                "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7}",
                label,
                c.n_sentences,
                c.n_unique_correct,
                c.n_unique_wrong,
                c.n_ambiguous,
                c.n_undetermined
            );
        }

        let inventory = error_inventory(self);
        if !inventory.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "errors");
            for e in &inventory {
                let tag: Vec<&str> = e.case.tag.iter().map(LanguageId::as_str).collect();
                let _ = writeln!(
                    out,
                    "  [{}] gold={} tag={} {:?}",
                    e.category.as_str(),
                    e.case.gold,
                    tag.join("+"),
                    e.case.text
                );
            }
        }
        out
    }
}

pub fn bucket_label(bucket: usize) -> String {
    if bucket >= LAST_BUCKET {
        format!("{LAST_BUCKET}+")
    } else {
        bucket.to_string()
    }
}

/// JSON layout of a report: string keys for every map.
#[derive(Serialize)]
struct ReportJson<'a> {
    languages: &'a [LanguageId],
    total: &'a Counters,
    per_language: &'a BTreeMap<LanguageId, Counters>,
    by_length: BTreeMap<String, &'a Counters>,
    lengths: &'a BTreeMap<LanguageId, LengthProfile>,
    decisive_length: BTreeMap<&'a LanguageId, Option<usize>>,
    grammatical_density: &'a BTreeMap<LanguageId, f64>,
    errors: Vec<CategorizedError>,
}

impl<'a> From<&'a EvalReport> for ReportJson<'a> {
    fn from(r: &'a EvalReport) -> Self {
        Self {
            languages: &r.languages,
            total: &r.total,
            per_language: &r.per_language,
            by_length: r
                .by_length
                .iter()
                .map(|(&b, c)| (bucket_label(b), c))
                .collect(),
            lengths: &r.lengths,
            decisive_length: r
                .lengths
                .iter()
                .map(|(l, p)| (l, p.decisive_length))
                .collect(),
            grammatical_density: &r.grammatical_density,
            errors: error_inventory(r),
        }
    }
}

/// Partial evaluation state. Accumulators over disjoint parts of a corpus
/// merge into the same report as a single pass, in any order.
#[derive(Debug, Clone, Default)]
pub struct Accumulator {
    per_language: BTreeMap<LanguageId, LanguageAcc>,
    by_length: BTreeMap<usize, Counters>,
    errors: Vec<(usize, ErrorCase)>,
}

#[derive(Debug, Clone, Default)]
struct LanguageAcc {
    counters: Counters,
    min_length: Option<usize>,
    max_length: usize,
    min_unique_length: Option<usize>,
    longest_unresolved: Option<usize>,
    /// Per-sentence densities keyed by corpus index, summed in index order
    /// so that the result does not depend on how the corpus was split.
    densities: Vec<(usize, f64)>,
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

impl Accumulator {
    /// Classifies one entry. `index` orders error cases in the final report.
    pub fn add(&mut self, lex: &LexiconSet, index: usize, entry: &CorpusEntry) -> Result<()> {
        let gold_index = lex.index_of(&entry.gold).ok_or_else(|| {
            Error::Usage(format!(
                "corpus entry {} ({:?}) has unconfigured language `{}`",
                entry.line, entry.text, entry.gold
            ))
        })?;
        let tree = build_segment_tree(&entry.text);
        let tagged = classify_node(lex, &tree);
        let tag = &tagged.tag;

        let mut words = 0;
        let mut gold_words = 0;
        let mut unknown_words = 0;
        for token in tree.tokens().into_iter().filter(|t| t.is_word()) {
            words += 1;
            let owners = lex.word_languages(&token.canonical);
            if owners.contains(gold_index) {
                gold_words += 1;
            }
            if owners.is_empty() {
                unknown_words += 1;
            }
        }

        let outcome = if tag.is_undetermined() {
            Outcome::Undetermined
        } else if tag.is_ambiguous() {
            Outcome::Ambiguous {
                contains_gold: tag.contains(&entry.gold),
            }
        } else if tag.contains(&entry.gold) {
            Outcome::UniqueCorrect
        } else {
            Outcome::UniqueWrong
        };

        let acc = self.per_language.entry(entry.gold.clone()).or_default();
        acc.counters.record(outcome);
        acc.min_length = min_opt(acc.min_length, Some(words));
        acc.max_length = acc.max_length.max(words);
        if outcome.is_unique() {
            acc.min_unique_length = min_opt(acc.min_unique_length, Some(words));
        } else {
            acc.longest_unresolved = acc.longest_unresolved.max(Some(words));
        }
        if words > 0 {
            acc.densities.push((index, gold_words as f64 / words as f64));
        }
        self.by_length
            .entry(words.min(LAST_BUCKET))
            .or_default()
            .record(outcome);

        if outcome == Outcome::UniqueWrong {
            self.errors.push((
                index,
                ErrorCase {
                    line: entry.line,
                    text: entry.text.clone(),
                    gold: entry.gold.clone(),
                    tag: tag.languages.clone(),
                    word_count: words,
                    unknown_words,
                },
            ));
        }
        Ok(())
    }

    pub fn merge(&mut self, other: Accumulator) {
        for (language, b) in other.per_language {
            let a = self.per_language.entry(language).or_default();
            a.counters.merge(&b.counters);
            a.min_length = min_opt(a.min_length, b.min_length);
            a.max_length = a.max_length.max(b.max_length);
            a.min_unique_length = min_opt(a.min_unique_length, b.min_unique_length);
            a.longest_unresolved = a.longest_unresolved.max(b.longest_unresolved);
            a.densities.extend(b.densities);
        }
        for (bucket, c) in other.by_length {
            self.by_length.entry(bucket).or_default().merge(&c);
        }
        self.errors.extend(other.errors);
    }

    pub fn finish(mut self, lex: &LexiconSet) -> EvalReport {
        self.errors.sort_by_key(|(i, _)| *i);
        let mut total = Counters::default();
        let mut per_language = BTreeMap::new();
        let mut lengths = BTreeMap::new();
        let mut grammatical_density = BTreeMap::new();
        for (language, mut acc) in self.per_language {
            total.merge(&acc.counters);
            let decisive_length = match acc.longest_unresolved {
                None => Some(1),
                Some(w) if w >= acc.max_length => None,
                Some(w) => Some(w + 1),
            };
            lengths.insert(
                language.clone(),
                LengthProfile {
                    min_length: acc.min_length.unwrap_or(0),
                    min_unique_length: acc.min_unique_length,
                    max_length: acc.max_length,
                    decisive_length,
                },
            );
            if !acc.densities.is_empty() {
                acc.densities.sort_by_key(|(i, _)| *i);
                let sum: f64 = acc.densities.iter().map(|(_, d)| d).sum();
                grammatical_density.insert(language.clone(), sum / acc.densities.len() as f64);
            }
            per_language.insert(language, acc.counters);
        }
        EvalReport {
            languages: lex
                .languages()
                .iter()
                .filter(|l| per_language.contains_key(*l))
                .cloned()
                .collect(),
            total,
            per_language,
            by_length: self.by_length,
            lengths,
            grammatical_density,
            errors: self.errors.into_iter().map(|(_, e)| e).collect(),
        }
    }
}

/// Classifies every corpus entry and builds the report.
pub fn evaluate(lex: &LexiconSet, corpus: &[CorpusEntry]) -> Result<EvalReport> {
    if corpus.is_empty() {
        return Err(Error::Usage("empty corpus".into()));
    }
    let mut acc = Accumulator::default();
    for (index, entry) in corpus.iter().enumerate() {
        acc.add(lex, index, entry)?;
    }
    Ok(acc.finish(lex))
}

/// Categorizes every unique-wrong sentence of a report.
pub fn error_inventory(report: &EvalReport) -> Vec<CategorizedError> {
    report
        .errors
        .iter()
        .map(|case| CategorizedError {
            category: case.category(),
            case: case.clone(),
        })
        .collect()
}
