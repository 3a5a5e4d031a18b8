//! Per-segment language scoring.
//!
//! Every word of a segment adds one point to each language whose grammatical
//! words contain it, and one point to each language owning an exclusive
//! character of the word (at most one such point per word and language).
//! The segment is tagged with every language reaching the highest score.
//! Embedded segments are scored on their own from zero.

use std::fmt;

use serde::Serialize;

use crate::lexicon::{LanguageId, LanguageMask, LexiconSet};
use crate::tokenizer::{
    build_segment_tree, split_sentences, DelimiterKind, DelimiterWarning, RawDocument,
    SegmentTree, Span, Token, TokenKind,
};

/// Per-language evidence counts, aligned with [`LexiconSet::languages`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LikelihoodVector {
    scores: Vec<u32>,
}

impl LikelihoodVector {
    pub fn zeros(languages: usize) -> Self {
        Self {
            scores: vec![0; languages],
        }
    }

    pub fn from_scores(scores: Vec<u32>) -> Self {
        Self { scores }
    }

    pub fn scores(&self) -> &[u32] {
        &self.scores
    }

    pub fn get(&self, index: usize) -> u32 {
        self.scores[index]
    }

    pub fn total(&self) -> u64 {
        self.scores.iter().map(|&s| u64::from(s)).sum()
    }

    pub fn max(&self) -> u32 {
        self.scores.iter().copied().max().unwrap_or(0)
    }

    /// Languages reaching the maximum score; empty when it is zero.
    pub fn argmax(&self) -> LanguageMask {
        let max = self.max();
        let mut mask = LanguageMask::EMPTY;
        if max > 0 {
            for (i, &s) in self.scores.iter().enumerate() {
                if s == max {
                    mask.insert(i);
                }
            }
        }
        mask
    }

    /// Adds the evidence of one token in place.
    pub fn add_token(&mut self, lex: &LexiconSet, token: &Token) {
        let evidence = token_evidence(lex, token);
        for i in evidence.lexicon.iter() {
            self.scores[i] += 1;
        }
        for i in evidence.alphabet.iter() {
            self.scores[i] += 1;
        }
    }

    /// Scores as `(language, score)` pairs in configuration order.
    pub fn named<'a>(&'a self, lex: &'a LexiconSet) -> impl Iterator<Item = (&'a LanguageId, u32)> {
        lex.languages().iter().zip(self.scores.iter().copied())
    }
}

/// Languages a single token votes for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenEvidence {
    /// Languages listing the token as a grammatical word.
    pub lexicon: LanguageMask,
    /// Languages owning an exclusive character of the token.
    pub alphabet: LanguageMask,
}

pub fn token_evidence(lex: &LexiconSet, token: &Token) -> TokenEvidence {
    match token.kind {
        TokenKind::NonWord => TokenEvidence::default(),
        TokenKind::Sign => TokenEvidence {
            lexicon: LanguageMask::EMPTY,
            alphabet: alphabet_evidence(lex, &token.canonical),
        },
        TokenKind::Word => TokenEvidence {
            lexicon: lex.word_languages(&token.canonical),
            alphabet: alphabet_evidence(lex, &token.canonical),
        },
    }
}

fn alphabet_evidence(lex: &LexiconSet, canonical: &str) -> LanguageMask {
    let mut mask = LanguageMask::EMPTY;
    if canonical.is_ascii() && !lex.has_ascii_exclusive() {
        return mask;
    }
    for c in canonical.chars() {
        if let Some(i) = lex.exclusive_index_of_canonical(c) {
            mask.insert(i);
        }
    }
    mask
}

/// Scores one token on top of `acc`, leaving `acc` untouched.
pub fn score_word(lex: &LexiconSet, token: &Token, acc: &LikelihoodVector) -> LikelihoodVector {
    let mut out = acc.clone();
    out.add_token(lex, token);
    out
}

/// Outcome of classifying one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    /// Languages with the highest score, in configuration order. Empty means
    /// undetermined.
    pub languages: Vec<LanguageId>,
    pub max_score: u32,
    pub word_count: usize,
}

impl Tag {
    pub fn from_likelihood(lex: &LexiconSet, likelihood: &LikelihoodVector, word_count: usize) -> Self {
        let languages = likelihood
            .argmax()
            .iter()
            .map(|i| lex.languages()[i].clone())
            .collect();
        Self {
            languages,
            max_score: likelihood.max(),
            word_count,
        }
    }

    pub fn is_undetermined(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn is_unique(&self) -> bool {
        self.languages.len() == 1
    }

    pub fn is_ambiguous(&self) -> bool {
        self.languages.len() > 1
    }

    pub fn contains(&self, language: &LanguageId) -> bool {
        self.languages.contains(language)
    }

    /// Language codes sorted alphabetically.
    pub fn sorted_codes(&self) -> Vec<&str> {
        let mut codes: Vec<&str> = self.languages.iter().map(LanguageId::as_str).collect();
        codes.sort_unstable();
        codes
    }
}

impl fmt::Display for Tag {
    /// `und` when undetermined, otherwise the sorted codes joined by `+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_undetermined() {
            f.write_str("und")
        } else {
            f.write_str(&self.sorted_codes().join("+"))
        }
    }
}

/// A segment tree with a tag on every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedTree {
    pub kind: DelimiterKind,
    pub span: Span,
    pub tag: Tag,
    pub likelihood: LikelihoodVector,
    pub children: Vec<TaggedTree>,
}

impl TaggedTree {
    /// Nodes in depth-first pre-order.
    pub fn nodes(&self) -> Vec<&TaggedTree> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.nodes());
        }
        out
    }
}

/// Scores the node's own tokens and recurses into its children, each
/// starting from a zero vector.
pub fn classify_node(lex: &LexiconSet, node: &SegmentTree) -> TaggedTree {
    let mut likelihood = LikelihoodVector::zeros(lex.len());
    let mut word_count = 0;
    for token in &node.own_tokens {
        likelihood.add_token(lex, token);
        if token.is_word() {
            word_count += 1;
        }
    }
    TaggedTree {
        kind: node.kind,
        span: node.span,
        tag: Tag::from_likelihood(lex, &likelihood, word_count),
        likelihood,
        children: node.children.iter().map(|c| classify_node(lex, c)).collect(),
    }
}

/// A delimiter problem located in a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub source_name: String,
    /// Span of the sentence in the document.
    pub sentence: Span,
    #[serde(flatten)]
    pub warning: DelimiterWarning,
}

/// One classified sentence of a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub text: String,
    /// Span of the sentence in the document; tree spans are relative to it.
    pub span: Span,
    pub tree: TaggedTree,
    /// Word tokens of the whole sentence, embedded segments included.
    pub word_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedDocument {
    pub sentences: Vec<TaggedSentence>,
    pub diagnostics: Vec<Diagnostic>,
}

impl TaggedDocument {
    pub fn trees(&self) -> impl Iterator<Item = &TaggedTree> {
        self.sentences.iter().map(|s| &s.tree)
    }
}

/// Classifies one sentence, appending its delimiter problems to
/// `diagnostics`.
pub fn classify_sentence(
    lex: &LexiconSet,
    source_name: &str,
    text: String,
    span: Span,
    diagnostics: &mut Vec<Diagnostic>,
) -> TaggedSentence {
    let tree = build_segment_tree(&text);
    diagnostics.extend(tree.warnings.iter().map(|w| Diagnostic {
        source_name: source_name.to_string(),
        sentence: span,
        warning: w.clone(),
    }));
    TaggedSentence {
        word_count: tree.total_word_count(),
        tree: classify_node(lex, &tree),
        text,
        span,
    }
}

/// Splits, parses and classifies a whole document, sentence by sentence.
pub fn classify_document(lex: &LexiconSet, doc: &RawDocument) -> TaggedDocument {
    let mut out = TaggedDocument::default();
    for sentence in split_sentences(&doc.text, lex.abbreviations()) {
        let tagged = classify_sentence(
            lex,
            &doc.source_name,
            sentence.text,
            sentence.span,
            &mut out.diagnostics,
        );
        out.sentences.push(tagged);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::DEFAULT_LANGUAGES;
    use crate::tokenizer::tokenize_words;

    fn shipped() -> LexiconSet {
        let ids: Vec<_> = DEFAULT_LANGUAGES
            .iter()
            .map(|c| LanguageId::new(c).unwrap())
            .collect();
        LexiconSet::load_shipped(&ids).unwrap()
    }

    fn token(text: &str) -> Token {
        let mut t = tokenize_words(text);
        assert_eq!(t.len(), 1, "{text}");
        t.remove(0)
    }

    fn codes(tag: &Tag) -> Vec<&str> {
        tag.languages.iter().map(LanguageId::as_str).collect()
    }

    #[test]
    fn grammatical_word_scores_its_language() {
        let lex = shipped();
        let zero = LikelihoodVector::zeros(4);
        let v = score_word(&lex, &token("le"), &zero);
        assert_eq!(v.scores(), [1, 0, 0, 0]);
        assert_eq!(zero.scores(), [0, 0, 0, 0]);
    }

    #[test]
    fn numbers_score_nothing() {
        let lex = shipped();
        let zero = LikelihoodVector::zeros(4);
        assert_eq!(score_word(&lex, &token("1234"), &zero), zero);
    }

    #[test]
    fn exclusive_letter_scores_once_per_word() {
        let lex = shipped();
        let zero = LikelihoodVector::zeros(4);
        assert_eq!(score_word(&lex, &token("años"), &zero).scores(), [0, 0, 1, 0]);
        assert_eq!(score_word(&lex, &token("ñañaña"), &zero).scores(), [0, 0, 1, 0]);
        // A word in the French list that also carries a French-only letter.
        assert_eq!(score_word(&lex, &token("là"), &zero).scores(), [2, 0, 0, 0]);
        assert_eq!(score_word(&lex, &token("¿"), &zero).scores(), [0, 0, 1, 0]);
    }

    #[test]
    fn shared_word_scores_every_owner() {
        let lex = shipped();
        let v = score_word(&lex, &token("de"), &LikelihoodVector::zeros(4));
        assert_eq!(v.scores(), [1, 0, 1, 0]);
    }

    #[test]
    fn tag_semantics() {
        let lex = shipped();
        let und = Tag::from_likelihood(&lex, &LikelihoodVector::zeros(4), 3);
        assert!(und.is_undetermined());
        assert_eq!(und.to_string(), "und");

        let tie = Tag::from_likelihood(&lex, &LikelihoodVector::from_scores(vec![2, 2, 0, 1]), 3);
        assert_eq!(codes(&tie), ["fr", "en"]);
        assert_eq!(tie.to_string(), "en+fr");
        assert_eq!(tie.max_score, 2);
        assert!(tie.is_ambiguous());
    }

    #[test]
    fn child_segments_are_scored_separately() {
        let lex = shipped();
        let tree = build_segment_tree("le chat « the cat »");
        let tagged = classify_node(&lex, &tree);
        assert_eq!(codes(&tagged.tag), ["fr"]);
        assert_eq!(codes(&tagged.children[0].tag), ["en"]);
        assert_eq!(tagged.likelihood.scores(), [1, 0, 0, 0]);
    }

    #[test]
    fn empty_node_is_undetermined() {
        let lex = shipped();
        let tagged = classify_node(&lex, &build_segment_tree(""));
        assert!(tagged.tag.is_undetermined());
        assert_eq!(tagged.tag.max_score, 0);
        assert_eq!(tagged.tag.word_count, 0);
    }

    #[test]
    fn e_mail_is_read_as_spanish() {
        let lex = shipped();
        let tagged = classify_node(&lex, &build_segment_tree("e mail"));
        assert!(codes(&tagged.tag).contains(&"es"));
    }

    #[test]
    fn document_pipeline() {
        let lex = shipped();
        assert!(classify_document(&lex, &RawDocument::new("", "empty"))
            .sentences
            .is_empty());

        let doc = RawDocument::new(
            "The cat is on the roof and it will not come down. Der Hund ist mit dem Mann in den Park gegangen.",
            "mixed",
        );
        let tagged = classify_document(&lex, &doc);
        let tags: Vec<String> = tagged.trees().map(|t| t.tag.to_string()).collect();
        assert_eq!(tags, ["en", "de"]);
    }

    #[test]
    fn diagnostics_carry_source_and_sentence() {
        let lex = shipped();
        let doc = RawDocument::new("Fine. Broken (here.", "src.txt");
        let tagged = classify_document(&lex, &doc);
        assert_eq!(tagged.diagnostics.len(), 1);
        let d = &tagged.diagnostics[0];
        assert_eq!(d.source_name, "src.txt");
        assert_eq!(d.sentence, Span::new(6, 19));
        assert_eq!(d.warning.offset, 7);
    }
}
