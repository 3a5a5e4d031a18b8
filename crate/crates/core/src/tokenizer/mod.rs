//! Sentence splitting, embedded-segment extraction and word tokenization.
//!
//! A sentence is broken down into a [`SegmentTree`]: the top-level text plus
//! every segment embedded in it through quotes, parentheses, paired dashes or
//! a colon. Each node of the tree is classified on its own.
//!
//! All offsets are counted in characters (Unicode scalar values).

mod segments;
mod sentences;
mod words;

use serde::Serialize;

pub use segments::build_segment_tree;
pub use sentences::{split_sentences, ParagraphReader};
pub use words::tokenize_words;

/// Half-open character range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// This span moved right by `offset` characters.
    pub fn shifted(&self, offset: usize) -> Span {
        Span::new(self.start + offset, self.end + offset)
    }
}

/// Input text with a name used in diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub text: String,
    pub source_name: String,
}

impl RawDocument {
    pub fn new(text: impl Into<String>, source_name: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            source_name: source_name.into(),
        }
    }
}

/// One sentence of a document with its character span in that document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    /// Contains letters and no digits; the only kind that counts as a word.
    Word,
    /// Numbers and other tokens without letters.
    NonWord,
    /// A standalone sign such as `¿` that may carry alphabet evidence.
    Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    /// `canonicalize(surface)`.
    pub canonical: String,
    /// Character offset of the first character in the tokenized text.
    pub offset: usize,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    /// Number of characters of the surface form.
    pub fn char_len(&self) -> usize {
        self.surface.chars().count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DelimiterKind {
    Root,
    Quote,
    Parenthesis,
    Dash,
    Colon,
}

impl DelimiterKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DelimiterKind::Root => "root",
            DelimiterKind::Quote => "quote",
            DelimiterKind::Parenthesis => "parenthesis",
            DelimiterKind::Dash => "dash",
            DelimiterKind::Colon => "colon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DelimiterProblem {
    /// An opening delimiter that is never closed; its segment was dissolved.
    Unclosed,
    /// A closing delimiter with no matching opener.
    Unopened,
}

/// An unbalanced delimiter found while building a segment tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DelimiterWarning {
    pub kind: DelimiterKind,
    pub delimiter: char,
    /// Character offset within the sentence.
    pub offset: usize,
    pub problem: DelimiterProblem,
}

/// A sentence split into its own tokens and nested embedded segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentTree {
    pub kind: DelimiterKind,
    /// Character span within the sentence, delimiters included.
    pub span: Span,
    /// Tokens of this node that are not inside any child.
    pub own_tokens: Vec<Token>,
    pub children: Vec<SegmentTree>,
    /// Delimiter problems; only ever filled on the root.
    pub warnings: Vec<DelimiterWarning>,
}

impl SegmentTree {
    /// A childless node over the given tokens.
    pub fn leaf(kind: DelimiterKind, span: Span, own_tokens: Vec<Token>) -> Self {
        Self {
            kind,
            span,
            own_tokens,
            children: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Number of word tokens owned directly by this node.
    pub fn word_count(&self) -> usize {
        self.own_tokens.iter().filter(|t| t.is_word()).count()
    }

    /// Number of word tokens in this node and all its descendants.
    pub fn total_word_count(&self) -> usize {
        self.word_count()
            + self
                .children
                .iter()
                .map(SegmentTree::total_word_count)
                .sum::<usize>()
    }

    /// All tokens of the subtree in depth-first pre-order (own tokens of a
    /// node before those of its children).
    pub fn tokens(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        self.collect_tokens(&mut out);
        out
    }

    fn collect_tokens<'a>(&'a self, out: &mut Vec<&'a Token>) {
        out.extend(self.own_tokens.iter());
        for child in &self.children {
            child.collect_tokens(out);
        }
    }

    /// Nesting depth; a lone root has depth 0.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(SegmentTree::node_count)
            .sum::<usize>()
    }
}

/// Characters that make up tokens.
pub(crate) fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || unicode_normalization::char::is_combining_mark(c)
}

pub(crate) fn is_sign(c: char) -> bool {
    matches!(c, '¿' | '¡')
}
