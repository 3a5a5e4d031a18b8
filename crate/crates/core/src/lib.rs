//! Sentence-level language tagging for multilingual text.
//!
//! Each sentence, and every segment embedded in it through quotes,
//! parentheses, dashes or a colon, is tagged with the languages whose
//! grammatical words and exclusive alphabet characters it uses most. No
//! training data is involved: the only inputs are closed word lists and
//! alphabets per language.
//!
//! ```no_run
//! use sentlang::{classify_document, LanguageId, LexiconSet, RawDocument};
//!
//! let languages: Vec<LanguageId> = ["fr", "en"].iter().map(|c| c.parse().unwrap()).collect();
//! let lex = LexiconSet::load_shipped(&languages).unwrap();
//! let doc = RawDocument::new("Il a dit : « the cat sat on the mat » et il est parti.", "inline");
//! for sentence in classify_document(&lex, &doc).sentences {
//!     println!("{} {}", sentence.tree.tag, sentence.text);
//! }
//! ```

pub mod classifier;
pub mod error;
pub mod evaluator;
pub mod lexicon;
pub mod tokenizer;

pub use classifier::{
    classify_document, classify_node, classify_sentence, score_word, Diagnostic,
    LikelihoodVector, Tag, TaggedDocument, TaggedSentence, TaggedTree,
};
pub use error::{Error, Result};
pub use evaluator::{error_inventory, evaluate, CorpusEntry, ErrorCategory, EvalReport};
pub use lexicon::{canonicalize, LanguageId, LexiconSet};
pub use tokenizer::{
    build_segment_tree, split_sentences, tokenize_words, RawDocument, SegmentTree, Span, Token,
};
