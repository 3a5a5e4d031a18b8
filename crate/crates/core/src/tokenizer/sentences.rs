use std::io::{self, BufRead};

use super::{Sentence, Span};
use crate::lexicon::Abbreviations;

/// Splits text into sentences.
///
/// A sentence ends
/// * after a run of `.` `!` `?` `…` (plus any closing quotes or brackets)
///   that is followed by whitespace and then an uppercase letter, an opening
///   quote, `¿`, `¡` or the end of the text;
/// * at a blank line;
/// * at the end of the text.
///
/// A lone `.` does not end a sentence when the word before it is a known
/// abbreviation, a single letter (initials, `U.S.A.`) or when it sits
/// between two digits.
///
/// Sentences are trimmed of surrounding whitespace and whitespace-only
/// pieces are dropped, so every non-whitespace character of the input lies
/// in exactly one returned span. Never fails.
pub fn split_sentences(text: &str, abbreviations: &Abbreviations) -> Vec<Sentence> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    for cut in boundaries(&chars, abbreviations) {
        push_trimmed(&chars, start, cut, &mut sentences);
        start = cut;
    }
    push_trimmed(&chars, start, chars.len(), &mut sentences);
    sentences
}

fn boundaries(chars: &[char], abbreviations: &Abbreviations) -> Vec<usize> {
    let n = chars.len();
    let mut cuts = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c == '\n' {
            let mut j = i + 1;
            while j < n && chars[j].is_whitespace() && chars[j] != '\n' {
                j += 1;
            }
            if j < n && chars[j] == '\n' {
                cuts.push(i);
                i = j;
            } else {
                i += 1;
            }
            continue;
        }
        if !is_terminator(c) {
            i += 1;
            continue;
        }

        let mut run_end = i;
        while run_end < n && is_terminator(chars[run_end]) {
            run_end += 1;
        }
        let mut after = run_end;
        while after < n && is_closer(chars[after]) {
            after += 1;
        }
        if after < n && chars[after].is_whitespace() {
            let mut next = after;
            while next < n && chars[next].is_whitespace() {
                next += 1;
            }
            let lone_point = run_end - i == 1 && c == '.';
            if (next == n || starts_sentence(chars[next]))
                && !(lone_point && point_is_suppressed(chars, i, abbreviations))
            {
                cuts.push(after);
            }
        }
        i = run_end;
    }
    cuts
}

fn push_trimmed(chars: &[char], mut start: usize, mut end: usize, out: &mut Vec<Sentence>) {
    while start < end && chars[start].is_whitespace() {
        start += 1;
    }
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if start < end {
        out.push(Sentence {
            text: chars[start..end].iter().collect(),
            span: Span::new(start, end),
        });
    }
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '”' | '’' | '»' | '›' | ')' | ']' | '}'
    )
}

fn starts_sentence(c: char) -> bool {
    c.is_uppercase()
        || matches!(
            c,
            '"' | '\'' | '“' | '‘' | '„' | '«' | '‹' | '¿' | '¡'
        )
}

/// Whether the point at `at` belongs to an abbreviation, an initial or a
/// number rather than ending the sentence.
fn point_is_suppressed(chars: &[char], at: usize, abbreviations: &Abbreviations) -> bool {
    if at > 0 && at + 1 < chars.len() && chars[at - 1].is_ascii_digit() && chars[at + 1].is_ascii_digit()
    {
        return true;
    }
    let mut start = at;
    while start > 0 && chars[start - 1].is_alphanumeric() {
        start -= 1;
    }
    let word = &chars[start..at];
    match word {
        [] => false,
        [c] if c.is_alphabetic() => true,
        _ => abbreviations.contains(&word.iter().collect::<String>()),
    }
}

/// Reads a text stream one paragraph at a time.
///
/// Paragraphs are separated by blank lines, which always end a sentence, so
/// splitting each paragraph on its own gives the same sentences as splitting
/// the whole text. Each item is the paragraph text and the character offset
/// of its first character in the stream.
pub struct ParagraphReader<R> {
    reader: R,
    offset: usize,
    line: String,
    done: bool,
}

impl<R: BufRead> ParagraphReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            reader,
            offset: 0,
            line: String::new(),
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for ParagraphReader<R> {
    type Item = io::Result<(usize, String)>;

    fn next(&mut self) -> Option<Self::Item> {
        let mut paragraph = String::new();
        let mut start = self.offset;
        while !self.done {
            self.line.clear();
            match self.reader.read_line(&mut self.line) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    let len = self.line.chars().count();
                    // A whitespace-only line that ends in a newline and
                    // follows one is a paragraph break.
                    let blank = self.line.ends_with('\n')
                        && self.line.chars().all(char::is_whitespace)
                        && self.offset > 0;
                    self.offset += len;
                    if blank {
                        if paragraph.trim().is_empty() {
                            paragraph.clear();
                            start = self.offset;
                            continue;
                        }
                        return Some(Ok((start, paragraph)));
                    }
                    paragraph.push_str(&self.line);
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        if paragraph.trim().is_empty() {
            None
        } else {
            Some(Ok((start, paragraph)))
        }
    }
}
