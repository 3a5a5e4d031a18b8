use super::{is_sign, is_token_char, Token, TokenKind};
use crate::lexicon::canonicalize;

/// Splits a unit of text into tokens.
///
/// Tokens are runs of letters, digits and combining marks. Punctuation
/// separates tokens, except a hyphen between two token characters
/// (`state-of-the-art`) and a point or comma between two digits (`3.5`).
/// Apostrophes always separate, so `l'homme` yields `l` and `homme`.
/// `¿` and `¡` become one-character sign tokens.
pub fn tokenize_words(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    tokenize_chars(&chars)
}

pub(crate) fn tokenize_chars(chars: &[char]) -> Vec<Token> {
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if is_sign(c) {
            tokens.push(make_token(&chars[i..i + 1], i, TokenKind::Sign));
            i += 1;
            continue;
        }
        if !is_token_char(c) {
            i += 1;
            continue;
        }
        let start = i;
        let mut j = i + 1;
        loop {
            while j < n && is_token_char(chars[j]) {
                j += 1;
            }
            if j + 1 < n && is_token_char(chars[j + 1]) {
                let joiner = chars[j];
                let numeric = chars[j - 1].is_numeric() && chars[j + 1].is_numeric();
                if is_hyphen(joiner) || (numeric && matches!(joiner, '.' | ',')) {
                    j += 1;
                    continue;
                }
            }
            break;
        }
        let span = &chars[start..j];
        let kind = if span.iter().any(|c| c.is_numeric()) || !span.iter().any(|c| c.is_alphabetic())
        {
            TokenKind::NonWord
        } else {
            TokenKind::Word
        };
        tokens.push(make_token(span, start, kind));
        i = j;
    }
    tokens
}

fn make_token(chars: &[char], offset: usize, kind: TokenKind) -> Token {
    let surface: String = chars.iter().collect();
    Token {
        canonical: canonicalize(&surface),
        surface,
        offset,
        kind,
    }
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}
