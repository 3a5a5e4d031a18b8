use super::words::tokenize_chars;
use super::{
    is_token_char, DelimiterKind, DelimiterProblem, DelimiterWarning, SegmentTree, Span, Token,
};

/// Builds the segment tree of one sentence.
///
/// Embedded segments are delimited by
/// * paired quotes: `"…"`, `«…»`, `‹…›`, `“…”`, `„…“`, `‘…’`, and `'…'`
///   when both an opening and a closing straight quote are present;
/// * parentheses and brackets;
/// * a pair of spaced em or en dashes (` — … — `);
/// * a colon followed by whitespace, which opens a segment running to the
///   end of the enclosing node. A colon directly followed by another
///   delimited segment only introduces that segment. No colon segment is
///   opened inside another one.
///
/// An opening delimiter that is never closed is dissolved into its parent
/// and reported in `warnings`; so is a closer with no opener. Unpaired
/// dashes and single quotes are ordinary punctuation and are not reported.
pub fn build_segment_tree(sentence: &str) -> SegmentTree {
    let chars: Vec<char> = sentence.chars().collect();
    let (pairs, warnings) = pair_delimiters(&chars);

    let mut arena = vec![Draft {
        kind: DelimiterKind::Root,
        span: Span::new(0, chars.len()),
        content: Span::new(0, chars.len()),
        children: Vec::new(),
    }];
    let mut stack = vec![0usize];
    for pair in pairs {
        while let Some(&top) = stack.last() {
            if arena[top].span.contains(pair.open) {
                break;
            }
            stack.pop();
        }
        let parent = *stack.last().expect("root spans everything");
        let id = arena.len();
        arena.push(Draft {
            kind: pair.kind,
            span: Span::new(pair.open, pair.close + 1),
            content: Span::new(pair.open + 1, pair.close),
            children: Vec::new(),
        });
        arena[parent].children.push(id);
        stack.push(id);
    }

    add_colon_segments(&chars, &mut arena, 0, true);

    let mut tokens = tokenize_chars(&chars).into_iter().peekable();
    let mut root = assemble(&arena, 0, &mut tokens);
    root.warnings = warnings;
    root
}

struct Draft {
    kind: DelimiterKind,
    span: Span,
    content: Span,
    children: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Pair {
    kind: DelimiterKind,
    open: usize,
    close: usize,
}

struct Frame {
    kind: DelimiterKind,
    delimiter: char,
    open: usize,
    closers: &'static [char],
    /// Dissolved without a warning when left unclosed.
    silent: bool,
}

/// Matches opening and closing delimiters. Returned pairs are sorted by
/// opening position and properly nested.
fn pair_delimiters(chars: &[char]) -> (Vec<Pair>, Vec<DelimiterWarning>) {
    let mut stack: Vec<Frame> = Vec::new();
    let mut pairs = Vec::new();
    let mut warnings = Vec::new();

    let frame = |kind, delimiter, open, closers, silent| Frame {
        kind,
        delimiter,
        open,
        closers,
        silent,
    };

    for (i, &c) in chars.iter().enumerate() {
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        let next = chars.get(i + 1).copied();
        let letters_around =
            prev.is_some_and(char::is_alphanumeric) && next.is_some_and(char::is_alphanumeric);

        match c {
            '(' => stack.push(frame(DelimiterKind::Parenthesis, c, i, &[')'], false)),
            '[' => stack.push(frame(DelimiterKind::Parenthesis, c, i, &[']'], false)),
            '{' => stack.push(frame(DelimiterKind::Parenthesis, c, i, &['}'], false)),
            '«' => stack.push(frame(DelimiterKind::Quote, c, i, &['»'], false)),
            '‹' => stack.push(frame(DelimiterKind::Quote, c, i, &['›'], false)),
            '„' => stack.push(frame(DelimiterKind::Quote, c, i, &['“', '”'], false)),
            '‘' => stack.push(frame(DelimiterKind::Quote, c, i, &['’'], true)),
            '“' => {
                if !close(&mut stack, c, i, &mut pairs, &mut warnings) {
                    stack.push(frame(DelimiterKind::Quote, c, i, &['”'], false));
                }
            }
            '"' => {
                if !close(&mut stack, c, i, &mut pairs, &mut warnings) {
                    stack.push(frame(DelimiterKind::Quote, c, i, &['"'], false));
                }
            }
            ')' | ']' | '}' | '»' | '›' | '”' => {
                if !close(&mut stack, c, i, &mut pairs, &mut warnings) {
                    warnings.push(DelimiterWarning {
                        kind: if matches!(c, ')' | ']' | '}') {
                            DelimiterKind::Parenthesis
                        } else {
                            DelimiterKind::Quote
                        },
                        delimiter: c,
                        offset: i,
                        problem: DelimiterProblem::Unopened,
                    });
                }
            }
            '’' if !letters_around => {
                close(&mut stack, c, i, &mut pairs, &mut warnings);
            }
            '\'' if !letters_around => {
                let can_close = prev.is_some_and(|p| !p.is_whitespace())
                    && !next.is_some_and(char::is_alphanumeric);
                let can_open = prev.is_none_or(|p| p.is_whitespace() || is_opening(p))
                    && next.is_some_and(char::is_alphanumeric);
                let closed = can_close && close(&mut stack, c, i, &mut pairs, &mut warnings);
                if !closed && can_open {
                    stack.push(frame(DelimiterKind::Quote, c, i, &['\''], true));
                }
            }
            '—' | '–'
                if prev.is_none_or(char::is_whitespace) && next.is_none_or(char::is_whitespace) =>
            {
                if !close(&mut stack, c, i, &mut pairs, &mut warnings) {
                    stack.push(frame(DelimiterKind::Dash, c, i, &['—', '–'], true));
                }
            }
            _ => {}
        }
    }
    while let Some(f) = stack.pop() {
        dissolve(f, &mut warnings);
    }
    pairs.sort_by_key(|p| p.open);
    (pairs, warnings)
}

/// Closes the innermost open frame expecting `c`, dissolving any frames
/// opened after it. Returns false when no frame expects `c`.
fn close(
    stack: &mut Vec<Frame>,
    c: char,
    at: usize,
    pairs: &mut Vec<Pair>,
    warnings: &mut Vec<DelimiterWarning>,
) -> bool {
    let Some(depth) = stack.iter().rposition(|f| f.closers.contains(&c)) else {
        return false;
    };
    while stack.len() > depth + 1 {
        let f = stack.pop().expect("non-empty");
        dissolve(f, warnings);
    }
    let f = stack.pop().expect("frame at depth");
    pairs.push(Pair {
        kind: f.kind,
        open: f.open,
        close: at,
    });
    true
}

fn dissolve(f: Frame, warnings: &mut Vec<DelimiterWarning>) {
    if !f.silent {
        warnings.push(DelimiterWarning {
            kind: f.kind,
            delimiter: f.delimiter,
            offset: f.open,
            problem: DelimiterProblem::Unclosed,
        });
    }
}

fn is_opening(c: char) -> bool {
    matches!(c, '(' | '[' | '{' | '«' | '‹' | '“' | '„' | '‘' | '"' | '—' | '–')
}

/// Turns the first qualifying colon of each node into a colon segment that
/// runs to the end of the node's content.
fn add_colon_segments(chars: &[char], arena: &mut Vec<Draft>, node: usize, allowed: bool) {
    if allowed {
        if let Some(colon) = find_colon(chars, arena, node) {
            let content_end = arena[node].content.end;
            let id = arena.len();
            let (kept, moved): (Vec<usize>, Vec<usize>) = arena[node]
                .children
                .iter()
                .partition(|&&c| arena[c].span.start < colon);
            arena.push(Draft {
                kind: DelimiterKind::Colon,
                span: Span::new(colon, content_end),
                content: Span::new(colon + 1, content_end),
                children: moved,
            });
            arena[node].children = kept;
            arena[node].children.push(id);
        }
    }
    let children = arena[node].children.clone();
    for child in children {
        let child_allowed = allowed && arena[child].kind != DelimiterKind::Colon;
        add_colon_segments(chars, arena, child, child_allowed);
    }
}

fn find_colon(chars: &[char], arena: &[Draft], node: usize) -> Option<usize> {
    let content = arena[node].content;
    let children = &arena[node].children;
    let child_at = |pos: usize| children.iter().find(|&&c| arena[c].span.contains(pos));

    let mut pos = content.start;
    while pos < content.end {
        if let Some(&child) = child_at(pos) {
            pos = arena[child].span.end;
            continue;
        }
        if chars[pos] == ':' && pos + 1 < content.end && chars[pos + 1].is_whitespace() {
            let mut next = pos + 1;
            while next < content.end && chars[next].is_whitespace() {
                next += 1;
            }
            let introduces_segment = children.iter().any(|&c| arena[c].span.start == next);
            let has_text = chars[next..content.end].iter().any(|&c| is_token_char(c));
            if !introduces_segment && has_text {
                return Some(pos);
            }
        }
        pos += 1;
    }
    None
}

fn assemble(
    arena: &[Draft],
    node: usize,
    tokens: &mut std::iter::Peekable<impl Iterator<Item = Token>>,
) -> SegmentTree {
    let draft = &arena[node];
    let mut children_ids = draft.children.clone();
    children_ids.sort_by_key(|&c| arena[c].span.start);

    let mut own_tokens = Vec::new();
    let mut children = Vec::with_capacity(children_ids.len());
    let mut next_child = children_ids.iter().peekable();
    while let Some(token) = tokens.peek() {
        if token.offset >= draft.span.end {
            break;
        }
        match next_child.peek() {
            Some(&&c) if token.offset >= arena[c].span.start => {
                children.push(assemble(arena, c, tokens));
                next_child.next();
            }
            _ => own_tokens.push(tokens.next().expect("peeked")),
        }
    }
    for &c in next_child {
        children.push(assemble(arena, c, tokens));
    }

    SegmentTree {
        kind: draft.kind,
        span: draft.span,
        own_tokens,
        children,
        warnings: Vec::new(),
    }
}
