//! Serialization of tagged sentences in the three output formats.

use std::io::{self, Write};

use serde_json::{json, Map, Value};
use sentlang::{LexiconSet, TaggedSentence, TaggedTree};

use crate::Format;

#[derive(Clone, Copy)]
pub struct Options {
    pub format: Format,
    pub segments: bool,
    pub scores: bool,
}

pub struct Writer<'a> {
    lex: &'a LexiconSet,
    options: Options,
    index: usize,
}

/// Words of a node and all its descendants.
fn subtree_words(tree: &TaggedTree) -> usize {
    tree.tag.word_count + tree.children.iter().map(subtree_words).sum::<usize>()
}

/// Tabs and line breaks become spaces so that a record stays on one line.
fn one_line(text: &str) -> String {
    text.chars()
        .map(|c| if matches!(c, '\t' | '\n' | '\r') { ' ' } else { c })
        .collect()
}

impl<'a> Writer<'a> {
    pub fn new(lex: &'a LexiconSet, options: Options) -> Self {
        Self {
            lex,
            options,
            index: 0,
        }
    }

    pub fn write(&mut self, out: &mut impl Write, sentence: &TaggedSentence) -> io::Result<()> {
        let chars: Vec<char> = sentence.text.chars().collect();
        let base = sentence.span.start;
        match self.options.format {
            Format::Plain => self.plain(out, &sentence.tree, &chars, base, 0, "")?,
            Format::Tsv => self.tsv(out, &sentence.tree, &chars, base, "0")?,
            Format::Jsonl => {
                let record = self.json(&sentence.tree, &chars, base);
                serde_json::to_writer(&mut *out, &record)?;
                out.write_all(b"\n")?;
            }
        }
        self.index += 1;
        Ok(())
    }

    fn text(chars: &[char], tree: &TaggedTree) -> String {
        chars[tree.span.start..tree.span.end].iter().collect()
    }

    fn score_pairs(&self, tree: &TaggedTree) -> Vec<String> {
        tree.likelihood
            .named(self.lex)
            .map(|(l, s)| format!("{l}={s}"))
            .collect()
    }

    fn plain(
        &self,
        out: &mut impl Write,
        tree: &TaggedTree,
        chars: &[char],
        base: usize,
        depth: usize,
        label: &str,
    ) -> io::Result<()> {
        let indent = "  ".repeat(depth);
        let scores = if self.options.scores {
            format!(" [{}]", self.score_pairs(tree).join(" "))
        } else {
            String::new()
        };
        writeln!(
            out,
            "{indent}{label}{} {}..{} {}w{scores} {}",
            tree.tag,
            base + tree.span.start,
            base + tree.span.end,
            subtree_words(tree),
            one_line(&Self::text(chars, tree)),
        )?;
        if self.options.segments {
            for child in &tree.children {
                let label = format!("{}: ", child.kind.as_str());
                self.plain(out, child, chars, base, depth + 1, &label)?;
            }
        }
        Ok(())
    }

    fn tsv(
        &self,
        out: &mut impl Write,
        tree: &TaggedTree,
        chars: &[char],
        base: usize,
        path: &str,
    ) -> io::Result<()> {
        let mut fields = vec![
            self.index.to_string(),
            path.to_string(),
            tree.kind.as_str().to_string(),
            (base + tree.span.start).to_string(),
            (base + tree.span.end).to_string(),
            tree.tag.to_string(),
            subtree_words(tree).to_string(),
        ];
        if self.options.scores {
            fields.push(self.score_pairs(tree).join(","));
        }
        fields.push(one_line(&Self::text(chars, tree)));
        writeln!(out, "{}", fields.join("\t"))?;
        if self.options.segments {
            for (i, child) in tree.children.iter().enumerate() {
                self.tsv(out, child, chars, base, &format!("{path}.{i}"))?;
            }
        }
        Ok(())
    }

    fn json(&self, tree: &TaggedTree, chars: &[char], base: usize) -> Value {
        let mut record = Map::new();
        if tree.kind == sentlang::tokenizer::DelimiterKind::Root {
            record.insert("sentence".into(), json!(self.index));
        } else {
            record.insert("kind".into(), json!(tree.kind.as_str()));
        }
        record.insert("start".into(), json!(base + tree.span.start));
        record.insert("end".into(), json!(base + tree.span.end));
        record.insert("tag".into(), json!(tree.tag.sorted_codes()));
        record.insert("words".into(), json!(subtree_words(tree)));
        record.insert("text".into(), json!(Self::text(chars, tree)));
        if self.options.scores {
            let scores: Map<String, Value> = tree
                .likelihood
                .named(self.lex)
                .map(|(l, s)| (l.to_string(), json!(s)))
                .collect();
            record.insert("scores".into(), Value::Object(scores));
        }
        if self.options.segments {
            let children: Vec<Value> = tree
                .children
                .iter()
                .map(|c| self.json(c, chars, base))
                .collect();
            record.insert("segments".into(), Value::Array(children));
        }
        Value::Object(record)
    }
}
