//! `sentlang`: tag sentences with their languages, evaluate against a
//! labelled corpus, or validate lexicon data.

mod output;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sentlang::classifier::{classify_sentence, Diagnostic, TaggedSentence};
use sentlang::evaluator::{load_corpus, Accumulator};
use sentlang::lexicon::{parse_language_list, shipped_data_dir, DEFAULT_LANGUAGES};
use sentlang::tokenizer::{DelimiterProblem, ParagraphReader};
use sentlang::{split_sentences, LanguageId, LexiconSet};

#[derive(Parser)]
#[command(name = "sentlang", version, about = "Sentence-level language tagging")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Directory holding one sub-directory of data files per language.
    #[arg(long, global = true, value_name = "DIR")]
    lexicon_root: Option<PathBuf>,
    /// Comma-separated language codes, in tie-breaking display order.
    #[arg(long, global = true, value_name = "CODES")]
    languages: Option<String>,
    /// Worker threads; 1 keeps everything on the main thread.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Tag every sentence of a text.
    Tag {
        /// Input file; standard input when absent.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Also emit embedded segments (quotes, parentheses, dashes, colons).
        #[arg(long)]
        segments: bool,
        /// Also emit the per-language scores.
        #[arg(long)]
        scores: bool,
    },
    /// Evaluate against a `<code>\t<sentence>` corpus.
    Evaluate {
        #[arg(long, value_name = "TSV")]
        corpus: PathBuf,
        /// Write the machine-readable report here.
        #[arg(long, value_name = "PATH")]
        report_json: Option<PathBuf>,
    },
    /// Validate the data files and summarize them.
    LexiconCheck,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Tsv,
    Jsonl,
}

/// A failure with its exit status: 2 for bad configuration or data, 1 for
/// I/O.
enum Failure {
    Config(String),
    Io(String),
}

impl From<sentlang::Error> for Failure {
    fn from(e: sentlang::Error) -> Self {
        match e {
            sentlang::Error::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn io_failure(what: &str) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{what}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tag {
            input,
            format,
            segments,
            scores,
        } => run_tag(
            &cli.common,
            input.as_deref(),
            output::Options {
                format: *format,
                segments: *segments,
                scores: *scores,
            },
        ),
        Command::Evaluate {
            corpus,
            report_json,
        } => run_evaluate(&cli.common, corpus, report_json.as_deref()),
        Command::LexiconCheck => run_lexicon_check(&cli.common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(message)) => {
            eprintln!("sentlang: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Io(message)) => {
            eprintln!("sentlang: {message}");
            ExitCode::from(1)
        }
    }
}

impl Common {
    fn languages(&self) -> Result<Vec<LanguageId>, Failure> {
        match &self.languages {
            Some(list) => Ok(parse_language_list(list)?),
            None => Ok(DEFAULT_LANGUAGES.iter().map(|c| c.parse().unwrap()).collect()),
        }
    }

    fn root(&self) -> Result<PathBuf, Failure> {
        let root = self.lexicon_root.clone().unwrap_or_else(shipped_data_dir);
        if !root.is_dir() {
            return Err(Failure::Config(format!(
                "lexicon root {} is not a directory",
                root.display()
            )));
        }
        Ok(root)
    }

    fn load(&self) -> Result<LexiconSet, Failure> {
        Ok(LexiconSet::load(&self.root()?, &self.languages()?)?)
    }

    fn pool(&self) -> Result<Option<rayon::ThreadPool>, Failure> {
        match self.workers {
            0 => Err(Failure::Config("--workers must be at least 1".into())),
            1 => Ok(None),
            n => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(Some)
                .map_err(|e| Failure::Config(format!("cannot start workers: {e}"))),
        }
    }
}

/// Sentences handed to the workers at a time.
const BATCH: usize = 512;

fn run_tag(common: &Common, input: Option<&Path>, options: output::Options) -> Result<(), Failure> {
    let lex = common.load()?;
    let pool = common.pool()?;
    let (reader, source): (Box<dyn BufRead>, String) = match input {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Failure::Config(format!("cannot open {}: {e}", path.display())))?;
            (Box::new(BufReader::new(file)), path.display().to_string())
        }
        None => (Box::new(io::stdin().lock()), "<stdin>".to_string()),
    };

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut writer = output::Writer::new(&lex, options);
    let mut pending = Vec::new();
    for paragraph in ParagraphReader::new(reader) {
        let (offset, text) = paragraph.map_err(io_failure(&source))?;
        for sentence in split_sentences(&text, lex.abbreviations()) {
            pending.push((sentence.text, sentence.span.shifted(offset)));
        }
        if pending.len() >= BATCH {
            flush(&lex, &source, pool.as_ref(), &mut pending, &mut writer, &mut out)?;
        }
    }
    flush(&lex, &source, pool.as_ref(), &mut pending, &mut writer, &mut out)?;
    out.flush().map_err(io_failure("standard output"))
}

fn flush(
    lex: &LexiconSet,
    source: &str,
    pool: Option<&rayon::ThreadPool>,
    pending: &mut Vec<(String, sentlang::Span)>,
    writer: &mut output::Writer,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let classify = |(text, span): (String, sentlang::Span)| {
        let mut diagnostics = Vec::new();
        let tagged = classify_sentence(lex, source, text, span, &mut diagnostics);
        (tagged, diagnostics)
    };
    let batch = std::mem::take(pending);
    let results: Vec<(TaggedSentence, Vec<Diagnostic>)> = match pool {
        Some(pool) => pool.install(|| batch.into_par_iter().map(classify).collect()),
        None => batch.into_iter().map(classify).collect(),
    };
    for (sentence, diagnostics) in results {
        for d in diagnostics {
            report_diagnostic(&d);
        }
        writer
            .write(out, &sentence)
            .map_err(io_failure("standard output"))?;
    }
    Ok(())
}

fn report_diagnostic(d: &Diagnostic) {
    let w = &d.warning;
    eprintln!(
        "{}:{}..{}: warning: {} {} `{}` at offset {}",
        d.source_name,
        d.sentence.start,
        d.sentence.end,
        match w.problem {
            DelimiterProblem::Unclosed => "unclosed",
            DelimiterProblem::Unopened => "unopened",
        },
        w.kind.as_str(),
        w.delimiter,
        d.sentence.start + w.offset
    );
}

fn run_evaluate(common: &Common, corpus: &Path, report_json: Option<&Path>) -> Result<(), Failure> {
    let lex = common.load()?;
    let pool = common.pool()?;
    if !corpus.is_file() {
        return Err(Failure::Config(format!("corpus {} not found", corpus.display())));
    }
    let entries = load_corpus(corpus)?;
    if entries.is_empty() {
        return Err(Failure::Config(format!("corpus {} is empty", corpus.display())));
    }

    let shard = |(chunk_index, chunk): (usize, &[sentlang::CorpusEntry])| {
        let mut acc = Accumulator::default();
        for (i, entry) in chunk.iter().enumerate() {
            acc.add(&lex, chunk_index * BATCH + i, entry)?;
        }
        Ok::<_, sentlang::Error>(acc)
    };
    let parts: Vec<Accumulator> = match pool {
        Some(pool) => pool.install(|| {
            entries
                .par_chunks(BATCH)
                .enumerate()
                .map(shard)
                .collect::<Result<_, _>>()
        })?,
        None => entries
            .chunks(BATCH)
            .enumerate()
            .map(shard)
            .collect::<Result<_, _>>()?,
    };
    let mut acc = Accumulator::default();
    for part in parts {
        acc.merge(part);
    }
    let report = acc.finish(&lex);

    let mut out = io::stdout().lock();
    let text = report.render_table();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_failure("standard output"))?;

    if let Some(path) = report_json {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(io_failure(&path.display().to_string()))?;
    }
    Ok(())
}

fn run_lexicon_check(common: &Common) -> Result<(), Failure> {
    let lex = common.load()?;
    let mut text = String::new();
    for s in lex.summaries() {
        if s.words == 0 {
            eprintln!("sentlang: warning: `{}` has no grammatical words", s.language);
        }
        let exclusive: String = s.exclusive.iter().collect();
        text.push_str(&format!(
            "{:<6} words {:>4}  letters {:>3}  exclusive {}\n",
            s.language.as_str(),
            s.words,
            s.letters,
            if exclusive.is_empty() { "-" } else { &exclusive }
        ));
    }
    let shared = lex.shared_words();
    text.push_str(&format!("shared words {}\n", shared.len()));
    for (word, languages) in shared {
        let codes: Vec<&str> = languages.iter().map(|l| l.as_str()).collect();
        text.push_str(&format!("  {word:<12} {}\n", codes.join(",")));
    }
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_failure("standard output"))
}
