use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

fn run(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sentlang"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // The binary may exit before reading its input.
    let _ = child.stdin.take().unwrap().write_all(stdin);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Word lists read straight from the data files.
fn raw_words(code: &str) -> Vec<String> {
    fs::read_to_string(data_dir().join(code).join("words.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// Tag of an ASCII sentence by counting listed words; ASCII letters are
/// never exclusive, so word counts are the whole score.
fn oracle_tag(sentence: &str) -> String {
    let codes = ["fr", "en", "es", "de"];
    let lists: Vec<Vec<String>> = codes.iter().map(|c| raw_words(c)).collect();
    let words: Vec<String> = sentence
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect();
    let scores: Vec<usize> = lists
        .iter()
        .map(|list| words.iter().filter(|w| list.contains(w)).count())
        .collect();
    let max = *scores.iter().max().unwrap();
    if max == 0 {
        return "und".into();
    }
    let mut tag: Vec<&str> = codes
        .iter()
        .zip(&scores)
        .filter(|(_, &s)| s == max)
        .map(|(c, _)| *c)
        .collect();
    tag.sort_unstable();
    tag.join("+")
}

const BILINGUAL: &str = "Il est parti avec elle dans la maison de son pere.\n\
                         She said that they would come back with us tomorrow.\n";

#[test]
fn tsv_tags_a_bilingual_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.txt");
    fs::write(&path, BILINGUAL).unwrap();
    let o = run(&["tag", "--format", "tsv", path.to_str().unwrap()], b"");
    assert!(o.status.success(), "{}", stderr(&o));
    let records: Vec<Vec<String>> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').map(String::from).collect())
        .collect();
    assert_eq!(records.len(), 2);
    let expected: Vec<String> = BILINGUAL.lines().map(oracle_tag).collect();
    assert_eq!(expected, ["fr", "en"]);
    assert_eq!(records[0][5], expected[0]);
    assert_eq!(records[1][5], expected[1]);
    assert_eq!(records[0][3], "0");
    let second_start = BILINGUAL.lines().next().unwrap().chars().count() + 1;
    assert_eq!(records[1][3], second_start.to_string());
}

#[test]
fn empty_input_gives_no_records() {
    for format in ["plain", "tsv", "jsonl"] {
        let o = run(&["tag", "--format", format], b"");
        assert!(o.status.success());
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn unknown_language_exits_2_naming_it() {
    let o = run(&["tag", "--languages", "fr,xx"], b"Bonjour.");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("xx"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn bad_paths_exit_2() {
    let o = run(&["tag", "/nonexistent/input.txt"], b"");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["tag", "--lexicon-root", "/nonexistent"], b"x");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["evaluate", "--corpus", "/nonexistent.tsv"], b"");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreadable_input_exits_1() {
    let o = run(&["tag"], b"Hello there.\n\xff\xfe broken\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

const MIXED: &str = "Il m'a dit : « the cat sat on the mat » et il est parti. \
                     The house is big (la casa es grande).\n\n\
                     Der Hund schläft im Garten.\n\nok\n\n¿Dónde está el baño?";

#[test]
fn jsonl_records_parse_and_match_sentences() {
    let o = run(&["tag", "--format", "jsonl", "--segments", "--scores"], MIXED.as_bytes());
    assert!(o.status.success());
    let text = stdout(&o);
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 5);
    let chars: Vec<char> = MIXED.chars().collect();
    for r in &records {
        let start = r["start"].as_u64().unwrap() as usize;
        let end = r["end"].as_u64().unwrap() as usize;
        let slice: String = chars[start..end].iter().collect();
        assert_eq!(r["text"].as_str().unwrap(), slice);
        assert!(r["scores"].is_object());
        assert!(r["tag"].is_array());
    }
    assert_eq!(records[0]["tag"], serde_json::json!(["fr"]));
    assert_eq!(records[0]["segments"][0]["kind"], "quote");
    assert_eq!(records[0]["segments"][0]["tag"], serde_json::json!(["en"]));
    assert_eq!(records[3]["tag"], serde_json::json!([]));
    assert_eq!(records[4]["tag"], serde_json::json!(["es"]));
}

/// Sentence tags per format, as sorted `+`-joined strings.
fn tags(format: &str, workers: &str) -> Vec<String> {
    let o = run(&["tag", "--format", format, "--workers", workers], MIXED.as_bytes());
    assert!(o.status.success());
    stdout(&o)
        .lines()
        .map(|line| match format {
            "plain" => line.split(' ').next().unwrap().to_string(),
            "tsv" => line.split('\t').nth(5).unwrap().to_string(),
            _ => {
                let v: serde_json::Value = serde_json::from_str(line).unwrap();
                let codes: Vec<&str> = v["tag"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|c| c.as_str().unwrap())
                    .collect();
                if codes.is_empty() {
                    "und".to_string()
                } else {
                    codes.join("+")
                }
            }
        })
        .collect()
}

#[test]
fn formats_agree_on_tags() {
    let plain = tags("plain", "1");
    assert_eq!(plain.len(), 5);
    assert_eq!(plain, tags("tsv", "1"));
    assert_eq!(plain, tags("jsonl", "1"));
    assert_eq!(plain[3], "und");
}

#[test]
fn workers_preserve_output() {
    let mut text = String::new();
    for i in 0..1500 {
        text.push_str(match i % 3 {
            0 => "Le chat dort sur le lit. ",
            1 => "The dog is in the garden (der Hund ist im Garten). ",
            _ => "¿Dónde está la estación?\n\n",
        });
    }
    let args = ["tag", "--format", "tsv", "--segments"];
    let single = run(&args, text.as_bytes());
    let mut parallel_args = args.to_vec();
    parallel_args.extend(["--workers", "4"]);
    let parallel = run(&parallel_args, text.as_bytes());
    assert!(single.status.success() && parallel.status.success());
    assert_eq!(single.stdout, parallel.stdout);
    assert!(stdout(&single).lines().count() >= 1500);
}

#[test]
fn unbalanced_delimiters_warn_on_stderr_only() {
    let o = run(&["tag", "--format", "tsv"], "Il a dit « bonjour et puis rien.".as_bytes());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stderr(&o).contains("unclosed"), "{}", stderr(&o));
}

/// Copies the shipped data of the given languages into a fresh directory.
fn copy_data(codes: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for code in codes {
        let target = dir.path().join(code);
        fs::create_dir(&target).unwrap();
        for entry in fs::read_dir(data_dir().join(code)).unwrap() {
            let entry = entry.unwrap();
            fs::copy(entry.path(), target.join(entry.file_name())).unwrap();
        }
    }
    dir
}

#[test]
fn lexicon_check_reports_shipped_counts() {
    let o = run(&["lexicon-check"], b"");
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut counts = BTreeMap::new();
    for line in out.lines().take(4) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields[1], "words");
        counts.insert(fields[0].to_string(), fields[2].parse::<f64>().unwrap());
    }
    for (code, target) in [("fr", 301.0), ("en", 186.0), ("es", 204.0), ("de", 158.0)] {
        let n = counts[code];
        assert!((n - target).abs() <= 0.15 * target, "{code}: {n} vs {target}");
    }
    assert!(out.contains("exclusive"));
    assert!(out.contains("shared words"));
    assert!(out.lines().any(|l| l.trim_start().starts_with("de ") && l.contains("fr")));
}

#[test]
fn lexicon_check_accepts_an_empty_word_list_with_a_warning() {
    let dir = copy_data(&["fr", "en"]);
    fs::write(dir.path().join("en/words.txt"), "# nothing yet\n").unwrap();
    let root = dir.path().to_str().unwrap();
    let o = run(&["lexicon-check", "--lexicon-root", root, "--languages", "fr,en"], b"");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("en") && l.contains("words    0")));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn lexicon_check_reports_parse_errors_with_line() {
    let dir = copy_data(&["fr", "en"]);
    fs::write(dir.path().join("en/words.txt"), "# list\nthe\ntwo words\n").unwrap();
    let root = dir.path().to_str().unwrap();
    let o = run(&["lexicon-check", "--lexicon-root", root, "--languages", "fr,en"], b"");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("words.txt:3"), "{}", stderr(&o));
}

#[test]
fn evaluate_prints_a_table_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    fs::write(
        &corpus,
        "# sample\nfr\tIl est parti avec elle dans la maison de son père hier.\n\
         en\tShe said that they would come back with us tomorrow.\n\
         en\tok\n\
         en\tOrbi et Urbi\n",
    )
    .unwrap();
    let json = dir.path().join("report.json");
    let o = run(
        &[
            "evaluate",
            "--corpus",
            corpus.to_str().unwrap(),
            "--report-json",
            json.to_str().unwrap(),
            "--workers",
            "2",
        ],
        b"",
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("decisive"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["total"]["n_sentences"], 4);
    assert_eq!(report["per_language"]["en"]["n_undetermined"], 1);
    assert_eq!(report["per_language"]["fr"]["n_unique_correct"], 1);
    assert_eq!(report["decisive_length"]["fr"], 1);
    let errors = report["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["category"], "unexpected-language");
    assert_eq!(errors[0]["line"], 5);
}

#[test]
fn evaluate_rejects_malformed_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    fs::write(&corpus, "fr\tBonjour.\nno tab here\n").unwrap();
    let o = run(&["evaluate", "--corpus", corpus.to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2"), "{}", stderr(&o));

    fs::write(&corpus, "it\tCiao a tutti.\n").unwrap();
    let o = run(&["evaluate", "--corpus", corpus.to_str().unwrap()], b"");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("it"));
}
