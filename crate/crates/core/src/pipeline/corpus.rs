//! Tagged corpus files: one sentence per line, tokens separated by spaces,
//! each token `surface|lemma|TAG` with `|` in any field escaped as `\|`.
//! Labeled corpora carry a fourth field, `surface|lemma|TAG|label`.

use std::path::Path;

use crate::error::{read_to_string, Error, Result};
use crate::lexicon::{Pos, WordKey};

/// Penn Treebank part-of-speech tags plus its punctuation tags.
pub const PENN_TAGS: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "``", "''", "-LRB-", "-RRB-",
    "#", "$", "HYPH", "NFP",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Always lowercase.
    pub lemma: String,
    pub tag: String,
    /// Position of the token in its input line, counting dropped tokens.
    pub source_index: usize,
}

impl Token {
    /// Noun or verb class of the tag; proper nouns have none.
    pub fn coarse(&self) -> Option<Pos> {
        coarse_pos(&self.tag)
    }

    pub fn key(&self) -> Option<WordKey> {
        self.coarse().map(|p| WordKey::new(self.lemma.clone(), p))
    }

    pub fn is_proper_noun(&self) -> bool {
        matches!(self.tag.as_str(), "NNP" | "NNPS")
    }

    /// Form used for embedding lookups.
    pub fn word(&self) -> String {
        self.surface.to_lowercase()
    }
}

pub fn coarse_pos(tag: &str) -> Option<Pos> {
    match tag {
        "NN" | "NNS" => Some(Pos::Noun),
        t if t.starts_with("VB") => Some(Pos::Verb),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProperNouns {
    Drop,
    Keep,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedCorpus {
    pub sentences: Vec<Vec<Token>>,
}

impl TaggedCorpus {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

/// Splits one token on unescaped pipes and unescapes `\|` and `\\`.
/// Other backslashes are kept as they are.
fn split_fields(token: &str) -> Vec<String> {
    let mut fields = vec![String::new()];
    let mut chars = token.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' if matches!(chars.peek(), Some('|') | Some('\\')) => {
                fields.last_mut().unwrap().push(chars.next().unwrap());
            }
            '|' => fields.push(String::new()),
            _ => fields.last_mut().unwrap().push(c),
        }
    }
    fields
}

pub fn escape_field(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        if c == '|' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Byte offsets and text of the space-separated tokens of a line.
fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split(' ')
        .scan(0usize, |offset, tok| {
            let start = *offset;
            *offset += tok.len() + 1;
            Some((start, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

/// Tokens of one line, each with its label field when one is expected.
type RawSentence = Vec<(Token, Option<String>)>;

fn parse_lines(text: &str, fields: usize, proper: ProperNouns) -> Result<Vec<RawSentence>> {
    let mut sentences = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut sentence = Vec::new();
        for (index, (offset, raw)) in tokens_with_columns(line).enumerate() {
            let col = line[..offset].chars().count() + 1;
            let mut parts = split_fields(raw);
            if parts.len() != fields {
                return Err(Error::parse_at(
                    ln + 1,
                    col,
                    format!(
                        "token `{raw}` has {} fields, expected {fields}",
                        parts.len()
                    ),
                ));
            }
            if parts.iter().take(3).any(String::is_empty) {
                return Err(Error::parse_at(
                    ln + 1,
                    col,
                    format!("token `{raw}` has an empty field"),
                ));
            }
            let label = if fields == 4 { parts.pop() } else { None };
            let tag = parts.pop().unwrap();
            if !PENN_TAGS.contains(&tag.as_str()) {
                return Err(Error::parse_at(
                    ln + 1,
                    col,
                    format!("unknown POS tag `{tag}`"),
                ));
            }
            let lemma = parts.pop().unwrap().to_lowercase();
            let surface = parts.pop().unwrap();
            let token = Token {
                surface,
                lemma,
                tag,
                source_index: index,
            };
            if proper == ProperNouns::Drop && token.is_proper_noun() {
                continue;
            }
            sentence.push((token, label));
        }
        sentences.push(sentence);
    }
    Ok(sentences)
}

pub fn parse_corpus(text: &str, proper: ProperNouns) -> Result<TaggedCorpus> {
    let sentences = parse_lines(text, 3, proper)?
        .into_iter()
        .map(|s| s.into_iter().map(|(t, _)| t).collect())
        .collect();
    Ok(TaggedCorpus { sentences })
}

/// Reads a corpus file, dropping proper nouns.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<TaggedCorpus> {
    parse_corpus(&read_to_string(path.as_ref())?, ProperNouns::Drop)
}

pub fn load_corpus_with(path: impl AsRef<Path>, proper: ProperNouns) -> Result<TaggedCorpus> {
    parse_corpus(&read_to_string(path.as_ref())?, proper)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledToken {
    pub token: Token,
    pub label: String,
}

/// Parses a labeled corpus. Every token is kept, proper nouns included.
pub fn parse_labeled(text: &str) -> Result<Vec<Vec<LabeledToken>>> {
    parse_lines(text, 4, ProperNouns::Keep)?
        .into_iter()
        .enumerate()
        .map(|(ln, s)| {
            s.into_iter()
                .map(|(token, label)| match label {
                    Some(label) if !label.is_empty() => Ok(LabeledToken { token, label }),
                    _ => Err(Error::parse(
                        ln + 1,
                        format!("token `{}` has an empty label", token.surface),
                    )),
                })
                .collect()
        })
        .collect()
}

pub fn load_labeled(path: impl AsRef<Path>) -> Result<Vec<Vec<LabeledToken>>> {
    parse_labeled(&read_to_string(path.as_ref())?)
}

pub fn format_token(token: &Token, label: Option<&str>) -> String {
    let mut out = format!(
        "{}|{}|{}",
        escape_field(&token.surface),
        escape_field(&token.lemma),
        escape_field(&token.tag)
    );
    if let Some(l) = label {
        out.push('|');
        out.push_str(&escape_field(l));
    }
    out
}

pub fn format_corpus(corpus: &TaggedCorpus) -> String {
    let mut out = String::new();
    for s in &corpus.sentences {
        let toks: Vec<String> = s.iter().map(|t| format_token(t, None)).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_labeled(sentences: &[Vec<LabeledToken>]) -> String {
    let mut out = String::new();
    for s in sentences {
        let toks: Vec<String> = s
            .iter()
            .map(|t| format_token(&t.token, Some(&t.label)))
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}
