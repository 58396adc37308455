//! Sense inventory: word types with their ordered senses, glosses, usage
//! examples and sense-graph links.
//!
//! The inventory is stored as JSON Lines, one word type per line:
//!
//! ```text
//! {"lemma": "rock", "pos": "noun", "senses": [{"id": "rock.n.01",
//!   "definition": ["a","lump","of","stone"], "examples": [["he","threw","a","rock"]],
//!   "neighbors": ["stone.n.01"]}]}
//! ```
//!
//! Senses are listed most frequent first; downstream code relies on that
//! order (fallback labels, the sense cap of the selection layer).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
        }
    }

    /// WordNet-style one-letter tag.
    pub fn short(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noun" | "n" => Ok(Pos::Noun),
            "verb" | "v" => Ok(Pos::Verb),
            other => Err(Error::InvalidInput(format!(
                "unsupported part of speech `{other}`"
            ))),
        }
    }
}

/// Identifies a word type: lemma plus coarse part of speech. Rendered as
/// `lemma.pos`, e.g. `rock.noun`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordKey {
    pub lemma: String,
    pub pos: Pos,
}

impl WordKey {
    pub fn new(lemma: impl Into<String>, pos: Pos) -> Self {
        WordKey {
            lemma: lemma.into(),
            pos,
        }
    }

    /// Induced-sense label for cluster `index`: `lemma.pos.index`.
    pub fn sense_label(&self, index: usize) -> String {
        format!("{}.{}.{}", self.lemma, self.pos, index)
    }
}

impl fmt::Display for WordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.lemma, self.pos)
    }
}

impl FromStr for WordKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lemma, pos) = s
            .rsplit_once('.')
            .ok_or_else(|| Error::InvalidInput(format!("word key `{s}` is not `lemma.pos`")))?;
        if lemma.is_empty() {
            return Err(Error::InvalidInput(format!(
                "word key `{s}` has an empty lemma"
            )));
        }
        Ok(WordKey::new(lemma, pos.parse()?))
    }
}

impl Serialize for WordKey {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WordKey {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sense {
    pub id: String,
    #[serde(default)]
    pub definition: Vec<String>,
    #[serde(default)]
    pub examples: Vec<Vec<String>>,
    #[serde(default)]
    pub neighbors: Vec<String>,
}

impl Sense {
    pub fn has_definition(&self) -> bool {
        !self.definition.is_empty()
    }

    pub fn has_example(&self) -> bool {
        self.examples.iter().any(|e| !e.is_empty())
    }

    /// The example used for vectorization: the first non-empty one.
    pub fn first_example(&self) -> Option<&[String]> {
        self.examples
            .iter()
            .find(|e| !e.is_empty())
            .map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordType {
    pub lemma: String,
    pub pos: Pos,
    pub senses: Vec<Sense>,
}

impl WordType {
    pub fn key(&self) -> WordKey {
        WordKey::new(self.lemma.clone(), self.pos)
    }

    pub fn senses_with_definition(&self) -> Vec<&Sense> {
        self.senses.iter().filter(|s| s.has_definition()).collect()
    }

    pub fn senses_with_example(&self) -> Vec<&Sense> {
        self.senses.iter().filter(|s| s.has_example()).collect()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.senses.len() >= 2
    }
}

/// Immutable, indexed sense inventory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseInventory {
    entries: BTreeMap<WordKey, WordType>,
    index: HashMap<String, (WordKey, usize)>,
}

impl SenseInventory {
    pub fn from_word_types(types: impl IntoIterator<Item = WordType>) -> Result<Self> {
        let mut inv = SenseInventory::default();
        for wt in types {
            inv.insert(wt, None)?;
        }
        inv.check_neighbors()?;
        Ok(inv)
    }

    fn insert(&mut self, wt: WordType, line: Option<usize>) -> Result<()> {
        let fail = |msg: String| match line {
            Some(l) => Error::parse(l, msg),
            None => Error::InvalidInput(msg),
        };
        if wt.lemma.is_empty() {
            return Err(fail("empty lemma".into()));
        }
        if wt.senses.is_empty() {
            return Err(fail(format!("`{}` has no senses", wt.lemma)));
        }
        let key = wt.key();
        if self.entries.contains_key(&key) {
            return Err(Error::Duplicate(format!(
                "word type {key}{}",
                line.map(|l| format!(" (line {l})")).unwrap_or_default()
            )));
        }
        let mut local = HashSet::new();
        for sense in &wt.senses {
            if sense.id.is_empty() {
                return Err(fail(format!("`{key}` has a sense with an empty id")));
            }
            if !local.insert(sense.id.as_str()) {
                return Err(fail(format!("`{key}` repeats sense id `{}`", sense.id)));
            }
            if self.index.contains_key(&sense.id) {
                return Err(Error::Duplicate(format!("sense id {}", sense.id)));
            }
            if sense.neighbors.iter().any(|n| n == &sense.id) {
                return Err(fail(format!(
                    "sense `{}` lists itself as a neighbor",
                    sense.id
                )));
            }
            let tokens = sense
                .definition
                .iter()
                .chain(sense.examples.iter().flatten());
            if tokens.into_iter().any(|t| t.is_empty()) {
                return Err(fail(format!(
                    "sense `{}` contains an empty token",
                    sense.id
                )));
            }
        }
        for (i, sense) in wt.senses.iter().enumerate() {
            self.index.insert(sense.id.clone(), (key.clone(), i));
        }
        self.entries.insert(key, wt);
        Ok(())
    }

    fn check_neighbors(&self) -> Result<()> {
        let mut dangling: Vec<String> = self
            .entries
            .values()
            .flat_map(|wt| &wt.senses)
            .flat_map(|s| &s.neighbors)
            .filter(|n| !self.index.contains_key(n.as_str()))
            .cloned()
            .collect();
        if dangling.is_empty() {
            return Ok(());
        }
        dangling.sort();
        dangling.dedup();
        Err(Error::DanglingNeighbor(dangling))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &WordKey) -> Option<&WordType> {
        self.entries.get(key)
    }

    pub fn lookup(&self, lemma: &str, pos: Pos) -> Option<&WordType> {
        // BTreeMap lookups need an owned key.
        self.entries.get(&WordKey::new(lemma, pos))
    }

    /// Resolves a global sense id to its word type and sense.
    pub fn sense(&self, id: &str) -> Option<(&WordType, &Sense)> {
        let (key, i) = self.index.get(id)?;
        let wt = &self.entries[key];
        Some((wt, &wt.senses[*i]))
    }

    /// Word types in lemma-then-pos order.
    pub fn word_types(&self) -> impl Iterator<Item = &WordType> {
        self.entries.values()
    }

    /// Serializes back to the JSON Lines format.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for wt in self.entries.values() {
            out.push_str(&serde_json::to_string(wt).expect("word types always serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn parse_inventory(text: &str) -> Result<SenseInventory> {
    let mut inv = SenseInventory::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let wt: WordType = serde_json::from_str(line)
            .map_err(|e| Error::parse_at(line_no, e.column(), e.to_string()))?;
        inv.insert(wt, Some(line_no))?;
    }
    inv.check_neighbors()?;
    Ok(inv)
}

pub fn load_inventory(path: impl AsRef<Path>) -> Result<SenseInventory> {
    parse_inventory(&read_to_string(path.as_ref())?)
}

/// Word types with at least `min_senses` senses (values below 2 are raised
/// to 2), in lemma-then-pos order.
pub fn ambiguous_types(inv: &SenseInventory, min_senses: usize) -> Vec<&WordType> {
    let min = min_senses.max(2);
    inv.word_types()
        .filter(|wt| wt.senses.len() >= min)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sense(id: &str, def: &[&str], ex: &[&[&str]], nb: &[&str]) -> Sense {
        Sense {
            id: id.into(),
            definition: def.iter().map(|s| s.to_string()).collect(),
            examples: ex
                .iter()
                .map(|e| e.iter().map(|s| s.to_string()).collect())
                .collect(),
            neighbors: nb.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn empty_file() {
        let inv = parse_inventory("").unwrap();
        assert!(inv.is_empty());
        assert!(ambiguous_types(&inv, 2).is_empty());
    }

    #[test]
    fn one_record_keeps_sense_order() {
        let text = r#"{"lemma": "rock", "pos": "noun", "senses": [{"id": "rock.n.01", "definition": ["a","lump","of","stone"], "examples": [["he","threw","a","rock"]]}, {"id": "rock.n.02", "definition": ["music"]}]}"#;
        let inv = parse_inventory(text).unwrap();
        assert_eq!(inv.len(), 1);
        let wt = inv.lookup("rock", Pos::Noun).unwrap();
        let ids: Vec<_> = wt.senses.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["rock.n.01", "rock.n.02"]);
        assert_eq!(inv.sense("rock.n.02").unwrap().1.definition, ["music"]);
    }

    #[test]
    fn dangling_neighbor_is_named() {
        let text = r#"{"lemma": "go", "pos": "verb", "senses": [{"id": "go.v.01", "neighbors": ["x.v.99"]}]}"#;
        let err = parse_inventory(text).unwrap_err();
        assert!(matches!(err, Error::DanglingNeighbor(ref ids) if ids == &["x.v.99"]));
        assert!(err.to_string().contains("x.v.99"));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text =
            "{\"lemma\": \"a\", \"pos\": \"noun\", \"senses\": [{\"id\": \"a.n.01\"}]}\n{oops";
        match parse_inventory(text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_other_pos_and_duplicates() {
        let adj = r#"{"lemma": "big", "pos": "adj", "senses": [{"id": "big.a.01"}]}"#;
        assert!(matches!(
            parse_inventory(adj),
            Err(Error::Parse { line: 1, .. })
        ));

        let dup = "{\"lemma\": \"a\", \"pos\": \"noun\", \"senses\": [{\"id\": \"a.n.01\"}]}\n\
                   {\"lemma\": \"a\", \"pos\": \"noun\", \"senses\": [{\"id\": \"a.n.02\"}]}";
        assert!(matches!(parse_inventory(dup), Err(Error::Duplicate(_))));
    }

    #[test]
    fn rejects_self_loops_and_empty_tokens() {
        let wt = WordType {
            lemma: "a".into(),
            pos: Pos::Noun,
            senses: vec![sense("a.n.01", &[], &[], &["a.n.01"])],
        };
        assert!(SenseInventory::from_word_types([wt]).is_err());
        let wt = WordType {
            lemma: "a".into(),
            pos: Pos::Noun,
            senses: vec![sense("a.n.01", &["x", ""], &[], &[])],
        };
        assert!(SenseInventory::from_word_types([wt]).is_err());
    }

    #[test]
    fn ambiguity_filter() {
        let deal = WordType {
            lemma: "deal".into(),
            pos: Pos::Verb,
            senses: vec![
                sense("deal.v.01", &[], &[], &[]),
                sense("deal.v.02", &[], &[], &[]),
                sense("deal.v.03", &[], &[], &[]),
            ],
        };
        let cat = WordType {
            lemma: "cat".into(),
            pos: Pos::Noun,
            senses: vec![sense("cat.n.01", &[], &[], &[])],
        };
        let inv = SenseInventory::from_word_types([deal, cat]).unwrap();
        let amb: Vec<_> = ambiguous_types(&inv, 2)
            .iter()
            .map(|w| w.lemma.as_str())
            .collect();
        assert_eq!(amb, ["deal"]);
        assert!(ambiguous_types(&inv, 4).is_empty());
    }

    #[test]
    fn definition_and_example_filters() {
        let wt = WordType {
            lemma: "w".into(),
            pos: Pos::Noun,
            senses: vec![
                sense("w.1", &["d"], &[], &[]),
                sense("w.2", &["d"], &[&["x", "w"]], &[]),
                sense("w.3", &["d"], &[], &[]),
                sense("w.4", &["d"], &[&["w", "y"]], &[]),
            ],
        };
        assert_eq!(wt.senses_with_definition().len(), 4);
        let ex: Vec<_> = wt
            .senses_with_example()
            .iter()
            .map(|s| s.id.as_str())
            .collect();
        assert_eq!(ex, ["w.2", "w.4"]);

        let bare = WordType {
            lemma: "b".into(),
            pos: Pos::Noun,
            senses: vec![sense("b.1", &[], &[], &[])],
        };
        assert!(bare.senses_with_example().is_empty());
    }

    #[test]
    fn word_key_round_trip() {
        let k: WordKey = "st.john.noun".parse().unwrap();
        assert_eq!(k.lemma, "st.john");
        assert_eq!(k.to_string(), "st.john.noun");
        assert_eq!(k.sense_label(2), "st.john.noun.2");
        assert!("rock".parse::<WordKey>().is_err());
    }
}
