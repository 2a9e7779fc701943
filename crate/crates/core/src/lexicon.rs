// SPDX-License-Identifier: Apache-2.0

//! Lexicon files: words with their pregroup type and internal wiring.
//!
//! ```toml
//! alphabet = ["n", "s"]   # optional; types may only use these
//! target = "s"            # optional sentence type, default "s"
//!
//! [words.Alice]
//! type = "n"
//! proper = true
//!
//! [words.hates]
//! type = "n^r . s . n^l"
//! outputs = [0, 1]        # which arguments the verb updates (default: all)
//!
//! [words.bites]
//! type = "n^r . s . n^l"
//! wiring = "semi_cartesian"
//! params = { subject = "bites.s", object = "bites.o" }
//!
//! [words."(is the brother of)"]
//! type = "n^r . s . n^l"
//! wiring = "correlated"
//! params = { joint = "brothers" }
//! ```
//!
//! A word is looked up verbatim first, then lower-cased. Keys may contain
//! spaces (multi-word entries) or a `#tag` suffix to separate homonyms.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::pregroup::{PregroupType, TypeParseError};
use crate::wirings::{Schema, WiringError};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("word {word:?}: {source}")]
    Type {
        word: String,
        source: TypeParseError,
    },
    #[error("word {word:?}: {source}")]
    Wiring { word: String, source: WiringError },
    #[error("word {word:?}: wiring {schema} needs type {expected}, lexicon says {found}")]
    SchemaType {
        word: String,
        schema: String,
        expected: String,
        found: String,
    },
    #[error("word {word:?}: basic type {base:?} is not in the alphabet")]
    Alphabet { word: String, base: String },
    #[error("word {word:?}: {msg}")]
    Entry { word: String, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum WordKind {
    /// A plain noun: a state, or a wire when the noun is dynamic.
    Noun,
    Schema(Schema),
    /// A black-box word; `outputs` lists the argument factors (in order of
    /// the word's adjoint factors) that it hands back.
    Generic { outputs: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub word: String,
    pub ty: PregroupType,
    pub kind: WordKind,
    pub proper: bool,
    /// Box name used for the word's meaning.
    pub payload: String,
}

impl Entry {
    /// Number of adjoint (argument) factors.
    pub fn arity(&self) -> usize {
        self.ty.factors.iter().filter(|f| f.adjoint != 0).count()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLexicon {
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    #[serde(default)]
    target: Option<String>,
    #[serde(default)]
    words: BTreeMap<String, RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(rename = "type")]
    ty: String,
    #[serde(default)]
    wiring: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, String>,
    #[serde(default)]
    proper: bool,
    #[serde(default)]
    outputs: Option<Vec<usize>>,
    #[serde(default)]
    payload: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Lexicon {
    pub target: PregroupType,
    entries: BTreeMap<String, Entry>,
    /// Longest key, in whitespace-separated tokens.
    max_words: usize,
}

impl Lexicon {
    pub fn from_toml(src: &str) -> Result<Lexicon, LexiconError> {
        let raw: RawLexicon = toml::from_str(src)?;
        let target = match &raw.target {
            Some(t) => t.parse().map_err(|source| LexiconError::Type {
                word: "<target>".into(),
                source,
            })?,
            None => PregroupType::simple("s", 0),
        };
        let mut lex = Lexicon {
            target,
            entries: BTreeMap::new(),
            max_words: 1,
        };
        for (word, e) in raw.words {
            let entry = build_entry(&word, e)?;
            if let Some(alpha) = &raw.alphabet {
                if let Some(f) = entry.ty.factors.iter().find(|f| !alpha.contains(&f.base.0)) {
                    return Err(LexiconError::Alphabet {
                        word,
                        base: f.base.0.clone(),
                    });
                }
            }
            lex.insert(entry);
        }
        Ok(lex)
    }

    pub fn new(target: PregroupType) -> Lexicon {
        Lexicon {
            target,
            entries: BTreeMap::new(),
            max_words: 1,
        }
    }

    pub fn insert(&mut self, entry: Entry) {
        self.max_words = self.max_words.max(entry.word.split_whitespace().count());
        self.entries.insert(entry.word.clone(), entry);
    }

    /// Verbatim lookup, then lower-case.
    pub fn get(&self, word: &str) -> Option<&Entry> {
        self.entries
            .get(word)
            .or_else(|| self.entries.get(&word.to_lowercase()))
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn max_words(&self) -> usize {
        self.max_words
    }
}

fn build_entry(word: &str, e: RawEntry) -> Result<Entry, LexiconError> {
    let bad = |msg: String| LexiconError::Entry {
        word: word.to_string(),
        msg,
    };
    let ty: PregroupType = e.ty.parse().map_err(|source| LexiconError::Type {
        word: word.to_string(),
        source,
    })?;
    let kind = match e.wiring {
        Some(name) => {
            let schema = Schema::parse(&name, &e.params).map_err(|source| LexiconError::Wiring {
                word: word.to_string(),
                source,
            })?;
            let expected = schema.expected_type();
            if expected != ty {
                return Err(LexiconError::SchemaType {
                    word: word.to_string(),
                    schema: name,
                    expected: expected.to_string(),
                    found: ty.to_string(),
                });
            }
            if e.outputs.is_some() {
                return Err(bad("`outputs` is fixed by the wiring".into()));
            }
            WordKind::Schema(schema)
        }
        None if ty == PregroupType::simple("n", 0) && e.outputs.is_none() => WordKind::Noun,
        None => {
            if !e.params.is_empty() {
                return Err(bad("`params` without a wiring".into()));
            }
            let plain: Vec<_> = ty.factors.iter().filter(|f| f.adjoint == 0).collect();
            let [p] = plain.as_slice() else {
                return Err(bad(format!(
                    "type {ty} needs exactly one plain factor (or a wiring)"
                )));
            };
            let arity = ty.factors.len() - 1;
            let outputs = match e.outputs {
                Some(o) => o,
                None if p.base.0 == "n" => vec![0],
                None => (0..arity).collect(),
            };
            if let Some(&i) = outputs.iter().find(|&&i| i >= arity) {
                return Err(bad(format!("output {i} but only {arity} argument(s)")));
            }
            if p.base.0 == "n" && outputs.len() != 1 {
                return Err(bad("a noun-valued word hands back exactly one noun".into()));
            }
            WordKind::Generic { outputs }
        }
    };
    // `word#tag` keys share the payload of the bare word by default.
    let payload = e
        .payload
        .unwrap_or_else(|| word.split('#').next().unwrap_or(word).to_string());
    Ok(Entry {
        word: word.to_string(),
        ty,
        kind,
        proper: e.proper,
        payload,
    })
}
