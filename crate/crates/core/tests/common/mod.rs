// SPDX-License-Identifier: Apache-2.0

//! Shared helpers: the example corpus and small random generators.

#![allow(dead_code)]

use std::path::PathBuf;

use discocirc::compiler::{self, Circuit, CompileOptions, TaggedWord};
use discocirc::lexicon::Lexicon;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn lexicon() -> Lexicon {
    let src = std::fs::read_to_string(corpus_dir().join("lexicon.toml")).unwrap();
    Lexicon::from_toml(&src).unwrap()
}

pub fn text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join("texts").join(format!("{name}.txt"))).unwrap()
}

pub fn text_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir().join("texts"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

pub fn compile(name: &str) -> Circuit {
    compiler::compile_text(&text(name), &lexicon(), &CompileOptions::default()).unwrap()
}

pub fn tagged(sentence: &str) -> Vec<TaggedWord> {
    compiler::tag_types(0, &compiler::tokenize(sentence), &lexicon()).unwrap()
}
