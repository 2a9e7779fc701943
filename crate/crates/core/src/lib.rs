// SPDX-License-Identifier: Apache-2.0

//! Compositional text meaning: pregroup parsing, string-diagram circuits over
//! noun wires, diagram rewriting, and evaluation in vector-space, relational
//! and density-matrix models.

pub mod analysis;
pub mod compiler;
pub mod diagram;
pub mod lexicon;
pub mod pregroup;
pub mod rewrite;
pub mod semantics;
pub mod wirings;
