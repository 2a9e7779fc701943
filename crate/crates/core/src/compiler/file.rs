// SPDX-License-Identifier: Apache-2.0

//! Circuit files: pretty JSON carrying the diagram in its text form.
//!
//! ```json
//! {
//!   "wires": ["Alice", "Bob"],
//!   "outputs": ["Alice", "Bob"],
//!   "gates": [{"sentence": 0, "boxes": [0, 3], "participants": ["Alice"],
//!              "terminated": [], "entries": [["Alice", 0]]}],
//!   "scalars": [],
//!   "diagram": "dom n n\ncod n n\n..."
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Circuit, GateInfo};
use crate::diagram::{Diagram, ParseDiagramError};

#[derive(Debug, Error)]
pub enum CircuitFileError {
    #[error("circuit file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("circuit file diagram: {0}")]
    Diagram(#[from] ParseDiagramError),
    #[error("circuit file: {0}")]
    Inconsistent(String),
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    sentence: usize,
    boxes: [usize; 2],
    participants: Vec<String>,
    terminated: Vec<String>,
    entries: Vec<(String, usize)>,
}

#[derive(Serialize, Deserialize)]
struct ScalarRecord {
    sentence: usize,
    diagram: String,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    wires: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<GateRecord>,
    scalars: Vec<ScalarRecord>,
    diagram: String,
}

pub(super) fn write(c: &Circuit) -> String {
    let rec = CircuitRecord {
        wires: c.wire_order.clone(),
        outputs: c.outputs.clone(),
        gates: c
            .gates
            .iter()
            .map(|g| GateRecord {
                sentence: g.sentence,
                boxes: [g.boxes.start, g.boxes.end],
                participants: g.participants.clone(),
                terminated: g.terminated.clone(),
                entries: g.entries.clone(),
            })
            .collect(),
        scalars: c
            .scalars
            .iter()
            .map(|(i, d)| ScalarRecord {
                sentence: *i,
                diagram: d.to_text(),
            })
            .collect(),
        diagram: c.diagram.to_text(),
    };
    let mut s = serde_json::to_string_pretty(&rec).expect("circuit serialises");
    s.push('\n');
    s
}

pub(super) fn read(src: &str) -> Result<Circuit, CircuitFileError> {
    let rec: CircuitRecord = serde_json::from_str(src)?;
    let diagram = Diagram::from_text(&rec.diagram)?;
    if diagram.dom().len() != rec.wires.len() || diagram.cod().len() != rec.outputs.len() {
        return Err(CircuitFileError::Inconsistent(
            "wire lists disagree with the diagram boundary".into(),
        ));
    }
    let n = diagram.boxes().len();
    let gates = rec
        .gates
        .into_iter()
        .map(|g| {
            let [a, b] = g.boxes;
            if a > b || b > n || g.entries.iter().any(|(_, e)| !(a..b).contains(e)) {
                return Err(CircuitFileError::Inconsistent(format!(
                    "gate box range {a}..{b} outside 0..{n}"
                )));
            }
            Ok(GateInfo {
                sentence: g.sentence,
                boxes: a..b,
                participants: g.participants,
                terminated: g.terminated,
                entries: g.entries,
            })
        })
        .collect::<Result<_, _>>()?;
    let scalars = rec
        .scalars
        .into_iter()
        .map(|s| Ok((s.sentence, Diagram::from_text(&s.diagram)?)))
        .collect::<Result<_, CircuitFileError>>()?;
    Ok(Circuit {
        diagram,
        wire_order: rec.wires,
        outputs: rec.outputs,
        gates,
        scalars,
    })
}
