// SPDX-License-Identifier: Apache-2.0

//! Line-based text form of a diagram.
//!
//! ```text
//! dom n n
//! cod n
//! box 0 generic dag=0 "hates" : n n -> n
//! wire in:0 b0.in:0
//! ```
//!
//! Names are JSON string literals so they may contain spaces.

use thiserror::Error;

use super::{BoxKind, DBox, Diagram, DiagramError, Port, Wire, WireLabel};

#[derive(Debug, Error)]
pub enum ParseDiagramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

pub(super) fn write(d: &Diagram) -> String {
    let labels = |v: &[WireLabel]| {
        v.iter()
            .map(|l| l.0.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("dom {}\n", labels(&d.dom)).replace(" \n", "\n"));
    out.push_str(&format!("cod {}\n", labels(&d.cod)).replace(" \n", "\n"));
    for (i, b) in d.boxes.iter().enumerate() {
        let name = serde_json::to_string(&b.name).expect("string serialises");
        let side = |v: &[WireLabel]| {
            if v.is_empty() {
                String::new()
            } else {
                format!(" {}", labels(v))
            }
        };
        out.push_str(&format!(
            "box {i} {} dag={} {name} :{} ->{}\n",
            b.kind.as_str(),
            u8::from(b.dagger),
            side(&b.dom),
            side(&b.cod)
        ));
    }
    for w in &d.wires {
        out.push_str(&format!("wire {} {}\n", w.src, w.tgt));
    }
    out
}

fn parse_port(s: &str) -> Option<Port> {
    if let Some(k) = s.strip_prefix("in:") {
        return k.parse().ok().map(Port::Input);
    }
    if let Some(k) = s.strip_prefix("out:") {
        return k.parse().ok().map(Port::Output);
    }
    let rest = s.strip_prefix('b')?;
    let (b, leg) = rest.split_once('.')?;
    let b: usize = b.parse().ok()?;
    if let Some(k) = leg.strip_prefix("in:") {
        return k.parse().ok().map(|k| Port::BoxIn(b, k));
    }
    if let Some(k) = leg.strip_prefix("out:") {
        return k.parse().ok().map(|k| Port::BoxOut(b, k));
    }
    None
}

fn parse_box(line: usize, rest: &str) -> Result<(usize, DBox), ParseDiagramError> {
    let err = |msg: &str| ParseDiagramError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let mut it = rest.splitn(3, ' ');
    let idx: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err("bad box index"))?;
    let kind = it
        .next()
        .and_then(BoxKind::parse)
        .ok_or_else(|| err("unknown box kind"))?;
    let rest = it.next().ok_or_else(|| err("truncated box line"))?;
    let (dag, rest) = rest
        .split_once(' ')
        .ok_or_else(|| err("truncated box line"))?;
    let dagger = match dag {
        "dag=0" => false,
        "dag=1" => true,
        _ => return Err(err("expected dag=0 or dag=1")),
    };
    let mut de = serde_json::Deserializer::from_str(rest).into_iter::<String>();
    let name = de
        .next()
        .and_then(Result::ok)
        .ok_or_else(|| err("expected a quoted name"))?;
    let rest = &rest[de.byte_offset()..];
    let rest = rest
        .trim_start()
        .strip_prefix(':')
        .ok_or_else(|| err("expected ':' after the name"))?;
    let (dom, cod) = rest
        .split_once("->")
        .ok_or_else(|| err("expected '->' between dom and cod"))?;
    let labels = |s: &str| s.split_whitespace().map(WireLabel::from).collect();
    Ok((
        idx,
        DBox {
            name,
            kind,
            dom: labels(dom),
            cod: labels(cod),
            dagger,
        },
    ))
}

pub(super) fn read(s: &str) -> Result<Diagram, ParseDiagramError> {
    let mut dom = None;
    let mut cod = None;
    let mut boxes = Vec::new();
    let mut wires = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (head, rest) = text.split_once(' ').unwrap_or((text, ""));
        let labels = |s: &str| s.split_whitespace().map(WireLabel::from).collect::<Vec<_>>();
        match head {
            "dom" => dom = Some(labels(rest)),
            "cod" => cod = Some(labels(rest)),
            "box" => {
                let (idx, b) = parse_box(line, rest)?;
                if idx != boxes.len() {
                    return Err(ParseDiagramError::Syntax {
                        line,
                        msg: format!("box {idx} out of sequence"),
                    });
                }
                boxes.push(b);
            }
            "wire" => {
                let mut ps = rest.split_whitespace().map(parse_port);
                match (ps.next(), ps.next(), ps.next()) {
                    (Some(Some(src)), Some(Some(tgt)), None) => wires.push(Wire { src, tgt }),
                    _ => {
                        return Err(ParseDiagramError::Syntax {
                            line,
                            msg: "expected two ports".into(),
                        })
                    }
                }
            }
            other => {
                return Err(ParseDiagramError::Syntax {
                    line,
                    msg: format!("unknown directive {other:?}"),
                })
            }
        }
    }
    let missing = |what: &str| ParseDiagramError::Syntax {
        line: 0,
        msg: format!("missing {what} line"),
    };
    let dom = dom.ok_or_else(|| missing("dom"))?;
    let cod = cod.ok_or_else(|| missing("cod"))?;
    Ok(Diagram::from_parts(boxes, wires, dom, cod)?)
}
