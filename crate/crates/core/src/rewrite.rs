// SPDX-License-Identifier: Apache-2.0

//! Rewrite rules, normalization and a normal-form equivalence check.
//!
//! Rules, in priority order:
//!
//! * `fuse` — two same-label spiders joined by at least one wire become one
//!   spider; a spider's self-loop is dropped. Caps, cups and discards count
//!   as spiders here as long as one side of the pair is a proper spider.
//! * `yank` — a cap feeding a cup (a zigzag) becomes a plain wire, or a
//!   legless spider when the two close into a loop.
//! * `elim` — `spider(1,1)` becomes a wire, `spider(0,2)` a cap,
//!   `spider(2,0)` a cup, `spider(1,0)` a discard and `spider(0,1)` its
//!   dagger.
//! * `swap` — a swap box becomes two crossing wires.
//!
//! Matches are searched in box order and the first one is rewritten. Every
//! step lowers `(boxes, wires, spiders)` lexicographically, so normalization
//! terminates.
//!
//! Discards are spiders only in the matrix and relational models; in the CPM
//! model a discard is the trace. [`NormalizeOptions::cpm_safe`] turns off
//! every rule that relies on that identification.

use std::fmt;

use thiserror::Error;

use crate::diagram::{BoxKind, DBox, Diagram, DiagramError, Port, Wire};
#[cfg(test)]
use crate::diagram::WireLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Fuse,
    Yank,
    Elim,
    Swap,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Fuse, Rule::Yank, Rule::Elim, Rule::Swap];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Fuse => "fuse",
            Rule::Yank => "yank",
            Rule::Elim => "elim",
            Rule::Swap => "swap",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One rewrite: the rule and the boxes it matched (indices in the diagram
/// the step was applied to).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub boxes: Vec<usize>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        for b in &self.boxes {
            write!(f, " b{b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<Step>,
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RewriteError {
    #[error("rule {rule} does not match at {boxes:?}")]
    NoMatch { rule: Rule, boxes: Vec<usize> },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Treat discards as one-legged spiders (sound for matrix and relational
    /// models only).
    pub fuse_discards: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            fuse_discards: true,
        }
    }
}

impl NormalizeOptions {
    /// Rules that are sound in the CPM model as well.
    pub fn cpm_safe() -> Self {
        NormalizeOptions {
            fuse_discards: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub diagram: Diagram,
    pub trace: RewriteTrace,
}

fn inputs(d: &Diagram, b: usize) -> Vec<Port> {
    (0..d.boxes()[b].dom.len())
        .map(|k| d.neighbour(Port::BoxIn(b, k)).expect("wired"))
        .collect()
}

fn outputs(d: &Diagram, b: usize) -> Vec<Port> {
    (0..d.boxes()[b].cod.len())
        .map(|k| d.neighbour(Port::BoxOut(b, k)).expect("wired"))
        .collect()
}

fn touches(ports: &[Port], b: usize) -> bool {
    ports.iter().any(|p| p.box_index() == Some(b))
}

// ---------------------------------------------------------------- fuse

fn fusable(b: &DBox, opts: NormalizeOptions) -> bool {
    match b.kind {
        BoxKind::Spider | BoxKind::Cap | BoxKind::Cup => true,
        BoxKind::Discard => opts.fuse_discards,
        _ => false,
    }
}

fn proper(b: &DBox, opts: NormalizeOptions) -> bool {
    b.kind == BoxKind::Spider || (b.kind == BoxKind::Discard && opts.fuse_discards)
}

fn fuse_matches(d: &Diagram, loc: &[usize], opts: NormalizeOptions) -> bool {
    match *loc {
        [i] => {
            let b = &d.boxes()[i];
            b.kind == BoxKind::Spider && touches(&inputs(d, i), i)
        }
        [i, j] if i < j && j < d.boxes().len() => {
            let (a, b) = (&d.boxes()[i], &d.boxes()[j]);
            fusable(a, opts)
                && fusable(b, opts)
                && (proper(a, opts) || proper(b, opts))
                && a.spider_label() == b.spider_label()
                && (touches(&inputs(d, i), j) || touches(&outputs(d, i), j))
        }
        _ => false,
    }
}

fn find_fuse(d: &Diagram, opts: NormalizeOptions) -> Option<Vec<usize>> {
    let n = d.boxes().len();
    for i in 0..n {
        if fuse_matches(d, &[i], opts) {
            return Some(vec![i]);
        }
        if !fusable(&d.boxes()[i], opts) {
            continue;
        }
        let mut partners: Vec<usize> = inputs(d, i)
            .into_iter()
            .chain(outputs(d, i))
            .filter_map(Port::box_index)
            .filter(|&j| j > i)
            .collect();
        partners.sort_unstable();
        if let Some(&j) = partners.iter().find(|&&j| fuse_matches(d, &[i, j], opts)) {
            return Some(vec![i, j]);
        }
    }
    None
}

fn apply_fuse(d: &Diagram, loc: &[usize]) -> Diagram {
    let group: &[usize] = loc;
    let inside = |p: &Port| p.box_index().is_some_and(|b| group.contains(&b));
    let x = d.boxes()[loc[0]].spider_label();
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    for &b in group {
        ins.extend(inputs(d, b).into_iter().filter(|p| !inside(p)));
        outs.extend(outputs(d, b).into_iter().filter(|p| !inside(p)));
    }
    let n = d.boxes().len();
    let mut extra: Vec<Wire> = ins
        .iter()
        .enumerate()
        .map(|(k, &src)| Wire {
            src,
            tgt: Port::BoxIn(n, k),
        })
        .collect();
    extra.extend(outs.iter().enumerate().map(|(k, &tgt)| Wire {
        src: Port::BoxOut(n, k),
        tgt,
    }));
    d.splice(group, vec![DBox::spider(ins.len(), outs.len(), &x)], extra)
}

// ---------------------------------------------------------------- yank

fn yank_matches(d: &Diagram, loc: &[usize]) -> bool {
    let &[c, u] = loc else { return false };
    c != u
        && c.max(u) < d.boxes().len()
        && d.boxes()[c].kind == BoxKind::Cap
        && d.boxes()[u].kind == BoxKind::Cup
        && touches(&outputs(d, c), u)
}

fn find_yank(d: &Diagram) -> Option<Vec<usize>> {
    for c in 0..d.boxes().len() {
        if d.boxes()[c].kind != BoxKind::Cap {
            continue;
        }
        let mut us: Vec<usize> = outputs(d, c).into_iter().filter_map(Port::box_index).collect();
        us.sort_unstable();
        if let Some(&u) = us.iter().find(|&&u| yank_matches(d, &[c, u])) {
            return Some(vec![c, u]);
        }
    }
    None
}

fn apply_yank(d: &Diagram, c: usize, u: usize) -> Diagram {
    let outs = outputs(d, c);
    let ins = inputs(d, u);
    let x = d.boxes()[c].spider_label();
    // The cap leg wired to the cup, and the cup leg it lands on.
    let a = outs.iter().position(|p| p.box_index() == Some(u)).unwrap();
    if outs[1 - a].box_index() == Some(u) {
        // Both legs meet the cup: a closed loop.
        return d.splice(&[c, u], vec![DBox::spider(0, 0, &x)], vec![]);
    }
    let b = match outs[a] {
        Port::BoxIn(_, k) => k,
        _ => unreachable!("cap outputs feed inputs"),
    };
    d.splice(
        &[c, u],
        vec![],
        vec![Wire {
            src: ins[1 - b],
            tgt: outs[1 - a],
        }],
    )
}

// ---------------------------------------------------------------- elim

fn elim_matches(d: &Diagram, loc: &[usize], opts: NormalizeOptions) -> bool {
    let &[s] = loc else { return false };
    let Some(b) = d.boxes().get(s) else { return false };
    if b.kind != BoxKind::Spider || touches(&inputs(d, s), s) {
        return false;
    }
    match (b.dom.len(), b.cod.len()) {
        (1, 1) | (0, 2) | (2, 0) => true,
        (1, 0) | (0, 1) => opts.fuse_discards,
        _ => false,
    }
}

fn apply_elim(d: &Diagram, s: usize) -> Result<Diagram, DiagramError> {
    let b = &d.boxes()[s];
    let x = b.spider_label();
    let replacement = match (b.dom.len(), b.cod.len()) {
        (1, 1) => {
            let src = inputs(d, s)[0];
            let tgt = outputs(d, s)[0];
            return Ok(d.splice(&[s], vec![], vec![Wire { src, tgt }]));
        }
        (0, 2) => DBox::cap(&x),
        (2, 0) => DBox::cup(&x),
        (1, 0) => DBox::discard(&x),
        (0, 1) => DBox::codiscard(&x),
        _ => unreachable!("checked by elim_matches"),
    };
    d.with_box(s, replacement)
}

// ---------------------------------------------------------------- swap

fn swap_matches(d: &Diagram, loc: &[usize]) -> bool {
    let &[s] = loc else { return false };
    // A swap wired to itself is left alone.
    s < d.boxes().len() && d.boxes()[s].kind == BoxKind::Swap && !touches(&inputs(d, s), s)
}

fn apply_swap(d: &Diagram, s: usize) -> Diagram {
    let ins = inputs(d, s);
    let outs = outputs(d, s);
    d.splice(
        &[s],
        vec![],
        vec![
            Wire {
                src: ins[0],
                tgt: outs[1],
            },
            Wire {
                src: ins[1],
                tgt: outs[0],
            },
        ],
    )
}

// ---------------------------------------------------------------- driver

fn find(d: &Diagram, rule: Rule, opts: NormalizeOptions) -> Option<Vec<usize>> {
    match rule {
        Rule::Fuse => find_fuse(d, opts),
        Rule::Yank => find_yank(d),
        Rule::Elim => (0..d.boxes().len())
            .find(|&s| elim_matches(d, &[s], opts))
            .map(|s| vec![s]),
        Rule::Swap => (0..d.boxes().len())
            .find(|&s| swap_matches(d, &[s]))
            .map(|s| vec![s]),
    }
}

/// Applies `rule` at `boxes`, failing if it does not match there.
pub fn apply(d: &Diagram, step: &Step, opts: NormalizeOptions) -> Result<Diagram, RewriteError> {
    let no_match = || RewriteError::NoMatch {
        rule: step.rule,
        boxes: step.boxes.clone(),
    };
    let loc = &step.boxes;
    if loc.iter().any(|&b| b >= d.boxes().len()) {
        return Err(no_match());
    }
    match step.rule {
        Rule::Fuse if fuse_matches(d, loc, opts) => Ok(apply_fuse(d, loc)),
        Rule::Yank if yank_matches(d, loc) => Ok(apply_yank(d, loc[0], loc[1])),
        Rule::Elim if elim_matches(d, loc, opts) => Ok(apply_elim(d, loc[0])?),
        Rule::Swap if swap_matches(d, loc) => Ok(apply_swap(d, loc[0])),
        _ => Err(no_match()),
    }
}

/// First match of the highest-priority applicable rule.
pub fn next_step(d: &Diagram, opts: NormalizeOptions) -> Option<Step> {
    Rule::ALL.into_iter().find_map(|rule| {
        find(d, rule, opts).map(|boxes| Step { rule, boxes })
    })
}

/// Applies one rule once at its first match; `None` when it does not match
/// anywhere.
pub fn rewrite_once(d: &Diagram, rule: Rule, opts: NormalizeOptions) -> Option<Diagram> {
    let boxes = find(d, rule, opts)?;
    Some(apply(d, &Step { rule, boxes }, opts).expect("found matches apply"))
}

pub fn fuse_spiders(d: &Diagram) -> Option<Diagram> {
    rewrite_once(d, Rule::Fuse, NormalizeOptions::default())
}

pub fn yank(d: &Diagram) -> Option<Diagram> {
    rewrite_once(d, Rule::Yank, NormalizeOptions::default())
}

pub fn elim_two_legged_spider(d: &Diagram) -> Option<Diagram> {
    rewrite_once(d, Rule::Elim, NormalizeOptions::default())
}

pub fn normalize(d: &Diagram) -> Normalized {
    normalize_with(d, NormalizeOptions::default())
}

pub fn normalize_with(d: &Diagram, opts: NormalizeOptions) -> Normalized {
    let bound = d.boxes().len() + d.wires().len();
    let mut cur = d.clone();
    let mut trace = RewriteTrace::default();
    while let Some(step) = next_step(&cur, opts) {
        cur = apply(&cur, &step, opts).expect("found matches apply");
        trace.steps.push(step);
        assert!(
            trace.steps.len() <= bound,
            "normalization exceeded its bound of {bound} steps"
        );
    }
    Normalized {
        diagram: cur,
        trace,
    }
}

/// Replays a trace; reproduces the output of [`normalize_with`] exactly.
pub fn replay(
    d: &Diagram,
    trace: &RewriteTrace,
    opts: NormalizeOptions,
) -> Result<Diagram, RewriteError> {
    trace
        .steps
        .iter()
        .try_fold(d.clone(), |cur, step| apply(&cur, step, opts))
}

/// Sound but incomplete: `true` proves the diagrams equal in every matrix
/// and relational model; `false` only means no proof was found.
pub fn equivalent(a: &Diagram, b: &Diagram) -> Result<bool, RewriteError> {
    equivalent_with(a, b, NormalizeOptions::default())
}

pub fn equivalent_with(
    a: &Diagram,
    b: &Diagram,
    opts: NormalizeOptions,
) -> Result<bool, RewriteError> {
    for (x, y) in [(a.dom(), b.dom()), (a.cod(), b.cod())] {
        if let Some(e) = crate::diagram::type_mismatch(x, y) {
            return Err(e.into());
        }
    }
    let na = normalize_with(a, opts).diagram;
    let nb = normalize_with(b, opts).diagram;
    Ok(na.equal_up_to_iso(&nb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> WireLabel {
        "x".into()
    }

    #[test]
    fn fuses_copy_into_merge() {
        let d = Diagram::copy(&x()).then(&Diagram::merge(&x())).unwrap();
        let n = normalize(&d);
        // copy;merge fuses to spider(1,1) with two parallel wires inside,
        // which then becomes a plain wire.
        assert_eq!(n.diagram, Diagram::id(&[x()]));
        assert_eq!(n.trace.steps[0].rule, Rule::Fuse);
    }

    #[test]
    fn yanks_zigzag() {
        let zig = Diagram::cap(&x())
            .tensor(&Diagram::id(&[x()]))
            .then(&Diagram::id(&[x()]).tensor(&Diagram::cup(&x())))
            .unwrap();
        let n = normalize(&zig);
        assert_eq!(n.diagram, Diagram::id(&[x()]));
        assert_eq!(n.trace.steps.len(), 1);
        assert_eq!(n.trace.steps[0].rule, Rule::Yank);
    }

    #[test]
    fn closed_loop_becomes_legless_spider() {
        let d = Diagram::cap(&x()).then(&Diagram::cup(&x())).unwrap();
        let n = normalize(&d).diagram;
        assert_eq!(n.boxes().len(), 1);
        assert_eq!(n.boxes()[0].legs(), 0);
    }

    #[test]
    fn two_legged_spiders() {
        let s = |m, n| Diagram::spider(m, n, &x()).unwrap();
        assert_eq!(normalize(&s(0, 2)).diagram, Diagram::cap(&x()));
        assert_eq!(normalize(&s(2, 0)).diagram, Diagram::cup(&x()));
        assert_eq!(normalize(&s(1, 0)).diagram, Diagram::discard(&x()));
        assert_eq!(
            normalize_with(&s(1, 0), NormalizeOptions::cpm_safe()).diagram,
            s(1, 0)
        );
    }

    #[test]
    fn swaps_become_crossings() {
        let y: WireLabel = "y".into();
        let d = Diagram::swap(&x(), &y).then(&Diagram::swap(&y, &x())).unwrap();
        assert_eq!(normalize(&d).diagram, Diagram::id(&[x(), y]));
    }

    #[test]
    fn replay_reproduces_normal_form() {
        let d = Diagram::state("a", vec![x()])
            .tensor(&Diagram::state("b", vec![x()]))
            .then(&Diagram::merge(&x()))
            .unwrap()
            .then(&Diagram::copy(&x()))
            .unwrap()
            .then(&Diagram::cup(&x()))
            .unwrap();
        let opts = NormalizeOptions::default();
        let n = normalize_with(&d, opts);
        assert_eq!(replay(&d, &n.trace, opts).unwrap(), n.diagram);
        let bad = RewriteTrace {
            steps: vec![Step {
                rule: Rule::Yank,
                boxes: vec![0, 1],
            }],
        };
        assert!(replay(&d, &bad, opts).is_err());
    }

    #[test]
    fn equivalence_needs_equal_boundaries() {
        let a = Diagram::id(&[x()]);
        let b = Diagram::id(&["y".into()]);
        assert!(equivalent(&a, &b).is_err());
        assert!(equivalent(&a, &a).unwrap());
    }

    #[test]
    fn normal_forms_are_unchanged() {
        let d = Diagram::process("f", vec![x()], vec![x()]);
        let n = normalize(&d);
        assert!(n.trace.steps.is_empty());
        assert_eq!(n.diagram, d);
    }
}
