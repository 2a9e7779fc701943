// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use discocirc::compiler::{segment_sentences, tag_types, tokenize};
use discocirc::pregroup::{all_proofs, reduce, PregroupType, SimpleType};

use crate::common::{lexicon, text, text_names};
use crate::{ensure, Outcome};

type Links = Vec<(usize, usize)>;

/// Every link set reducing `flat` to `target`, found by enumerating all
/// partial matchings of cancelling pairs and filtering the planar ones
/// whose unlinked factors sit outside every link and spell the target.
fn brute_force(flat: &[SimpleType], target: &[SimpleType]) -> BTreeSet<Links> {
    fn cancels(a: &SimpleType, b: &SimpleType) -> bool {
        a.base.0 == b.base.0 && b.adjoint - a.adjoint == 1
    }
    fn go(
        flat: &[SimpleType],
        p: usize,
        used: &mut Vec<bool>,
        links: &mut Links,
        out: &mut Vec<Links>,
    ) {
        if p == flat.len() {
            out.push(links.clone());
            return;
        }
        if used[p] {
            return go(flat, p + 1, used, links, out);
        }
        go(flat, p + 1, used, links, out);
        for q in p + 1..flat.len() {
            if !used[q] && cancels(&flat[p], &flat[q]) {
                used[q] = true;
                links.push((p, q));
                go(flat, p + 1, used, links, out);
                links.pop();
                used[q] = false;
            }
        }
    }
    let mut all = Vec::new();
    go(flat, 0, &mut vec![false; flat.len()], &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|links| {
            let planar = links.iter().all(|&(a, b)| {
                links.iter().all(|&(c, d)| !(a < c && c < b && b < d))
            });
            let linked: BTreeSet<usize> = links.iter().flat_map(|&(a, b)| [a, b]).collect();
            let free: Vec<usize> = (0..flat.len()).filter(|k| !linked.contains(k)).collect();
            let exposed = free
                .iter()
                .all(|&k| links.iter().all(|&(a, b)| !(a < k && k < b)));
            let spelled: Vec<&SimpleType> = free.iter().map(|&k| &flat[k]).collect();
            planar && exposed && spelled == target.iter().collect::<Vec<_>>()
        })
        .map(|mut l| {
            l.sort();
            l
        })
        .collect()
}

pub fn criterion() -> Outcome {
    let start = Instant::now();
    let lex = lexicon();
    let ty = |s: &str| s.parse::<PregroupType>().unwrap();
    let hates = [ty("n"), ty("n^r . s . n^l"), ty("n")];
    let p = reduce(&hates, &ty("s")).map_err(|e| e.to_string())?;
    ensure!(p.links.len() == 2, "Alice hates Bob: {} links", p.links.len());

    let mut checked = 0;
    let mut proofs = 0;
    for name in text_names() {
        for (i, s) in segment_sentences(&text(&name)).unwrap().iter().enumerate() {
            let words = tag_types(i, &tokenize(s), &lex).map_err(|e| e.to_string())?;
            let types: Vec<PregroupType> = words.iter().map(|w| w.entry.ty.clone()).collect();
            let flat: Vec<SimpleType> = types.iter().flat_map(|t| t.factors.clone()).collect();
            if flat.len() > 20 {
                continue;
            }
            let want = brute_force(&flat, &lex.target.factors);
            let got: BTreeSet<Links> = all_proofs(&types, &lex.target)
                .into_iter()
                .map(|p| p.links)
                .collect();
            ensure!(got == want, "{name:?} {s:?}: {got:?} vs oracle {want:?}");
            match reduce(&types, &lex.target) {
                Ok(p) => ensure!(
                    want.first() == Some(&p.links),
                    "{s:?}: reduce gave {:?}, least oracle proof {:?}",
                    p.links,
                    want.first()
                ),
                Err(_) => ensure!(want.is_empty(), "{s:?}: reduce failed, oracle found proofs"),
            }
            ensure!(!want.is_empty(), "{name:?} {s:?} does not reduce");
            checked += 1;
            proofs += want.len();
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "took {t:?}");
    Ok(format!(
        "2 links for the transitive sentence; {checked} corpus sentences, {proofs} proofs agree with the oracle"
    ))
}
