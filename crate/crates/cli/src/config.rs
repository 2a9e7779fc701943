// SPDX-License-Identifier: Apache-2.0

//! Run configuration.
//!
//! ```toml
//! lexicon = "lexicon.toml"     # relative paths resolve against this file
//! payloads = "payloads.json"
//! backend = "cpm"              # matrix | rel | cpm
//! merge = "mixed"              # spider | mixed | symmetrized
//! dynamic = ["Alice", "Bob"]   # omit to use the proper-noun heuristic
//! keep = ["Bob"]               # subgroup for eval / compare
//!
//! [dims]
//! n = 2
//! s = 2
//!
//! [initial]                    # unlisted wires start with no prior
//! Bob = "person"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use discocirc::compiler::InitialState;
use discocirc::lexicon::Lexicon;
use discocirc::semantics::{
    parse_payloads, Backend, Interpretation, MergeMode, NO_PRIOR,
};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub payloads: Option<PathBuf>,
    pub backend: Option<String>,
    pub merge: Option<String>,
    pub dynamic: Option<Vec<String>>,
    #[serde(default)]
    pub keep: Vec<String>,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub initial: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let src = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&src).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.lexicon, &mut cfg.payloads].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn lexicon(&self, flag: Option<&Path>) -> Result<Lexicon> {
        let Some(path) = flag.or(self.lexicon.as_deref()) else {
            bail!("no lexicon: pass --lexicon or set `lexicon` in the config");
        };
        let src = std::fs::read_to_string(path)
            .with_context(|| format!("reading lexicon {}", path.display()))?;
        Lexicon::from_toml(&src).with_context(|| format!("loading lexicon {}", path.display()))
    }

    pub fn backend(&self, flag: Option<Backend>) -> Result<Backend> {
        match (flag, &self.backend) {
            (Some(b), _) => Ok(b),
            (None, Some(s)) => s.parse().map_err(anyhow::Error::msg),
            (None, None) => Ok(Backend::default()),
        }
    }

    pub fn interpretation(&self, backend: Backend, payloads: Option<&Path>) -> Result<Interpretation> {
        let mut interp = Interpretation::new(backend);
        if let Some(m) = &self.merge {
            interp.merge = m.parse::<MergeMode>().map_err(anyhow::Error::msg)?;
        }
        interp.dims = self.dims.clone();
        if let Some(path) = payloads.or(self.payloads.as_deref()) {
            let src = std::fs::read_to_string(path)
                .with_context(|| format!("reading payloads {}", path.display()))?;
            interp.payloads = parse_payloads(&src)?;
        }
        Ok(interp)
    }

    /// Initial states for the given wires; unlisted wires get no prior.
    pub fn initial_states(&self, wires: &[String]) -> Result<BTreeMap<String, InitialState>> {
        if let Some(x) = self.initial.keys().find(|x| !wires.contains(x)) {
            bail!("initial state for {x:?}, which is not a wire of this text");
        }
        Ok(wires
            .iter()
            .map(|w| {
                let s = match self.initial.get(w).map(String::as_str) {
                    None | Some(NO_PRIOR) => InitialState::NoPrior,
                    Some(s) => InitialState::State(s.to_string()),
                };
                (w.clone(), s)
            })
            .collect())
    }

    /// Checks that every noun the config names is in the lexicon.
    pub fn check_nouns(&self, lex: &Lexicon) -> Result<()> {
        let named = self
            .dynamic
            .iter()
            .flatten()
            .chain(&self.keep)
            .chain(self.initial.keys());
        for x in named {
            if lex.get(x).is_none() {
                bail!("config names {x:?}, which is not in the lexicon");
            }
        }
        Ok(())
    }
}
