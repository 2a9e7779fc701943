// SPDX-License-Identifier: Apache-2.0

//! `discocirc`: compile texts to circuits and evaluate them.

mod config;
mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use discocirc::analysis::{extract_network, graded_entailment, normalized_similarity, subgroup_meaning};
use discocirc::compiler::{apply_initial_states, compile_text, tag_document, Circuit, CompileOptions};
use discocirc::diagram::to_dot;
use discocirc::pregroup::reduce;
use discocirc::rewrite::normalize;
use discocirc::semantics::{Backend, Interpretation, Matrix, Payload, Value};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "discocirc", version, about = "Compile texts to circuits and evaluate them")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Run configuration (TOML).
    #[arg(long, global = true, env = "DISCOCIRC_CONFIG")]
    config: Option<PathBuf>,
    /// Lexicon file (TOML); overrides the config.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Payload file (JSON); overrides the config.
    #[arg(long, global = true)]
    payloads: Option<PathBuf>,
    /// matrix | rel | cpm; overrides the config.
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Comma-separated nouns to keep; the rest are discarded.
    #[arg(long, global = true, value_delimiter = ',')]
    keep: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Print each sentence's word types and reduction links.
    Parse { text: PathBuf },
    /// Compile a text to a circuit file.
    Compile {
        text: PathBuf,
        /// Write the circuit here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Normalize the diagram; gate boundaries are dropped.
        #[arg(long)]
        normalize: bool,
        /// Print rewrite steps to stderr, one per line.
        #[arg(long)]
        trace: bool,
        /// Also write the diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate a circuit file.
    Eval { circuit: PathBuf },
    /// Similarity of two texts' meanings.
    Compare { a: PathBuf, b: PathBuf },
    /// Graded entailment k of two texts' (or, with --states, two payloads') densities.
    Entail {
        a: String,
        b: String,
        /// Read A and B as density payload names.
        #[arg(long)]
        states: bool,
    },
    /// Relation graph of a text's nouns.
    Network {
        text: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Render a circuit file as DOT.
    Render {
        circuit: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

struct Ctx {
    cfg: RunConfig,
    global: Global,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &mut String, text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

impl Ctx {
    fn keep(&self) -> &[String] {
        self.global.keep.as_deref().unwrap_or(&self.cfg.keep)
    }

    fn interp(&self, backend: Option<Backend>) -> Result<Interpretation> {
        let b = self.cfg.backend(backend.or(self.global.backend))?;
        self.cfg.interpretation(b, self.global.payloads.as_deref())
    }

    fn compile(&self, text: &Path) -> Result<Circuit> {
        let lex = self.cfg.lexicon(self.global.lexicon.as_deref())?;
        self.cfg.check_nouns(&lex)?;
        let opts = CompileOptions {
            dynamic: self.cfg.dynamic.clone(),
        };
        Ok(compile_text(&read(text)?, &lex, &opts)?)
    }

    fn meaning(&self, c: &Circuit, interp: &Interpretation) -> Result<Value> {
        let init = self.cfg.initial_states(&c.wire_order)?;
        let state = c
            .scalars
            .iter()
            .fold(apply_initial_states(c, &init)?, |d, (_, s)| d.tensor(s));
        if self.keep().is_empty() {
            Ok(interp.evaluate(&state)?)
        } else {
            Ok(subgroup_meaning(&state, &c.outputs, self.keep(), interp)?)
        }
    }

    fn density(&self, v: Value) -> Result<Matrix> {
        match v {
            Value::Cpm(c) => Ok(c.density()?),
            _ => bail!("entailment needs density matrices"),
        }
    }

    fn run(&self, cmd: &Command) -> Result<String> {
        let mut out = String::new();
        match cmd {
            Command::Parse { text } => {
                let lex = self.cfg.lexicon(self.global.lexicon.as_deref())?;
                for (i, words) in tag_document(&read(text)?, &lex)?.iter().enumerate() {
                    let types: Vec<_> = words.iter().map(|w| w.entry.ty.clone()).collect();
                    let tagged: Vec<String> =
                        words.iter().map(|w| format!("{}: {}", w.surface, w.entry.ty)).collect();
                    out += &format!("sentence {i}\n  {}\n", tagged.join("\n  "));
                    match reduce(&types, &lex.target) {
                        Ok(p) => {
                            let links: Vec<String> =
                                p.links.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                            out += &format!("  links {}\n  target {}\n", links.join(" "), p.target());
                        }
                        Err(e) => bail!("sentence {i}: {e}"),
                    }
                }
            }
            Command::Compile {
                text,
                output,
                normalize: norm,
                trace,
                dot,
            } => {
                let mut c = self.compile(text)?;
                if *norm || *trace {
                    let n = normalize(&c.diagram);
                    if *trace {
                        eprint!("{}", n.trace);
                    }
                    if *norm {
                        c.diagram = n.diagram;
                        c.gates.clear();
                    }
                }
                if let Some(p) = dot {
                    emit(&mut out, &to_dot(&c.diagram, "circuit"), Some(p))?;
                }
                emit(&mut out, &c.to_file(), output.as_deref())?;
            }
            Command::Eval { circuit } => {
                let c = Circuit::from_file(&read(circuit)?)?;
                let v = self.meaning(&c, &self.interp(None)?)?;
                out += &format::value(&v)?;
            }
            Command::Compare { a, b } => {
                let interp = self.interp(None)?;
                let va = self.meaning(&self.compile(a)?, &interp)?;
                let vb = self.meaning(&self.compile(b)?, &interp)?;
                out += &format!("{}\n", format::num(normalized_similarity(&va, &vb)?));
            }
            Command::Entail { a, b, states } => {
                let interp = self.interp(Some(Backend::Cpm))?;
                let (s1, s2) = if *states {
                    let get = |x: &str| match interp.payloads.get(x) {
                        Some(Payload::Density(m)) => Ok(m.clone()),
                        Some(_) => bail!("payload {x:?} is not a density matrix"),
                        None => bail!("no payload {x:?}"),
                    };
                    (get(a)?, get(b)?)
                } else {
                    let m = |x: &str| -> Result<Matrix> {
                        let c = self.compile(Path::new(x))?;
                        self.density(self.meaning(&c, &interp)?)
                    };
                    (m(a)?, m(b)?)
                };
                let r = graded_entailment(&s1, &s2)?;
                out += &format!("k {}\nstrict {}\n", format::num(r.k), r.strict);
            }
            Command::Network { text, dot } => {
                let net = extract_network(&self.compile(text)?);
                emit(&mut out, &net.to_dot(), dot.as_deref())?;
            }
            Command::Render { circuit, dot } => {
                let c = Circuit::from_file(&read(circuit)?)?;
                emit(&mut out, &to_dot(&c.full_diagram(), "circuit"), dot.as_deref())?;
            }
        }
        Ok(out)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<String> {
        let cfg = match &cli.global.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let ctx = Ctx {
            cfg,
            global: cli.global,
        };
        ctx.run(&cli.command)
    };
    match run() {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
