use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dlog_core::derivation::{explain, justify_step};
use dlog_core::engine::{self, EngineError, Proof};
use dlog_core::ground::{ground, validate, ValidationReport};
use dlog_core::modelcheck::{self, ModelError};
use dlog_core::parser::parse_literal;
use dlog_core::{metaprogram, parser, ConclusionSet, GroundTheory, Tag, TaggedConclusion, ThreeVal};

use crate::bench::bench;
use crate::exit;
use crate::fuzz::{fuzz, FuzzConfig};

#[derive(Debug, Parser)]
#[command(name = "dlog", version, about = "Defeasible logic reasoner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Theory file; `-` or omitted reads standard input.
    pub file: Option<PathBuf>,
    /// Accept a cyclic superiority relation (reported as a warning).
    #[arg(long)]
    pub allow_cyclic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, ground and validate a theory.
    Check {
        #[command(flatten)]
        input: Input,
    },
    /// Print every tagged conclusion, canonically sorted.
    Derive {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Exit 0 if the tagged literal is provable, 3 if not.
    Query {
        /// One of +D, -D, +d, -d.
        #[arg(allow_hyphen_values = true)]
        tag: String,
        literal: String,
        #[command(flatten)]
        input: Input,
    },
    /// Print a derivation of the tagged literal with the rule used at each step.
    Explain {
        #[arg(allow_hyphen_values = true)]
        tag: String,
        literal: String,
        #[command(flatten)]
        input: Input,
    },
    /// Dump the ground metaprogram.
    Meta {
        #[command(flatten)]
        input: Input,
    },
    /// Count models by exhaustive enumeration.
    Models {
        #[command(flatten)]
        input: Input,
        /// Also print the conclusions true in every model.
        #[arg(long)]
        consequences: bool,
        /// Maximum number of interpretations to enumerate.
        #[arg(long, env = "DLOG_CAP", default_value_t = modelcheck::DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compare engine, metaprogram and model semantics on random theories.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        theories: usize,
        #[arg(long, default_value_t = 3)]
        max_atoms: usize,
        #[arg(long, default_value_t = 10)]
        max_rules: usize,
        /// Skip model enumeration; compare engine and metaprogram only.
        #[arg(long)]
        no_models: bool,
        #[arg(long, env = "DLOG_CAP", default_value_t = modelcheck::DEFAULT_CAP)]
        cap: u64,
    },
    /// Time derivation on chain theories of the given sizes.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 50_000, 100_000])]
        sizes: Vec<usize>,
        /// Attack every link with a beaten rule for the complement.
        #[arg(long)]
        attacks: bool,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        json: bool,
    },
}

/// An error that ends the command with a specific exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl fmt::Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::new(exit::OK, "");
        }
        Failure::new(exit::INTERNAL, format!("i/o error: {e}"))
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NoDerivation(_) => Failure::new(exit::NOT_DERIVABLE, e),
            _ => Failure::new(exit::INTERNAL, e),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::CapExceeded { .. } => Failure::new(exit::CAP_EXCEEDED, e),
            _ => Failure::new(exit::INTERNAL, e),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(io.err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn load(input: &Input, io: &mut Io<'_>) -> Result<(GroundTheory, ValidationReport), Failure> {
    let (name, text) = match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            io.stdin.read_to_string(&mut text)?;
            ("<stdin>".to_string(), text)
        }
    };
    let src = parser::parse_theory(&text).map_err(|e| Failure::new(exit::INVALID, format!("{name}:{e}")))?;
    let g = ground(&src).map_err(|e| Failure::new(exit::INVALID, format!("{name}: {e}")))?;
    let report = validate(&g, input.allow_cyclic).map_err(|e| Failure::new(exit::INVALID, format!("{name}: {e}")))?;
    Ok((g, report))
}

fn parse_query(tag: &str, literal: &str) -> Result<TaggedConclusion, Failure> {
    let tag: Tag = tag.parse().map_err(|e| Failure::new(exit::INVALID, e))?;
    let literal = parse_literal(literal).map_err(|e| Failure::new(exit::INVALID, format!("literal:{e}")))?;
    Ok(TaggedConclusion::new(tag, literal))
}

fn conclusion_json(c: &TaggedConclusion) -> Value {
    json!({ "tag": c.tag.ascii(), "literal": c.literal.to_string() })
}

/// Literals of the base whose status is left open, with the open levels.
fn undefined(g: &GroundTheory, c: &ConclusionSet) -> Vec<(String, Vec<&'static str>)> {
    g.base
        .iter()
        .filter_map(|l| {
            let mut levels = Vec::new();
            if c.status(l, true) == ThreeVal::Undefined {
                levels.push("definite");
            }
            if c.status(l, false) == ThreeVal::Undefined {
                levels.push("partial");
            }
            (!levels.is_empty()).then(|| (l.to_string(), levels))
        })
        .collect()
}

fn execute(cmd: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match cmd {
        Command::Check { input } => {
            let (g, report) = load(&input, io)?;
            for w in &report.warnings {
                writeln!(io.out, "warning: {w}")?;
            }
            writeln!(
                io.out,
                "ok: {} facts, {} ground rules, {} superiority pairs, base of {} literals, {} warnings",
                g.facts.len(),
                g.rules.len(),
                g.superiority.len(),
                g.base.len(),
                report.warnings.len()
            )?;
            Ok(exit::OK)
        }
        Command::Derive { input, json } => {
            let (g, _) = load(&input, io)?;
            let c = engine::derive_all(&g)?;
            let open = undefined(&g, &c);
            if json {
                let doc = json!({
                    "conclusions": c.iter().map(conclusion_json).collect::<Vec<_>>(),
                    "undefined": open
                        .iter()
                        .map(|(l, levels)| json!({ "literal": l, "levels": levels }))
                        .collect::<Vec<_>>(),
                });
                let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::new(exit::INTERNAL, e))?;
                writeln!(io.out, "{text}")?;
            } else {
                write!(io.out, "{c}")?;
                if !open.is_empty() {
                    writeln!(io.out, "% undefined")?;
                    for (l, levels) in open {
                        writeln!(io.out, "? {l} [{}]", levels.join(", "))?;
                    }
                }
            }
            Ok(exit::OK)
        }
        Command::Query { tag, literal, input } => {
            let (g, _) = load(&input, io)?;
            let c = parse_query(&tag, &literal)?;
            match engine::prove(&g, &c)? {
                Proof::Proved => {
                    writeln!(io.out, "proved: {c}")?;
                    Ok(exit::OK)
                }
                Proof::NotDerivable => {
                    writeln!(io.out, "not derivable: {c}")?;
                    Ok(exit::NOT_DERIVABLE)
                }
            }
        }
        Command::Explain { tag, literal, input } => {
            let (g, _) = load(&input, io)?;
            let c = parse_query(&tag, &literal)?;
            let d = explain(&g, &c)?;
            let mut prefix = HashSet::new();
            for (i, step) in d.steps.iter().enumerate() {
                let why = justify_step(&g, &prefix, step)
                    .ok_or_else(|| Failure::new(exit::INTERNAL, format!("step {} ({step}) is not justified", i + 1)))?;
                writeln!(io.out, "{:>3}. {step}    {why}", i + 1)?;
                prefix.insert(step.clone());
            }
            Ok(exit::OK)
        }
        Command::Meta { input } => {
            let (g, _) = load(&input, io)?;
            write!(io.out, "{}", metaprogram::translate(&g))?;
            Ok(exit::OK)
        }
        Command::Models {
            input,
            consequences,
            cap,
            json,
        } => {
            let (g, _) = load(&input, io)?;
            let count = modelcheck::count_models(&g, cap)?;
            let cons = if consequences {
                Some(modelcheck::logical_consequences(&g, cap)?)
            } else {
                None
            };
            if json {
                let mut doc = json!({ "models": count });
                if let Some(c) = &cons {
                    doc["consequences"] = c.iter().map(conclusion_json).collect();
                }
                let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::new(exit::INTERNAL, e))?;
                writeln!(io.out, "{text}")?;
            } else {
                writeln!(io.out, "models: {count}")?;
                if let Some(c) = cons {
                    write!(io.out, "{c}")?;
                }
            }
            Ok(exit::OK)
        }
        Command::Fuzz {
            seed,
            theories,
            max_atoms,
            max_rules,
            no_models,
            cap,
        } => {
            if max_atoms == 0 {
                return Err(Failure::new(exit::INVALID, "--max-atoms must be at least 1"));
            }
            let cfg = FuzzConfig {
                seed,
                theories,
                max_atoms,
                max_rules,
                models: !no_models,
                cap,
            };
            let report = fuzz(&cfg).map_err(|e| Failure::new(exit::CAP_EXCEEDED, e))?;
            for w in &report.witnesses {
                writeln!(io.out, "{}", w.to_json())?;
            }
            writeln!(
                io.err,
                "fuzz: {} theories, seed {seed}, {} witnesses, {:.2}s",
                report.theories,
                report.witnesses.len(),
                report.elapsed.as_secs_f64()
            )?;
            Ok(if report.is_clean() { exit::OK } else { exit::INTERNAL })
        }
        Command::Bench {
            sizes,
            attacks,
            repeats,
            json,
        } => {
            let rows = bench(&sizes, attacks, repeats)?;
            if json {
                let doc: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({ "rules": r.rules, "conclusions": r.conclusions, "seconds": r.elapsed.as_secs_f64() }))
                    .collect();
                let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::new(exit::INTERNAL, e))?;
                writeln!(io.out, "{text}")?;
            } else {
                writeln!(io.out, "{:>10} {:>12} {:>10} {:>8}", "rules", "conclusions", "ms", "ratio")?;
                let mut prev: Option<f64> = None;
                for r in &rows {
                    let ms = r.elapsed.as_secs_f64() * 1000.0;
                    let ratio = prev.map(|p| format!("{:.2}", ms / p)).unwrap_or_else(|| "-".into());
                    writeln!(io.out, "{:>10} {:>12} {:>10.2} {:>8}", r.rules, r.conclusions, ms, ratio)?;
                    prev = Some(ms);
                }
            }
            Ok(exit::OK)
        }
    }
}

