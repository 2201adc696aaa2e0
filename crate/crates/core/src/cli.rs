//! Command-line front end. Exit status: 0 success, 1 negative verdict,
//! 2 usage, parse or rejection error.

use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::enumeration::{enumerate_mags, test_conjecture1_with, verify_theorems_with, Census};
use crate::equivalence::{equivalence_failure, markov_equivalent_bruteforce};
use crate::error::{Error, Result};
use crate::graph::{MixedGraph, NodeId, NodeSet};
use crate::io::{parse_dot, parse_json, to_dot, to_json, GraphJson};
use crate::mag::{ancestral_violation, maximality_violation, Mag};
use crate::separation::m_connecting_path;
use crate::transform::{apply_move, equivalence_class_closure, legal_moves, MoveDescriptor, MoveKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "ancestral", version, about = "Maximal ancestral graph toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report ancestrality, maximality and MAG status with a witness.
    Validate { graph: String },
    /// Decide m-separation of two nodes given a set.
    Separate {
        graph: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Comma-separated conditioning set.
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
    },
    /// Test two MAGs for Markov equivalence.
    Equiv {
        first: String,
        second: String,
        /// Compare every pairwise m-separation statement instead.
        #[arg(long)]
        oracle: bool,
    },
    /// List legal single edge replacements.
    Moves { graph: String },
    /// Apply one edge replacement.
    Apply {
        graph: String,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Explore the MAGs reachable by legal moves.
    Class {
        graph: String,
        #[arg(long, default_value_t = 10_000)]
        max: usize,
    },
    /// Print every MAG on N labeled nodes.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive conjecture probe with theorem checks (JSON report).
    Conjecture {
        #[arg(long)]
        n: usize,
        /// Skip the theorem checks.
        #[arg(long)]
        no_checks: bool,
    },
    /// Export a graph as DOT.
    Dot { graph: String },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let mut io = Io { stdin, out };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_graph(path: &str, io: &mut Io<'_>) -> Result<MixedGraph> {
    let text = if path == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    if text.trim_start().starts_with("digraph") {
        parse_dot(&text)
    } else {
        parse_json(&text)
    }
}

fn read_mag(path: &str, io: &mut Io<'_>) -> Result<Mag> {
    Mag::new(read_graph(path, io)?)
}

fn node(g: &MixedGraph, label: &str) -> Result<NodeId> {
    g.node_by_label(label)
}

/// Reorders `g`'s nodes to follow `labels`.
fn align(labels: &[String], g: &MixedGraph) -> Result<MixedGraph> {
    let mut theirs = g.labels();
    let mut ours = labels.to_vec();
    theirs.sort();
    ours.sort();
    if theirs != ours {
        return Err(Error::NodeSetMismatch(format!("{:?} vs {:?}", labels, g.labels())));
    }
    let mut out = MixedGraph::with_labels(labels.iter().cloned())?;
    for e in g.edges() {
        let map = |v: NodeId| out.node_by_label(&g.label(v));
        let edge = match e {
            crate::graph::Edge::Directed { tail, head } => {
                crate::graph::Edge::directed(map(tail)?, map(head)?)
            }
            crate::graph::Edge::Bidirected(a, b) => crate::graph::Edge::bidirected(map(a)?, map(b)?),
        };
        out.add_edge(edge)?;
    }
    Ok(out)
}

fn emit_graph(g: &MixedGraph, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", to_json(g))?,
        Format::Dot => write!(out, "{}", to_dot(g))?,
        Format::Text => {
            let edges: Vec<String> = g.edges().iter().map(|e| e.render(g)).collect();
            writeln!(out, "{}\t{}", g.canonical_key(), edges.join(", "))?
        }
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<i32> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { graph } => {
            let g = read_graph(graph, io)?;
            let (ancestral, maximal, witness) = match ancestral_violation(&g) {
                Some(v) => (false, None, Some(v.describe(&g))),
                None => match maximality_violation(&g) {
                    Some((_, _, p)) => (true, Some(false), Some(format!("inducing path {}", p.render(&g)))),
                    None => (true, Some(true), None),
                },
            };
            let mag = ancestral && maximal == Some(true);
            if format == Format::Json {
                let v = json!({"ancestral": ancestral, "maximal": maximal, "mag": mag, "witness": witness});
                writeln!(io.out, "{v}")?;
            } else {
                let maximal_text = maximal.map_or("n/a", yes_no);
                match witness {
                    Some(w) => writeln!(
                        io.out,
                        "ancestral: {}; maximal: {maximal_text}; witness {w}",
                        yes_no(ancestral)
                    )?,
                    None => writeln!(io.out, "ancestral: yes; maximal: yes; MAG")?,
                }
            }
            Ok(if mag { 0 } else { 1 })
        }
        Command::Separate { graph, x, y, given } => {
            let g = read_graph(graph, io)?;
            let (xn, yn) = (node(&g, x)?, node(&g, y)?);
            let z: NodeSet = given
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| node(&g, s))
                .collect::<Result<_>>()?;
            let path = m_connecting_path(&g, xn, yn, &z)?;
            if format == Format::Json {
                let v = json!({
                    "connected": path.is_some(),
                    "path": path.as_ref().map(|p| p.render(&g)),
                });
                writeln!(io.out, "{v}")?;
            } else {
                match &path {
                    Some(p) => writeln!(io.out, "connected via {}", p.render(&g))?,
                    None => writeln!(
                        io.out,
                        "separated: {x} and {y} are m-separated given {}",
                        g.render_set(&z)
                    )?,
                }
            }
            Ok(0)
        }
        Command::Equiv {
            first,
            second,
            oracle,
        } => {
            let m1 = read_mag(first, io)?;
            let g2 = read_graph(second, io)?;
            let m2 = Mag::new(align(&m1.labels(), &g2)?)?;
            let (equivalent, reason) = if *oracle {
                (markov_equivalent_bruteforce(&m1, &m2)?, None)
            } else {
                let failure = equivalence_failure(&m1, &m2)?;
                (failure.is_none(), failure.map(|f| f.describe(&m1, &m2)))
            };
            if format == Format::Json {
                writeln!(io.out, "{}", json!({"equivalent": equivalent, "reason": reason}))?;
            } else if equivalent {
                writeln!(io.out, "equivalent")?;
            } else {
                match reason {
                    Some(r) => writeln!(io.out, "not equivalent: {r}")?,
                    None => writeln!(io.out, "not equivalent")?,
                }
            }
            Ok(if equivalent { 0 } else { 1 })
        }
        Command::Moves { graph } => {
            let m = read_mag(graph, io)?;
            let moves = legal_moves(&m);
            if format == Format::Json {
                let v: Vec<_> = moves
                    .iter()
                    .map(|mv| json!({"kind": mv.kind, "x": m.label(mv.x), "y": m.label(mv.y)}))
                    .collect();
                writeln!(io.out, "{}", serde_json::Value::Array(v))?;
            } else {
                for mv in &moves {
                    writeln!(io.out, "{}", mv.render(&m))?;
                }
            }
            Ok(0)
        }
        Command::Apply { graph, kind, x, y } => {
            let m = read_mag(graph, io)?;
            let kind: MoveKind = kind.parse()?;
            let mv = MoveDescriptor::new(kind, node(&m, x)?, node(&m, y)?);
            let out = apply_move(&m, &mv)?;
            emit_graph(&out, format, io.out)?;
            Ok(0)
        }
        Command::Class { graph, max } => {
            let m = read_mag(graph, io)?;
            let closure = equivalence_class_closure(&m, *max);
            let labels = m.labels();
            let members: Vec<(String, MixedGraph)> = closure
                .members
                .iter()
                .map(|(k, g)| Ok((k.clone(), g.relabeled(labels.iter().cloned())?)))
                .collect::<Result<_>>()?;
            match format {
                Format::Json => {
                    let v: Vec<_> = members
                        .iter()
                        .map(|(k, g)| json!({"key": k, "graph": GraphJson::from_graph(g)}))
                        .collect();
                    writeln!(io.out, "{}", json!({"truncated": closure.truncated, "members": v}))?;
                }
                _ => {
                    for (_, g) in &members {
                        emit_graph(g, format, io.out)?;
                    }
                    if closure.truncated {
                        writeln!(io.out, "# truncated at {max} graphs")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Enumerate { n } => {
            for m in enumerate_mags(*n)? {
                match format {
                    Format::Text => writeln!(io.out, "{}", m.canonical_key())?,
                    _ => emit_graph(&m, format, io.out)?,
                }
            }
            Ok(0)
        }
        Command::Conjecture { n, no_checks } => {
            let census = Census::new(*n)?;
            let mut report = test_conjecture1_with(&census);
            if !no_checks {
                report.checks = Some(verify_theorems_with(&census).checks);
            }
            writeln!(io.out, "{}", report.to_json())?;
            let failed = report.checks.as_ref().is_some_and(|c| !c.passed());
            Ok(if failed { 1 } else { 0 })
        }
        Command::Dot { graph } => {
            let g = read_graph(graph, io)?;
            write!(io.out, "{}", to_dot(&g))?;
            Ok(0)
        }
    }
}
