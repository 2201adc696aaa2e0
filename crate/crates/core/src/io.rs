//! JSON and DOT encodings of mixed graphs.
//!
//! JSON: `{"nodes": ["A", …], "edges": [{"u": "A", "v": "B", "type": "directed"}, …]}`
//! where `u` is the tail of a directed edge. DOT: `A -> B;` for directed and
//! `A -> B [dir=both];` for bi-directed edges, nodes declared in index order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, MixedGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    #[serde(rename = "type")]
    pub kind: EdgeType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeType {
    Directed,
    Bidirected,
}

impl GraphJson {
    pub fn from_graph(g: &MixedGraph) -> Self {
        let edges = g
            .edges()
            .into_iter()
            .map(|e| {
                let (u, v, kind) = match e {
                    Edge::Directed { tail, head } => (tail, head, EdgeType::Directed),
                    Edge::Bidirected(a, b) => (a, b, EdgeType::Bidirected),
                };
                EdgeJson {
                    u: g.label(u).into_owned(),
                    v: g.label(v).into_owned(),
                    kind,
                }
            })
            .collect();
        GraphJson {
            nodes: g.labels(),
            edges,
        }
    }

    pub fn into_graph(self) -> Result<MixedGraph> {
        let mut g = MixedGraph::with_labels(self.nodes)?;
        for e in self.edges {
            let (u, v) = (g.node_by_label(&e.u)?, g.node_by_label(&e.v)?);
            let edge = match e.kind {
                EdgeType::Directed => Edge::directed(u, v),
                EdgeType::Bidirected => Edge::bidirected(u, v),
            };
            g.add_edge(edge)?;
        }
        Ok(g)
    }
}

pub fn parse_json(text: &str) -> Result<MixedGraph> {
    serde_json::from_str::<GraphJson>(text)?.into_graph()
}

pub fn to_json(g: &MixedGraph) -> String {
    serde_json::to_string(&GraphJson::from_graph(g)).expect("graph JSON is serializable")
}

pub fn to_json_pretty(g: &MixedGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from_graph(g)).expect("graph JSON is serializable")
}

const DOT_KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

fn dot_id(label: &str) -> String {
    let bare_ident = label
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !DOT_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(label));
    let numeral = !label.is_empty() && label.chars().all(|c| c.is_ascii_digit());
    if bare_ident || numeral {
        label.to_string()
    } else {
        let escaped = label.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

pub fn to_dot(g: &MixedGraph) -> String {
    let mut out = String::from("digraph {\n");
    for v in g.nodes() {
        out.push_str(&format!("  {};\n", dot_id(&g.label(v))));
    }
    for e in g.edges() {
        let line = match e {
            Edge::Directed { tail, head } => {
                format!("  {} -> {};\n", dot_id(&g.label(tail)), dot_id(&g.label(head)))
            }
            Edge::Bidirected(a, b) => format!(
                "  {} -> {} [dir=both];\n",
                dot_id(&g.label(a)),
                dot_id(&g.label(b))
            ),
        };
        out.push_str(&line);
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, PartialEq)]
enum Token {
    Id(String),
    Arrow,
    Semi,
    Attrs(String),
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let err = |message: &str| Error::Dot {
        line: lineno,
        message: message.to_string(),
    };
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                chars.next();
                tokens.push(Token::Semi);
            }
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(err("expected `->`"));
                }
                tokens.push(Token::Arrow);
            }
            '[' => {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(c) => body.push(c),
                        None => return Err(err("unterminated attribute list")),
                    }
                }
                tokens.push(Token::Attrs(body.split_whitespace().collect()));
            }
            '"' => {
                chars.next();
                let mut id = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(c) => id.push(c),
                            None => return Err(err("dangling escape")),
                        },
                        Some(c) => id.push(c),
                        None => return Err(err("unterminated string")),
                    }
                }
                tokens.push(Token::Id(id));
            }
            _ => {
                let mut id = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, ';' | '[' | '-' | '"') {
                        break;
                    }
                    id.push(c);
                    chars.next();
                }
                tokens.push(Token::Id(id));
            }
        }
    }
    Ok(tokens)
}

/// Parses the DOT subset produced by [`to_dot`]: one statement per line,
/// node statements first.
pub fn parse_dot(text: &str) -> Result<MixedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, bool, usize)> = Vec::new();
    let mut opened = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if !opened {
            if line.starts_with("digraph") && line.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(Error::Dot {
                line: lineno,
                message: "expected `digraph {`".into(),
            });
        }
        if line == "}" {
            break;
        }
        let bad = |message: &str| Error::Dot {
            line: lineno,
            message: message.to_string(),
        };
        match tokenize(line, lineno)?.as_slice() {
            [Token::Id(v), Token::Semi] => labels.push(v.clone()),
            [Token::Id(u), Token::Arrow, Token::Id(v), Token::Semi] => {
                edges.push((u.clone(), v.clone(), false, lineno))
            }
            [Token::Id(u), Token::Arrow, Token::Id(v), Token::Attrs(a), Token::Semi] => {
                if a != "dir=both" {
                    return Err(bad("only the `[dir=both]` attribute is understood"));
                }
                edges.push((u.clone(), v.clone(), true, lineno))
            }
            _ => return Err(bad("unrecognised statement")),
        }
    }
    if !opened {
        return Err(Error::Dot {
            line: 0,
            message: "empty input".into(),
        });
    }
    let mut g = MixedGraph::with_labels(labels)?;
    for (u, v, both, _) in edges {
        let (u, v) = (g.node_by_label(&u)?, g.node_by_label(&v)?);
        g.add_edge(if both {
            Edge::bidirected(u, v)
        } else {
            Edge::directed(u, v)
        })?;
    }
    Ok(g)
}
