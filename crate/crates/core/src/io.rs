//! JSON and DOT formats for graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Direction, FlagId, Graph, GraphBuilder, GraphError, LabelAlphabet, VertexId};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("no alphabet given")]
    MissingAlphabet,
    #[error("{0}")]
    Schema(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlagDoc {
    pub id: String,
    pub label: String,
    #[serde(default = "unoriented")]
    pub dir: Direction,
}

fn unoriented() -> Direction {
    Direction::Unoriented
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexDoc {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub flags: Vec<FlagDoc>,
}

/// Serialized graph. Ids are arbitrary strings, unique within the document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<LabelAlphabet>,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub pairing: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

/// Maps from document ids to graph indices.
#[derive(Clone, Debug, Default)]
pub struct IdMaps {
    pub vertices: BTreeMap<String, VertexId>,
    pub flags: BTreeMap<String, FlagId>,
}

impl IdMaps {
    pub fn vertex(&self, id: &str) -> Result<VertexId, IoError> {
        self.vertices.get(id).copied().ok_or_else(|| IoError::UnknownId(id.to_string()))
    }

    pub fn flag(&self, id: &str) -> Result<FlagId, IoError> {
        self.flags.get(id).copied().ok_or_else(|| IoError::UnknownId(id.to_string()))
    }
}

impl GraphDoc {
    pub fn from_graph(g: &Graph, with_alphabet: bool) -> GraphDoc {
        let vertices = g
            .vertices()
            .map(|v| VertexDoc {
                id: format!("v{v}"),
                label: g.vertex_label(v).to_string(),
                flags: g
                    .flags_at(v)
                    .iter()
                    .map(|&f| FlagDoc { id: format!("f{f}"), label: g.flag(f).label.clone(), dir: g.flag(f).dir })
                    .collect(),
            })
            .collect();
        let pairing = g.internal_edges().into_iter().map(|(a, b)| (format!("f{a}"), format!("f{b}"))).collect();
        GraphDoc {
            alphabet: with_alphabet.then(|| (**g.alphabet()).clone()),
            vertices,
            pairing,
            root: g.root().map(|r| format!("v{r}")),
        }
    }

    /// Builds the graph, using the document's own alphabet when present and `fallback` otherwise.
    pub fn to_graph(&self, fallback: Option<&Arc<LabelAlphabet>>) -> Result<(Graph, IdMaps), IoError> {
        let alphabet = match (&self.alphabet, fallback) {
            (Some(a), Some(f)) if **f == *a => f.clone(),
            (Some(a), _) => Arc::new(a.clone()),
            (None, Some(f)) => f.clone(),
            (None, None) => return Err(IoError::MissingAlphabet),
        };
        let mut b = GraphBuilder::new(alphabet);
        let mut ids = IdMaps::default();
        for vd in &self.vertices {
            let v = b.vertex(&vd.label);
            if ids.vertices.insert(vd.id.clone(), v).is_some() {
                return Err(IoError::DuplicateId(vd.id.clone()));
            }
            for fd in &vd.flags {
                let f = b.flag(v, &fd.label, fd.dir);
                if ids.flags.insert(fd.id.clone(), f).is_some() {
                    return Err(IoError::DuplicateId(fd.id.clone()));
                }
            }
        }
        for (x, y) in &self.pairing {
            b.pair(ids.flag(x)?, ids.flag(y)?);
        }
        if let Some(r) = &self.root {
            b.root(ids.vertex(r)?);
        }
        Ok((b.build()?, ids))
    }
}

pub fn graph_to_json(g: &Graph) -> serde_json::Value {
    serde_json::to_value(GraphDoc::from_graph(g, true)).expect("graph documents serialize")
}

pub fn graph_from_json(text: &str, fallback: Option<&Arc<LabelAlphabet>>) -> Result<Graph, IoError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    Ok(doc.to_graph(fallback)?.0)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering. Legs end at invisible points; directed graphs draw arrowheads.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let directed = !g.has_unoriented_flags() && g.flag_count() > 0;
    let (kind, arrow) = if directed { ("digraph", "->") } else { ("graph", "--") };
    let mut out = String::new();
    let _ = writeln!(out, "{kind} {} {{", quote(name));
    for v in g.vertices() {
        let shape = if g.root() == Some(v) { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  v{v} [label={}{shape}];", quote(g.vertex_label(v)));
    }
    for (f, p) in g.internal_edges() {
        let (a, b) = g.source_target(f).unwrap_or_else(|| g.edge_ends(f));
        let _ = writeln!(out, "  v{a} {arrow} v{b} [label={}];", quote(&g.flag(p).label));
    }
    for f in g.external_flags() {
        let fl = g.flag(f);
        let _ = writeln!(out, "  x{f} [shape=point, style=invis];");
        let (a, b) = match fl.dir {
            Direction::In => (format!("x{f}"), format!("v{}", fl.vertex)),
            _ => (format!("v{}", fl.vertex), format!("x{f}")),
        };
        let _ = writeln!(out, "  {a} {arrow} {b} [label={}];", quote(&fl.label));
    }
    out.push_str("}\n");
    out
}
