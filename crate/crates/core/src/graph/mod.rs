//! Labeled half-edge graphs.
//!
//! A [`Graph`] is a set of corollas (vertices with their attached flags) together with
//! an involution on the flags. Fixed points of the involution are external legs; every
//! other orbit is an internal edge. Vertex/edge graphs embed into this representation by
//! turning each edge into a pair of flags, see [`VertexEdgeView`].

mod analysis;
mod ops;

pub use analysis::{
    boundary_flags, classify_cycles, connectivity, cycle_boundary, directed_cycles, orientation_analysis, Connectivity,
    Cycle, CycleKind, Orientation,
};
pub use ops::{BoundaryItem, GlueMap, Glued, LabelPolicy, RemovalSemantics, Subgraph};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type FlagId = usize;

/// Direction of a flag relative to the vertex it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "in")]
    In,
    #[serde(rename = "out")]
    Out,
    #[serde(rename = "none")]
    Unoriented,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
            Direction::Unoriented => Direction::Unoriented,
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Direction::In => 0,
            Direction::Out => 1,
            Direction::Unoriented => 2,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("flag {0} appears in more than one pair")]
    DuplicatePairing(FlagId),
    #[error("paired flags {0} and {1} carry different labels")]
    LabelMismatchAcrossPair(FlagId, FlagId),
    #[error("paired flags {0} and {1} have incompatible directions")]
    OrientationClash(FlagId, FlagId),
    #[error("label `{0}` is not part of the alphabet")]
    UnknownLabel(String),
    #[error("graph mixes oriented and unoriented flags")]
    MixedOrientation,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown flag {0}")]
    UnknownFlag(FlagId),
    #[error("a graph needs at least one vertex")]
    EmptyGraph,
    #[error("flag {0} is not external")]
    NotExternal(FlagId),
    #[error("flag {0} is not part of an internal edge")]
    NotInternal(FlagId),
    #[error("labels differ: `{0}` vs `{1}`")]
    LabelMismatch(String, String),
    #[error("cannot join flag {0} with itself")]
    SameFlag(FlagId),
    #[error("graphs are defined over different alphabets")]
    AlphabetMismatch,
    #[error("graph has no root")]
    NoRoot,
    #[error("subgraph is not closed: {0}")]
    ClosureViolation(String),
    #[error("operation would remove every vertex")]
    EmptyResult,
    #[error("graph is not oriented")]
    Unoriented,
    #[error("interfaces are not isomorphic: {0}")]
    NotIsomorphicInterface(String),
}

/// Vertex and flag symbols, split into terminals and nonterminals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAlphabet {
    #[serde(default)]
    pub vertex_terminals: BTreeSet<String>,
    #[serde(default)]
    pub vertex_nonterminals: BTreeSet<String>,
    #[serde(default)]
    pub flag_terminals: BTreeSet<String>,
    #[serde(default)]
    pub flag_nonterminals: BTreeSet<String>,
}

impl LabelAlphabet {
    pub fn new<S: AsRef<str>>(
        vertex_terminals: &[S],
        vertex_nonterminals: &[S],
        flag_terminals: &[S],
        flag_nonterminals: &[S],
    ) -> Self {
        let set = |xs: &[S]| xs.iter().map(|s| s.as_ref().to_string()).collect();
        LabelAlphabet {
            vertex_terminals: set(vertex_terminals),
            vertex_nonterminals: set(vertex_nonterminals),
            flag_terminals: set(flag_terminals),
            flag_nonterminals: set(flag_nonterminals),
        }
    }

    /// Symbols that are declared both terminal and nonterminal.
    pub fn overlaps(&self) -> Vec<String> {
        self.vertex_terminals
            .intersection(&self.vertex_nonterminals)
            .chain(self.flag_terminals.intersection(&self.flag_nonterminals))
            .cloned()
            .collect()
    }

    pub fn has_vertex_label(&self, l: &str) -> bool {
        self.vertex_terminals.contains(l) || self.vertex_nonterminals.contains(l)
    }

    pub fn has_flag_label(&self, l: &str) -> bool {
        self.flag_terminals.contains(l) || self.flag_nonterminals.contains(l)
    }

    pub fn is_terminal_vertex(&self, l: &str) -> bool {
        self.vertex_terminals.contains(l)
    }

    pub fn is_terminal_flag(&self, l: &str) -> bool {
        self.flag_terminals.contains(l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub vertex: VertexId,
    pub label: String,
    pub dir: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub flags: Vec<FlagId>,
}

/// An immutable labeled graph in corolla/involution form.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<Vertex>,
    flags: Vec<Flag>,
    involution: Vec<FlagId>,
    root: Option<VertexId>,
    alphabet: Arc<LabelAlphabet>,
}

impl Graph {
    pub fn alphabet(&self) -> &Arc<LabelAlphabet> {
        &self.alphabet
    }

    pub fn same_alphabet(&self, other: &Graph) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || *self.alphabet == *other.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.vertices.len()
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertices[v].label
    }

    pub fn flags_at(&self, v: VertexId) -> &[FlagId] {
        &self.vertices[v].flags
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.vertices[v].flags.len()
    }

    pub fn flag(&self, f: FlagId) -> &Flag {
        &self.flags[f]
    }

    pub fn partner(&self, f: FlagId) -> FlagId {
        self.involution[f]
    }

    pub fn is_external(&self, f: FlagId) -> bool {
        self.involution[f] == f
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    /// True when every flag carries a direction. Flagless graphs count as oriented.
    pub fn is_oriented(&self) -> bool {
        self.flags.iter().all(|f| f.dir != Direction::Unoriented)
    }

    pub fn has_unoriented_flags(&self) -> bool {
        self.flags.iter().any(|f| f.dir == Direction::Unoriented)
    }

    /// Fixed points of the involution.
    pub fn external_flags(&self) -> Vec<FlagId> {
        (0..self.flags.len()).filter(|&f| self.is_external(f)).collect()
    }

    pub fn external_flags_at(&self, v: VertexId) -> Vec<FlagId> {
        self.vertices[v].flags.iter().copied().filter(|&f| self.is_external(f)).collect()
    }

    /// Internal edges as ordered flag pairs `(f, g)` with `f < g`.
    pub fn internal_edges(&self) -> Vec<(FlagId, FlagId)> {
        (0..self.flags.len())
            .filter_map(|f| {
                let g = self.involution[f];
                (f < g).then_some((f, g))
            })
            .collect()
    }

    /// Endpoints of the internal edge containing `f`, as (vertex of f, vertex of partner).
    pub fn edge_ends(&self, f: FlagId) -> (VertexId, VertexId) {
        (self.flags[f].vertex, self.flags[self.involution[f]].vertex)
    }

    /// For an oriented internal edge, the (source, target) vertex pair.
    pub fn source_target(&self, f: FlagId) -> Option<(VertexId, VertexId)> {
        let g = self.involution[f];
        if f == g {
            return None;
        }
        match self.flags[f].dir {
            Direction::Out => Some((self.flags[f].vertex, self.flags[g].vertex)),
            Direction::In => Some((self.flags[g].vertex, self.flags[f].vertex)),
            Direction::Unoriented => None,
        }
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices[v]
            .flags
            .iter()
            .filter(move |&&f| !self.is_external(f))
            .map(move |&f| self.flags[self.involution[f]].vertex)
    }

    /// Same graph with a different root.
    pub fn with_root(&self, root: Option<VertexId>) -> Result<Graph, GraphError> {
        if let Some(r) = root {
            if r >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(r));
            }
        }
        let mut g = self.clone();
        g.root = root;
        Ok(g)
    }

    /// Same graph with flag `f` relabeled (both ends of an internal edge follow).
    pub fn with_flag_label(&self, f: FlagId, label: &str) -> Result<Graph, GraphError> {
        if f >= self.flags.len() {
            return Err(GraphError::UnknownFlag(f));
        }
        if !self.alphabet.has_flag_label(label) {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        let mut g = self.clone();
        let p = g.involution[f];
        g.flags[f].label = label.to_string();
        g.flags[p].label = label.to_string();
        Ok(g)
    }

    pub fn with_vertex_label(&self, v: VertexId, label: &str) -> Result<Graph, GraphError> {
        if v >= self.vertices.len() {
            return Err(GraphError::UnknownVertex(v));
        }
        if !self.alphabet.has_vertex_label(label) {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        let mut g = self.clone();
        g.vertices[v].label = label.to_string();
        Ok(g)
    }

    /// True when every vertex and flag label is terminal.
    pub fn is_terminal(&self) -> bool {
        self.vertices.iter().all(|v| self.alphabet.is_terminal_vertex(&v.label))
            && self.flags.iter().all(|f| self.alphabet.is_terminal_flag(&f.label))
    }

    /// Rebuilds a graph from raw parts, validating every invariant.
    pub(crate) fn from_parts(
        alphabet: Arc<LabelAlphabet>,
        vertices: Vec<Vertex>,
        flags: Vec<Flag>,
        involution: Vec<FlagId>,
        root: Option<VertexId>,
    ) -> Result<Graph, GraphError> {
        let g = Graph { vertices, flags, involution, root, alphabet };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        if let Some(r) = self.root {
            if r >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(r));
            }
        }
        for v in &self.vertices {
            if !self.alphabet.has_vertex_label(&v.label) {
                return Err(GraphError::UnknownLabel(v.label.clone()));
            }
        }
        let mut oriented = false;
        let mut unoriented = false;
        for (i, f) in self.flags.iter().enumerate() {
            if f.vertex >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(f.vertex));
            }
            if !self.vertices[f.vertex].flags.contains(&i) {
                return Err(GraphError::UnknownFlag(i));
            }
            if !self.alphabet.has_flag_label(&f.label) {
                return Err(GraphError::UnknownLabel(f.label.clone()));
            }
            match f.dir {
                Direction::Unoriented => unoriented = true,
                _ => oriented = true,
            }
            let p = self.involution[i];
            if p >= self.flags.len() {
                return Err(GraphError::UnknownFlag(p));
            }
            if self.involution[p] != i {
                return Err(GraphError::DuplicatePairing(i));
            }
            if p != i {
                if self.flags[p].label != f.label {
                    return Err(GraphError::LabelMismatchAcrossPair(i, p));
                }
                let ok = matches!(
                    (f.dir, self.flags[p].dir),
                    (Direction::In, Direction::Out)
                        | (Direction::Out, Direction::In)
                        | (Direction::Unoriented, Direction::Unoriented)
                );
                if !ok {
                    return Err(GraphError::OrientationClash(i, p));
                }
            }
        }
        if oriented && unoriented {
            return Err(GraphError::MixedOrientation);
        }
        let attached: usize = self.vertices.iter().map(|v| v.flags.len()).sum();
        if attached != self.flags.len() {
            return Err(GraphError::UnknownFlag(attached));
        }
        Ok(())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let root = if self.root == Some(i) { "*" } else { "" };
            write!(f, "v{i}{root}:{}[", v.label)?;
            for (j, &fl) in v.flags.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                let d = match self.flags[fl].dir {
                    Direction::In => "<",
                    Direction::Out => ">",
                    Direction::Unoriented => "",
                };
                let p = self.involution[fl];
                if p == fl {
                    write!(f, "{d}{}:ext", self.flags[fl].label)?;
                } else {
                    write!(f, "{d}{}:v{}", self.flags[fl].label, self.flags[p].vertex)?;
                }
            }
            write!(f, "]")?;
        }
        write!(f, ")")
    }
}

/// Incremental graph construction. Flags are external until paired.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    alphabet: Arc<LabelAlphabet>,
    vertices: Vec<Vertex>,
    flags: Vec<Flag>,
    pairs: Vec<(FlagId, FlagId)>,
    root: Option<VertexId>,
}

impl GraphBuilder {
    pub fn new(alphabet: Arc<LabelAlphabet>) -> Self {
        GraphBuilder { alphabet, vertices: Vec::new(), flags: Vec::new(), pairs: Vec::new(), root: None }
    }

    pub fn vertex(&mut self, label: &str) -> VertexId {
        self.vertices.push(Vertex { label: label.to_string(), flags: Vec::new() });
        self.vertices.len() - 1
    }

    pub fn flag(&mut self, v: VertexId, label: &str, dir: Direction) -> FlagId {
        let id = self.flags.len();
        self.flags.push(Flag { vertex: v, label: label.to_string(), dir });
        self.vertices[v].flags.push(id);
        id
    }

    pub fn pair(&mut self, f: FlagId, g: FlagId) -> &mut Self {
        self.pairs.push((f, g));
        self
    }

    /// Adds an internal edge. Directed edges point from `a` to `b`.
    pub fn edge(&mut self, a: VertexId, b: VertexId, label: &str, directed: bool) -> (FlagId, FlagId) {
        let (da, db) =
            if directed { (Direction::Out, Direction::In) } else { (Direction::Unoriented, Direction::Unoriented) };
        let f = self.flag(a, label, da);
        let g = self.flag(b, label, db);
        self.pairs.push((f, g));
        (f, g)
    }

    pub fn root(&mut self, v: VertexId) -> &mut Self {
        self.root = Some(v);
        self
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        let n = self.flags.len();
        let mut inv: Vec<FlagId> = (0..n).collect();
        let mut used = vec![false; n];
        for &(f, g) in &self.pairs {
            if f >= n {
                return Err(GraphError::UnknownFlag(f));
            }
            if g >= n {
                return Err(GraphError::UnknownFlag(g));
            }
            if f == g || used[f] {
                return Err(GraphError::DuplicatePairing(f));
            }
            if used[g] {
                return Err(GraphError::DuplicatePairing(g));
            }
            used[f] = true;
            used[g] = true;
            inv[f] = g;
            inv[g] = f;
        }
        for v in &self.vertices {
            if !self.alphabet.has_vertex_label(&v.label) {
                return Err(GraphError::UnknownLabel(v.label.clone()));
            }
        }
        for fl in &self.flags {
            if !self.alphabet.has_flag_label(&fl.label) {
                return Err(GraphError::UnknownLabel(fl.label.clone()));
            }
        }
        Graph::from_parts(self.alphabet.clone(), self.vertices.clone(), self.flags.clone(), inv, self.root)
    }
}

/// Corolla description used by [`build_graph`]: a vertex label and its flags.
pub type CorollaSpec<'a> = (&'a str, Vec<(&'a str, Direction)>);

/// Builds a graph from corollas and a pairing. Flag ids are assigned in corolla order.
pub fn build_graph(
    alphabet: Arc<LabelAlphabet>,
    corollas: &[CorollaSpec<'_>],
    pairing: &[(FlagId, FlagId)],
    root: Option<VertexId>,
) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new(alphabet);
    for (label, flags) in corollas {
        let v = b.vertex(label);
        for (fl, dir) in flags {
            b.flag(v, fl, *dir);
        }
    }
    for &(f, g) in pairing {
        b.pair(f, g);
    }
    if let Some(r) = root {
        if r >= corollas.len() {
            return Err(GraphError::UnknownVertex(r));
        }
        b.root(r);
    }
    b.build()
}

/// A single vertex with `k` external flags of the same label.
pub fn star(alphabet: Arc<LabelAlphabet>, vertex_label: &str, flag_label: &str, k: usize) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new(alphabet);
    let v = b.vertex(vertex_label);
    for _ in 0..k {
        b.flag(v, flag_label, Direction::Unoriented);
    }
    b.root(v);
    b.build()
}

/// Vertex/edge description of a graph without external flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexEdgeView {
    pub vertex_labels: Vec<String>,
    /// `(v1, v2, label)`; ordered as (source, target) when `oriented`.
    pub edges: Vec<(VertexId, VertexId, String)>,
    pub oriented: bool,
    pub root: Option<VertexId>,
}

impl VertexEdgeView {
    /// Converts a graph without external flags. Returns `None` when a leg is present.
    pub fn from_graph(g: &Graph) -> Option<VertexEdgeView> {
        if !g.external_flags().is_empty() {
            return None;
        }
        let oriented = !g.has_unoriented_flags();
        let edges = g
            .internal_edges()
            .into_iter()
            .map(|(f, p)| {
                let (a, b) = match g.source_target(f) {
                    Some(st) => st,
                    None => g.edge_ends(f),
                };
                let _ = p;
                (a, b, g.flag(f).label.clone())
            })
            .collect();
        Some(VertexEdgeView {
            vertex_labels: g.vertices.iter().map(|v| v.label.clone()).collect(),
            edges,
            oriented,
            root: g.root,
        })
    }

    pub fn to_graph(&self, alphabet: Arc<LabelAlphabet>) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new(alphabet);
        for l in &self.vertex_labels {
            b.vertex(l);
        }
        for (a, c, l) in &self.edges {
            if *a >= self.vertex_labels.len() {
                return Err(GraphError::UnknownVertex(*a));
            }
            if *c >= self.vertex_labels.len() {
                return Err(GraphError::UnknownVertex(*c));
            }
            b.edge(*a, *c, l, self.oriented);
        }
        if let Some(r) = self.root {
            b.root(r);
        }
        b.build()
    }
}
