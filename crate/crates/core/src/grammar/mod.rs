//! Production rules, grammars and bounded derivation.
//!
//! Rules come in two families. Graph rules carry an explicit `(G_L, H, G_R)` triple with
//! interface maps and are applied by gluing or by replacement. Flag rules are the small
//! fixed-shape productions that the Feynman grammars are built from: joining two legs into
//! an edge, attaching a copy of a fixed graph along a leg, marking a leg or vertex terminal,
//! growing a corolla by one leg, and inserting a two-valent vertex into an edge.

mod apply;
mod derive;
mod json;

pub use apply::{apply, matches};
pub use derive::{derive, language, Bounds, Derivation, DerivationStep};
pub use json::{grammar_from_json, grammar_to_json};

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::Embedding;
use crate::graph::{Graph, GraphError, LabelAlphabet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("embedding is not a match of rule {0:?}")]
    NotAMatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleMode {
    /// Glue `G_R` onto the host along the matched interface.
    InsertGlue,
    /// Delete the matched `G_L ∖ H` with its star of edges, then glue `G_R`.
    ReplaceV1,
    /// Cut the matched `G_L ∖ H` out, then glue `G_R` and reconnect the cut half-edges.
    ReplaceV2,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleConstraints {
    /// Every external flag of the interface must be incoming, on both sides and in the host.
    #[serde(default)]
    pub interface_incoming: bool,
}

/// A rule given by an explicit triple `(G_L, H, G_R)` with interface maps.
#[derive(Clone, Debug)]
pub struct GraphRule {
    pub mode: RuleMode,
    pub lhs: Graph,
    /// `None` is the empty interface.
    pub interface: Option<Graph>,
    pub rhs: Graph,
    pub phi_l: Embedding,
    pub phi_r: Embedding,
    /// For `ReplaceV2`: (flag of `G_L`, leg of `G_R`) pairs reconnecting cut edges.
    pub boundary: Vec<(usize, usize)>,
    pub constraints: RuleConstraints,
}

#[derive(Clone, Debug)]
pub enum RuleKind {
    Graph(Box<GraphRule>),
    /// Pair two distinct legs labeled `label`; the new edge is labeled `result`.
    JoinFlags {
        label: String,
        result: String,
    },
    /// Join a leg labeled `label` to the first such leg of a fresh copy of `copy`.
    AttachCopy {
        label: String,
        result: String,
        copy: Graph,
    },
    /// Relabel one leg.
    Mark {
        from: String,
        to: String,
    },
    /// Relabel a vertex whose valence lies in `valences`.
    MarkVertex {
        from: String,
        to: String,
        valences: Vec<usize>,
    },
    /// Add a leg labeled `flag_label` to a vertex labeled `vertex_label` of valence below `max_valence`.
    Grow {
        vertex_label: String,
        flag_label: String,
        max_valence: usize,
    },
    /// Put a new vertex labeled `vertex_label` in the middle of an edge labeled `edge_label`.
    Subdivide {
        edge_label: String,
        vertex_label: String,
    },
}

#[derive(Clone, Debug)]
pub struct ProductionRule {
    pub name: String,
    pub kind: RuleKind,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub alphabet: Arc<LabelAlphabet>,
    pub start: Graph,
    pub rules: Vec<ProductionRule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    AlphabetOverlap { symbols: Vec<String> },
    StartAlphabetMismatch,
    RuleAlphabetMismatch { rule: usize },
    UnknownLabel { rule: usize, label: String },
    PhiLMalformed { rule: usize, reason: String },
    PhiRMalformed { rule: usize, reason: String },
    PhiLNotLabelPreserving { rule: usize },
    BoundaryMalformed { rule: usize, reason: String },
    CopyWithoutLeg { rule: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrammarClass {
    ContextFree,
    ContextSensitive,
}

/// Checks that `m` is a structure-preserving injection of `h` into `target` (labels aside).
pub(crate) fn check_morphism(h: &Graph, target: &Graph, m: &Embedding) -> Result<(), String> {
    if m.vertex_map.len() != h.vertex_count() || m.flag_map.len() != h.flag_count() {
        return Err("map size differs from the interface".into());
    }
    let distinct = |xs: &[usize]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
    if !distinct(&m.vertex_map) || !distinct(&m.flag_map) {
        return Err("map is not injective".into());
    }
    if m.vertex_map.iter().any(|&v| v >= target.vertex_count()) || m.flag_map.iter().any(|&f| f >= target.flag_count())
    {
        return Err("map leaves the target".into());
    }
    for f in 0..h.flag_count() {
        let (hf, tf) = (h.flag(f), target.flag(m.flag_map[f]));
        if m.vertex_map[hf.vertex] != tf.vertex {
            return Err(format!("flag {f} is not carried with its vertex"));
        }
        if hf.dir != tf.dir {
            return Err(format!("flag {f} changes direction"));
        }
        let p = h.partner(f);
        if p != f && target.partner(m.flag_map[f]) != m.flag_map[p] {
            return Err(format!("edge at flag {f} is not preserved"));
        }
    }
    Ok(())
}

fn label_preserving(h: &Graph, target: &Graph, m: &Embedding) -> bool {
    h.vertices().all(|v| h.vertex_label(v) == target.vertex_label(m.vertex_map[v]))
        && (0..h.flag_count()).all(|f| h.flag(f).label == target.flag(m.flag_map[f]).label)
}

fn rule_graphs(kind: &RuleKind) -> Vec<&Graph> {
    match kind {
        RuleKind::Graph(r) => {
            let mut v = vec![&r.lhs, &r.rhs];
            v.extend(r.interface.as_ref());
            v
        }
        RuleKind::AttachCopy { copy, .. } => vec![copy],
        _ => vec![],
    }
}

fn rule_labels(kind: &RuleKind) -> (Vec<&str>, Vec<&str>) {
    match kind {
        RuleKind::Graph(_) => (vec![], vec![]),
        RuleKind::JoinFlags { label, result } | RuleKind::AttachCopy { label, result, .. } => {
            (vec![], vec![label, result])
        }
        RuleKind::Mark { from, to } => (vec![], vec![from, to]),
        RuleKind::MarkVertex { from, to, .. } => (vec![from, to], vec![]),
        RuleKind::Grow { vertex_label, flag_label, .. } => (vec![vertex_label], vec![flag_label]),
        RuleKind::Subdivide { edge_label, vertex_label } => (vec![vertex_label], vec![edge_label]),
    }
}

/// All rule-level defects of a grammar; empty when the grammar is well formed.
pub fn validate_grammar(g: &Grammar) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let overlap = g.alphabet.overlaps();
    if !overlap.is_empty() {
        out.push(Diagnostic::AlphabetOverlap { symbols: overlap });
    }
    if **g.start.alphabet() != *g.alphabet {
        out.push(Diagnostic::StartAlphabetMismatch);
    }
    for (i, rule) in g.rules.iter().enumerate() {
        if rule_graphs(&rule.kind).iter().any(|x| **x.alphabet() != *g.alphabet) {
            out.push(Diagnostic::RuleAlphabetMismatch { rule: i });
        }
        let (vl, fl) = rule_labels(&rule.kind);
        for l in vl.into_iter().filter(|l| !g.alphabet.has_vertex_label(l)) {
            out.push(Diagnostic::UnknownLabel { rule: i, label: l.to_string() });
        }
        for l in fl.into_iter().filter(|l| !g.alphabet.has_flag_label(l)) {
            out.push(Diagnostic::UnknownLabel { rule: i, label: l.to_string() });
        }
        match &rule.kind {
            RuleKind::Graph(r) => validate_graph_rule(i, r, &mut out),
            RuleKind::AttachCopy { label, copy, .. }
                if !copy.external_flags().iter().any(|&f| copy.flag(f).label == *label) =>
            {
                out.push(Diagnostic::CopyWithoutLeg { rule: i });
            }
            _ => {}
        }
    }
    out
}

fn validate_graph_rule(i: usize, r: &GraphRule, out: &mut Vec<Diagnostic>) {
    match &r.interface {
        Some(h) => {
            match check_morphism(h, &r.lhs, &r.phi_l) {
                Err(reason) => out.push(Diagnostic::PhiLMalformed { rule: i, reason }),
                Ok(()) if !label_preserving(h, &r.lhs, &r.phi_l) => {
                    out.push(Diagnostic::PhiLNotLabelPreserving { rule: i })
                }
                Ok(()) => {}
            }
            if let Err(reason) = check_morphism(h, &r.rhs, &r.phi_r) {
                out.push(Diagnostic::PhiRMalformed { rule: i, reason });
            }
        }
        None => {
            if !r.phi_l.vertex_map.is_empty() || !r.phi_l.flag_map.is_empty() {
                out.push(Diagnostic::PhiLMalformed { rule: i, reason: "empty interface with nonempty map".into() });
            }
            if !r.phi_r.vertex_map.is_empty() || !r.phi_r.flag_map.is_empty() {
                out.push(Diagnostic::PhiRMalformed { rule: i, reason: "empty interface with nonempty map".into() });
            }
        }
    }
    if r.mode != RuleMode::ReplaceV2 && !r.boundary.is_empty() {
        out.push(Diagnostic::BoundaryMalformed { rule: i, reason: "boundary pairs need replace-v2".into() });
    }
    let interface_vertices: BTreeSet<usize> = r.phi_l.vertex_map.iter().copied().collect();
    for &(lf, rf) in &r.boundary {
        if lf >= r.lhs.flag_count() || rf >= r.rhs.flag_count() {
            out.push(Diagnostic::BoundaryMalformed { rule: i, reason: format!("pair ({lf},{rf}) out of range") });
            continue;
        }
        if interface_vertices.contains(&r.lhs.flag(lf).vertex) {
            out.push(Diagnostic::BoundaryMalformed { rule: i, reason: format!("flag {lf} sits on the interface") });
        }
        if !r.rhs.is_external(rf) {
            out.push(Diagnostic::BoundaryMalformed { rule: i, reason: format!("rhs flag {rf} is not a leg") });
        }
    }
}

/// Context-free iff every rule is a graph rule whose left side is one vertex: either bare,
/// or a corolla of legs whose valence is the same across all such rules.
pub fn classify_grammar(g: &Grammar) -> GrammarClass {
    let mut valence = None;
    for rule in &g.rules {
        let RuleKind::Graph(r) = &rule.kind else {
            return GrammarClass::ContextSensitive;
        };
        if r.lhs.vertex_count() != 1 || !r.lhs.internal_edges().is_empty() {
            return GrammarClass::ContextSensitive;
        }
        let k = r.lhs.valence(0);
        if k > 0 {
            if valence.is_some_and(|v| v != k) {
                return GrammarClass::ContextSensitive;
            }
            valence = Some(k);
        }
    }
    GrammarClass::ContextFree
}
