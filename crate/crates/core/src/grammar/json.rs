use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Grammar, GraphRule, ProductionRule, RuleConstraints, RuleKind, RuleMode};
use crate::embed::Embedding;
use crate::graph::{Graph, LabelAlphabet};
use crate::io::{GraphDoc, IdMaps, IoError};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct MapDoc {
    #[serde(default)]
    vertices: BTreeMap<String, String>,
    #[serde(default)]
    flags: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphRuleDoc {
    lhs: GraphDoc,
    #[serde(default)]
    interface: Option<GraphDoc>,
    rhs: GraphDoc,
    #[serde(default, rename = "phiL")]
    phi_l: MapDoc,
    #[serde(default, rename = "phiR")]
    phi_r: MapDoc,
    #[serde(default)]
    boundary: Vec<(String, String)>,
    #[serde(default)]
    constraints: RuleConstraints,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
enum RuleDoc {
    InsertGlue(GraphRuleDoc),
    ReplaceV1(GraphRuleDoc),
    ReplaceV2(GraphRuleDoc),
    JoinFlags { label: String, result: String },
    AttachCopy { label: String, result: String, copy: GraphDoc },
    Mark { from: String, to: String },
    MarkVertex { from: String, to: String, valences: Vec<usize> },
    Grow { vertex_label: String, flag_label: String, max_valence: usize },
    Subdivide { edge_label: String, vertex_label: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RuleEntry {
    #[serde(default)]
    name: String,
    #[serde(flatten)]
    rule: RuleDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GrammarDoc {
    alphabet: LabelAlphabet,
    start: GraphDoc,
    rules: Vec<RuleEntry>,
}

fn resolve(doc: &MapDoc, from: &IdMaps, to: &IdMaps, size: (usize, usize)) -> Result<Embedding, IoError> {
    let mut vertex_map = vec![usize::MAX; size.0];
    for (a, b) in &doc.vertices {
        vertex_map[from.vertex(a)?] = to.vertex(b)?;
    }
    let mut flag_map = vec![usize::MAX; size.1];
    for (a, b) in &doc.flags {
        flag_map[from.flag(a)?] = to.flag(b)?;
    }
    if vertex_map.contains(&usize::MAX) || flag_map.contains(&usize::MAX) {
        return Err(IoError::Schema("interface map must cover every interface vertex and flag".into()));
    }
    Ok(Embedding { vertex_map, flag_map })
}

fn graph_rule(doc: &GraphRuleDoc, mode: RuleMode, alphabet: &Arc<LabelAlphabet>) -> Result<GraphRule, IoError> {
    let (lhs, lids) = doc.lhs.to_graph(Some(alphabet))?;
    let (rhs, rids) = doc.rhs.to_graph(Some(alphabet))?;
    let (interface, phi_l, phi_r) = match &doc.interface {
        Some(h) => {
            let (h, hids) = h.to_graph(Some(alphabet))?;
            let size = (h.vertex_count(), h.flag_count());
            let pl = resolve(&doc.phi_l, &hids, &lids, size)?;
            let pr = resolve(&doc.phi_r, &hids, &rids, size)?;
            (Some(h), pl, pr)
        }
        None => (
            None,
            Embedding { vertex_map: vec![], flag_map: vec![] },
            Embedding { vertex_map: vec![], flag_map: vec![] },
        ),
    };
    let boundary =
        doc.boundary.iter().map(|(a, b)| Ok((lids.flag(a)?, rids.flag(b)?))).collect::<Result<Vec<_>, IoError>>()?;
    Ok(GraphRule { mode, lhs, interface, rhs, phi_l, phi_r, boundary, constraints: doc.constraints.clone() })
}

pub fn grammar_from_json(text: &str) -> Result<Grammar, IoError> {
    let doc: GrammarDoc = serde_json::from_str(text)?;
    let alphabet = Arc::new(doc.alphabet);
    let (start, _) = doc.start.to_graph(Some(&alphabet))?;
    let mut rules = Vec::new();
    for (i, entry) in doc.rules.iter().enumerate() {
        let kind = match &entry.rule {
            RuleDoc::InsertGlue(r) => RuleKind::Graph(Box::new(graph_rule(r, RuleMode::InsertGlue, &alphabet)?)),
            RuleDoc::ReplaceV1(r) => RuleKind::Graph(Box::new(graph_rule(r, RuleMode::ReplaceV1, &alphabet)?)),
            RuleDoc::ReplaceV2(r) => RuleKind::Graph(Box::new(graph_rule(r, RuleMode::ReplaceV2, &alphabet)?)),
            RuleDoc::JoinFlags { label, result } => {
                RuleKind::JoinFlags { label: label.clone(), result: result.clone() }
            }
            RuleDoc::AttachCopy { label, result, copy } => RuleKind::AttachCopy {
                label: label.clone(),
                result: result.clone(),
                copy: copy.to_graph(Some(&alphabet))?.0,
            },
            RuleDoc::Mark { from, to } => RuleKind::Mark { from: from.clone(), to: to.clone() },
            RuleDoc::MarkVertex { from, to, valences } => {
                RuleKind::MarkVertex { from: from.clone(), to: to.clone(), valences: valences.clone() }
            }
            RuleDoc::Grow { vertex_label, flag_label, max_valence } => RuleKind::Grow {
                vertex_label: vertex_label.clone(),
                flag_label: flag_label.clone(),
                max_valence: *max_valence,
            },
            RuleDoc::Subdivide { edge_label, vertex_label } => {
                RuleKind::Subdivide { edge_label: edge_label.clone(), vertex_label: vertex_label.clone() }
            }
        };
        let name = if entry.name.is_empty() { format!("rule{i}") } else { entry.name.clone() };
        rules.push(ProductionRule { name, kind });
    }
    Ok(Grammar { alphabet, start, rules })
}

fn map_doc(m: &Embedding) -> MapDoc {
    MapDoc {
        vertices: m.vertex_map.iter().enumerate().map(|(a, b)| (format!("v{a}"), format!("v{b}"))).collect(),
        flags: m.flag_map.iter().enumerate().map(|(a, b)| (format!("f{a}"), format!("f{b}"))).collect(),
    }
}

fn doc(g: &Graph) -> GraphDoc {
    GraphDoc::from_graph(g, false)
}

pub fn grammar_to_json(g: &Grammar) -> serde_json::Value {
    let rules = g
        .rules
        .iter()
        .map(|r| {
            let rule = match &r.kind {
                RuleKind::Graph(gr) => {
                    let d = GraphRuleDoc {
                        lhs: doc(&gr.lhs),
                        interface: gr.interface.as_ref().map(doc),
                        rhs: doc(&gr.rhs),
                        phi_l: map_doc(&gr.phi_l),
                        phi_r: map_doc(&gr.phi_r),
                        boundary: gr.boundary.iter().map(|(a, b)| (format!("f{a}"), format!("f{b}"))).collect(),
                        constraints: gr.constraints.clone(),
                    };
                    match gr.mode {
                        RuleMode::InsertGlue => RuleDoc::InsertGlue(d),
                        RuleMode::ReplaceV1 => RuleDoc::ReplaceV1(d),
                        RuleMode::ReplaceV2 => RuleDoc::ReplaceV2(d),
                    }
                }
                RuleKind::JoinFlags { label, result } => {
                    RuleDoc::JoinFlags { label: label.clone(), result: result.clone() }
                }
                RuleKind::AttachCopy { label, result, copy } => {
                    RuleDoc::AttachCopy { label: label.clone(), result: result.clone(), copy: doc(copy) }
                }
                RuleKind::Mark { from, to } => RuleDoc::Mark { from: from.clone(), to: to.clone() },
                RuleKind::MarkVertex { from, to, valences } => {
                    RuleDoc::MarkVertex { from: from.clone(), to: to.clone(), valences: valences.clone() }
                }
                RuleKind::Grow { vertex_label, flag_label, max_valence } => RuleDoc::Grow {
                    vertex_label: vertex_label.clone(),
                    flag_label: flag_label.clone(),
                    max_valence: *max_valence,
                },
                RuleKind::Subdivide { edge_label, vertex_label } => {
                    RuleDoc::Subdivide { edge_label: edge_label.clone(), vertex_label: vertex_label.clone() }
                }
            };
            RuleEntry { name: r.name.clone(), rule }
        })
        .collect();
    let d = GrammarDoc { alphabet: (*g.alphabet).clone(), start: doc(&g.start), rules };
    serde_json::to_value(d).expect("grammar documents serialize")
}

#[cfg(test)]
mod tests {
    use super::super::tests::{alpha, point, vertex_rule};
    use super::super::{validate_grammar, RuleMode};
    use super::*;
    use crate::canonical::canonical_code;

    #[test]
    fn round_trip_preserves_rules() {
        let g = Grammar { alphabet: alpha(), start: point("X"), rules: vec![vertex_rule(RuleMode::InsertGlue)] };
        let text = grammar_to_json(&g).to_string();
        let back = grammar_from_json(&text).unwrap();
        assert!(validate_grammar(&back).is_empty());
        assert_eq!(canonical_code(&back.start), canonical_code(&g.start));
        assert_eq!(grammar_to_json(&back), grammar_to_json(&g));
    }

    #[test]
    fn hand_written_file_parses() {
        let text = r#"{
          "alphabet": {"vertex_terminals": ["V"], "flag_terminals": ["T"], "flag_nonterminals": ["N"]},
          "start": {"vertices": [{"id": "s", "label": "V", "flags": [{"id": "a", "label": "N"}, {"id": "b", "label": "N"}]}]},
          "rules": [{"name": "close", "mode": "join-flags", "label": "N", "result": "T"}]
        }"#;
        let g = grammar_from_json(text).unwrap();
        assert_eq!(g.rules.len(), 1);
        assert!(validate_grammar(&g).is_empty());
    }

    #[test]
    fn unknown_mode_is_a_schema_error() {
        let text = r#"{"alphabet": {}, "start": {"vertices": []}, "rules": [{"mode": "teleport"}]}"#;
        assert!(matches!(grammar_from_json(text), Err(IoError::Json(_))));
    }
}
