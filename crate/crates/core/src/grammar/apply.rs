use std::collections::BTreeSet;

use super::{GrammarError, GraphRule, ProductionRule, RuleKind, RuleMode};
use crate::embed::{find_embeddings, Embedding, MatchPolicy};
use crate::graph::{Direction, GlueMap, Graph, GraphError, LabelPolicy, RemovalSemantics, Subgraph};

fn legs_labeled(g: &Graph, label: &str) -> Vec<usize> {
    g.external_flags().into_iter().filter(|&f| g.flag(f).label == label).collect()
}

fn flag_match(flags: Vec<usize>) -> Embedding {
    Embedding { vertex_map: vec![], flag_map: flags }
}

fn vertex_match(v: usize) -> Embedding {
    Embedding { vertex_map: vec![v], flag_map: vec![] }
}

/// Every place where `rule` applies to `g`, in a deterministic order.
pub fn matches(rule: &ProductionRule, g: &Graph) -> Vec<Embedding> {
    match &rule.kind {
        RuleKind::Graph(r) => {
            let policy = MatchPolicy { distinct_flag_maps: true, ..MatchPolicy::default() };
            find_embeddings(&r.lhs, g, policy).into_iter().filter(|m| apply_graph_rule(r, g, m).is_ok()).collect()
        }
        RuleKind::JoinFlags { label, .. } => {
            let legs = legs_labeled(g, label);
            let mut out = Vec::new();
            for (i, &f) in legs.iter().enumerate() {
                for &h in &legs[i + 1..] {
                    if joinable_across(g.flag(f).dir, g.flag(h).dir) {
                        out.push(flag_match(vec![f, h]));
                    }
                }
            }
            out
        }
        RuleKind::AttachCopy { label, copy, .. } => match legs_labeled(copy, label).first() {
            Some(&c) => legs_labeled(g, label)
                .into_iter()
                .filter(|&f| joinable_across(g.flag(f).dir, copy.flag(c).dir))
                .map(|f| flag_match(vec![f]))
                .collect(),
            None => vec![],
        },
        RuleKind::Mark { from, .. } => legs_labeled(g, from).into_iter().map(|f| flag_match(vec![f])).collect(),
        RuleKind::MarkVertex { from, valences, .. } => g
            .vertices()
            .filter(|&v| g.vertex_label(v) == from && valences.contains(&g.valence(v)))
            .map(vertex_match)
            .collect(),
        RuleKind::Grow { vertex_label, max_valence, .. } => g
            .vertices()
            .filter(|&v| g.vertex_label(v) == vertex_label && g.valence(v) < *max_valence)
            .map(vertex_match)
            .collect(),
        RuleKind::Subdivide { edge_label, .. } => g
            .internal_edges()
            .into_iter()
            .filter(|&(f, _)| g.flag(f).label == *edge_label)
            .map(|(f, _)| flag_match(vec![f]))
            .collect(),
    }
}

fn joinable_across(a: Direction, b: Direction) -> bool {
    matches!(
        (a, b),
        (Direction::In, Direction::Out)
            | (Direction::Out, Direction::In)
            | (Direction::Unoriented, Direction::Unoriented)
    )
}

/// Applies `rule` at `m`, which must be one of `matches(rule, g)`.
pub fn apply(rule: &ProductionRule, g: &Graph, m: &Embedding) -> Result<Graph, GrammarError> {
    if !matches(rule, g).contains(m) {
        return Err(GrammarError::NotAMatch(rule.name.clone()));
    }
    Ok(apply_unchecked(rule, g, m)?)
}

pub(crate) fn apply_unchecked(rule: &ProductionRule, g: &Graph, m: &Embedding) -> Result<Graph, GraphError> {
    match &rule.kind {
        RuleKind::Graph(r) => apply_graph_rule(r, g, m),
        RuleKind::JoinFlags { result, .. } => {
            let (f, h) = (m.flag_map[0], m.flag_map[1]);
            g.join_flags(f, h)?.with_flag_label(f, result)
        }
        RuleKind::AttachCopy { label, result, copy } => {
            let c = *legs_labeled(copy, label).first().ok_or(GraphError::EmptyResult)?;
            let offset = g.flag_count();
            let f = m.flag_map[0];
            g.disjoint_union(copy)?.join_flags(f, offset + c)?.with_flag_label(f, result)
        }
        RuleKind::Mark { to, .. } => g.with_flag_label(m.flag_map[0], to),
        RuleKind::MarkVertex { to, .. } => g.with_vertex_label(m.vertex_map[0], to),
        RuleKind::Grow { flag_label, .. } => {
            let v = m.vertex_map[0];
            let dir =
                if g.flag_count() > 0 && !g.has_unoriented_flags() { Direction::In } else { Direction::Unoriented };
            Ok(g.with_new_flag(v, flag_label, dir)?.0)
        }
        RuleKind::Subdivide { vertex_label, .. } => g.subdivide_edge(m.flag_map[0], vertex_label),
    }
}

fn relabel_interface(
    mut out: Graph,
    rule: &GraphRule,
    host_v: &[usize],
    host_f: &[usize],
) -> Result<Graph, GraphError> {
    let Some(h) = &rule.interface else {
        return Ok(out);
    };
    for x in h.vertices() {
        let label = rule.rhs.vertex_label(rule.phi_r.vertex_map[x]).to_string();
        out = out.with_vertex_label(host_v[x], &label)?;
    }
    for f in 0..h.flag_count() {
        let label = rule.rhs.flag(rule.phi_r.flag_map[f]).label.clone();
        out = out.with_flag_label(host_f[f], &label)?;
    }
    Ok(out)
}

fn interface_size(rule: &GraphRule) -> (usize, usize) {
    rule.interface.as_ref().map_or((0, 0), |h| (h.vertex_count(), h.flag_count()))
}

fn apply_graph_rule(rule: &GraphRule, g: &Graph, m: &Embedding) -> Result<Graph, GraphError> {
    let (hv, hf) = interface_size(rule);
    let mut host_v: Vec<usize> = (0..hv).map(|x| m.vertex_map[rule.phi_l.vertex_map[x]]).collect();
    let mut host_f: Vec<usize> = (0..hf).map(|f| m.flag_map[rule.phi_l.flag_map[f]]).collect();
    if rule.constraints.interface_incoming {
        if let Some(h) = &rule.interface {
            for f in h.external_flags() {
                if g.flag(host_f[f]).dir != Direction::In {
                    return Err(GraphError::OrientationClash(host_f[f], host_f[f]));
                }
            }
        }
    }
    let kept: BTreeSet<usize> = rule.phi_l.vertex_map.iter().copied().collect();
    let removed: Vec<usize> = rule.lhs.vertices().filter(|v| !kept.contains(v)).map(|v| m.vertex_map[v]).collect();
    let mut base = g.clone();
    let mut reconnect = Vec::new();
    if rule.mode != RuleMode::InsertGlue && !removed.is_empty() {
        let sub = Subgraph::induced(g, removed.iter().copied())?;
        let semantics = if rule.mode == RuleMode::ReplaceV1 { RemovalSemantics::V1 } else { RemovalSemantics::V2 };
        if rule.mode == RuleMode::ReplaceV2 {
            let cut: BTreeSet<usize> = g
                .relative_external(&sub)?
                .into_iter()
                .filter_map(|item| match item {
                    crate::graph::BoundaryItem::Straddling { inner, .. } => Some(inner),
                    _ => None,
                })
                .collect();
            let claimed: BTreeSet<usize> = rule.boundary.iter().map(|&(lf, _)| m.flag_map[lf]).collect();
            if cut != claimed {
                return Err(GraphError::ClosureViolation("cut boundary differs from the rule boundary".into()));
            }
        }
        let (reduced, vmap, fmap) = g.remove_subgraph_mapped(&sub, semantics)?;
        for x in host_v.iter_mut() {
            *x = vmap[*x].ok_or(GraphError::ClosureViolation("interface vertex removed".into()))?;
        }
        for x in host_f.iter_mut() {
            *x = fmap[*x].ok_or(GraphError::ClosureViolation("interface flag removed".into()))?;
        }
        for &(lf, rf) in &rule.boundary {
            let outer = g.partner(m.flag_map[lf]);
            let outer = fmap[outer].ok_or(GraphError::ClosureViolation("cut flag lost".into()))?;
            reconnect.push((outer, rf));
        }
        base = reduced;
    }
    let map = GlueMap {
        vertices: (0..hv).map(|x| (host_v[x], rule.phi_r.vertex_map[x])).collect(),
        flags: (0..hf).map(|f| (host_f[f], rule.phi_r.flag_map[f])).collect(),
    };
    let glued = base.glue_along(&rule.rhs, &map, LabelPolicy::KeepHost)?;
    let mut out = relabel_interface(glued.graph, rule, &host_v, &host_f)?;
    for (outer, rf) in reconnect {
        out = out.join_flags(outer, glued.flag_image[rf])?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{alpha, point, vertex_rule};
    use super::*;
    use crate::canonical::are_isomorphic;
    use crate::graph::{star, GraphBuilder};

    #[test]
    fn context_free_rule_matches_every_vertex() {
        let rule = vertex_rule(RuleMode::InsertGlue);
        let g = point("X");
        let once = apply(&rule, &g, &matches(&rule, &g)[0]).unwrap();
        assert_eq!(once.vertex_count(), 2);
        let mut host = once.clone();
        host = host.with_vertex_label(1, "X").unwrap();
        assert_eq!(matches(&rule, &host).len(), host.vertex_count());
    }

    #[test]
    fn join_rule_on_star_has_six_matches() {
        let rule =
            ProductionRule { name: "join".into(), kind: RuleKind::JoinFlags { label: "N".into(), result: "T".into() } };
        let s = star(alpha(), "V", "N", 4).unwrap();
        let ms = matches(&rule, &s);
        assert_eq!(ms.len(), 6);
        let g = apply(&rule, &s, &ms[0]).unwrap();
        assert_eq!((g.external_flags().len(), g.internal_edges().len()), (2, 1));
    }

    #[test]
    fn attach_copy_glues_along_an_edge() {
        let s = star(alpha(), "V", "N", 4).unwrap();
        let rule = ProductionRule {
            name: "attach".into(),
            kind: RuleKind::AttachCopy { label: "N".into(), result: "T".into(), copy: s.clone() },
        };
        let ms = matches(&rule, &s);
        assert_eq!(ms.len(), 4);
        let g = apply(&rule, &s, &ms[2]).unwrap();
        assert_eq!((g.vertex_count(), g.external_flags().len()), (2, 6));
    }

    #[test]
    fn stale_embedding_is_rejected() {
        let rule =
            ProductionRule { name: "join".into(), kind: RuleKind::JoinFlags { label: "N".into(), result: "T".into() } };
        let s = star(alpha(), "V", "N", 2).unwrap();
        let stale = Embedding { vertex_map: vec![], flag_map: vec![0, 3] };
        assert_eq!(apply(&rule, &s, &stale).unwrap_err(), GrammarError::NotAMatch("join".into()));
    }

    #[test]
    fn replace_v2_reconnects_cut_edges() {
        // replace a V vertex hanging off X by a T-edge to a fresh X vertex
        let mut b = GraphBuilder::new(alpha());
        let x = b.vertex("X");
        let v = b.vertex("V");
        b.edge(x, v, "T", true);
        let host = b.build().unwrap();
        let mut b = GraphBuilder::new(alpha());
        let v = b.vertex("V");
        b.flag(v, "T", Direction::In);
        let lhs = b.build().unwrap();
        let mut b = GraphBuilder::new(alpha());
        let y = b.vertex("X");
        b.flag(y, "T", Direction::In);
        let rhs = b.build().unwrap();
        let rule = ProductionRule {
            name: "swap".into(),
            kind: RuleKind::Graph(Box::new(GraphRule {
                mode: RuleMode::ReplaceV2,
                lhs,
                interface: None,
                rhs,
                phi_l: Embedding { vertex_map: vec![], flag_map: vec![] },
                phi_r: Embedding { vertex_map: vec![], flag_map: vec![] },
                boundary: vec![(0, 0)],
                constraints: Default::default(),
            })),
        };
        let ms = matches(&rule, &host);
        assert_eq!(ms.len(), 1);
        let out = apply(&rule, &host, &ms[0]).unwrap();
        let expected = host.with_vertex_label(1, "X").unwrap();
        assert!(are_isomorphic(&out, &expected).unwrap());
    }
}
