use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::FormalSum;
use crate::embed::{find_embeddings, CorollaMatch, Externality, MatchPolicy};
use crate::grammar::{Grammar, RuleKind};
use crate::graph::{
    boundary_flags, connectivity, orientation_analysis, Direction, FlagId, GlueMap, Graph, GraphBuilder, GraphError,
    LabelAlphabet, LabelPolicy, RemovalSemantics, Subgraph, VertexId,
};

/// Flag label marking the part of a right-hand factor that is glued onto the left factor.
pub const DESIGNATED_LABEL: &str = "d";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    /// Root of the right factor glued to any vertex of the left factor.
    RootedDagVertex,
    /// Root of the right factor glued to a sink of the left factor.
    RootedDagSink,
    /// Designated repeller cycle of the right factor glued onto an attractor cycle of the left.
    LoopGlue,
    /// Designated copy of a rule interface glued onto an all-incoming copy in the left factor.
    OrientedInterface,
    /// Base vertex of the right factor merged into a corolla whose flags match its legs.
    CorollaHalfEdge,
    /// A leg of the left factor joined to a leg at the base vertex of the right factor.
    ExternalEdgeGlue,
    /// A copy of a rule left-hand side replaced by the right factor.
    InsertionElimination,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::RootedDagVertex,
        FamilyTag::RootedDagSink,
        FamilyTag::LoopGlue,
        FamilyTag::OrientedInterface,
        FamilyTag::CorollaHalfEdge,
        FamilyTag::ExternalEdgeGlue,
        FamilyTag::InsertionElimination,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::RootedDagVertex => "rooted-dag-vertex",
            FamilyTag::RootedDagSink => "rooted-dag-sink",
            FamilyTag::LoopGlue => "loop-glue",
            FamilyTag::OrientedInterface => "oriented-interface",
            FamilyTag::CorollaHalfEdge => "corolla-half-edge",
            FamilyTag::ExternalEdgeGlue => "external-edge-glue",
            FamilyTag::InsertionElimination => "insertion-elimination",
        }
    }

    /// Parses a tag name; `rooted-dag` is accepted for `rooted-dag-vertex`.
    pub fn parse(s: &str) -> Option<FamilyTag> {
        if s == "rooted-dag" {
            return Some(FamilyTag::RootedDagVertex);
        }
        FamilyTag::ALL.into_iter().find(|t| t.name() == s)
    }
}

/// An insertion operator together with the rule data it sums over.
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    pub tag: FamilyTag,
    /// Rule interfaces for `OrientedInterface`, left-hand sides for `InsertionElimination`.
    pub shapes: Vec<Graph>,
    /// (leg label, edge label) for `ExternalEdgeGlue`.
    pub join: Option<(String, String)>,
    /// Skip hypothesis checks.
    pub unchecked: bool,
}

/// Alphabet shared by the default families and their samplers.
pub fn family_alphabet() -> Arc<LabelAlphabet> {
    Arc::new(LabelAlphabet::new(&["v", "V"], &[], &["e", DESIGNATED_LABEL, "T1"], &["N1"]))
}

fn cycle_shape(alpha: &Arc<LabelAlphabet>, n: usize) -> Graph {
    let mut b = GraphBuilder::new(alpha.clone());
    let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
    for i in 0..n {
        b.edge(vs[i], vs[(i + 1) % n], "e", true);
    }
    b.build().expect("cycle")
}

fn figure_eight(alpha: &Arc<LabelAlphabet>) -> Graph {
    let mut b = GraphBuilder::new(alpha.clone());
    let (a, x, y) = (b.vertex("v"), b.vertex("v"), b.vertex("v"));
    b.edge(a, x, "e", true);
    b.edge(x, a, "e", true);
    b.edge(a, y, "e", true);
    b.edge(y, a, "e", true);
    b.build().expect("figure eight")
}

/// A single vertex with `k` incoming legs.
pub fn incoming_corolla(alpha: &Arc<LabelAlphabet>, label: &str, k: usize) -> Graph {
    let mut b = GraphBuilder::new(alpha.clone());
    let v = b.vertex("v");
    for _ in 0..k {
        b.flag(v, label, Direction::In);
    }
    b.build().expect("corolla")
}

impl OperatorFamily {
    /// The family with its default rule data.
    pub fn new(tag: FamilyTag) -> OperatorFamily {
        let alpha = family_alphabet();
        let (shapes, join) = match tag {
            FamilyTag::OrientedInterface => {
                (vec![cycle_shape(&alpha, 2), cycle_shape(&alpha, 3), figure_eight(&alpha)], None)
            }
            FamilyTag::InsertionElimination => ((1..=3).map(|k| incoming_corolla(&alpha, "e", k)).collect(), None),
            FamilyTag::ExternalEdgeGlue => (vec![], Some(("N1".to_string(), "T1".to_string()))),
            _ => (vec![], None),
        };
        OperatorFamily { tag, shapes, join, unchecked: false }
    }

    /// The family with rule data read off a grammar: graph-rule interfaces or left-hand sides,
    /// and the first flag-joining rule.
    pub fn from_grammar(tag: FamilyTag, grammar: &Grammar) -> OperatorFamily {
        let mut fam = OperatorFamily { tag, shapes: vec![], join: None, unchecked: false };
        for r in &grammar.rules {
            match &r.kind {
                RuleKind::Graph(gr) => match tag {
                    FamilyTag::OrientedInterface => fam.shapes.extend(gr.interface.clone()),
                    FamilyTag::InsertionElimination => fam.shapes.push(gr.lhs.clone()),
                    _ => {}
                },
                RuleKind::JoinFlags { label, result } if fam.join.is_none() => {
                    fam.join = Some((label.clone(), result.clone()));
                }
                _ => {}
            }
        }
        fam
    }

    pub fn unchecked(mut self) -> OperatorFamily {
        self.unchecked = true;
        self
    }
}

/// A failed hypothesis. `graph` indexes the checked inputs, `shape` the family's rule data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyDiagnostic {
    MissingRoot { graph: usize },
    Unoriented { graph: usize },
    ExternalFlags { graph: usize },
    NotAcyclic { graph: usize },
    RootNotSource { graph: usize },
    NotReachable { graph: usize },
    NoDesignatedInterface { graph: usize },
    DesignatedNotCycle { graph: usize },
    DesignatedNotInterface { graph: usize },
    InterfaceNotRepeller { graph: usize },
    ExternalNotIncoming { graph: usize },
    NoShapes,
    InterfaceDisconnected { shape: usize },
    InterfaceHasSink { shape: usize },
    InterfaceHasSource { shape: usize },
    ShapeDisconnected { shape: usize },
    InterfaceNotIncoming { shape: usize },
    NoJoinRule,
}

fn label_blind() -> MatchPolicy {
    MatchPolicy {
        vertex_labels: false,
        flag_labels: false,
        externality: Externality::Any,
        corolla: CorollaMatch::Subset,
        distinct_flag_maps: true,
    }
}

/// The designated subgraph of a graph: its vertices, its flags, and the subgraph as a graph.
fn designated(g: &Graph) -> Option<(Vec<VertexId>, Vec<FlagId>, Graph)> {
    let flags: Vec<FlagId> =
        (0..g.flag_count()).filter(|&f| !g.is_external(f) && g.flag(f).label == DESIGNATED_LABEL).collect();
    if flags.is_empty() {
        return None;
    }
    let vertices: Vec<VertexId> =
        flags.iter().map(|&f| g.flag(f).vertex).collect::<BTreeSet<_>>().into_iter().collect();
    let pattern = g.restrict(&vertices, &flags).with_root(None).expect("rootless");
    Some((vertices, flags, pattern))
}

fn same_shape(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.flag_count() == b.flag_count()
        && !find_embeddings(
            a,
            b,
            MatchPolicy {
                externality: Externality::Exact,
                corolla: CorollaMatch::Exact,
                distinct_flag_maps: false,
                ..label_blind()
            },
        )
        .is_empty()
}

fn all_dir(g: &Graph, flags: &[FlagId], dir: Direction) -> bool {
    flags.iter().all(|&f| g.flag(f).dir == dir)
}

fn is_directed_cycle(p: &Graph) -> bool {
    connectivity(p).connected
        && p.vertices().all(|v| {
            let fl = p.flags_at(v);
            fl.len() == 2 && fl.iter().filter(|&&f| p.flag(f).dir == Direction::In).count() == 1
        })
}

fn check_shapes(fam: &OperatorFamily, out: &mut Vec<FamilyDiagnostic>) {
    match fam.tag {
        FamilyTag::OrientedInterface | FamilyTag::InsertionElimination if fam.shapes.is_empty() => {
            out.push(FamilyDiagnostic::NoShapes)
        }
        FamilyTag::OrientedInterface => {
            for (i, h) in fam.shapes.iter().enumerate() {
                if !connectivity(h).connected {
                    out.push(FamilyDiagnostic::InterfaceDisconnected { shape: i });
                }
                match orientation_analysis(h) {
                    Ok(o) => {
                        if !o.sinks.is_empty() {
                            out.push(FamilyDiagnostic::InterfaceHasSink { shape: i });
                        }
                        if !o.sources.is_empty() {
                            out.push(FamilyDiagnostic::InterfaceHasSource { shape: i });
                        }
                    }
                    Err(_) => out.push(FamilyDiagnostic::InterfaceHasSource { shape: i }),
                }
            }
        }
        FamilyTag::InsertionElimination => {
            for (i, h) in fam.shapes.iter().enumerate() {
                if !connectivity(h).connected {
                    out.push(FamilyDiagnostic::ShapeDisconnected { shape: i });
                }
                if !all_dir(h, &h.external_flags(), Direction::In) {
                    out.push(FamilyDiagnostic::InterfaceNotIncoming { shape: i });
                }
            }
        }
        FamilyTag::ExternalEdgeGlue if fam.join.is_none() => out.push(FamilyDiagnostic::NoJoinRule),
        _ => {}
    }
}

fn reachable_from(g: &Graph, r: VertexId) -> usize {
    let mut seen = vec![false; g.vertex_count()];
    seen[r] = true;
    let mut stack = vec![r];
    while let Some(v) = stack.pop() {
        for &f in g.flags_at(v) {
            let p = g.partner(f);
            if p != f && g.flag(f).dir == Direction::Out && !seen[g.flag(p).vertex] {
                seen[g.flag(p).vertex] = true;
                stack.push(g.flag(p).vertex);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

fn check_graph(fam: &OperatorFamily, i: usize, g: &Graph, out: &mut Vec<FamilyDiagnostic>) {
    use FamilyDiagnostic as D;
    match fam.tag {
        FamilyTag::RootedDagVertex | FamilyTag::RootedDagSink => {
            if !g.external_flags().is_empty() {
                out.push(D::ExternalFlags { graph: i });
            }
            let Ok(o) = orientation_analysis(g) else {
                out.push(D::Unoriented { graph: i });
                return;
            };
            if !o.acyclic {
                out.push(D::NotAcyclic { graph: i });
            }
            match g.root() {
                None => out.push(D::MissingRoot { graph: i }),
                Some(r) => {
                    if !o.sources.contains(&r) {
                        out.push(D::RootNotSource { graph: i });
                    }
                    if reachable_from(g, r) != g.vertex_count() {
                        out.push(D::NotReachable { graph: i });
                    }
                }
            }
        }
        FamilyTag::LoopGlue | FamilyTag::OrientedInterface => {
            if g.has_unoriented_flags() {
                out.push(D::Unoriented { graph: i });
                return;
            }
            let Some((vs, fs, pattern)) = designated(g) else {
                out.push(D::NoDesignatedInterface { graph: i });
                return;
            };
            if fam.tag == FamilyTag::LoopGlue && !is_directed_cycle(&pattern) {
                out.push(D::DesignatedNotCycle { graph: i });
            }
            if fam.tag == FamilyTag::OrientedInterface && !fam.shapes.iter().any(|h| same_shape(h, &pattern)) {
                out.push(D::DesignatedNotInterface { graph: i });
            }
            let vset: BTreeSet<_> = vs.into_iter().collect();
            let used: BTreeSet<_> = fs.into_iter().collect();
            match boundary_flags(g, &vset, &used) {
                Some(b) if all_dir(g, &b, Direction::Out) => {}
                _ => out.push(D::InterfaceNotRepeller { graph: i }),
            }
        }
        FamilyTag::CorollaHalfEdge | FamilyTag::ExternalEdgeGlue => {
            if g.root().is_none() {
                out.push(D::MissingRoot { graph: i });
            }
        }
        FamilyTag::InsertionElimination => {
            if g.has_unoriented_flags() {
                out.push(D::Unoriented { graph: i });
            }
            if !all_dir(g, &g.external_flags(), Direction::In) {
                out.push(D::ExternalNotIncoming { graph: i });
            }
        }
    }
}

/// Every failed hypothesis of the family on the given inputs; empty when the family applies.
pub fn check_family(fam: &OperatorFamily, graphs: &[&Graph]) -> Vec<FamilyDiagnostic> {
    let mut out = Vec::new();
    check_shapes(fam, &mut out);
    for (i, g) in graphs.iter().enumerate() {
        check_graph(fam, i, g, &mut out);
    }
    out
}

/// `G1 ⊲ G2` without checking hypotheses: the sum over all concrete insertion sites.
pub fn insert_graphs(fam: &OperatorFamily, g1: &Graph, g2: &Graph) -> Result<FormalSum, GraphError> {
    match fam.tag {
        FamilyTag::RootedDagVertex => {
            let mut out = FormalSum::zero();
            for v in g1.vertices() {
                out.add_graph(&g1.glue_at_vertex(v, g2)?, BigRational::one());
            }
            Ok(out)
        }
        FamilyTag::RootedDagSink => {
            let mut out = FormalSum::zero();
            for v in orientation_analysis(g1)?.sinks {
                out.add_graph(&g1.glue_at_vertex(v, g2)?, BigRational::one());
            }
            Ok(out)
        }
        FamilyTag::LoopGlue => interface_glue(g1, g2, 1),
        FamilyTag::OrientedInterface => {
            let Some((_, _, pattern)) = designated(g2) else {
                return Ok(FormalSum::zero());
            };
            let mult = fam.shapes.iter().filter(|h| same_shape(h, &pattern)).count();
            interface_glue(g1, g2, mult)
        }
        FamilyTag::CorollaHalfEdge => corolla_glue(g1, g2),
        FamilyTag::ExternalEdgeGlue => leg_glue(fam, g1, g2),
        FamilyTag::InsertionElimination => eliminate(fam, g1, g2),
    }
}

fn interface_glue(g1: &Graph, g2: &Graph, mult: usize) -> Result<FormalSum, GraphError> {
    let mut out = FormalSum::zero();
    if mult == 0 {
        return Ok(out);
    }
    let Some((pv, pf, pattern)) = designated(g2) else {
        return Ok(out);
    };
    let c = BigRational::from_integer(BigInt::from(mult));
    for e in find_embeddings(&pattern, g1, label_blind()) {
        let vset: BTreeSet<_> = e.vertex_map.iter().copied().collect();
        let used: BTreeSet<_> = e.flag_map.iter().copied().collect();
        match boundary_flags(g1, &vset, &used) {
            Some(b) if all_dir(g1, &b, Direction::In) => {}
            _ => continue,
        }
        let map = GlueMap {
            vertices: e.vertex_map.iter().zip(&pv).map(|(&a, &b)| (a, b)).collect(),
            flags: e.flag_map.iter().zip(&pf).map(|(&a, &b)| (a, b)).collect(),
        };
        let glued = g1.glue_along(g2, &map, LabelPolicy::KeepHost)?;
        out.add_graph(&glued.graph, c.clone());
    }
    Ok(out)
}

fn label_counts<'a>(labels: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, usize> {
    let mut m = BTreeMap::new();
    for l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn corolla_glue(g1: &Graph, g2: &Graph) -> Result<FormalSum, GraphError> {
    let r2 = g2.root().ok_or(GraphError::NoRoot)?;
    let legs = g2.external_flags_at(r2);
    let want = label_counts(legs.iter().map(|&f| g2.flag(f).label.as_str()));
    let bijections: BigInt = want.values().map(|&n| factorial(n)).product();
    let keep_flags: Vec<FlagId> = (0..g2.flag_count()).filter(|f| !legs.contains(f)).collect();
    let all: Vec<VertexId> = g2.vertices().collect();
    let trimmed = g2.restrict(&all, &keep_flags);
    let mut out = FormalSum::zero();
    for v in g1.vertices() {
        let have = label_counts(g1.flags_at(v).iter().map(|&f| g1.flag(f).label.as_str()));
        if g1.valence(v) == legs.len() && have == want {
            out.add_graph(&g1.glue_at_vertex(v, &trimmed)?, BigRational::from_integer(bijections.clone()));
        }
    }
    Ok(out)
}

fn leg_glue(fam: &OperatorFamily, g1: &Graph, g2: &Graph) -> Result<FormalSum, GraphError> {
    let Some((leg, edge)) = &fam.join else {
        return Ok(FormalSum::zero());
    };
    let r2 = g2.root().ok_or(GraphError::NoRoot)?;
    let u = g1.disjoint_union(g2)?;
    let shift = g1.flag_count();
    let mut out = FormalSum::zero();
    for f in g1.external_flags() {
        if g1.flag(f).label != *leg {
            continue;
        }
        for g in g2.external_flags_at(r2) {
            if g2.flag(g).label != *leg {
                continue;
            }
            match u.join_flags(f, g + shift) {
                Ok(j) => out.add_graph(&j.with_flag_label(f, edge)?, BigRational::one()),
                Err(GraphError::OrientationClash(..)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Every label- and direction-preserving bijection from `from` (flags of `a`) onto `to` (flags of `b`).
fn bijections(a: &Graph, from: &[FlagId], b: &Graph, to: &[FlagId]) -> Vec<Vec<FlagId>> {
    fn go(
        a: &Graph,
        from: &[FlagId],
        b: &Graph,
        to: &[FlagId],
        used: &mut Vec<bool>,
        cur: &mut Vec<FlagId>,
        out: &mut Vec<Vec<FlagId>>,
    ) {
        let i = cur.len();
        if i == from.len() {
            out.push(cur.clone());
            return;
        }
        let fa = a.flag(from[i]);
        for (j, &t) in to.iter().enumerate() {
            let fb = b.flag(t);
            if used[j] || fa.label != fb.label || fa.dir != fb.dir {
                continue;
            }
            used[j] = true;
            cur.push(t);
            go(a, from, b, to, used, cur, out);
            cur.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    if from.len() == to.len() {
        go(a, from, b, to, &mut vec![false; to.len()], &mut Vec::new(), &mut out);
    }
    out
}

fn eliminate(fam: &OperatorFamily, g1: &Graph, g2: &Graph) -> Result<FormalSum, GraphError> {
    let policy = MatchPolicy { corolla: CorollaMatch::Exact, ..MatchPolicy::default() };
    let mut sites: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    for shape in &fam.shapes {
        let inner_edges = shape.internal_edges().len();
        for e in find_embeddings(shape, g1, policy) {
            let s: BTreeSet<VertexId> = e.vertex_map.iter().copied().collect();
            if Subgraph::induced(g1, s.iter().copied())?.edges.len() == inner_edges {
                sites.insert(s);
            }
        }
    }
    let legs2 = g2.external_flags();
    let mut out = FormalSum::zero();
    for s in sites {
        let sub = Subgraph::induced(g1, s.iter().copied())?;
        let boundary = g1.relative_external(&sub)?;
        let inner: Vec<FlagId> = boundary.iter().map(|b| b.inner()).collect();
        if !all_dir(g1, &inner, Direction::In) {
            continue;
        }
        let sigmas = bijections(g1, &inner, g2, &legs2);
        if sigmas.is_empty() {
            continue;
        }
        let (rest, fmap) = if s.len() == g1.vertex_count() {
            (None, vec![])
        } else {
            let (r, _, fm) = g1.remove_subgraph_mapped(&sub, RemovalSemantics::V2)?;
            (Some(r), fm)
        };
        for sigma in sigmas {
            let result = match &rest {
                None => g2.clone(),
                Some(r) => {
                    let shift = r.flag_count();
                    let mut u = r.disjoint_union(g2)?;
                    for (item, &t) in boundary.iter().zip(&sigma) {
                        if let crate::graph::BoundaryItem::Straddling { outer, .. } = *item {
                            let o = fmap[outer].expect("outer flag survives");
                            u = u.join_flags(o, t + shift)?;
                        }
                    }
                    u
                }
            };
            out.add_graph(&result.with_root(None)?, BigRational::one());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star;

    fn alpha() -> Arc<LabelAlphabet> {
        family_alphabet()
    }

    fn path(n: usize) -> Graph {
        let mut b = GraphBuilder::new(alpha());
        let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
        for w in vs.windows(2) {
            b.edge(w[0], w[1], "e", true);
        }
        b.root(vs[0]);
        b.build().unwrap()
    }

    #[test]
    fn rooted_vertex_counts_every_vertex() {
        let fam = OperatorFamily::new(FamilyTag::RootedDagVertex);
        let s = insert_graphs(&fam, &path(3), &path(2)).unwrap();
        assert_eq!(s.total_mass(), BigRational::from_integer(3.into()));
        let sink = OperatorFamily::new(FamilyTag::RootedDagSink);
        assert_eq!(insert_graphs(&sink, &path(3), &path(2)).unwrap().total_mass(), BigRational::one());
    }

    #[test]
    fn corolla_sites_count_bijections() {
        let fam = OperatorFamily::new(FamilyTag::CorollaHalfEdge);
        let g1 = star(alpha(), "v", "e", 3).unwrap();
        let mut b = GraphBuilder::new(alpha());
        let r = b.vertex("v");
        let w = b.vertex("v");
        for _ in 0..3 {
            b.flag(r, "e", Direction::Unoriented);
        }
        b.edge(r, w, "e", false);
        b.root(r);
        let g2 = b.build().unwrap();
        let s = insert_graphs(&fam, &g1, &g2).unwrap();
        assert_eq!((s.len(), s.total_mass()), (1, BigRational::from_integer(6.into())));
    }

    #[test]
    fn elimination_needs_incoming_legs() {
        let fam = OperatorFamily::new(FamilyTag::InsertionElimination);
        let g2 = incoming_corolla(&alpha(), "e", 2);
        let mut b = GraphBuilder::new(alpha());
        let v = b.vertex("v");
        b.flag(v, "e", Direction::Out);
        let bad = b.build().unwrap();
        assert_eq!(check_family(&fam, &[&g2, &bad]), vec![FamilyDiagnostic::ExternalNotIncoming { graph: 1 }]);
        let s = insert_graphs(&fam, &g2, &g2).unwrap();
        assert_eq!(s.total_mass(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn edge_interface_is_rejected() {
        let mut b = GraphBuilder::new(alpha());
        let (x, y) = (b.vertex("v"), b.vertex("v"));
        b.edge(x, y, "e", true);
        let fam =
            OperatorFamily { shapes: vec![b.build().unwrap()], ..OperatorFamily::new(FamilyTag::OrientedInterface) };
        let d = check_family(&fam, &[]);
        assert!(d.contains(&FamilyDiagnostic::InterfaceHasSink { shape: 0 }));
        assert!(d.contains(&FamilyDiagnostic::InterfaceHasSource { shape: 0 }));
    }
}
