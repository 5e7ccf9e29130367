use super::{Direction, Flag, FlagId, Graph, GraphError, Vertex, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// A vertex set together with a set of internal edges of a host graph.
///
/// Edges are named by the smaller flag id of their pair. The host is passed
/// explicitly to every operation; a `Subgraph` is only meaningful for the graph
/// it was built against.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<FlagId>,
}

impl Subgraph {
    pub fn new(
        host: &Graph,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = FlagId>,
    ) -> Result<Subgraph, GraphError> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let mut canon = BTreeSet::new();
        for f in edges {
            if f >= host.flag_count() || host.is_external(f) {
                return Err(GraphError::ClosureViolation(format!("flag {f} is not an internal edge")));
            }
            canon.insert(f.min(host.partner(f)));
        }
        let sub = Subgraph { vertices, edges: canon };
        sub.check(host)?;
        Ok(sub)
    }

    /// The subgraph spanned by `vertices` and every edge between them.
    pub fn induced(host: &Graph, vertices: impl IntoIterator<Item = VertexId>) -> Result<Subgraph, GraphError> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let edges = host
            .internal_edges()
            .into_iter()
            .filter(|&(f, g)| vertices.contains(&host.flag(f).vertex) && vertices.contains(&host.flag(g).vertex))
            .map(|(f, _)| f)
            .collect();
        let sub = Subgraph { vertices, edges };
        sub.check(host)?;
        Ok(sub)
    }

    pub fn whole(host: &Graph) -> Subgraph {
        Subgraph {
            vertices: host.vertices().collect(),
            edges: host.internal_edges().into_iter().map(|(f, _)| f).collect(),
        }
    }

    /// Closure: nonempty, every vertex exists, every edge has both ends inside.
    pub fn check(&self, host: &Graph) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::ClosureViolation("empty vertex set".into()));
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= host.vertex_count()) {
            return Err(GraphError::UnknownVertex(v));
        }
        for &f in &self.edges {
            if f >= host.flag_count() || host.is_external(f) {
                return Err(GraphError::ClosureViolation(format!("flag {f} is not an internal edge")));
            }
            let (a, b) = host.edge_ends(f);
            if !self.vertices.contains(&a) || !self.vertices.contains(&b) {
                return Err(GraphError::ClosureViolation(format!("edge at flag {f} leaves the vertex set")));
            }
        }
        Ok(())
    }

    pub fn contains_edge(&self, host: &Graph, f: FlagId) -> bool {
        self.edges.contains(&f.min(host.partner(f)))
    }

    /// All flags attached to the vertex set.
    pub fn flags(&self, host: &Graph) -> Vec<FlagId> {
        self.vertices.iter().flat_map(|&v| host.flags_at(v).iter().copied()).collect()
    }

    /// Connected components of the subgraph, each as a sorted vertex list.
    pub fn components(&self, host: &Graph) -> Vec<Vec<VertexId>> {
        let mut parent: BTreeMap<VertexId, VertexId> = self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(p: &mut BTreeMap<VertexId, VertexId>, x: VertexId) -> VertexId {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            let mut y = x;
            while p[&y] != r {
                let nxt = p[&y];
                p.insert(y, r);
                y = nxt;
            }
            r
        }
        for &f in &self.edges {
            let (a, b) = host.edge_ends(f);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra.max(rb), ra.min(rb));
            }
        }
        let mut comps: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        let vs: Vec<_> = self.vertices.iter().copied().collect();
        for v in vs {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        comps.into_values().collect()
    }
}

/// One element of the relative boundary of a subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryItem {
    /// An external flag of the host attached to the subgraph.
    ExternalFlag(FlagId),
    /// An internal host edge with exactly one flag on the subgraph.
    Straddling { inner: FlagId, outer: FlagId },
}

impl BoundaryItem {
    pub fn inner(&self) -> FlagId {
        match *self {
            BoundaryItem::ExternalFlag(f) => f,
            BoundaryItem::Straddling { inner, .. } => inner,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalSemantics {
    /// Delete the vertices together with their star of edges.
    V1,
    /// Cut boundary edges; the complement keeps one half-edge as a leg.
    V2,
}

/// How labels are treated on the identified part of a gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelPolicy {
    /// Identified vertices and flags must carry equal labels.
    Exact,
    /// Labels of the first graph win; only directions must agree.
    KeepHost,
}

/// Identification data for [`Graph::glue_along`]: pairs (item of first graph, item of second graph).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlueMap {
    pub vertices: Vec<(VertexId, VertexId)>,
    pub flags: Vec<(FlagId, FlagId)>,
}

/// Output of a gluing: the graph plus where the second graph's items landed.
#[derive(Clone, Debug)]
pub struct Glued {
    pub graph: Graph,
    pub vertex_image: Vec<VertexId>,
    pub flag_image: Vec<FlagId>,
}

impl Graph {
    /// Relative external items `E_ext(G'; G)` of a subgraph.
    pub fn relative_external(&self, sub: &Subgraph) -> Result<Vec<BoundaryItem>, GraphError> {
        sub.check(self)?;
        let mut out = Vec::new();
        for f in sub.flags(self) {
            let p = self.partner(f);
            if p == f {
                out.push(BoundaryItem::ExternalFlag(f));
            } else if !sub.vertices.contains(&self.flag(p).vertex) {
                out.push(BoundaryItem::Straddling { inner: f, outer: p });
            }
        }
        Ok(out)
    }

    /// Edges outside the subgraph that touch one of its vertices, named by their smaller flag.
    pub fn star_edges(&self, sub: &Subgraph) -> Vec<FlagId> {
        self.internal_edges()
            .into_iter()
            .filter(|&(f, g)| {
                !sub.edges.contains(&f)
                    && (sub.vertices.contains(&self.flag(f).vertex) || sub.vertices.contains(&self.flag(g).vertex))
            })
            .map(|(f, _)| f)
            .collect()
    }

    /// Removes a subgraph's vertices from the graph.
    pub fn remove_subgraph(&self, sub: &Subgraph, semantics: RemovalSemantics) -> Result<Graph, GraphError> {
        Ok(self.remove_subgraph_mapped(sub, semantics)?.0)
    }

    /// Like [`Graph::remove_subgraph`], also returning where surviving vertices and flags went.
    #[allow(clippy::type_complexity)]
    pub fn remove_subgraph_mapped(
        &self,
        sub: &Subgraph,
        semantics: RemovalSemantics,
    ) -> Result<(Graph, Vec<Option<VertexId>>, Vec<Option<FlagId>>), GraphError> {
        sub.check(self)?;
        let keep: Vec<VertexId> = self.vertices().filter(|v| !sub.vertices.contains(v)).collect();
        if keep.is_empty() {
            return Err(GraphError::EmptyResult);
        }
        let dropped = |f: FlagId| -> bool {
            let p = self.partner(f);
            semantics == RemovalSemantics::V1 && p != f && sub.vertices.contains(&self.flag(p).vertex)
        };
        let flags: Vec<FlagId> =
            keep.iter().flat_map(|&v| self.flags_at(v).iter().copied()).filter(|&f| !dropped(f)).collect();
        let mut vmap = vec![None; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            vmap[v] = Some(i);
        }
        let mut fmap = vec![None; self.flag_count()];
        for (i, &f) in flags.iter().enumerate() {
            fmap[f] = Some(i);
        }
        Ok((self.restrict(&keep, &flags), vmap, fmap))
    }

    /// Adds a new external flag at `v`; returns the graph and the new flag id.
    pub fn with_new_flag(&self, v: VertexId, label: &str, dir: Direction) -> Result<(Graph, FlagId), GraphError> {
        if v >= self.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut out = self.clone();
        let id = out.flags.len();
        out.flags.push(Flag { vertex: v, label: label.to_string(), dir });
        out.vertices[v].flags.push(id);
        out.involution.push(id);
        out.validate()?;
        Ok((out, id))
    }

    /// Splits the internal edge containing `f` into two legs.
    pub fn cut_edge(&self, f: FlagId) -> Result<Graph, GraphError> {
        if f >= self.flag_count() {
            return Err(GraphError::UnknownFlag(f));
        }
        let g = self.partner(f);
        if g == f {
            return Err(GraphError::NotInternal(f));
        }
        let mut out = self.clone();
        out.involution[f] = f;
        out.involution[g] = g;
        Ok(out)
    }

    /// Inserts a new two-valent vertex in the middle of the internal edge containing `f`.
    pub fn subdivide_edge(&self, f: FlagId, vertex_label: &str) -> Result<Graph, GraphError> {
        if f >= self.flag_count() {
            return Err(GraphError::UnknownFlag(f));
        }
        if self.is_external(f) {
            return Err(GraphError::NotInternal(f));
        }
        let g = self.partner(f);
        let mut out = self.clone();
        let v = out.vertices.len();
        out.vertices.push(Vertex { label: vertex_label.to_string(), flags: vec![] });
        let (a, b) = (out.flags.len(), out.flags.len() + 1);
        let (fl, gl) = (self.flag(f).clone(), self.flag(g).clone());
        out.flags.push(Flag { vertex: v, label: fl.label.clone(), dir: fl.dir.reversed() });
        out.flags.push(Flag { vertex: v, label: gl.label.clone(), dir: gl.dir.reversed() });
        out.vertices[v].flags = vec![a, b];
        out.involution.extend([a, b]);
        out.involution[f] = a;
        out.involution[a] = f;
        out.involution[g] = b;
        out.involution[b] = g;
        out.validate()?;
        Ok(out)
    }

    /// Graph on the given vertices and flags. Flags whose partner is not kept become external.
    pub(crate) fn restrict(&self, keep_vertices: &[VertexId], keep_flags: &[FlagId]) -> Graph {
        let vmap: BTreeMap<VertexId, VertexId> = keep_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let fmap: BTreeMap<FlagId, FlagId> = keep_flags.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut vertices: Vec<Vertex> = keep_vertices
            .iter()
            .map(|&v| Vertex { label: self.vertex_label(v).to_string(), flags: Vec::new() })
            .collect();
        let mut flags = Vec::with_capacity(keep_flags.len());
        let mut inv = Vec::with_capacity(keep_flags.len());
        for (i, &f) in keep_flags.iter().enumerate() {
            let fl = self.flag(f);
            let nv = vmap[&fl.vertex];
            vertices[nv].flags.push(i);
            flags.push(Flag { vertex: nv, label: fl.label.clone(), dir: fl.dir });
            inv.push(fmap.get(&self.partner(f)).copied().unwrap_or(i));
        }
        let root = self.root().and_then(|r| vmap.get(&r).copied());
        Graph { vertices, flags, involution: inv, root, alphabet: self.alphabet.clone() }
    }

    /// Pairs two external flags into an internal edge.
    pub fn join_flags(&self, f: FlagId, g: FlagId) -> Result<Graph, GraphError> {
        for x in [f, g] {
            if x >= self.flag_count() {
                return Err(GraphError::UnknownFlag(x));
            }
        }
        if f == g {
            return Err(GraphError::SameFlag(f));
        }
        for x in [f, g] {
            if !self.is_external(x) {
                return Err(GraphError::NotExternal(x));
            }
        }
        let (a, b) = (self.flag(f), self.flag(g));
        if a.label != b.label {
            return Err(GraphError::LabelMismatch(a.label.clone(), b.label.clone()));
        }
        let ok = matches!(
            (a.dir, b.dir),
            (Direction::In, Direction::Out)
                | (Direction::Out, Direction::In)
                | (Direction::Unoriented, Direction::Unoriented)
        );
        if !ok {
            return Err(GraphError::OrientationClash(f, g));
        }
        let mut out = self.clone();
        out.involution[f] = g;
        out.involution[g] = f;
        Ok(out)
    }

    /// Disjoint union; the second graph's ids are shifted past the first's.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        if !self.same_alphabet(other) {
            return Err(GraphError::AlphabetMismatch);
        }
        let (nv, nf) = (self.vertex_count(), self.flag_count());
        let mut out = self.clone();
        for v in &other.vertices {
            out.vertices.push(Vertex { label: v.label.clone(), flags: v.flags.iter().map(|f| f + nf).collect() });
        }
        for f in &other.flags {
            out.flags.push(Flag { vertex: f.vertex + nv, label: f.label.clone(), dir: f.dir });
        }
        out.involution.extend(other.involution.iter().map(|p| p + nf));
        out.validate()?;
        Ok(out)
    }

    /// Identifies vertex `v` of `self` with the root of `other`. The merged vertex keeps `self`'s label.
    pub fn glue_at_vertex(&self, v: VertexId, other: &Graph) -> Result<Graph, GraphError> {
        let r = other.root().ok_or(GraphError::NoRoot)?;
        if v >= self.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        let map = GlueMap { vertices: vec![(v, r)], flags: vec![] };
        Ok(self.glue_along(other, &map, LabelPolicy::KeepHost)?.graph)
    }

    /// Pushout of `self` and `other` along the identified vertices and flags.
    ///
    /// Identified flags collapse to the flag of `self`. A pair of `other` whose one end is
    /// identified with an external flag of `self` becomes an internal edge of the result;
    /// pairs with both ends identified must already be edges of `self`.
    pub fn glue_along(&self, other: &Graph, map: &GlueMap, policy: LabelPolicy) -> Result<Glued, GraphError> {
        if !self.same_alphabet(other) {
            return Err(GraphError::AlphabetMismatch);
        }
        let mut v_to: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut seen_host = BTreeSet::new();
        for &(a, b) in &map.vertices {
            if a >= self.vertex_count() {
                return Err(GraphError::UnknownVertex(a));
            }
            if b >= other.vertex_count() {
                return Err(GraphError::UnknownVertex(b));
            }
            if v_to.insert(b, a).is_some() || !seen_host.insert(a) {
                return Err(GraphError::NotIsomorphicInterface(format!("vertex {a} or {b} identified twice")));
            }
            if policy == LabelPolicy::Exact && self.vertex_label(a) != other.vertex_label(b) {
                return Err(GraphError::LabelMismatch(self.vertex_label(a).into(), other.vertex_label(b).into()));
            }
        }
        let mut f_to: BTreeMap<FlagId, FlagId> = BTreeMap::new();
        let mut seen_hf = BTreeSet::new();
        for &(a, b) in &map.flags {
            if a >= self.flag_count() {
                return Err(GraphError::UnknownFlag(a));
            }
            if b >= other.flag_count() {
                return Err(GraphError::UnknownFlag(b));
            }
            if f_to.insert(b, a).is_some() || !seen_hf.insert(a) {
                return Err(GraphError::NotIsomorphicInterface(format!("flag {a} or {b} identified twice")));
            }
            let (fa, fb) = (self.flag(a), other.flag(b));
            if v_to.get(&fb.vertex) != Some(&fa.vertex) {
                return Err(GraphError::NotIsomorphicInterface(format!("flags {a}/{b} sit on unmatched vertices")));
            }
            if fa.dir != fb.dir {
                return Err(GraphError::OrientationClash(a, b));
            }
            if policy == LabelPolicy::Exact && fa.label != fb.label {
                return Err(GraphError::LabelMismatch(fa.label.clone(), fb.label.clone()));
            }
        }
        let mut out = self.clone();
        let mut vertex_image = vec![0; other.vertex_count()];
        for w in other.vertices() {
            vertex_image[w] = match v_to.get(&w) {
                Some(&a) => a,
                None => {
                    out.vertices.push(Vertex { label: other.vertex_label(w).to_string(), flags: Vec::new() });
                    out.vertices.len() - 1
                }
            };
        }
        let mut flag_image = vec![0; other.flag_count()];
        for r in 0..other.flag_count() {
            flag_image[r] = match f_to.get(&r) {
                Some(&a) => a,
                None => {
                    let fl = other.flag(r);
                    let id = out.flags.len();
                    let nv = vertex_image[fl.vertex];
                    out.flags.push(Flag { vertex: nv, label: fl.label.clone(), dir: fl.dir });
                    out.vertices[nv].flags.push(id);
                    out.involution.push(id);
                    id
                }
            };
        }
        for r in 0..other.flag_count() {
            let p = other.partner(r);
            if p <= r {
                continue;
            }
            match (f_to.get(&r), f_to.get(&p)) {
                (None, None) => {
                    let (x, y) = (flag_image[r], flag_image[p]);
                    out.involution[x] = y;
                    out.involution[y] = x;
                }
                (Some(&a), None) | (None, Some(&a)) => {
                    let loose = if f_to.contains_key(&r) { flag_image[p] } else { flag_image[r] };
                    if out.involution[a] != a {
                        return Err(GraphError::NotIsomorphicInterface(format!(
                            "flag {a} is already internal and cannot take a second partner"
                        )));
                    }
                    if out.flags[a].label != out.flags[loose].label {
                        if policy == LabelPolicy::Exact {
                            return Err(GraphError::LabelMismatch(
                                out.flags[a].label.clone(),
                                out.flags[loose].label.clone(),
                            ));
                        }
                        let l = out.flags[a].label.clone();
                        out.flags[loose].label = l;
                    }
                    out.involution[a] = loose;
                    out.involution[loose] = a;
                }
                (Some(&a), Some(&b)) => {
                    if self.partner(a) != b {
                        return Err(GraphError::NotIsomorphicInterface(format!(
                            "interface edge ({r},{p}) is not an edge of the host"
                        )));
                    }
                }
            }
        }
        out.validate()?;
        Ok(Glued { graph: out, vertex_image, flag_image })
    }

    /// Shrinks each connected component of the subgraph to a single vertex.
    ///
    /// The new vertex carries `label` when given, otherwise the label of the component's
    /// smallest vertex. Edges of the subgraph disappear; every other flag survives.
    pub fn contract(&self, sub: &Subgraph, label: Option<&str>) -> Result<Graph, GraphError> {
        sub.check(self)?;
        if let Some(l) = label {
            if !self.alphabet.has_vertex_label(l) {
                return Err(GraphError::UnknownLabel(l.to_string()));
            }
        }
        let comps = sub.components(self);
        let mut comp_of: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of.insert(v, i);
            }
        }
        let mut new_index: Vec<VertexId> = vec![usize::MAX; self.vertex_count()];
        let mut comp_index = vec![usize::MAX; comps.len()];
        let mut vertices: Vec<Vertex> = Vec::new();
        for v in self.vertices() {
            match comp_of.get(&v) {
                Some(&c) => {
                    if comp_index[c] == usize::MAX {
                        comp_index[c] = vertices.len();
                        let l = label.unwrap_or(self.vertex_label(comps[c][0]));
                        vertices.push(Vertex { label: l.to_string(), flags: Vec::new() });
                    }
                    new_index[v] = comp_index[c];
                }
                None => {
                    new_index[v] = vertices.len();
                    vertices.push(Vertex { label: self.vertex_label(v).to_string(), flags: Vec::new() });
                }
            }
        }
        let keep: Vec<FlagId> =
            (0..self.flag_count()).filter(|&f| !sub.contains_edge(self, f) || self.is_external(f)).collect();
        let fmap: BTreeMap<FlagId, FlagId> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut flags = Vec::new();
        let mut inv = Vec::new();
        for (i, &f) in keep.iter().enumerate() {
            let fl = self.flag(f);
            let nv = new_index[fl.vertex];
            vertices[nv].flags.push(i);
            flags.push(Flag { vertex: nv, label: fl.label.clone(), dir: fl.dir });
            inv.push(fmap[&self.partner(f)]);
        }
        let root = self.root().map(|r| new_index[r]);
        Graph::from_parts(self.alphabet.clone(), vertices, flags, inv, root)
    }

    /// The subgraph as a standalone graph: its edges stay paired, every other flag on its
    /// vertices becomes a leg.
    pub fn extract(&self, sub: &Subgraph) -> Result<Graph, GraphError> {
        sub.check(self)?;
        let keep_v: Vec<VertexId> = sub.vertices.iter().copied().collect();
        let keep_f: Vec<FlagId> = sub.flags(self);
        let mut g = self.restrict(&keep_v, &keep_f);
        let fmap: BTreeMap<FlagId, FlagId> = keep_f.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        for (&old, &new) in &fmap {
            if !sub.contains_edge(self, old) || self.is_external(old) {
                g.involution[new] = new;
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::are_isomorphic;
    use crate::graph::{star, GraphBuilder, LabelAlphabet};
    use std::sync::Arc;

    fn alpha() -> Arc<LabelAlphabet> {
        Arc::new(LabelAlphabet::new(&["v"], &[], &["s", "w", "e"], &[]))
    }

    fn phi2a_start() -> Graph {
        let mut b = GraphBuilder::new(alpha());
        let a = b.vertex("v");
        let c = b.vertex("v");
        b.flag(a, "s", Direction::Unoriented);
        b.flag(a, "s", Direction::Unoriented);
        b.edge(a, c, "w", false);
        b.flag(c, "s", Direction::Unoriented);
        b.flag(c, "s", Direction::Unoriented);
        b.root(a);
        b.build().unwrap()
    }

    fn triangle() -> Graph {
        let mut b = GraphBuilder::new(alpha());
        let v: Vec<_> = (0..3).map(|_| b.vertex("v")).collect();
        b.edge(v[0], v[1], "e", false);
        b.edge(v[1], v[2], "e", false);
        b.edge(v[2], v[0], "e", false);
        b.build().unwrap()
    }

    #[test]
    fn relative_external_of_whole_graph_is_legs() {
        let g = phi2a_start();
        let items = g.relative_external(&Subgraph::whole(&g)).unwrap();
        let flags: Vec<_> = items.iter().map(|i| i.inner()).collect();
        assert_eq!(flags, g.external_flags());
    }

    #[test]
    fn relative_external_of_one_vertex() {
        let g = phi2a_start();
        let items = g.relative_external(&Subgraph::induced(&g, [0]).unwrap()).unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items.iter().filter(|i| matches!(i, BoundaryItem::ExternalFlag(_))).count(), 2);
        assert!(items.contains(&BoundaryItem::Straddling { inner: 2, outer: 3 }));
    }

    #[test]
    fn empty_subgraph_is_rejected() {
        let g = phi2a_start();
        let sub = Subgraph { vertices: BTreeSet::new(), edges: BTreeSet::new() };
        assert!(matches!(g.relative_external(&sub), Err(GraphError::ClosureViolation(_))));
    }

    #[test]
    fn star_edges_cases() {
        let t = triangle();
        assert!(t.star_edges(&Subgraph::whole(&t)).is_empty());
        assert_eq!(t.star_edges(&Subgraph::induced(&t, [0]).unwrap()).len(), 2);
        let mut b = GraphBuilder::new(alpha());
        let v = b.vertex("v");
        b.edge(v, v, "e", false);
        let l = b.build().unwrap();
        assert!(l.star_edges(&Subgraph::induced(&l, [0]).unwrap()).is_empty());
    }

    #[test]
    fn removal_semantics_differ_on_cut_edges() {
        let mut b = GraphBuilder::new(alpha());
        let a = b.vertex("v");
        let c = b.vertex("v");
        b.edge(a, c, "e", false);
        let g = b.build().unwrap();
        let sub = Subgraph::induced(&g, [1]).unwrap();
        let v1 = g.remove_subgraph(&sub, RemovalSemantics::V1).unwrap();
        assert_eq!((v1.vertex_count(), v1.flag_count()), (1, 0));
        let v2 = g.remove_subgraph(&sub, RemovalSemantics::V2).unwrap();
        assert_eq!(v2.external_flags().len(), 1);
        assert_eq!(g.remove_subgraph(&Subgraph::whole(&g), RemovalSemantics::V1).unwrap_err(), GraphError::EmptyResult);
    }

    #[test]
    fn subdivision_keeps_orientation() {
        let e = directed_edge(true);
        let s = e.subdivide_edge(0, "v").unwrap();
        assert_eq!(s.vertex_count(), 3);
        let o = crate::graph::orientation_analysis(&s).unwrap();
        assert_eq!((o.sources, o.sinks), (vec![0], vec![1]));
        assert!(e.subdivide_edge(0, "nope").is_err());
    }

    #[test]
    fn join_flags_makes_a_loop() {
        let g = star(alpha(), "v", "s", 4).unwrap();
        let j = g.join_flags(0, 1).unwrap();
        assert_eq!(j.external_flags().len(), 2);
        assert_eq!(j.internal_edges(), vec![(0, 1)]);
        assert_eq!(j.join_flags(0, 2).unwrap_err(), GraphError::NotExternal(0));
        assert_eq!(g.join_flags(2, 2).unwrap_err(), GraphError::SameFlag(2));
    }

    #[test]
    fn join_straight_to_wavy_fails() {
        let mut b = GraphBuilder::new(alpha());
        let v = b.vertex("v");
        b.flag(v, "s", Direction::Unoriented);
        b.flag(v, "w", Direction::Unoriented);
        let g = b.build().unwrap();
        assert!(matches!(g.join_flags(0, 1), Err(GraphError::LabelMismatch(_, _))));
    }

    #[test]
    fn union_is_additive() {
        let g = star(alpha(), "v", "s", 4).unwrap();
        let u = g.disjoint_union(&g).unwrap();
        assert_eq!((u.vertex_count(), u.external_flags().len()), (2, 8));
        let other = star(Arc::new(LabelAlphabet::new(&["v"], &[], &["s"], &[])), "v", "s", 1).unwrap();
        assert_eq!(g.disjoint_union(&other).unwrap_err(), GraphError::AlphabetMismatch);
    }

    fn directed_edge(root_at_source: bool) -> Graph {
        let mut b = GraphBuilder::new(alpha());
        let s = b.vertex("v");
        let t = b.vertex("v");
        b.edge(s, t, "e", true);
        if root_at_source {
            b.root(s);
        }
        b.build().unwrap()
    }

    #[test]
    fn glue_at_vertex_cases() {
        let mut b = GraphBuilder::new(alpha());
        let r = b.vertex("v");
        b.root(r);
        let point = b.build().unwrap();
        let e = directed_edge(true);
        let g = point.glue_at_vertex(0, &e).unwrap();
        assert!(are_isomorphic(&g, &e).unwrap());
        let path = e.glue_at_vertex(1, &e).unwrap();
        assert_eq!(path.vertex_count(), 3);
        assert_eq!(path.root(), Some(0));
        assert_eq!(crate::graph::orientation_analysis(&path).unwrap().sources, vec![0]);
        assert_eq!(point.glue_at_vertex(0, &directed_edge(false)).unwrap_err(), GraphError::NoRoot);
    }

    #[test]
    fn glue_two_cycles_along_the_cycle() {
        let cyc = |tail: bool| {
            let mut b = GraphBuilder::new(alpha());
            let v: Vec<_> = (0..3).map(|_| b.vertex("v")).collect();
            b.edge(v[0], v[1], "e", true);
            b.edge(v[1], v[2], "e", true);
            b.edge(v[2], v[0], "e", true);
            if tail {
                let t = b.vertex("v");
                b.edge(v[0], t, "e", true);
            }
            b.build().unwrap()
        };
        let (g1, g2) = (cyc(true), cyc(true));
        let map = GlueMap {
            vertices: vec![(0, 0), (1, 1), (2, 2)],
            flags: vec![(0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (5, 5)],
        };
        let glued = g1.glue_along(&g2, &map, LabelPolicy::Exact).unwrap().graph;
        assert_eq!(glued.vertex_count(), 5);
        assert_eq!(glued.internal_edges().len(), 5);
        let mut other = GraphBuilder::new(Arc::new(LabelAlphabet::new(&["v", "u"], &[], &["e"], &[])));
        let _ = other.vertex("u");
        let plain = {
            let mut b = GraphBuilder::new(alpha());
            b.vertex("v");
            b.build().unwrap()
        };
        let u = other.build().unwrap();
        assert!(plain.glue_along(&u, &GlueMap { vertices: vec![(0, 0)], flags: vec![] }, LabelPolicy::Exact).is_err());
    }

    #[test]
    fn glue_reports_label_mismatch() {
        let ab = Arc::new(LabelAlphabet::new(&["v", "u"], &[], &["e"], &[]));
        let mut b = GraphBuilder::new(ab.clone());
        b.vertex("v");
        let g1 = b.build().unwrap();
        let mut b = GraphBuilder::new(ab);
        b.vertex("u");
        let g2 = b.build().unwrap();
        let map = GlueMap { vertices: vec![(0, 0)], flags: vec![] };
        assert!(matches!(g1.glue_along(&g2, &map, LabelPolicy::Exact), Err(GraphError::LabelMismatch(_, _))));
        assert!(g1.glue_along(&g2, &map, LabelPolicy::KeepHost).is_ok());
    }

    #[test]
    fn contract_cases() {
        let mut b = GraphBuilder::new(alpha());
        let v = b.vertex("v");
        b.edge(v, v, "e", false);
        b.flag(v, "s", Direction::Unoriented);
        b.flag(v, "s", Direction::Unoriented);
        let g = b.build().unwrap();
        let c = g.contract(&Subgraph::induced(&g, [0]).unwrap(), None).unwrap();
        assert_eq!(c.valence(0), 2);
        let t = triangle();
        let point = t.contract(&Subgraph::new(&t, [1], []).unwrap(), None).unwrap();
        assert!(are_isomorphic(&t, &point).unwrap());
    }

    #[test]
    fn contract_fish_in_phi4() {
        // two 4-valent vertices joined by two edges inside a graph with a third vertex
        let mut b = GraphBuilder::new(alpha());
        let a = b.vertex("v");
        let c = b.vertex("v");
        let d = b.vertex("v");
        b.edge(a, c, "s", false);
        b.edge(a, c, "s", false);
        b.edge(a, d, "s", false);
        b.edge(c, d, "s", false);
        b.flag(a, "s", Direction::Unoriented);
        b.flag(c, "s", Direction::Unoriented);
        b.edge(d, d, "s", false);
        let g = b.build().unwrap();
        let sub = Subgraph::new(&g, [0, 1], [0, 2]).unwrap();
        let q = g.contract(&sub, None).unwrap();
        assert_eq!(q.vertex_count(), 2);
        let merged = q.vertices().find(|&v| q.valence(v) == 4).unwrap();
        assert_eq!(q.flags_at(merged).len(), 4);
    }
}
