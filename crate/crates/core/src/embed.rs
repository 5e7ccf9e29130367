//! Pattern matching of one graph inside another.

use std::collections::BTreeSet;

use crate::graph::{FlagId, Graph, VertexId};

/// How external flags of the pattern may be matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Externality {
    /// A pattern leg may land on any flag of the host.
    #[default]
    Any,
    /// A pattern leg must land on a host leg.
    Exact,
}

/// How the flags at a pattern vertex relate to the flags at its image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CorollaMatch {
    /// The pattern corolla injects into the host corolla.
    #[default]
    Subset,
    /// The pattern corolla is in bijection with the host corolla.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchPolicy {
    pub vertex_labels: bool,
    pub flag_labels: bool,
    pub externality: Externality,
    pub corolla: CorollaMatch,
    /// Report each distinct flag assignment instead of one per vertex map.
    pub distinct_flag_maps: bool,
}

impl Default for MatchPolicy {
    fn default() -> Self {
        MatchPolicy {
            vertex_labels: true,
            flag_labels: true,
            externality: Externality::Any,
            corolla: CorollaMatch::Subset,
            distinct_flag_maps: false,
        }
    }
}

impl MatchPolicy {
    /// Exact label, leg and corolla matching with every flag assignment reported.
    pub fn isomorphism() -> Self {
        MatchPolicy {
            externality: Externality::Exact,
            corolla: CorollaMatch::Exact,
            distinct_flag_maps: true,
            ..Self::default()
        }
    }
}

/// Injective maps from pattern vertices and flags into the host.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    pub vertex_map: Vec<VertexId>,
    pub flag_map: Vec<FlagId>,
}

struct Search<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    policy: MatchPolicy,
    order: Vec<VertexId>,
    vmap: Vec<Option<VertexId>>,
    fmap: Vec<Option<FlagId>>,
    host_vertex_used: Vec<bool>,
    host_flag_used: Vec<bool>,
    pattern_flags: Vec<FlagId>,
}

impl<'a> Search<'a> {
    fn vertex_ok(&self, p: VertexId, h: VertexId) -> bool {
        if self.host_vertex_used[h] {
            return false;
        }
        if self.policy.vertex_labels && self.pattern.vertex_label(p) != self.host.vertex_label(h) {
            return false;
        }
        match self.policy.corolla {
            CorollaMatch::Subset => self.pattern.valence(p) <= self.host.valence(h),
            CorollaMatch::Exact => self.pattern.valence(p) == self.host.valence(h),
        }
    }

    fn vertices(&mut self, i: usize, out: &mut Vec<Embedding>) {
        if i == self.order.len() {
            let mut found = Vec::new();
            self.flags(0, !self.policy.distinct_flag_maps, &mut found);
            out.extend(found);
            return;
        }
        let p = self.order[i];
        for h in self.host.vertices() {
            if !self.vertex_ok(p, h) || !self.adjacency_ok(p, h) {
                continue;
            }
            self.vmap[p] = Some(h);
            self.host_vertex_used[h] = true;
            self.vertices(i + 1, out);
            self.host_vertex_used[h] = false;
            self.vmap[p] = None;
        }
    }

    /// Cheap necessary condition: every mapped pattern neighbour is a host neighbour.
    fn adjacency_ok(&self, p: VertexId, h: VertexId) -> bool {
        self.pattern.neighbours(p).all(|q| match self.vmap[q] {
            Some(hq) => self.host.neighbours(h).any(|x| x == hq),
            None => q != p || self.host.neighbours(h).any(|x| x == h),
        })
    }

    fn flag_ok(&self, f: FlagId, hf: FlagId) -> bool {
        if self.host_flag_used[hf] {
            return false;
        }
        let (pf, hfl) = (self.pattern.flag(f), self.host.flag(hf));
        if hfl.vertex != self.vmap[pf.vertex].expect("vertex mapped") || pf.dir != hfl.dir {
            return false;
        }
        if self.policy.flag_labels && pf.label != hfl.label {
            return false;
        }
        let pp = self.pattern.partner(f);
        if pp == f {
            return self.policy.externality == Externality::Any || self.host.is_external(hf);
        }
        let hp = self.host.partner(hf);
        if hp == hf {
            return false;
        }
        if let Some(mapped) = self.fmap[pp] {
            return mapped == hp;
        }
        let partner_vertex = self.pattern.flag(pp).vertex;
        self.vmap[partner_vertex] == Some(self.host.flag(hp).vertex) && !self.host_flag_used[hp]
    }

    fn flags(&mut self, i: usize, first_only: bool, out: &mut Vec<Embedding>) -> bool {
        if i == self.pattern_flags.len() {
            let vertex_map = self.vmap.iter().map(|v| v.expect("mapped")).collect();
            let flag_map = self.fmap.iter().map(|f| f.expect("mapped")).collect();
            out.push(Embedding { vertex_map, flag_map });
            return first_only;
        }
        let f = self.pattern_flags[i];
        let h = self.vmap[self.pattern.flag(f).vertex].expect("mapped");
        let candidates: Vec<FlagId> = self.host.flags_at(h).to_vec();
        for hf in candidates {
            if !self.flag_ok(f, hf) {
                continue;
            }
            self.fmap[f] = Some(hf);
            self.host_flag_used[hf] = true;
            let stop = self.flags(i + 1, first_only, out);
            self.host_flag_used[hf] = false;
            self.fmap[f] = None;
            if stop {
                return true;
            }
        }
        false
    }
}

fn bfs_order(g: &Graph) -> Vec<VertexId> {
    let mut seen = vec![false; g.vertex_count()];
    let mut order = Vec::new();
    for s in g.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut i = order.len();
        order.push(s);
        while i < order.len() {
            let v = order[i];
            i += 1;
            let next: BTreeSet<VertexId> = g.neighbours(v).collect();
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// All embeddings of `pattern` into `host` under `policy`.
pub fn find_embeddings(pattern: &Graph, host: &Graph, policy: MatchPolicy) -> Vec<Embedding> {
    let order = bfs_order(pattern);
    let pattern_flags = order.iter().flat_map(|&v| pattern.flags_at(v).iter().copied()).collect();
    let mut s = Search {
        pattern,
        host,
        policy,
        order,
        vmap: vec![None; pattern.vertex_count()],
        fmap: vec![None; pattern.flag_count()],
        host_vertex_used: vec![false; host.vertex_count()],
        host_flag_used: vec![false; host.flag_count()],
        pattern_flags,
    };
    let mut out = Vec::new();
    s.vertices(0, &mut out);
    out
}

/// Number of automorphisms (vertex and flag permutations preserving all structure and the root).
pub fn automorphism_count(g: &Graph) -> usize {
    find_embeddings(g, g, MatchPolicy::isomorphism())
        .into_iter()
        .filter(|e| g.root().is_none_or(|r| e.vertex_map[r] == r))
        .count()
}
