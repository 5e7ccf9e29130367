use std::collections::{BTreeSet, VecDeque};

use super::{Direction, FlagId, Graph, GraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    /// Connected and still connected after deleting any single internal edge.
    pub one_pi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub acyclic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CycleKind {
    Attractor,
    Repeller,
    Neither,
}

/// A simple directed cycle: its vertices in traversal order and its edges as (out flag, in flag).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(FlagId, FlagId)>,
}

fn count_components(g: &Graph, skip_edge: Option<FlagId>) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut comps = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        comps += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &f in g.flags_at(v) {
                let p = g.partner(f);
                if p == f || skip_edge.is_some_and(|e| e == f || e == p) {
                    continue;
                }
                let w = g.flag(p).vertex;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    comps
}

pub fn connectivity(g: &Graph) -> Connectivity {
    let connected = count_components(g, None) == 1;
    let one_pi = connected && g.internal_edges().iter().all(|&(f, _)| count_components(g, Some(f)) == 1);
    Connectivity { connected, one_pi }
}

/// Sources, sinks and acyclicity of an oriented graph. Only internal edges count.
pub fn orientation_analysis(g: &Graph) -> Result<Orientation, GraphError> {
    if g.has_unoriented_flags() {
        return Err(GraphError::Unoriented);
    }
    let n = g.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    let mut succ: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (f, _) in g.internal_edges() {
        let (s, t) = g.source_target(f).expect("oriented internal edge");
        outdeg[s] += 1;
        indeg[t] += 1;
        succ[s].push(t);
    }
    let sources = (0..n).filter(|&v| indeg[v] == 0).collect();
    let sinks = (0..n).filter(|&v| outdeg[v] == 0).collect();
    let mut remaining = indeg.clone();
    let mut queue: VecDeque<_> = (0..n).filter(|&v| remaining[v] == 0).collect();
    let mut visited = 0;
    while let Some(v) = queue.pop_front() {
        visited += 1;
        for &w in &succ[v] {
            remaining[w] -= 1;
            if remaining[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    Ok(Orientation { sources, sinks, acyclic: visited == n })
}

/// Every simple directed cycle, each reported once, starting from its smallest vertex.
pub fn directed_cycles(g: &Graph) -> Result<Vec<Cycle>, GraphError> {
    if g.has_unoriented_flags() {
        return Err(GraphError::Unoriented);
    }
    let n = g.vertex_count();
    let mut out_edges: Vec<Vec<(FlagId, FlagId, VertexId)>> = vec![Vec::new(); n];
    for v in 0..n {
        for &f in g.flags_at(v) {
            let p = g.partner(f);
            if p != f && g.flag(f).dir == Direction::Out {
                out_edges[v].push((f, p, g.flag(p).vertex));
            }
        }
    }
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut path_v = vec![start];
        let mut path_e = Vec::new();
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend_cycles(start, start, &out_edges, &mut path_v, &mut path_e, &mut on_path, &mut cycles);
    }
    Ok(cycles)
}

fn extend_cycles(
    start: VertexId,
    v: VertexId,
    out_edges: &[Vec<(FlagId, FlagId, VertexId)>],
    path_v: &mut Vec<VertexId>,
    path_e: &mut Vec<(FlagId, FlagId)>,
    on_path: &mut [bool],
    cycles: &mut Vec<Cycle>,
) {
    for &(f, p, w) in &out_edges[v] {
        if w == start {
            let mut edges = path_e.clone();
            edges.push((f, p));
            cycles.push(Cycle { vertices: path_v.clone(), edges });
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path_v.push(w);
            path_e.push((f, p));
            extend_cycles(start, w, out_edges, path_v, path_e, on_path, cycles);
            path_e.pop();
            path_v.pop();
            on_path[w] = false;
        }
    }
}

/// Flags on the given vertices that are not among `used` and lead out of the vertex set.
/// Returns `None` when some unused flag joins two of the vertices (a chord or a loop), since
/// such an edge is neither incoming nor outgoing.
pub fn boundary_flags(g: &Graph, vertices: &BTreeSet<VertexId>, used: &BTreeSet<FlagId>) -> Option<Vec<FlagId>> {
    let mut out = Vec::new();
    for &v in vertices {
        for &f in g.flags_at(v) {
            if used.contains(&f) {
                continue;
            }
            let p = g.partner(f);
            if p != f && vertices.contains(&g.flag(p).vertex) {
                return None;
            }
            out.push(f);
        }
    }
    Some(out)
}

/// Flags outside the cycle that connect it to the rest of the graph, or `None` if the cycle has a chord.
pub fn cycle_boundary(g: &Graph, cycle: &Cycle) -> Option<Vec<FlagId>> {
    let on: BTreeSet<VertexId> = cycle.vertices.iter().copied().collect();
    let used: BTreeSet<FlagId> = cycle.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    boundary_flags(g, &on, &used)
}

/// Classifies every simple directed cycle as attractor (all boundary flags incoming) and/or
/// repeller (all outgoing). A cycle with empty boundary is reported under both kinds; a cycle
/// with a chord is neither.
pub fn classify_cycles(g: &Graph) -> Result<Vec<(Cycle, CycleKind)>, GraphError> {
    let mut out = Vec::new();
    for c in directed_cycles(g)? {
        let (attractor, repeller) = match cycle_boundary(g, &c) {
            Some(b) => {
                (b.iter().all(|&f| g.flag(f).dir == Direction::In), b.iter().all(|&f| g.flag(f).dir == Direction::Out))
            }
            None => (false, false),
        };
        if attractor {
            out.push((c.clone(), CycleKind::Attractor));
        }
        if repeller {
            out.push((c.clone(), CycleKind::Repeller));
        }
        if !attractor && !repeller {
            out.push((c, CycleKind::Neither));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, LabelAlphabet};
    use std::sync::Arc;

    fn alpha() -> Arc<LabelAlphabet> {
        Arc::new(LabelAlphabet::new(&["v"], &[], &["e"], &[]))
    }

    fn directed(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut b = GraphBuilder::new(alpha());
        for _ in 0..n {
            b.vertex("v");
        }
        for &(s, t) in edges {
            b.edge(s, t, "e", true);
        }
        b.build().unwrap()
    }

    #[test]
    fn bridges_break_one_pi() {
        let path = directed(3, &[(0, 1), (1, 2)]);
        assert_eq!(connectivity(&path), Connectivity { connected: true, one_pi: false });
        let tri = directed(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(connectivity(&tri).one_pi);
        let two = directed(2, &[]);
        assert!(!connectivity(&two).connected);
    }

    #[test]
    fn dag_sources_and_sinks() {
        let g = directed(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let o = orientation_analysis(&g).unwrap();
        assert_eq!((o.sources, o.sinks, o.acyclic), (vec![0], vec![3], true));
        let cyc = directed(1, &[(0, 0)]);
        assert!(!orientation_analysis(&cyc).unwrap().acyclic);
    }

    #[test]
    fn unoriented_graph_is_rejected() {
        let mut b = GraphBuilder::new(alpha());
        let a = b.vertex("v");
        let c = b.vertex("v");
        b.edge(a, c, "e", false);
        assert_eq!(orientation_analysis(&b.build().unwrap()).unwrap_err(), GraphError::Unoriented);
    }

    #[test]
    fn isolated_cycle_is_both_kinds() {
        let tri = directed(3, &[(0, 1), (1, 2), (2, 0)]);
        let kinds: Vec<_> = classify_cycles(&tri).unwrap().into_iter().map(|(_, k)| k).collect();
        assert_eq!(kinds, vec![CycleKind::Attractor, CycleKind::Repeller]);
    }

    #[test]
    fn tails_decide_the_kind() {
        let attract = directed(4, &[(0, 1), (1, 2), (2, 0), (3, 0)]);
        assert_eq!(classify_cycles(&attract).unwrap()[0].1, CycleKind::Attractor);
        let repel = directed(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]);
        let r = classify_cycles(&repel).unwrap();
        assert_eq!((r.len(), r[0].1), (1, CycleKind::Repeller));
        let mixed = directed(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (4, 1)]);
        assert_eq!(classify_cycles(&mixed).unwrap()[0].1, CycleKind::Neither);
    }

    #[test]
    fn two_cycles_sharing_an_edge() {
        let g = directed(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)]);
        assert_eq!(directed_cycles(&g).unwrap().len(), 2);
    }
}
