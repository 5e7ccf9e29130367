//! Canonical forms and isomorphism testing.
//!
//! Vertices are ordered by colour refinement followed by individualisation; the canonical
//! code is the lexicographically smallest serialisation over all discrete leaves.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{Graph, GraphError, VertexId};

/// Byte string identifying a graph up to isomorphism (labels, directions, root included).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<CanonicalCode, hex::FromHexError> {
        hex::decode(s).map(CanonicalCode)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.to_hex();
        if h.len() > 16 {
            write!(f, "Code({}..{})", &h[..8], &h[h.len() - 8..])
        } else {
            write!(f, "Code({h})")
        }
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

const EXTERNAL: u32 = u32::MAX;

/// Flag descriptor seen from its own vertex: (label, direction, partner vertex colour, partner direction).
type Descriptor<'a> = (&'a str, u8, u32, u8);

fn descriptors<'a>(g: &'a Graph, v: VertexId, colour: &[u32]) -> Vec<Descriptor<'a>> {
    let mut out: Vec<Descriptor<'a>> = g
        .flags_at(v)
        .iter()
        .map(|&f| {
            let fl = g.flag(f);
            let p = g.partner(f);
            if p == f {
                (fl.label.as_str(), fl.dir.tag(), EXTERNAL, 0)
            } else {
                let pf = g.flag(p);
                (fl.label.as_str(), fl.dir.tag(), colour[pf.vertex], pf.dir.tag())
            }
        })
        .collect();
    out.sort_unstable();
    out
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present") as u32).collect()
}

fn initial_colours(g: &Graph) -> Vec<u32> {
    let flat = vec![0u32; g.vertex_count()];
    let keys: Vec<_> = g
        .vertices()
        .map(|v| {
            let d: Vec<_> =
                descriptors(g, v, &flat).into_iter().map(|(l, t, p, pt)| (l, t, p == EXTERNAL, pt)).collect();
            (g.vertex_label(v), g.root() != Some(v), d)
        })
        .collect();
    rank(&keys)
}

fn refine(g: &Graph, mut colour: Vec<u32>) -> Vec<u32> {
    loop {
        let keys: Vec<_> = g.vertices().map(|v| (colour[v], descriptors(g, v, &colour))).collect();
        let next = rank(&keys);
        let cells = |c: &[u32]| c.iter().copied().max().map_or(0, |m| m + 1);
        if cells(&next) == cells(&colour) {
            return next;
        }
        colour = next;
    }
}

fn individualise(colour: &[u32], v: VertexId) -> Vec<u32> {
    let keys: Vec<(u32, bool)> = colour.iter().enumerate().map(|(w, &c)| (c, w != v)).collect();
    rank(&keys)
}

fn push_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_be_bytes());
    out.extend_from_slice(s.as_bytes());
}

/// Serialises the graph with vertex `v` placed at position `pos[v]`.
fn encode(g: &Graph, pos: &[u32]) -> Vec<u8> {
    let n = g.vertex_count();
    let mut order = vec![0; n];
    for v in 0..n {
        order[pos[v] as usize] = v;
    }
    let mut out = Vec::new();
    out.extend_from_slice(&(n as u32).to_be_bytes());
    out.extend_from_slice(&g.root().map_or(EXTERNAL, |r| pos[r]).to_be_bytes());
    for &v in &order {
        push_str(&mut out, g.vertex_label(v));
        let d = descriptors(g, v, pos);
        out.extend_from_slice(&(d.len() as u32).to_be_bytes());
        for (l, t, p, pt) in d {
            push_str(&mut out, l);
            out.push(t);
            out.extend_from_slice(&p.to_be_bytes());
            out.push(pt);
        }
    }
    out
}

/// True when the vertex permutation `perm` preserves every flag descriptor.
fn is_automorphism(g: &Graph, perm: &[u32]) -> bool {
    if g.root().is_some_and(|r| perm[r] as usize != r) {
        return false;
    }
    let ident: Vec<u32> = (0..g.vertex_count() as u32).collect();
    g.vertices().all(|v| {
        let w = perm[v] as usize;
        g.vertex_label(v) == g.vertex_label(w) && descriptors(g, v, perm) == descriptors(g, w, &ident)
    })
}

fn search(g: &Graph, colour: Vec<u32>, best: &mut Option<Vec<u8>>) {
    let mut cells: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
    for (v, &c) in colour.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    let target = cells.values().filter(|c| c.len() > 1).min_by_key(|c| c.len()).cloned();
    let Some(cell) = target else {
        let code = encode(g, &colour);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    let mut tried: Vec<VertexId> = Vec::new();
    for &u in &cell {
        let twin = tried.iter().any(|&w| {
            let mut perm: Vec<u32> = (0..g.vertex_count() as u32).collect();
            perm.swap(u, w);
            is_automorphism(g, &perm)
        });
        if twin {
            continue;
        }
        tried.push(u);
        search(g, refine(g, individualise(&colour, u)), best);
    }
}

/// Canonical code of a graph; equal codes iff the graphs are isomorphic.
pub fn canonical_code(g: &Graph) -> CanonicalCode {
    let mut best = None;
    search(g, refine(g, initial_colours(g)), &mut best);
    CanonicalCode(best.expect("graphs have at least one vertex"))
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    if !a.same_alphabet(b) {
        return Err(GraphError::AlphabetMismatch);
    }
    if a.vertex_count() != b.vertex_count() || a.flag_count() != b.flag_count() {
        return Ok(false);
    }
    Ok(canonical_code(a) == canonical_code(b))
}
