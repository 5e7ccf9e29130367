use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{is_member, FeynmanError, TheorySpec};
use crate::canonical::canonical_code;
use crate::graph::{FlagId, Graph, GraphError, VertexId};
use crate::liealg::FormalSum;

/// How insertions at one vertex are counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketMode {
    /// Every type-respecting bijection of legs with the vertex's flags counts once.
    #[default]
    AllBijections,
    /// Each distinct resulting graph counts once per vertex.
    Inequivalent,
}

fn bijections(a: &Graph, from: &[FlagId], b: &Graph, to: &[FlagId]) -> Vec<Vec<FlagId>> {
    fn go(
        a: &Graph,
        from: &[FlagId],
        b: &Graph,
        to: &[FlagId],
        used: &mut [bool],
        cur: &mut Vec<FlagId>,
        out: &mut Vec<Vec<FlagId>>,
    ) {
        if cur.len() == from.len() {
            out.push(cur.clone());
            return;
        }
        let l = &a.flag(from[cur.len()]).label;
        for j in 0..to.len() {
            if used[j] || b.flag(to[j]).label != *l {
                continue;
            }
            used[j] = true;
            cur.push(to[j]);
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

/// Replaces vertex `v` of `g1` by `g2`, the flag `flags_at(v)[i]` becoming leg `sigma[i]` of `g2`.
fn replace_vertex(g1: &Graph, v: VertexId, g2: &Graph, sigma: &[FlagId]) -> Result<Graph, GraphError> {
    let at_v = g1.flags_at(v).to_vec();
    let keep_v: Vec<VertexId> = g1.vertices().filter(|&w| w != v).collect();
    let keep_f: Vec<FlagId> = (0..g1.flag_count()).filter(|f| !at_v.contains(f)).collect();
    let new_index = |f: FlagId| keep_f.binary_search(&f).ok();
    let (rest, shift) = if keep_v.is_empty() {
        (None, 0)
    } else {
        let r = g1.restrict(&keep_v, &keep_f);
        let n = r.flag_count();
        (Some(r), n)
    };
    let mut out = match &rest {
        Some(r) => r.disjoint_union(g2)?,
        None => g2.clone(),
    };
    let slot = |f: FlagId| sigma[at_v.iter().position(|&x| x == f).expect("flag at v")] + shift;
    let mut done = BTreeSet::new();
    for &f in &at_v {
        let p = g1.partner(f);
        if p == f || !done.insert(f) {
            continue;
        }
        if at_v.contains(&p) {
            done.insert(p);
            out = out.join_flags(slot(f), slot(p))?;
        } else {
            let o = new_index(p).expect("partner survives");
            out = out.join_flags(o, slot(f))?;
        }
    }
    out.with_root(None)
}

fn insertions(g1: &Graph, g2: &Graph, mode: BracketMode) -> Result<FormalSum, GraphError> {
    let legs = g2.external_flags();
    let mut out = FormalSum::zero();
    for v in g1.vertices() {
        let at_v = g1.flags_at(v).to_vec();
        let mut seen = BTreeSet::new();
        for sigma in bijections(g1, &at_v, g2, &legs) {
            let r = replace_vertex(g1, v, g2, &sigma)?;
            if mode == BracketMode::Inequivalent && !seen.insert(canonical_code(&r)) {
                continue;
            }
            out.add_graph(&r, BigRational::one());
        }
    }
    Ok(out)
}

/// `[G1, G2] = Σ_v G1∘_v G2 − Σ_v' G2∘_v' G1`, inserting a graph at every vertex whose flags
/// match its legs type by type.
pub fn qft_bracket(spec: &TheorySpec, g1: &Graph, g2: &Graph, mode: BracketMode) -> Result<FormalSum, FeynmanError> {
    for g in [g1, g2] {
        if !is_member(spec, g)? {
            return Err(FeynmanError::SpecMismatch);
        }
    }
    let a = insertions(g1, g2, mode)?;
    let b = insertions(g2, g1, mode)?;
    Ok(a.minus(&b))
}
