use std::collections::BTreeMap;

use super::{is_member, FeynmanError, Profile, TheorySpec, KINETIC, VERTEX};
use crate::canonical::{canonical_code, CanonicalCode};
use crate::graph::{connectivity, Graph, Subgraph};

const MAX_EDGES: usize = 20;

/// One admissible subgraph class `γ ⊗ G/γ` with the number of edge sets realizing it.
#[derive(Clone, Debug)]
pub struct AdmissiblePair {
    /// A representative subgraph of the host.
    pub gamma: Subgraph,
    pub gamma_graph: Graph,
    pub gamma_code: CanonicalCode,
    pub quotient: Graph,
    pub quotient_code: CanonicalCode,
    pub multiplicity: usize,
}

/// `Δ(G) = G⊗1 + 1⊗G + Σ γ⊗G/γ`; the two primitive terms are implicit.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub graph: Graph,
    pub pairs: Vec<AdmissiblePair>,
}

/// A product of connected graphs as a multiset of codes; the empty multiset is the unit.
pub type Monomial = BTreeMap<CanonicalCode, usize>;

fn leg_profile(spec: &TheorySpec, g: &Graph) -> Option<Profile> {
    let mut p = vec![0; spec.t];
    for f in g.external_flags() {
        p[spec.flag_type(&g.flag(f).label)? - 1] += 1;
    }
    Some(p)
}

fn legal_contraction(spec: &TheorySpec, p: &Profile) -> bool {
    spec.profiles().contains(p) || spec.two_valent && p.iter().sum::<usize>() == 2 && p.contains(&2)
}

/// Contracts each component of `sub` to a vertex; two-valent results become kinetic vertices.
fn quotient(g: &Graph, sub: &Subgraph) -> Result<Graph, FeynmanError> {
    let mut q = g.contract(sub, Some(VERTEX))?;
    for v in 0..q.vertex_count() {
        if q.vertex_label(v) == VERTEX && q.valence(v) == 2 {
            q = q.with_vertex_label(v, KINETIC)?;
        }
    }
    Ok(q)
}

/// Every proper edge set whose components are 1PI with a legal leg profile and whose quotient
/// is a 1PI graph of the theory, one entry per edge set.
fn admissible(spec: &TheorySpec, g: &Graph) -> Result<Vec<(Subgraph, Graph, Graph)>, FeynmanError> {
    let edges: Vec<usize> = g.internal_edges().into_iter().map(|(f, _)| f).collect();
    if edges.len() > MAX_EDGES {
        return Err(FeynmanError::UnsupportedSpec(format!(
            "{} internal edges exceed the subgraph scan limit",
            edges.len()
        )));
    }
    let full = (1u32 << edges.len()) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        let chosen: Vec<usize> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let vertices = chosen.iter().flat_map(|&f| {
            let (a, b) = g.edge_ends(f);
            [a, b]
        });
        let sub = Subgraph::new(g, vertices.collect::<Vec<_>>(), chosen.iter().copied())?;
        let ok = sub.components(g).into_iter().all(|comp| {
            let part = Subgraph::new(
                g,
                comp.iter().copied(),
                sub.edges.iter().copied().filter(|&f| comp.contains(&g.edge_ends(f).0)),
            )
            .and_then(|s| g.extract(&s));
            match part {
                Ok(c) => connectivity(&c).one_pi && leg_profile(spec, &c).is_some_and(|p| legal_contraction(spec, &p)),
                Err(_) => false,
            }
        });
        if !ok {
            continue;
        }
        let q = quotient(g, &sub)?;
        if !connectivity(&q).one_pi || !is_member(spec, &q)? {
            continue;
        }
        let gg = g.extract(&sub)?;
        out.push((sub, gg, q));
    }
    Ok(out)
}

/// The reduced coproduct of a 1PI member graph, grouped by (code of γ, code of G/γ).
pub fn ck_coproduct(spec: &TheorySpec, g: &Graph) -> Result<Coproduct, FeynmanError> {
    if !is_member(spec, g)? {
        return Err(FeynmanError::NotMember);
    }
    if !connectivity(g).one_pi {
        return Err(FeynmanError::NotOnePI);
    }
    let mut groups: BTreeMap<(CanonicalCode, CanonicalCode), AdmissiblePair> = BTreeMap::new();
    for (sub, gg, q) in admissible(spec, g)? {
        let key = (canonical_code(&gg), canonical_code(&q));
        groups.entry(key.clone()).and_modify(|p| p.multiplicity += 1).or_insert(AdmissiblePair {
            gamma: sub,
            gamma_graph: gg,
            gamma_code: key.0,
            quotient: q,
            quotient_code: key.1,
            multiplicity: 1,
        });
    }
    Ok(Coproduct { graph: g.clone(), pairs: groups.into_values().collect() })
}

fn components(g: &Graph) -> Result<Vec<Graph>, FeynmanError> {
    let whole = Subgraph::whole(g);
    let mut out = Vec::new();
    for comp in whole.components(g) {
        let edges = whole.edges.iter().copied().filter(|&f| comp.contains(&g.edge_ends(f).0));
        out.push(g.extract(&Subgraph::new(g, comp.iter().copied(), edges)?)?);
    }
    Ok(out)
}

fn monomial(graphs: &[&Graph], registry: &mut BTreeMap<CanonicalCode, Graph>) -> Monomial {
    let mut m = Monomial::new();
    for g in graphs {
        let c = canonical_code(g);
        registry.entry(c.clone()).or_insert_with(|| (*g).clone());
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

fn times(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = a.clone();
    for (c, k) in b {
        *out.entry(c.clone()).or_insert(0) += k;
    }
    out
}

type Tensor = BTreeMap<(Monomial, Monomial), usize>;

/// `Δ` of a connected graph as a multiset of pairs of monomials, every edge set counted.
pub fn coproduct_monomials(
    spec: &TheorySpec,
    g: &Graph,
    registry: &mut BTreeMap<CanonicalCode, Graph>,
) -> Result<BTreeMap<(Monomial, Monomial), usize>, FeynmanError> {
    let mut out = Tensor::new();
    let whole = monomial(&[g], registry);
    *out.entry((whole.clone(), Monomial::new())).or_insert(0) += 1;
    *out.entry((Monomial::new(), whole)).or_insert(0) += 1;
    for (_, gg, q) in admissible(spec, g)? {
        let parts = components(&gg)?;
        let refs: Vec<&Graph> = parts.iter().collect();
        let left = monomial(&refs, registry);
        let right = monomial(&[&q], registry);
        *out.entry((left, right)).or_insert(0) += 1;
    }
    Ok(out)
}

fn delta_monomial(
    spec: &TheorySpec,
    m: &Monomial,
    registry: &mut BTreeMap<CanonicalCode, Graph>,
    cache: &mut BTreeMap<CanonicalCode, Tensor>,
) -> Result<Tensor, FeynmanError> {
    let mut acc = Tensor::from([((Monomial::new(), Monomial::new()), 1)]);
    for (code, &power) in m {
        if !cache.contains_key(code) {
            let g = registry[code].clone();
            let d = coproduct_monomials(spec, &g, registry)?;
            cache.insert(code.clone(), d);
        }
        for _ in 0..power {
            let mut next = Tensor::new();
            for ((a, b), x) in &acc {
                for ((c, d), y) in &cache[code] {
                    *next.entry((times(a, c), times(b, d))).or_insert(0) += x * y;
                }
            }
            acc = next;
        }
    }
    Ok(acc)
}

/// Both sides of `(Δ⊗id)Δ(G) = (id⊗Δ)Δ(G)` as multisets of triples of monomials.
pub type TripleCounts = BTreeMap<(Monomial, Monomial, Monomial), usize>;

pub fn check_coassociativity(spec: &TheorySpec, g: &Graph) -> Result<(TripleCounts, TripleCounts), FeynmanError> {
    let mut registry = BTreeMap::new();
    let mut cache = BTreeMap::new();
    let delta = coproduct_monomials(spec, g, &mut registry)?;
    let mut left = TripleCounts::new();
    let mut right = TripleCounts::new();
    for ((a, b), x) in &delta {
        for ((a1, a2), y) in delta_monomial(spec, a, &mut registry, &mut cache)? {
            *left.entry((a1, a2, b.clone())).or_insert(0) += x * y;
        }
        for ((b1, b2), y) in delta_monomial(spec, b, &mut registry, &mut cache)? {
            *right.entry((a.clone(), b1, b2)).or_insert(0) += x * y;
        }
    }
    Ok((left, right))
}
