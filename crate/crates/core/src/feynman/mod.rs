//! Scalar and gauge-type theories: their graph grammars, membership, enumeration,
//! the Connes–Kreimer coproduct and the insertion bracket.

mod bracket;
mod coproduct;

pub use bracket::{qft_bracket, BracketMode};
pub use coproduct::{check_coassociativity, ck_coproduct, coproduct_monomials, AdmissiblePair, Coproduct, Monomial};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::embed::Embedding;
use crate::grammar::{self, derive, Bounds, Grammar, GrammarError, ProductionRule, RuleKind};
use crate::graph::{connectivity, Direction, FlagId, Graph, GraphBuilder, GraphError, LabelAlphabet};

/// Label of ordinary terminal vertices.
pub const VERTEX: &str = "V";
/// Label of vertices still allowed to grow.
pub const GROWING: &str = "X";
/// Labels of the two kinds of two-valent vertex.
pub const KINETIC: &str = "K";
pub const MASS: &str = "M";

pub fn terminal_flag(ty: usize) -> String {
    format!("T{ty}")
}

pub fn open_flag(ty: usize) -> String {
    format!("N{ty}")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeynmanError {
    #[error("invalid theory: {0}")]
    InvalidSpec(String),
    #[error("unsupported theory: {0}")]
    UnsupportedSpec(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("graph still carries the nonterminal label `{0}`")]
    NonterminalPresent(String),
    #[error("graph is not one-particle irreducible")]
    NotOnePI,
    #[error("graph is not a member of the theory")]
    NotMember,
    #[error("graphs do not belong to the given theory")]
    SpecMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// A theory: edge types, which of them may be external, and the typed valence of each
/// interaction vertex. `c[k][j] = [i, count]` says a condition-`k` vertex has `count` flags of type `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub n: usize,
    pub t: usize,
    pub v: Vec<u8>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<[usize; 2]>>,
    #[serde(default)]
    pub two_valent: bool,
}

/// Typed valence: flag count per edge type, indexed from type 1.
pub type Profile = Vec<usize>;

impl TheorySpec {
    /// Named theories: `phi4`, `phi3`, `phiK:k`, `poly:a,b,...` and `phi2A`.
    pub fn preset(name: &str) -> Result<TheorySpec, FeynmanError> {
        let scalar = |ks: Vec<usize>| TheorySpec {
            n: ks.len(),
            t: 1,
            v: vec![1],
            c: ks.into_iter().map(|k| vec![[1, k]]).collect(),
            two_valent: false,
        };
        let bad = || FeynmanError::UnknownPreset(name.to_string());
        let spec = match name {
            "phi4" => scalar(vec![4]),
            "phi3" => scalar(vec![3]),
            "phi2A" => TheorySpec { n: 1, t: 2, v: vec![1, 0], c: vec![vec![[1, 2], [2, 1]]], two_valent: false },
            _ => {
                if let Some(k) = name.strip_prefix("phiK:") {
                    scalar(vec![k.parse().map_err(|_| bad())?])
                } else if let Some(ks) = name.strip_prefix("poly:") {
                    let ks = ks
                        .split(',')
                        .map(|k| k.trim().parse())
                        .collect::<Result<Vec<usize>, _>>()
                        .map_err(|_| bad())?;
                    scalar(ks)
                } else {
                    return Err(bad());
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_two_valent(mut self, on: bool) -> TheorySpec {
        self.two_valent = on;
        self
    }

    pub fn validate(&self) -> Result<(), FeynmanError> {
        let bad = |m: String| Err(FeynmanError::InvalidSpec(m));
        if self.n == 0 || self.t == 0 {
            return bad("n and t must be positive".into());
        }
        if self.v.len() != self.t || self.v.iter().any(|&x| x > 1) {
            return bad(format!("v must be a 0/1 vector of length {}", self.t));
        }
        if self.c.len() != self.n {
            return bad(format!("expected {} vertex conditions, found {}", self.n, self.c.len()));
        }
        for (k, rows) in self.c.iter().enumerate() {
            if rows.iter().any(|&[i, _]| i == 0 || i > self.t) {
                return bad(format!("condition {} names an unknown edge type", k + 1));
            }
            let mut seen = BTreeSet::new();
            if !rows.iter().all(|&[i, _]| seen.insert(i)) {
                return bad(format!("condition {} lists an edge type twice", k + 1));
            }
            let total: usize = rows.iter().map(|r| r[1]).sum();
            if total < 3 {
                return bad(format!("condition {} has valence {total}; interaction vertices need at least 3", k + 1));
            }
        }
        let profiles: BTreeSet<Profile> = self.profiles().into_iter().collect();
        if profiles.len() != self.n {
            return bad("two conditions describe the same vertex".into());
        }
        for i in 1..=self.t {
            if !self.profiles().iter().any(|p| p[i - 1] > 0) {
                return Err(FeynmanError::UnsupportedSpec(format!("edge type {i} occurs at no vertex")));
            }
        }
        Ok(())
    }

    pub fn profiles(&self) -> Vec<Profile> {
        self.c
            .iter()
            .map(|rows| {
                let mut p = vec![0; self.t];
                for &[i, k] in rows {
                    p[i - 1] = k;
                }
                p
            })
            .collect()
    }

    pub fn alphabet(&self) -> Arc<LabelAlphabet> {
        let ts: Vec<String> = (1..=self.t).map(terminal_flag).collect();
        let ns: Vec<String> = (1..=self.t).map(open_flag).collect();
        let vt: Vec<String> = [VERTEX, KINETIC, MASS].map(String::from).to_vec();
        Arc::new(LabelAlphabet::new(&vt, &[GROWING.to_string()], &ts, &ns))
    }

    fn external_allowed(&self, ty: usize) -> bool {
        self.v[ty - 1] == 1
    }

    /// Type of a flag label `T{i}` or `N{i}`.
    pub fn flag_type(&self, label: &str) -> Option<usize> {
        let rest = label.strip_prefix('T').or_else(|| label.strip_prefix('N'))?;
        rest.parse().ok().filter(|&i| i >= 1 && i <= self.t)
    }
}

/// Adds a vertex with open legs per `profile`; returns the vertex and its legs with their types.
fn corolla(b: &mut GraphBuilder, profile: &Profile, label: &str) -> (usize, Vec<(FlagId, usize)>) {
    let v = b.vertex(label);
    let mut legs = Vec::new();
    for (i, &k) in profile.iter().enumerate() {
        for _ in 0..k {
            legs.push((b.flag(v, &open_flag(i + 1), Direction::Unoriented), i + 1));
        }
    }
    (v, legs)
}

fn leg_of_type(legs: &[(FlagId, usize)], ty: usize) -> FlagId {
    legs.iter().find(|&&(_, t)| t == ty).expect("profile has the type").0
}

fn rule(name: String, kind: RuleKind) -> ProductionRule {
    ProductionRule { name, kind }
}

/// The grammar generating the theory's graphs.
///
/// One interaction: start from its corolla, pair open legs, attach further corollas, and close
/// legs of external types. A vertex with exactly one flag of an internal-only type starts as a
/// pair of corollas joined along that flag and is attached two at a time. Several interactions of
/// a single edge type: start from the smallest corolla under a growing label, let vertices gain
/// legs up to the largest valence and freeze them at any allowed valence.
pub fn theory_grammar(spec: &TheorySpec) -> Result<Grammar, FeynmanError> {
    spec.validate()?;
    let alpha = spec.alphabet();
    let profiles = spec.profiles();
    let mut rules = Vec::new();
    let start = if spec.n == 1 {
        let p = &profiles[0];
        let paired = (1..=spec.t).find(|&i| !spec.external_allowed(i) && p[i - 1] == 1);
        let mut b = GraphBuilder::new(alpha.clone());
        let (a, la) = corolla(&mut b, p, VERTEX);
        if let Some(i) = paired {
            let (_, lc) = corolla(&mut b, p, VERTEX);
            let fa = leg_of_type(&la, i);
            b.pair(fa, leg_of_type(&lc, i));
            b.root(a);
            let g = b.build()?;
            g.with_flag_label(fa, &terminal_flag(i))?
        } else {
            b.root(a);
            b.build()?
        }
    } else {
        if spec.t != 1 {
            return Err(FeynmanError::UnsupportedSpec(
                "several interactions are supported for a single edge type only".into(),
            ));
        }
        let valences: Vec<usize> = profiles.iter().map(|p| p[0]).collect();
        let lo = *valences.iter().min().expect("n > 0");
        let hi = *valences.iter().max().expect("n > 0");
        let mut b = GraphBuilder::new(alpha.clone());
        let (a, _) = corolla(&mut b, &vec![lo], GROWING);
        b.root(a);
        rules.push(rule(
            "grow".into(),
            RuleKind::Grow { vertex_label: GROWING.into(), flag_label: open_flag(1), max_valence: hi },
        ));
        rules.push(rule("freeze".into(), RuleKind::MarkVertex { from: GROWING.into(), to: VERTEX.into(), valences }));
        b.build()?
    };
    for i in 1..=spec.t {
        rules.push(rule(format!("join{i}"), RuleKind::JoinFlags { label: open_flag(i), result: terminal_flag(i) }));
    }
    for i in 1..=spec.t {
        if start.external_flags().iter().any(|&f| start.flag(f).label == open_flag(i)) {
            rules.push(rule(
                format!("attach{i}"),
                RuleKind::AttachCopy { label: open_flag(i), result: terminal_flag(i), copy: start.with_root(None)? },
            ));
        }
    }
    for i in 1..=spec.t {
        if spec.external_allowed(i) {
            rules.push(rule(format!("close{i}"), RuleKind::Mark { from: open_flag(i), to: terminal_flag(i) }));
        }
    }
    if spec.two_valent {
        for i in 1..=spec.t {
            for l in [KINETIC, MASS] {
                rules.push(rule(
                    format!("insert{l}{i}"),
                    RuleKind::Subdivide { edge_label: terminal_flag(i), vertex_label: l.into() },
                ));
            }
        }
    }
    Ok(Grammar { alphabet: alpha, start, rules })
}

fn profile_at(spec: &TheorySpec, g: &Graph, v: usize) -> Option<Profile> {
    let mut p = vec![0; spec.t];
    for &f in g.flags_at(v) {
        p[spec.flag_type(&g.flag(f).label)? - 1] += 1;
    }
    Some(p)
}

/// Whether `g` is a graph of the theory: connected, every vertex a legal interaction (or an
/// allowed two-valent vertex), and every leg of an external type.
pub fn is_member(spec: &TheorySpec, g: &Graph) -> Result<bool, FeynmanError> {
    let alpha = g.alphabet();
    for v in g.vertices() {
        let l = g.vertex_label(v);
        if alpha.vertex_nonterminals.contains(l) {
            return Err(FeynmanError::NonterminalPresent(l.to_string()));
        }
    }
    for f in 0..g.flag_count() {
        let l = &g.flag(f).label;
        if alpha.flag_nonterminals.contains(l) {
            return Err(FeynmanError::NonterminalPresent(l.clone()));
        }
    }
    if g.vertex_count() == 0 || !connectivity(g).connected || g.is_oriented() && g.flag_count() > 0 {
        return Ok(false);
    }
    let profiles = spec.profiles();
    for v in g.vertices() {
        let Some(p) = profile_at(spec, g, v) else {
            return Ok(false);
        };
        let ok = match g.vertex_label(v) {
            VERTEX => profiles.contains(&p),
            KINETIC | MASS => {
                spec.two_valent && p.iter().filter(|&&k| k == 2).count() == 1 && p.iter().sum::<usize>() == 2
            }
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    for f in g.external_flags() {
        match spec.flag_type(&g.flag(f).label) {
            Some(i) if spec.external_allowed(i) && g.flag(f).label == terminal_flag(i) => {}
            _ => return Ok(false),
        }
    }
    Ok(g.internal_edges().iter().all(|&(a, _)| g.flag(a).label.starts_with('T')))
}

/// A step budget large enough for every graph of at most `max_vertices` vertices.
pub fn step_budget(spec: &TheorySpec, max_vertices: usize) -> usize {
    let hi = spec.profiles().iter().map(|p| p.iter().sum::<usize>()).max().unwrap_or(0);
    max_vertices * (2 * hi + 3) + 2
}

/// Every graph of the theory with at most `max_vertices` vertices, keyed by canonical code.
pub fn enumerate_feynman_graphs(
    spec: &TheorySpec,
    max_vertices: usize,
) -> Result<BTreeMap<CanonicalCode, Graph>, FeynmanError> {
    if max_vertices == 0 {
        return Ok(BTreeMap::new());
    }
    let grammar = theory_grammar(spec)?;
    let bounds = Bounds { max_steps: step_budget(spec, max_vertices), max_vertices };
    let d = derive(&grammar, bounds);
    let mut out = BTreeMap::new();
    for code in d.language() {
        let g = d.graphs[&code].with_root(None)?;
        if is_member(spec, &g)? {
            out.insert(canonical_code(&g), g);
        }
    }
    Ok(out)
}

pub fn enumerate_feynman(spec: &TheorySpec, max_vertices: usize) -> Result<BTreeSet<CanonicalCode>, FeynmanError> {
    Ok(enumerate_feynman_graphs(spec, max_vertices)?.keys().cloned().collect())
}

/// Cutting a member graph down to a spanning tree and the cuts needed to rebuild it.
#[derive(Clone, Debug)]
pub struct ReverseDerivation {
    /// The tree, with every cut half-edge open again.
    pub tree: Graph,
    /// Cut edges in the order they were cut, as flag pairs of `tree`.
    pub cuts: Vec<(FlagId, FlagId)>,
}

impl ReverseDerivation {
    /// Re-joins the cuts, last first, with the theory's edge-joining rules.
    pub fn replay(&self, spec: &TheorySpec) -> Result<Graph, FeynmanError> {
        let grammar = theory_grammar(spec)?;
        let mut g = self.tree.clone();
        for &(a, b) in self.cuts.iter().rev() {
            let ty = spec.flag_type(&g.flag(a).label).ok_or(FeynmanError::NotMember)?;
            let join = grammar
                .rules
                .iter()
                .find(|r| matches!(&r.kind, RuleKind::JoinFlags { label, .. } if *label == open_flag(ty)))
                .ok_or(FeynmanError::NotMember)?;
            let m = Embedding { vertex_map: vec![], flag_map: vec![a.min(b), a.max(b)] };
            g = grammar::apply(join, &g, &m)?;
        }
        Ok(g)
    }
}

/// Cuts edges whose removal keeps the graph connected until a tree remains.
pub fn reverse_derivation(spec: &TheorySpec, g: &Graph) -> Result<ReverseDerivation, FeynmanError> {
    if !is_member(spec, g)? {
        return Err(FeynmanError::NotMember);
    }
    let mut cur = g.clone();
    let mut cuts = Vec::new();
    loop {
        let edges = cur.internal_edges();
        if edges.len() + 1 == cur.vertex_count() {
            break;
        }
        let mut cut = None;
        for (a, b) in edges {
            let trial = cur.cut_edge(a)?;
            if connectivity(&trial).connected {
                let ty = spec.flag_type(&cur.flag(a).label).ok_or(FeynmanError::NotMember)?;
                let open = open_flag(ty);
                let mut t = trial;
                for f in [a, b] {
                    t = t.with_flag_label(f, &open)?;
                }
                cut = Some((t, (a, b)));
                break;
            }
        }
        let (t, pair) = cut.expect("a connected graph with a cycle has a non-bridge edge");
        cuts.push(pair);
        cur = t;
    }
    Ok(ReverseDerivation { tree: cur, cuts })
}
