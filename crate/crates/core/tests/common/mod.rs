#![allow(dead_code)]

use std::collections::BTreeMap;

use graphgram::feynman::{ck_coproduct, enumerate_feynman_graphs, step_budget, theory_grammar, TheorySpec};
use graphgram::grammar::{derive, Bounds};
use graphgram::graph::connectivity;
use graphgram::liealg::{sample_population, FamilyTag, OperatorFamily};
use graphgram::{canonical_code, CanonicalCode, Graph, GraphBuilder, LabelAlphabet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub const MAX_VERTICES: usize = 4;
pub const MAX_FLAGS: usize = 10;

/// One alphabet holding the labels of every preset theory and of the operator families.
pub fn common_alphabet() -> Arc<LabelAlphabet> {
    Arc::new(LabelAlphabet::new(&["V", "K", "M", "v"], &["X"], &["T1", "T2", "e", "d"], &["N1", "N2"]))
}

/// Every graph reached by the preset theory grammars (intermediate graphs included) within the
/// size limits, plus rooted DAGs, one per isomorphism class. Polynomial vertices have at least
/// three flags, so three of them already exhaust the flag limit without two-valent vertices.
pub fn iso_corpus() -> BTreeMap<CanonicalCode, Graph> {
    let alpha = common_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = BTreeMap::new();
    for name in ["phi4", "phi3", "phi2A", "poly:3,4"] {
        for two in [false, true] {
            let spec = TheorySpec::preset(name).unwrap().with_two_valent(two);
            let grammar = theory_grammar(&spec).unwrap();
            let maxv = if name.starts_with("poly") { 3 } else { MAX_VERTICES };
            let bounds = Bounds { max_steps: step_budget(&spec, maxv), max_vertices: maxv };
            for g in derive(&grammar, bounds).graphs.into_values() {
                if g.flag_count() <= MAX_FLAGS {
                    let g = rebuild(&g, &alpha, &mut rng);
                    out.insert(canonical_code(&g), g);
                }
            }
        }
    }
    for g in sample_population(&OperatorFamily::new(FamilyTag::RootedDagVertex), 200, 1) {
        if g.flag_count() <= MAX_FLAGS {
            let g = rebuild(&g, &alpha, &mut rng);
            out.insert(canonical_code(&g), g);
        }
    }
    out
}

/// The same graph with vertex ids, flag ids and corolla orders shuffled.
pub fn relabel<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
    rebuild(g, g.alphabet(), rng)
}

/// A shuffled copy of `g` over `alpha`.
pub fn rebuild<R: Rng>(g: &Graph, alpha: &Arc<LabelAlphabet>, rng: &mut R) -> Graph {
    let mut vorder: Vec<usize> = g.vertices().collect();
    vorder.shuffle(rng);
    let mut b = GraphBuilder::new(alpha.clone());
    let mut vnew = vec![0; g.vertex_count()];
    for &v in &vorder {
        vnew[v] = b.vertex(g.vertex_label(v));
    }
    let mut forder: Vec<usize> = (0..g.flag_count()).collect();
    forder.shuffle(rng);
    let mut fnew = vec![0; g.flag_count()];
    for &f in &forder {
        let fl = g.flag(f);
        fnew[f] = b.flag(vnew[fl.vertex], &fl.label, fl.dir);
    }
    for (f, p) in g.internal_edges() {
        b.pair(fnew[f], fnew[p]);
    }
    if let Some(r) = g.root() {
        b.root(vnew[r]);
    }
    b.build().unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

struct FlagSearch<'a> {
    a: &'a Graph,
    b: &'a Graph,
    pi: Vec<usize>,
    phi: Vec<Option<usize>>,
    used: Vec<bool>,
    count: usize,
    stop_at_one: bool,
}

impl FlagSearch<'_> {
    fn run(&mut self, f: usize) {
        if self.stop_at_one && self.count > 0 {
            return;
        }
        if f == self.a.flag_count() {
            self.count += 1;
            return;
        }
        let (a, b) = (self.a, self.b);
        let fa = a.flag(f);
        for &h in b.flags_at(self.pi[fa.vertex]) {
            let fb = b.flag(h);
            if self.used[h] || fb.label != fa.label || fb.dir != fa.dir || a.is_external(f) != b.is_external(h) {
                continue;
            }
            let p = a.partner(f);
            if p < f && b.partner(h) != self.phi[p].unwrap() {
                continue;
            }
            self.used[h] = true;
            self.phi[f] = Some(h);
            self.run(f + 1);
            self.phi[f] = None;
            self.used[h] = false;
        }
    }
}

fn bijections(a: &Graph, b: &Graph, stop_at_one: bool) -> usize {
    if a.vertex_count() != b.vertex_count()
        || a.flag_count() != b.flag_count()
        || a.root().is_some() != b.root().is_some()
    {
        return 0;
    }
    let mut count = 0;
    for pi in permutations(a.vertex_count()) {
        if a.vertices().any(|v| a.vertex_label(v) != b.vertex_label(pi[v]) || a.valence(v) != b.valence(pi[v])) {
            continue;
        }
        if let (Some(ra), Some(rb)) = (a.root(), b.root()) {
            if pi[ra] != rb {
                continue;
            }
        }
        let mut s = FlagSearch {
            a,
            b,
            pi,
            phi: vec![None; a.flag_count()],
            used: vec![false; b.flag_count()],
            count: 0,
            stop_at_one,
        };
        s.run(0);
        count += s.count;
        if stop_at_one && count > 0 {
            break;
        }
    }
    count
}

/// Isomorphism by exhaustive search over vertex permutations and flag assignments.
pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    bijections(a, b, true) > 0
}

/// Automorphisms counted by exhaustive search.
pub fn brute_automorphisms(g: &Graph) -> usize {
    bijections(g, g, false)
}

/// Graphs checked and disagreements between `are_isomorphic` and the exhaustive search over
/// 1000 seeded random pairs (half of them of equal size) and every same-class pair among each
/// graph and three shuffled copies.
pub fn iso_oracle_run(seed: u64) -> (usize, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus: Vec<Graph> = iso_corpus().into_values().collect();
    let mut pairs: Vec<(Graph, Graph)> = Vec::new();
    let mut by_size: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, g) in corpus.iter().enumerate() {
        by_size.entry((g.vertex_count(), g.flag_count())).or_default().push(i);
    }
    let buckets: Vec<&Vec<usize>> = by_size.values().filter(|b| b.len() > 1).collect();
    for k in 0..1000 {
        let (i, j) = if k % 2 == 0 {
            (rng.gen_range(0..corpus.len()), rng.gen_range(0..corpus.len()))
        } else {
            let b = buckets.choose(&mut rng).unwrap();
            (*b.choose(&mut rng).unwrap(), *b.choose(&mut rng).unwrap())
        };
        pairs.push((relabel(&corpus[i], &mut rng), relabel(&corpus[j], &mut rng)));
    }
    for g in &corpus {
        let mut class = vec![g.clone()];
        for _ in 0..3 {
            class.push(relabel(g, &mut rng));
        }
        for x in 0..class.len() {
            for y in x + 1..class.len() {
                pairs.push((class[x].clone(), class[y].clone()));
            }
        }
    }
    let mut bad = 0;
    for (a, b) in &pairs {
        let fast = graphgram::are_isomorphic(a, b).unwrap();
        let slow = brute_isomorphic(a, b);
        let same_code = canonical_code(a) == canonical_code(b);
        if fast != slow || same_code != slow {
            bad += 1;
        }
    }
    (corpus.len(), pairs.len(), bad)
}

/// The interface family with a single directed edge as its only interface, which has a source
/// and a sink, with checks switched off.
pub fn broken_interface_family() -> OperatorFamily {
    let mut b = GraphBuilder::new(graphgram::liealg::family_alphabet());
    let (x, y) = (b.vertex("v"), b.vertex("v"));
    b.edge(x, y, "e", true);
    OperatorFamily { shapes: vec![b.build().unwrap()], ..OperatorFamily::new(FamilyTag::OrientedInterface) }
}

/// Nonzero associator residuals over 1000 sampled triples of the broken family.
pub fn obstruction_count() -> usize {
    let fam = broken_interface_family().unchecked();
    let pop = sample_population(&fam, 3000, 5);
    pop.chunks(3).filter(|t| !graphgram::liealg::prelie_residual(&fam, &t[0], &t[1], &t[2]).unwrap().is_zero()).count()
}

/// (vertices, internal edges, legs) of a graph and its admissible pairs as
/// (γ vertices, γ edges, quotient vertices, multiplicity), from a brute-force subgraph scan.
pub type Row = ((usize, usize, usize), Vec<(usize, usize, usize, usize)>);

pub fn coproduct_fixture() -> Vec<Row> {
    let mut rows = vec![
        ((1, 0, 3), vec![]),
        ((1, 1, 1), vec![]),
        ((2, 2, 2), vec![]),
        ((2, 3, 0), vec![(2, 2, 1, 3)]),
        ((3, 3, 3), vec![]),
        ((3, 4, 1), vec![(2, 2, 2, 1), (3, 3, 1, 2)]),
        ((4, 4, 4), vec![]),
        ((4, 5, 2), vec![(2, 2, 3, 1)]),
        ((4, 5, 2), vec![(3, 3, 2, 2)]),
        ((4, 6, 0), vec![(2, 2, 3, 2), (4, 4, 2, 1), (4, 5, 1, 4)]),
        ((4, 6, 0), vec![(3, 3, 2, 4), (4, 5, 1, 6)]),
    ];
    rows.sort();
    rows
}

fn phi3_corpus() -> Vec<Graph> {
    let spec = TheorySpec::preset("phi3").unwrap();
    enumerate_feynman_graphs(&spec, 4).unwrap().into_values().filter(|g| connectivity(g).one_pi).collect()
}

/// The 1PI graphs of the cubic theory with at most four vertices.
pub fn phi3_one_pi() -> Vec<Graph> {
    let spec = TheorySpec::preset("phi3").unwrap();
    enumerate_feynman_graphs(&spec, 4).unwrap().into_values().filter(|g| connectivity(g).one_pi).collect()
}

/// The computed counterpart of [`coproduct_fixture`].
pub fn coproduct_rows() -> Vec<Row> {
    let spec = TheorySpec::preset("phi3").unwrap().with_two_valent(true);
    let mut rows: Vec<Row> = phi3_one_pi()
        .iter()
        .map(|g| {
            let mut pairs: Vec<_> = ck_coproduct(&spec, g)
                .unwrap()
                .pairs
                .iter()
                .map(|p| {
                    (
                        p.gamma_graph.vertex_count(),
                        p.gamma_graph.internal_edges().len(),
                        p.quotient.vertex_count(),
                        p.multiplicity,
                    )
                })
                .collect();
            pairs.sort();
            ((g.vertex_count(), g.internal_edges().len(), g.external_flags().len()), pairs)
        })
        .collect();
    rows.sort();
    rows
}
