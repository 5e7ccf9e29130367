use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::{family_alphabet, FamilyTag, OperatorFamily, DESIGNATED_LABEL};
use crate::graph::{Direction, Graph, GraphBuilder, LabelAlphabet, VertexId};

const MAX_VERTICES: usize = 5;

/// `count` random graphs conforming to the family's hypotheses, each with at most five vertices.
/// The same seed always yields the same graphs.
pub fn sample_population(fam: &OperatorFamily, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = family_alphabet();
    (0..count).map(|_| sample_one(fam, &alpha, &mut rng)).collect()
}

fn sample_one(fam: &OperatorFamily, alpha: &Arc<LabelAlphabet>, rng: &mut ChaCha8Rng) -> Graph {
    match fam.tag {
        FamilyTag::RootedDagVertex | FamilyTag::RootedDagSink => rooted_dag(alpha, rng),
        FamilyTag::LoopGlue => {
            let shapes = [cycle(alpha, 2), cycle(alpha, 3)];
            with_interface(alpha, &shapes, rng)
        }
        FamilyTag::OrientedInterface => with_interface(alpha, &fam.shapes, rng),
        FamilyTag::CorollaHalfEdge => based_unoriented(alpha, rng),
        FamilyTag::ExternalEdgeGlue => quartic(alpha, fam, rng),
        FamilyTag::InsertionElimination => incoming_legs(alpha, rng),
    }
}

fn cycle(alpha: &Arc<LabelAlphabet>, n: usize) -> Graph {
    let mut b = GraphBuilder::new(alpha.clone());
    let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
    for i in 0..n {
        b.edge(vs[i], vs[(i + 1) % n], "e", true);
    }
    b.build().expect("cycle")
}

fn rooted_dag(alpha: &Arc<LabelAlphabet>, rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=4);
    let mut b = GraphBuilder::new(alpha.clone());
    let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
    for j in 1..n {
        let i = rng.gen_range(0..j);
        b.edge(vs[i], vs[j], "e", true);
        for k in 0..j {
            if rng.gen_bool(0.25) {
                b.edge(vs[k], vs[j], "e", true);
            }
        }
    }
    b.root(vs[0]);
    b.build().expect("rooted dag")
}

/// Adds a copy of `shape`'s oriented edges under a single label; returns the new vertices.
fn add_copy(b: &mut GraphBuilder, shape: &Graph, label: &str) -> Vec<VertexId> {
    let map: Vec<VertexId> = shape.vertices().map(|_| b.vertex("v")).collect();
    for (f, g) in shape.internal_edges() {
        let (s, t) = match shape.flag(f).dir {
            Direction::Out => (f, g),
            _ => (g, f),
        };
        b.edge(map[shape.flag(s).vertex], map[shape.flag(t).vertex], label, true);
    }
    map
}

/// A designated copy of one shape with outgoing edges, optionally feeding an incoming-only copy
/// of another shape.
fn with_interface(alpha: &Arc<LabelAlphabet>, shapes: &[Graph], rng: &mut ChaCha8Rng) -> Graph {
    let d = shapes.choose(rng).expect("at least one shape");
    let a = shapes.choose(rng).expect("at least one shape");
    let mut b = GraphBuilder::new(alpha.clone());
    let dv = add_copy(&mut b, d, DESIGNATED_LABEL);
    let room = MAX_VERTICES - dv.len();
    if a.vertex_count() <= room && rng.gen_bool(0.8) {
        let av = add_copy(&mut b, a, "e");
        for _ in 0..rng.gen_range(1..=2) {
            b.edge(*dv.choose(rng).unwrap(), *av.choose(rng).unwrap(), "e", true);
        }
        if av.len() < room && rng.gen_bool(0.3) {
            let t = b.vertex("v");
            b.edge(*dv.choose(rng).unwrap(), t, "e", true);
        }
    } else {
        let t = b.vertex("v");
        b.edge(*dv.choose(rng).unwrap(), t, "e", true);
    }
    b.build().expect("interface graph")
}

fn based_unoriented(alpha: &Arc<LabelAlphabet>, rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=3);
    let mut b = GraphBuilder::new(alpha.clone());
    let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
    for (i, &v) in vs.iter().enumerate() {
        let lo = usize::from(i == 0);
        for _ in 0..rng.gen_range(lo..=3) {
            b.flag(v, "e", Direction::Unoriented);
        }
    }
    for j in 1..n {
        let i = rng.gen_range(0..j);
        b.edge(vs[i], vs[j], "e", false);
        if rng.gen_bool(0.2) {
            b.edge(vs[rng.gen_range(0..n)], vs[j], "e", false);
        }
    }
    b.root(vs[0]);
    b.build().expect("based graph")
}

/// A connected graph of four-valent vertices whose open legs carry the family's leg label.
fn quartic(alpha: &Arc<LabelAlphabet>, fam: &OperatorFamily, rng: &mut ChaCha8Rng) -> Graph {
    let (leg, edge) = fam.join.clone().unwrap_or_else(|| ("N1".into(), "T1".into()));
    let n = rng.gen_range(1..=3);
    let mut b = GraphBuilder::new(alpha.clone());
    let mut free: Vec<Vec<usize>> = Vec::new();
    let mut flags = Vec::new();
    let vs: Vec<_> = (0..n).map(|_| b.vertex("V")).collect();
    for &v in &vs {
        let fs: Vec<_> = (0..4).map(|_| b.flag(v, &leg, Direction::Unoriented)).collect();
        free.push((0..4).collect());
        flags.push(fs);
    }
    let mut joins = Vec::new();
    for j in 1..n {
        let i = rng.gen_range(0..j);
        let ka = rng.gen_range(0..free[i].len());
        let a = free[i].swap_remove(ka);
        let kc = rng.gen_range(0..free[j].len());
        let c = free[j].swap_remove(kc);
        joins.push((flags[i][a], flags[j][c]));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let open: Vec<(usize, usize)> = (0..n).flat_map(|v| free[v].iter().map(move |&k| (v, k))).collect();
        if open.len() < 2 {
            break;
        }
        let pick: Vec<_> = open.choose_multiple(rng, 2).copied().collect();
        for &(v, k) in &pick {
            free[v].retain(|&x| x != k);
        }
        joins.push((flags[pick[0].0][pick[0].1], flags[pick[1].0][pick[1].1]));
    }
    for &(x, y) in &joins {
        b.pair(x, y);
    }
    b.root(vs[0]);
    let mut g = b.build().expect("quartic graph");
    for (x, _) in joins {
        g = g.with_flag_label(x, &edge).expect("edge label");
    }
    g
}

fn incoming_legs(alpha: &Arc<LabelAlphabet>, rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=3);
    let mut b = GraphBuilder::new(alpha.clone());
    let vs: Vec<_> = (0..n).map(|_| b.vertex("v")).collect();
    for &v in &vs {
        for _ in 0..rng.gen_range(0..=2) {
            b.flag(v, "e", Direction::In);
        }
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if s != t {
            b.edge(vs[s], vs[t], "e", true);
        }
    }
    b.build().expect("graph with incoming legs")
}
