mod common;

use graphgram::graph::{star, Direction, GraphBuilder};
use graphgram::liealg::{
    check_family, family_alphabet, lie_bracket, prelie_insert, prelie_residual, rational, w_series_truncated,
    AlgebraError, FamilyDiagnostic, FamilyTag, FormalSum, OperatorFamily,
};
use graphgram::Graph;

fn rooted_point() -> Graph {
    let mut b = GraphBuilder::new(family_alphabet());
    let v = b.vertex("v");
    b.root(v);
    b.build().unwrap()
}

fn rooted_edge() -> Graph {
    let mut b = GraphBuilder::new(family_alphabet());
    let (s, t) = (b.vertex("v"), b.vertex("v"));
    b.edge(s, t, "e", true);
    b.root(s);
    b.build().unwrap()
}

#[test]
fn rooted_dag_site_counts() {
    let fam = OperatorFamily::new(FamilyTag::RootedDagVertex);
    let (p, e) = (rooted_point(), rooted_edge());
    let pe = prelie_insert(&fam, &p, &e).unwrap();
    assert_eq!((pe.len(), pe.coefficient(&e)), (1, rational(1, 1)));
    let ep = prelie_insert(&fam, &e, &p).unwrap();
    assert_eq!((ep.len(), ep.coefficient(&e)), (1, rational(2, 1)));
    let br = lie_bracket(&fam, &FormalSum::from_graph(&p), &FormalSum::from_graph(&e)).unwrap();
    assert_eq!((br.len(), br.coefficient(&e)), (1, rational(-1, 1)));
}

#[test]
fn w_series_on_a_point() {
    let fam = OperatorFamily::new(FamilyTag::RootedDagVertex);
    let x = FormalSum::from_graph(&rooted_point());
    let w = w_series_truncated(&fam, &x, 3).unwrap();
    assert_eq!((w.len(), w.coefficient(&rooted_point())), (1, rational(5, 3)));
    assert_eq!(w_series_truncated(&fam, &x, 1).unwrap(), x);
    assert!(w_series_truncated(&fam, &FormalSum::zero(), 3).unwrap().is_zero());
    assert!(matches!(w_series_truncated(&fam, &x, 4), Err(AlgebraError::OrderUnsupported(4))));
}

#[test]
fn corolla_sites_are_flag_bijections() {
    let fam = OperatorFamily::new(FamilyTag::CorollaHalfEdge);
    let mut g1 = star(family_alphabet(), "v", "e", 3).unwrap();
    g1 = g1.with_root(Some(0)).unwrap();
    let mut b = GraphBuilder::new(family_alphabet());
    let (r, w) = (b.vertex("v"), b.vertex("v"));
    for _ in 0..3 {
        b.flag(r, "e", Direction::Unoriented);
    }
    b.flag(w, "e", Direction::Unoriented);
    b.edge(r, w, "e", false);
    b.root(r);
    let g2 = b.build().unwrap();
    assert_eq!(prelie_insert(&fam, &g1, &g2).unwrap().total_mass(), rational(6, 1));
}

#[test]
fn loop_glue_needs_an_attractor() {
    let fam = OperatorFamily::new(FamilyTag::LoopGlue);
    let g2 = graphgram::liealg::sample_population(&fam, 1, 0).remove(0);
    let mut b = GraphBuilder::new(family_alphabet());
    let (x, y) = (b.vertex("v"), b.vertex("v"));
    b.edge(x, y, "e", true);
    let acyclic = b.build().unwrap();
    assert!(prelie_insert(&fam.clone().unchecked(), &acyclic, &g2).unwrap().is_zero());
}

#[test]
fn equal_right_factors_cancel() {
    for tag in FamilyTag::ALL {
        let fam = OperatorFamily::new(tag);
        let pop = graphgram::liealg::sample_population(&fam, 20, 4);
        for t in pop.chunks(2) {
            assert!(prelie_residual(&fam, &t[0], &t[1], &t[1]).unwrap().is_zero());
        }
    }
}

#[test]
fn hypothesis_violations_are_reported() {
    let fam = OperatorFamily::new(FamilyTag::RootedDagVertex);
    let unrooted = star(family_alphabet(), "v", "e", 1).unwrap();
    assert!(matches!(prelie_insert(&fam, &unrooted, &rooted_point()), Err(AlgebraError::HypothesisViolation(_))));
    let d = check_family(&common::broken_interface_family(), &[]);
    assert!(d.contains(&FamilyDiagnostic::InterfaceHasSink { shape: 0 }));
}

#[test]
fn broken_interface_breaks_the_identity() {
    assert!(common::obstruction_count() > 0);
}
