//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use graphgram::canonical_code;
use graphgram::feynman::{
    check_coassociativity, enumerate_feynman, enumerate_feynman_graphs, is_member, qft_bracket, reverse_derivation,
    theory_grammar, BracketMode, TheorySpec,
};
use graphgram::graph::connectivity;
use graphgram::liealg::symbolic::{generator, FreeMagma, Word};
use graphgram::liealg::{
    bch_truncated, jacobi_residual, lie_bracket, prelie_residual, rational, sample_population, w_series_truncated,
    FamilyTag, FormalSum, OperatorFamily,
};
use graphgram::{CanonicalCode, Graph};

const TRIPLES: usize = 100;

fn populations(seed: u64) -> Vec<(OperatorFamily, Vec<Graph>)> {
    FamilyTag::ALL
        .into_iter()
        .map(|tag| {
            let fam = OperatorFamily::new(tag);
            let pop = sample_population(&fam, 3 * TRIPLES, seed);
            (fam, pop)
        })
        .collect()
}

fn prelie() -> Result<String, String> {
    let mut parts = Vec::new();
    for (fam, pop) in populations(2021) {
        let zero =
            pop.chunks(3).filter(|t| prelie_residual(&fam, &t[0], &t[1], &t[2]).is_ok_and(|r| r.is_zero())).count();
        parts.push(format!("{} {zero}/{TRIPLES}", fam.tag.name()));
        if zero != TRIPLES {
            return Err(parts.join(", "));
        }
    }
    Ok(parts.join(", "))
}

fn jacobi() -> Result<String, String> {
    let mut parts = Vec::new();
    for (fam, pop) in populations(2021) {
        let zero = pop
            .chunks(3)
            .filter(|t| {
                let [x, y, z] = [&t[0], &t[1], &t[2]].map(FormalSum::from_graph);
                jacobi_residual(&fam, &x, &y, &z).is_ok_and(|r| r.is_zero())
            })
            .count();
        parts.push(format!("{} {zero}/{TRIPLES}", fam.tag.name()));
        if zero != TRIPLES {
            return Err(parts.join(", "));
        }
    }
    Ok(parts.join(", "))
}

fn antisymmetry() -> Result<String, String> {
    let mut checked = 0;
    for (fam, pop) in populations(2022) {
        for t in pop.chunks(2) {
            let [x, y] = [&t[0], &t[1]].map(FormalSum::from_graph);
            let ab = lie_bracket(&fam, &x, &y).map_err(|e| e.to_string())?;
            let ba = lie_bracket(&fam, &y, &x).map_err(|e| e.to_string())?;
            if !ab.plus(&ba).is_zero() {
                return Err(format!("{} bracket not antisymmetric", fam.tag.name()));
            }
            checked += 1;
        }
    }
    let mut qft = 0;
    for name in ["phi3", "phi4"] {
        let spec = TheorySpec::preset(name).unwrap();
        let corpus: Vec<Graph> =
            enumerate_feynman_graphs(&spec, 3).unwrap().into_values().filter(|g| connectivity(g).one_pi).collect();
        for a in &corpus {
            if !qft_bracket(&spec, a, a, BracketMode::AllBijections).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("{name}: [G,G] nonzero"));
            }
            for b in &corpus {
                let ab = qft_bracket(&spec, a, b, BracketMode::AllBijections).map_err(|e| e.to_string())?;
                let ba = qft_bracket(&spec, b, a, BracketMode::AllBijections).map_err(|e| e.to_string())?;
                if !ab.plus(&ba).is_zero() {
                    return Err(format!("{name}: qft bracket not antisymmetric"));
                }
                qft += 1;
            }
        }
    }
    Ok(format!("{checked} family pairs, {qft} Feynman pairs"))
}

fn isomorphism() -> Result<String, String> {
    let (graphs, pairs, bad) = common::iso_oracle_run(2024);
    let msg = format!("{graphs} graphs, {} of {pairs} pairs agree", pairs - bad);
    if bad == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Pairing-oracle counts of φ⁴ graphs with at most 1, 2, 3 vertices.
const PHI4_ORACLE: [usize; 3] = [3, 11, 36];

fn phi4() -> Result<String, String> {
    let spec = TheorySpec::preset("phi4").unwrap();
    let got: Vec<usize> = (1..=3).map(|m| enumerate_feynman(&spec, m).unwrap().len()).collect();
    let msg = format!("counts {got:?}, oracle {PHI4_ORACLE:?}");
    if got == PHI4_ORACLE {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Pairing-oracle counts of φ²A graphs by vertex number, up to four start-graph copies.
const PHI2A_ORACLE: [usize; 8] = [0, 5, 0, 20, 0, 130, 0, 1192];

fn phi2a_graphs() -> &'static BTreeMap<CanonicalCode, Graph> {
    static GRAPHS: OnceLock<BTreeMap<CanonicalCode, Graph>> = OnceLock::new();
    GRAPHS.get_or_init(|| enumerate_feynman_graphs(&TheorySpec::preset("phi2A").unwrap(), 8).unwrap())
}

fn phi2a() -> Result<String, String> {
    let all = phi2a_graphs();
    let mut counts = [0; 8];
    let mut good = 0;
    for g in all.values() {
        counts[g.vertex_count() - 1] += 1;
        let no_wavy_leg = g.external_flags().iter().all(|&f| g.flag(f).label != "T2");
        let profiles = g.vertices().all(|v| {
            let fs = g.flags_at(v);
            let wavy = fs.iter().filter(|&&f| g.flag(f).label == "T2").count();
            let straight = fs.iter().filter(|&&f| g.flag(f).label == "T1").count();
            (straight, wavy) == (2, 1)
        });
        if no_wavy_leg && profiles {
            good += 1;
        }
    }
    let msg = format!("{good}/{} graphs conform, counts {counts:?}", all.len());
    if good == all.len() && counts == PHI2A_ORACLE {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn replay() -> Result<String, String> {
    let mut total = 0;
    let mut ok = 0;
    let phi4 = enumerate_feynman_graphs(&TheorySpec::preset("phi4").unwrap(), 3).unwrap();
    for (name, graphs) in [("phi4", &phi4), ("phi2A", phi2a_graphs())] {
        let spec = TheorySpec::preset(name).unwrap();
        for (code, g) in graphs {
            total += 1;
            let rebuilt = reverse_derivation(&spec, g).and_then(|rd| rd.replay(&spec));
            if rebuilt.is_ok_and(|h| canonical_code(&h) == *code) {
                ok += 1;
            }
        }
    }
    let msg = format!("{ok}/{total} graphs rebuilt");
    if ok == total {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn obstruction() -> Result<String, String> {
    let nonzero = common::obstruction_count();
    let mut counts = Vec::new();
    for name in ["phi4", "phi3", "poly:3,4", "phi2A"] {
        let spec = TheorySpec::preset(name).unwrap();
        let n = theory_grammar(&spec).unwrap().rules.len();
        for m in 1..=3 {
            enumerate_feynman(&spec, m).unwrap();
            if theory_grammar(&spec).unwrap().rules.len() != n {
                return Err(format!("{name}: rule count changed"));
            }
        }
        counts.push(format!("{name} {n}"));
    }
    let msg = format!("{nonzero}/1000 broken triples nonzero; rule counts {}", counts.join(", "));
    if nonzero > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn coproduct() -> Result<String, String> {
    let rows = common::coproduct_rows();
    if rows != common::coproduct_fixture() {
        return Err("admissible pairs differ from the fixture".into());
    }
    let spec = TheorySpec::preset("phi3").unwrap().with_two_valent(true);
    let corpus = common::phi3_one_pi();
    for g in &corpus {
        if !is_member(&spec, g).unwrap() {
            return Err("corpus graph outside the theory".into());
        }
        let (l, r) = check_coassociativity(&spec, g).map_err(|e| e.to_string())?;
        if l != r {
            return Err(format!("coassociativity fails on {g}"));
        }
    }
    let pairs: usize = rows.iter().map(|r| r.1.len()).sum();
    Ok(format!("{} graphs, {pairs} pair classes match, coassociative", corpus.len()))
}

fn series() -> Result<String, String> {
    let (x, y) = (generator("x"), generator("y"));
    let g = Word::gen;
    let ins = Word::ins;
    let bch = bch_truncated(&FreeMagma, &x, &y).unwrap();
    let expect = [
        (g("x"), rational(1, 1)),
        (g("y"), rational(1, 1)),
        (ins(g("x"), g("y")), rational(1, 2)),
        (ins(g("x"), ins(g("x"), g("y"))), rational(1, 12)),
        (ins(g("y"), ins(g("y"), g("x"))), rational(1, 12)),
    ];
    for (w, q) in &expect {
        if bch.get(w) != Some(q) {
            return Err(format!("bch coefficient of {w} is {:?}", bch.get(w)));
        }
    }
    if bch.len() != 12 {
        return Err(format!("bch has {} words, expected 12", bch.len()));
    }
    let w = w_series_truncated(&FreeMagma, &x, 3).map_err(|e| e.to_string())?;
    let xx = ins(g("x"), g("x"));
    let expect_w = [(g("x"), rational(1, 1)), (xx.clone(), rational(1, 2)), (ins(xx, g("x")), rational(1, 6))];
    for (word, q) in &expect_w {
        if w.get(word) != Some(q) {
            return Err(format!("W coefficient of {word} is {:?}", w.get(word)));
        }
    }
    if w.len() != 3 {
        return Err(format!("W has {} words, expected 3", w.len()));
    }
    Ok("bch (1, 1, 1/2, 1/12, 1/12), W (1, 1/2, 1/6)".into())
}

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("pre-Lie identity on sampled triples", prelie),
        ("Jacobi identity on sampled triples", jacobi),
        ("bracket antisymmetry", antisymmetry),
        ("isomorphism agrees with exhaustive search", isomorphism),
        ("phi4 enumeration matches pairing oracle", phi4),
        ("phi2A photons internal, vertex profiles (2,1)", phi2a),
        ("reverse derivation replays every graph", replay),
        ("obstruction witness and finite rule sets", obstruction),
        ("coproduct fixture and coassociativity", coproduct),
        ("BCH and W truncation coefficients", series),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
