use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graphgram::feynman::{self, BracketMode, FeynmanError, TheorySpec};
use graphgram::grammar::{self, derive, grammar_from_json, grammar_to_json, validate_grammar, Bounds, Grammar};
use graphgram::io::{graph_from_json, graph_to_json, to_dot, IoError};
use graphgram::liealg::{
    check_family, family_alphabet, jacobi_residual, lie_bracket, prelie_residual, sample_population, AlgebraError,
    FamilyTag, FormalSum, OperatorFamily,
};
use graphgram::{canonical_code, Graph, LabelAlphabet};

#[derive(Parser, Debug)]
#[command(name = "graphgram", version, about = "Graph grammars, insertion algebras and Feynman graph languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Grammar JSON file.
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Theory name (phi4, phi3, phiK:k, poly:a,b,..., phi2A) or a theory JSON file.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Graph JSON file; repeat for commands taking two graphs.
    #[arg(long, global = true)]
    graph: Vec<PathBuf>,
    /// Insertion operator family.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Number of sampled triples for the check commands.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// How the Feynman bracket counts insertions at a vertex.
    #[arg(long, global = true, value_enum, default_value_t = Mode::AllBijections)]
    mode: Mode,
    /// Allow two-valent kinetic and mass vertices in the theory.
    #[arg(long, global = true)]
    two_valent: bool,
    /// Skip family hypothesis checks, to exhibit what breaks without them.
    #[arg(long, global = true)]
    unchecked: bool,
    /// Restrict `apply` to the rule with this name.
    #[arg(long, global = true)]
    rule: Option<String>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Every graph reachable from the start graph within the bounds.
    Derive,
    /// The fully terminal graphs among them.
    Language,
    /// The graphs of a theory up to a vertex bound.
    Enumerate,
    /// One rewriting step at every match of every rule.
    Apply,
    /// Lie bracket of two graphs, for a family or a theory.
    Bracket,
    /// Pre-Lie identity on sampled triples.
    CheckPrelie,
    /// Jacobi identity on sampled triples.
    CheckJacobi,
    /// Whether a graph belongs to a theory.
    Member,
    /// Admissible subgraphs of a 1PI graph and their quotients.
    Coproduct,
    /// A graph, grammar or theory grammar in JSON or DOT.
    Export,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    AllBijections,
    Inequivalent,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Schema problems exit with 2, failed family hypotheses with 3, everything else with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() || cause.is::<IoError>() || cause.is::<serde_json::Error>() {
            return 2;
        }
        if let Some(a) = cause.downcast_ref::<AlgebraError>() {
            return if matches!(a, AlgebraError::HypothesisViolation(_)) { 3 } else { 1 };
        }
        if let Some(f) = cause.downcast_ref::<FeynmanError>() {
            return match f {
                FeynmanError::InvalidSpec(_) | FeynmanError::UnknownPreset(_) | FeynmanError::NonterminalPresent(_) => {
                    2
                }
                _ => 1,
            };
        }
    }
    1
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn theory(cli: &Cli) -> Result<TheorySpec> {
    let name = cli.preset.as_deref().ok_or_else(|| usage("--preset is required"))?;
    let spec = if Path::new(name).is_file() {
        let spec: TheorySpec = serde_json::from_str(&read(Path::new(name))?)?;
        spec.validate()?;
        spec
    } else {
        TheorySpec::preset(name)?
    };
    Ok(if cli.two_valent { spec.with_two_valent(true) } else { spec })
}

fn load_grammar(cli: &Cli) -> Result<Grammar> {
    if let Some(p) = &cli.grammar {
        let g = grammar_from_json(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
        let diags = validate_grammar(&g);
        if !diags.is_empty() {
            return Err(usage(format!("grammar is malformed: {}", serde_json::to_string(&diags)?)));
        }
        return Ok(g);
    }
    if cli.preset.is_some() {
        return Ok(feynman::theory_grammar(&theory(cli)?)?);
    }
    Err(usage("--grammar or --preset is required"))
}

fn load_graph(path: &Path, fallback: Option<&Arc<LabelAlphabet>>) -> Result<Graph> {
    graph_from_json(&read(path)?, fallback).with_context(|| format!("parsing {}", path.display()))
}

fn one_graph(cli: &Cli, fallback: Option<&Arc<LabelAlphabet>>) -> Result<Graph> {
    match cli.graph.as_slice() {
        [p] => load_graph(p, fallback),
        _ => Err(usage("exactly one --graph is required")),
    }
}

fn family(cli: &Cli) -> Result<OperatorFamily> {
    let name = cli.family.as_deref().ok_or_else(|| usage("--family is required"))?;
    let tag = FamilyTag::parse(name).ok_or_else(|| usage(format!("unknown family {name:?}")))?;
    let fam = match &cli.grammar {
        Some(_) => OperatorFamily::from_grammar(tag, &load_grammar(cli)?),
        None => OperatorFamily::new(tag),
    };
    Ok(if cli.unchecked { fam.unchecked() } else { fam })
}

fn bounds(cli: &Cli, spec: Option<&TheorySpec>) -> Result<Bounds> {
    let max_vertices = cli.max_vertices.unwrap_or(4);
    let max_steps = cli.max_steps.unwrap_or_else(|| spec.map_or(16, |s| feynman::step_budget(s, max_vertices)));
    if max_vertices == 0 || max_steps == 0 {
        return Err(usage("bounds must be positive"));
    }
    Ok(Bounds { max_steps, max_vertices })
}

fn graph_entry(g: &Graph) -> Value {
    json!({ "code": canonical_code(g).to_hex(), "graph": graph_to_json(g) })
}

fn graphs_out(cli: &Cli, graphs: &[&Graph], meta: Value) -> Result<String> {
    match cli.format {
        Format::Json => {
            let mut doc = meta;
            doc["graphs"] = Value::Array(graphs.iter().map(|g| graph_entry(g)).collect());
            Ok(serde_json::to_string_pretty(&doc)?)
        }
        Format::Dot => Ok(graphs.iter().enumerate().map(|(i, g)| to_dot(g, &format!("g{i}"))).collect()),
    }
}

fn sum_out(cli: &Cli, s: &FormalSum) -> Result<String> {
    match cli.format {
        Format::Json => Ok(serde_json::to_string_pretty(&s.to_json())?),
        Format::Dot => Ok(s.terms().map(|(_, q, g)| to_dot(g, &format!("coefficient {q}"))).collect()),
    }
}

fn run_derive(cli: &Cli, terminal_only: bool) -> Result<Output> {
    let g = load_grammar(cli)?;
    let spec = if cli.grammar.is_none() { Some(theory(cli)?) } else { None };
    let b = bounds(cli, spec.as_ref())?;
    let d = derive(&g, b);
    let graphs: Vec<&Graph> = d.graphs.values().filter(|g| !terminal_only || g.is_terminal()).collect();
    let meta = json!({ "max_steps": b.max_steps, "max_vertices": b.max_vertices, "truncated": d.truncated, "count": graphs.len() });
    Ok(Output::ok(graphs_out(cli, &graphs, meta)?))
}

fn run_enumerate(cli: &Cli) -> Result<Output> {
    let spec = theory(cli)?;
    let maxv = cli.max_vertices.ok_or_else(|| usage("--max-vertices is required"))?;
    let all = feynman::enumerate_feynman_graphs(&spec, maxv)?;
    let graphs: Vec<&Graph> = all.values().collect();
    let meta = json!({ "theory": spec, "max_vertices": maxv, "count": graphs.len() });
    Ok(Output::ok(graphs_out(cli, &graphs, meta)?))
}

fn run_apply(cli: &Cli) -> Result<Output> {
    let g = load_grammar(cli)?;
    let host = one_graph(cli, Some(&g.alphabet))?;
    if cli.rule.as_ref().is_some_and(|r| !g.rules.iter().any(|x| x.name == *r)) {
        return Err(usage(format!("no rule named {:?}", cli.rule.as_deref().unwrap_or_default())));
    }
    let mut results: BTreeMap<(String, String), (usize, Graph)> = BTreeMap::new();
    for rule in g.rules.iter().filter(|r| cli.rule.as_ref().is_none_or(|n| *n == r.name)) {
        for m in grammar::matches(rule, &host) {
            let Ok(out) = grammar::apply(rule, &host, &m) else {
                continue;
            };
            results
                .entry((rule.name.clone(), canonical_code(&out).to_hex()))
                .and_modify(|e| e.0 += 1)
                .or_insert((1, out));
        }
    }
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|((rule, code), (n, out))| json!({ "rule": rule, "matches": n, "code": code, "graph": graph_to_json(out) }))
                .collect();
            Ok(Output::ok(serde_json::to_string_pretty(&json!({ "results": rows }))?))
        }
        Format::Dot => {
            Ok(Output::ok(results.iter().map(|((rule, _), (n, out))| to_dot(out, &format!("{rule} x{n}"))).collect()))
        }
    }
}

fn run_bracket(cli: &Cli) -> Result<Output> {
    let [a, b] = cli.graph.as_slice() else {
        return Err(usage("bracket needs two --graph arguments"));
    };
    if cli.family.is_some() {
        let fam = family(cli)?;
        let alpha = family_alphabet();
        let (x, y) = (load_graph(a, Some(&alpha))?, load_graph(b, Some(&alpha))?);
        let s = lie_bracket(&fam, &FormalSum::from_graph(&x), &FormalSum::from_graph(&y))?;
        return Ok(Output::ok(sum_out(cli, &s)?));
    }
    let spec = theory(cli)?;
    let alpha = spec.alphabet();
    let (x, y) = (load_graph(a, Some(&alpha))?, load_graph(b, Some(&alpha))?);
    let mode = match cli.mode {
        Mode::AllBijections => BracketMode::AllBijections,
        Mode::Inequivalent => BracketMode::Inequivalent,
    };
    let s = feynman::qft_bracket(&spec, &x, &y, mode)?;
    Ok(Output::ok(sum_out(cli, &s)?))
}

fn run_check(cli: &Cli, jacobi: bool) -> Result<Output> {
    let fam = family(cli)?;
    if cli.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let pop = sample_population(&fam, 3 * cli.samples, cli.seed);
    let refs: Vec<&Graph> = pop.iter().collect();
    let diags = if fam.unchecked { vec![] } else { check_family(&fam, &refs) };
    if !diags.is_empty() {
        let doc = json!({ "family": fam.tag.name(), "diagnostics": diags });
        return Ok(Output { text: serde_json::to_string_pretty(&doc)?, code: 3 });
    }
    let mut nonzero = 0;
    let mut witness = Value::Null;
    for t in pop.chunks(3) {
        let r = if jacobi {
            let [x, y, z] = [&t[0], &t[1], &t[2]].map(FormalSum::from_graph);
            jacobi_residual(&fam, &x, &y, &z)?
        } else {
            prelie_residual(&fam, &t[0], &t[1], &t[2])?
        };
        if !r.is_zero() {
            nonzero += 1;
            if witness.is_null() {
                let graphs: Vec<Value> = t.iter().map(graph_to_json).collect();
                witness = json!({ "graphs": graphs, "residual": r.to_json() });
            }
        }
    }
    let mut doc = json!({
        "family": fam.tag.name(),
        "identity": if jacobi { "jacobi" } else { "pre-lie" },
        "seed": cli.seed,
        "triples": cli.samples,
        "nonzero": nonzero,
    });
    if !witness.is_null() {
        doc["counterexample"] = witness;
    }
    Ok(Output { text: serde_json::to_string_pretty(&doc)?, code: u8::from(nonzero > 0) })
}

fn run_member(cli: &Cli) -> Result<Output> {
    let spec = theory(cli)?;
    let g = one_graph(cli, Some(&spec.alphabet()))?;
    Ok(Output::ok(feynman::is_member(&spec, &g)?.to_string()))
}

fn run_coproduct(cli: &Cli) -> Result<Output> {
    let spec = theory(cli)?;
    let g = one_graph(cli, Some(&spec.alphabet()))?;
    let c = feynman::ck_coproduct(&spec, &g)?;
    match cli.format {
        Format::Json => {
            let pairs: Vec<Value> = c
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "gamma": graph_entry(&p.gamma_graph),
                        "quotient": graph_entry(&p.quotient),
                        "multiplicity": p.multiplicity,
                    })
                })
                .collect();
            let doc = json!({ "graph": graph_entry(&g), "pairs": pairs });
            Ok(Output::ok(serde_json::to_string_pretty(&doc)?))
        }
        Format::Dot => Ok(Output::ok(
            c.pairs
                .iter()
                .flat_map(|p| {
                    [to_dot(&p.gamma_graph, &format!("gamma x{}", p.multiplicity)), to_dot(&p.quotient, "quotient")]
                })
                .collect(),
        )),
    }
}

fn run_export(cli: &Cli) -> Result<Output> {
    if !cli.graph.is_empty() {
        let alpha = match (&cli.grammar, &cli.preset) {
            (None, Some(_)) => Some(theory(cli)?.alphabet()),
            (Some(_), _) => Some(load_grammar(cli)?.alphabet),
            _ => None,
        };
        let g = one_graph(cli, alpha.as_ref())?;
        return Ok(Output::ok(graphs_out(cli, &[&g], json!({}))?));
    }
    let g = load_grammar(cli)?;
    match cli.format {
        Format::Json => Ok(Output::ok(serde_json::to_string_pretty(&grammar_to_json(&g))?)),
        Format::Dot => Ok(Output::ok(to_dot(&g.start, "start"))),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match cli.command {
        Command::Derive => run_derive(cli, false),
        Command::Language => run_derive(cli, true),
        Command::Enumerate => run_enumerate(cli),
        Command::Apply => run_apply(cli),
        Command::Bracket => run_bracket(cli),
        Command::CheckPrelie => run_check(cli, false),
        Command::CheckJacobi => run_check(cli, true),
        Command::Member => run_member(cli),
        Command::Coproduct => run_coproduct(cli),
        Command::Export => run_export(cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match &cli.out {
                Some(p) => {
                    if let Err(e) = fs::write(p, text) {
                        eprintln!("error: writing {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(AlgebraError::HypothesisViolation(d)) = e.chain().find_map(|c| c.downcast_ref::<AlgebraError>())
            {
                if let Ok(text) = serde_json::to_string_pretty(d) {
                    println!("{text}");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
