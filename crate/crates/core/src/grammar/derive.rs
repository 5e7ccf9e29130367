use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::apply::{apply_unchecked, matches};
use super::{Grammar, GrammarError};
use crate::canonical::{canonical_code, CanonicalCode};
use crate::embed::Embedding;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_steps: usize,
    pub max_vertices: usize,
}

/// One rule application: `rule` applied to the stored representative of `parent` at `embedding`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub parent: CanonicalCode,
    pub rule: usize,
    pub embedding: Embedding,
    pub result: CanonicalCode,
}

/// Truncated closure of the start graph under the rules.
#[derive(Clone, Debug)]
pub struct Derivation {
    /// One representative graph per isomorphism class reached.
    pub graphs: BTreeMap<CanonicalCode, Graph>,
    /// How each class was first reached; `None` for the start graph.
    pub witness: BTreeMap<CanonicalCode, Option<DerivationStep>>,
    /// Set when some application was cut off by the bounds.
    pub truncated: bool,
}

impl Derivation {
    pub fn codes(&self) -> BTreeSet<CanonicalCode> {
        self.graphs.keys().cloned().collect()
    }

    /// Codes of fully terminal graphs.
    pub fn language(&self) -> BTreeSet<CanonicalCode> {
        self.graphs.iter().filter(|(_, g)| g.is_terminal()).map(|(c, _)| c.clone()).collect()
    }

    /// The chain of steps from the start graph to `code`.
    pub fn chain(&self, code: &CanonicalCode) -> Option<Vec<DerivationStep>> {
        let mut out = Vec::new();
        let mut cur = code.clone();
        loop {
            match self.witness.get(&cur)? {
                None => break,
                Some(step) => {
                    out.push(step.clone());
                    cur = step.parent.clone();
                }
            }
        }
        out.reverse();
        Some(out)
    }

    /// Re-applies every step of the witness chain and checks each recorded result code.
    pub fn replay(&self, grammar: &Grammar, code: &CanonicalCode) -> Result<bool, GrammarError> {
        let Some(chain) = self.chain(code) else {
            return Ok(false);
        };
        for step in chain {
            let parent = &self.graphs[&step.parent];
            let next = super::apply(&grammar.rules[step.rule], parent, &step.embedding)?;
            if canonical_code(&next) != step.result {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Breadth-first closure of the start graph, at most `max_steps` rule applications deep and
/// never exceeding `max_vertices` vertices.
pub fn derive(grammar: &Grammar, bounds: Bounds) -> Derivation {
    let mut d = Derivation { graphs: BTreeMap::new(), witness: BTreeMap::new(), truncated: false };
    if grammar.start.vertex_count() > bounds.max_vertices {
        d.truncated = true;
        return d;
    }
    let start = canonical_code(&grammar.start);
    d.graphs.insert(start.clone(), grammar.start.clone());
    d.witness.insert(start.clone(), None);
    let mut frontier = vec![start];
    for _ in 0..bounds.max_steps {
        let mut next = Vec::new();
        for code in &frontier {
            let host = d.graphs[code].clone();
            for (ri, rule) in grammar.rules.iter().enumerate() {
                for m in matches(rule, &host) {
                    let Ok(out) = apply_unchecked(rule, &host, &m) else {
                        continue;
                    };
                    if out.vertex_count() > bounds.max_vertices {
                        d.truncated = true;
                        continue;
                    }
                    let c = canonical_code(&out);
                    if d.graphs.contains_key(&c) {
                        continue;
                    }
                    let step = DerivationStep { parent: code.clone(), rule: ri, embedding: m, result: c.clone() };
                    d.graphs.insert(c.clone(), out);
                    d.witness.insert(c.clone(), Some(step));
                    next.push(c);
                }
            }
        }
        next.sort();
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    if !frontier.is_empty() {
        let open = frontier.iter().any(|c| grammar.rules.iter().any(|r| !matches(r, &d.graphs[c]).is_empty()));
        d.truncated |= open;
    }
    d
}

/// Terminal part of [`derive`].
pub fn language(grammar: &Grammar, bounds: Bounds) -> BTreeSet<CanonicalCode> {
    derive(grammar, bounds).language()
}

#[cfg(test)]
mod tests {
    use super::super::tests::alpha;
    use super::super::{ProductionRule, RuleKind};
    use super::*;
    use crate::graph::star;

    fn join_only() -> Grammar {
        let start = star(alpha(), "V", "N", 4).unwrap().with_root(None).unwrap();
        let join =
            ProductionRule { name: "join".into(), kind: RuleKind::JoinFlags { label: "N".into(), result: "T".into() } };
        Grammar { alphabet: alpha(), start, rules: vec![join] }
    }

    #[test]
    fn one_vertex_pairings() {
        let d = derive(&join_only(), Bounds { max_steps: 10, max_vertices: 1 });
        assert_eq!(d.codes().len(), 3);
        assert!(!d.truncated);
        assert_eq!(d.language().len(), 1);
    }

    #[test]
    fn zero_steps_is_the_start_graph() {
        let g = join_only();
        let d = derive(&g, Bounds { max_steps: 0, max_vertices: 5 });
        assert_eq!(d.codes(), BTreeSet::from([canonical_code(&g.start)]));
        assert!(d.truncated);
    }

    #[test]
    fn witnesses_replay() {
        let g = join_only();
        let d = derive(&g, Bounds { max_steps: 10, max_vertices: 1 });
        for c in d.codes() {
            assert!(d.replay(&g, &c).unwrap());
        }
    }
}
