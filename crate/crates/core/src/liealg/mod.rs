//! Formal rational combinations of graphs and the insertion pre-Lie algebras on them.

mod family;
mod sample;
pub mod symbolic;

pub use family::{
    check_family, family_alphabet, incoming_corolla, insert_graphs, FamilyDiagnostic, FamilyTag, OperatorFamily,
    DESIGNATED_LABEL,
};
pub use sample::sample_population;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::graph::{Graph, GraphError, LabelAlphabet};
use crate::io::{GraphDoc, IoError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("family hypotheses fail: {0:?}")]
    HypothesisViolation(Vec<FamilyDiagnostic>),
    #[error("series truncation of order {0} is not available (at most 3)")]
    OrderUnsupported(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<std::convert::Infallible> for AlgebraError {
    fn from(e: std::convert::Infallible) -> Self {
        match e {}
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A finitely supported map from isomorphism classes of graphs to exact rationals.
#[derive(Clone, Debug, Default)]
pub struct FormalSum {
    terms: BTreeMap<CanonicalCode, BigRational>,
    registry: BTreeMap<CanonicalCode, Graph>,
}

impl PartialEq for FormalSum {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for FormalSum {}

impl FormalSum {
    pub fn zero() -> FormalSum {
        FormalSum::default()
    }

    pub fn from_graph(g: &Graph) -> FormalSum {
        let mut s = FormalSum::zero();
        s.add_graph(g, BigRational::one());
        s
    }

    pub fn add_graph(&mut self, g: &Graph, c: BigRational) {
        self.add_term(canonical_code(g), g, c);
    }

    pub(crate) fn add_term(&mut self, code: CanonicalCode, g: &Graph, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(code.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&code);
        } else {
            self.registry.entry(code).or_insert_with(|| g.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Graph) -> BigRational {
        self.coefficient_of(&canonical_code(g))
    }

    pub fn coefficient_of(&self, code: &CanonicalCode) -> BigRational {
        self.terms.get(code).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in code order: (code, coefficient, representative graph).
    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalCode, &BigRational, &Graph)> {
        self.terms.iter().map(move |(c, q)| (c, q, &self.registry[c]))
    }

    pub fn total_mass(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, q| acc + q)
    }

    /// `c1·a + c2·b`.
    pub fn combine(a: &FormalSum, c1: &BigRational, b: &FormalSum, c2: &BigRational) -> FormalSum {
        let mut out = FormalSum::zero();
        for (code, q, g) in a.terms() {
            out.add_term(code.clone(), g, q * c1);
        }
        for (code, q, g) in b.terms() {
            out.add_term(code.clone(), g, q * c2);
        }
        out
    }

    pub fn scaled(&self, c: &BigRational) -> FormalSum {
        FormalSum::combine(self, c, &FormalSum::zero(), &BigRational::zero())
    }

    pub fn plus(&self, other: &FormalSum) -> FormalSum {
        FormalSum::combine(self, &BigRational::one(), other, &BigRational::one())
    }

    pub fn minus(&self, other: &FormalSum) -> FormalSum {
        FormalSum::combine(self, &BigRational::one(), other, &-BigRational::one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<TermDoc> = self
            .terms()
            .map(|(c, q, g)| TermDoc { code: c.to_hex(), coeff: q.to_string(), graph: GraphDoc::from_graph(g, true) })
            .collect();
        serde_json::to_value(items).expect("formal sums serialize")
    }

    pub fn from_json(text: &str, fallback: Option<&Arc<LabelAlphabet>>) -> Result<FormalSum, IoError> {
        let items: Vec<TermDoc> = serde_json::from_str(text)?;
        let mut out = FormalSum::zero();
        for item in items {
            let (g, _) = item.graph.to_graph(fallback)?;
            let q: BigRational =
                item.coeff.parse().map_err(|_| IoError::Schema(format!("bad coefficient {:?}", item.coeff)))?;
            out.add_graph(&g, q);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    code: String,
    coeff: String,
    graph: GraphDoc,
}

/// A bilinear product on some vector space, assumed (not verified) to be pre-Lie.
pub trait PreLie {
    type Elem: Clone;
    type Error;

    fn zero(&self) -> Self::Elem;
    fn combine(&self, a: &Self::Elem, c1: &BigRational, b: &Self::Elem, c2: &BigRational) -> Self::Elem;
    fn insert(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.combine(a, &BigRational::one(), b, &BigRational::one())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.combine(a, &BigRational::one(), b, &-BigRational::one())
    }

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error> {
        Ok(self.sub(&self.insert(a, b)?, &self.insert(b, a)?))
    }
}

/// `(x⊲y)⊲z − x⊲(y⊲z) − (x⊲z)⊲y + x⊲(z⊲y)`.
pub fn associator_residual<A: PreLie>(alg: &A, x: &A::Elem, y: &A::Elem, z: &A::Elem) -> Result<A::Elem, A::Error> {
    let left = alg.sub(&alg.insert(&alg.insert(x, y)?, z)?, &alg.insert(x, &alg.insert(y, z)?)?);
    let right = alg.sub(&alg.insert(&alg.insert(x, z)?, y)?, &alg.insert(x, &alg.insert(z, y)?)?);
    Ok(alg.sub(&left, &right))
}

/// `[x,[y,z]] + [z,[x,y]] + [y,[z,x]]`.
pub fn cyclic_jacobi<A: PreLie>(alg: &A, x: &A::Elem, y: &A::Elem, z: &A::Elem) -> Result<A::Elem, A::Error> {
    let a = alg.bracket(x, &alg.bracket(y, z)?)?;
    let b = alg.bracket(z, &alg.bracket(x, y)?)?;
    let c = alg.bracket(y, &alg.bracket(z, x)?)?;
    Ok(alg.add(&alg.add(&a, &b), &c))
}

/// `x + y + ½[x,y] + 1/12([x,[x,y]] + [y,[y,x]])`.
pub fn bch_truncated<A: PreLie>(alg: &A, x: &A::Elem, y: &A::Elem) -> Result<A::Elem, A::Error> {
    let xy = alg.bracket(x, y)?;
    let yx = alg.bracket(y, x)?;
    let third = alg.add(&alg.bracket(x, &xy)?, &alg.bracket(y, &yx)?);
    let first = alg.add(x, y);
    let second = alg.combine(&first, &BigRational::one(), &xy, &rational(1, 2));
    Ok(alg.combine(&second, &BigRational::one(), &third, &rational(1, 12)))
}

/// `x + ½ x⊲x + 1/6 (x⊲x)⊲x`, truncated after `order` terms.
pub fn w_series_truncated<A: PreLie>(alg: &A, x: &A::Elem, order: usize) -> Result<A::Elem, AlgebraError>
where
    A::Error: Into<AlgebraError>,
{
    if order > 3 {
        return Err(AlgebraError::OrderUnsupported(order));
    }
    let mut out = alg.zero();
    if order >= 1 {
        out = alg.add(&out, x);
    }
    if order >= 2 {
        let xx = alg.insert(x, x).map_err(Into::into)?;
        out = alg.combine(&out, &BigRational::one(), &xx, &rational(1, 2));
        if order == 3 {
            let xxx = alg.insert(&xx, x).map_err(Into::into)?;
            out = alg.combine(&out, &BigRational::one(), &xxx, &rational(1, 6));
        }
    }
    Ok(out)
}

impl PreLie for OperatorFamily {
    type Elem = FormalSum;
    type Error = AlgebraError;

    fn zero(&self) -> FormalSum {
        FormalSum::zero()
    }

    fn combine(&self, a: &FormalSum, c1: &BigRational, b: &FormalSum, c2: &BigRational) -> FormalSum {
        FormalSum::combine(a, c1, b, c2)
    }

    fn insert(&self, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, AlgebraError> {
        prelie_insert_sums(self, a, b)
    }
}

fn require(fam: &OperatorFamily, graphs: &[&Graph]) -> Result<(), AlgebraError> {
    if fam.unchecked {
        return Ok(());
    }
    let diags = check_family(fam, graphs);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(AlgebraError::HypothesisViolation(diags))
    }
}

fn sum_graphs(s: &FormalSum) -> Vec<&Graph> {
    s.terms().map(|(_, _, g)| g).collect()
}

/// `G1 ⊲ G2` for the family; fails when the family's hypotheses do not hold for the inputs.
pub fn prelie_insert(fam: &OperatorFamily, g1: &Graph, g2: &Graph) -> Result<FormalSum, AlgebraError> {
    require(fam, &[g1, g2])?;
    Ok(insert_graphs(fam, g1, g2)?)
}

fn prelie_insert_sums(fam: &OperatorFamily, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, AlgebraError> {
    let mut all = sum_graphs(a);
    all.extend(sum_graphs(b));
    require(fam, &all)?;
    insert_sums_unchecked(fam, a, b)
}

fn insert_sums_unchecked(fam: &OperatorFamily, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, AlgebraError> {
    let mut out = FormalSum::zero();
    for (_, qa, ga) in a.terms() {
        for (_, qb, gb) in b.terms() {
            let prod = insert_graphs(fam, ga, gb)?;
            let c = qa * qb;
            for (code, q, g) in prod.terms() {
                out.add_term(code.clone(), g, q * &c);
            }
        }
    }
    Ok(out)
}

/// The same family with hypothesis checks switched off, for inputs already known to conform.
fn trusted(fam: &OperatorFamily) -> OperatorFamily {
    OperatorFamily { unchecked: true, ..fam.clone() }
}

pub fn lie_bracket(fam: &OperatorFamily, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, AlgebraError> {
    let mut all = sum_graphs(a);
    all.extend(sum_graphs(b));
    require(fam, &all)?;
    trusted(fam).bracket(a, b)
}

pub fn prelie_residual(fam: &OperatorFamily, g1: &Graph, g2: &Graph, g3: &Graph) -> Result<FormalSum, AlgebraError> {
    require(fam, &[g1, g2, g3])?;
    let [x, y, z] = [g1, g2, g3].map(FormalSum::from_graph);
    associator_residual(&trusted(fam), &x, &y, &z)
}

pub fn jacobi_residual(
    fam: &OperatorFamily,
    x: &FormalSum,
    y: &FormalSum,
    z: &FormalSum,
) -> Result<FormalSum, AlgebraError> {
    let mut all = sum_graphs(x);
    all.extend(sum_graphs(y));
    all.extend(sum_graphs(z));
    require(fam, &all)?;
    cyclic_jacobi(&trusted(fam), x, y, z)
}
