//! Free non-associative words in symbolic generators, used to read off series coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::PreLie;

/// A binary word: a generator or the insertion of one word into another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    Gen(String),
    Ins(Box<Word>, Box<Word>),
}

impl Word {
    pub fn gen(name: &str) -> Word {
        Word::Gen(name.to_string())
    }

    pub fn ins(a: Word, b: Word) -> Word {
        Word::Ins(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Gen(s) => write!(f, "{s}"),
            Word::Ins(a, b) => write!(f, "({a}◁{b})"),
        }
    }
}

/// Rational combination of words.
pub type Combination = BTreeMap<Word, BigRational>;

pub fn generator(name: &str) -> Combination {
    BTreeMap::from([(Word::gen(name), BigRational::one())])
}

/// The free magma algebra: insertion is formal and satisfies no identity, so every
/// coefficient of a series survives unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeMagma;

impl PreLie for FreeMagma {
    type Elem = Combination;
    type Error = std::convert::Infallible;

    fn zero(&self) -> Combination {
        Combination::new()
    }

    fn combine(&self, a: &Combination, c1: &BigRational, b: &Combination, c2: &BigRational) -> Combination {
        let mut out = Combination::new();
        for (w, q) in a.iter().map(|(w, q)| (w, q * c1)).chain(b.iter().map(|(w, q)| (w, q * c2))) {
            let e = out.entry(w.clone()).or_insert_with(BigRational::zero);
            *e += q;
            if e.is_zero() {
                out.remove(w);
            }
        }
        out
    }

    fn insert(&self, a: &Combination, b: &Combination) -> Result<Combination, Self::Error> {
        let mut out = Combination::new();
        for (wa, qa) in a {
            for (wb, qb) in b {
                let w = Word::ins(wa.clone(), wb.clone());
                let e = out.entry(w.clone()).or_insert_with(BigRational::zero);
                *e += qa * qb;
                if e.is_zero() {
                    out.remove(&w);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{bch_truncated, rational};

    #[test]
    fn bch_keeps_bracket_terms() {
        let (x, y) = (generator("x"), generator("y"));
        let c = bch_truncated(&FreeMagma, &x, &y).unwrap();
        let xy = Word::ins(Word::gen("x"), Word::gen("y"));
        assert_eq!(c[&xy], rational(1, 2));
        assert_eq!(c[&Word::ins(Word::gen("y"), Word::gen("x"))], rational(-1, 2));
        assert_eq!(c[&Word::ins(Word::gen("x"), xy.clone())], rational(1, 12));
    }
}
