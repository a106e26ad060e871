//! Oracle-parameterised word problems for free products and trees of groups.

mod amalgam;
mod oracles;

use std::sync::Arc;

use thiserror::Error;

use crate::words::{Alphabet, Letter, Word};

pub use amalgam::{
    amalgam_reduce, amalgam_reduce_bounded, conjugate_into_vertex, cyclic_reduction, infinite_order_certificate,
    AmalgamOracle, AmalgamSpec, CyclicReduction, EdgeSpec, MembershipOracle, ReducedSequence, StallingsMembership,
    TrivialMembership, VertexSpec, DEFAULT_BOUND,
};
pub use oracles::{AbelianOracle, FiniteGroup, FiniteOracle, FreeOracle, FreeProductOracle, MappedOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search bound {bound} exhausted")]
    Inconclusive { bound: usize },
    #[error("oracle inconsistency: {0}")]
    Inconsistent(String),
    #[error("no word-problem oracle for {0}")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
}

/// Solves the word problem of one group, on words over its own alphabet.
pub trait WordOracle: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError>;

    fn equal(&self, u: &Word, v: &Word) -> Result<bool, OracleError> {
        self.is_trivial(&u.mul(&v.inverse()))
    }
}

/// Partition of an ambient alphabet into free factors, each with its oracle.
#[derive(Clone)]
pub struct FactorSplit {
    // ambient generator -> (factor, local generator)
    owner: Vec<(usize, usize)>,
    // factor -> ambient generators in local order
    members: Vec<Vec<usize>>,
    oracles: Vec<Arc<dyn WordOracle>>,
}

impl FactorSplit {
    /// `parts[i]` lists the ambient generators of factor `i` in the order of
    /// that factor's oracle alphabet. Every ambient generator must occur once.
    pub fn new(ambient_size: usize, parts: Vec<(Vec<usize>, Arc<dyn WordOracle>)>) -> Result<FactorSplit, OracleError> {
        let mut owner = vec![(usize::MAX, 0); ambient_size];
        let mut members = Vec::new();
        let mut oracles = Vec::new();
        for (f, (gens, oracle)) in parts.into_iter().enumerate() {
            if gens.len() != oracle.alphabet().len() {
                return Err(OracleError::Invalid(format!("factor {f}: oracle alphabet size mismatch")));
            }
            for (local, &g) in gens.iter().enumerate() {
                if g >= ambient_size || owner[g].0 != usize::MAX {
                    return Err(OracleError::Invalid(format!("generator {g} assigned twice or out of range")));
                }
                owner[g] = (f, local);
            }
            members.push(gens);
            oracles.push(oracle);
        }
        if owner.iter().any(|o| o.0 == usize::MAX) {
            return Err(OracleError::Invalid("generator not assigned to a factor".into()));
        }
        Ok(FactorSplit { owner, members, oracles })
    }

    /// Consecutive ambient generator ranges, one per factor.
    pub fn contiguous(oracles: Vec<Arc<dyn WordOracle>>) -> FactorSplit {
        let mut parts = Vec::new();
        let mut next = 0;
        for o in oracles {
            let n = o.alphabet().len();
            parts.push(((next..next + n).collect(), o));
            next += n;
        }
        FactorSplit::new(next, parts).expect("contiguous ranges partition the alphabet")
    }

    pub fn factor_count(&self) -> usize {
        self.oracles.len()
    }

    pub fn factor_of(&self, g: usize) -> usize {
        self.owner[g].0
    }

    pub fn oracle(&self, f: usize) -> &Arc<dyn WordOracle> {
        &self.oracles[f]
    }

    /// Ambient word (within one factor) to that factor's local word.
    pub fn localize(&self, w: &Word) -> Word {
        Word::from_letters(w.letters().iter().map(|l| Letter::new(self.owner[l.generator()].1, l.is_inverse())))
    }

    pub fn globalize(&self, f: usize, w: &Word) -> Word {
        let m = &self.members[f];
        w.relabel(|g| m[g])
    }

    /// Maximal runs of letters from a single factor.
    pub fn blocks(&self, w: &Word) -> Vec<(usize, Word)> {
        let mut out: Vec<(usize, Vec<Letter>)> = Vec::new();
        for &l in w.letters() {
            let f = self.factor_of(l.generator());
            match out.last_mut() {
                Some((g, run)) if *g == f => run.push(l),
                _ => out.push((f, vec![l])),
            }
        }
        out.into_iter().map(|(f, run)| (f, Word::from_letters(run))).collect()
    }
}

/// One syllable of a free-product normal form; the word uses ambient indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syllable {
    pub factor: usize,
    pub word: Word,
}

/// Syllable sequence of `w`; empty iff `w` is trivial in the free product.
pub fn free_product_normal_form(w: &Word, split: &FactorSplit) -> Result<Vec<Syllable>, OracleError> {
    let mut stack: Vec<Syllable> = Vec::new();
    for (f, block) in split.blocks(w) {
        let word = match stack.last() {
            Some(top) if top.factor == f => stack.pop().unwrap().word.mul(&block),
            _ => block,
        };
        if !split.oracle(f).is_trivial(&split.localize(&word))? {
            stack.push(Syllable { factor: f, word });
        }
    }
    Ok(stack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::FinitePresentation;

    fn split_x_st() -> (Alphabet, FactorSplit) {
        let amb = Alphabet::new(&["x", "s", "t"]).unwrap();
        let z: Arc<dyn WordOracle> = Arc::new(FreeOracle::on(Alphabet::new(&["x"]).unwrap()));
        let f: Arc<dyn WordOracle> = Arc::new(FreeOracle::on(Alphabet::new(&["s", "t"]).unwrap()));
        (amb, FactorSplit::contiguous(vec![z, f]))
    }

    #[test]
    fn normal_form_examples() {
        let (amb, split) = split_x_st();
        let nf = free_product_normal_form(&amb.parse_word("s x s^-1").unwrap(), &split).unwrap();
        let shape: Vec<(usize, String)> = nf.iter().map(|s| (s.factor, amb.format_word(&s.word))).collect();
        assert_eq!(shape, vec![(1, "s".into()), (0, "x".into()), (1, "s^-1".into())]);

        let amb = Alphabet::new(&["b", "s", "t"]).unwrap();
        let z2: Arc<dyn WordOracle> = Arc::new(
            FiniteOracle::new(Alphabet::new(&["b"]).unwrap(), FiniteGroup::cyclic(2), vec![1]).unwrap(),
        );
        let f: Arc<dyn WordOracle> = Arc::new(FreeOracle::on(Alphabet::new(&["s", "t"]).unwrap()));
        let split = FactorSplit::contiguous(vec![z2, f]);
        assert!(free_product_normal_form(&amb.parse_word("b b").unwrap(), &split).unwrap().is_empty());
        // b s b b s^-1 b collapses completely
        assert!(free_product_normal_form(&amb.parse_word("b s b b s^-1 b").unwrap(), &split).unwrap().is_empty());
    }

    #[test]
    fn normal_form_of_conjugated_s() {
        // (a0 t) s (a0 t)^-1 with a0 of infinite order: a0 | t s t^-1 | a0^-1
        let (amb, split) = split_x_st();
        let w = amb.parse_word("x t s t^-1 x^-1").unwrap();
        let nf = free_product_normal_form(&w, &split).unwrap();
        assert_eq!(nf.len(), 3);
        let total: usize = nf.iter().map(|s| s.word.len()).sum();
        assert_eq!(total, 5);

        // with s and t as separate infinite cyclic factors the count is 5
        let single = |n: &str| -> Arc<dyn WordOracle> { Arc::new(FreeOracle::on(Alphabet::new(&[n]).unwrap())) };
        let split = FactorSplit::contiguous(vec![single("x"), single("s"), single("t")]);
        let nf = free_product_normal_form(&w, &split).unwrap();
        let factors: Vec<usize> = nf.iter().map(|s| s.factor).collect();
        assert_eq!(factors, vec![0, 2, 1, 2, 0]);
    }

    #[test]
    fn free_product_oracle() {
        let p = FinitePresentation::from_strs(&["x", "s", "t"], &[]).unwrap();
        let (_, split) = split_x_st();
        let o = FreeProductOracle::new(p.alphabet().clone(), split);
        assert!(o.is_trivial(&Word::identity()).unwrap());
        assert!(!o.is_trivial(&p.parse_word("x s").unwrap()).unwrap());
    }
}
