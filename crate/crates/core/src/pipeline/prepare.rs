//! Preparation of the input group: adjoin `Z = <x>` and a free group `<s, t>`,
//! and mark the free subgroups `F1` and `F2`.

use std::sync::Arc;

use super::PipelineError;
use crate::homology::IntMatrix;
use crate::normalform::{
    free_product_normal_form, AbelianOracle, FactorSplit, FiniteOracle, FreeOracle, FreeProductOracle, MappedOracle,
    MembershipOracle, OracleError, WordOracle,
};
use crate::stallings::StallingsGraph;
use crate::words::{Alphabet, FinitePresentation, GeneratorMapping, Letter, Word};

/// How the word problem of the input group is decided.
#[derive(Clone, Debug)]
pub enum OracleChoice {
    /// Construct-only: no word problem available.
    None,
    Free,
    Finite(FiniteOracle),
    Abelian(IntMatrix),
}

impl OracleChoice {
    pub fn kind(&self) -> &'static str {
        match self {
            OracleChoice::None => "none",
            OracleChoice::Free => "free",
            OracleChoice::Finite(_) => "finite",
            OracleChoice::Abelian(_) => "abelian",
        }
    }

    /// Builds the oracle and checks that every relator of `g` is trivial under it.
    pub fn build(&self, g: &FinitePresentation) -> Result<Option<Arc<dyn WordOracle>>, PipelineError> {
        let oracle: Arc<dyn WordOracle> = match self {
            OracleChoice::None => return Ok(None),
            OracleChoice::Free => Arc::new(FreeOracle::new(g)?),
            OracleChoice::Finite(f) => {
                if f.alphabet() != g.alphabet() {
                    return Err(PipelineError::Config("finite oracle alphabet differs from the group's".into()));
                }
                Arc::new(f.clone())
            }
            OracleChoice::Abelian(m) => Arc::new(AbelianOracle::new(m, g.alphabet().clone())?),
        };
        for r in g.relators() {
            if !oracle.is_trivial(r)? {
                return Err(PipelineError::Config(format!(
                    "oracle does not kill relator `{}`",
                    g.format_word(r)
                )));
            }
        }
        Ok(Some(oracle))
    }
}

/// A subgroup given by generating words, with its declared rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSubgroup {
    pub ambient: FinitePresentation,
    pub words: Vec<Word>,
    pub rank: usize,
}

impl MarkedSubgroup {
    pub fn new(ambient: FinitePresentation, words: Vec<Word>) -> MarkedSubgroup {
        let rank = words.len();
        MarkedSubgroup { ambient, words, rank }
    }

    /// Folded graph of the words in the free group on the ambient generators.
    pub fn lift(&self) -> StallingsGraph {
        StallingsGraph::from_generators(&self.words, self.ambient.generator_count())
            .expect("marked words lie in the ambient alphabet")
    }
}

/// Output of [`ensure_infinite_order_generators`].
#[derive(Clone, Debug)]
pub struct InfiniteOrderGenerators {
    /// `P ∗ <x>` with `a_i = x b_i` adjoined as defined symbols.
    pub presentation: FinitePresentation,
    /// From the abstract alphabet `a0..an` to the new generators (`a0 ↦ x`).
    pub mapping: GeneratorMapping,
    pub x: usize,
    pub defined: Vec<usize>,
}

/// Always adjoins `x` and one defined symbol `a_i = x b_i` per input generator.
pub fn ensure_infinite_order_generators(p: &FinitePresentation) -> InfiniteOrderGenerators {
    let mut alphabet = p.alphabet().clone();
    let x_name = alphabet.fresh_name("x");
    let x = alphabet.push(&x_name).unwrap();
    let n = p.generator_count();
    let mut defined = Vec::with_capacity(n);
    for i in 1..=n {
        let name = alphabet.fresh_name(&format!("a{i}"));
        defined.push(alphabet.push(&name).unwrap());
    }
    let mut relators = p.relators().to_vec();
    for (i, &a) in defined.iter().enumerate() {
        // a_i b_i^-1 x^-1
        relators.push(Word::from_letters([Letter::positive(a), Letter::new(i, true), Letter::new(x, true)]));
    }
    let presentation = FinitePresentation::new(alphabet, relators).unwrap();
    let abstract_names: Vec<String> = (0..=n).map(|i| format!("a{i}")).collect();
    let source = Alphabet::new(&abstract_names).unwrap();
    let mut images = vec![Word::generator(x)];
    images.extend(defined.iter().map(|&a| Word::generator(a)));
    let mapping = GeneratorMapping::new(source, presentation.alphabet().clone(), images).unwrap();
    InfiniteOrderGenerators { presentation, mapping, x, defined }
}

/// The prepared group `G ∗ <x> ∗ <s, t>` with `F1` and `F2` marked.
#[derive(Clone)]
pub struct PreparedGroup {
    pub original: FinitePresentation,
    pub prepared: FinitePresentation,
    pub f1: MarkedSubgroup,
    pub f2: MarkedSubgroup,
    pub x: usize,
    pub defined: Vec<usize>,
    pub s: usize,
    pub t: usize,
    /// Human-readable notes on fresh symbols that had to be renamed.
    pub rename_log: Vec<String>,
    pub choice: OracleChoice,
    pub oracle: Option<Arc<dyn WordOracle>>,
    original_oracle: Option<Arc<dyn WordOracle>>,
}

impl std::fmt::Debug for PreparedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PreparedGroup").field("prepared", &self.prepared).finish_non_exhaustive()
    }
}

/// Adjoins `<s, t>` and marks
/// `F1 = [s, a0 t, a1 s^-1 t s, ..., an s^-n t s^n]` and `F2 = [s, t, a0 t]`.
pub fn construct_f1_f2(original: &FinitePresentation, choice: &OracleChoice) -> Result<PreparedGroup, PipelineError> {
    let oracle = choice.build(original)?;
    let inf = ensure_infinite_order_generators(original);
    let mut alphabet = inf.presentation.alphabet().clone();
    let mut rename_log = Vec::new();
    let mut fresh = |alphabet: &mut Alphabet, base: &str| {
        let name = alphabet.fresh_name(base);
        if name != base {
            rename_log.push(format!("{base} -> {name}"));
        }
        alphabet.push(&name).unwrap()
    };
    // names were already made fresh for x and the a_i; record those too
    let x_name = alphabet.name(inf.x).to_string();
    let s = fresh(&mut alphabet, "s");
    let t = fresh(&mut alphabet, "t");
    if x_name != "x" {
        rename_log.insert(0, format!("x -> {x_name}"));
    }
    for (i, &a) in inf.defined.iter().enumerate() {
        let base = format!("a{}", i + 1);
        if alphabet.name(a) != base {
            rename_log.push(format!("{base} -> {}", alphabet.name(a)));
        }
    }
    let prepared = FinitePresentation::new(alphabet, inf.presentation.relators().to_vec()).unwrap();

    let sw = Word::generator(s);
    let tw = Word::generator(t);
    let a0t = Word::generator(inf.x).mul(&tw);
    let mut f1 = vec![sw.clone(), a0t.clone()];
    for (i, &a) in inf.defined.iter().enumerate() {
        let k = (i + 1) as i64;
        f1.push(Word::generator(a).mul(&Word::power_of(s, -k)).mul(&tw).mul(&Word::power_of(s, k)));
    }
    let f2 = vec![sw, tw, a0t];

    let prepared_oracle = oracle.as_ref().map(|g| prepared_oracle(original, &prepared, inf.x, &inf.defined, s, t, g.clone()));
    Ok(PreparedGroup {
        original: original.clone(),
        f1: MarkedSubgroup::new(prepared.clone(), f1),
        f2: MarkedSubgroup::new(prepared.clone(), f2),
        prepared,
        x: inf.x,
        defined: inf.defined,
        s,
        t,
        rename_log,
        choice: choice.clone(),
        oracle: prepared_oracle,
        original_oracle: oracle,
    })
}

// core alphabet: [b_1..b_n, x, s, t]
fn core_images(n: usize, prepared: &FinitePresentation, x: usize, defined: &[usize], s: usize, t: usize) -> Vec<Word> {
    let mut images = vec![Word::identity(); prepared.generator_count()];
    for (i, img) in images.iter_mut().enumerate().take(n) {
        *img = Word::generator(i);
    }
    images[x] = Word::generator(n);
    for (i, &a) in defined.iter().enumerate() {
        images[a] = Word::generator(n).mul(&Word::generator(i));
    }
    images[s] = Word::generator(n + 1);
    images[t] = Word::generator(n + 2);
    images
}

fn free_on(names: &[&str]) -> Arc<dyn WordOracle> {
    Arc::new(FreeOracle::on(Alphabet::new(names).unwrap()))
}

fn prepared_oracle(
    original: &FinitePresentation,
    prepared: &FinitePresentation,
    x: usize,
    defined: &[usize],
    s: usize,
    t: usize,
    g: Arc<dyn WordOracle>,
) -> Arc<dyn WordOracle> {
    let n = original.generator_count();
    let core_alpha = numbered_alphabet(n + 3);
    let split = FactorSplit::contiguous(vec![g, free_on(&["x", "s", "t"])]);
    let core: Arc<dyn WordOracle> = Arc::new(FreeProductOracle::new(core_alpha, split));
    Arc::new(MappedOracle::new(prepared.alphabet().clone(), core_images(n, prepared, x, defined, s, t), core).unwrap())
}

fn numbered_alphabet(k: usize) -> Alphabet {
    let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
    Alphabet::new(&names).unwrap()
}

impl PreparedGroup {
    pub fn n(&self) -> usize {
        self.original.generator_count()
    }

    /// Rewrites a prepared word over `[b_1..b_n, x, s, t]`.
    pub fn to_core(&self, w: &Word) -> Word {
        w.substitute(&core_images(self.n(), &self.prepared, self.x, &self.defined, self.s, self.t))
    }

    pub fn original_oracle(&self) -> Option<&Arc<dyn WordOracle>> {
        self.original_oracle.as_ref()
    }

    pub fn f1_membership(&self) -> Option<F1Membership> {
        self.original_oracle.as_ref().map(|g| F1Membership::new(self, g.clone()))
    }

    pub fn f2_membership(&self) -> Option<F2Membership> {
        self.original_oracle.as_ref().map(|g| F2Membership::new(self, g.clone()))
    }
}

/// Exact membership in `F1`.
///
/// Writing `t' = x t` turns the prepared group into `(B ∗ <x>) ∗ <t'>` with
/// `B = G ∗ <s>`, and `F1` into `R ∗ <t'>` where `R = <s> ∗ x Q x⁻¹` and
/// `Q = <b_i s^-i>` lies in `B`. Elements of `R` have `<x>`-normal form
/// `β0 x β1 x⁻¹ β2 x β3 x⁻¹ ...` with even `β` in `<s>` and odd `β` in `Q`.
/// Membership in `Q` is decided by peeling generators off the left, keeping
/// only peels that shorten the `G ∗ <s>` normal form. When the `b_i` are
/// nontrivial and pairwise distinct in `G` every correct peel shortens, so the
/// search is exact; otherwise a bounded search is used.
pub struct F1Membership {
    gens: Vec<Word>,
    n: usize,
    to_core: Vec<Word>,
    // core alphabet with t replaced by t' = x t (same index n + 2)
    split_top: FactorSplit,
    split_bx: FactorSplit,
    split_b: FactorSplit,
    exact: bool,
}

impl F1Membership {
    fn new(pg: &PreparedGroup, g: Arc<dyn WordOracle>) -> F1Membership {
        let n = pg.n();
        let gx_s: Arc<dyn WordOracle> = {
            let mut names: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
            names.extend(["x".into(), "s".into()]);
            let split = FactorSplit::contiguous(vec![g.clone(), free_on(&["x"]), free_on(&["s"])]);
            Arc::new(FreeProductOracle::new(Alphabet::new(&names).unwrap(), split))
        };
        let split_top = FactorSplit::new(n + 3, vec![((0..n + 2).collect(), gx_s), (vec![n + 2], free_on(&["t"]))]).unwrap();
        let b_oracle: Arc<dyn WordOracle> = {
            let mut names: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
            names.push("s".into());
            let split = FactorSplit::contiguous(vec![g.clone(), free_on(&["s"])]);
            Arc::new(FreeProductOracle::new(Alphabet::new(&names).unwrap(), split))
        };
        let mut b_gens: Vec<usize> = (0..n).collect();
        b_gens.push(n + 1);
        let split_bx = FactorSplit::new(n + 2, vec![(b_gens, b_oracle), (vec![n], free_on(&["x"]))]).unwrap();
        let split_b = FactorSplit::contiguous(vec![g.clone(), free_on(&["s"])]);
        let exact = (0..n).all(|i| {
            g.is_trivial(&Word::generator(i)) == Ok(false)
                && (0..i).all(|j| g.equal(&Word::generator(i), &Word::generator(j)) == Ok(false))
        });
        F1Membership {
            gens: pg.f1.words.clone(),
            n,
            to_core: core_images(n, &pg.prepared, pg.x, &pg.defined, pg.s, pg.t),
            split_top,
            split_bx,
            split_b,
            exact,
        }
    }

    /// True when the `b_i` are nontrivial and pairwise distinct, so answers are exact.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    // q_i = b_i s^-i over the B alphabet [b.., s]
    fn q(&self, i: usize) -> Word {
        Word::generator(i).mul(&Word::power_of(self.n, -((i + 1) as i64)))
    }

    fn nf_len(&self, w: &Word) -> Result<usize, OracleError> {
        Ok(free_product_normal_form(w, &self.split_b)?.len())
    }

    /// Expression of a B-word in the `q_i`, if it lies in `Q`.
    fn in_q(&self, w: &Word, bound: usize) -> Result<Option<Word>, OracleError> {
        let len = self.nf_len(w)?;
        let mut path = Vec::new();
        let mut budget = bound.max(1);
        let found = self.peel(w, len, &mut path, &mut budget)?;
        match found {
            true => Ok(Some(Word::from_letters(path))),
            false if self.exact => Ok(None),
            false => Err(OracleError::Inconclusive { bound }),
        }
    }

    fn peel(&self, w: &Word, len: usize, path: &mut Vec<Letter>, budget: &mut usize) -> Result<bool, OracleError> {
        if len == 0 {
            return Ok(true);
        }
        if !self.exact {
            if *budget == 0 {
                return Ok(false);
            }
            *budget -= 1;
        }
        for i in 0..self.n {
            for inv in [false, true] {
                let l = Letter::new(i, inv);
                if path.last() == Some(&l.inverse()) {
                    continue;
                }
                let qi = if inv { self.q(i).inverse() } else { self.q(i) };
                let rest = qi.inverse().mul(w);
                let rl = self.nf_len(&rest)?;
                if rl < len || (!self.exact && path.len() < 2 * len + 2) {
                    path.push(l);
                    if self.peel(&rest, rl, path, budget)? {
                        return Ok(true);
                    }
                    path.pop();
                }
            }
        }
        Ok(false)
    }

    /// Expression in F1's basis of an element of `B ∗ <x>` (local alphabet [b.., x, s]).
    fn in_r(&self, r: &Word, bound: usize) -> Result<Option<Word>, OracleError> {
        let n = self.n;
        let z = |j: usize| Word::generator(j);
        let syl = free_product_normal_form(r, &self.split_bx)?;
        let mut out = Word::identity();
        // state: expecting x (outside) or x^-1 (inside)
        let mut inside = false;
        for sy in syl {
            if sy.factor == 1 {
                let e = sy.word.exponent_sum(n);
                let want = if inside { -1 } else { 1 };
                if e != want {
                    return Ok(None);
                }
                inside = !inside;
                continue;
            }
            let beta = self.split_bx.localize(&sy.word);
            if inside {
                let Some(expr) = self.in_q(&beta, bound)? else {
                    return Ok(None);
                };
                // x q_i x^-1 = z_{i+1} z_0^-i z_1^-1
                let e: Vec<Word> = (0..n)
                    .map(|i| z(i + 2).mul(&Word::power_of(0, -((i + 1) as i64))).mul(&z(1).inverse()))
                    .collect();
                out = out.mul(&expr.substitute(&e));
            } else {
                let nf = free_product_normal_form(&beta, &self.split_b)?;
                match nf.as_slice() {
                    [] => {}
                    [only] if only.factor == 1 => out = out.mul(&Word::power_of(0, only.word.exponent_sum(n))),
                    _ => return Ok(None),
                }
            }
        }
        Ok((!inside).then_some(out))
    }
}

impl MembershipOracle for F1Membership {
    fn generators(&self) -> &[Word] {
        &self.gens
    }

    fn rewrite(&self, w: &Word, bound: usize) -> Result<Option<Word>, OracleError> {
        let n = self.n;
        // t = x^-1 t'
        let core = w.substitute(&self.to_core);
        let mut sub: Vec<Word> = (0..n + 3).map(Word::generator).collect();
        sub[n + 2] = Word::generator(n).inverse().mul(&Word::generator(n + 2));
        let prime = core.substitute(&sub);
        let mut out = Word::identity();
        for sy in free_product_normal_form(&prime, &self.split_top)? {
            if sy.factor == 1 {
                out = out.mul(&Word::power_of(1, sy.word.exponent_sum(n + 2)));
            } else {
                let r = self.split_top.localize(&sy.word);
                match self.in_r(&r, bound)? {
                    Some(e) => out = out.mul(&e),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(out))
    }
}

/// Exact membership in `F2 = <s, t, a0 t> = F(x, s, t)`, a free factor.
pub struct F2Membership {
    gens: Vec<Word>,
    n: usize,
    to_core: Vec<Word>,
    split: FactorSplit,
    graph: StallingsGraph,
}

impl F2Membership {
    fn new(pg: &PreparedGroup, g: Arc<dyn WordOracle>) -> F2Membership {
        let n = pg.n();
        let split = FactorSplit::contiguous(vec![g, free_on(&["x", "s", "t"])]);
        // s, t, x t over [x, s, t]
        let basis = vec![Word::generator(1), Word::generator(2), Word::generator(0).mul(&Word::generator(2))];
        F2Membership {
            gens: pg.f2.words.clone(),
            n,
            to_core: core_images(n, &pg.prepared, pg.x, &pg.defined, pg.s, pg.t),
            split,
            graph: StallingsGraph::from_generators(&basis, 3).unwrap(),
        }
    }
}

impl MembershipOracle for F2Membership {
    fn generators(&self) -> &[Word] {
        &self.gens
    }

    fn rewrite(&self, w: &Word, _bound: usize) -> Result<Option<Word>, OracleError> {
        let core = w.substitute(&self.to_core);
        let nf = free_product_normal_form(&core, &self.split)?;
        match nf.as_slice() {
            [] => Ok(Some(Word::identity())),
            [only] if only.factor == 1 => {
                let local = only.word.relabel(|g| g - self.n);
                Ok(self.graph.express(&local))
            }
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::FiniteGroup;

    fn z2() -> (FinitePresentation, OracleChoice) {
        let p = FinitePresentation::from_strs(&["b"], &["b b"]).unwrap();
        let o = FiniteOracle::new(p.alphabet().clone(), FiniteGroup::cyclic(2), vec![1]).unwrap();
        (p, OracleChoice::Finite(o))
    }

    #[test]
    fn infinite_order_examples() {
        let (p, _) = z2();
        let r = ensure_infinite_order_generators(&p);
        assert_eq!(r.presentation.to_string(), "generators: b x a1\nrelator: b b\nrelator: a1 b^-1 x^-1\n");
        let f = FinitePresentation::from_strs(&["b"], &[]).unwrap();
        let r = ensure_infinite_order_generators(&f);
        assert_eq!(r.presentation.to_string(), "generators: b x a1\nrelator: a1 b^-1 x^-1\n");
        let triv = FinitePresentation::from_strs(&[], &[]).unwrap();
        let r = ensure_infinite_order_generators(&triv);
        assert_eq!(r.presentation.to_string(), "generators: x\n");
        assert_eq!(r.mapping.image(0), &Word::generator(0));
    }

    #[test]
    fn f1_f2_shapes() {
        let triv = FinitePresentation::from_strs(&[], &[]).unwrap();
        let pg = construct_f1_f2(&triv, &OracleChoice::None).unwrap();
        assert_eq!((pg.f1.rank, pg.f2.rank), (2, 3));
        let f = FinitePresentation::from_strs(&["b", "c"], &[]).unwrap();
        let pg = construct_f1_f2(&f, &OracleChoice::None).unwrap();
        assert_eq!(pg.f1.rank, 4);
        let p = &pg.prepared;
        assert_eq!(p.format_word(&pg.f1.words[3]), "a2 s^-1 s^-1 t s s");
        assert_eq!(p.format_word(&pg.f2.words[2]), "x t");
        let k = FinitePresentation::from_strs(&["x", "y"], &["x y x^-1 y"]).unwrap();
        let pg = construct_f1_f2(&k, &OracleChoice::None).unwrap();
        assert_eq!(pg.prepared.generators(), &["x", "y", "x_", "a1", "a2", "s", "t"]);
        assert_eq!((pg.f1.rank, pg.f2.rank), (4, 3));
        assert_eq!(pg.rename_log, vec!["x -> x_".to_string()]);
    }

    #[test]
    fn f1_membership_round_trips() {
        let (p, o) = z2();
        let pg = construct_f1_f2(&p, &o).unwrap();
        let m = pg.f1_membership().unwrap();
        assert!(m.is_exact());
        let oracle = pg.oracle.clone().unwrap();
        let g = &pg.f1.words;
        let samples = [
            vec![(0, 1)],
            vec![(1, 1), (2, -1)],
            vec![(2, 1), (0, 3), (2, 1), (1, -1)],
            vec![(2, -1), (2, -1), (0, -1), (1, 1), (2, 1)],
        ];
        for s in samples {
            let e = Word::from_letters(s.iter().map(|&(j, sgn)| Letter::new(j, sgn < 0)));
            let w = e.substitute(g);
            let got = m.rewrite(&w, 10).unwrap().expect("member");
            assert!(oracle.equal(&got.substitute(g), &w).unwrap());
            assert_eq!(got, e, "free basis gives a unique expression");
        }
        let pp = &pg.prepared;
        for text in ["b", "x", "t", "a1", "s t", "x s t", "b s b"] {
            assert_eq!(m.rewrite(&pp.parse_word(text).unwrap(), 10).unwrap(), None, "{text}");
        }
    }

    #[test]
    fn f2_membership() {
        let (p, o) = z2();
        let pg = construct_f1_f2(&p, &o).unwrap();
        let m = pg.f2_membership().unwrap();
        let pp = &pg.prepared;
        let w = pp.parse_word("x s x^-1 t").unwrap();
        let e = m.rewrite(&w, 4).unwrap().unwrap();
        assert_eq!(e.substitute(&pg.f2.words), w);
        assert_eq!(m.rewrite(&pp.parse_word("b s").unwrap(), 4).unwrap(), None);
        // a1 = x b is not in F(x, s, t)
        assert_eq!(m.rewrite(&pp.parse_word("a1").unwrap(), 4).unwrap(), None);
        assert!(m.rewrite(&pp.parse_word("a1 b").unwrap(), 4).unwrap().is_some());
    }
}
