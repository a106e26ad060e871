//! Free-group words, alphabets and finite presentations.
//!
//! A [`Word`] is a freely reduced sequence of [`Letter`]s. Letters refer to
//! generators by index, so a word only acquires symbol names through an
//! [`Alphabet`]. Every constructor reduces its input, which means a `Word`
//! value is always freely reduced.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::homology::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("exponent must be +1 or -1, got {0}")]
    BadExponent(i32),
    #[error("generator index {index} outside alphabet of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("mapping has {got} images for an alphabet of size {expected}")]
    MappingSize { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A generator or its inverse, stored as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        let v = generator as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn positive(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn exponent(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn raw(self) -> i32 {
        self.0
    }
}

impl Ord for Letter {
    // a < a^-1 < b < b^-1 < ...
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.generator(), self.is_inverse()).cmp(&(other.generator(), other.is_inverse()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![Letter::positive(g)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last == l.inverse() => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Builds `g^power` for one generator.
    pub fn power_of(g: usize, power: i64) -> Word {
        let l = Letter::new(g, power < 0);
        Word(vec![l; power.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        // cancellation only happens at the seam
        let mut k = 0;
        while k < self.len() && k < other.len() && self.0[self.len() - 1 - k] == other.0[k].inverse() {
            k += 1;
        }
        let mut v = Vec::with_capacity(self.len() + other.len() - 2 * k);
        v.extend_from_slice(&self.0[..self.len() - k]);
        v.extend_from_slice(&other.0[k..]);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `self^-1 · other · self`
    pub fn conjugate(&self, other: &Word) -> Word {
        self.inverse().mul(other).mul(self)
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `w = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[k..n - k].to_vec()), Word(self.0[..k].to_vec()))
    }

    /// Replaces every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut acc = Word::identity();
        for l in &self.0 {
            let img = &images[l.generator()];
            acc = if l.is_inverse() { acc.mul(&img.inverse()) } else { acc.mul(img) };
        }
        acc
    }

    /// Renumbers generators through `map` (no reduction can occur when `map` is injective).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Word {
        Word::from_letters(self.0.iter().map(|l| Letter::new(map(l.generator()), l.is_inverse())))
    }

    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.0.iter().filter(|l| l.generator() == g).map(|l| l.exponent() as i64).sum()
    }

    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.0 {
            v[l.generator()] += l.exponent() as i64;
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Representative of the class of a cyclically reduced word under rotation
    /// and inversion. Used to deduplicate relators.
    pub fn cyclic_key(&self) -> Vec<i32> {
        let (core, _) = self.cyclically_reduce();
        let mut best: Option<Vec<i32>> = None;
        for w in [core.clone(), core.inverse()] {
            let raw: Vec<i32> = w.0.iter().map(|l| l.raw()).collect();
            let n = raw.len();
            for r in 0..n.max(1) {
                let rot: Vec<i32> = (0..n).map(|i| raw[(i + r) % n]).collect();
                if best.as_ref().map_or(true, |b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.unwrap_or_default()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::from_letters(iter)
    }
}

/// An ordered list of distinct generator names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, WordError> {
        let mut a = Alphabet::default();
        for n in names {
            a.push(n.as_ref())?;
        }
        Ok(a)
    }

    pub fn push(&mut self, name: &str) -> Result<usize, WordError> {
        if !is_valid_name(name) {
            return Err(WordError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(WordError::DuplicateName(name.to_string()));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// `base`, or `base` followed by as many underscores as needed to be unused.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut candidate = base.to_string();
        while self.contains(&candidate) {
            candidate.push('_');
        }
        candidate
    }

    /// Signed symbols (exponent ±1) to a reduced word.
    pub fn reduce(&self, raw: &[(&str, i32)]) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(raw.len());
        for &(sym, e) in raw {
            let g = self.index_of(sym).ok_or_else(|| WordError::UnknownSymbol(sym.to_string()))?;
            if e != 1 && e != -1 {
                return Err(WordError::BadExponent(e));
            }
            letters.push(Letter::new(g, e < 0));
        }
        Ok(Word::from_letters(letters))
    }

    /// Parses space-separated tokens `g` or `g^-1`.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (sym, inv) = match tok.strip_suffix("^-1") {
                Some(s) => (s, true),
                None => (tok, false),
            };
            let g = self.index_of(sym).ok_or_else(|| WordError::UnknownSymbol(tok.to_string()))?;
            letters.push(Letter::new(g, inv));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|l| {
                let n = self.name(l.generator());
                if l.is_inverse() { format!("{n}^-1") } else { n.to_string() }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check_word(&self, w: &Word) -> Result<(), WordError> {
        match w.max_generator() {
            Some(g) if g >= self.len() => Err(WordError::IndexOutOfRange { index: g, size: self.len() }),
            _ => Ok(()),
        }
    }
}

/// Generators plus relators. Relators are stored cyclically reduced and are
/// deduplicated up to rotation and inversion, keeping the first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<FinitePresentation, WordError> {
        let mut p = FinitePresentation { alphabet, relators: Vec::new() };
        for r in relators {
            p.add_relator(r)?;
        }
        Ok(p)
    }

    pub fn free(alphabet: Alphabet) -> FinitePresentation {
        FinitePresentation { alphabet, relators: Vec::new() }
    }

    /// Convenience constructor from names and relator strings.
    pub fn from_strs(gens: &[&str], relators: &[&str]) -> Result<FinitePresentation, WordError> {
        let alphabet = Alphabet::new(gens)?;
        let rels = relators.iter().map(|r| alphabet.parse_word(r)).collect::<Result<Vec<_>, _>>()?;
        FinitePresentation::new(alphabet, rels)
    }

    /// Appends a relator; returns false if it duplicated an existing one.
    pub fn add_relator(&mut self, r: Word) -> Result<bool, WordError> {
        self.alphabet.check_word(&r)?;
        let (core, _) = r.cyclically_reduce();
        let key = core.cyclic_key();
        if self.relators.iter().any(|q| q.cyclic_key() == key) {
            return Ok(false);
        }
        self.relators.push(core);
        Ok(true)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[String] {
        self.alphabet.names()
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        self.alphabet.parse_word(text)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }

    /// One row per relator, one column per generator: exponent sums.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(n)).collect();
        IntMatrix::from_rows_i64(self.relators.len(), n, &rows)
    }

    /// Parses the line-oriented text format.
    pub fn parse(text: &str) -> Result<FinitePresentation, WordError> {
        Self::parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    pub(crate) fn parse_lines<'a>(
        lines: impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<FinitePresentation, WordError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in lines {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| WordError::Parse { line: lineno, message };
            if let Some(rest) = line.strip_prefix("generators:") {
                if alphabet.is_some() {
                    return Err(err("second `generators:` line".into()));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                alphabet = Some(Alphabet::new(&names).map_err(|e| err(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("relator:") {
                let a = alphabet.as_ref().ok_or_else(|| err("`relator:` before `generators:`".into()))?;
                relators.push(a.parse_word(rest).map_err(|e| err(e.to_string()))?);
            } else {
                return Err(err(format!("unrecognised line `{line}`")));
            }
        }
        let alphabet = alphabet.ok_or(WordError::Parse { line: 0, message: "missing `generators:` line".into() })?;
        FinitePresentation::new(alphabet, relators)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.alphabet.names().join(" "))?;
        for r in &self.relators {
            let body = self.alphabet.format_word(r);
            if body.is_empty() {
                writeln!(f, "relator:")?;
            } else {
                writeln!(f, "relator: {body}")?;
            }
        }
        Ok(())
    }
}

/// A homomorphism from the free group on `source` into the group on `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMapping {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl GeneratorMapping {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<GeneratorMapping, WordError> {
        if images.len() != source.len() {
            return Err(WordError::MappingSize { expected: source.len(), got: images.len() });
        }
        for w in &images {
            target.check_word(w)?;
        }
        Ok(GeneratorMapping { source, target, images })
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &Word {
        &self.images[g]
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        self.source.check_word(w)?;
        Ok(w.substitute(&self.images))
    }
}

/// Which operand a renamed generator came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rename {
    pub side: Side,
    pub from: String,
    pub to: String,
}

/// Result of [`free_product`]: left generators keep their indices, right
/// generators are shifted by the size of the left alphabet.
#[derive(Clone, Debug)]
pub struct FreeProduct {
    pub presentation: FinitePresentation,
    pub offset: usize,
    pub renames: Vec<Rename>,
}

impl FreeProduct {
    pub fn embed_left(&self, w: &Word) -> Word {
        w.clone()
    }

    pub fn embed_right(&self, w: &Word) -> Word {
        let off = self.offset;
        w.relabel(|g| g + off)
    }
}

/// `P ∗ Q`. Names occurring in both alphabets get `_1` (left) and `_2` (right)
/// suffixes, extended with underscores if that still clashes.
pub fn free_product(p: &FinitePresentation, q: &FinitePresentation) -> FreeProduct {
    let left: HashSet<&str> = p.generators().iter().map(String::as_str).collect();
    let right: HashSet<&str> = q.generators().iter().map(String::as_str).collect();
    let all: HashSet<&str> = left.union(&right).copied().collect();
    let mut used: HashSet<String> = all.iter().map(|s| s.to_string()).collect();
    let mut renames = Vec::new();
    let mut pick = |name: &str, suffix: &str, side: Side, renames: &mut Vec<Rename>| -> String {
        let mut candidate = format!("{name}{suffix}");
        while used.contains(&candidate) {
            candidate.push('_');
        }
        used.insert(candidate.clone());
        renames.push(Rename { side, from: name.to_string(), to: candidate.clone() });
        candidate
    };
    let mut names = Vec::with_capacity(p.generator_count() + q.generator_count());
    for n in p.generators() {
        if right.contains(n.as_str()) {
            names.push(pick(n, "_1", Side::Left, &mut renames));
        } else {
            names.push(n.clone());
        }
    }
    for n in q.generators() {
        if left.contains(n.as_str()) {
            names.push(pick(n, "_2", Side::Right, &mut renames));
        } else {
            names.push(n.clone());
        }
    }
    let alphabet = Alphabet::new(&names).expect("renamed alphabet is duplicate-free");
    let offset = p.generator_count();
    let mut relators: Vec<Word> = p.relators().to_vec();
    relators.extend(q.relators().iter().map(|r| r.relabel(|g| g + offset)));
    let presentation = FinitePresentation::new(alphabet, relators).expect("relators lie in the union alphabet");
    FreeProduct { presentation, offset, renames }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a = ab();
        let w = a.reduce(&[("a", 1), ("a", -1), ("b", 1)]).unwrap();
        assert_eq!(a.format_word(&w), "b");
        assert!(a.reduce(&[]).unwrap().is_empty());
        let w = a.reduce(&[("a", 1), ("b", 1), ("b", -1), ("a", 1)]).unwrap();
        assert_eq!(a.format_word(&w), "a a");
        assert_eq!(a.reduce(&[("c", 1)]), Err(WordError::UnknownSymbol("c".into())));
        assert_eq!(a.reduce(&[("a", 2)]), Err(WordError::BadExponent(2)));
    }

    #[test]
    fn cyclic_reduction_examples() {
        let a = ab();
        let (core, conj) = a.parse_word("a b a^-1").unwrap().cyclically_reduce();
        assert_eq!((a.format_word(&core), a.format_word(&conj)), ("b".into(), "a".into()));
        let (core, conj) = a.parse_word("b a b").unwrap().cyclically_reduce();
        assert_eq!((a.format_word(&core), conj.len()), ("b a b".into(), 0));
        let (core, conj) = a.parse_word("a^-1 b b a").unwrap().cyclically_reduce();
        assert_eq!((a.format_word(&core), a.format_word(&conj)), ("b b".into(), "a^-1".into()));
    }

    #[test]
    fn apply_map_examples() {
        let src = Alphabet::new(&["a1"]).unwrap();
        let tgt = Alphabet::new(&["x", "b1"]).unwrap();
        let m = GeneratorMapping::new(src.clone(), tgt.clone(), vec![tgt.parse_word("x b1").unwrap()]).unwrap();
        assert_eq!(tgt.format_word(&m.apply(&src.parse_word("a1").unwrap()).unwrap()), "x b1");
        assert!(m.apply(&Word::identity()).unwrap().is_empty());
        assert!(m.apply(&src.parse_word("a1 a1^-1").unwrap()).unwrap().is_empty());
        assert!(m.apply(&Word::generator(3)).is_err());
    }

    #[test]
    fn free_product_examples() {
        let x = FinitePresentation::from_strs(&["x"], &[]).unwrap();
        let st = FinitePresentation::from_strs(&["s", "t"], &[]).unwrap();
        let fp = free_product(&x, &st);
        assert_eq!(fp.presentation.to_string(), "generators: x s t\n");

        let b = FinitePresentation::from_strs(&["b"], &["b b"]).unwrap();
        assert_eq!(free_product(&b, &x).presentation.to_string(), "generators: b x\nrelator: b b\n");

        let g = FinitePresentation::from_strs(&["x", "y"], &["x y x^-1 y"]).unwrap();
        assert_eq!(
            free_product(&g, &st).presentation.to_string(),
            "generators: x y s t\nrelator: x y x^-1 y\n"
        );
    }

    #[test]
    fn free_product_renames_clashes() {
        let p = FinitePresentation::from_strs(&["x", "y"], &["x y"]).unwrap();
        let q = FinitePresentation::from_strs(&["x", "x_2"], &["x x_2"]).unwrap();
        let fp = free_product(&p, &q);
        assert_eq!(fp.presentation.generators(), &["x_1", "y", "x_2_", "x_2"]);
        assert_eq!(fp.renames.len(), 2);
        assert_eq!(fp.presentation.format_word(&fp.presentation.relators()[1]), "x_2_ x_2");
    }

    #[test]
    fn relation_matrix_examples() {
        let g = FinitePresentation::from_strs(&["x", "y"], &["x y x^-1 y"]).unwrap();
        assert_eq!(g.relation_matrix().to_i64_rows(), vec![vec![0, 2]]);
        let f = FinitePresentation::from_strs(&["a"], &[]).unwrap();
        let m = f.relation_matrix();
        assert_eq!((m.rows(), m.cols()), (0, 1));
        let h = FinitePresentation::from_strs(&["a", "b"], &["a a", "b b b"]).unwrap();
        assert_eq!(h.relation_matrix().to_i64_rows(), vec![vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn relators_are_normalised_and_deduplicated() {
        let p = FinitePresentation::from_strs(&["a", "b"], &["b a b b^-1", "b a", "a^-1 b^-1", ""]).unwrap();
        // b a b b^-1 = b a; rotation a b and inverse a^-1 b^-1 are duplicates
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.to_string(), "generators: a b\nrelator: b a\nrelator:\n");
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let text = "# demo\ngenerators: x y\n\nrelator: x y x^-1 y  # Klein bottle\n";
        let p = FinitePresentation::parse(text).unwrap();
        assert_eq!(FinitePresentation::parse(&p.to_string()).unwrap(), p);
        assert!(FinitePresentation::parse("relator: x\n").is_err());
        assert!(FinitePresentation::parse("generators: x\nrelator: z\n").is_err());
        assert!(FinitePresentation::parse("generators: x-y\n").is_err());
        assert!(FinitePresentation::parse("generators: x x\n").is_err());
        assert!(FinitePresentation::parse("gens: x\n").is_err());
    }

    #[test]
    fn fresh_names() {
        let a = Alphabet::new(&["x", "x_"]).unwrap();
        assert_eq!(a.fresh_name("x"), "x__");
        assert_eq!(a.fresh_name("s"), "s");
    }
}
