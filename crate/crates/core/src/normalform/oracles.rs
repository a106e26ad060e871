use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{free_product_normal_form, FactorSplit, OracleError, WordOracle};
use crate::homology::{IntMatrix, RowLattice};
use crate::words::{strip_comment, Alphabet, FinitePresentation, Word};

/// A finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>) -> Result<FiniteGroup, OracleError> {
        let n = table.len();
        let bad = |m: &str| Err(OracleError::Invalid(m.to_string()));
        if n == 0 {
            return bad("empty table");
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table is not square over 0..order");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element");
        };
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse[x] = y,
                None => return bad("element without inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(OracleError::Invalid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(table).expect("cyclic tables are groups")
    }

    /// Closure of the given permutations of `0..degree`. Returns the group and
    /// the element index of each generator. Element 0 is the identity.
    pub fn from_permutations(gens: &[Vec<usize>]) -> (FiniteGroup, Vec<usize>) {
        let degree = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..p.len()).map(|i| q[p[i]]).collect() };
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let x = compose(&elems[i], g);
                if !index.contains_key(&x) {
                    index.insert(x.clone(), elems.len());
                    elems.push(x);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        let inverse = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
        (FiniteGroup { table, identity: 0, inverse }, gen_idx)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Evaluates a word given the images of its generators.
    pub fn evaluate(&self, w: &Word, images: &[usize]) -> usize {
        w.letters().iter().fold(self.identity, |acc, l| {
            let x = images[l.generator()];
            self.mul(acc, if l.is_inverse() { self.inverse[x] } else { x })
        })
    }
}

/// Word problem by evaluation in a finite group.
#[derive(Clone, Debug)]
pub struct FiniteOracle {
    alphabet: Alphabet,
    group: FiniteGroup,
    images: Vec<usize>,
}

impl FiniteOracle {
    pub fn new(alphabet: Alphabet, group: FiniteGroup, images: Vec<usize>) -> Result<FiniteOracle, OracleError> {
        if images.len() != alphabet.len() {
            return Err(OracleError::Invalid(format!(
                "{} generator images for {} generators",
                images.len(),
                alphabet.len()
            )));
        }
        if images.iter().any(|&x| x >= group.order()) {
            return Err(OracleError::Invalid("generator image outside the table".into()));
        }
        Ok(FiniteOracle { alphabet, group, images })
    }

    /// Parses `table:` rows and `generator: <name> <element>` lines.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<FiniteOracle, OracleError> {
        let mut rows = Vec::new();
        let mut images: Vec<Option<usize>> = vec![None; alphabet.len()];
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| OracleError::Invalid(format!("line {}: {m}", i + 1));
            if let Some(rest) = line.strip_prefix("table:") {
                let row: Vec<usize> =
                    rest.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|e| err(format!("{e}")))?;
                rows.push(row);
            } else if let Some(rest) = line.strip_prefix("generator:") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [name, elem] = toks[..] else {
                    return Err(err("expected `generator: <name> <element>`".into()));
                };
                let g = alphabet.index_of(name).ok_or_else(|| err(format!("unknown generator `{name}`")))?;
                images[g] = Some(elem.parse().map_err(|e| err(format!("{e}")))?);
            } else {
                return Err(err(format!("unrecognised line `{line}`")));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(g, x)| x.ok_or_else(|| OracleError::Invalid(format!("generator `{}` unassigned", alphabet.name(g)))))
            .collect::<Result<Vec<_>, _>>()?;
        FiniteOracle::new(alphabet.clone(), FiniteGroup::new(rows)?, images)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn evaluate(&self, w: &Word) -> usize {
        self.group.evaluate(w, &self.images)
    }
}

impl WordOracle for FiniteOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        self.alphabet.check_word(w).map_err(|e| OracleError::Invalid(e.to_string()))?;
        Ok(self.evaluate(w) == self.group.identity())
    }
}

/// Word problem of a free group: free reduction.
#[derive(Clone, Debug)]
pub struct FreeOracle {
    alphabet: Alphabet,
}

impl FreeOracle {
    pub fn new(p: &FinitePresentation) -> Result<FreeOracle, OracleError> {
        if !p.is_free() {
            return Err(OracleError::Invalid("free oracle needs a presentation without relators".into()));
        }
        Ok(FreeOracle { alphabet: p.alphabet().clone() })
    }

    pub fn on(alphabet: Alphabet) -> FreeOracle {
        FreeOracle { alphabet }
    }
}

impl WordOracle for FreeOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(w.is_empty())
    }
}

/// Word problem of the abelian group `Z^n / rowspace(M)`.
#[derive(Clone, Debug)]
pub struct AbelianOracle {
    alphabet: Alphabet,
    lattice: RowLattice,
}

impl AbelianOracle {
    pub fn new(relations: &IntMatrix, alphabet: Alphabet) -> Result<AbelianOracle, OracleError> {
        if relations.cols() != alphabet.len() {
            return Err(OracleError::Invalid(format!(
                "matrix has {} columns for {} generators",
                relations.cols(),
                alphabet.len()
            )));
        }
        Ok(AbelianOracle { alphabet, lattice: RowLattice::from_matrix(relations) })
    }
}

impl WordOracle for AbelianOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        let v: Vec<BigInt> = w.exponent_sums(self.alphabet.len()).into_iter().map(BigInt::from).collect();
        Ok(self.lattice.contains(&v))
    }
}

/// Pulls an oracle back along generator images: `w` is trivial iff its image is.
pub struct MappedOracle {
    alphabet: Alphabet,
    images: Vec<Word>,
    inner: Arc<dyn WordOracle>,
}

impl MappedOracle {
    pub fn new(alphabet: Alphabet, images: Vec<Word>, inner: Arc<dyn WordOracle>) -> Result<MappedOracle, OracleError> {
        if images.len() != alphabet.len() {
            return Err(OracleError::Invalid("one image per generator required".into()));
        }
        Ok(MappedOracle { alphabet, images, inner })
    }

    pub fn map(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn inner(&self) -> &Arc<dyn WordOracle> {
        &self.inner
    }
}

impl WordOracle for MappedOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        self.inner.is_trivial(&self.map(w))
    }
}

/// Word problem of a free product via its normal form.
pub struct FreeProductOracle {
    alphabet: Alphabet,
    split: FactorSplit,
}

impl FreeProductOracle {
    pub fn new(alphabet: Alphabet, split: FactorSplit) -> FreeProductOracle {
        FreeProductOracle { alphabet, split }
    }

    pub fn split(&self) -> &FactorSplit {
        &self.split
    }
}

impl WordOracle for FreeProductOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(free_product_normal_form(w, &self.split)?.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_examples() {
        let a = Alphabet::new(&["b"]).unwrap();
        let o = FiniteOracle::new(a.clone(), FiniteGroup::cyclic(2), vec![1]).unwrap();
        assert!(o.is_trivial(&a.parse_word("b b").unwrap()).unwrap());
        assert!(!o.is_trivial(&a.parse_word("b").unwrap()).unwrap());

        let (s3, idx) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(s3.order(), 6);
        let a = Alphabet::new(&["r", "c"]).unwrap();
        let o = FiniteOracle::new(a.clone(), s3, idx).unwrap();
        let w = a.parse_word("r r r").unwrap();
        assert!(!o.is_trivial(&w).unwrap());
        assert!(o.equal(&w, &a.parse_word("r").unwrap()).unwrap());
        assert!(o.is_trivial(&a.parse_word("c c c").unwrap()).unwrap());
    }

    #[test]
    fn finite_table_validation() {
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::new(vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]]).is_err());
        // a Latin square with identity that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::new(t).is_err());
    }

    #[test]
    fn finite_file_format() {
        let a = Alphabet::new(&["b"]).unwrap();
        let o = FiniteOracle::parse("# Z/2\ntable: 0 1\ntable: 1 0\ngenerator: b 1\n", &a).unwrap();
        assert_eq!(o.group().order(), 2);
        assert!(FiniteOracle::parse("table: 0 1\ntable: 1 0\n", &a).is_err());
        assert!(FiniteOracle::parse("table: 0 1\ntable: 1 0\ngenerator: c 1\n", &a).is_err());
    }

    #[test]
    fn free_and_abelian_examples() {
        let st = FinitePresentation::from_strs(&["s", "t"], &[]).unwrap();
        let f = FreeOracle::new(&st).unwrap();
        assert!(!f.is_trivial(&st.parse_word("s t s^-1").unwrap()).unwrap());
        assert!(f.is_trivial(&st.parse_word("s s^-1").unwrap()).unwrap());
        assert!(f.is_trivial(&Word::identity()).unwrap());
        assert!(FreeOracle::new(&FinitePresentation::from_strs(&["a"], &["a"]).unwrap()).is_err());

        let a = Alphabet::new(&["a", "b"]).unwrap();
        let o = AbelianOracle::new(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), a.clone()).unwrap();
        assert!(o.is_trivial(&a.parse_word("a a b b b").unwrap()).unwrap());
        assert!(!o.is_trivial(&a.parse_word("a b").unwrap()).unwrap());
        let o = AbelianOracle::new(&IntMatrix::zeros(0, 2), a.clone()).unwrap();
        assert!(o.is_trivial(&a.parse_word("a b a^-1 b^-1").unwrap()).unwrap());
    }
}
