//! Exact integer linear algebra: Smith normal form, row lattices and first
//! homology of presentations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::words::{strip_comment, FinitePresentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {expected} entries, got {got}")]
    Size { expected: usize, got: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<IntMatrix, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Size { expected: rows * cols, got: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Panics if a row has the wrong length.
    pub fn from_rows_i64(rows: usize, cols: usize, data: &[Vec<i64>]) -> IntMatrix {
        assert_eq!(data.len(), rows);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in data {
            assert_eq!(r.len(), cols, "ragged row");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64(data: &[&[i64]]) -> IntMatrix {
        let cols = data.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = data.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows_i64(data.len(), cols, &owned)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Panics if any entry does not fit.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c) * k;
            self.entries[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src) * k;
            self.entries[r * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    pub fn parse(text: &str) -> Result<IntMatrix, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(MatrixError::Parse { line: 0, message: "empty input".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| MatrixError::Parse { line: hl, message: format!("bad header: {e}") })?;
        let [rows, cols] = dims[..] else {
            return Err(MatrixError::Parse { line: hl, message: "header must be `rows cols`".into() });
        };
        let mut entries = Vec::with_capacity(rows * cols);
        if cols > 0 {
            for _ in 0..rows {
                let (ln, line) = lines
                    .next()
                    .ok_or(MatrixError::Parse { line: hl, message: format!("expected {rows} rows") })?;
                let row: Vec<BigInt> = line
                    .split_whitespace()
                    .map(|t| t.parse::<BigInt>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| MatrixError::Parse { line: ln, message: e.to_string() })?;
                if row.len() != cols {
                    return Err(MatrixError::Parse { line: ln, message: format!("expected {cols} entries") });
                }
                entries.extend(row);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(MatrixError::Parse { line: ln, message: "trailing data".into() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        if self.cols > 0 {
            for r in 0..self.rows {
                let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
                writeln!(f, "{}", cells.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Invariant factors `d_1 | d_2 | ...`, `min(rows, cols)` of them, zeros last.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pr, pc)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..a.rows {
                if !a.get(r, t).is_zero() {
                    let q = -a.get(r, t).div_floor(a.get(t, t));
                    a.add_row_multiple(r, t, &q);
                    dirty |= !a.get(r, t).is_zero();
                }
            }
            for c in t + 1..a.cols {
                if !a.get(t, c).is_zero() {
                    let q = -a.get(t, c).div_floor(a.get(t, t));
                    a.add_col_multiple(c, t, &q);
                    dirty |= !a.get(t, c).is_zero();
                }
            }
            if dirty {
                // a remainder smaller than the pivot survived; re-pivot on it
                let (pr, pc) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pr);
                a.swap_cols(t, pc);
                continue;
            }
            // row and column are clear; enforce divisibility
            let p = a.get(t, t).clone();
            let bad = (t + 1..a.rows).find(|&r| (t + 1..a.cols).any(|c| !a.get(r, c).is_multiple_of(&p)));
            match bad {
                Some(r) => a.add_row_multiple(t, r, &BigInt::one()),
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
    }
    diag.resize(n, BigInt::zero());
    diag
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows {
        for c in t..a.cols {
            let v = a.get(r, c);
            if !v.is_zero() && best.map_or(true, |(br, bc)| v.abs() < a.get(br, bc).abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

// nonzero entries of row t and column t
fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cand = (t..a.rows).map(|r| (r, t)).chain((t..a.cols).map(|c| (t, c)));
    for (r, c) in cand {
        let v = a.get(r, c);
        let b = a.get(best.0, best.1);
        if !v.is_zero() && (b.is_zero() || v.abs() < b.abs()) {
            best = (r, c);
        }
    }
    best
}

/// Lattice spanned by integer row vectors, kept in row echelon form.
#[derive(Clone, Debug)]
pub struct RowLattice {
    dim: usize,
    // (pivot column, row) with strictly increasing pivots and positive pivot entries
    basis: Vec<(usize, Vec<BigInt>)>,
}

impl RowLattice {
    pub fn new(dim: usize) -> RowLattice {
        RowLattice { dim, basis: Vec::new() }
    }

    pub fn from_matrix(m: &IntMatrix) -> RowLattice {
        let mut l = RowLattice::new(m.cols());
        for r in 0..m.rows() {
            l.add(m.row(r).to_vec());
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn add(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim);
        let mut i = 0;
        loop {
            let Some(col) = v.iter().position(|x| !x.is_zero()) else {
                return;
            };
            while i < self.basis.len() && self.basis[i].0 < col {
                i += 1;
            }
            if i == self.basis.len() || self.basis[i].0 > col {
                if v[col].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.basis.insert(i, (col, v));
                return;
            }
            // same pivot column: gcd-combine, the combined row stays, the rest is re-inserted
            let b = &self.basis[i].1;
            let e = b[col].extended_gcd(&v[col]);
            let (bx, vy) = (b[col].clone() / &e.gcd, v[col].clone() / &e.gcd);
            let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(p, q)| &e.x * p + &e.y * q).collect();
            let rest: Vec<BigInt> = b.iter().zip(&v).map(|(p, q)| &vy * p - &bx * q).collect();
            let mut new_b = new_b;
            if new_b[col].is_negative() {
                new_b.iter_mut().for_each(|x| *x = -&*x);
            }
            self.basis[i].1 = new_b;
            v = rest;
            i += 1;
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (col, b) in &self.basis {
            if v[..*col].iter().any(|x| !x.is_zero()) {
                return false;
            }
            if v[*col].is_zero() {
                continue;
            }
            let (q, r) = v[*col].div_rem(&b[*col]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x -= &q * y;
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&big)
    }
}

/// `Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k`, `t_1 | ... | t_k`, each `t_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Renormalises an arbitrary list of cyclic orders to a divisor chain.
    pub fn new(free_rank: usize, orders: &[BigInt]) -> AbelianInvariants {
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, o) in orders.iter().enumerate() {
            m.set(i, i, o.clone());
        }
        let mut free_rank = free_rank;
        let mut torsion = Vec::new();
        for d in smith_normal_form(&m) {
            if d.is_zero() {
                free_rank += 1;
            } else if d > BigInt::one() {
                torsion.push(d);
            }
        }
        AbelianInvariants { free_rank, torsion }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        AbelianInvariants::new(self.free_rank + other.free_rank, &orders)
    }

    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion.iter().map(|t| t.to_i64().expect("torsion fits in i64")).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn h1(p: &FinitePresentation) -> AbelianInvariants {
    let m = p.relation_matrix();
    let factors = smith_normal_form(&m);
    let nonzero = factors.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigInt> = factors.into_iter().filter(|d| *d > BigInt::one()).collect();
    AbelianInvariants { free_rank: p.generator_count() - nonzero, torsion }
}

/// The presentation with `extra` added as relators.
pub fn quotient(p: &FinitePresentation, extra: &[Word]) -> FinitePresentation {
    let mut q = p.clone();
    for w in extra {
        q.add_relator(w.clone()).expect("normal generators lie in the alphabet");
    }
    q
}

/// True only when `P / <<normal_gens>>` provably has infinite abelianisation.
pub fn infinite_quotient_certificate(p: &FinitePresentation, normal_gens: &[Word]) -> bool {
    h1(&quotient(p, normal_gens)).free_rank > 0
}

/// Necessary condition for property FA: finite abelianisation.
pub fn fa_necessary_check(p: &FinitePresentation) -> bool {
    h1(p).free_rank == 0
}

/// Lattice of relator exponent vectors; a word is trivial in H1 iff its
/// exponent vector lies in it.
pub fn relator_lattice(p: &FinitePresentation) -> RowLattice {
    RowLattice::from_matrix(&p.relation_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_i64(rows: &[&[i64]]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_i64(rows)).iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_i64(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(snf_i64(&[&[2, 4], &[6, 8]]), vec![2, 4]);
        assert_eq!(snf_i64(&[&[0, 0, 0], &[0, 0, 0]]), vec![0, 0]);
        assert_eq!(snf_i64(&[&[0, 2]]), vec![2]);
        assert_eq!(snf_i64(&[&[6, 0, 0], &[0, 10, 0], &[0, 0, 15]]), vec![1, 30, 30]);
    }

    #[test]
    fn snf_no_overflow() {
        let big = 1i64 << 40;
        let m = IntMatrix::from_i64(&[&[big, big + 1], &[big - 1, big]]);
        let d = smith_normal_form(&m);
        assert_eq!(d, vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn h1_examples() {
        let k = FinitePresentation::from_strs(&["x", "y"], &["x y x^-1 y"]).unwrap();
        let inv = h1(&k);
        assert_eq!((inv.free_rank, inv.torsion_i64()), (1, vec![2]));
        assert_eq!(inv.to_string(), "Z + Z/2");
        let f = FinitePresentation::from_strs(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(h1(&f).free_rank, 3);
        let t = FinitePresentation::from_strs(&["a"], &["a"]).unwrap();
        assert!(h1(&t).is_trivial());
        assert_eq!(h1(&t).to_string(), "0");
    }

    #[test]
    fn certificates() {
        let f = FinitePresentation::from_strs(&["a", "b"], &[]).unwrap();
        let a = f.parse_word("a").unwrap();
        let b = f.parse_word("b").unwrap();
        assert!(infinite_quotient_certificate(&f, &[a.clone()]));
        assert!(!infinite_quotient_certificate(&f, &[a, b]));
        let k = FinitePresentation::from_strs(&["x", "y"], &["x y x^-1 y"]).unwrap();
        assert!(infinite_quotient_certificate(&k, &[k.parse_word("y").unwrap()]));

        assert!(fa_necessary_check(&FinitePresentation::from_strs(&["a"], &["a a"]).unwrap()));
        assert!(!fa_necessary_check(&f));
    }

    #[test]
    fn renormalises_torsion() {
        let inv = AbelianInvariants::new(0, &[BigInt::from(4), BigInt::from(6), BigInt::from(1)]);
        assert_eq!(inv.torsion_i64(), vec![2, 12]);
        let sum = inv.direct_sum(&AbelianInvariants::new(2, &[BigInt::from(3)]));
        assert_eq!((sum.free_rank, sum.torsion_i64()), (2, vec![6, 12]));
    }

    #[test]
    fn lattice_membership() {
        let l = RowLattice::from_matrix(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert!(l.contains_i64(&[2, 3]));
        assert!(!l.contains_i64(&[1, 1]));
        assert!(l.contains_i64(&[-4, 9]));
        let l = RowLattice::from_matrix(&IntMatrix::from_i64(&[&[4, 6], &[6, 9], &[2, 3]]));
        assert_eq!(l.rank(), 1);
        assert!(l.contains_i64(&[-2, -3]));
        assert!(!l.contains_i64(&[1, 0]));
        let l = RowLattice::from_matrix(&IntMatrix::from_i64(&[&[3, 5], &[5, 8]]));
        assert!(l.contains_i64(&[1, 0]) && l.contains_i64(&[0, 1]));
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, -2, 3], &[0, 4, 5]]);
        assert_eq!(m.to_string(), "2 3\n1 -2 3\n0 4 5\n");
        assert_eq!(IntMatrix::parse(&m.to_string()).unwrap(), m);
        let e = IntMatrix::parse("0 3\n").unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 3));
        assert!(IntMatrix::parse("2 2\n1 2\n").is_err());
        assert!(IntMatrix::parse("1 2\n1 2 3\n").is_err());
        assert!(IntMatrix::parse("1 1\n1\n2\n").is_err());
    }
}
