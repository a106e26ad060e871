//! Folded core graphs of finitely generated subgroups of free groups.
//!
//! Besides the usual fold-and-trace membership test, every edge carries a
//! *tag*: a word in the original generating set. Tags are maintained through
//! folding so that reading a closed path at the basepoint and multiplying the
//! tags gives an expression of the path label in the generators that were
//! supplied, not only in the spanning-tree basis.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::words::{Alphabet, Letter, Word};

/// Hard cap on the number of vertices of an unfolded graph.
pub const MAX_VERTICES: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StallingsError {
    #[error("graph would need {0} vertices (limit {MAX_VERTICES})")]
    TooLarge(usize),
    #[error("generator {index} uses letter outside an ambient alphabet of rank {rank}")]
    OutsideAmbient { index: usize, rank: usize },
}

/// A word in a chosen free basis: letter `i` is basis element `i`.
pub type BasisExpression = Word;

#[derive(Clone, Debug)]
struct RawEdge {
    src: usize,
    dst: usize,
    gen: usize,
    tag: Word,
    alive: bool,
}

struct Folder {
    edges: Vec<RawEdge>,
    incident: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

impl Folder {
    fn other_end(&self, e: usize, at: usize, l: Letter) -> usize {
        let ed = &self.edges[e];
        if l.is_inverse() {
            debug_assert_eq!(ed.dst, at);
            ed.src
        } else {
            debug_assert_eq!(ed.src, at);
            ed.dst
        }
    }

    fn directed_tag(&self, e: usize, l: Letter) -> Word {
        if l.is_inverse() { self.edges[e].tag.inverse() } else { self.edges[e].tag.clone() }
    }

    fn gauge(&mut self, x: usize, d: &Word) {
        if d.is_empty() {
            return;
        }
        let dinv = d.inverse();
        for &e in &self.incident[x] {
            let ed = &mut self.edges[e];
            if !ed.alive {
                continue;
            }
            if ed.src == x {
                ed.tag = d.mul(&ed.tag);
            }
            if ed.dst == x {
                ed.tag = ed.tag.mul(&dinv);
            }
        }
    }

    fn merge(&mut self, gone: usize, keep: usize) {
        let moved = std::mem::take(&mut self.incident[gone]);
        for &e in &moved {
            let ed = &mut self.edges[e];
            if ed.src == gone {
                ed.src = keep;
            }
            if ed.dst == gone {
                ed.dst = keep;
            }
        }
        let list = &mut self.incident[keep];
        list.extend(moved);
        list.sort_unstable();
        list.dedup();
        self.alive[gone] = false;
    }

    fn degree(&self, v: usize) -> usize {
        self.incident[v]
            .iter()
            .filter(|&&e| self.edges[e].alive)
            .map(|&e| if self.edges[e].src == self.edges[e].dst { 2 } else { 1 })
            .sum()
    }

    /// Finds two live half-edges at `u` with the same letter.
    fn conflict_at(&mut self, u: usize) -> Option<(Letter, usize, usize)> {
        let edges = &self.edges;
        self.incident[u].retain(|&e| edges[e].alive);
        let mut seen: std::collections::HashMap<Letter, usize> = std::collections::HashMap::new();
        for &e in &self.incident[u] {
            let ed = &self.edges[e];
            let mut letters = Vec::with_capacity(2);
            if ed.src == u {
                letters.push(Letter::new(ed.gen, false));
            }
            if ed.dst == u {
                letters.push(Letter::new(ed.gen, true));
            }
            for l in letters {
                if let Some(&e1) = seen.get(&l) {
                    if e1 != e {
                        return Some((l, e1, e));
                    }
                } else {
                    seen.insert(l, e);
                }
            }
        }
        None
    }
}

/// Folded, trimmed, canonically numbered subgroup graph. Vertex 0 is the basepoint.
#[derive(Clone, Debug)]
pub struct StallingsGraph {
    rank_ambient: usize,
    generator_count: usize,
    vertices: usize,
    // (src, dst, gen), sorted by (src, gen)
    edges: Vec<(usize, usize, usize)>,
    tags: Vec<Word>,
    // adjacency[v][2*gen + inverse] = (target, edge)
    adjacency: Vec<Vec<Option<(usize, usize)>>>,
    tree_parent: Vec<Option<usize>>,
    tree_label: Vec<Word>,
    tree_tag: Vec<Word>,
    basis: Vec<usize>,
    basis_index: Vec<Option<usize>>,
    redundant: usize,
}

fn slot(l: Letter) -> usize {
    2 * l.generator() + l.is_inverse() as usize
}

impl StallingsGraph {
    /// Folds the wedge of the generator loops. `ambient_rank` is the number of
    /// free generators of the ambient group.
    pub fn from_generators(gens: &[Word], ambient_rank: usize) -> Result<StallingsGraph, StallingsError> {
        Self::from_generators_with(gens, ambient_rank, &mut |n| n - 1)
    }

    /// As [`from_generators`](Self::from_generators), with `pick(n)` choosing
    /// which of the `n` pending vertices to examine next. The result does not
    /// depend on the choice.
    pub fn from_generators_with(
        gens: &[Word],
        ambient_rank: usize,
        pick: &mut dyn FnMut(usize) -> usize,
    ) -> Result<StallingsGraph, StallingsError> {
        let total: usize = 1 + gens.iter().map(|w| w.len().saturating_sub(1)).sum::<usize>();
        if total > MAX_VERTICES {
            return Err(StallingsError::TooLarge(total));
        }
        let mut f = Folder { edges: Vec::new(), incident: vec![Vec::new()], alive: vec![true] };
        for (i, w) in gens.iter().enumerate() {
            if w.max_generator().is_some_and(|g| g >= ambient_rank) {
                return Err(StallingsError::OutsideAmbient { index: i, rank: ambient_rank });
            }
            let n = w.len();
            let mut prev = 0;
            for (j, &l) in w.letters().iter().enumerate() {
                let next = if j + 1 == n {
                    0
                } else {
                    f.incident.push(Vec::new());
                    f.alive.push(true);
                    f.incident.len() - 1
                };
                let tag = if j == 0 { Word::generator(i) } else { Word::identity() };
                let (src, dst, tag) = if l.is_inverse() { (next, prev, tag.inverse()) } else { (prev, next, tag) };
                let e = f.edges.len();
                f.edges.push(RawEdge { src, dst, gen: l.generator(), tag, alive: true });
                f.incident[src].push(e);
                if dst != src {
                    f.incident[dst].push(e);
                }
                prev = next;
            }
        }

        let mut redundant = 0;
        let mut pending: Vec<usize> = (0..f.incident.len()).collect();
        while !pending.is_empty() {
            let k = pick(pending.len()).min(pending.len() - 1);
            let u = pending.swap_remove(k);
            if !f.alive[u] {
                continue;
            }
            let Some((l, e1, e2)) = f.conflict_at(u) else {
                continue;
            };
            let t1 = f.other_end(e1, u, l);
            let t2 = f.other_end(e2, u, l);
            let rho = f.directed_tag(e1, l);
            let sigma = f.directed_tag(e2, l);
            if t1 == t2 {
                // parallel edges; distinct tags mean a relation among the generators
                if rho != sigma {
                    redundant += 1;
                }
                f.edges[e2].alive = false;
            } else {
                let merge_t2 = if t2 == 0 {
                    false
                } else if t1 == 0 {
                    true
                } else {
                    f.degree(t2) <= f.degree(t1)
                };
                if merge_t2 {
                    let d = rho.inverse().mul(&sigma);
                    f.gauge(t2, &d);
                    f.merge(t2, t1);
                    pending.push(t1);
                } else {
                    let d = sigma.inverse().mul(&rho);
                    f.gauge(t1, &d);
                    f.merge(t1, t2);
                    pending.push(t2);
                }
                // the two edges now coincide; the next visit to u removes one
            }
            pending.push(u);
        }

        // trim hanging trees
        let mut queue: Vec<usize> = (1..f.incident.len()).filter(|&v| f.alive[v]).collect();
        while let Some(v) = queue.pop() {
            if !f.alive[v] || f.degree(v) > 1 {
                continue;
            }
            for &e in &f.incident[v].clone() {
                if f.edges[e].alive {
                    f.edges[e].alive = false;
                    let o = if f.edges[e].src == v { f.edges[e].dst } else { f.edges[e].src };
                    if o != 0 {
                        queue.push(o);
                    }
                }
            }
            f.alive[v] = false;
        }

        Ok(Self::canonical(f, ambient_rank, gens.len(), redundant))
    }

    fn canonical(f: Folder, rank_ambient: usize, generator_count: usize, redundant: usize) -> StallingsGraph {
        let old_n = f.incident.len();
        let mut old_adj: Vec<Vec<Option<usize>>> = vec![vec![None; 2 * rank_ambient]; old_n];
        for (e, ed) in f.edges.iter().enumerate() {
            if ed.alive {
                old_adj[ed.src][2 * ed.gen] = Some(e);
                old_adj[ed.dst][2 * ed.gen + 1] = Some(e);
            }
        }
        let mut new_id = vec![usize::MAX; old_n];
        let mut order = vec![0usize];
        new_id[0] = 0;
        let mut q = VecDeque::from([0usize]);
        while let Some(v) = q.pop_front() {
            for s in 0..2 * rank_ambient {
                if let Some(e) = old_adj[v][s] {
                    let ed = &f.edges[e];
                    let w = if s % 2 == 0 { ed.dst } else { ed.src };
                    if new_id[w] == usize::MAX {
                        new_id[w] = order.len();
                        order.push(w);
                        q.push_back(w);
                    }
                }
            }
        }
        let vertices = order.len();
        let mut raw: Vec<(usize, usize, usize, Word)> = f
            .edges
            .into_iter()
            .filter(|e| e.alive)
            .map(|e| (new_id[e.src], new_id[e.dst], e.gen, e.tag))
            .collect();
        raw.sort_by_key(|e| (e.0, e.2));
        let edges: Vec<(usize, usize, usize)> = raw.iter().map(|e| (e.0, e.1, e.2)).collect();
        let tags: Vec<Word> = raw.into_iter().map(|e| e.3).collect();
        let mut adjacency = vec![vec![None; 2 * rank_ambient]; vertices];
        for (i, &(s, d, g)) in edges.iter().enumerate() {
            adjacency[s][2 * g] = Some((d, i));
            adjacency[d][2 * g + 1] = Some((s, i));
        }

        // BFS spanning tree in the same canonical order
        let mut tree_parent = vec![None; vertices];
        let mut tree_label = vec![Word::identity(); vertices];
        let mut tree_tag = vec![Word::identity(); vertices];
        let mut seen = vec![false; vertices];
        let mut in_tree = vec![false; edges.len()];
        seen[0] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(v) = q.pop_front() {
            for s in 0..2 * rank_ambient {
                if let Some((w, e)) = adjacency[v][s] {
                    if !seen[w] {
                        seen[w] = true;
                        in_tree[e] = true;
                        tree_parent[w] = Some(e);
                        let l = Letter::new(s / 2, s % 2 == 1);
                        tree_label[w] = tree_label[v].mul(&Word::letter(l));
                        let t = if l.is_inverse() { tags[e].inverse() } else { tags[e].clone() };
                        tree_tag[w] = tree_tag[v].mul(&t);
                        q.push_back(w);
                    }
                }
            }
        }
        let basis: Vec<usize> = (0..edges.len()).filter(|&e| !in_tree[e]).collect();
        let mut basis_index = vec![None; edges.len()];
        for (i, &e) in basis.iter().enumerate() {
            basis_index[e] = Some(i);
        }
        StallingsGraph {
            rank_ambient,
            generator_count,
            vertices,
            edges,
            tags,
            adjacency,
            tree_parent,
            tree_label,
            tree_tag,
            basis,
            basis_index,
            redundant,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank_ambient
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Number of supplied generators.
    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    /// True when the supplied generators (all nontrivial) form a free basis.
    pub fn generators_are_free_basis(&self) -> bool {
        self.rank() == self.generator_count
    }

    /// Relations detected among the supplied generators while folding.
    pub fn redundancies_found(&self) -> usize {
        self.redundant
    }

    /// Endpoint of reading `w` from `start`, if the path exists.
    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        let mut v = start;
        for &l in w.letters() {
            v = self.adjacency[v].get(slot(l))?.as_ref()?.0;
        }
        Some(v)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == Some(0)
    }

    /// Free basis read off the spanning tree: one element per non-tree edge.
    pub fn basis_words(&self) -> Vec<Word> {
        self.basis
            .iter()
            .map(|&e| {
                let (s, d, g) = self.edges[e];
                self.tree_label[s].mul(&Word::generator(g)).mul(&self.tree_label[d].inverse())
            })
            .collect()
    }

    /// Expression of `w` in [`basis_words`](Self::basis_words), if `w` is in the subgroup.
    pub fn membership(&self, w: &Word) -> Option<BasisExpression> {
        let mut v = 0;
        let mut out = Vec::new();
        for &l in w.letters() {
            let (to, e) = self.adjacency[v].get(slot(l))?.as_ref().copied()?;
            if let Some(b) = self.basis_index[e] {
                out.push(Letter::new(b, l.is_inverse()));
            }
            v = to;
        }
        (v == 0).then(|| Word::from_letters(out))
    }

    /// Expression of `w` as a word in the supplied generators, if `w` is in the subgroup.
    pub fn express(&self, w: &Word) -> Option<Word> {
        let mut v = 0;
        let mut acc = Word::identity();
        for &l in w.letters() {
            let (to, e) = self.adjacency[v].get(slot(l))?.as_ref().copied()?;
            let t = if l.is_inverse() { self.tags[e].inverse() } else { self.tags[e].clone() };
            acc = acc.mul(&t);
            v = to;
        }
        (v == 0).then_some(acc)
    }

    /// Label of the tree path from the basepoint to `v`.
    pub fn tree_path(&self, v: usize) -> &Word {
        &self.tree_label[v]
    }

    /// Returns `None` iff the subgroup is malnormal in the ambient free group.
    ///
    /// Components of the fiber product with itself are explored in vertex
    /// order; the first non-diagonal component containing a cycle yields the
    /// witness.
    pub fn malnormality_witness(&self) -> Option<MalnormalityWitness> {
        let n = self.vertices;
        let mut comp_seen = vec![false; n * n];
        for u0 in 0..n {
            for v0 in 0..n {
                if u0 == v0 || comp_seen[u0 * n + v0] {
                    continue;
                }
                // BFS the component; first non-tree edge found gives a cycle
                let mut parent: std::collections::HashMap<(usize, usize), ((usize, usize), Letter)> =
                    std::collections::HashMap::new();
                comp_seen[u0 * n + v0] = true;
                let mut q = VecDeque::from([(u0, v0)]);
                let mut order = vec![(u0, v0)];
                let mut edges = 0usize;
                let mut cycle_edge: Option<((usize, usize), Letter, (usize, usize))> = None;
                while let Some((u, v)) = q.pop_front() {
                    for s in 0..2 * self.rank_ambient {
                        let (Some((u2, _)), Some((v2, _))) = (self.adjacency[u][s], self.adjacency[v][s]) else {
                            continue;
                        };
                        let l = Letter::new(s / 2, s % 2 == 1);
                        if s % 2 == 0 {
                            edges += 1;
                        }
                        if !comp_seen[u2 * n + v2] {
                            comp_seen[u2 * n + v2] = true;
                            parent.insert((u2, v2), ((u, v), l));
                            order.push((u2, v2));
                            q.push_back((u2, v2));
                        } else if cycle_edge.is_none() {
                            // skip the tree edge we arrived by
                            let is_tree_back = parent.get(&(u, v)).is_some_and(|&(p, pl)| p == (u2, v2) && pl == l.inverse());
                            let is_tree_fwd = parent.get(&(u2, v2)).is_some_and(|&(p, pl)| p == (u, v) && pl == l);
                            if !is_tree_back && !is_tree_fwd {
                                cycle_edge = Some(((u, v), l, (u2, v2)));
                            }
                        }
                    }
                }
                if edges >= order.len() {
                    let (x, l, y) = cycle_edge.expect("component with a cycle has a non-tree edge");
                    let path = |mut p: (usize, usize)| {
                        let mut letters = Vec::new();
                        while let Some(&(pp, pl)) = parent.get(&p) {
                            letters.push(pl);
                            p = pp;
                        }
                        letters.reverse();
                        Word::from_letters(letters)
                    };
                    let cycle = path(x).mul(&Word::letter(l)).mul(&path(y).inverse());
                    let pu = self.tree_label[u0].clone();
                    let pv = self.tree_label[v0].clone();
                    let conjugator = pv.mul(&pu.inverse());
                    let element = pv.mul(&cycle).mul(&pv.inverse());
                    return Some(MalnormalityWitness { conjugator, element });
                }
            }
        }
        None
    }

    pub fn is_malnormal(&self) -> bool {
        self.malnormality_witness().is_none()
    }

    /// One edge per line: `src dst label`.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for &(a, b, g) in &self.edges {
            writeln!(s, "{a} {b} {}", alphabet.name(g)).unwrap();
        }
        s
    }

    /// Structural equality ignoring tags (the graphs are canonically numbered).
    pub fn same_graph(&self, other: &StallingsGraph) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }

    #[doc(hidden)]
    pub fn tree_parent_edge(&self, v: usize) -> Option<usize> {
        self.tree_parent[v]
    }

    #[doc(hidden)]
    pub fn tree_tag(&self, v: usize) -> &Word {
        &self.tree_tag[v]
    }
}

/// `element` lies in `H` and `conjugator⁻¹ · element · conjugator` lies in
/// `H`, while `conjugator` does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalnormalityWitness {
    pub conjugator: Word,
    pub element: Word,
}
