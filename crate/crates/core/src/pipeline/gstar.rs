//! Assembly of `G*` as a line of three vertex groups.

use std::sync::Arc;

use super::audit::AuditEntry;
use super::prepare::{MarkedSubgroup, PreparedGroup};
use super::PipelineError;
use crate::knots::{dehn_fill, wirtinger, FillingSlope, KnotTable};
use crate::normalform::{AmalgamSpec, EdgeSpec, FreeOracle, MembershipOracle, StallingsMembership, VertexSpec, WordOracle};
use crate::words::{free_product, FinitePresentation, Side, Word};

/// Where a vertex group came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub knot: String,
    pub slope: FillingSlope,
}

/// One of the outer vertex groups `A1`, `A2`.
#[derive(Clone)]
pub struct VertexInput {
    pub presentation: FinitePresentation,
    pub provenance: Option<Provenance>,
    /// Whether `[μ, λ]` was certified as a relator consequence (knot inputs only).
    pub peripheral_certified: Option<bool>,
    pub oracle: Option<Arc<dyn WordOracle>>,
}

impl std::fmt::Debug for VertexInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VertexInput")
            .field("presentation", &self.presentation)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl VertexInput {
    /// A raw presentation; free presentations get the free-group oracle.
    pub fn raw(presentation: FinitePresentation) -> VertexInput {
        let oracle = FreeOracle::new(&presentation).ok().map(|o| Arc::new(o) as Arc<dyn WordOracle>);
        VertexInput { presentation, provenance: None, peripheral_certified: None, oracle }
    }

    /// Dehn filling of a tabulated knot.
    pub fn from_knot(table: &KnotTable, knot: &str, slope: FillingSlope) -> Result<VertexInput, PipelineError> {
        let w = wirtinger(table.get(knot)?);
        let presentation = dehn_fill(&w.presentation, &w.peripheral, slope);
        Ok(VertexInput {
            presentation,
            provenance: Some(Provenance { knot: knot.to_string(), slope }),
            peripheral_certified: Some(w.commutation_verified()),
            oracle: None,
        })
    }
}

/// Placeholder generating words for `L_i`: `g0 g1^j g0^2 g1^j g0^3 g1^j` for
/// `j = 1..=rank` (powers of `g0` with a single generator). Their lifts are
/// malnormal free bases up to rank 8; nothing is claimed in the quotient.
pub fn default_l_words(p: &FinitePresentation, rank: usize) -> Vec<Word> {
    let k = p.generator_count();
    (1..=rank as i64)
        .map(|j| match k {
            0 => Word::identity(),
            1 => Word::power_of(0, j),
            _ => (1..=3).fold(Word::identity(), |w, i| w.mul(&Word::power_of(0, i)).mul(&Word::power_of(1, j))),
        })
        .collect()
}

/// Everything produced by [`build_gstar`], plus audit results once run.
#[derive(Clone)]
pub struct EmbeddingReport {
    pub prepared: PreparedGroup,
    pub a1: VertexInput,
    pub l1: MarkedSubgroup,
    pub a2: VertexInput,
    pub l2: MarkedSubgroup,
    pub gstar: FinitePresentation,
    /// `vertex: old -> new` for every generator renamed when forming `G*`.
    pub renames: Vec<String>,
    pub spec: AmalgamSpec,
    pub audit: Vec<AuditEntry>,
    pub details: Vec<String>,
}

impl std::fmt::Debug for EmbeddingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EmbeddingReport").field("gstar", &self.gstar).field("audit", &self.audit).finish_non_exhaustive()
    }
}

impl EmbeddingReport {
    /// Offsets of `A1`, `G'`, `A2` in the generator list of `G*`.
    pub fn offsets(&self) -> [usize; 3] {
        let a = self.a1.presentation.generator_count();
        [0, a, a + self.prepared.prepared.generator_count()]
    }

    /// A prepared word as a word of `G*`.
    pub fn embed_prepared(&self, w: &Word) -> Word {
        let off = self.offsets()[1];
        w.relabel(|g| g + off)
    }

    pub fn is_decidable(&self) -> bool {
        self.spec.is_decidable()
    }
}

fn check_rank(which: &str, expected: usize, words: &[Word]) -> Result<(), PipelineError> {
    if words.len() != expected {
        return Err(PipelineError::RankMismatch { which: which.into(), expected, got: words.len() });
    }
    Ok(())
}

fn membership_for(v: &VertexInput, words: &[Word]) -> Option<Arc<dyn MembershipOracle>> {
    if !v.presentation.is_free() {
        return None;
    }
    StallingsMembership::new(words.to_vec(), v.presentation.generator_count())
        .ok()
        .map(|m| Arc::new(m) as Arc<dyn MembershipOracle>)
}

/// `A1 ∗_{F1 = L1} G' ∗_{F2 = L2} A2`, with relators `F_j · L_j⁻¹` added to
/// the free product of the three vertex presentations.
pub fn build_gstar(
    prepared: PreparedGroup,
    a1: VertexInput,
    l1: Vec<Word>,
    a2: VertexInput,
    l2: Vec<Word>,
) -> Result<EmbeddingReport, PipelineError> {
    check_rank("L1", prepared.f1.rank, &l1)?;
    check_rank("L2", prepared.f2.rank, &l2)?;
    for (w, v) in l1.iter().map(|w| (w, &a1)).chain(l2.iter().map(|w| (w, &a2))) {
        v.presentation.alphabet().check_word(w)?;
    }
    let fp1 = free_product(&a1.presentation, &prepared.prepared);
    let fp2 = free_product(&fp1.presentation, &a2.presentation);
    let mut renames = Vec::new();
    let split = a1.presentation.generator_count();
    for r in &fp1.renames {
        let who = if r.side == Side::Left { "A1" } else { "G" };
        renames.push(format!("{who}: {} -> {}", r.from, r.to));
    }
    for r in &fp2.renames {
        let who = match r.side {
            Side::Right => "A2",
            Side::Left if fp1.presentation.alphabet().index_of(&r.from).is_some_and(|g| g < split) => "A1",
            Side::Left => "G",
        };
        renames.push(format!("{who}: {} -> {}", r.from, r.to));
    }

    let off_g = fp1.offset;
    let off_a2 = fp2.offset;
    let mut gstar = fp2.presentation.clone();
    for (f, l) in prepared.f1.words.iter().zip(&l1) {
        gstar.add_relator(f.relabel(|g| g + off_g).mul(&l.inverse()))?;
    }
    for (f, l) in prepared.f2.words.iter().zip(&l2) {
        gstar.add_relator(f.relabel(|g| g + off_g).mul(&l.relabel(|g| g + off_a2).inverse()))?;
    }

    let vertices = vec![
        VertexSpec { name: "A1".into(), presentation: a1.presentation.clone(), oracle: a1.oracle.clone() },
        VertexSpec { name: "G".into(), presentation: prepared.prepared.clone(), oracle: prepared.oracle.clone() },
        VertexSpec { name: "A2".into(), presentation: a2.presentation.clone(), oracle: a2.oracle.clone() },
    ];
    let mut e1 = EdgeSpec::new(1, 0, prepared.f1.words.clone(), l1.clone());
    e1.membership_a = prepared.f1_membership().map(|m| Arc::new(m) as Arc<dyn MembershipOracle>);
    e1.membership_b = membership_for(&a1, &l1);
    let mut e2 = EdgeSpec::new(1, 2, prepared.f2.words.clone(), l2.clone());
    e2.membership_a = prepared.f2_membership().map(|m| Arc::new(m) as Arc<dyn MembershipOracle>);
    e2.membership_b = membership_for(&a2, &l2);
    let spec = AmalgamSpec::with_alphabet(gstar.alphabet().clone(), vertices, vec![e1, e2])?;

    let l1 = MarkedSubgroup::new(a1.presentation.clone(), l1);
    let l2 = MarkedSubgroup::new(a2.presentation.clone(), l2);
    Ok(EmbeddingReport { prepared, a1, l1, a2, l2, gstar, renames, spec, audit: Vec::new(), details: Vec::new() })
}
