//! Checks of the hypotheses behind the construction. Each check is either
//! decided, or reported inconclusive with the bound that was exhausted.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::gstar::{EmbeddingReport, VertexInput};
use super::prepare::MarkedSubgroup;
use crate::homology::{h1, infinite_quotient_certificate, relator_lattice};
use crate::normalform::WordOracle;
use crate::words::{Letter, Word};

/// At most this many candidate words are tried by the centralizer search.
pub const CENTRALIZER_WORD_CAP: usize = 20_000;

// freeness spot-check on the F_i bases uses words up to this length
const FREENESS_LENGTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Falsified,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Falsified => "falsified",
            Status::Inconclusive => "inconclusive",
        })
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Status, String> {
        match s {
            "verified" => Ok(Status::Verified),
            "falsified" => Ok(Status::Falsified),
            "inconclusive" => Ok(Status::Inconclusive),
            _ => Err(format!("unknown status `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub check: String,
    pub status: Status,
    /// Formatted witness word, if the check produced one.
    pub witness: Option<String>,
}

impl AuditEntry {
    fn new(check: impl Into<String>, status: Status) -> AuditEntry {
        AuditEntry { check: check.into(), status, witness: None }
    }

    fn with_witness(mut self, w: String) -> AuditEntry {
        self.witness = Some(w);
        self
    }
}

impl fmt::Display for AuditEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.witness.as_deref() {
            Some("") => "1",
            Some(w) => w,
            None => "-",
        };
        write!(f, "check: {} status: {} witness: {}", self.check, self.status, w)
    }
}

struct Audit {
    entries: Vec<AuditEntry>,
    details: Vec<String>,
}

impl Audit {
    fn push(&mut self, e: AuditEntry, detail: Option<String>) {
        if let Some(d) = detail {
            self.details.push(format!("{}: {d}", e.check));
        }
        self.entries.push(e);
    }
}

/// Reduced words over `k` letters of length `1..=max_len`, at most `cap` of them,
/// shortest first.
fn reduced_words(k: usize, max_len: usize, cap: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..k {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    if w.last() == Some(l.inverse()) {
                        continue;
                    }
                    if out.len() >= cap {
                        return out;
                    }
                    let v = w.mul(&Word::letter(l));
                    out.push(v.clone());
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    out
}

fn rank_check(name: &str, m: &MarkedSubgroup, expected: usize, oracle: Option<&Arc<dyn WordOracle>>, a: &mut Audit) {
    let fmt_w = |w: &Word| m.ambient.format_word(w);
    if m.words.len() != expected || m.rank != expected {
        a.push(AuditEntry::new(name, Status::Falsified), Some(format!("{} words, rank {expected} required", m.words.len())));
        return;
    }
    if m.ambient.is_free() {
        let g = m.lift();
        if g.generators_are_free_basis() {
            a.push(AuditEntry::new(name, Status::Verified), Some("free basis by folding".into()));
        } else {
            a.push(AuditEntry::new(name, Status::Falsified), Some(format!("folded rank {}", g.rank())));
        }
        return;
    }
    if let Some(o) = oracle {
        for e in reduced_words(expected, FREENESS_LENGTH, 50_000) {
            let w = e.substitute(&m.words);
            if o.is_trivial(&w).unwrap_or(false) {
                a.push(AuditEntry::new(name, Status::Falsified).with_witness(fmt_w(&w)), Some("basis relation".into()));
                return;
            }
        }
    }
    a.push(AuditEntry::new(name, Status::Verified), Some(format!("{expected} generating words")));
}

fn malnormal_check(name: &str, v: &VertexInput, m: &MarkedSubgroup, a: &mut Audit) {
    let p = &v.presentation;
    let Some(w) = m.lift().malnormality_witness() else {
        if p.is_free() {
            a.push(AuditEntry::new(name, Status::Verified), Some("fiber product has no cycles off the diagonal".into()));
        } else {
            a.push(AuditEntry::new(name, Status::Inconclusive), Some("lift is malnormal; no certificate in the quotient".into()));
        }
        return;
    };
    let g = p.format_word(&w.conjugator);
    if p.is_free() {
        a.push(AuditEntry::new(name, Status::Falsified).with_witness(g), Some(format!("element {}", p.format_word(&w.element))));
        return;
    }
    // h != 1 and g outside L, both certified in H1
    let n = p.generator_count();
    let rel = relator_lattice(p);
    let mut with_l = rel.clone();
    for x in &m.words {
        with_l.add(x.exponent_sums(n).into_iter().map(BigInt::from).collect());
    }
    let h_nontrivial = !rel.contains_i64(&w.element.exponent_sums(n));
    let g_outside = !with_l.contains_i64(&w.conjugator.exponent_sums(n));
    if h_nontrivial && g_outside {
        a.push(
            AuditEntry::new(name, Status::Falsified).with_witness(g),
            Some(format!("element {} certified through H1", p.format_word(&w.element))),
        );
    } else {
        a.push(AuditEntry::new(name, Status::Inconclusive), Some(format!("lift witness {g} not certified in the quotient")));
    }
}

fn centralizer_check(r: &EmbeddingReport, bound: usize, a: &mut Audit) {
    const NAME: &str = "centralizer";
    let pg = &r.prepared;
    let Some(o) = pg.oracle.as_ref() else {
        a.push(AuditEntry::new(NAME, Status::Inconclusive), Some("no oracle for G".into()));
        return;
    };
    let pool: Vec<usize> = (0..pg.prepared.generator_count()).filter(|g| !pg.defined.contains(g)).collect();
    let s = &pg.f1.words[0];
    let a0t = &pg.f1.words[1];
    let mut tried = 0;
    for e in reduced_words(pool.len(), bound, CENTRALIZER_WORD_CAP) {
        tried += 1;
        let w = e.relabel(|g| pool[g]);
        let commutes = |y: &Word| o.is_trivial(&Word::commutator(&w, y)).unwrap_or(false);
        if commutes(s) && commutes(a0t) && !o.is_trivial(&w).unwrap_or(true) {
            a.push(AuditEntry::new(NAME, Status::Falsified).with_witness(pg.prepared.format_word(&w)), None);
            return;
        }
    }
    a.push(
        AuditEntry::new(NAME, Status::Inconclusive),
        Some(format!("no element of G commuting with s and a0 t among {tried} words of length <= {bound}")),
    );
}

/// Runs every check; `bound` limits the searches that are not exact.
pub fn hypothesis_audit(r: &EmbeddingReport, bound: usize) -> (Vec<AuditEntry>, Vec<String>) {
    let mut a = Audit { entries: Vec::new(), details: Vec::new() };
    let pg = &r.prepared;
    rank_check("rank:F1", &pg.f1, pg.n() + 2, pg.oracle.as_ref(), &mut a);
    rank_check("rank:F2", &pg.f2, 3, pg.oracle.as_ref(), &mut a);
    rank_check("rank:L1", &r.l1, pg.f1.rank, r.a1.oracle.as_ref(), &mut a);
    rank_check("rank:L2", &r.l2, pg.f2.rank, r.a2.oracle.as_ref(), &mut a);

    match pg.f1_membership() {
        Some(m) if m.is_exact() => a.push(AuditEntry::new("membership-exact:F1", Status::Verified), None),
        Some(_) => a.push(
            AuditEntry::new("membership-exact:F1", Status::Inconclusive),
            Some("generators of G not pairwise distinct and nontrivial; bounded search".into()),
        ),
        None => a.push(AuditEntry::new("membership-exact:F1", Status::Inconclusive), Some("no oracle for G".into())),
    }

    malnormal_check("malnormal:L1", &r.a1, &r.l1, &mut a);
    malnormal_check("malnormal:L2", &r.a2, &r.l2, &mut a);

    let hs = [h1(&r.a1.presentation), h1(&r.a2.presentation)];
    for (i, h) in hs.iter().enumerate() {
        let status = if h.is_finite() { Status::Verified } else { Status::Falsified };
        a.push(AuditEntry::new(format!("h1-finite:A{}", i + 1), status), Some(h.to_string()));
    }
    for (i, (v, l)) in [(&r.a1, &r.l1), (&r.a2, &r.l2)].into_iter().enumerate() {
        let status = if infinite_quotient_certificate(&v.presentation, &l.words) {
            Status::Verified
        } else {
            Status::Inconclusive
        };
        a.push(AuditEntry::new(format!("infinite-quotient:Q{}", i + 1), status), Some(format!("H1(Q) = {}", h1(&crate::homology::quotient(&v.presentation, &l.words)))));
    }

    let (status, why) = if hs[0] != hs[1] {
        (Status::Verified, format!("H1 {} vs {}", hs[0], hs[1]))
    } else {
        match (&r.a1.provenance, &r.a2.provenance) {
            (Some(p), Some(q)) if p != q => (Status::Verified, "distinct recorded knot and slope".into()),
            _ => (Status::Inconclusive, "equal H1".into()),
        }
    };
    a.push(AuditEntry::new("non-isomorphic:A1-A2", status), Some(why));

    for (i, v) in [&r.a1, &r.a2].into_iter().enumerate() {
        if let Some(ok) = v.peripheral_certified {
            let status = if ok { Status::Verified } else { Status::Falsified };
            a.push(AuditEntry::new(format!("peripheral:A{}", i + 1), status), None);
        }
    }

    centralizer_check(r, bound, &mut a);

    for (i, v) in [&r.a1, &r.a2].into_iter().enumerate() {
        if let Some(p) = &v.provenance {
            a.details.push(format!(
                "UNVERIFIED: A{} = {}({}) assumed hyperbolic with trivial symmetry group",
                i + 1,
                p.knot,
                p.slope
            ));
        }
    }
    let unsettled: Vec<String> = a
        .entries
        .iter()
        .filter(|e| e.check.starts_with("malnormal:") && e.status != Status::Verified)
        .map(|e| e.check.trim_start_matches("malnormal:").to_string())
        .collect();
    for l in unsettled {
        a.details.push(format!("UNVERIFIED: {l} assumed malnormal"));
    }
    (a.entries, a.details)
}
