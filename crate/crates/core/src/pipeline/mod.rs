//! Construction of the target group `G* = A1 ∗_{F1 = L1} G' ∗_{F2 = L2} A2`
//! and the audit of its hypotheses.

mod audit;
mod gstar;
mod prepare;
mod report;

use thiserror::Error;

use crate::knots::KnotError;
use crate::normalform::OracleError;
use crate::words::WordError;

pub use audit::{hypothesis_audit, AuditEntry, Status, CENTRALIZER_WORD_CAP};
pub use gstar::{build_gstar, default_l_words, EmbeddingReport, Provenance, VertexInput};
pub use prepare::{
    construct_f1_f2, ensure_infinite_order_generators, F1Membership, F2Membership, InfiniteOrderGenerators,
    MarkedSubgroup, OracleChoice, PreparedGroup,
};
pub use report::{parse_report, ParsedReport};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Config(String),
    #[error("rank mismatch for {which}: expected {expected}, got {got}")]
    RankMismatch { which: String, expected: usize, got: usize },
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Knot(#[from] KnotError),
}
