//! Symbolic toolkit for building the enveloping amalgam `A1 ∗_{F1} G ∗_{F2} A2`
//! of a finitely presented group `G` and auditing the hypotheses it relies on.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: reduced words, alphabets, presentations and free products.
//! * [`homology`]: Smith normal form and first homology.
//! * [`stallings`]: folded subgroup graphs of free groups.
//! * [`normalform`]: word oracles, free-product and amalgam normal forms.
//! * [`knots`]: PD codes, Wirtinger presentations and Dehn filling.
//! * [`pipeline`]: preparation of `G`, assembly of the amalgam and the audit.

pub mod homology;
pub mod knots;
pub mod normalform;
pub mod pipeline;
pub mod stallings;
pub mod words;

pub use homology::{h1, smith_normal_form, AbelianInvariants, IntMatrix};
pub use words::{free_product, Alphabet, FinitePresentation, GeneratorMapping, Letter, Word};
