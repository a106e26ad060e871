//! The book chapters, compiled so `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}

#[doc = include_str!("../../../book/src/stallings.md")]
pub mod stallings {}

#[doc = include_str!("../../../book/src/normal-forms.md")]
pub mod normal_forms {}

#[doc = include_str!("../../../book/src/knots.md")]
pub mod knots {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}
