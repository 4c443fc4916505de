// The book chapters double as doc-tests: every fenced Rust block in
// book/src is compiled and run by `cargo test --doc`, which keeps the
// guide in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states-and-channels.md")]
pub mod states_and_channels {}

#[doc = include_str!("../../../book/src/noise-statistics.md")]
pub mod noise_statistics {}

#[doc = include_str!("../../../book/src/distinguishability.md")]
pub mod distinguishability {}

#[doc = include_str!("../../../book/src/cheating.md")]
pub mod cheating {}

#[doc = include_str!("../../../book/src/thresholds.md")]
pub mod thresholds {}

#[doc = include_str!("../../../book/src/link-model.md")]
pub mod link_model {}

#[doc = include_str!("../../../book/src/sessions.md")]
pub mod sessions {}

#[doc = include_str!("../../../book/src/zero-knowledge.md")]
pub mod zero_knowledge {}
