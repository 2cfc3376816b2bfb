// mdbook cannot run snippets that depend on a workspace crate, so each
// chapter is pulled in here as the docs of an empty module and the snippets
// run as ordinary doc-tests under `cargo test`. One module per chapter keeps
// failures traceable to their chapter.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../book/src/corpus.md")]
pub mod corpus {}
#[doc = include_str!("../../book/src/pairs.md")]
pub mod pairs {}
#[doc = include_str!("../../book/src/labels.md")]
pub mod labels {}
#[doc = include_str!("../../book/src/ensemble.md")]
pub mod ensemble {}
#[doc = include_str!("../../book/src/scoring.md")]
pub mod scoring {}
#[doc = include_str!("../../book/src/stubs.md")]
pub mod stubs {}
#[doc = include_str!("../../book/src/cli.md")]
pub mod cli {}
