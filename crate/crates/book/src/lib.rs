//! The guide under `book/src`, compiled so its listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/gf2.md")]
pub mod gf2 {}

#[doc = include_str!("../../../book/src/tanner.md")]
pub mod tanner {}

#[doc = include_str!("../../../book/src/lp.md")]
pub mod lp {}

#[doc = include_str!("../../../book/src/decoding.md")]
pub mod decoding {}

#[doc = include_str!("../../../book/src/recovery.md")]
pub mod recovery {}

#[doc = include_str!("../../../book/src/pseudoweights.md")]
pub mod pseudoweights {}

#[doc = include_str!("../../../book/src/bridge.md")]
pub mod bridge {}

#[doc = include_str!("../../../book/src/covers.md")]
pub mod covers {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
