//! File formats and text rendering for [`bnchain_core`], plus the agreement
//! suite. The `bnchain` binary is a thin front end over this crate.

pub mod formats;
pub mod render;
pub mod verify;
