//! Families of labeled graphs whose pairwise symmetric differences all contain a
//! prescribed structure, together with the certificates, exact small-`n` oracles
//! and blocker constructions that bound how large such families can be.

pub mod bincode;
pub mod clique;
pub mod dualconstruct;
pub mod error;
pub mod factorize;
pub mod gf2;
pub mod graphcore;
pub mod gridcode;
pub mod oracle;
pub mod predicate;
pub mod rates;
pub mod rng;
pub mod treecode;

mod artifact;

pub use artifact::{check_format_version, FORMAT_VERSION};
pub use error::{Error, Result};
pub use graphcore::{LabeledGraph, PatternGraph};
