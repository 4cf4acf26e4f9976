//! Synthetic imbalanced two-class data, resampling pre-processors and an
//! evaluation harness for k-NN and decision-tree classifiers.

pub mod classify;
pub mod clustering;
pub mod data;
pub mod datagen;
pub mod error;
pub mod eval;
pub mod io;
pub mod neighbors;
pub mod resample;
pub mod rng;

pub use data::{characteristics, summarize, ClassRoles, ClassSummary, Dataset, ExampleKind, Label};
pub use error::{Error, Result};
pub use rng::{RngSeed, Stream};
