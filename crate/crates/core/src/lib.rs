// Column subset selection with determinantal point processes

#![doc = include_str!("../../../README.md")]

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod matrixgen;
pub mod oracle;
pub mod regression;
pub mod rng;
pub mod samplers;
pub mod subsets;
pub mod toy;

pub use error::{CssError, Result};
pub use linalg::{DataMatrix, KLeverageProfile, Norm, SvdBundle};
pub use rng::RngState;
pub use samplers::SelectorKind;
pub use subsets::SubsetSelection;
