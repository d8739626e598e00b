//! Belief functions over finite frames with Dempster-Shafer conditioning, closed
//! forms for island and paternity identification problems, and an enumeration
//! oracle that checks those closed forms exactly.

pub mod error;
pub mod frame;
pub mod island;
pub mod ledger;
pub mod mass;
pub mod oracle;
pub mod parental;
pub mod product;
pub mod scalar;

pub use error::{Error, Result};
pub use frame::{EventSet, Frame, MAX_FRAME_SIZE};
pub use mass::MassFunction;
pub use product::{Predicate, ProductFrame, VariableSpec};
pub use scalar::{Backend, Rational, Scalar};
