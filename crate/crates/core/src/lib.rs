pub mod cayley_dickson;
pub mod channel_sim;
pub mod code_metrics;
pub mod code_spec;
pub mod error;
pub mod exact_algebra;
pub mod number_theory;
pub mod presets;
pub mod representations;

pub use cayley_dickson::{AlgElem, AlgebraSpec, Division};
pub use code_metrics::{Constellation, MetricReport};
pub use code_spec::CodeSpec;
pub use error::{Error, Result};
pub use exact_algebra::{FieldElem, Rational, SqrtRational, TowerSpec};
pub use representations::{Codeword, ExactMatrix, Shape};
