//! Exact arithmetic in quadratic towers `Q ⊆ F ⊆ K`.

mod base;
mod elem;
mod rational;
mod sqrt_rational;
mod tower;

pub use elem::FieldElem;
pub use rational::{rational_from_json, ParseRationalError, Rational};
pub use sqrt_rational::SqrtRational;
pub use tower::TowerSpec;

pub(crate) use base::{sqrt as base_sqrt, BaseElem};
pub(crate) use elem::format_terms;
pub(crate) use tower::is_square_free;
