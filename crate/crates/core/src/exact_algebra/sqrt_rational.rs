use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::Rational;

/// A nonnegative real `√r` with `r ∈ Q, r ≥ 0`, stored by its square.
///
/// Determinant bounds such as `1/|N(b_d)|` are of this form; keeping the
/// square makes comparisons and products exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SqrtRational {
    sq: Rational,
}

impl SqrtRational {
    /// `√sq`; `None` if `sq < 0`.
    pub fn sqrt_of(sq: Rational) -> Option<Self> {
        (!sq.is_negative()).then_some(SqrtRational { sq })
    }

    /// `|r|`.
    pub fn from_rational(r: &Rational) -> Self {
        SqrtRational { sq: r * r }
    }

    pub fn zero() -> Self {
        SqrtRational { sq: Rational::zero() }
    }

    pub fn one() -> Self {
        SqrtRational { sq: Rational::one() }
    }

    pub fn square(&self) -> &Rational {
        &self.sq
    }

    /// The value itself when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.sq.sqrt_exact()
    }

    pub fn to_f64(&self) -> f64 {
        self.sq.to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.sq.is_zero()
    }

    pub fn mul(&self, o: &SqrtRational) -> SqrtRational {
        SqrtRational { sq: &self.sq * &o.sq }
    }

    /// `√self`, i.e. the fourth root of the stored square; only when exact.
    pub fn sqrt(&self) -> Option<SqrtRational> {
        self.sq.sqrt_exact().map(|sq| SqrtRational { sq })
    }

    pub fn recip(&self) -> Option<SqrtRational> {
        self.sq.recip().map(|sq| SqrtRational { sq })
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sq.cmp(&other.sq)
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None if self.sq.is_integer() => write!(f, "√{}", self.sq),
            None => write!(f, "√({})", self.sq),
        }
    }
}

/// `{"exact": "1/30", "square": {...}, "float": 0.0333}`.
impl Serialize for SqrtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SqrtRational", 3)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("square", &self.sq)?;
        st.serialize_field("float", &self.to_f64())?;
        st.end()
    }
}
