//! Small facts about quadratic fields and their extensions of `Q(i)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{is_square_free, FieldElem, Rational, TowerSpec};

fn check_m(m: i64) -> Result<()> {
    if m == 1 || !is_square_free(m) {
        return Err(Error::OutOfDomain(format!(
            "m = {m} must be a square-free integer different from 0 and 1"
        )));
    }
    Ok(())
}

/// A `Z`-basis of the ring of integers of a number field, as field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityBasis {
    pub tower: TowerSpec,
    pub basis: Vec<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFieldInfo {
    pub m: i64,
    pub d_k: i64,
    pub integral_basis: IntegralityBasis,
    /// Known only for imaginary fields covered by the class-number-one table.
    pub h_is_one: Option<bool>,
}

impl Serialize for QuadFieldInfo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadFieldInfo", 4)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("discriminant", &self.d_k)?;
        let names: Vec<String> = self.integral_basis.basis.iter().map(ToString::to_string).collect();
        st.serialize_field("integral_basis", &names)?;
        st.serialize_field("class_number_one", &self.h_is_one)?;
        st.end()
    }
}

/// Discriminant and integral basis of `Q(√m)`.
pub fn quad_field_info(m: i64) -> Result<QuadFieldInfo> {
    check_m(m)?;
    let tower = TowerSpec::quadratic_over_q(m)?;
    let (d_k, second) = if m.rem_euclid(4) == 1 {
        (m, tower.elem(vec![Rational::new(1, 2), Rational::new(1, 2)])?)
    } else {
        (4 * m, tower.sqrt_a()?)
    };
    let h_is_one = if m < 0 {
        class_number_is_one(FieldKind::ImagQuad(-m)).ok()
    } else {
        None
    };
    Ok(QuadFieldInfo {
        m,
        d_k,
        integral_basis: IntegralityBasis {
            basis: vec![tower.one(), second],
            tower,
        },
        h_is_one,
    })
}

/// `|d_{K/Q(i)}|` for `K = Q(i)(√m)`: `|m|` if `m ≡ 1, 3 (mod 4)`, `2|m|` if `m ≡ 2 (mod 4)`.
pub fn rel_disc_over_qi(m: i64) -> Result<u64> {
    check_m(m)?;
    if m == -1 {
        return Err(Error::OutOfDomain("Q(i)(√-1) is not an extension of Q(i)".into()));
    }
    Ok(match m.rem_euclid(4) {
        1 | 3 => m.unsigned_abs(),
        2 => 2 * m.unsigned_abs(),
        _ => unreachable!("square-free m is never divisible by 4"),
    })
}

/// Absolute discriminant of `Q(i)(√m)`: `16m²` or `64m²`.
pub fn disc_biquadratic_over_qi(m: i64) -> Result<u64> {
    check_m(m)?;
    if m == -1 {
        return Err(Error::OutOfDomain("Q(i)(√-1) is not an extension of Q(i)".into()));
    }
    let m2 = m.unsigned_abs().pow(2);
    Ok(if m.rem_euclid(4) == 2 { 64 * m2 } else { 16 * m2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// `Q(√-m)`, `m > 0`.
    ImagQuad(i64),
    /// `Q(i)(√m)`, `m > 0`.
    QiExt(i64),
}

const IMAG_QUAD_H1: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];
const QI_EXT_H1: [i64; 11] = [2, 3, 5, 7, 11, 13, 19, 37, 43, 67, 163];

/// Class number one, by table lookup.
pub fn class_number_is_one(kind: FieldKind) -> Result<bool> {
    let (m, table): (i64, &[i64]) = match kind {
        FieldKind::ImagQuad(m) => (m, &IMAG_QUAD_H1),
        FieldKind::QiExt(m) => (m, &QI_EXT_H1),
    };
    if m <= 0 || !is_square_free(m) {
        return Err(Error::OutOfDomain(format!(
            "m = {m} must be a positive square-free integer"
        )));
    }
    if matches!(kind, FieldKind::QiExt(1)) {
        return Err(Error::OutOfDomain("Q(i)(√1) is not an extension of Q(i)".into()));
    }
    Ok(table.contains(&m))
}

/// Rank `r + s − 1` of the unit group.
pub fn unit_rank(r: u32, s: u32) -> Result<u32> {
    if r == 0 && s == 0 {
        return Err(Error::OutOfDomain("a number field has at least one embedding".into()));
    }
    Ok(r + s - 1)
}

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn conj(&self) -> GaussInt {
        GaussInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    // round(n/d) to nearest, ties away from zero
    fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
        let two = BigInt::from(2);
        let (q, r) = n.div_mod_floor(d);
        if (&r * &two) >= *d {
            q + 1
        } else {
            q
        }
    }

    /// Division with remainder of norm less than `|o|²`.
    pub fn div_rem(&self, o: &GaussInt) -> (GaussInt, GaussInt) {
        let n = o.norm();
        let num = self.mul(&o.conj());
        let q = GaussInt {
            re: Self::round_div(&num.re, &n),
            im: Self::round_div(&num.im, &n),
        };
        let r = self.sub(&q.mul(o));
        (q, r)
    }

    /// Exact quotient; panics if `o` does not divide `self`.
    pub fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let (q, r) = self.div_rem(o);
        assert!(r.is_zero(), "inexact Gaussian division");
        q
    }

    pub fn gcd(&self, o: &GaussInt) -> GaussInt {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.normalized().0
    }

    /// The associate with `re > 0, im ≥ 0`, and the unit `u` with `self·u = result`.
    pub fn normalized(&self) -> (GaussInt, GaussInt) {
        let units = [
            GaussInt::new(1, 0),
            GaussInt::new(0, 1),
            GaussInt::new(-1, 0),
            GaussInt::new(0, -1),
        ];
        if self.is_zero() {
            return (self.clone(), units[0].clone());
        }
        for u in units {
            let c = self.mul(&u);
            if c.re.is_positive() && !c.im.is_negative() {
                return (c, u);
            }
        }
        unreachable!("one associate lies in the first quadrant")
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if self.im == -BigInt::one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                let abs = self.im.abs();
                if abs.is_one() {
                    write!(f, "{}{sign}i", self.re)
                } else {
                    write!(f, "{}{sign}{abs}i", self.re)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(quad_field_info(-1).unwrap().d_k, -4);
        assert_eq!(quad_field_info(5).unwrap().d_k, 5);
        assert_eq!(quad_field_info(2).unwrap().d_k, 8);
        assert_eq!(quad_field_info(-3).unwrap().d_k, -3);
        assert!(quad_field_info(12).is_err());
        let info = quad_field_info(5).unwrap();
        assert_eq!(info.integral_basis.basis[1].to_string(), "1/2 + (1/2)√5");
    }

    #[test]
    fn relative_discriminants() {
        assert_eq!(rel_disc_over_qi(5).unwrap(), 5);
        assert_eq!(rel_disc_over_qi(2).unwrap(), 4);
        assert_eq!(rel_disc_over_qi(3).unwrap(), 3);
        assert_eq!(rel_disc_over_qi(-2).unwrap(), 4);
        assert!(rel_disc_over_qi(-1).is_err());
        assert!(rel_disc_over_qi(0).is_err());
    }

    #[test]
    fn tables() {
        assert!(class_number_is_one(FieldKind::ImagQuad(1)).unwrap());
        assert!(class_number_is_one(FieldKind::QiExt(5)).unwrap());
        assert!(!class_number_is_one(FieldKind::QiExt(6)).unwrap());
        assert!(class_number_is_one(FieldKind::QiExt(4)).is_err());
        assert!(class_number_is_one(FieldKind::ImagQuad(-3)).is_err());
    }

    #[test]
    fn units() {
        assert_eq!(unit_rank(0, 1).unwrap(), 0);
        assert_eq!(unit_rank(2, 0).unwrap(), 1);
        assert_eq!(unit_rank(0, 2).unwrap(), 1);
        assert!(unit_rank(0, 0).is_err());
    }

    #[test]
    fn gaussian_gcd() {
        let a = GaussInt::new(3, 4); // (2+i)²
        let b = GaussInt::new(1, 3); // (1+i)(2+i)
        assert_eq!(a.gcd(&b), GaussInt::new(2, 1));
        assert_eq!(GaussInt::new(0, 1).gcd(&GaussInt::new(2, 0)), GaussInt::new(1, 0));
        assert_eq!(GaussInt::new(0, -3).normalized().0, GaussInt::new(3, 0));
        assert_eq!(GaussInt::new(-1, 2).to_string(), "-1+2i");
    }
}
