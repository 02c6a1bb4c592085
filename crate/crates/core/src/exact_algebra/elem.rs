use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use super::base::BaseElem;
use super::{Rational, TowerSpec};
use crate::error::{Error, Result};

/// An element `u + v·√a` of a tower field, with `u, v ∈ F`.
///
/// Public coordinates are over the `Q`-basis `{1}`, `{1, √m}`, `{1, √a}` or
/// `{1, √m, √a, √m√a}` depending on the tower.
#[derive(Clone)]
pub struct FieldElem {
    tower: TowerSpec,
    u: BaseElem,
    v: BaseElem,
}

impl FieldElem {
    pub(crate) fn from_parts(tower: TowerSpec, coords: Vec<Rational>) -> Self {
        debug_assert_eq!(coords.len(), tower.dim());
        let bd = tower.base_dim();
        let mut it = coords.into_iter();
        let mut take = |n: usize| -> Vec<Rational> { (&mut it).take(n).collect() };
        let u = BaseElem::from_coords(take(bd));
        let v = BaseElem::from_coords(take(bd));
        FieldElem { tower, u, v }
    }

    /// `(p, q)` with `x = p + q·√a`, both returned as elements of the tower lying in `F`.
    pub fn ext_parts(&self) -> (FieldElem, FieldElem) {
        (
            self.with(self.u.clone(), BaseElem::zero()),
            self.with(self.v.clone(), BaseElem::zero()),
        )
    }

    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    /// Rational coordinates in the tower's fixed basis order.
    pub fn coords(&self) -> Vec<Rational> {
        let bd = self.tower.base_dim();
        let mut out = self.u.coords(bd).to_vec();
        if self.tower.has_extension() {
            out.extend_from_slice(self.v.coords(bd));
        }
        out
    }

    /// The rational value, if every irrational coordinate vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.u.is_rational() && self.v.is_zero() {
            Some(self.u.p().clone())
        } else {
            None
        }
    }

    /// Coordinates of the `F`-components `(u, v)` of `u + v√a`, each over `{1, √m}`.
    pub fn base_components(&self) -> (Vec<Rational>, Vec<Rational>) {
        let bd = self.tower.base_dim();
        (self.u.coords(bd).to_vec(), self.v.coords(bd).to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.u.p().is_one() && self.u.q().is_zero() && self.v.is_zero()
    }

    /// True iff the extension coordinates are exactly zero, i.e. the element lies in `F`.
    pub fn is_in_base(&self) -> bool {
        self.v.is_zero()
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.tower.same(&other.tower) {
            Ok(())
        } else {
            Err(Error::TowerMismatch(self.tower.to_string(), other.tower.to_string()))
        }
    }

    fn with(&self, u: BaseElem, v: BaseElem) -> FieldElem {
        FieldElem {
            tower: self.tower.clone(),
            u,
            v,
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.with(self.u.add(&other.u), self.v.add(&other.v)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.with(self.u.sub(&other.u), self.v.sub(&other.v)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, o: &FieldElem) -> FieldElem {
        let m = self.tower.mm();
        if self.v.is_zero() && o.v.is_zero() {
            return self.with(self.u.mul(m, &o.u), BaseElem::zero());
        }
        // (u + v√a)(u' + v'√a) = (uu' + a vv') + (uv' + vu')√a
        let a = self.tower.base_a().expect("nonzero v implies an extension");
        let vv = self.v.mul(m, &o.v);
        let u = self.u.mul(m, &o.u).add(&a.mul(m, &vv));
        let v = self.u.mul(m, &o.v).add(&self.v.mul(m, &o.u));
        self.with(u, v)
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.u.neg(), self.v.neg())
    }

    pub fn scale(&self, r: &Rational) -> FieldElem {
        self.with(self.u.scale(r), self.v.scale(r))
    }

    pub fn square(&self) -> FieldElem {
        self.mul_unchecked(self)
    }

    pub fn pow(&self, exp: u32) -> FieldElem {
        let mut acc = self.tower.one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// `x⁻¹ = σ(x) / N_{K/F}(x)`, with the base-level inverse done the same way one level down.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::ZeroDivision(self.to_string()));
        }
        let m = self.tower.mm();
        if self.v.is_zero() {
            return Ok(self.with(self.u.inv(m), BaseElem::zero()));
        }
        let a = self.tower.base_a().expect("extension present");
        let n = self.u.mul(m, &self.u).sub(&a.mul(m, &self.v.mul(m, &self.v)));
        let ninv = n.inv(m);
        Ok(self.with(self.u.mul(m, &ninv), self.v.neg().mul(m, &ninv)))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// The top-level automorphism `σ: √a ↦ -√a`, fixing `F`.
    pub fn sigma(&self) -> Result<FieldElem> {
        if !self.tower.has_extension() {
            return Err(Error::NoExtension(self.tower.to_string()));
        }
        Ok(self.with(self.u.clone(), self.v.neg()))
    }

    /// Conjugation of `F` over `Q` (`√m ↦ -√m`).
    ///
    /// Extends to all of `K` only when `a` is rational; otherwise the argument must lie in `F`.
    pub fn conj_base(&self) -> Result<FieldElem> {
        if !self.tower.a_is_rational() && !self.v.is_zero() {
            return Err(Error::NotInBase(self.to_string()));
        }
        Ok(self.with(self.u.conj(), self.v.conj()))
    }

    /// `N_{K/F}(x) = x·σ(x)`, returned as an element of the tower lying in `F`.
    pub fn norm_rel(&self) -> Result<FieldElem> {
        if !self.tower.has_extension() {
            return Err(Error::NoExtension(self.tower.to_string()));
        }
        Ok(self.with(self.norm_rel_base(), BaseElem::zero()))
    }

    pub(crate) fn norm_rel_base(&self) -> BaseElem {
        let m = self.tower.mm();
        if self.v.is_zero() {
            return self.u.mul(m, &self.u);
        }
        let a = self.tower.base_a().expect("extension present");
        self.u.mul(m, &self.u).sub(&a.mul(m, &self.v.mul(m, &self.v)))
    }

    /// `Tr_{K/F}(x) = x + σ(x)`.
    pub fn trace_rel(&self) -> Result<FieldElem> {
        if !self.tower.has_extension() {
            return Err(Error::NoExtension(self.tower.to_string()));
        }
        Ok(self.with(self.u.add(&self.u), BaseElem::zero()))
    }

    /// `N_{F/Q}` of an element of `F`.
    pub fn norm_base(&self) -> Result<Rational> {
        if !self.v.is_zero() {
            return Err(Error::NotInBase(self.to_string()));
        }
        Ok(self.u.norm(self.tower.mm()))
    }

    /// Complex conjugation under the fixed embedding, when it maps the tower to itself.
    pub fn complex_conj(&self) -> Option<FieldElem> {
        let m = self.tower.mm();
        let u = self.u.complex_conj(m);
        if self.v.is_zero() {
            return Some(self.with(u, BaseElem::zero()));
        }
        let c = self.tower.conj_coeff()?;
        Some(self.with(u, self.v.complex_conj(m).mul(m, c)))
    }

    /// `|x|² = x·conj(x)` as an exact (real) element of the tower.
    pub fn abs_sq(&self) -> Option<FieldElem> {
        Some(self.mul_unchecked(&self.complex_conj()?))
    }

    /// Image under the fixed complex embedding.
    pub fn embed(&self) -> Complex64 {
        let basis = self.tower.basis_embed();
        let bd = self.tower.base_dim();
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.u.coords(bd).iter().enumerate() {
            if !c.is_zero() {
                z += basis[k] * c.to_f64();
            }
        }
        if self.tower.has_extension() {
            for (k, c) in self.v.coords(bd).iter().enumerate() {
                if !c.is_zero() {
                    z += basis[bd + k] * c.to_f64();
                }
            }
        }
        z
    }

    /// Algebraic-integer test via the characteristic polynomial over `F`.
    pub fn is_algebraic_integer(&self) -> bool {
        let m = self.tower.mm();
        if self.v.is_zero() {
            return self.u.is_integral(m);
        }
        self.u.add(&self.u).is_integral(m) && self.norm_rel_base().is_integral(m)
    }
}

pub(crate) fn format_terms(terms: &[(&Rational, &str)]) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if name.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(name);
        } else if abs.is_integer() {
            out.push_str(&format!("{abs}{name}"));
        } else {
            out.push_str(&format!("({abs}){name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.basis_names();
        let coords = self.coords();
        let terms: Vec<(&Rational, &str)> = coords
            .iter()
            .zip(names.iter())
            .map(|(c, n)| (c, if n == "1" { "" } else { n.as_str() }))
            .collect();
        f.write_str(&format_terms(&terms))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.tower)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same(&other.tower) && self.u == other.u && self.v == other.v
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.u.hash(state);
        self.v.hash(state);
    }
}

/// Serialized as the coordinate array, or a single rational when the element is rational.
impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if let Some(r) = self.as_rational() {
            return r.serialize(serializer);
        }
        let coords = self.coords();
        let mut seq = serializer.serialize_seq(Some(coords.len()))?;
        for c in &coords {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

// Operators panic on tower mismatch; the `try_*` methods report it instead.
macro_rules! elem_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$try(rhs).expect("tower mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$try(&rhs).expect("tower mismatch")
            }
        }
    };
}

elem_binop!(Add, add, try_add);
elem_binop!(Sub, sub, try_sub);
elem_binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden_tower() -> TowerSpec {
        TowerSpec::biquadratic(-1, 5).unwrap()
    }

    #[test]
    fn sigma_and_relative_norm() {
        let k = golden_tower();
        // θ = (1+√5)/2, σ(θ) = (1-√5)/2
        let theta = k.elem_q(&[(1, 2), (0, 1), (1, 2), (0, 1)]).unwrap();
        let st = theta.sigma().unwrap();
        assert_eq!(st, k.elem_q(&[(1, 2), (0, 1), (-1, 2), (0, 1)]).unwrap());
        // θ² = θ + 1
        assert_eq!(theta.square(), &theta + &k.one());
        assert_eq!(theta.norm_rel().unwrap(), k.from_int(-1));
        assert!(theta.is_algebraic_integer());
        assert!(!theta.scale(&Rational::new(1, 2)).is_algebraic_integer());
    }

    #[test]
    fn golden_ideal_generator_norm() {
        let k = golden_tower();
        let i = k.i().unwrap();
        let theta = k.elem_q(&[(1, 2), (0, 1), (1, 2), (0, 1)]).unwrap();
        // α = 1 + i - iθ, N(α) = 2 + i
        let alpha = &(&k.one() + &i) - &(&i * &theta);
        assert_eq!(alpha.norm_rel().unwrap(), k.gaussian_elem(2, 1).unwrap());
        let n = alpha.norm_rel().unwrap();
        assert_eq!(n.abs_sq().unwrap(), k.from_int(5));
    }

    #[test]
    fn no_extension_errors() {
        let f = TowerSpec::field_only(-1).unwrap();
        assert!(matches!(f.one().sigma(), Err(Error::NoExtension(_))));
        let q = TowerSpec::q();
        assert!(q.from_int(3).norm_rel().is_err());
    }

    #[test]
    fn mismatched_towers() {
        let a = TowerSpec::gaussian().one();
        let b = golden_tower().one();
        assert!(matches!(a.try_add(&b), Err(Error::TowerMismatch(..))));
    }

    #[test]
    fn complex_conjugation_matches_embedding() {
        let k = TowerSpec::over_quadratic(-1, 0, 1).unwrap();
        let x = k.elem_q(&[(1, 1), (2, 1), (-3, 1), (1, 2)]).unwrap();
        let c = x.complex_conj().unwrap();
        assert!((c.embed() - x.embed().conj()).norm() < 1e-12);
        // Q(√(1+i)) is not closed under complex conjugation
        let k = TowerSpec::over_quadratic(-1, 1, 1).unwrap();
        assert!(!k.has_complex_conjugation());
    }

    #[test]
    fn display() {
        let k = golden_tower();
        let x = k.elem_q(&[(1, 2), (-1, 1), (0, 1), (3, 1)]).unwrap();
        assert_eq!(x.to_string(), "1/2 - i + 3i√5");
        assert_eq!(k.zero().to_string(), "0");
    }

    fn arb_elem(k: TowerSpec) -> impl Strategy<Value = FieldElem> {
        proptest::collection::vec((-20i64..20, 1i64..6), 4).prop_map(move |v| k.elem_q(&v).unwrap())
    }

    proptest! {
        #[test]
        fn field_laws(x in arb_elem(golden_tower()), y in arb_elem(golden_tower()), z in arb_elem(golden_tower())) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
            // σ is a ring automorphism, the relative norm is multiplicative
            prop_assert_eq!((&x * &y).sigma().unwrap(), &x.sigma().unwrap() * &y.sigma().unwrap());
            prop_assert_eq!((&x * &y).norm_rel().unwrap(), &x.norm_rel().unwrap() * &y.norm_rel().unwrap());
            let e = (x.embed() * y.embed() - (&x * &y).embed()).norm();
            prop_assert!(e < 1e-6 * (1.0 + (x.embed() * y.embed()).norm()));
        }
    }
}
