//! The Cayley–Dickson double `Cay(K, b)` of a quadratic extension `K = F(√a)`.
//!
//! Elements are pairs `(u, v) ∈ K × K`, read as `u + j·v`, multiplied by
//!
//! ```text
//! (u, v)(u', v') = (uu' + b·v'·σ(v),  σ(u)·v' + u'·v)
//! ```
//!
//! For `b ∈ F` this is an associative quaternion algebra; for `b ∈ K \ F` it is
//! nonassociative, has nucleus `K` and is always a division algebra.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{base_sqrt, BaseElem, FieldElem, Rational, TowerSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct AlgElem {
    pub u: FieldElem,
    pub v: FieldElem,
}

impl AlgElem {
    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn add(&self, o: &AlgElem) -> AlgElem {
        AlgElem {
            u: &self.u + &o.u,
            v: &self.v + &o.v,
        }
    }

    pub fn sub(&self, o: &AlgElem) -> AlgElem {
        AlgElem {
            u: &self.u - &o.u,
            v: &self.v - &o.v,
        }
    }

    /// Scalar multiple by `c ∈ K` acting on both components (`c·(u, v) = (cu, cv)`).
    pub fn scale(&self, c: &FieldElem) -> AlgElem {
        AlgElem {
            u: c * &self.u,
            v: c * &self.v,
        }
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of the division test.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Division {
    Yes,
    /// Not a division algebra; `witness` satisfies `N_{K/F}(witness) = b`.
    No {
        witness: FieldElem,
    },
    /// The bounded norm search found nothing.
    Unknown,
}

impl Division {
    pub fn as_str(&self) -> &'static str {
        match self {
            Division::Yes => "yes",
            Division::No { .. } => "no",
            Division::Unknown => "unknown",
        }
    }
}

impl Serialize for Division {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Default numerator/denominator height for the associative norm search.
pub const DEFAULT_NORM_SEARCH_HEIGHT: i64 = 50;
const NORM_SEARCH_BUDGET: usize = 400_000;

/// `Cay(K, b)` with `K` the top field of `tower`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSpec {
    tower: TowerSpec,
    b: FieldElem,
}

impl AlgebraSpec {
    pub fn new(tower: TowerSpec, b: FieldElem) -> Result<Self> {
        if !tower.has_extension() {
            return Err(Error::NoExtension(tower.to_string()));
        }
        if !b.tower().same(&tower) {
            return Err(Error::TowerMismatch(b.tower().to_string(), tower.to_string()));
        }
        if b.is_zero() {
            return Err(Error::InvalidSpec("the scalar b must be nonzero".into()));
        }
        Ok(AlgebraSpec { tower, b })
    }

    pub fn tower(&self) -> &TowerSpec {
        &self.tower
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    /// `b ∉ F`.
    pub fn is_nonassociative(&self) -> bool {
        !self.b.is_in_base()
    }

    pub fn elem(&self, u: FieldElem, v: FieldElem) -> Result<AlgElem> {
        for x in [&u, &v] {
            if !x.tower().same(&self.tower) {
                return Err(Error::TowerMismatch(x.tower().to_string(), self.tower.to_string()));
            }
        }
        Ok(AlgElem { u, v })
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem {
            u: self.tower.zero(),
            v: self.tower.zero(),
        }
    }

    pub fn one(&self) -> AlgElem {
        AlgElem {
            u: self.tower.one(),
            v: self.tower.zero(),
        }
    }

    /// `k ∈ K` as `(k, 0)`.
    pub fn from_k(&self, k: FieldElem) -> AlgElem {
        AlgElem {
            u: k,
            v: self.tower.zero(),
        }
    }

    /// `i = √a`.
    pub fn i(&self) -> AlgElem {
        self.from_k(self.tower.sqrt_a().expect("tower has an extension"))
    }

    pub fn j(&self) -> AlgElem {
        AlgElem {
            u: self.tower.zero(),
            v: self.tower.one(),
        }
    }

    /// The `K`-basis `{1, i, j, ji}` used for nucleus checks.
    pub fn basis(&self) -> [AlgElem; 4] {
        let ji = self.mul(&self.j(), &self.i());
        [self.one(), self.i(), self.j(), ji]
    }

    fn check(&self, x: &AlgElem) -> Result<()> {
        for c in [&x.u, &x.v] {
            if !c.tower().same(&self.tower) {
                return Err(Error::TowerMismatch(c.tower().to_string(), self.tower.to_string()));
            }
        }
        Ok(())
    }

    pub fn try_mul(&self, x: &AlgElem, y: &AlgElem) -> Result<AlgElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Panics if an argument lives in another tower; see [`try_mul`](Self::try_mul).
    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let sv = x.v.sigma().expect("extension present");
        let su = x.u.sigma().expect("extension present");
        AlgElem {
            u: &(&x.u * &y.u) + &(&self.b * &(&y.v * &sv)),
            v: &(&su * &y.v) + &(&y.u * &x.v),
        }
    }

    /// The canonical involution `(u, v) ↦ (σ(u), -v)`.
    pub fn conj(&self, x: &AlgElem) -> AlgElem {
        AlgElem {
            u: x.u.sigma().expect("extension present"),
            v: -&x.v,
        }
    }

    /// `N_A(u + jv) = N(u) - b·N(v)`; lies in `F` iff `b ∈ F`.
    pub fn norm(&self, x: &AlgElem) -> FieldElem {
        let nu = x.u.norm_rel().expect("extension present");
        let nv = x.v.norm_rel().expect("extension present");
        &nu - &(&self.b * &nv)
    }

    /// `[x, y, z] = (xy)z - x(yz)`.
    pub fn associator(&self, x: &AlgElem, y: &AlgElem, z: &AlgElem) -> AlgElem {
        let l = self.mul(&self.mul(x, y), z);
        let r = self.mul(x, &self.mul(y, z));
        l.sub(&r)
    }

    fn vanishes_on_basis(&self, f: impl Fn(&AlgElem, &AlgElem) -> AlgElem) -> bool {
        let basis = self.basis();
        basis.iter().all(|p| basis.iter().all(|q| f(p, q).is_zero()))
    }

    /// `[x, A, A] = 0`. The associator is trilinear, so basis pairs suffice.
    pub fn in_left_nucleus(&self, x: &AlgElem) -> bool {
        self.vanishes_on_basis(|p, q| self.associator(x, p, q))
    }

    pub fn in_middle_nucleus(&self, x: &AlgElem) -> bool {
        self.vanishes_on_basis(|p, q| self.associator(p, x, q))
    }

    pub fn in_right_nucleus(&self, x: &AlgElem) -> bool {
        self.vanishes_on_basis(|p, q| self.associator(p, q, x))
    }

    pub fn in_nucleus(&self, x: &AlgElem) -> bool {
        self.in_left_nucleus(x) && self.in_middle_nucleus(x) && self.in_right_nucleus(x)
    }

    /// Division test with the default search height.
    pub fn is_division(&self) -> Division {
        self.is_division_with_height(DEFAULT_NORM_SEARCH_HEIGHT)
    }

    /// Nonassociative doubles are always division algebras. For `b ∈ F` the
    /// algebra is division iff `b` is not a relative norm; this searches for
    /// `x = u + v√a` with `u² = b + a·v²`, `v` of bounded height.
    pub fn is_division_with_height(&self, height: i64) -> Division {
        if self.is_nonassociative() {
            return Division::Yes;
        }
        if self.is_golden_quaternions() {
            return Division::Yes;
        }
        let t = &self.tower;
        let m = t.mm();
        let a = t.base_a().expect("extension present").clone();
        let (b0, _) = self.b.base_components();
        let b = BaseElem::from_coords(b0);
        let mut budget = NORM_SEARCH_BUDGET;
        for h in 0..=height.max(0) {
            for v in base_elems_of_height(t.base_dim(), h) {
                if budget == 0 {
                    return Division::Unknown;
                }
                budget -= 1;
                let rhs = b.add(&a.mul(m, &v.mul(m, &v)));
                if let Some(u) = base_sqrt(m, &rhs).or_else(|| rhs.is_zero().then(BaseElem::zero)) {
                    let mut coords = u.coords(t.base_dim()).to_vec();
                    coords.extend_from_slice(v.coords(t.base_dim()));
                    let witness = t.elem(coords).expect("dimension matches");
                    debug_assert_eq!(witness.norm_rel().unwrap(), self.b);
                    return Division::No { witness };
                }
            }
        }
        Division::Unknown
    }

    // Cay(Q(i)(√5), i): the quaternion algebra behind the Golden code, known to be division.
    fn is_golden_quaternions(&self) -> bool {
        let t = &self.tower;
        t.m() == Some(-1)
            && t.a_coords()
                .is_some_and(|a| a[0] == Rational::from_int(5) && a[1].is_zero())
            && t.i().is_ok_and(|i| i == self.b)
    }

    /// `Cay(K, b) ≅ Cay(K, b·d²)`; only claimed (and only offered) for `b ∈ F`.
    pub fn rescale(&self, d: &FieldElem) -> Result<AlgebraSpec> {
        if self.is_nonassociative() {
            return Err(Error::InvalidSpec(
                "rescaling b by a square is only available for associative algebras".into(),
            ));
        }
        if !d.is_in_base() || d.is_zero() {
            return Err(Error::NotInBase(d.to_string()));
        }
        AlgebraSpec::new(self.tower.clone(), &self.b * &d.square())
    }
}

// All v = (n₁ + n₂√m)/d in lowest terms with max(|nᵢ|, d) = h.
fn base_elems_of_height(base_dim: usize, h: i64) -> Vec<BaseElem> {
    let mut out = Vec::new();
    if h == 0 {
        out.push(BaseElem::zero());
        return out;
    }
    let r = |n: i64, d: i64| Rational::new(n, d);
    for d in 1..=h {
        if base_dim == 1 {
            for n in -h..=h {
                if n.abs().max(d) != h || num_integer::gcd(n, d) != 1 {
                    continue;
                }
                out.push(BaseElem::from_rational(r(n, d)));
            }
        } else {
            for n1 in -h..=h {
                for n2 in -h..=h {
                    if n1.abs().max(n2.abs()).max(d) != h || num_integer::gcd(num_integer::gcd(n1, n2), d) != 1 {
                        continue;
                    }
                    out.push(BaseElem::new(r(n1, d), r(n2, d)));
                }
            }
        }
    }
    out
}

/// Isomorphism criterion for quaternion algebras over `R` with non-real scalars:
/// `Cay(C, b) ≅ Cay(C, b')` iff `b' = t·b` or `b' = t·b̄` for some `t > 0`.
pub fn iso_check_real(b: Complex64, b2: Complex64, tol: f64) -> Result<bool> {
    for z in [b, b2] {
        if z.im.abs() <= tol {
            return Err(Error::RealInput(format!("{z}")));
        }
    }
    let positive_real = |z: Complex64| z.im.abs() <= tol * z.norm().max(1.0) && z.re > tol;
    Ok(positive_real(b2 / b) || positive_real(b2 / b.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cay_qi(b_re: i64, b_im: i64) -> AlgebraSpec {
        let t = TowerSpec::gaussian();
        let b = t.gaussian_elem(b_re, b_im).unwrap();
        AlgebraSpec::new(t, b).unwrap()
    }

    #[test]
    fn j_squared_is_b() {
        let s = cay_qi(0, 1);
        let j = s.j();
        assert_eq!(s.mul(&j, &j), s.from_k(s.b().clone()));
    }

    #[test]
    fn third_power_nonassociativity() {
        let s = cay_qi(0, 1);
        let j = s.j();
        let i = s.tower().i().unwrap();
        let j2 = s.mul(&j, &j);
        assert_eq!(s.mul(&j2, &j), s.elem(s.tower().zero(), -&i).unwrap());
        assert_eq!(s.mul(&j, &j2), s.elem(s.tower().zero(), i.clone()).unwrap());
        let two_i = i.scale(&Rational::from_int(-2));
        assert_eq!(s.associator(&j, &j, &j), s.elem(s.tower().zero(), two_i).unwrap());
        assert!(!s.in_nucleus(&j));
        assert!(s.in_nucleus(&s.from_k(i)));
    }

    #[test]
    fn basis_products() {
        let s = cay_qi(0, 1);
        let [one, i, j, ji] = s.basis();
        assert_eq!(s.mul(&one, &ji), ji);
        assert_eq!(s.mul(&i, &i), s.from_k(s.tower().a().unwrap()));
        assert_eq!(ji, s.elem(s.tower().zero(), s.tower().sqrt_a().unwrap()).unwrap());
        // ij = -ji
        assert_eq!(s.mul(&i, &j).add(&ji), s.zero());
    }

    #[test]
    fn division_verdicts() {
        assert_eq!(cay_qi(0, 1).is_division(), Division::Yes);
        match cay_qi(1, 0).is_division() {
            Division::No { witness } => assert!(witness.is_one()),
            d => panic!("expected a norm witness, got {d:?}"),
        }
        // Hamilton quaternions over Q: -1 is not a norm from Q(i)
        let t = TowerSpec::gaussian();
        let s = AlgebraSpec::new(t.clone(), t.from_int(-1)).unwrap();
        assert_eq!(s.is_division_with_height(6), Division::Unknown);
        // 5 = N(2 + i)
        let s = AlgebraSpec::new(t.clone(), t.from_int(5)).unwrap();
        assert!(matches!(s.is_division(), Division::No { .. }));
        let k = TowerSpec::biquadratic(-1, 5).unwrap();
        let golden = AlgebraSpec::new(k.clone(), k.i().unwrap()).unwrap();
        assert_eq!(golden.is_division(), Division::Yes);
    }

    #[test]
    fn rescale_only_for_associative() {
        let t = TowerSpec::gaussian();
        let s = AlgebraSpec::new(t.clone(), t.from_int(-1)).unwrap();
        let r = s.rescale(&t.from_int(3)).unwrap();
        assert_eq!(r.b(), &t.from_int(-9));
        assert!(cay_qi(0, 1).rescale(&t.from_int(3)).is_err());
    }

    #[test]
    fn real_isomorphism_criterion() {
        let i = Complex64::new(0.0, 1.0);
        assert!(iso_check_real(i, -i, 1e-10).unwrap());
        assert!(iso_check_real(i, 2.0 * i, 1e-10).unwrap());
        assert!(!iso_check_real(i, Complex64::new(1.0, 1.0), 1e-10).unwrap());
        assert!(iso_check_real(i, Complex64::new(-1.0, 0.0), 1e-10).is_err());
    }

    #[test]
    fn rejects_bad_algebras() {
        let f = TowerSpec::field_only(-1).unwrap();
        assert!(AlgebraSpec::new(f.clone(), f.one()).is_err());
        let t = TowerSpec::gaussian();
        assert!(AlgebraSpec::new(t.clone(), t.zero()).is_err());
    }
}
