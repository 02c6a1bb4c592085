//! Arithmetic in the base field `F = Q` or `F = Q(√m)`.
//!
//! Elements are `p + q·√m`; for `F = Q` the `q` slot is always zero and `m`
//! is passed as 0. The tower code builds `K = F(√a)` on top of this.

use num_complex::Complex64;

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BaseElem {
    // [p, q] for p + q·√m
    c: [Rational; 2],
}

impl BaseElem {
    pub fn new(p: Rational, q: Rational) -> Self {
        BaseElem { c: [p, q] }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn from_rational(p: Rational) -> Self {
        Self::new(p, Rational::zero())
    }

    pub fn from_coords(coords: Vec<Rational>) -> Self {
        let mut it = coords.into_iter();
        let p = it.next().unwrap_or_default();
        let q = it.next().unwrap_or_default();
        Self::new(p, q)
    }

    #[inline]
    pub fn p(&self) -> &Rational {
        &self.c[0]
    }

    #[inline]
    pub fn q(&self) -> &Rational {
        &self.c[1]
    }

    /// The first `base_dim` coordinates.
    pub fn coords(&self, base_dim: usize) -> &[Rational] {
        &self.c[..base_dim]
    }

    pub fn is_zero(&self) -> bool {
        self.p().is_zero() && self.q().is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q().is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.q().is_zero() && o.q().is_zero() {
            return Self::from_rational(self.p() + o.p());
        }
        Self::new(self.p() + o.p(), self.q() + o.q())
    }

    pub fn sub(&self, o: &Self) -> Self {
        if self.q().is_zero() && o.q().is_zero() {
            return Self::from_rational(self.p() - o.p());
        }
        Self::new(self.p() - o.p(), self.q() - o.q())
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.p(), -self.q())
    }

    pub fn mul(&self, m: i64, o: &Self) -> Self {
        if self.q().is_zero() && o.q().is_zero() {
            return Self::from_rational(self.p() * o.p());
        }
        let mq = &(self.q() * o.q()) * &Rational::from_int(m);
        Self::new(&(self.p() * o.p()) + &mq, &(self.p() * o.q()) + &(self.q() * o.p()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.p() * r, self.q() * r)
    }

    /// Conjugation of `F` over `Q`: `√m ↦ -√m`.
    pub fn conj(&self) -> Self {
        Self::new(self.p().clone(), -self.q())
    }

    /// Complex conjugation of `F` under the principal embedding of `√m`.
    pub fn complex_conj(&self, m: i64) -> Self {
        if m < 0 {
            self.conj()
        } else {
            self.clone()
        }
    }

    /// `N_{F/Q}(x) = p² - m q²`.
    pub fn norm(&self, m: i64) -> Rational {
        if self.q().is_zero() {
            return self.p() * self.p();
        }
        &(self.p() * self.p()) - &(&(self.q() * self.q()) * &Rational::from_int(m))
    }

    pub fn trace(&self) -> Rational {
        self.p() + self.p()
    }

    /// Panics on zero; callers check first.
    pub fn inv(&self, m: i64) -> Self {
        let n = self.norm(m).recip().expect("inverse of zero base element");
        self.conj().scale(&n)
    }

    pub fn embed(&self, sqrt_m: Complex64) -> Complex64 {
        let mut z = Complex64::new(self.p().to_f64(), 0.0);
        if !self.q().is_zero() {
            z += sqrt_m * self.q().to_f64();
        }
        z
    }

    pub fn is_integral(&self, m: i64) -> bool {
        self.trace().is_integer() && self.norm(m).is_integer()
    }

    pub fn display(&self, m: Option<i64>) -> String {
        let gen = match m {
            Some(-1) => "i".to_string(),
            Some(m) => format!("√{m}"),
            None => String::new(),
        };
        super::format_terms(&[(self.p(), ""), (self.q(), gen.as_str())])
    }
}

/// Exact square root in `F`, if one exists.
pub(crate) fn sqrt(m: i64, y: &BaseElem) -> Option<BaseElem> {
    if y.q().is_zero() {
        if let Some(s) = y.p().sqrt_exact() {
            return Some(BaseElem::from_rational(s));
        }
        if m == 0 {
            return None;
        }
        // (s√m)² = m s²
        let s = (y.p() / &Rational::from_int(m)).sqrt_exact()?;
        return Some(BaseElem::new(Rational::zero(), s));
    }
    if m == 0 {
        return None;
    }
    // (x + z√m)² = p + q√m  ⇒  x² + m z² = p, 2xz = q,
    // z² = (p ± √(p² - m q²)) / (2m)
    let (p, q) = (y.p(), y.q());
    let mr = Rational::from_int(m);
    let disc = &(p * p) - &(&(q * q) * &mr);
    let sd = disc.sqrt_exact()?;
    for root in [p + &sd, p - &sd] {
        let z2 = &root / &(&mr + &mr);
        if let Some(z) = z2.sqrt_exact() {
            if z.is_zero() {
                continue;
            }
            let x = q / &(&z + &z);
            let cand = BaseElem::new(x, z);
            if cand.mul(m, &cand) == *y {
                return Some(cand);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: i64, q: i64) -> BaseElem {
        BaseElem::new(Rational::from_int(p), Rational::from_int(q))
    }

    #[test]
    fn square_roots_in_gaussian_field() {
        // 2i = (1+i)²
        let r = sqrt(-1, &b(0, 2)).unwrap();
        assert_eq!(r.mul(-1, &r), b(0, 2));
        // -1 = i²
        assert_eq!(sqrt(-1, &b(-1, 0)), Some(b(0, 1)));
        // 3 + 4i = (2+i)²
        let r = sqrt(-1, &b(3, 4)).unwrap();
        assert_eq!(r.mul(-1, &r), b(3, 4));
        assert!(sqrt(-1, &b(0, 1)).is_none());
        assert!(sqrt(-1, &b(5, 0)).is_none());
    }

    #[test]
    fn inverse_round_trips() {
        let x = b(3, -2);
        assert_eq!(x.mul(5, &x.inv(5)), b(1, 0));
    }
}
