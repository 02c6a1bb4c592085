use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::base::{self, BaseElem};
use super::{FieldElem, Rational};
use crate::error::{Error, Result};

/// A quadratic tower `Q ⊆ F ⊆ K` of depth at most two.
///
/// `F` is either `Q` or `Q(√m)` for a square-free `m ∉ {0, 1}`; when an
/// extension parameter `a ∈ F` is present, `K = F(√a)` and `σ: √a ↦ -√a` is the
/// top-level Galois automorphism. Cloning is cheap (shared data).
#[derive(Clone)]
pub struct TowerSpec(Arc<TowerData>);

struct TowerData {
    m: Option<i64>,
    a: Option<BaseElem>,
    base_dim: usize,
    dim: usize,
    basis_embed: Vec<Complex64>,
    // c ∈ F with complex_conj(√a) = c·√a under the fixed embedding
    conj_coeff: Option<BaseElem>,
}

pub(crate) fn is_square_free(m: i64) -> bool {
    if m == 0 {
        return false;
    }
    let mut n = m.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

impl TowerSpec {
    /// General constructor; `a` is given by its coordinates over `F`
    /// (one rational for `F = Q`, two for `F = Q(√m)`).
    pub fn new(m: Option<i64>, a: Option<Vec<Rational>>) -> Result<Self> {
        if let Some(m) = m {
            if m == 1 || !is_square_free(m) {
                return Err(Error::InvalidTower(format!(
                    "base parameter m = {m} must be square-free and different from 0 and 1"
                )));
            }
        }
        let base_dim = if m.is_some() { 2 } else { 1 };
        let a = match a {
            None => None,
            Some(mut coords) => {
                if coords.len() > base_dim {
                    if coords[base_dim..].iter().any(|c| !c.is_zero()) {
                        return Err(Error::InvalidTower(format!(
                            "extension parameter has {} coordinates but the base field has dimension {base_dim}",
                            coords.len()
                        )));
                    }
                    coords.truncate(base_dim);
                }
                coords.resize(base_dim, Rational::zero());
                let a = BaseElem::from_coords(coords);
                if a.is_zero() {
                    return Err(Error::InvalidTower("extension parameter a = 0".into()));
                }
                if base::sqrt(m.unwrap_or(0), &a).is_some() {
                    return Err(Error::InvalidTower(format!(
                        "a = {} is a square in the base field",
                        a.display(m)
                    )));
                }
                Some(a)
            }
        };
        let dim = base_dim * if a.is_some() { 2 } else { 1 };

        let sqrt_m = match m {
            Some(m) if m < 0 => Complex64::new(0.0, ((-m) as f64).sqrt()),
            Some(m) => Complex64::new((m as f64).sqrt(), 0.0),
            None => Complex64::new(0.0, 0.0),
        };
        let mut basis_embed = vec![Complex64::new(1.0, 0.0)];
        if m.is_some() {
            basis_embed.push(sqrt_m);
        }
        let mut conj_coeff = None;
        if let Some(a) = &a {
            let a_emb = a.embed(sqrt_m);
            let sqrt_a = a_emb.sqrt();
            basis_embed.push(sqrt_a);
            if m.is_some() {
                basis_embed.push(sqrt_m * sqrt_a);
            }
            // complex conjugation preserves K iff conj(a)/a is a square in F
            let mm = m.unwrap_or(0);
            let ratio = a.complex_conj(mm).mul(mm, &a.inv(mm));
            if let Some(c) = base::sqrt(mm, &ratio) {
                let target = sqrt_a.conj();
                let plus = c.embed(sqrt_m) * sqrt_a;
                let c = if (plus - target).norm() <= (-plus - target).norm() {
                    c
                } else {
                    c.neg()
                };
                conj_coeff = Some(c);
            }
        }

        Ok(TowerSpec(Arc::new(TowerData {
            m,
            a,
            base_dim,
            dim,
            basis_embed,
            conj_coeff,
        })))
    }

    /// The field `Q` itself.
    pub fn q() -> Self {
        Self::new(None, None).expect("Q is a valid tower")
    }

    /// `F = Q(√m)` with no extension level.
    pub fn field_only(m: i64) -> Result<Self> {
        Self::new(Some(m), None)
    }

    /// `K = Q(√a)` over `F = Q`.
    pub fn quadratic_over_q(a: impl Into<Rational>) -> Result<Self> {
        Self::new(None, Some(vec![a.into()]))
    }

    /// `K = Q(√m)(√a)` with rational `a`.
    pub fn biquadratic(m: i64, a: impl Into<Rational>) -> Result<Self> {
        Self::new(Some(m), Some(vec![a.into(), Rational::zero()]))
    }

    /// `K = Q(√m)(√a)` with `a = a0 + a1·√m`.
    pub fn over_quadratic(m: i64, a0: impl Into<Rational>, a1: impl Into<Rational>) -> Result<Self> {
        Self::new(Some(m), Some(vec![a0.into(), a1.into()]))
    }

    /// The Gaussian field `Q(i)` presented as `Q(√-1)` over `Q`.
    pub fn gaussian() -> Self {
        Self::quadratic_over_q(-1).expect("Q(i) is valid")
    }

    pub fn m(&self) -> Option<i64> {
        self.0.m
    }

    /// Coordinates of `a` over the basis of `F`.
    pub fn a_coords(&self) -> Option<&[Rational]> {
        self.0.a.as_ref().map(|a| a.coords(self.0.base_dim))
    }

    pub fn has_extension(&self) -> bool {
        self.0.a.is_some()
    }

    /// Number of rational coordinates of an element.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn base_dim(&self) -> usize {
        self.0.base_dim
    }

    pub(crate) fn base_a(&self) -> Option<&BaseElem> {
        self.0.a.as_ref()
    }

    pub(crate) fn mm(&self) -> i64 {
        self.0.m.unwrap_or(0)
    }

    pub(crate) fn conj_coeff(&self) -> Option<&BaseElem> {
        self.0.conj_coeff.as_ref()
    }

    pub(crate) fn basis_embed(&self) -> &[Complex64] {
        &self.0.basis_embed
    }

    /// True when `a` lies in `Q` (so the base conjugation extends to `K`).
    pub fn a_is_rational(&self) -> bool {
        self.0.a.as_ref().is_none_or(|a| a.is_rational())
    }

    /// True if complex conjugation (under the fixed embedding) maps `K` to itself.
    pub fn has_complex_conjugation(&self) -> bool {
        !self.has_extension() || self.0.conj_coeff.is_some()
    }

    /// `F` is `Q` or an imaginary quadratic field.
    pub fn base_is_q_or_imaginary(&self) -> bool {
        self.0.m.is_none_or(|m| m < 0)
    }

    /// The top field is `Q` or an imaginary quadratic field.
    pub fn top_is_q_or_imaginary_quadratic(&self) -> bool {
        match (&self.0.m, &self.0.a) {
            (None, None) => true,
            (Some(m), None) => *m < 0,
            (None, Some(a)) => a.p().is_negative(),
            (Some(_), Some(_)) => false,
        }
    }

    pub(crate) fn same(&self, other: &TowerSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.m == other.0.m && self.0.a == other.0.a)
    }

    /// The base field `F` as a tower of its own (no extension level).
    pub fn base_tower(&self) -> TowerSpec {
        TowerSpec::new(self.0.m, None).expect("base of a valid tower is valid")
    }

    pub fn elem(&self, coords: Vec<Rational>) -> Result<FieldElem> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidTower(format!(
                "expected {} coordinates for {self}, got {}",
                self.dim(),
                coords.len()
            )));
        }
        Ok(FieldElem::from_parts(self.clone(), coords))
    }

    /// Like [`elem`](Self::elem) but takes integer/rational pairs, for literals in tests and presets.
    pub fn elem_q(&self, coords: &[(i64, i64)]) -> Result<FieldElem> {
        self.elem(coords.iter().map(|&(n, d)| Rational::new(n, d)).collect())
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_parts(self.clone(), vec![Rational::zero(); self.dim()])
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: impl Into<Rational>) -> FieldElem {
        let mut coords = vec![Rational::zero(); self.dim()];
        coords[0] = r.into();
        FieldElem::from_parts(self.clone(), coords)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rational(n)
    }

    /// Embeds an element of `F`, given by its coordinates over `{1, √m}`.
    pub fn from_base(&self, coords: &[Rational]) -> Result<FieldElem> {
        if coords.len() != self.base_dim() {
            return Err(Error::InvalidTower(format!(
                "expected {} base coordinates for {self}, got {}",
                self.base_dim(),
                coords.len()
            )));
        }
        let mut all = coords.to_vec();
        all.resize(self.dim(), Rational::zero());
        Ok(FieldElem::from_parts(self.clone(), all))
    }

    /// `√m`, the generator of `F` over `Q`.
    pub fn sqrt_m(&self) -> Result<FieldElem> {
        if self.0.m.is_none() {
            return Err(Error::InvalidTower(format!("{self} has base field Q")));
        }
        let mut coords = vec![Rational::zero(); self.dim()];
        coords[1] = Rational::one();
        Ok(FieldElem::from_parts(self.clone(), coords))
    }

    /// `√a`, the generator of `K` over `F`.
    pub fn sqrt_a(&self) -> Result<FieldElem> {
        if !self.has_extension() {
            return Err(Error::NoExtension(self.to_string()));
        }
        let mut coords = vec![Rational::zero(); self.dim()];
        coords[self.base_dim()] = Rational::one();
        Ok(FieldElem::from_parts(self.clone(), coords))
    }

    /// The extension parameter `a` as an element of the tower.
    pub fn a(&self) -> Result<FieldElem> {
        let a = self.0.a.as_ref().ok_or_else(|| Error::NoExtension(self.to_string()))?;
        self.from_base(a.coords(self.0.base_dim))
    }

    /// The Gaussian unit `i`, when the tower contains `√-1` as a generator.
    pub fn i(&self) -> Result<FieldElem> {
        if self.0.m == Some(-1) {
            return self.sqrt_m();
        }
        if self.0.m.is_none() {
            if let Some(a) = &self.0.a {
                if *a.p() == Rational::from_int(-1) {
                    return self.sqrt_a();
                }
            }
        }
        Err(Error::NotGaussian(self.to_string()))
    }

    /// `re + im·i` for a tower containing `i`.
    pub fn gaussian_elem(&self, re: impl Into<Rational>, im: impl Into<Rational>) -> Result<FieldElem> {
        let i = self.i()?;
        Ok(&self.from_rational(re) + &i.scale(&im.into()))
    }

    fn gen_names(&self) -> (String, String) {
        let m_name = match self.0.m {
            Some(-1) => "i".to_string(),
            Some(m) => format!("√{m}"),
            None => String::new(),
        };
        let a_name = match &self.0.a {
            Some(a) if self.0.m.is_none() && *a.p() == Rational::from_int(-1) => "i".into(),
            Some(a) if a.is_rational() => format!("√{}", a.p()),
            Some(a) => format!("√({})", a.display(self.0.m)),
            None => String::new(),
        };
        (m_name, a_name)
    }

    /// Human-readable names for the `Q`-basis elements.
    pub fn basis_names(&self) -> Vec<String> {
        let (mn, an) = self.gen_names();
        let mut names = vec!["1".to_string()];
        if self.0.m.is_some() {
            names.push(mn.clone());
        }
        if self.has_extension() {
            names.push(an.clone());
            if self.0.m.is_some() {
                names.push(format!("{mn}{an}"));
            }
        }
        names
    }
}

impl PartialEq for TowerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for TowerSpec {}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.0.m {
            None => "Q".to_string(),
            Some(-1) => "Q(i)".to_string(),
            Some(m) => format!("Q(√{m})"),
        };
        match &self.0.a {
            None => write!(f, "{base}"),
            Some(_) => {
                let (_, an) = self.gen_names();
                if self.0.m.is_none() {
                    write!(f, "Q({an})")
                } else {
                    write!(f, "{base}({an})")
                }
            }
        }
    }
}

impl fmt::Debug for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerSpec({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TowerSpec::field_only(4).is_err());
        assert!(TowerSpec::field_only(1).is_err());
        assert!(TowerSpec::field_only(0).is_err());
        assert!(TowerSpec::quadratic_over_q(9).is_err());
        assert!(TowerSpec::quadratic_over_q(Rational::new(4, 9)).is_err());
        // -1 is a square in Q(i)
        assert!(TowerSpec::biquadratic(-1, -1).is_err());
        // 2i = (1+i)^2 is a square in Q(i)
        assert!(TowerSpec::over_quadratic(-1, 0, 2).is_err());
        assert!(TowerSpec::over_quadratic(-1, 0, 1).is_ok());
        assert!(TowerSpec::biquadratic(-1, 5).is_ok());
    }

    #[test]
    fn complex_conjugation_coefficients() {
        let t = TowerSpec::biquadratic(-1, 5).unwrap();
        assert!(t.has_complex_conjugation());
        // conj(√i) = -i·√i
        let t = TowerSpec::over_quadratic(-1, 0, 1).unwrap();
        let c = t.conj_coeff().unwrap();
        assert_eq!(c.coords(2), &[Rational::zero(), Rational::from_int(-1)]);
        let g = TowerSpec::gaussian();
        assert!(g.has_complex_conjugation());
    }

    #[test]
    fn names() {
        assert_eq!(TowerSpec::biquadratic(-1, 5).unwrap().to_string(), "Q(i)(√5)");
        assert_eq!(TowerSpec::gaussian().to_string(), "Q(i)");
        assert_eq!(
            TowerSpec::biquadratic(-1, 5).unwrap().basis_names(),
            vec!["1", "i", "√5", "i√5"]
        );
    }
}
