//! Declarative code descriptions and the JSON file format.
//!
//! Exact quantities are never floats in the file: a rational is an integer,
//! a string `"n/d"`, or `{"num": n, "den": d}`; a field element is a rational
//! or an array of rational coordinates over the tower's basis
//! (`{1, √a}` or `{1, √m, √a, √m√a}`).

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cayley_dickson::AlgebraSpec;
use crate::code_metrics::Constellation;
use crate::error::{Error, Result};
use crate::exact_algebra::{rational_from_json, FieldElem, Rational, TowerSpec};
use crate::representations::{golden_codeword, lambda2, lambda4, multiblock, Codeword, Shape};

/// A rational or a coordinate vector, as written in a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemRepr {
    Rational(Rational),
    Coords(Vec<Rational>),
}

impl ElemRepr {
    pub fn from_elem(x: &FieldElem) -> Self {
        match x.as_rational() {
            Some(r) => ElemRepr::Rational(r),
            None => ElemRepr::Coords(x.coords()),
        }
    }

    pub fn to_elem(&self, tower: &TowerSpec) -> Result<FieldElem> {
        match self {
            ElemRepr::Rational(r) => Ok(tower.from_rational(r.clone())),
            ElemRepr::Coords(c) => tower.elem(c.clone()),
        }
    }
}

impl<'de> Deserialize<'de> for ElemRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Array(items) => items
                .iter()
                .enumerate()
                .map(|(k, x)| rational_from_json(x).map_err(|e| de::Error::custom(format!("coordinate {k}: {e}"))))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(ElemRepr::Coords),
            _ => rational_from_json(&v)
                .map(ElemRepr::Rational)
                .map_err(de::Error::custom),
        }
    }
}

impl Serialize for ElemRepr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ElemRepr::Rational(r) => r.serialize(s),
            ElemRepr::Coords(c) => c.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    /// Square-free `m` for `F = Q(√m)`; absent for `F = Q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    /// `a ∈ F` with `K = F(√a)`: a rational, or coordinates over `{1, √m}`.
    pub a: ElemRepr,
}

/// `b = b_n / b_d` for 2×2 and 2×4 codes, or `p = p_n/p_d`, `q = q_n/q_d` for 4×4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NvdFractionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_n: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_d: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_n: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_d: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_n: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_d: Option<ElemRepr>,
}

/// Values a code is expected to exhibit; `check` compares against these.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Exact minimum determinant of the shaped code over its constellation
    /// (`|det|²` for square shapes, `|N_{K/F}(det X)|` for 2×4).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_det: Option<Rational>,
    /// Shaped NVD constant, in the same units as `min_det`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvd: Option<Rational>,
    /// Whether the scaled basis-embedding matrix `G` is unitary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<bool>,
    /// Whether every layer matrix and `G` are unitary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info_lossless: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform_energy: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_diversity: Option<bool>,
}

/// On-disk form of a [`CodeSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpecFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub tower: TowerFile,
    pub b: ElemRepr,
    pub shape: Shape,
    /// `F`-basis `{u₀, u₁}` of `K`; defaults to `{1, √a}`. Ignored for 4×4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<[ElemRepr; 2]>,
    /// Ideal generator `α`; symbols are multiplied by it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transpose: bool,
    /// `n` such that codewords are scaled by `1/√n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shaping: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constellation: Option<Constellation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvd_fraction: Option<NvdFractionFile>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub expect: Expectations,
}

fn is_default(e: &Expectations) -> bool {
    *e == Expectations::default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum NvdFraction {
    /// `b = b_n / b_d`.
    Scalar { b_n: FieldElem, b_d: FieldElem },
    /// `b = p + q√a` with `p = p_n/p_d`, `q = q_n/q_d` in `F`.
    Parts {
        p_n: FieldElem,
        p_d: FieldElem,
        q_n: FieldElem,
        q_d: FieldElem,
    },
}

/// A fully validated code description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub name: String,
    pub description: String,
    pub algebra: AlgebraSpec,
    pub shape: Shape,
    pub basis: [FieldElem; 2],
    pub ideal: Option<FieldElem>,
    pub transpose: bool,
    pub shaping: Option<u32>,
    pub constellation: Constellation,
    pub nvd_fraction: Option<NvdFraction>,
    pub expect: Expectations,
}

impl CodeSpec {
    pub fn tower(&self) -> &TowerSpec {
        self.algebra.tower()
    }

    pub fn b(&self) -> &FieldElem {
        self.algebra.b()
    }

    /// `α·u₀, α·u₁` (the plain basis when there is no ideal).
    pub fn effective_basis(&self) -> [FieldElem; 2] {
        match &self.ideal {
            None => self.basis.clone(),
            Some(a) => [a * &self.basis[0], a * &self.basis[1]],
        }
    }

    /// `x₀ = α(c·u₀ + d·u₁)`, `x₁ = α(e·u₀ + f·u₁)` for 2×2 and 2×4 codes.
    pub fn layer_elems(&self, s: &[FieldElem; 4]) -> (FieldElem, FieldElem) {
        let [u0, u1] = self.effective_basis();
        (&(&s[0] * &u0) + &(&s[1] * &u1), &(&s[2] * &u0) + &(&s[3] * &u1))
    }

    /// The codeword carrying the four information symbols (all in `F`).
    pub fn codeword(&self, s: &[FieldElem; 4]) -> Result<Codeword> {
        for x in s {
            if !x.tower().same(self.tower()) {
                return Err(Error::TowerMismatch(x.tower().to_string(), self.tower().to_string()));
            }
            if !x.is_in_base() {
                return Err(Error::NotInBase(x.to_string()));
            }
        }
        let matrix = match self.shape {
            Shape::FourByFour => lambda4(&self.algebra, s)?,
            Shape::TwoByTwo => {
                let (x0, x1) = self.layer_elems(s);
                let m = lambda2(&self.algebra, &x0, &x1);
                if self.transpose {
                    m.transpose()
                } else {
                    m
                }
            }
            Shape::TwoByFour => {
                let (x0, x1) = self.layer_elems(s);
                multiblock(&self.algebra, &x0, &x1)
            }
        };
        Ok(Codeword {
            shape: self.shape,
            matrix,
            shaping: self.shaping,
        })
    }

    /// Validates a parsed file. Errors name the offending field.
    pub fn from_file(f: &CodeSpecFile) -> Result<CodeSpec> {
        let field = |name: &str, e: Error| Error::InvalidSpec(format!("{name}: {e}"));
        let a = match &f.tower.a {
            ElemRepr::Rational(r) => vec![r.clone()],
            ElemRepr::Coords(c) => c.clone(),
        };
        let tower = TowerSpec::new(f.tower.m, Some(a)).map_err(|e| field("tower", e))?;
        let b = f.b.to_elem(&tower).map_err(|e| field("b", e))?;
        let algebra = AlgebraSpec::new(tower.clone(), b).map_err(|e| field("b", e))?;
        let basis = match &f.basis {
            None => [tower.one(), tower.sqrt_a()?],
            Some([u0, u1]) => [
                u0.to_elem(&tower).map_err(|e| field("basis[0]", e))?,
                u1.to_elem(&tower).map_err(|e| field("basis[1]", e))?,
            ],
        };
        // {u₀, u₁} is an F-basis iff u₀σ(u₁) − u₁σ(u₀) ≠ 0
        let g = &(&basis[0] * &basis[1].sigma()?) - &(&basis[1] * &basis[0].sigma()?);
        if g.is_zero() {
            return Err(Error::InvalidSpec(
                "basis: elements are linearly dependent over F".into(),
            ));
        }
        let ideal = match &f.ideal {
            None => None,
            Some(r) => {
                let a = r.to_elem(&tower).map_err(|e| field("ideal", e))?;
                if a.is_zero() {
                    return Err(Error::InvalidSpec("ideal: generator must be nonzero".into()));
                }
                Some(a)
            }
        };
        if f.shaping == Some(0) {
            return Err(Error::InvalidSpec("shaping: n must be positive".into()));
        }
        if f.shape == Shape::FourByFour && (ideal.is_some() || f.transpose) {
            return Err(Error::InvalidSpec(
                "ideal/transpose: not available for 4x4 codes".into(),
            ));
        }
        let nvd_fraction = match &f.nvd_fraction {
            None => None,
            Some(nf) => Some(parse_fraction(nf, &tower, f.shape)?),
        };
        Ok(CodeSpec {
            name: f.name.clone(),
            description: f.description.clone(),
            algebra,
            shape: f.shape,
            basis,
            ideal,
            transpose: f.transpose,
            shaping: f.shaping,
            constellation: f.constellation.clone().unwrap_or_else(|| Constellation::boxed(1)),
            nvd_fraction,
            expect: f.expect.clone(),
        })
    }

    pub fn to_file(&self) -> CodeSpecFile {
        let t = self.tower();
        let a_coords = t.a_coords().expect("code towers have an extension").to_vec();
        let a = if a_coords[1..].iter().all(Rational::is_zero) {
            ElemRepr::Rational(a_coords[0].clone())
        } else {
            ElemRepr::Coords(a_coords)
        };
        let default_basis = [t.one(), t.sqrt_a().expect("extension")];
        let e = |x: &FieldElem| ElemRepr::from_elem(x);
        CodeSpecFile {
            name: self.name.clone(),
            description: self.description.clone(),
            tower: TowerFile { m: t.m(), a },
            b: e(self.b()),
            shape: self.shape,
            basis: (self.basis != default_basis).then(|| [e(&self.basis[0]), e(&self.basis[1])]),
            ideal: self.ideal.as_ref().map(e),
            transpose: self.transpose,
            shaping: self.shaping,
            constellation: Some(self.constellation.clone()),
            nvd_fraction: self.nvd_fraction.as_ref().map(|nf| match nf {
                NvdFraction::Scalar { b_n, b_d } => NvdFractionFile {
                    b_n: Some(e(b_n)),
                    b_d: Some(e(b_d)),
                    ..Default::default()
                },
                NvdFraction::Parts { p_n, p_d, q_n, q_d } => NvdFractionFile {
                    p_n: Some(e(p_n)),
                    p_d: Some(e(p_d)),
                    q_n: Some(e(q_n)),
                    q_d: Some(e(q_d)),
                    ..Default::default()
                },
            }),
            expect: self.expect.clone(),
        }
    }

    pub fn from_json(s: &str) -> Result<CodeSpec> {
        let f: CodeSpecFile = serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("spec serializes")
    }

    /// Golden-style codeword for this spec, via the dedicated constructor.
    /// Only meaningful for presets over `Q(i)(√5)` with basis `{1, θ}`.
    pub fn golden_codeword(&self, s: [&FieldElem; 4]) -> Result<Codeword> {
        golden_codeword(&self.algebra, s, self.ideal.is_some())
    }
}

fn parse_fraction(nf: &NvdFractionFile, tower: &TowerSpec, shape: Shape) -> Result<NvdFraction> {
    let get = |name: &str, x: &Option<ElemRepr>| -> Result<FieldElem> {
        x.as_ref()
            .ok_or_else(|| Error::InvalidSpec(format!("nvd_fraction: missing {name}")))?
            .to_elem(tower)
            .map_err(|e| Error::InvalidSpec(format!("nvd_fraction.{name}: {e}")))
    };
    if shape == Shape::FourByFour {
        Ok(NvdFraction::Parts {
            p_n: get("p_n", &nf.p_n)?,
            p_d: get("p_d", &nf.p_d)?,
            q_n: get("q_n", &nf.q_n)?,
            q_d: get("q_d", &nf.q_d)?,
        })
    } else {
        Ok(NvdFraction::Scalar {
            b_n: get("b_n", &nf.b_n)?,
            b_d: get("b_d", &nf.b_d)?,
        })
    }
}
