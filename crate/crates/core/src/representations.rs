//! Codeword matrices from left-regular representations of `Cay(K, b)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cayley_dickson::AlgebraSpec;
use crate::error::{Error, Result};
use crate::exact_algebra::{FieldElem, Rational, TowerSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "2x2")]
    TwoByTwo,
    #[serde(rename = "4x4")]
    FourByFour,
    #[serde(rename = "2x4")]
    TwoByFour,
}

impl Shape {
    pub fn rows(self) -> usize {
        match self {
            Shape::TwoByTwo | Shape::TwoByFour => 2,
            Shape::FourByFour => 4,
        }
    }

    pub fn cols(self) -> usize {
        match self {
            Shape::TwoByTwo => 2,
            Shape::FourByFour | Shape::TwoByFour => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::TwoByTwo => "2x2",
            Shape::FourByFour => "4x4",
            Shape::TwoByFour => "2x4",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2x2" => Ok(Shape::TwoByTwo),
            "4x4" => Ok(Shape::FourByFour),
            "2x4" => Ok(Shape::TwoByFour),
            _ => Err(Error::InvalidSpec(format!(
                "unknown shape {s:?} (expected 2x2, 4x4 or 2x4)"
            ))),
        }
    }
}

/// A dense matrix of exact field elements, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map(&self, f: impl Fn(&FieldElem) -> FieldElem) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(o.cols);
            for c in 0..o.cols {
                let mut acc = self.get(r, 0) * o.get(0, c);
                for k in 1..self.cols {
                    acc = &acc + &(self.get(r, k) * o.get(k, c));
                }
                row.push(acc);
            }
            rows.push(row);
        }
        ExactMatrix::from_rows(rows)
    }

    /// Horizontal concatenation `[self | o]`.
    pub fn hcat(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, o.rows);
        let rows = (0..self.rows)
            .map(|r| self.row(r).iter().chain(o.row(r)).cloned().collect())
            .collect();
        ExactMatrix::from_rows(rows)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<FieldElem> {
        if self.rows != self.cols || self.rows == 0 {
            return Err(Error::InvalidSpec(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.cofactor_det(&idx, 0))
    }

    fn cofactor_det(&self, cols: &[usize], row: usize) -> FieldElem {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc: Option<FieldElem> = None;
        for (k, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e * &self.cofactor_det(&rest, row + 1);
            let term = if k % 2 == 1 { -term } else { term };
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        acc.unwrap_or_else(|| self.get(row, cols[0]).tower().zero())
    }

    /// Complex image, each entry scaled by `scale`.
    pub fn embed(&self, scale: f64) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.embed() * scale).collect())
            .collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| cells[r * self.cols + c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for r in 0..self.rows {
            f.write_str("[ ")?;
            for c in 0..self.cols {
                let s = &cells[r * self.cols + c];
                let pad = widths[c] - s.chars().count();
                write!(f, "{}{s}", " ".repeat(pad))?;
                if c + 1 < self.cols {
                    f.write_str("  ")?;
                }
            }
            f.write_str(" ]")?;
            if r + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// A codeword: an exact matrix together with a symbolic shaping factor `1/√n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub shape: Shape,
    pub matrix: ExactMatrix,
    /// `Some(n)` means the transmitted matrix is `matrix / √n`.
    pub shaping: Option<u32>,
}

impl Codeword {
    pub fn scale(&self) -> f64 {
        self.shaping.map_or(1.0, |n| 1.0 / f64::from(n).sqrt())
    }

    /// The transmitted complex matrix, shaping included.
    pub fn embed(&self) -> Vec<Vec<Complex64>> {
        self.matrix.embed(self.scale())
    }

    /// Unshaped exact determinant (square shapes only).
    pub fn exact_det(&self) -> Result<FieldElem> {
        self.matrix.det()
    }

    /// `|det|²` of the shaped codeword, exactly: `|det|² / n^k` for a `k×k` matrix.
    pub fn shaped_det_abs_sq(&self) -> Result<FieldElem> {
        let d = self.exact_det()?;
        let sq = d
            .abs_sq()
            .ok_or_else(|| Error::OutOfDomain(format!("{} is not closed under complex conjugation", d.tower())))?;
        Ok(match self.shaping {
            None => sq,
            Some(n) => {
                let k = self.matrix.rows() as u32;
                sq.scale(&Rational::from_int(i64::from(n)).pow(k).recip().expect("n > 0"))
            }
        })
    }
}

#[derive(Serialize)]
struct CodewordJson<'a> {
    shape: &'a str,
    shaping_sqrt_denominator: Option<u32>,
    basis: Vec<String>,
    exact: Vec<Vec<&'a FieldElem>>,
    display: Vec<Vec<String>>,
    float: Vec<Vec<[f64; 2]>>,
}

impl Serialize for Codeword {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = &self.matrix;
        let basis = m.entries().first().map(|e| e.tower().basis_names()).unwrap_or_default();
        CodewordJson {
            shape: self.shape.as_str(),
            shaping_sqrt_denominator: self.shaping,
            basis,
            exact: (0..m.rows()).map(|r| m.row(r).iter().collect()).collect(),
            display: (0..m.rows())
                .map(|r| m.row(r).iter().map(ToString::to_string).collect())
                .collect(),
            float: self
                .embed()
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// `[[x₀, b·σ(x₁)], [x₁, σ(x₀)]]`: left multiplication by `x₀ + j·x₁` in the basis `{1, j}`.
pub fn lambda2(spec: &AlgebraSpec, x0: &FieldElem, x1: &FieldElem) -> ExactMatrix {
    let s0 = x0.sigma().expect("extension present");
    let s1 = x1.sigma().expect("extension present");
    ExactMatrix::from_rows(vec![vec![x0.clone(), spec.b() * &s1], vec![x1.clone(), s0]])
}

/// `N(x₀) − b·N(x₁)`.
pub fn det2(spec: &AlgebraSpec, x0: &FieldElem, x1: &FieldElem) -> FieldElem {
    let n0 = x0.norm_rel().expect("extension present");
    let n1 = x1.norm_rel().expect("extension present");
    &n0 - &(spec.b() * &n1)
}

/// Left multiplication by `x₀ + x₁i + x₂j − x₃ij` over `F` in the basis `{1, i, j, −ij}`, with `b = p + q√a`.
pub fn lambda4(spec: &AlgebraSpec, x: &[FieldElem; 4]) -> Result<ExactMatrix> {
    for xi in x {
        if !xi.is_in_base() {
            return Err(Error::NotInBase(xi.to_string()));
        }
    }
    let t = spec.tower();
    let a = t.a()?;
    let (p, q) = spec.b().ext_parts();
    let [x0, x1, x2, x3] = x;
    let aq = &a * &q;
    let ap = &a * &p;
    Ok(ExactMatrix::from_rows(vec![
        vec![x0.clone(), &a * x1, &(&p * x2) - &(&aq * x3), &(&aq * x2) - &(&ap * x3)],
        vec![
            x1.clone(),
            x0.clone(),
            &(&q * x2) - &(&p * x3),
            &(&p * x2) - &(&aq * x3),
        ],
        vec![x2.clone(), &a * x3, x0.clone(), -(&a * x1)],
        vec![x3.clone(), x2.clone(), -x1, x0.clone()],
    ]))
}

/// `[(x₀² − a x₁²) − p(x₂² − a x₃²)]² − a q² (x₂² − a x₃²)²`.
pub fn det4(spec: &AlgebraSpec, x: &[FieldElem; 4]) -> Result<FieldElem> {
    let a = spec.tower().a()?;
    let (p, q) = spec.b().ext_parts();
    let [x0, x1, x2, x3] = x;
    let n0 = &x0.square() - &(&a * &x1.square());
    let n1 = &x2.square() - &(&a * &x3.square());
    let first = &n0 - &(&p * &n1);
    Ok(&first.square() - &(&(&a * &q.square()) * &n1.square()))
}

/// `[X | σ(X)]` with `X = lambda2(x₀, x₁)`.
pub fn multiblock(spec: &AlgebraSpec, x0: &FieldElem, x1: &FieldElem) -> ExactMatrix {
    let x = lambda2(spec, x0, x1);
    let sx = x.map(|e| e.sigma().expect("extension present"));
    x.hcat(&sx)
}

/// The golden number `θ = (1+√5)/2` in `Q(i)(√5)`.
pub fn golden_theta(tower: &TowerSpec) -> Result<FieldElem> {
    check_golden_tower(tower)?;
    tower.elem_q(&[(1, 2), (0, 1), (1, 2), (0, 1)])
}

/// The ideal generator `α = 1 + i − iθ`.
pub fn golden_alpha(tower: &TowerSpec) -> Result<FieldElem> {
    let theta = golden_theta(tower)?;
    let i = tower.i()?;
    Ok(&(&tower.one() + &i) - &(&i * &theta))
}

fn check_golden_tower(tower: &TowerSpec) -> Result<()> {
    let ok = tower.m() == Some(-1)
        && tower
            .a_coords()
            .is_some_and(|a| a[0] == Rational::from_int(5) && a[1].is_zero());
    if ok {
        Ok(())
    } else {
        Err(Error::WrongTower(format!("expected Q(i)(√5), found {tower}")))
    }
}

/// Golden-style codeword `(1/√5)·[[α(c+dθ), α(e+fθ)], [b·σ(α)(e+fσθ), σ(α)(c+dσθ)]]`.
///
/// `c, d, e, f` must lie in `Q(i)`. Without the ideal, `α` is replaced by 1.
pub fn golden_codeword(spec: &AlgebraSpec, symbols: [&FieldElem; 4], with_ideal: bool) -> Result<Codeword> {
    let t = spec.tower();
    let theta = golden_theta(t)?;
    for s in symbols {
        if !s.is_in_base() {
            return Err(Error::NotInBase(s.to_string()));
        }
    }
    let [c, d, e, f] = symbols;
    let mut x0 = c + &(d * &theta);
    let mut x1 = e + &(f * &theta);
    if with_ideal {
        let alpha = golden_alpha(t)?;
        x0 = &alpha * &x0;
        x1 = &alpha * &x1;
    }
    Ok(Codeword {
        shape: Shape::TwoByTwo,
        matrix: lambda2(spec, &x0, &x1).transpose(),
        shaping: Some(5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> TowerSpec {
        TowerSpec::gaussian()
    }

    fn alg(t: &TowerSpec, b: FieldElem) -> AlgebraSpec {
        AlgebraSpec::new(t.clone(), b).unwrap()
    }

    #[test]
    fn alamouti_like_layout() {
        let t = gauss();
        let s = alg(&t, t.i().unwrap());
        let (c, d, e, f) = (2, 3, 5, 7);
        let x0 = t.gaussian_elem(c, d).unwrap();
        let x1 = t.gaussian_elem(e, f).unwrap();
        let m = lambda2(&s, &x0, &x1);
        // [[c+id, f+ie], [e+if, c−id]]
        assert_eq!(m.get(0, 1), &t.gaussian_elem(f, e).unwrap());
        assert_eq!(m.get(1, 1), &t.gaussian_elem(c, -d).unwrap());
        let s = alg(&t, -t.i().unwrap());
        let m = lambda2(&s, &x0, &x1);
        assert_eq!(m.get(0, 1), &t.gaussian_elem(-f, -e).unwrap());
    }

    #[test]
    fn det2_matches_cofactor() {
        let t = gauss();
        let s = alg(&t, t.i().unwrap());
        let one = t.one();
        assert_eq!(det2(&s, &one, &one), t.gaussian_elem(1, -1).unwrap());
        assert_eq!(lambda2(&s, &one, &one).det().unwrap(), det2(&s, &one, &one));
    }

    #[test]
    fn four_by_four_hamilton_like() {
        let t = gauss();
        let s = alg(&t, t.i().unwrap());
        let x = [1, 2, 3, 4].map(|v| t.from_int(v));
        let m = lambda4(&s, &x).unwrap();
        let row0: Vec<_> = [1, -2, 4, -3].iter().map(|&v| t.from_int(v)).collect();
        assert_eq!(m.row(0), row0.as_slice());
        let row1: Vec<_> = [2, 1, 3, 4].iter().map(|&v| t.from_int(v)).collect();
        assert_eq!(m.row(1), row1.as_slice());
        // (x0²+x1²)² + (x2²+x3²)² = 25 + 625
        assert_eq!(det4(&s, &x).unwrap(), t.from_int(650));
        assert_eq!(m.det().unwrap(), t.from_int(650));
    }

    #[test]
    fn four_by_four_is_left_multiplication() {
        // column k of λ(x) holds the coordinates of x·e_k, e = (1, i, j, −ij)
        let t = TowerSpec::over_quadratic(-1, 0, 1).unwrap();
        let s = alg(&t, t.sqrt_a().unwrap());
        let f = |re: i64, im: i64| t.gaussian_elem(re, im).unwrap();
        let x = [f(1, 2), f(-1, 0), f(0, 3), f(2, -1)];
        let m = lambda4(&s, &x).unwrap();
        let sa = t.sqrt_a().unwrap();
        let xe = s.elem(&x[0] + &(&x[1] * &sa), &x[2] + &(&x[3] * &sa)).unwrap();
        let [one, i, j, ji] = s.basis();
        for (k, e) in [one, i, j, ji].iter().enumerate() {
            let prod = s.mul(&xe, e);
            let (u0, u1) = prod.u.ext_parts();
            let (v0, v1) = prod.v.ext_parts();
            let col = [u0, u1, v0, v1];
            for (r, c) in col.iter().enumerate() {
                assert_eq!(m.get(r, k), c, "entry ({r}, {k})");
            }
        }
    }

    #[test]
    fn multiblock_layout() {
        let t = TowerSpec::biquadratic(-1, 2).unwrap();
        let zeta = t.elem_q(&[(0, 1), (0, 1), (1, 2), (1, 2)]).unwrap();
        let s = alg(&t, zeta.clone());
        let x0 = t.elem_q(&[(1, 1), (2, 1), (0, 1), (1, 1)]).unwrap();
        let x1 = t.elem_q(&[(0, 1), (1, 1), (3, 1), (0, 1)]).unwrap();
        let y = multiblock(&s, &x0, &x1);
        assert_eq!(y.get(0, 3), &(&zeta.sigma().unwrap() * &x1));
        assert_eq!(y.get(1, 3), &x0);
        assert_eq!(y.get(1, 2), &x1.sigma().unwrap());
        let one = t.one();
        let zero = t.zero();
        let id = multiblock(&s, &one, &zero);
        assert_eq!(id.get(0, 2), &one);
        assert_eq!(id.get(0, 1), &zero);
    }

    #[test]
    fn golden_unit_symbol() {
        let t = TowerSpec::biquadratic(-1, 5).unwrap();
        let s = alg(&t, t.i().unwrap());
        let (one, zero) = (t.one(), t.zero());
        let cw = golden_codeword(&s, [&one, &zero, &zero, &zero], true).unwrap();
        let alpha = golden_alpha(&t).unwrap();
        assert_eq!(cw.matrix.get(0, 0), &alpha);
        assert_eq!(cw.matrix.get(1, 1), &alpha.sigma().unwrap());
        let z = cw.embed()[0][0];
        assert!((z - alpha.embed() / 5f64.sqrt()).norm() < 1e-12);
        // |det|² = |N(α)|²/5² = 5/25
        assert_eq!(cw.shaped_det_abs_sq().unwrap(), t.from_rational(Rational::new(1, 5)));
        assert!(golden_codeword(&alg(&gauss(), gauss().i().unwrap()), [&gauss().one(); 4], true).is_err());
    }
}
