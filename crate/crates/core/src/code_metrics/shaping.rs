//! Cubic shaping (unitarity of the basis and layer matrices) and average row
//! energies.

use num_complex::Complex64;
use serde::Serialize;

use super::Constellation;
use crate::code_spec::CodeSpec;
use crate::error::Result;
use crate::exact_algebra::{FieldElem, Rational};
use crate::representations::Shape;

pub const DEFAULT_TOL: f64 = 1e-10;

pub type CMatrix = Vec<Vec<Complex64>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixCheck {
    pub name: String,
    /// `max |(M M^H − I)_{ij}|`.
    pub deviation: f64,
    pub unitary: bool,
}

/// `max_{ij} |(M M^H − I)_{ij}|`.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = m[i].iter().zip(&m[j]).map(|(x, y)| x * y.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

pub fn matrix_check(name: &str, m: &CMatrix, tol: f64) -> MatrixCheck {
    let deviation = unitarity_deviation(m);
    MatrixCheck {
        name: name.to_string(),
        deviation,
        unitary: deviation <= tol,
    }
}

/// Deviation after rescaling so that `tr(M M^H) = n`.
pub fn best_scale_deviation(m: &CMatrix) -> f64 {
    let n = m.len() as f64;
    let tr: f64 = m.iter().flatten().map(Complex64::norm_sqr).sum();
    if tr == 0.0 {
        return 1.0;
    }
    let c = (n / tr).sqrt();
    let scaled: CMatrix = m.iter().map(|r| r.iter().map(|z| z * c).collect()).collect();
    unitarity_deviation(&scaled)
}

/// `[[u₀, u₁], [σu₀, σu₁]]` under the fixed embedding.
pub fn basis_matrix(u0: &FieldElem, u1: &FieldElem) -> Result<CMatrix> {
    Ok(vec![
        vec![u0.embed(), u1.embed()],
        vec![u0.sigma()?.embed(), u1.sigma()?.embed()],
    ])
}

/// The layer matrix `[[0, b], [1, 0]]`.
pub fn gamma2(b: Complex64) -> CMatrix {
    let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    vec![vec![z, b], vec![o, z]]
}

/// The three nontrivial layer matrices of the transposed 4×4 code.
pub fn gammas4(a: Complex64, p: Complex64, q: Complex64) -> [CMatrix; 3] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [
        vec![vec![z, o, z, z], vec![a, z, z, z], vec![z, z, z, -o], vec![z, z, -a, z]],
        vec![
            vec![z, z, o, z],
            vec![z, z, z, o],
            vec![p, q, z, z],
            vec![a * q, p, z, z],
        ],
        vec![
            vec![z, z, z, o],
            vec![z, z, a, z],
            vec![-a * q, -p, z, z],
            vec![-a * p, -a * q, z, z],
        ],
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapingReport {
    /// The scaled basis matrix (identity for 4×4 codes).
    pub basis_matrix: MatrixCheck,
    pub best_scale_deviation: f64,
    pub layers: Vec<MatrixCheck>,
    /// Exact version of the layer condition, when decidable.
    pub symbolic: Option<bool>,
    pub unitary: bool,
    pub info_lossless: bool,
}

fn is_one(x: &Option<FieldElem>) -> Option<bool> {
    x.as_ref().map(FieldElem::is_one)
}

pub fn shaping_check(code: &CodeSpec, tol: f64) -> Result<ShapingReport> {
    let s = code.shaping.map_or(1.0, |n| 1.0 / f64::from(n).sqrt());
    let b = code.b();
    let (g, layers, symbolic) = match code.shape {
        Shape::TwoByTwo | Shape::TwoByFour => {
            let [u0, u1] = code.effective_basis();
            let g = basis_matrix(&u0, &u1)?;
            let layers = vec![matrix_check("Gamma2", &gamma2(b.embed()), tol)];
            (g, layers, is_one(&b.abs_sq()))
        }
        Shape::FourByFour => {
            let one = Complex64::new(1.0, 0.0);
            let z = Complex64::new(0.0, 0.0);
            let g = (0..4)
                .map(|i| (0..4).map(|j| if i == j { one } else { z }).collect())
                .collect();
            let a = code.tower().a()?;
            let (p, q) = b.ext_parts();
            let gs = gammas4(a.embed(), p.embed(), q.embed());
            let layers = gs
                .iter()
                .enumerate()
                .map(|(k, m)| matrix_check(&format!("Gamma{}", k + 1), m, tol))
                .collect();
            // p, q, a lie in F, where complex conjugation always exists
            let cc = |x: &FieldElem| x.complex_conj().expect("base field is closed");
            let abs2 = |x: &FieldElem| x.abs_sq().expect("base field is closed");
            let unit = abs2(&a).is_one() && (&abs2(&p) + &abs2(&q)).is_one();
            let cross = &(&p * &cc(&q)) + &(&(&a * &q) * &cc(&p));
            (g, layers, Some(unit && cross.is_zero()))
        }
    };
    let scaled: CMatrix = g.iter().map(|r| r.iter().map(|z| z * s).collect()).collect();
    let basis_matrix = matrix_check("G", &scaled, tol);
    let best = best_scale_deviation(&g);
    let unitary = basis_matrix.unitary;
    let info_lossless = unitary && layers.iter().all(|l| l.unitary) && symbolic != Some(false);
    Ok(ShapingReport {
        basis_matrix,
        best_scale_deviation: best,
        layers,
        symbolic,
        unitary,
        info_lossless,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    /// `E‖row_r‖²` over uniform symbols, rows in order.
    pub row_energies: Vec<f64>,
    pub mean: f64,
    /// `max_r |E_r − mean| / mean`.
    pub max_rel_deviation: f64,
    pub uniform: bool,
}

/// Codeword with a single unit symbol in slot `k`, embedded and shaped.
pub(crate) fn unit_codewords(code: &CodeSpec) -> Result<Vec<CMatrix>> {
    let t = code.tower();
    (0..4)
        .map(|k| {
            let mut s = [t.zero(), t.zero(), t.zero(), t.zero()];
            s[k] = t.one();
            Ok(code.codeword(&s)?.embed())
        })
        .collect()
}

/// Exact-in-distribution row energies: the codeword is `Σ s_k M_k` with
/// i.i.d. uniform symbols, so `E|Σ s_k m_k|² = E|s|² Σ|m_k|² + |E s|² Σ_{k≠l} m_k m̄_l`.
pub fn energy_check(code: &CodeSpec, cons: &Constellation, tol: f64) -> Result<EnergyReport> {
    let symbols: Vec<Complex64> = cons.symbols(code.tower())?.iter().map(FieldElem::embed).collect();
    let n = symbols.len() as f64;
    let e2: f64 = symbols.iter().map(Complex64::norm_sqr).sum::<f64>() / n;
    let mu: Complex64 = symbols.iter().sum::<Complex64>() / n;
    let mu2 = mu.norm_sqr();
    let ms = unit_codewords(code)?;
    let (rows, cols) = (code.shape.rows(), code.shape.cols());
    let row_energies: Vec<f64> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let mut acc = 0.0;
                    for k in 0..4 {
                        acc += e2 * ms[k][r][c].norm_sqr();
                        for l in 0..4 {
                            if k != l {
                                acc += mu2 * (ms[k][r][c] * ms[l][r][c].conj()).re;
                            }
                        }
                    }
                    acc
                })
                .sum()
        })
        .collect();
    let mean = row_energies.iter().sum::<f64>() / rows as f64;
    let max_rel_deviation = if mean == 0.0 {
        0.0
    } else {
        row_energies.iter().map(|e| (e - mean).abs() / mean).fold(0.0, f64::max)
    };
    Ok(EnergyReport {
        row_energies,
        mean,
        max_rel_deviation,
        uniform: max_rel_deviation <= tol,
    })
}

/// Exact `|b|² = 1`, when complex conjugation is available.
pub fn unit_modulus(b: &FieldElem) -> Option<bool> {
    b.abs_sq().map(|v| v.as_rational() == Some(Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn golden_basis_deviation() {
        let g = preset("golden").unwrap();
        let t = g.tower();
        let theta = crate::representations::golden_theta(t).unwrap();
        let m = basis_matrix(&t.one(), &theta).unwrap();
        let d = best_scale_deviation(&m);
        assert!((d - 1.0 / 5f64.sqrt()).abs() < 1e-12, "{d}");
        let r = shaping_check(&g, DEFAULT_TOL).unwrap();
        assert!(r.unitary && r.info_lossless, "{r:?}");
    }

    #[test]
    fn gamma2_unit_modulus() {
        assert!(matrix_check("", &gamma2(Complex64::new(0.6, 0.8)), DEFAULT_TOL).unitary);
        assert!(!matrix_check("", &gamma2(Complex64::new(1.1, 0.0)), DEFAULT_TOL).unitary);
    }

    #[test]
    fn energy_matches_brute_force() {
        for name in ["alamouti-na", "golden", "zeta3", "four-9.2", "mb-8.6"] {
            let c = preset(name).unwrap();
            let cons = Constellation::boxed(1);
            let rep = energy_check(&c, &cons, DEFAULT_TOL).unwrap();
            let syms = cons.symbols(c.tower()).unwrap();
            let s = syms.len();
            let mut sums = vec![0.0; c.shape.rows()];
            let mut count = 0.0;
            for idx in 0..s.pow(4) {
                let tuple = [
                    syms[idx / s.pow(3)].clone(),
                    syms[idx / s.pow(2) % s].clone(),
                    syms[idx / s % s].clone(),
                    syms[idx % s].clone(),
                ];
                let x = c.codeword(&tuple).unwrap().embed();
                for (r, row) in x.iter().enumerate() {
                    sums[r] += row.iter().map(Complex64::norm_sqr).sum::<f64>();
                }
                count += 1.0;
            }
            for (r, e) in rep.row_energies.iter().enumerate() {
                assert!((sums[r] / count - e).abs() < 1e-9 * e.max(1.0), "{name} row {r}");
            }
        }
    }

    #[test]
    fn four_by_four_layers() {
        for name in ["four-9.2", "four-9.2bis", "four-9.3"] {
            let r = shaping_check(&preset(name).unwrap(), DEFAULT_TOL).unwrap();
            assert!(r.info_lossless, "{name}: {r:?}");
            assert_eq!(r.symbolic, Some(true));
        }
    }
}
