//! Code quality metrics: diversity, minimum determinants, NVD bounds,
//! shaping and energy.

mod constellation;
mod enumerate;
mod nvd;
mod shaping;

use std::fmt;

use serde::Serialize;

pub use constellation::Constellation;
pub use enumerate::{
    enumerate, tuple_count, write_det_csv, EnumConfig, Enumeration, ExactValue, Metric, SymbolTuple, DEFAULT_TUPLE_CAP,
    MAX_WITNESSES,
};
pub use nvd::{nvd_constant, reduce_fraction_gaussian, NvdReport};
pub use shaping::{
    basis_matrix, best_scale_deviation, energy_check, gamma2, gammas4, matrix_check, shaping_check, unit_modulus,
    unitarity_deviation, CMatrix, EnergyReport, MatrixCheck, ShapingReport, DEFAULT_TOL,
};

pub(crate) use shaping::unit_codewords;

use crate::code_spec::CodeSpec;
use crate::error::{Error, Result};
use crate::exact_algebra::FieldElem;
use crate::representations::Shape;

fn tuple_strings(t: &SymbolTuple) -> [String; 4] {
    t.clone().map(|x| x.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct MinDetReport {
    pub metric: Metric,
    pub tuples: u64,
    pub value: f64,
    pub exact: Option<ExactValue>,
    pub det_at_min: String,
    pub minimizers: Vec<[String; 4]>,
    pub minimizer_count: u64,
}

impl From<&Enumeration> for MinDetReport {
    fn from(e: &Enumeration) -> Self {
        MinDetReport {
            metric: e.metric,
            tuples: e.tuples,
            value: e.min_f64,
            exact: e.min_exact.clone(),
            det_at_min: e.det_at_min.to_string(),
            minimizers: e.minimizers.iter().map(tuple_strings).collect(),
            minimizer_count: e.minimizer_count,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiversityReport {
    pub full_diversity: bool,
    pub tuples: u64,
    pub zero_count: u64,
    pub witnesses: Vec<[String; 4]>,
}

impl From<&Enumeration> for DiversityReport {
    fn from(e: &Enumeration) -> Self {
        DiversityReport {
            full_diversity: e.zero_count == 0,
            tuples: e.tuples,
            zero_count: e.zero_count,
            witnesses: e.zero_witnesses.iter().map(tuple_strings).collect(),
        }
    }
}

/// `min |det X|²` over nonzero codewords of a square code (shaped).
pub fn min_det(code: &CodeSpec, cons: &Constellation, cfg: &EnumConfig) -> Result<Enumeration> {
    if code.shape == Shape::TwoByFour {
        return Err(Error::InvalidSpec(
            "shape: min_det needs a square code; use gen_min_det for 2x4".into(),
        ));
    }
    enumerate(code, cons, cfg)
}

/// `min |det X · det σ(X)|` over nonzero codewords of a 2×4 code (shaped).
pub fn gen_min_det(code: &CodeSpec, cons: &Constellation, cfg: &EnumConfig) -> Result<Enumeration> {
    if code.shape != Shape::TwoByFour {
        return Err(Error::InvalidSpec(format!(
            "shape: gen_min_det needs a 2x4 code, got {}",
            code.shape
        )));
    }
    enumerate(code, cons, cfg)
}

/// Whether every nonzero codeword over `cons` has nonzero determinant.
pub fn full_diversity_check(code: &CodeSpec, cons: &Constellation, cfg: &EnumConfig) -> Result<DiversityReport> {
    Ok(DiversityReport::from(&enumerate(code, cons, cfg)?))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckSelection {
    pub diversity: bool,
    pub mindet: bool,
    pub nvd: bool,
    pub shaping: bool,
    pub energy: bool,
}

impl CheckSelection {
    pub fn all() -> Self {
        CheckSelection {
            diversity: true,
            mindet: true,
            nvd: true,
            shaping: true,
            energy: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == CheckSelection::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    /// Nothing to check against; counts as passed.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub code: String,
    pub shape: Shape,
    pub algebra: String,
    pub constellation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diversity: Option<DiversityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_det: Option<MinDetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nvd: Option<NvdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shaping: Option<ShapingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyReport>,
    pub verdicts: Vec<Verdict>,
}

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn verdict(check: &str, passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        check: check.into(),
        passed,
        skipped: false,
        detail: detail.into(),
    }
}

fn expect_bool(check: &str, got: bool, want: Option<bool>) -> Verdict {
    match want {
        Some(w) => verdict(check, got == w, format!("{got} (expected {w})")),
        None => verdict(check, true, format!("{got}")),
    }
}

/// Runs the selected checks and compares them against the code's expectations.
pub fn run_checks(
    code: &CodeSpec,
    cons: &Constellation,
    sel: CheckSelection,
    cfg: &EnumConfig,
) -> Result<MetricReport> {
    let mut verdicts = Vec::new();
    let needs_enum = sel.diversity || sel.mindet;
    let en = if needs_enum {
        Some(enumerate(code, cons, cfg)?)
    } else {
        None
    };

    let nvd = match (&code.nvd_fraction, sel.nvd || sel.mindet) {
        (Some(f), true) => Some(nvd_constant(code, f)?),
        (None, true) if sel.nvd => {
            verdicts.push(Verdict {
                skipped: true,
                ..verdict("nvd", true, "no nvd_fraction given")
            });
            None
        }
        _ => None,
    };

    let diversity = en.as_ref().filter(|_| sel.diversity).map(DiversityReport::from);
    if let Some(d) = &diversity {
        let mut v = expect_bool("diversity", d.full_diversity, code.expect.full_diversity);
        if let Some(w) = d.witnesses.first() {
            v.detail.push_str(&format!("; zero determinant at ({})", w.join(", ")));
        }
        verdicts.push(v);
    }

    let min_det = en.as_ref().filter(|_| sel.mindet).map(MinDetReport::from);
    if let Some(m) = &min_det {
        let shown = m.exact.as_ref().map_or(format!("{:.6e}", m.value), ToString::to_string);
        if let Some(want) = &code.expect.min_det {
            let got = m.exact.as_ref().and_then(ExactValue::as_rational);
            verdicts.push(verdict(
                "mindet",
                got.as_ref() == Some(want),
                format!("{shown} (expected {want})"),
            ));
        } else {
            verdicts.push(verdict("mindet", true, shown.clone()));
        }
        if let (Some(n), Some(e)) = (&nvd, &m.exact) {
            if n.applicable {
                let ok = match e.as_sqrt_rational() {
                    Some(v) => v >= n.shaped,
                    None => e.to_f64() >= n.shaped.to_f64() * (1.0 - 1e-12),
                };
                verdicts.push(verdict("mindet>=nvd", ok, format!("{shown} >= {}", n.shaped)));
            }
        }
    }

    if sel.nvd {
        if let Some(n) = &nvd {
            let detail = format!("{} ({})", n.shaped, n.note);
            match &code.expect.nvd {
                Some(want) => {
                    let ok = n.shaped.as_rational().as_ref() == Some(want) && n.applicable;
                    verdicts.push(verdict("nvd", ok, format!("{detail}; expected {want}")));
                }
                None => verdicts.push(verdict("nvd", true, detail)),
            }
        }
    }
    let nvd = nvd.filter(|_| sel.nvd);

    let shaping = if sel.shaping {
        let s = shaping_check(code, DEFAULT_TOL)?;
        let mut v = expect_bool("shaping.unitary", s.unitary, code.expect.unitary);
        v.detail.push_str(&format!(
            "; deviation {:.3e}, best-scale {:.3e}",
            s.basis_matrix.deviation, s.best_scale_deviation
        ));
        verdicts.push(v);
        if code.expect.info_lossless.is_some() || code.shape == Shape::FourByFour {
            verdicts.push(expect_bool(
                "shaping.info_lossless",
                s.info_lossless,
                code.expect.info_lossless,
            ));
        }
        Some(s)
    } else {
        None
    };

    let energy = if sel.energy {
        let e = energy_check(code, cons, DEFAULT_TOL)?;
        let mut v = expect_bool("energy.uniform", e.uniform, code.expect.uniform_energy);
        v.detail
            .push_str(&format!("; max relative deviation {:.3e}", e.max_rel_deviation));
        verdicts.push(v);
        Some(e)
    } else {
        None
    };

    Ok(MetricReport {
        code: code.name.clone(),
        shape: code.shape,
        algebra: format!("Cay({}, {})", code.tower(), code.b()),
        constellation: cons.to_string(),
        diversity,
        min_det,
        nvd,
        shaping,
        energy,
        verdicts,
    })
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code          {} ({})", self.code, self.shape)?;
        writeln!(f, "algebra       {}", self.algebra)?;
        writeln!(f, "constellation {}", self.constellation)?;
        if let Some(d) = &self.diversity {
            writeln!(
                f,
                "diversity     {} ({} tuples, {} with zero determinant)",
                if d.full_diversity { "full" } else { "NOT full" },
                d.tuples,
                d.zero_count
            )?;
        }
        if let Some(m) = &self.min_det {
            let name = match m.metric {
                Metric::Delta => "min |det|^2",
                Metric::DeltaG => "min |det X det sX|",
            };
            let exact = m.exact.as_ref().map_or("n/a".to_string(), ToString::to_string);
            writeln!(
                f,
                "{name:<13} {exact} ≈ {:.6} ({} minimizers)",
                m.value, m.minimizer_count
            )?;
            if let Some(w) = m.minimizers.first() {
                writeln!(f, "  first at    ({}), det = {}", w.join(", "), m.det_at_min)?;
            }
        }
        if let Some(n) = &self.nvd {
            writeln!(
                f,
                "nvd bound     {} (before shaping {}, constant {}){}",
                n.shaped,
                n.pre_shaping,
                n.constant,
                if n.applicable { "" } else { " [not applicable]" }
            )?;
        }
        if let Some(s) = &self.shaping {
            writeln!(
                f,
                "shaping       G unitary: {} (dev {:.3e}, best-scale {:.3e}); layers: {}",
                s.unitary,
                s.basis_matrix.deviation,
                s.best_scale_deviation,
                s.layers
                    .iter()
                    .map(|l| format!("{} {}", l.name, if l.unitary { "ok" } else { "no" }))
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        if let Some(e) = &self.energy {
            let rows: Vec<String> = e.row_energies.iter().map(|x| format!("{x:.4}")).collect();
            writeln!(f, "row energies  [{}] uniform: {}", rows.join(", "), e.uniform)?;
        }
        for v in &self.verdicts {
            writeln!(
                f,
                "[{}] {}: {}",
                match (v.skipped, v.passed) {
                    (true, _) => "SKIP",
                    (false, true) => "PASS",
                    (false, false) => "FAIL",
                },
                v.check,
                v.detail
            )?;
        }
        Ok(())
    }
}

/// The four symbols of a tuple, for display.
pub fn format_tuple(t: &[FieldElem; 4]) -> String {
    tuple_strings(t).join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Rational;
    use crate::presets::preset;

    fn exact_min(name: &str, cons: Constellation) -> Option<Rational> {
        let c = preset(name).unwrap();
        enumerate(&c, &cons, &EnumConfig::default())
            .unwrap()
            .min_exact
            .and_then(|v| v.as_rational())
    }

    #[test]
    fn alamouti_like_min_det() {
        assert_eq!(
            exact_min("alamouti-na", Constellation::boxed(1)),
            Some(Rational::new(1, 4))
        );
    }

    #[test]
    fn golden_min_det() {
        assert_eq!(exact_min("golden", Constellation::boxed(1)), Some(Rational::new(1, 5)));
    }

    #[test]
    fn split_algebra_has_zero_determinants() {
        let c = preset("split").unwrap();
        let r = full_diversity_check(&c, &Constellation::boxed(1), &EnumConfig::default()).unwrap();
        assert!(!r.full_diversity);
        assert!(r.zero_count > 0);
    }

    #[test]
    fn cap_is_enforced() {
        let c = preset("golden").unwrap();
        let cfg = EnumConfig {
            cap: 100,
            max_witnesses: 10,
        };
        assert!(matches!(
            enumerate(&c, &Constellation::boxed(1), &cfg),
            Err(Error::TooLarge { tuples: 6561, cap: 100 })
        ));
    }

    #[test]
    fn shape_guards() {
        let sq = preset("golden").unwrap();
        let mb = preset("mb-8.6").unwrap();
        let cons = Constellation::boxed(1);
        let cfg = EnumConfig::default();
        assert!(gen_min_det(&sq, &cons, &cfg).is_err());
        assert!(min_det(&mb, &cons, &cfg).is_err());
    }
}
