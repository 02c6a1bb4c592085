//! Exhaustive determinant enumeration over a finite constellation.
//!
//! Codes are linear in the four information symbols, so the determinant
//! splits into a part depending on the first symbol pair and one on the
//! second. Both halves are precomputed exactly; each tuple then costs one
//! exact subtraction (an exact zero test) and a float modulus. Only tuples
//! whose float value is within a relative `1e-9` of the running minimum are
//! re-evaluated exactly, and the minimizer set is the class of the smallest
//! exact value.

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::Constellation;
use crate::code_spec::CodeSpec;
use crate::error::{Error, Result};
use crate::exact_algebra::{FieldElem, Rational, SqrtRational};
use crate::representations::Shape;

pub const DEFAULT_TUPLE_CAP: u128 = 10_000_000;
pub const MAX_WITNESSES: usize = 100;
const MAX_CANDIDATES: usize = 200_000;
const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub cap: u128,
    pub max_witnesses: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap: DEFAULT_TUPLE_CAP,
            max_witnesses: MAX_WITNESSES,
        }
    }
}

/// Which quantity is minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `|det X|²` (square codewords).
    Delta,
    /// `|det X · det σ(X)| = |N_{K/F}(det X)|` (2×4 multiblock codewords).
    DeltaG,
}

/// An exact nonnegative real produced by the enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactValue {
    /// A real element of the tower.
    Elem(FieldElem),
    Sqrt(SqrtRational),
}

impl ExactValue {
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ExactValue::Elem(e) => e.as_rational(),
            ExactValue::Sqrt(s) => s.as_rational(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactValue::Elem(e) => e.embed().re,
            ExactValue::Sqrt(s) => s.to_f64(),
        }
    }

    /// As `√r`, when possible.
    pub fn as_sqrt_rational(&self) -> Option<SqrtRational> {
        match self {
            ExactValue::Elem(e) => e.as_rational().map(|r| SqrtRational::from_rational(&r)),
            ExactValue::Sqrt(s) => Some(s.clone()),
        }
    }
}

impl std::fmt::Display for ExactValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactValue::Elem(e) => write!(f, "{e}"),
            ExactValue::Sqrt(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub type SymbolTuple = [FieldElem; 4];

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub metric: Metric,
    /// Nonzero tuples examined.
    pub tuples: u64,
    /// Shaped minimum as a float.
    pub min_f64: f64,
    /// Shaped minimum, exactly; `None` when the tower lacks complex conjugation.
    pub min_exact: Option<ExactValue>,
    /// Unshaped exact determinant at the first minimizer.
    pub det_at_min: FieldElem,
    /// Lexicographically first minimizers, at most `max_witnesses`.
    pub minimizers: Vec<SymbolTuple>,
    pub minimizer_count: u64,
    /// Nonzero tuples whose determinant is exactly zero.
    pub zero_count: u64,
    pub zero_witnesses: Vec<SymbolTuple>,
}

// Per-pair precomputation. `dets(i, j)` is the exact determinant for the
// tuple (pair i, pair j); `float(i, j)` the unshaped metric value.
struct Halves {
    metric: Metric,
    // 2×2 / 2×4: det = a[i] − b[j]; 4×4: det = (a[i] − b[j])² − c[j]
    a: Vec<FieldElem>,
    b: Vec<FieldElem>,
    c: Option<Vec<FieldElem>>,
    fa: Vec<Complex64>,
    fb: Vec<Complex64>,
    fc: Vec<Complex64>,
    // σ-images for the 2×4 metric
    fbs: Vec<Complex64>,
}

impl Halves {
    fn det(&self, i: usize, j: usize) -> FieldElem {
        let d = &self.a[i] - &self.b[j];
        match &self.c {
            None => d,
            Some(c) => &d.square() - &c[j],
        }
    }

    fn float(&self, i: usize, j: usize) -> f64 {
        match (self.metric, &self.c) {
            (Metric::Delta, None) => (self.fa[i] - self.fb[j]).norm_sqr(),
            (Metric::Delta, Some(_)) => {
                let d = self.fa[i] - self.fb[j];
                (d * d - self.fc[j]).norm_sqr()
            }
            (Metric::DeltaG, _) => ((self.fa[i] - self.fb[j]) * (self.fa[i] - self.fbs[j])).norm(),
        }
    }
}

fn pairs(symbols: &[FieldElem]) -> Vec<(usize, usize)> {
    let s = symbols.len();
    (0..s * s).map(|k| (k / s, k % s)).collect()
}

fn build_halves(code: &CodeSpec, symbols: &[FieldElem]) -> Result<Halves> {
    let t = code.tower();
    let b = code.b();
    let ps = pairs(symbols);
    match code.shape {
        Shape::TwoByTwo | Shape::TwoByFour => {
            let [u0, u1] = code.effective_basis();
            let norms: Vec<FieldElem> = ps
                .par_iter()
                .map(|&(x, y)| {
                    let e = &(&symbols[x] * &u0) + &(&symbols[y] * &u1);
                    e.norm_rel().expect("extension present")
                })
                .collect();
            let bn: Vec<FieldElem> = norms.par_iter().map(|n| b * n).collect();
            let fa: Vec<Complex64> = norms.iter().map(FieldElem::embed).collect();
            let fb: Vec<Complex64> = bn.iter().map(FieldElem::embed).collect();
            let sb = b.sigma()?.embed();
            let fbs = fa.iter().map(|&n| sb * n).collect();
            Ok(Halves {
                metric: if code.shape == Shape::TwoByFour {
                    Metric::DeltaG
                } else {
                    Metric::Delta
                },
                a: norms,
                b: bn,
                c: None,
                fa,
                fb,
                fc: Vec::new(),
                fbs,
            })
        }
        Shape::FourByFour => {
            let a = t.a()?;
            let (p, q) = b.ext_parts();
            let aq2 = &a * &q.square();
            let n: Vec<FieldElem> = ps
                .par_iter()
                .map(|&(x, y)| &symbols[x].square() - &(&a * &symbols[y].square()))
                .collect();
            let pn: Vec<FieldElem> = n.par_iter().map(|v| &p * v).collect();
            let qn: Vec<FieldElem> = n.par_iter().map(|v| &aq2 * &v.square()).collect();
            Ok(Halves {
                metric: Metric::Delta,
                fa: n.iter().map(FieldElem::embed).collect(),
                fb: pn.iter().map(FieldElem::embed).collect(),
                fc: qn.iter().map(FieldElem::embed).collect(),
                fbs: Vec::new(),
                a: n,
                b: pn,
                c: Some(qn),
            })
        }
    }
}

#[derive(Default)]
struct Acc {
    best: f64,
    cands: Vec<u64>,
    cand_vals: Vec<f64>,
    zeros: Vec<u64>,
    zero_count: u64,
    count: u64,
}

impl Acc {
    fn new() -> Self {
        Acc {
            best: f64::INFINITY,
            ..Default::default()
        }
    }

    fn within(best: f64, v: f64) -> bool {
        v <= best * (1.0 + REL_TOL) + f64::MIN_POSITIVE
    }

    fn push(&mut self, idx: u64, v: f64) {
        if v < self.best {
            self.best = v;
            let best = self.best;
            let mut k = 0;
            while k < self.cands.len() {
                if Self::within(best, self.cand_vals[k]) {
                    k += 1;
                } else {
                    self.cands.swap_remove(k);
                    self.cand_vals.swap_remove(k);
                }
            }
        }
        if Self::within(self.best, v) && self.cands.len() < MAX_CANDIDATES {
            self.cands.push(idx);
            self.cand_vals.push(v);
        }
    }

    fn merge(mut self, o: Acc, max_zero: usize) -> Acc {
        self.count += o.count;
        self.zero_count += o.zero_count;
        self.zeros.extend(o.zeros);
        self.zeros.sort_unstable();
        self.zeros.truncate(max_zero);
        let best = self.best.min(o.best);
        let mut all: Vec<(u64, f64)> = self
            .cands
            .into_iter()
            .zip(self.cand_vals)
            .chain(o.cands.into_iter().zip(o.cand_vals))
            .filter(|&(_, v)| Self::within(best, v))
            .collect();
        all.sort_unstable_by_key(|&(i, _)| i);
        all.truncate(MAX_CANDIDATES);
        let (cands, cand_vals) = all.into_iter().unzip();
        Acc {
            best,
            cands,
            cand_vals,
            zeros: self.zeros,
            zero_count: self.zero_count,
            count: self.count,
        }
    }
}

fn shaping_factor(code: &CodeSpec, metric: Metric) -> Rational {
    match code.shaping {
        None => Rational::one(),
        Some(n) => {
            let k = match metric {
                Metric::Delta => code.shape.rows() as u32,
                Metric::DeltaG => 2,
            };
            Rational::from_int(i64::from(n)).pow(k).recip().expect("n > 0")
        }
    }
}

/// Exact, shaped metric value of a determinant.
fn exact_value(metric: Metric, det: &FieldElem, shaping: &Rational) -> Option<ExactValue> {
    match metric {
        Metric::Delta => det.abs_sq().map(|v| ExactValue::Elem(v.scale(shaping))),
        Metric::DeltaG => {
            let n = det.norm_rel().ok()?;
            let sq = n.abs_sq()?.as_rational()?;
            let sh = shaping * shaping;
            SqrtRational::sqrt_of(&sq * &sh).map(ExactValue::Sqrt)
        }
    }
}

/// Total number of tuples `|S|⁴` for a constellation.
pub fn tuple_count(code: &CodeSpec, cons: &Constellation) -> Result<u128> {
    let s = cons.symbols(code.tower())?.len() as u128;
    Ok(s.pow(4))
}

/// Enumerates every nonzero symbol tuple.
pub fn enumerate(code: &CodeSpec, cons: &Constellation, cfg: &EnumConfig) -> Result<Enumeration> {
    let symbols = cons.symbols(code.tower())?;
    let s = symbols.len();
    let total = (s as u128).pow(4);
    if total > cfg.cap {
        return Err(Error::TooLarge {
            tuples: total,
            cap: cfg.cap,
        });
    }
    let halves = build_halves(code, &symbols)?;
    let np = s * s;
    let zero_sym = symbols.iter().position(FieldElem::is_zero);
    let zero_pair = zero_sym.map(|z| z * s + z);
    let maxw = cfg.max_witnesses;

    let acc = (0..np)
        .into_par_iter()
        .fold(Acc::new, |mut acc, i| {
            for j in 0..np {
                if Some(i) == zero_pair && Some(j) == zero_pair {
                    continue;
                }
                let idx = (i * np + j) as u64;
                acc.count += 1;
                let det = halves.det(i, j);
                if det.is_zero() {
                    acc.zero_count += 1;
                    if acc.zeros.len() < maxw {
                        acc.zeros.push(idx);
                    }
                    acc.push(idx, 0.0);
                    continue;
                }
                acc.push(idx, halves.float(i, j));
            }
            acc
        })
        .reduce(Acc::new, |a, b| a.merge(b, maxw));

    if acc.count == 0 {
        return Err(Error::EmptyConstellation);
    }

    let tuple_of = |idx: u64| -> SymbolTuple {
        let idx = idx as usize;
        let (i, j) = (idx / np, idx % np);
        [
            symbols[i / s].clone(),
            symbols[i % s].clone(),
            symbols[j / s].clone(),
            symbols[j % s].clone(),
        ]
    };

    let shaping = shaping_factor(code, halves.metric);
    let scale_f = shaping.to_f64();
    // group near-minimal candidates by exact value
    let mut groups: HashMap<Option<ExactValue>, Vec<u64>> = HashMap::new();
    let mut order: Vec<Option<ExactValue>> = Vec::new();
    for &idx in &acc.cands {
        let (i, j) = ((idx as usize) / np, (idx as usize) % np);
        let det = halves.det(i, j);
        let ev = exact_value(halves.metric, &det, &shaping);
        let entry = groups.entry(ev.clone()).or_default();
        if entry.is_empty() {
            order.push(ev);
        }
        entry.push(idx);
    }
    let best_key = order
        .into_iter()
        .min_by(|x, y| {
            let fx = x.as_ref().map_or(f64::INFINITY, ExactValue::to_f64);
            let fy = y.as_ref().map_or(f64::INFINITY, ExactValue::to_f64);
            match (
                x.as_ref().and_then(ExactValue::as_sqrt_rational),
                y.as_ref().and_then(ExactValue::as_sqrt_rational),
            ) {
                (Some(a), Some(b)) => a.cmp(&b),
                _ => fx.total_cmp(&fy),
            }
        })
        .expect("at least one candidate");
    let group = &groups[&best_key];
    let first = group[0] as usize;
    let det_at_min = halves.det(first / np, first % np);

    Ok(Enumeration {
        metric: halves.metric,
        tuples: acc.count,
        min_f64: match &best_key {
            Some(v) => v.to_f64(),
            None => acc.best * scale_f,
        },
        min_exact: best_key,
        det_at_min,
        minimizers: group.iter().take(maxw).map(|&i| tuple_of(i)).collect(),
        minimizer_count: group.len() as u64,
        zero_count: acc.zero_count,
        zero_witnesses: acc.zeros.iter().map(|&i| tuple_of(i)).collect(),
    })
}

/// Writes `c,d,e,f,<metric>` for every nonzero tuple (shaped metric value, float).
pub fn write_det_csv<W: Write>(code: &CodeSpec, cons: &Constellation, cfg: &EnumConfig, out: W) -> Result<()> {
    let symbols = cons.symbols(code.tower())?;
    let s = symbols.len();
    let total = (s as u128).pow(4);
    if total > cfg.cap {
        return Err(Error::TooLarge {
            tuples: total,
            cap: cfg.cap,
        });
    }
    let halves = build_halves(code, &symbols)?;
    let scale = shaping_factor(code, halves.metric).to_f64();
    let names: Vec<String> = symbols.iter().map(ToString::to_string).collect();
    let io = |e: csv::Error| Error::InvalidConfig(format!("CSV write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let metric = match halves.metric {
        Metric::Delta => "abs_det_sq",
        Metric::DeltaG => "abs_norm_det",
    };
    w.write_record(["c", "d", "e", "f", metric]).map_err(io)?;
    let np = s * s;
    for i in 0..np {
        for j in 0..np {
            let t = [i / s, i % s, j / s, j % s];
            if t.iter().all(|&k| symbols[k].is_zero()) {
                continue;
            }
            let v = if halves.det(i, j).is_zero() {
                0.0
            } else {
                halves.float(i, j) * scale
            };
            let v = v.to_string();
            w.write_record([&names[t[0]], &names[t[1]], &names[t[2]], &names[t[3]], &v])
                .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::InvalidConfig(format!("CSV write failed: {e}")))?;
    Ok(())
}
