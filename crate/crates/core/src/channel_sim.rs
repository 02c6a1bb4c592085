//! Monte Carlo codeword error rates over Rayleigh block fading with
//! exhaustive maximum-likelihood decoding.
//!
//! Every trial draws from its own ChaCha8 stream: the key comes from the
//! user seed and the stream number from `(snr index, trial index)`, so
//! results do not depend on thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_metrics::{unit_codewords, Constellation};
use crate::code_spec::CodeSpec;
use crate::error::{Error, Result};
use crate::exact_algebra::FieldElem;
use crate::representations::Shape;

pub const DEFAULT_CODEBOOK_CAP: usize = 4096;
/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fading {
    /// i.i.d. `CN(0, 1)` entries, constant over each `n_tx`-column block.
    RayleighBlock,
    /// `H = I` (for `n_rx ≥ n_tx`, zero-padded).
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub n_tx: usize,
    pub n_rx: usize,
    /// `f64::INFINITY` means noiseless.
    pub snr_db_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub fading: Fading,
}

impl ChannelConfig {
    pub fn new(n_tx: usize, n_rx: usize, snr_db_grid: Vec<f64>, trials: u64, seed: u64) -> Self {
        ChannelConfig {
            n_tx,
            n_rx,
            snr_db_grid,
            trials,
            seed,
            fading: Fading::RayleighBlock,
        }
    }

    fn validate(&self, cb: &Codebook) -> Result<()> {
        if self.n_rx == 0 || self.n_tx == 0 {
            return Err(Error::InvalidConfig("antenna counts must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n_tx != cb.rows {
            return Err(Error::InvalidConfig(format!(
                "n_tx = {} but codewords have {} rows",
                self.n_tx, cb.rows
            )));
        }
        if !cb.cols.is_multiple_of(self.n_tx) {
            return Err(Error::InvalidConfig(format!(
                "{} columns do not split into {}-column fading blocks",
                cb.cols, self.n_tx
            )));
        }
        if self.trials >= 1 << 40 || self.snr_db_grid.len() >= 1 << 24 {
            return Err(Error::InvalidConfig("too many trials or SNR points".into()));
        }
        if self.snr_db_grid.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidConfig("SNR values must be numbers".into()));
        }
        Ok(())
    }
}

/// All codewords of a code over a constellation, embedded and normalized to
/// mean Frobenius energy `n_tx`.
#[derive(Clone, Debug)]
pub struct Codebook {
    pub name: String,
    pub shape: Shape,
    pub rows: usize,
    pub cols: usize,
    /// Symbol indices of each codeword, lexicographic.
    pub tuples: Vec<[usize; 4]>,
    data: Vec<Complex64>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Row-major entries of codeword `k`.
    pub fn matrix(&self, k: usize) -> &[Complex64] {
        let sz = self.rows * self.cols;
        &self.data[k * sz..(k + 1) * sz]
    }

    pub fn mean_energy(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>() / self.len() as f64
    }
}

pub fn build_codebook(code: &CodeSpec, cons: &Constellation) -> Result<Codebook> {
    build_codebook_with_cap(code, cons, DEFAULT_CODEBOOK_CAP)
}

pub fn build_codebook_with_cap(code: &CodeSpec, cons: &Constellation, cap: usize) -> Result<Codebook> {
    let symbols: Vec<Complex64> = cons.symbols(code.tower())?.iter().map(FieldElem::embed).collect();
    let s = symbols.len();
    let total = (s as u128).pow(4);
    if total > cap as u128 {
        return Err(Error::TooLarge {
            tuples: total,
            cap: cap as u128,
        });
    }
    let (rows, cols) = (code.shape.rows(), code.shape.cols());
    // codewords are F-linear in the symbols
    let units: Vec<Vec<Complex64>> = unit_codewords(code)?
        .into_iter()
        .map(|m| m.into_iter().flatten().collect())
        .collect();
    let mut tuples = Vec::with_capacity(total as usize);
    let mut data = Vec::with_capacity(total as usize * rows * cols);
    for idx in 0..total as usize {
        let t = [idx / (s * s * s), idx / (s * s) % s, idx / s % s, idx % s];
        data.extend((0..rows * cols).map(|e| (0..4).map(|k| symbols[t[k]] * units[k][e]).sum::<Complex64>()));
        tuples.push(t);
    }
    let mut cb = Codebook {
        name: code.name.clone(),
        shape: code.shape,
        rows,
        cols,
        tuples,
        data,
    };
    let e = cb.mean_energy();
    if e == 0.0 {
        return Err(Error::Degenerate("every codeword is zero".into()));
    }
    let scale = (rows as f64 / e).sqrt();
    cb.data.iter_mut().for_each(|z| *z *= scale);
    Ok(cb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub sent: usize,
    pub decoded: usize,
    /// ChaCha8 stream number used for this trial.
    pub stream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub cer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub code_name: String,
    pub points: Vec<SweepPoint>,
    #[serde(skip)]
    pub records: Vec<Vec<TrialRecord>>,
}

/// Wilson score interval for `errors` successes in `n` trials.
pub fn wilson_interval(errors: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors as f64 == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

fn cn(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

// H·X with one n_rx × n_tx channel per block of n_tx columns.
fn apply(h: &[Vec<Complex64>], x: &[Complex64], n_rx: usize, n_tx: usize, cols: usize, out: &mut [Complex64]) {
    for r in 0..n_rx {
        for c in 0..cols {
            let hb = &h[c / n_tx];
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n_tx {
                acc += hb[r * n_tx + k] * x[k * cols + c];
            }
            out[r * cols + c] = acc;
        }
    }
}

fn trial(cfg: &ChannelConfig, cb: &Codebook, noise_var: f64, stream: u64) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let (n_rx, n_tx, cols) = (cfg.n_rx, cfg.n_tx, cb.cols);
    let sent = rng.random_range(0..cb.len());
    let blocks = cols / n_tx;
    let h: Vec<Vec<Complex64>> = (0..blocks)
        .map(|_| match cfg.fading {
            Fading::RayleighBlock => (0..n_rx * n_tx).map(|_| cn(&mut rng, 1.0)).collect(),
            Fading::Identity => (0..n_rx * n_tx)
                .map(|e| {
                    let v = if e / n_tx == e % n_tx { 1.0 } else { 0.0 };
                    Complex64::new(v, 0.0)
                })
                .collect(),
        })
        .collect();
    let mut y = vec![Complex64::new(0.0, 0.0); n_rx * cols];
    apply(&h, cb.matrix(sent), n_rx, n_tx, cols, &mut y);
    if noise_var > 0.0 {
        for v in &mut y {
            *v += cn(&mut rng, noise_var);
        }
    }
    let mut hc = vec![Complex64::new(0.0, 0.0); n_rx * cols];
    let mut best = (f64::INFINITY, 0);
    for k in 0..cb.len() {
        apply(&h, cb.matrix(k), n_rx, n_tx, cols, &mut hc);
        let d: f64 = y.iter().zip(&hc).map(|(a, b)| (a - b).norm_sqr()).sum();
        if d < best.0 {
            best = (d, k);
        }
    }
    TrialRecord {
        sent,
        decoded: best.1,
        stream,
    }
}

/// Noise variance per complex entry for a given SNR: the received signal
/// energy per antenna per channel use is `n_tx / T` with unit-variance fading.
pub fn noise_variance(snr_db: f64, n_tx: usize, cols: usize) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    n_tx as f64 / (cols as f64 * 10f64.powf(snr_db / 10.0))
}

pub fn run_sweep(cfg: &ChannelConfig, cb: &Codebook) -> Result<SweepResult> {
    cfg.validate(cb)?;
    let mut points = Vec::new();
    let mut records = Vec::new();
    for (si, &snr) in cfg.snr_db_grid.iter().enumerate() {
        let var = noise_variance(snr, cfg.n_tx, cb.cols);
        let recs: Vec<TrialRecord> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| trial(cfg, cb, var, ((si as u64) << 40) | t))
            .collect();
        let errors = recs.iter().filter(|r| r.sent != r.decoded).count() as u64;
        let (ci_low, ci_high) = wilson_interval(errors, cfg.trials, WILSON_Z);
        points.push(SweepPoint {
            snr_db: snr,
            trials: cfg.trials,
            errors,
            cer: errors as f64 / cfg.trials as f64,
            ci_low,
            ci_high,
        });
        records.push(recs);
    }
    Ok(SweepResult {
        code_name: cb.name.clone(),
        points,
        records,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    snr_db: f64,
    trials: u64,
    errors: u64,
    cer: f64,
    ci_low: f64,
    ci_high: f64,
    code_name: &'a str,
}

/// CSV with columns `snr_db,trials,errors,cer,ci_low,ci_high,code_name`.
pub fn write_csv<W: std::io::Write>(results: &[SweepResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidConfig(format!("CSV write failed: {e}"));
    for r in results {
        for p in &r.points {
            w.serialize(CsvRow {
                snr_db: p.snr_db,
                trials: p.trials,
                errors: p.errors,
                cer: p.cer,
                ci_low: p.ci_low,
                ci_high: p.ci_high,
                code_name: &r.code_name,
            })
            .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Error::InvalidConfig(format!("CSV write failed: {e}")))?;
    Ok(())
}

pub fn to_csv(results: &[SweepResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(results, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn codebook_sizes_and_energy() {
        let c = preset("alamouti-na").unwrap();
        let cb = build_codebook(&c, &Constellation::qam(4)).unwrap();
        assert_eq!(cb.len(), 256);
        assert!((cb.mean_energy() - 2.0).abs() < 1e-9);
        let g = preset("golden").unwrap();
        let cb = build_codebook(&g, &Constellation::qam(4)).unwrap();
        assert_eq!(cb.len(), 256);
        let rows: Vec<f64> = (0..2)
            .map(|r| {
                (0..cb.len())
                    .map(|k| {
                        cb.matrix(k)[r * 2..r * 2 + 2]
                            .iter()
                            .map(Complex64::norm_sqr)
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    / cb.len() as f64
            })
            .collect();
        for e in rows {
            assert!((e - 1.0).abs() < 1e-9, "{e}");
        }
    }

    #[test]
    fn degenerate_and_capped() {
        let c = preset("alamouti-na").unwrap();
        assert!(matches!(
            build_codebook(&c, &Constellation::boxed(0)),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            build_codebook(&c, &Constellation::boxed(5)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn wilson_matches_reference() {
        // 5/100: reference interval from the closed form
        let (lo, hi) = wilson_interval(5, 100, WILSON_Z);
        assert!(
            (lo - 0.021543).abs() < 1e-5 && (hi - 0.111743).abs() < 1e-5,
            "{lo} {hi}"
        );
        let (lo, hi) = wilson_interval(0, 10, WILSON_Z);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.35);
    }

    #[test]
    fn rejects_bad_configs() {
        let c = preset("alamouti-na").unwrap();
        let cb = build_codebook(&c, &Constellation::qam(4)).unwrap();
        assert!(run_sweep(&ChannelConfig::new(2, 0, vec![10.0], 10, 1), &cb).is_err());
        assert!(run_sweep(&ChannelConfig::new(4, 2, vec![10.0], 10, 1), &cb).is_err());
        assert!(run_sweep(&ChannelConfig::new(2, 2, vec![10.0], 0, 1), &cb).is_err());
    }
}
