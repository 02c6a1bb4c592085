use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{FieldElem, TowerSpec};

fn yes() -> bool {
    true
}

/// A finite alphabet of information symbols in the base field `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Constellation {
    /// `a + b·ω` with `a, b ∈ [−L, L]`, where `ω = √m` (`i` for Gaussian integers).
    /// Over `F = Q` only the integer part is used.
    Box {
        #[serde(rename = "L")]
        l: u32,
        #[serde(default = "yes")]
        include_zero: bool,
        /// Restrict to `b = 0` even when `F ≠ Q`.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        rational_only: bool,
    },
    /// Square QAM: odd coordinates in `[−(√q−1), √q−1]`. Over `F = Q` this is
    /// the `q`-point PAM alphabet `{±1, ±3, …, ±(q−1)}`.
    Qam { q: u32 },
}

impl Constellation {
    pub fn boxed(l: u32) -> Self {
        Constellation::Box {
            l,
            include_zero: true,
            rational_only: false,
        }
    }

    pub fn rational_box(l: u32) -> Self {
        Constellation::Box {
            l,
            include_zero: true,
            rational_only: true,
        }
    }

    pub fn qam(q: u32) -> Self {
        Constellation::Qam { q }
    }

    fn pam_levels(n: u32) -> Vec<i64> {
        let n = i64::from(n);
        (0..n).map(|k| 2 * k - (n - 1)).collect()
    }

    /// The symbol alphabet, as elements of `tower` lying in its base field.
    pub fn symbols(&self, tower: &TowerSpec) -> Result<Vec<FieldElem>> {
        let two_dim = tower.m().is_some();
        let gen = if two_dim { Some(tower.sqrt_m()?) } else { None };
        let make = |re: i64, im: i64| -> FieldElem {
            let x = tower.from_int(re);
            match (&gen, im) {
                (_, 0) | (None, _) => x,
                (Some(g), _) => &x + &g.scale(&im.into()),
            }
        };
        let out: Vec<FieldElem> = match *self {
            Constellation::Box {
                l,
                include_zero,
                rational_only,
            } => {
                let l = i64::from(l);
                let ims: Vec<i64> = if two_dim && !rational_only {
                    (-l..=l).collect()
                } else {
                    vec![0]
                };
                let mut v = Vec::new();
                for re in -l..=l {
                    for &im in &ims {
                        if re == 0 && im == 0 && !include_zero {
                            continue;
                        }
                        v.push(make(re, im));
                    }
                }
                v
            }
            Constellation::Qam { q } => {
                if two_dim {
                    let side = (q as f64).sqrt().round() as u32;
                    if side * side != q || side < 2 || side % 2 == 1 {
                        return Err(Error::InvalidConfig(format!("QAM order {q} is not an even square")));
                    }
                    let lv = Self::pam_levels(side);
                    let mut v = Vec::new();
                    for &re in &lv {
                        for &im in &lv {
                            v.push(make(re, im));
                        }
                    }
                    v
                } else {
                    if q < 2 || q % 2 == 1 {
                        return Err(Error::InvalidConfig(format!("PAM order {q} must be even")));
                    }
                    Self::pam_levels(q).into_iter().map(|re| make(re, 0)).collect()
                }
            }
        };
        if out.is_empty() {
            return Err(Error::EmptyConstellation);
        }
        Ok(out)
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constellation::Box {
                l,
                include_zero,
                rational_only,
            } => {
                write!(f, "box L={l}")?;
                if *rational_only {
                    f.write_str(" (rational)")?;
                }
                if !include_zero {
                    f.write_str(" without 0")?;
                }
                Ok(())
            }
            Constellation::Qam { q } => write!(f, "{q}-QAM"),
        }
    }
}
