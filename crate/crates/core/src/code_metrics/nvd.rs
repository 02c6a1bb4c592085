//! Non-vanishing determinant constants from a fractional representation of `b`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::enumerate::Metric;
use crate::code_spec::{CodeSpec, NvdFraction};
use crate::error::{Error, Result};
use crate::exact_algebra::{FieldElem, Rational, SqrtRational};
use crate::number_theory::GaussInt;
use crate::representations::Shape;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NvdReport {
    pub metric: Metric,
    /// Denominator constant: the metric of a nonzero codeword is at least
    /// `ideal_factor / constant` before shaping.
    pub constant: SqrtRational,
    pub ideal_factor: SqrtRational,
    /// Lower bound before shaping.
    pub pre_shaping: SqrtRational,
    /// Lower bound on the shaped metric.
    pub shaped: SqrtRational,
    /// `√shaped`: the bound on `|det|` itself (square shapes only).
    pub det_modulus: Option<SqrtRational>,
    /// The bound is proven for this tower (the relevant ring of integers has no
    /// elements of modulus below one).
    pub applicable: bool,
    /// The supplied denominator is the canonical reduced one.
    pub fraction_verified: bool,
    pub note: String,
}

/// `x ∈ Q(i)` as `(re, im)`, when the tower exposes it.
pub(crate) fn gaussian_parts(x: &FieldElem) -> Option<(Rational, Rational)> {
    let t = x.tower();
    if let Some(r) = x.as_rational() {
        return Some((r, Rational::zero()));
    }
    let c = x.coords();
    match (t.m(), t.a_coords()) {
        (Some(-1), _) if x.is_in_base() => Some((c[0].clone(), c[1].clone())),
        (None, Some([a])) if *a == Rational::from_int(-1) => Some((c[0].clone(), c[1].clone())),
        _ => None,
    }
}

fn to_gauss(re: &Rational, im: &Rational, scale: &BigInt) -> GaussInt {
    let conv = |r: &Rational| {
        let (n, d) = (r.numer(), r.denom());
        n * (scale / d)
    };
    GaussInt::new(conv(re), conv(im))
}

fn gauss_elem(like: &FieldElem, g: &GaussInt) -> Result<FieldElem> {
    let t = like.tower();
    let re = Rational::from(g.re.clone());
    let im = Rational::from(g.im.clone());
    if im.is_zero() {
        return Ok(t.from_rational(re));
    }
    t.gaussian_elem(re, im)
}

/// Writes `b ∈ Q(i)` as `b_n / b_d` with coprime Gaussian integers and `b_d`
/// normalized to the first quadrant.
pub fn reduce_fraction_gaussian(b: &FieldElem) -> Result<(FieldElem, FieldElem)> {
    let (re, im) = gaussian_parts(b).ok_or_else(|| Error::NotGaussian(b.to_string()))?;
    let l = re.denom().lcm(&im.denom());
    let num = to_gauss(&re, &im, &l);
    let den = GaussInt::new(l, 0);
    let g = num.gcd(&den);
    let (num, den) = if g.is_zero() {
        (num, GaussInt::new(1, 0))
    } else {
        (num.div_exact(&g), den.div_exact(&g))
    };
    let (den, unit) = den.normalized();
    let num = num.mul(&unit);
    Ok((gauss_elem(b, &num)?, gauss_elem(b, &den)?))
}

fn rational_abs_sq(x: &FieldElem, what: &str) -> Result<Rational> {
    x.abs_sq()
        .and_then(|v| v.as_rational())
        .ok_or_else(|| Error::InvalidSpec(format!("{what}: |{x}|² is not rational")))
}

fn require_integral(name: &str, x: &FieldElem) -> Result<()> {
    if x.is_zero() && name.ends_with("_d") {
        return Err(Error::ZeroDivision(format!("{name} is zero")));
    }
    if !x.is_algebraic_integer() {
        return Err(Error::NonIntegral(format!("{name} = {x}")));
    }
    Ok(())
}

fn canonical_abs_sq(x: &FieldElem) -> Option<Rational> {
    let (_, d) = reduce_fraction_gaussian(x).ok()?;
    d.abs_sq()?.as_rational()
}

/// The NVD lower bound implied by writing `b` (or `p`, `q`) as fractions of
/// algebraic integers.
pub fn nvd_constant(code: &CodeSpec, fraction: &NvdFraction) -> Result<NvdReport> {
    let t = code.tower();
    let b = code.b();
    for u in &code.basis {
        if !u.is_algebraic_integer() {
            return Err(Error::NonIntegral(format!("basis element {u}")));
        }
    }
    let n = code
        .shaping
        .map_or(Rational::one(), |n| Rational::from_int(i64::from(n)));
    match (code.shape, fraction) {
        (Shape::TwoByTwo | Shape::TwoByFour, NvdFraction::Scalar { b_n, b_d }) => {
            require_integral("b_n", b_n)?;
            require_integral("b_d", b_d)?;
            if &b_n.try_div(b_d)? != b {
                return Err(Error::FractionMismatch(format!("{b_n} / ({b_d})"), b.to_string()));
            }
            let norm_alpha = match &code.ideal {
                Some(a) => rational_abs_sq(&a.norm_rel()?, "ideal")?,
                None => Rational::one(),
            };
            let canonical = canonical_abs_sq(b);
            if code.shape == Shape::TwoByTwo {
                let c = rational_abs_sq(b_d, "b_d")?;
                let pre = &norm_alpha / &c;
                let shaped = &pre / &(&n * &n);
                let applicable = if b.is_in_base() {
                    t.base_is_q_or_imaginary()
                } else {
                    t.top_is_q_or_imaginary_quadratic()
                };
                let verified = canonical.as_ref() == Some(&c);
                let shaped_s = SqrtRational::from_rational(&shaped);
                Ok(NvdReport {
                    metric: Metric::Delta,
                    constant: SqrtRational::from_rational(&c),
                    ideal_factor: SqrtRational::from_rational(&norm_alpha),
                    pre_shaping: SqrtRational::from_rational(&pre),
                    det_modulus: shaped_s.sqrt(),
                    shaped: shaped_s,
                    applicable,
                    fraction_verified: verified,
                    note: note(applicable, verified, canonical.is_some()),
                })
            } else {
                // |N_{K/F}(b_d)| may be irrational; keep everything squared.
                let nd_sq = rational_abs_sq(&b_d.norm_rel()?, "N(b_d)")?;
                let pre_sq = &(&norm_alpha * &norm_alpha) / &nd_sq;
                let shaped_sq = &pre_sq / &n.pow(4);
                let applicable = t.base_is_q_or_imaginary();
                let verified = canonical
                    .as_ref()
                    .is_some_and(|c| *c == rational_abs_sq(b_d, "b_d").unwrap_or_else(|_| Rational::zero()));
                let pre = SqrtRational::sqrt_of(pre_sq).expect("nonnegative");
                Ok(NvdReport {
                    metric: Metric::DeltaG,
                    constant: SqrtRational::sqrt_of(nd_sq).expect("nonnegative"),
                    ideal_factor: SqrtRational::from_rational(&norm_alpha),
                    pre_shaping: pre,
                    shaped: SqrtRational::sqrt_of(shaped_sq).expect("nonnegative"),
                    det_modulus: None,
                    applicable,
                    fraction_verified: verified,
                    note: note(applicable, verified, canonical.is_some()),
                })
            }
        }
        (Shape::FourByFour, NvdFraction::Parts { p_n, p_d, q_n, q_d }) => {
            for (name, x) in [("p_n", p_n), ("p_d", p_d), ("q_n", q_n), ("q_d", q_d)] {
                if !x.is_in_base() {
                    return Err(Error::NotInBase(format!("{name} = {x}")));
                }
                require_integral(name, x)?;
            }
            let (p, q) = b.ext_parts();
            if p_n.try_div(p_d)? != p || q_n.try_div(q_d)? != q {
                return Err(Error::FractionMismatch(
                    format!("({p_n})/({p_d}) + ({q_n})/({q_d})·√a"),
                    b.to_string(),
                ));
            }
            let qd = rational_abs_sq(q_d, "q_d")?;
            let c_sq = if p.is_zero() {
                qd.clone()
            } else {
                &rational_abs_sq(p_d, "p_d")? * &qd
            };
            let c = c_sq.pow(2);
            let pre = c.recip().expect("nonzero denominators");
            let shaped = &pre / &n.pow(4);
            let applicable = t.base_is_q_or_imaginary();
            let mut verified = canonical_abs_sq(&q).is_some_and(|cq| cq == qd);
            if !p.is_zero() {
                verified &= canonical_abs_sq(&p).is_some_and(|cp| Some(cp) == rational_abs_sq(p_d, "p_d").ok());
            }
            let shaped_s = SqrtRational::from_rational(&shaped);
            Ok(NvdReport {
                metric: Metric::Delta,
                constant: SqrtRational::from_rational(&c),
                ideal_factor: SqrtRational::one(),
                pre_shaping: SqrtRational::from_rational(&pre),
                det_modulus: shaped_s.sqrt(),
                shaped: shaped_s,
                applicable,
                fraction_verified: verified,
                note: note(applicable, verified, true),
            })
        }
        (shape, _) => Err(Error::InvalidSpec(format!(
            "nvd_fraction: a {shape} code needs {}",
            if shape == Shape::FourByFour {
                "p_n, p_d, q_n, q_d"
            } else {
                "b_n, b_d"
            }
        ))),
    }
}

fn note(applicable: bool, verified: bool, checkable: bool) -> String {
    let mut s = String::new();
    if !applicable {
        s.push_str("bound not established for this tower (integers of modulus < 1 exist); ");
    }
    if verified {
        s.push_str("denominator is the reduced Gaussian one");
    } else if checkable {
        s.push_str("denominator is not reduced; the bound holds but may be weak");
    } else {
        s.push_str("denominator supplied by the caller; minimality not verified");
    }
    s
}
