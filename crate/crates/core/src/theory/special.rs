//! `erf`, `erfi` and the moment generating function of a squared uniform.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`erfi`]; `erfi(6)` is already about `4e14`.
pub const ERFI_MAX_ARG: f64 = 6.0;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function.
///
/// `|x| <= 2`: `erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (2n+1)!!`,
/// a series of positive terms. Beyond that, `1 - erfc(x)` with `erfc` from its
/// continued fraction.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= 2.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        FRAC_2_SQRT_PI * (-x2).exp() * sum
    } else {
        1.0 - erfc_cf(ax)
    };
    v.copysign(x)
}

/// `erfc(x)` for `x >= 2` by the continued fraction
/// `erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated with the modified Lentz method.
fn erfc_cf(x: f64) -> f64 {
    if x > 27.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Imaginary error function `erfi(x) = 2/sqrt(pi) * int_0^x exp(t^2) dt`,
/// summed as `2/sqrt(pi) * sum_n x^(2n+1) / (n! (2n+1))`. Every term is
/// positive, so the series is stable over the whole accepted range.
pub fn erfi(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > ERFI_MAX_ARG {
        return Err(Error::Range(format!(
            "erfi argument {x} outside [-{ERFI_MAX_ARG}, {ERFI_MAX_ARG}]"
        )));
    }
    let ax = x.abs();
    let x2 = ax * ax;
    let mut power = ax;
    let mut sum = ax;
    let mut n = 0.0;
    loop {
        n += 1.0;
        power *= x2 / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    Ok((FRAC_2_SQRT_PI * sum).copysign(x))
}

/// Sign of the exponent in [`mgf_uniform_square`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentSign {
    Plus,
    Minus,
}

/// `E[exp(+-(theta/c) U^2)]` for `U ~ Uniform(a, b)`:
///
/// `sqrt(pi) (F(b s) - F(a s)) / (2 s (b - a))`, `s = sqrt(theta/c)`, with
/// `F = erfi` for the plus sign and `F = erf` for the minus sign. Returns 1 at
/// `theta = 0`.
pub fn mgf_uniform_square(theta: f64, c: f64, a: f64, b: f64, sign: ExponentSign) -> Result<f64> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::config(format!(
            "theta must be finite and >= 0, got {theta}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::config(format!("c must be positive, got {c}")));
    }
    if !(a >= 0.0 && b > a && b.is_finite()) {
        return Err(Error::config(format!(
            "need b > a >= 0, got a = {a}, b = {b}"
        )));
    }
    if theta == 0.0 {
        return Ok(1.0);
    }
    let s = (theta / c).sqrt();
    let diff = match sign {
        ExponentSign::Plus => erfi(b * s)? - erfi(a * s)?,
        ExponentSign::Minus => erf(b * s) - erf(a * s),
    };
    Ok(PI.sqrt() * diff / (2.0 * s * (b - a)))
}
