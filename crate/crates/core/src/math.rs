//! Scalar helpers over `libm`, since `f64` methods like `powf` need `std`.

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `|x|^r` for `r > 0`, with `0^r = 0`.
#[inline]
pub(crate) fn abs_pow(x: f64, r: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else if r == 2.0 {
        a * a
    } else if r == 1.0 {
        a
    } else {
        powf(a, r)
    }
}

/// `|x|^(r-2) x`, continuously extended by 0 at `x = 0` (needs `r > 1`).
#[inline]
pub(crate) fn signed_pow(x: f64, r: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if r == 2.0 {
        x
    } else {
        powf(x.abs(), r - 1.0).copysign(x)
    }
}

/// `a^(s-2)` for a gradient magnitude `a >= 0`; `0` at `a = 0` unless `s = 2`.
#[inline]
pub(crate) fn weight_pow(a: f64, s: f64) -> f64 {
    if s == 2.0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else {
        powf(a, s - 2.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}
