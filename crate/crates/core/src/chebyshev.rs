//! Chebyshev polynomials and the truncated Chebyshev delta kernel.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `T_t(x)`: three-term recurrence on `[-1, 1]`, `cosh(t acosh|x|)` with the
/// parity sign outside.
pub fn chebyshev_t(t: usize, x: f64) -> f64 {
    if t < 2 {
        return if t == 0 { 1.0 } else { x };
    }
    if x.abs() <= 1.0 {
        let (mut prev, mut cur) = (1.0, x);
        for _ in 1..t {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        let sign = if x < 0.0 && t % 2 == 1 { -1.0 } else { 1.0 };
        sign * (t as f64 * x.abs().acosh()).cosh()
    }
}

/// `T_0(x), ..., T_t_max(x)` in one pass.
pub fn chebyshev_series(t_max: usize, x: f64) -> Vec<f64> {
    if x.abs() > 1.0 {
        return (0..=t_max).map(|t| chebyshev_t(t, x)).collect();
    }
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(1.0);
    if t_max >= 1 {
        out.push(x);
    }
    for t in 2..=t_max {
        out.push(2.0 * x * out[t - 1] - out[t - 2]);
    }
    out
}

/// Weight-free part of the kernel: `sum_t c_t T_t(x) T_t(y)` with
/// `c_0 = 1/2`, `c_t = 1` otherwise.
pub fn kernel_sum(x: f64, y: f64, t_max: usize) -> f64 {
    let tx = chebyshev_series(t_max, x);
    let ty = chebyshev_series(t_max, y);
    0.5 + tx.iter().zip(&ty).skip(1).map(|(a, b)| a * b).sum::<f64>()
}

/// Truncated delta kernel
/// `2 / (pi sqrt(1 - x^2)) * sum_t c_t T_t(x) T_t(y)`, a peak at `x = y` of
/// width about `1 / t_max`.
pub fn coarse_delta(x: f64, y: f64, t_max: usize) -> Result<f64> {
    if x.abs() >= 1.0 {
        return Err(Error::EndpointSingular);
    }
    if y.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!("kernel centre {y} outside [-1, 1]")));
    }
    Ok(2.0 / (PI * (1.0 - x * x).sqrt()) * kernel_sum(x, y, t_max))
}
