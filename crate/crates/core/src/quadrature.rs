//! Numerical integration on finite intervals.

/// Adaptive Simpson rule to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Chebyshev nodes of the first kind, `cos((2j + 1) pi / 2n)`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect()
}

/// `int_{-1}^{1} f(x) / sqrt(1 - x^2) dx` with `n` Chebyshev-Gauss nodes;
/// exact for polynomial `f` of degree below `2n`.
pub fn chebyshev_gauss<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let nodes = chebyshev_nodes(n);
    let values: Vec<f64> = nodes.into_iter().map(f).collect();
    std::f64::consts::PI / n as f64 * crate::par::pairwise_sum(&values)
}

/// `int_{-r}^{r} g(mu) dmu` for integrands with inverse square-root edge
/// behaviour, via `mu = r x` and Chebyshev-Gauss nodes.
pub fn integrate_band<F: Fn(f64) -> f64>(g: F, r: f64, n: usize) -> f64 {
    chebyshev_gauss(|x| r * g(r * x) * (1.0 - x * x).sqrt(), n)
}

/// Trapezoid rule over tabulated samples.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_polynomial_and_sine() {
        assert!((adaptive_simpson(|x| x * x, 0.0, 3.0, 1e-12) - 9.0).abs() < 1e-12);
        assert!((adaptive_simpson(f64::sin, 0.0, PI, 1e-12) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn chebyshev_gauss_exactness() {
        // int x^2 / sqrt(1 - x^2) = pi / 2
        assert!((chebyshev_gauss(|x| x * x, 4) - PI / 2.0).abs() < 1e-14);
        // semicircle area
        assert!((integrate_band(|m| (1.0 - m * m).max(0.0).sqrt(), 1.0, 64) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_linear() {
        let xs = [0.0, 0.5, 2.0];
        assert!((trapezoid(&xs, &xs) - 2.0).abs() < 1e-15);
    }
}
