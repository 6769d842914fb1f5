//! Composite rules on uniform node sets.
//!
//! Grid fields live at cell centres and are integrated with the midpoint
//! rule through [`crate::Grid::integrate`]. The rules here take samples at
//! the nodes `a + i h`, `i = 0..=m`, and are used for reference values.

/// Composite trapezoid rule.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        m => h * (0.5 * (f[0] + f[m - 1]) + f[1..m - 1].iter().sum::<f64>()),
    }
}

/// Composite Simpson rule; falls back to trapezoid on the last panel for an
/// even number of samples.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let m = f.len();
    if m < 3 {
        return trapezoid(f, h);
    }
    let panels = if m % 2 == 1 { m - 1 } else { m - 2 };
    let mut s = f[0] + f[panels];
    for (i, v) in f.iter().enumerate().take(panels).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = s * h / 3.0;
    if panels < m - 1 {
        total += trapezoid(&f[panels..], h);
    }
    total
}

/// Integrates `f` over `[a, b]` with `m` Simpson panels.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let m = m.max(2) + m % 2;
    let h = (b - a) / m as f64;
    let samples: Vec<f64> = (0..=m).map(|i| f(a + i as f64 * h)).collect();
    simpson(&samples, h)
}

/// Midpoint rule over `m` cells of `[a, b]`.
pub fn midpoint_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    (0..m).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// One Richardson step for a method of order `p`, given results at `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64, p: i32) -> f64 {
    let k = 2f64.powi(p);
    (k * fine - coarse) / (k - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_are_exact_on_low_degree() {
        let h = 0.1;
        let lin: Vec<f64> = (0..=10).map(|i| 3.0 * i as f64 * h + 1.0).collect();
        assert!((trapezoid(&lin, h) - 2.5).abs() < 1e-14);
        let cub: Vec<f64> = (0..=10).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&cub, h) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn simpson_even_sample_count() {
        let v = simpson_fn(|x| x.exp(), 0.0, 1.0, 64);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-9);
        let samples: Vec<f64> = (0..=9).map(|i| (i as f64 / 9.0 * 0.9).sin()).collect();
        let _ = simpson(&samples, 0.1);
    }

    #[test]
    fn midpoint_converges_second_order() {
        let exact = 2.0;
        let e1 = (midpoint_fn(f64::sin, 0.0, std::f64::consts::PI, 32) - exact).abs();
        let e2 = (midpoint_fn(f64::sin, 0.0, std::f64::consts::PI, 64) - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.05);
        let r = richardson(
            midpoint_fn(f64::sin, 0.0, std::f64::consts::PI, 32),
            midpoint_fn(f64::sin, 0.0, std::f64::consts::PI, 64),
            2,
        );
        assert!((r - exact).abs() < 1e-6);
    }
}
