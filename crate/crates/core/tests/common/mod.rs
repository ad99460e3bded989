//! Shared analytic oracles for the integration suites. Everything here is
//! derived from closed-form geometry or quadrature, independent of the
//! library's own membership/evaluation code paths.
#![allow(dead_code)] // each test target uses a different subset

use posdom::domain::{ApproxPositiveDomain, BoxRegion};

/// Area of `[x0, x1] × [y0, y1]` (endpoint openness is measure-zero).
pub fn rect_area(b: &BoxRegion) -> f64 {
    let x = &b.intervals[0];
    let y = &b.intervals[1];
    (x.hi() - x.lo()) * (y.hi() - y.lo())
}

/// Area of the part of the rectangle where `x + y <= c`, in closed form.
pub fn rect_area_below_sum(b: &BoxRegion, c: f64) -> f64 {
    let (x0, x1) = (b.intervals[0].lo(), b.intervals[0].hi());
    let (y0, y1) = (b.intervals[1].lo(), b.intervals[1].hi());
    // Width at height y is clamp(c - y, x0, x1) - x0: full below y = c - x1,
    // zero above y = c - x0, linear in between.
    let full_until = (c - x1).clamp(y0, y1);
    let zero_from = (c - x0).clamp(y0, y1);
    let full_part = (full_until - y0) * (x1 - x0);
    // ∫ (c - x0 - y) dy between full_until and zero_from.
    let anti = |y: f64| (c - x0) * y - y * y / 2.0;
    full_part + (anti(zero_from) - anti(full_until))
}

/// Area of the part of the rectangle inside the band `lo <= x + y <= hi`.
pub fn rect_band_area(b: &BoxRegion, lo: f64, hi: f64) -> f64 {
    rect_area_below_sum(b, hi) - rect_area_below_sum(b, lo)
}

/// For the linear function on a 2-D domain: the exact probability that a
/// uniform point of the domain has its sum in `[lo, hi]` — the expected TPR.
pub fn linear_band_fraction(apd: &ApproxPositiveDomain, lo: f64, hi: f64) -> f64 {
    let total: f64 = apd.boxes.iter().map(rect_area).sum();
    assert!(total > 0.0, "domain has zero area");
    let banded: f64 = apd.boxes.iter().map(|b| rect_band_area(b, lo, hi)).sum();
    banded / total
}

/// Per-box fraction inside the band.
pub fn box_band_fraction(b: &BoxRegion, lo: f64, hi: f64) -> f64 {
    rect_band_area(b, lo, hi) / rect_area(b)
}

/// Binomial standard error of a proportion estimate.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// For the linear function under input noise `N(0, σ²)` per coordinate: the
/// expected noisy TPR, i.e. the probability that a uniform point of the
/// domain, displaced by the noise, still maps into `[lo, hi]`.
///
/// The displaced sum is `s + Z` with `Z ~ N(0, 2σ²)`, so the acceptance
/// probability at sum `s` is `Φ((hi-s)/τ) − Φ((lo-s)/τ)` with `τ = σ√2`.
/// Each box contributes the integral of that weight against the trapezoidal
/// density of `s`, evaluated by Simpson quadrature.
pub fn linear_noisy_band_fraction(apd: &ApproxPositiveDomain, lo: f64, hi: f64, sigma: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    if sigma == 0.0 {
        return linear_band_fraction(apd, lo, hi);
    }
    let tau = sigma * std::f64::consts::SQRT_2;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let weight = |s: f64| normal.cdf((hi - s) / tau) - normal.cdf((lo - s) / tau);

    let mut weighted = 0.0;
    let mut total = 0.0;
    for b in &apd.boxes {
        let (x0, x1) = (b.intervals[0].lo(), b.intervals[0].hi());
        let (y0, y1) = (b.intervals[1].lo(), b.intervals[1].hi());
        total += rect_area(b);
        // Density of s = x + y over the box: overlap length of [x0, x1] and
        // [s - y1, s - y0], a trapezoid supported on [x0 + y0, x1 + y1].
        let density = |s: f64| -> f64 {
            let left = x0.max(s - y1);
            let right = x1.min(s - y0);
            (right - left).max(0.0)
        };
        let (a, b_) = (x0 + y0, x1 + y1);
        let steps = 4000;
        let h = (b_ - a) / steps as f64;
        let mut integral = weight(a) * density(a) + weight(b_) * density(b_);
        for k in 1..steps {
            let s = a + k as f64 * h;
            let coefficient = if k % 2 == 1 { 4.0 } else { 2.0 };
            integral += coefficient * weight(s) * density(s);
        }
        weighted += integral * h / 3.0;
    }
    weighted / total
}
