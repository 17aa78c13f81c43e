//! One-dimensional maximization on `[0, 1]`: a uniform grid scan followed by
//! golden-section refinement around the best grid cell.

/// 1 / phi
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
    /// Whether the grid scan saw a single rise-then-fall pattern.
    pub unimodal: bool,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Maximizes `f` over `[0, 1]`.
///
/// `grid_points` uniformly spaced evaluations locate the best cell, which is
/// then refined by golden-section search to an absolute tolerance `tol` in
/// the argument. For a non-unimodal profile the refinement still starts from
/// the best grid cell.
pub fn maximize_unit_interval<F: Fn(f64) -> f64>(f: F, grid_points: usize, tol: f64) -> Maximum {
    let m = grid_points.max(3);
    let step = 1.0 / (m - 1) as f64;
    let values: Vec<f64> = (0..m).map(|i| f(i as f64 * step)).collect();

    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }

    // after the first strict descent there must be no strict ascent
    let mut descending = false;
    let mut unimodal = true;
    for w in values.windows(2) {
        if w[1] < w[0] {
            descending = true;
        } else if w[1] > w[0] && descending {
            unimodal = false;
            break;
        }
    }

    let lo = best.saturating_sub(1) as f64 * step;
    let hi = ((best + 1).min(m - 1)) as f64 * step;
    let (arg, value) = golden_section_max(&f, lo, hi, tol);
    if value >= values[best] {
        Maximum { arg, value, unimodal }
    } else {
        Maximum {
            arg: best as f64 * step,
            value: values[best],
            unimodal,
        }
    }
}

/// Bisection on the sign of a decreasing derivative `df` over `[lo, hi]`.
///
/// Returns `None` unless `df(lo) > 0 > df(hi)`, i.e. the bracket holds an
/// interior stationary point of a concave function.
pub fn polish_stationary<D: Fn(f64) -> f64>(df: D, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    if !(df(lo) > 0.0 && df(hi) < 0.0) {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let d = df(mid);
        if d > 0.0 {
            lo = mid;
        } else if d < 0.0 {
            hi = mid;
        } else {
            return Some(mid);
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_quadratic_peak() {
        let m = maximize_unit_interval(|t| -(t - 0.3141).powi(2), 101, 1e-9);
        assert!((m.arg - 0.3141).abs() < 1e-8);
        assert!(m.unimodal);
    }

    #[test]
    fn handles_boundary_maxima() {
        let m = maximize_unit_interval(|t| t, 101, 1e-9);
        assert!((m.arg - 1.0).abs() < 1e-8);
        let m = maximize_unit_interval(|t| -t, 101, 1e-9);
        assert!(m.arg.abs() < 1e-8);
    }

    #[test]
    fn polish_pins_flat_peaks() {
        let df = |t: f64| -2.0 * (t - 0.123_456_789_012);
        let t = polish_stationary(df, 0.0, 1.0, 1e-14).unwrap();
        assert!((t - 0.123_456_789_012).abs() < 1e-13);
        assert!(polish_stationary(df, 0.5, 1.0, 1e-14).is_none());
    }

    #[test]
    fn flags_multimodal_profiles() {
        let f = |t: f64| (12.0 * t).sin() + 0.2 * t;
        let m = maximize_unit_interval(f, 101, 1e-9);
        assert!(!m.unimodal);
        // best of the two local maxima on [0, 1]
        let dense = (0..=100_000)
            .map(|i| f(i as f64 / 100_000.0))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(m.value >= dense - 1e-9);
    }
}
