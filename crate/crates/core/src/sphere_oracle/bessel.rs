//! Spherical Bessel functions of the first and second kind.

use crate::{Error, Result};

/// `(j_l(x), y_l(x))` for a single order.
pub fn spherical_bessel(l: usize, x: f64) -> Result<(f64, f64)> {
    let (j, y) = spherical_bessel_all(l, x)?;
    Ok((j[l], y[l]))
}

/// `j_0..=j_lmax` and `y_0..=y_lmax` at `x > 0`.
///
/// `y_l` comes from upward recurrence, which is stable for the dominant
/// solution. `j_l` uses upward recurrence for `l ≤ x`; above the turning
/// point it uses Miller's backward recurrence in ratio form, anchored at the
/// last upward value (or at `j₀ = sin x / x` when `x < 1`).
pub fn spherical_bessel_all(lmax: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("spherical Bessel argument must be positive, got {x}")));
    }
    let (s, c) = x.sin_cos();

    let mut y = vec![0.0; lmax + 1];
    y[0] = -c / x;
    if lmax >= 1 {
        y[1] = -c / (x * x) - s / x;
    }
    for l in 1..lmax {
        y[l + 1] = (2 * l + 1) as f64 / x * y[l] - y[l - 1];
    }

    let mut j = vec![0.0; lmax + 1];
    j[0] = s / x;
    // Largest order computed upward.
    let anchor = if x < 1.0 { 0 } else { (x.floor() as usize).min(lmax) };
    if anchor >= 1 {
        j[1] = s / (x * x) - c / x;
        for l in 1..anchor {
            j[l + 1] = (2 * l + 1) as f64 / x * j[l] - j[l - 1];
        }
    }
    if anchor < lmax {
        // ratio[l] = j_l / j_{l-1}, from the continued fraction started far
        // above the turning point.
        let top = lmax.max(x.ceil() as usize);
        let start = top + 30 + (10.0 * (top as f64).cbrt()).ceil() as usize;
        let mut ratio = vec![0.0; lmax + 2];
        let mut r = 0.0;
        for l in (anchor + 1..=start).rev() {
            r = x / ((2 * l + 1) as f64 - x * r);
            if l <= lmax {
                ratio[l] = r;
            }
        }
        for l in anchor + 1..=lmax {
            j[l] = j[l - 1] * ratio[l];
        }
    }
    Ok((j, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_low_order() {
        let x = 0.7f64;
        let (j0, y0) = spherical_bessel(0, x).unwrap();
        assert!((j0 - 0.920_310_98).abs() < 1e-8 && (j0 - x.sin() / x).abs() < 1e-15);
        assert!((y0 + 1.092_631_70).abs() < 1e-8 && (y0 + x.cos() / x).abs() < 1e-15);

        let (j1, _) = spherical_bessel(1, 0.5).unwrap();
        let exact = 0.5f64.sin() / 0.25 - 0.5f64.cos() / 0.5;
        assert!((j1 / exact - 1.0).abs() < 1e-10, "{j1} {exact}");
        assert!((j1 - 0.162_537_03).abs() < 1e-8);
    }

    #[test]
    fn second_order_against_closed_form() {
        for &x in &[0.3, 1.0, 2.5, 7.0, 40.0] {
            let (s, c) = (x as f64).sin_cos();
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            let y2 = -(3.0 / (x * x) - 1.0) * c / x - 3.0 * s / (x * x);
            let (j, y) = spherical_bessel(2, x).unwrap();
            assert!((j / j2 - 1.0).abs() < 1e-12, "x={x}: {j} {j2}");
            assert!((y / y2 - 1.0).abs() < 1e-12, "x={x}: {y} {y2}");
        }
    }

    #[test]
    fn wronskian() {
        for &x in &[0.1, 1.0, 10.0, 100.0] {
            let (j, y) = spherical_bessel_all(41, x).unwrap();
            for l in 1..=40 {
                let dj = j[l - 1] - (l + 1) as f64 / x * j[l];
                let dy = y[l - 1] - (l + 1) as f64 / x * y[l];
                let w = j[l] * dy - dj * y[l];
                assert!((w * x * x - 1.0).abs() < 1e-10, "l={l} x={x}: {}", w * x * x);
            }
        }
    }

    #[test]
    fn rejects_non_positive_argument() {
        assert!(spherical_bessel(0, 0.0).is_err());
        assert!(spherical_bessel(3, -1.0).is_err());
    }
}
