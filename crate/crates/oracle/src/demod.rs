//! Least-squares demodulation of sampled expectation values.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

/// `z(t) ≈ minus·e^{−iνt} + plus·e^{+iνt} + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Harmonic {
    pub minus: Complex64,
    pub plus: Complex64,
    pub constant: Complex64,
    pub residual_rms: f64,
}

/// Trapezoid weights for possibly nonuniform sample times.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    if n < 2 {
        return vec![1.0; n];
    }
    (0..n)
        .map(|k| {
            let lo = times[k.saturating_sub(1)];
            let hi = times[(k + 1).min(n - 1)];
            0.5 * (hi - lo)
        })
        .collect()
}

/// Time average by the trapezoid rule.
pub fn time_average(times: &[f64], values: &[f64]) -> f64 {
    let w = trapezoid_weights(times);
    let total: f64 = w.iter().sum();
    w.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / total
}

/// Continuous-time least-squares fit, the samples weighted by the trapezoid
/// rule so uneven step sizes do not bias the result. Falls back to a constant
/// when the record is shorter than one period of ν.
pub fn fit_harmonic(times: &[f64], values: &[Complex64], nu: f64) -> Harmonic {
    assert_eq!(times.len(), values.len());
    let w = trapezoid_weights(times);
    let span = times.last().copied().unwrap_or(0.0) - times.first().copied().unwrap_or(0.0);
    let resolvable = nu > 0.0 && nu * span >= 2.0 * std::f64::consts::PI;

    let (minus, plus, constant) = if resolvable {
        let mut g = Matrix3::<Complex64>::zeros();
        let mut r = Vector3::<Complex64>::zeros();
        for ((t, z), wk) in times.iter().zip(values).zip(&w) {
            let e = Complex64::from_polar(1.0, -nu * t);
            let phi = [e, e.conj(), Complex64::new(1.0, 0.0)];
            for a in 0..3 {
                for b in 0..3 {
                    g[(a, b)] += phi[a].conj() * phi[b] * *wk;
                }
                r[a] += phi[a].conj() * z * *wk;
            }
        }
        match g.lu().solve(&r) {
            Some(x) => (x[0], x[1], x[2]),
            None => (Complex64::default(), Complex64::default(), mean(values, &w)),
        }
    } else {
        (Complex64::default(), Complex64::default(), mean(values, &w))
    };

    let total: f64 = w.iter().sum();
    let residual = times
        .iter()
        .zip(values)
        .zip(&w)
        .map(|((t, z), wk)| {
            let e = Complex64::from_polar(1.0, -nu * t);
            wk * (z - minus * e - plus * e.conj() - constant).norm_sqr()
        })
        .sum::<f64>();
    Harmonic {
        minus,
        plus,
        constant,
        residual_rms: (residual / total.max(f64::MIN_POSITIVE)).sqrt(),
    }
}

fn mean(values: &[Complex64], w: &[f64]) -> Complex64 {
    let total: f64 = w.iter().sum();
    values.iter().zip(w).map(|(z, wk)| z * *wk).sum::<Complex64>() / total
}
