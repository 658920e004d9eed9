//! Adaptive Dormand–Prince 5(4) integrator for complex state vectors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OracleError, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-8,
            atol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

/// Right-hand side `dy/dt = f(t, y)`.
pub trait OdeSystem: Sync {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]);
}

/// Stateful stepper. The step size and the first stage (FSAL) carry over
/// between [`Dopri5::advance`] calls as long as the state is not modified in
/// between; call [`Dopri5::reset`] otherwise.
#[derive(Clone)]
pub struct Dopri5 {
    tol: Tolerances,
    max_steps: u64,
    h: Option<f64>,
    k: [Vec<Complex64>; 7],
    ytmp: Vec<Complex64>,
    ynew: Vec<Complex64>,
    fsal_valid: bool,
    pub stats: StepStats,
}

impl Dopri5 {
    pub fn new(dim: usize, tol: Tolerances, max_steps: u64) -> Self {
        let z = || vec![Complex64::new(0.0, 0.0); dim];
        Dopri5 {
            tol,
            max_steps,
            h: None,
            k: [z(), z(), z(), z(), z(), z(), z()],
            ytmp: z(),
            ynew: z(),
            fsal_valid: false,
            stats: StepStats::default(),
        }
    }

    pub fn reset(&mut self) {
        self.fsal_valid = false;
    }

    fn initial_step<S: OdeSystem>(&mut self, sys: &S, t: f64, y: &[Complex64]) -> f64 {
        let sc = |v: Complex64| self.tol.atol + self.tol.rtol * v.norm();
        let n = y.len() as f64;
        let d0 = (y.iter().map(|v| (v.norm() / sc(*v)).powi(2)).sum::<f64>() / n).sqrt();
        let d1 = (y
            .iter()
            .zip(&self.k[0])
            .map(|(v, f)| (f.norm() / sc(*v)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        for ((yt, yv), f) in self.ytmp.iter_mut().zip(y).zip(&self.k[0]) {
            *yt = yv + f * h0;
        }
        sys.rhs(t + h0, &self.ytmp, &mut self.k[1]);
        self.stats.rhs_evals += 1;
        let d2 = (y
            .iter()
            .zip(self.k[1].iter().zip(&self.k[0]))
            .map(|(v, (f1, f0))| ((f1 - f0).norm() / sc(*v)).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
            / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }

    /// Integrates from `*t` to `t_end`, calling `on_accept(t, y)` after every
    /// accepted step (including the last one, which lands exactly on `t_end`).
    pub fn advance<S, F>(
        &mut self,
        sys: &S,
        t: &mut f64,
        y: &mut [Complex64],
        t_end: f64,
        mut on_accept: F,
    ) -> Result<()>
    where
        S: OdeSystem,
        F: FnMut(f64, &[Complex64]),
    {
        if t_end <= *t {
            return Ok(());
        }
        if !self.fsal_valid {
            sys.rhs(*t, y, &mut self.k[0]);
            self.stats.rhs_evals += 1;
            self.fsal_valid = true;
        }
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(sys, *t, y),
        };
        let mut last_rejected = false;
        let start_steps = self.stats.accepted + self.stats.rejected;
        loop {
            if self.stats.accepted + self.stats.rejected - start_steps > self.max_steps {
                return Err(OracleError::StepFailure {
                    t_last: *t,
                    reason: format!("exceeded {} steps", self.max_steps),
                });
            }
            let remaining = t_end - *t;
            let clipped = h >= remaining;
            let hs = if clipped { remaining } else { h };
            if hs <= 1e-14 * t.abs().max(1.0) {
                return Err(OracleError::StepFailure {
                    t_last: *t,
                    reason: format!("step size underflow (h = {hs:e})"),
                });
            }
            let err = self.try_step(sys, *t, y, hs);
            if !err.is_finite() {
                return Err(OracleError::StepFailure {
                    t_last: *t,
                    reason: "non-finite error estimate".into(),
                });
            }
            if err <= 1.0 {
                self.stats.accepted += 1;
                *t = if clipped { t_end } else { *t + hs };
                y.copy_from_slice(&self.ynew);
                self.k.swap(0, 6);
                on_accept(*t, y);
                let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
                fac = fac.clamp(0.2, 5.0);
                if last_rejected {
                    fac = fac.min(1.0);
                }
                // a short clipped step says little about the natural step size
                if !clipped || fac < 1.0 {
                    h = hs * fac;
                }
                last_rejected = false;
                if clipped {
                    self.h = Some(h);
                    return Ok(());
                }
            } else {
                self.stats.rejected += 1;
                h = hs * (0.9 * err.powf(-0.2)).max(0.2);
                last_rejected = true;
            }
        }
    }

    /// One trial step of size `h`; leaves the candidate in `ynew` and
    /// `f(t+h, ynew)` in `k[6]`. Returns the scaled error norm.
    fn try_step<S: OdeSystem>(&mut self, sys: &S, t: f64, y: &[Complex64], h: f64) -> f64 {
        let [k1, k2, k3, k4, k5, k6, k7] = &mut self.k;
        let ytmp = &mut self.ytmp;
        for i in 0..y.len() {
            ytmp[i] = y[i] + k1[i] * (h * A21);
        }
        sys.rhs(t + C2 * h, ytmp, k2);
        for i in 0..y.len() {
            ytmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        sys.rhs(t + C3 * h, ytmp, k3);
        for i in 0..y.len() {
            ytmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        sys.rhs(t + C4 * h, ytmp, k4);
        for i in 0..y.len() {
            ytmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        sys.rhs(t + C5 * h, ytmp, k5);
        for i in 0..y.len() {
            ytmp[i] = y[i]
                + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        sys.rhs(t + h, ytmp, k6);
        let ynew = &mut self.ynew;
        for i in 0..y.len() {
            ynew[i] = y[i]
                + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
        }
        sys.rhs(t + h, ynew, k7);
        self.stats.rhs_evals += 6;

        let mut acc = 0.0;
        for i in 0..y.len() {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = self.tol.atol + self.tol.rtol * y[i].norm().max(ynew[i].norm());
            let r = e.norm() / sc;
            acc += r * r;
        }
        (acc / y.len() as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// dy/dt = −i ω y − γ y
    struct Damped {
        omega: f64,
        gamma: f64,
    }

    impl OdeSystem for Damped {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[Complex64], dy: &mut [Complex64]) {
            dy[0] = y[0] * Complex64::new(-self.gamma, -self.omega);
        }
    }

    /// dy/dt = cos(t), with explicit time dependence
    struct Forced;

    impl OdeSystem for Forced {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, t: f64, _y: &[Complex64], dy: &mut [Complex64]) {
            dy[0] = Complex64::new(t.cos(), 0.0);
        }
    }

    #[test]
    fn damped_oscillator() {
        let sys = Damped { omega: 20.0, gamma: 0.1 };
        let mut s = Dopri5::new(1, Tolerances::default(), 1_000_000);
        let mut y = vec![Complex64::new(1.0, 0.0)];
        let mut t = 0.0;
        s.advance(&sys, &mut t, &mut y, 10.0, |_, _| {}).unwrap();
        assert_eq!(t, 10.0);
        let exact = Complex64::new(-1.0, -200.0).exp();
        assert!((y[0] - exact).norm() < 1e-6);
    }

    #[test]
    fn split_calls_hit_output_times() {
        let mut s = Dopri5::new(1, Tolerances::default(), 1_000_000);
        let mut y = vec![Complex64::new(0.0, 0.0)];
        let mut t = 0.0;
        for k in 1..=50 {
            let target = 0.2 * k as f64;
            s.advance(&Forced, &mut t, &mut y, target, |_, _| {}).unwrap();
            assert_eq!(t, target);
            assert_relative_eq!(y[0].re, target.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn step_limit_reports_time() {
        let sys = Damped { omega: 1e4, gamma: 0.0 };
        let mut s = Dopri5::new(1, Tolerances::default(), 10);
        let mut y = vec![Complex64::new(1.0, 0.0)];
        let mut t = 0.0;
        match s.advance(&sys, &mut t, &mut y, 100.0, |_, _| {}) {
            Err(OracleError::StepFailure { t_last, .. }) => assert!(t_last < 100.0),
            other => panic!("{other:?}"),
        }
    }
}
