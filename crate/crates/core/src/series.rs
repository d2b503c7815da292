//! Truncated Taylor-coefficient machinery.
//!
//! Coefficients of an analytic function `f(z) = Σ cₙ zⁿ` are recovered from
//! equispaced samples on a circle `|z| = r < 1` by a discrete Fourier sum,
//!
//! ```text
//! c_k ≈ r^(-k) · (1/M) Σ_j f(r e^(2πij/M)) e^(-2πijk/M),
//! ```
//!
//! which picks up an aliasing error from the coefficients `c_{k+M}, c_{k+2M}, …`.
//! Each [`TaylorPoly`] carries the estimated aliasing bound
//! `sup|f| · r^(M-k) / (1 - r^M)` so downstream matrix-entry error budgets
//! stay explicit.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Error;
use crate::Result;

/// Minimum default sample count; powers of two keep the FFT fast.
pub const MIN_SAMPLES: usize = 1024;

/// Default sample count for a given truncation order.
pub fn default_sample_count(order: usize) -> usize {
    (4 * (order + 1)).max(MIN_SAMPLES).next_power_of_two()
}

/// Default sample radius `1 - 1/(2N)`: balances the `r^(-k)` coefficient
/// conditioning against aliasing for functions bounded on the disc.
pub fn default_sample_radius(order: usize) -> f64 {
    1.0 - 1.0 / (2.0 * (order.max(1) as f64))
}

/// Truncated power series with coefficient-provenance metadata.
#[derive(Debug, Clone)]
pub struct TaylorPoly {
    /// Coefficients `c_0 .. c_N`.
    pub coeffs: Vec<Complex64>,
    /// Radius of the sample circle the coefficients came from.
    pub sample_radius: f64,
    /// Estimated aliasing error per coefficient.
    pub alias_bound: f64,
}

impl TaylorPoly {
    /// Truncation order `N` (`coeffs.len() - 1`).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// ℓ¹ norm of the coefficients (used for error propagation).
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Coefficients of `self^n`, truncated at the same order.
    ///
    /// Computed by binary exponentiation with truncated convolutions; the
    /// aliasing bound is propagated through the product rule.
    pub fn power(&self, n: u32) -> TaylorPoly {
        let order = self.order();
        let mut result = vec![Complex64::new(0.0, 0.0); order + 1];
        result[0] = Complex64::new(1.0, 0.0);
        let mut base = self.coeffs.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = conv_trunc(&result, &base, order);
            }
            k >>= 1;
            if k > 0 {
                base = conv_trunc(&base, &base, order);
            }
        }
        let amplification = (n as f64) * self.l1_norm().max(1.0).powi(n.saturating_sub(1) as i32);
        TaylorPoly {
            coeffs: result,
            sample_radius: self.sample_radius,
            alias_bound: self.alias_bound * amplification,
        }
    }
}

/// Truncated convolution: `(a * b)_m` for `m <= order`.
pub fn conv_trunc(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    for (i, &ai) in a.iter().enumerate().take(order + 1) {
        if ai.re == 0.0 && ai.im == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Taylor coefficients `c_0 .. c_order` of `f` with the default sample count.
pub fn taylor_from_samples<F>(f: F, order: usize, r: f64) -> Result<TaylorPoly>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    taylor_from_samples_with(f, order, r, default_sample_count(order))
}

/// Taylor coefficients with an explicit sample count `m >= 4(order+1)`.
pub fn taylor_from_samples_with<F>(f: F, order: usize, r: f64, m: usize) -> Result<TaylorPoly>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample radius {r} outside (0, 1)"
        )));
    }
    if m < 4 * (order + 1) {
        return Err(Error::InvalidArgument(format!(
            "sample count {m} below 4(N+1) = {}",
            4 * (order + 1)
        )));
    }
    let mut buf = Vec::with_capacity(m);
    let mut sup = 0.0f64;
    for j in 0..m {
        let theta = std::f64::consts::TAU * (j as f64) / (m as f64);
        let v = f(Complex64::from_polar(r, theta))?;
        sup = sup.max(v.norm());
        buf.push(v);
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut buf);

    let r_m = r.powi(m as i32);
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        coeffs.push(buf[k] / (m as f64) * r.powi(-(k as i32)));
    }
    // Worst case over k <= order is at k = order.
    let alias_bound = sup * r.powi((m - order) as i32) / (1.0 - r_m);
    Ok(TaylorPoly {
        coeffs,
        sample_radius: r,
        alias_bound,
    })
}

/// Resample at doubling `m` until the aliasing bound drops below `tol`.
pub fn taylor_to_tolerance<F>(f: F, order: usize, r: f64, tol: f64) -> Result<TaylorPoly>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut m = default_sample_count(order);
    loop {
        let p = taylor_from_samples_with(&f, order, r, m)?;
        if p.alias_bound <= tol {
            return Ok(p);
        }
        if m >= 1 << 21 {
            return Err(Error::AliasingTooLarge {
                bound: p.alias_bound,
                tol,
            });
        }
        m *= 2;
    }
}

/// Max of `|f|` over `m` equispaced samples of the circle `|z| = r`, with one
/// golden-section refinement pass around the maximizing sample.
pub fn sup_on_circle<F>(f: F, r: f64, m: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "circle radius {r} outside (0, 1]"
        )));
    }
    if m < 4 {
        return Err(Error::InvalidArgument("need at least 4 samples".into()));
    }
    let tau = std::f64::consts::TAU;
    let modulus = |theta: f64| -> Result<f64> { Ok(f(Complex64::from_polar(r, theta))?.norm()) };
    let mut best = 0.0f64;
    let mut best_j = 0usize;
    for j in 0..m {
        let v = modulus(tau * (j as f64) / (m as f64))?;
        if v > best {
            best = v;
            best_j = j;
        }
    }
    // Refine on the bracket around the maximizing sample.
    let h = tau / (m as f64);
    let mut a = tau * (best_j as f64) / (m as f64) - h;
    let mut b = a + 2.0 * h;
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = modulus(x1)?;
    let mut f2 = modulus(x2)?;
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = modulus(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = modulus(x1)?;
        }
    }
    Ok(best.max(f1).max(f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn ev(src: &str) -> impl Fn(Complex64) -> Result<Complex64> {
        let e = Expr::parse(src).unwrap();
        move |z| e.eval(z)
    }

    #[test]
    fn geometric_series_coefficients() {
        let p = taylor_from_samples(ev("1/(1-z)"), 8, 0.5).unwrap();
        for k in 0..=8 {
            assert!(
                (p.coeffs[k] - Complex64::new(1.0, 0.0)).norm() < 1e-9,
                "c_{k} = {}",
                p.coeffs[k]
            );
        }
    }

    #[test]
    fn polynomial_is_exact() {
        for r in [0.3, 0.5, 0.9] {
            let p = taylor_from_samples(ev("z^2"), 6, r).unwrap();
            for k in 0..=6 {
                let expected = if k == 2 { 1.0 } else { 0.0 };
                assert!((p.coeffs[k] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn scaled_identity_coefficients() {
        // f(z) = e^{-1} z
        let c1 = (-1.0f64).exp();
        let p = taylor_from_samples(move |z| Ok(z * Complex64::new(c1, 0.0)), 6, 0.6).unwrap();
        assert!((p.coeffs[1] - Complex64::new(c1, 0.0)).norm() < 1e-14);
        for k in [0usize, 2, 3, 4, 5, 6] {
            assert!(p.coeffs[k].norm() < 1e-14);
        }
    }

    #[test]
    fn power_of_monomial_and_constant() {
        let z3 = taylor_from_samples(ev("z"), 6, 0.5).unwrap().power(3);
        assert!((z3.coeffs[3] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(z3
            .coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k == 3 || c.norm() < 1e-12));

        let c = taylor_from_samples(ev("0.5 + 0.25*i"), 4, 0.5).unwrap().power(5);
        let expected = Complex64::new(0.5, 0.25).powi(5);
        assert!((c.coeffs[0] - expected).norm() < 1e-12);

        let half = taylor_from_samples(ev("z/2"), 4, 0.5).unwrap().power(2);
        assert!((half.coeffs[2] - Complex64::new(0.25, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn sup_on_circle_examples() {
        // |1 - z^2| on |z| = 1 peaks at z = ±i with value 2.
        let s = sup_on_circle(ev("1 - z^2"), 1.0, 512).unwrap();
        assert!((s - 2.0).abs() < 1e-10, "sup = {s}");

        let s = sup_on_circle(ev("z/2"), 1.0, 64).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parseval_consistency() {
        // Σ |c_k|^2 r^{2k} <= mean |f|^2 on the sample circle (plus slack).
        let e = Expr::parse("1/(1-z)").unwrap();
        let r = 0.5;
        let p = taylor_from_samples(|z| e.eval(z), 8, r).unwrap();
        let m = 2048;
        let mut mean_sq = 0.0;
        for j in 0..m {
            let th = std::f64::consts::TAU * (j as f64) / (m as f64);
            mean_sq += e.eval(Complex64::from_polar(r, th)).unwrap().norm_sqr();
        }
        mean_sq /= m as f64;
        let partial: f64 = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() * r.powi(2 * k as i32))
            .sum();
        assert!(partial <= mean_sq + 1e-9 + p.alias_bound);
    }

    #[test]
    fn doubling_samples_moves_coefficients_within_alias_bound() {
        // Radius large enough that aliasing is visible, then doubled away.
        let e = Expr::parse("1/(1-z)").unwrap();
        let f = |z: Complex64| e.eval(z);
        let order = 8;
        let r = 0.9;
        let m = 64;
        let p1 = taylor_from_samples_with(f, order, r, m).unwrap();
        let p2 = taylor_from_samples_with(f, order, r, 2 * m).unwrap();
        for k in 0..=order {
            let delta = (p1.coeffs[k] - p2.coeffs[k]).norm();
            // The change is within the coarse run's declared per-coefficient bound.
            let declared = p1.alias_bound * r.powi(k as i32 - order as i32);
            assert!(
                delta <= declared * (1.0 + 1e-6) + 1e-14,
                "k={k}: delta {delta:e} > declared {declared:e}"
            );
        }
    }

    #[test]
    fn maximum_principle_monotonicity() {
        let f = ev("exp(z)*(1 - z^2)");
        let s1 = sup_on_circle(&f, 0.5, 256).unwrap();
        let s2 = sup_on_circle(&f, 0.8, 256).unwrap();
        assert!(s1 <= s2 + 1e-9);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            taylor_from_samples(ev("z"), 4, 1.5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            taylor_from_samples_with(ev("z"), 4, 0.5, 8),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn evaluator_failure_propagates() {
        // A function singular at a sample point reports the failure.
        let g = ev("1/z");
        let res = sup_on_circle(move |z| g(z - Complex64::from_polar(0.5, 0.0)), 0.5, 16);
        assert!(matches!(res, Err(Error::Singularity(_))));
    }
}
