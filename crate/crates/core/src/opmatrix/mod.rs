//! Truncated operator matrices on weighted Hardy spaces.
//!
//! `H²(β)` has orthonormal basis `ẽ_n = zⁿ/β_n`; the matrix of the
//! composition operator `C_φ` has columns built from the Taylor coefficients
//! of `φⁿ`, sampled directly on a circle (not by convolution powers) so the
//! aliasing budget does not accumulate with the power. The generator matrix
//! entries are `[A]_{m,n} = n·g_{m-n+1}·β_m/β_n` for coefficients `g` of `G`.
//!
//! Diagnostics: singular values, Frobenius (partial Hilbert–Schmidt) norms,
//! the boundary-integral Hilbert–Schmidt test, the trace-class sup-norm flag,
//! the algebraic characterization `Teₙ = (Te₁)ⁿ` of composition operators and
//! its weighted variant `(Te₀)^{n-1}Teₙ = (Te₁)ⁿ`, and a consistency check of
//! `exp(tA)` against the flow matrix on a leading block.

mod expm;

pub use expm::expm;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::Error;
use crate::series::{self, conv_trunc};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WeightKind {
    Hardy,
    Dirichlet,
    Bergman,
    Custom,
}

/// The weight sequence `β_0 .. β_N` of `H²(β)`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightSequence {
    pub kind: WeightKind,
    pub values: Vec<f64>,
}

impl WeightSequence {
    /// Hardy space: `β_n = 1`.
    pub fn hardy(order: usize) -> WeightSequence {
        WeightSequence {
            kind: WeightKind::Hardy,
            values: vec![1.0; order + 1],
        }
    }

    /// Dirichlet space: `β_0 = 1`, `β_n = √n`.
    pub fn dirichlet(order: usize) -> WeightSequence {
        let values = (0..=order)
            .map(|n| if n == 0 { 1.0 } else { (n as f64).sqrt() })
            .collect();
        WeightSequence {
            kind: WeightKind::Dirichlet,
            values,
        }
    }

    /// Bergman space: `β_n = 1/√(n+1)`.
    pub fn bergman(order: usize) -> WeightSequence {
        let values = (0..=order).map(|n| 1.0 / ((n + 1) as f64).sqrt()).collect();
        WeightSequence {
            kind: WeightKind::Bergman,
            values,
        }
    }

    pub fn custom(values: Vec<f64>) -> Result<WeightSequence> {
        if values.is_empty() || values.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(Error::InvalidArgument(
                "weights must be positive and finite".into(),
            ));
        }
        Ok(WeightSequence {
            kind: WeightKind::Custom,
            values,
        })
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

/// Dense truncated matrix of an operator in the orthonormal basis of `H²(β)`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub beta: WeightSequence,
    pub order: usize,
    /// Propagated aliasing bound on the entries.
    pub entry_error: f64,
}

impl OperatorMatrix {
    /// Build directly from entries (used for hand-assembled operators).
    pub fn from_entries(entries: DMatrix<Complex64>, beta: WeightSequence) -> Result<Self> {
        let order = beta.order();
        if entries.nrows() != order + 1 || entries.ncols() != order + 1 {
            return Err(Error::InvalidArgument(
                "entry matrix size does not match the weight sequence".into(),
            ));
        }
        Ok(OperatorMatrix {
            entries,
            beta,
            order,
            entry_error: 0.0,
        })
    }

    /// Power-basis coefficients of the image `T e_n` (columns divided by the
    /// basis normalization): `u_m = T[m,n]·β_n/β_m`.
    fn power_basis_column(&self, n: usize) -> Vec<Complex64> {
        (0..=self.order)
            .map(|m| self.entries[(m, n)] * (self.beta.values[n] / self.beta.values[m]))
            .collect()
    }

    fn beta_norm(&self, coeffs: &[Complex64]) -> f64 {
        coeffs
            .iter()
            .zip(&self.beta.values)
            .map(|(c, b)| c.norm_sqr() * b * b)
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the truncated matrix: the partial Hilbert–Schmidt
    /// norm, non-decreasing in the truncation order.
    pub fn hs_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Singular values in non-increasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.entries.clone().svd(false, false);
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// CSV dump: row-major, each entry as a "re,im" pair, with a header row.
    pub fn to_csv(&self) -> String {
        let n = self.order + 1;
        let mut out = String::new();
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("col{j}_re,col{j}_im"));
        }
        out.push('\n');
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    out.push(',');
                }
                let v = self.entries[(i, j)];
                out.push_str(&format!("{},{}", v.re, v.im));
            }
            out.push('\n');
        }
        out
    }
}

/// Spectrum CSV: `k,sigma` rows with a header.
pub fn spectrum_csv(sigma: &[f64]) -> String {
    let mut out = String::from("k,sigma\n");
    for (k, s) in sigma.iter().enumerate() {
        out.push_str(&format!("{k},{s}\n"));
    }
    out
}

const ENTRY_ERROR_TOL: f64 = 1e-6;

/// Matrix of the composition operator `C_φ` on `H²(β)`, truncated at the
/// weight order. Column `n` holds `(β_m/β_n)·a_m(φⁿ)` where the coefficients
/// of `φⁿ` come from sampling `φ` once on `|z| = r` and raising the samples
/// to the n-th power. Resamples at higher counts until the propagated
/// aliasing bound drops below 1e-6.
pub fn composition_matrix<F>(phi: F, beta: WeightSequence, r: f64) -> Result<OperatorMatrix>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample radius {r} outside (0, 1)"
        )));
    }
    let order = beta.order();
    let mut m = series::default_sample_count(order);
    loop {
        let samples: Vec<Complex64> = (0..m)
            .into_par_iter()
            .map(|j| {
                let th = std::f64::consts::TAU * (j as f64) / (m as f64);
                phi(Complex64::from_polar(r, th))
            })
            .collect::<Result<_>>()?;
        let sup: f64 = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let r_m = r.powi(m as i32);

        // Worst-case alias bound over all entries (β ratio included).
        let mut ratio_max = 1.0f64;
        for mm in 0..=order {
            for nn in 0..=order {
                ratio_max = ratio_max.max(beta.values[mm] / beta.values[nn]);
            }
        }
        let sup_pow = if sup <= 1.0 { 1.0 } else { sup.powi(order as i32) };
        let entry_error = ratio_max * sup_pow * r.powi((m - order) as i32) / (1.0 - r_m);

        if entry_error > ENTRY_ERROR_TOL {
            if m >= 1 << 20 {
                return Err(Error::AliasingTooLarge {
                    bound: entry_error,
                    tol: ENTRY_ERROR_TOL,
                });
            }
            m *= 2;
            continue;
        }

        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);
        let columns: Vec<Vec<Complex64>> = (0..=order)
            .into_par_iter()
            .map(|n| {
                let mut buf: Vec<Complex64> =
                    samples.iter().map(|s| s.powi(n as i32)).collect();
                fft.process(&mut buf);
                (0..=order)
                    .map(|k| buf[k] / (m as f64) * r.powi(-(k as i32)))
                    .collect()
            })
            .collect();

        let entries = DMatrix::from_fn(order + 1, order + 1, |mm, nn| {
            columns[nn][mm] * (beta.values[mm] / beta.values[nn])
        });
        return Ok(OperatorMatrix {
            entries,
            beta,
            order,
            entry_error,
        });
    }
}

/// Max over `n ≤ N/2` of the β-norm of `(column of Teₙ) − coeffs((Te₁)ⁿ)`.
/// Small defect is consistent with `T` being a composition operator.
pub fn characterization_defect(t: &OperatorMatrix) -> f64 {
    let order = t.order;
    let t1 = t.power_basis_column(1);
    let mut power = vec![Complex64::new(0.0, 0.0); order + 1];
    power[0] = Complex64::new(1.0, 0.0);
    let mut defect = 0.0f64;
    for n in 0..=order / 2 {
        let col = t.power_basis_column(n);
        let diff: Vec<Complex64> = col
            .iter()
            .zip(&power)
            .map(|(a, b)| a - b)
            .collect();
        defect = defect.max(t.beta_norm(&diff));
        power = conv_trunc(&power, &t1, order);
    }
    defect
}

/// Max over `1 ≤ n ≤ N/2` of the β-norm of `(Te₀)^{n-1}·Teₙ − (Te₁)ⁿ`;
/// small defect is consistent with `T` being a weighted composition
/// operator. Errors when `Te₀ ≡ 0` (excluded hypothesis).
pub fn weighted_characterization_defect(t: &OperatorMatrix) -> Result<f64> {
    let order = t.order;
    let w = t.power_basis_column(0);
    if w.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Hypothesis(
            "Te0 vanishes identically; the weighted characterization does not apply".into(),
        ));
    }
    let t1 = t.power_basis_column(1);
    let mut w_pow = vec![Complex64::new(0.0, 0.0); order + 1]; // w^{n-1}
    w_pow[0] = Complex64::new(1.0, 0.0);
    let mut t1_pow = t1.clone(); // (Te₁)^n
    let mut defect = 0.0f64;
    for n in 1..=order / 2 {
        let col = t.power_basis_column(n);
        let lhs = conv_trunc(&w_pow, &col, order);
        let diff: Vec<Complex64> = lhs
            .iter()
            .zip(&t1_pow)
            .map(|(a, b)| a - b)
            .collect();
        defect = defect.max(t.beta_norm(&diff));
        w_pow = conv_trunc(&w_pow, &w, order);
        if n < order / 2 {
            t1_pow = conv_trunc(&t1_pow, &t1, order);
        }
    }
    Ok(defect)
}

/// Matrix of the generator `A f = G·f′` on `H²(β)`:
/// `[A]_{m,n} = n·g_{m-n+1}·β_m/β_n` for `m ≥ n-1`, zero otherwise.
pub fn generator_matrix(
    g: &crate::expr::Expr,
    beta: WeightSequence,
    r: f64,
) -> Result<OperatorMatrix> {
    let order = beta.order();
    let coeffs = series::taylor_to_tolerance(|z| g.eval(z), order, r, 1e-9)?;
    let entries = DMatrix::from_fn(order + 1, order + 1, |m, n| {
        if n == 0 || m + 1 < n {
            Complex64::new(0.0, 0.0)
        } else {
            let k = m + 1 - n;
            coeffs.coeffs[k] * (n as f64) * (beta.values[m] / beta.values[n])
        }
    });
    Ok(OperatorMatrix {
        entries,
        beta,
        order,
        entry_error: coeffs.alias_bound * (order as f64),
    })
}

/// Max entry difference between `exp(t·A)` and `C` on the leading
/// `block × block` corner. The tail rows of the truncated generator are
/// polluted by the cutoff, so only the leading block is compared.
pub fn expm_compare(
    a: &OperatorMatrix,
    t: f64,
    c: &OperatorMatrix,
    block: usize,
) -> Result<f64> {
    if a.order != c.order || a.beta.values != c.beta.values {
        return Err(Error::InvalidArgument(
            "matrices live on different truncated spaces".into(),
        ));
    }
    if block > a.order + 1 {
        return Err(Error::InvalidArgument("block exceeds matrix size".into()));
    }
    let ta = a.entries.map(|v| v * t);
    let exp_ta = expm(&ta)?;
    let mut diff = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            diff = diff.max((exp_ta[(i, j)] - c.entries[(i, j)]).norm());
        }
    }
    Ok(diff)
}

/// Outcome of the boundary Hilbert–Schmidt integral test on the Hardy space.
#[derive(Debug, Clone, Serialize)]
pub struct HsIntegral {
    /// Quadrature value at radius `1 - 1e-6` with `2M` samples.
    pub value: f64,
    /// Relative change between the `M`- and `2M`-sample quadratures.
    pub refinement_rel: f64,
    /// Value at the outer control radius `1 - 1e-2`.
    pub control_value: f64,
    pub divergent: bool,
    pub reason: Option<String>,
}

fn hs_quadrature<F>(phi: &F, rho: f64, m: usize) -> Result<(f64, bool)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut sum = 0.0f64;
    let mut saturated = false;
    for j in 0..m {
        // Midpoint offset keeps symmetric boundary fixed points off the grid.
        let th = std::f64::consts::TAU * ((j as f64) + 0.5) / (m as f64);
        let v = phi(Complex64::from_polar(rho, th))?;
        let d = 1.0 - v.norm_sqr();
        if d <= 0.0 {
            saturated = true;
        } else {
            sum += 1.0 / d;
        }
    }
    Ok((sum / (m as f64), saturated))
}

/// `(1/2π)·∫ dt/(1−|φ(ρe^{it})|²)` at `ρ = 1 - 1e-6`, with two divergence
/// heuristics: instability under doubling the sample count, and growth
/// relative to the same quadrature at the control radius `1 - 1e-2`
/// (a convergent integral has already saturated there; a divergent one is
/// still climbing as the circle approaches the boundary).
pub fn hs_integral_hardy<F>(phi: F, m: usize) -> Result<HsIntegral>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if m < 64 {
        return Err(Error::InvalidArgument("need at least 64 samples".into()));
    }
    let rho = 1.0 - 1e-6;
    let (coarse, sat1) = hs_quadrature(&phi, rho, m)?;
    let (value, sat2) = hs_quadrature(&phi, rho, 2 * m)?;
    let (control_value, sat3) = hs_quadrature(&phi, 1.0 - 1e-2, 2 * m)?;
    let refinement_rel = (value - coarse).abs() / value.abs().max(1e-300);

    let mut reason = None;
    if sat1 || sat2 || sat3 {
        reason = Some("a sample reached |phi| >= 1".into());
    } else if value > 1e6 {
        reason = Some(format!("quadrature exceeds 1e6 ({value:e})"));
    } else if value > coarse * 1.5 || coarse > value * 1.5 {
        reason = Some(format!(
            "sample refinement unstable: {coarse} vs {value}"
        ));
    } else if value > control_value * 1.5 {
        reason = Some(format!(
            "integral still growing toward the boundary: {control_value} at 1-1e-2 vs {value} at 1-1e-6"
        ));
    }
    Ok(HsIntegral {
        value,
        refinement_rel,
        control_value,
        divergent: reason.is_some(),
        reason,
    })
}

/// `‖φ‖_∞ < 1` test: sup over the circle `|z| = 1 - 1e-6` bounded away
/// from 1 by a margin (1e-4) that dominates the sampling offset — a map
/// touching the boundary shows sup ≈ 1 - O(1e-6), which must not pass.
/// Sufficient for `C_φ` to be trace-class on the Hardy space.
pub fn trace_class_flag<F>(phi: F) -> Result<bool>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let sup = series::sup_on_circle(phi, 1.0 - 1e-6, 2048)?;
    Ok(sup < 1.0 - 1e-4)
}
