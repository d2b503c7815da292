//! Composition semigroups on the Hardy space of the right half-plane.
//!
//! The story differs sharply from the disc. Generation of a semiflow is the
//! Berkson–Porta differential inequality `x·∂(Re G)/∂x ≤ Re G`; the induced
//! composition operators are bounded iff the angular limit `δ = ∠lim G(z)/z`
//! exists, in which case `‖C_{φ_t}‖ = e^{-δt/2}` and the semigroup is
//! quasicontractive. Groups are exactly the affine generators `pz + iq`
//! (p, q real) with explicit flows, and no composition operator on this
//! space is compact, so there are no compactness diagnostics here.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::expr::Expr;
use crate::semiflow::{flow_in, Domain, FlowConfig};
use crate::Result;

/// Default finite-difference step factor (scaled by `max(1, Re z)`).
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Logarithmic grid of the right half-plane: `Re z` spread over
/// `[1e-2, 10]`, `Im z` over `±[1e-2, 10]`.
pub fn log_grid(nx: usize, ny: usize) -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(nx * ny);
    let half = (ny / 2).max(1);
    for i in 0..nx {
        let x = 10f64.powf(-2.0 + 3.0 * (i as f64) / ((nx - 1).max(1) as f64));
        for j in 0..half {
            let y = 10f64.powf(-2.0 + 3.0 * (j as f64) / ((half - 1).max(1) as f64));
            grid.push(Complex64::new(x, y));
            grid.push(Complex64::new(x, -y));
        }
    }
    grid
}

/// Wider logarithmic grid for the kernel-dissipativity scan, reaching
/// `Re w` up to 1e3.
pub fn kernel_grid() -> Vec<Complex64> {
    let mut grid = Vec::new();
    for i in 0..48 {
        let x = 10f64.powf(-3.0 + 6.0 * (i as f64) / 47.0);
        for &y in &[0.0, 0.5, -0.5, 5.0, -5.0, 50.0, -50.0] {
            grid.push(Complex64::new(x, y));
        }
    }
    grid
}

/// Max over the grid of `x·∂(Re G)/∂x − Re G`, with the derivative taken by
/// central differences at step `step·max(1, Re z)`. Values ≤ 0 (up to
/// tolerance) mean the generation condition holds on the grid.
pub fn berkson_porta_check<F>(g: &F, grid: &[Complex64], step: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let min_x = grid.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min_x <= 0.0 {
        return Err(Error::InvalidArgument(
            "grid must lie in the open right half-plane".into(),
        ));
    }
    if step >= min_x {
        return Err(Error::InvalidArgument(format!(
            "step {step} not below min Re over the grid ({min_x})"
        )));
    }
    let mut worst = f64::NEG_INFINITY;
    for &z in grid {
        let h = step * z.re.max(1.0);
        let up = g(z + Complex64::new(h, 0.0))?.re;
        let dn = g(z - Complex64::new(h, 0.0))?.re;
        let du_dx = (up - dn) / (2.0 * h);
        let u = g(z)?.re;
        worst = worst.max(z.re * du_dx - u);
    }
    Ok(worst)
}

/// Necessary-condition sweep for analyticity: the Berkson–Porta check
/// applied to the rotated symbols `e^{-iθ}G`, reported per θ without an
/// overall verdict.
pub fn analytic_sweep(g: &Expr, grid: &[Complex64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for &theta in &[-0.5, -0.3, -0.1, 0.1, 0.3, 0.5] {
        let rot = Complex64::from_polar(1.0, -theta);
        let rotated = |z: Complex64| -> Result<Complex64> { Ok(rot * g.eval(z)?) };
        out.push((theta, berkson_porta_check(&rotated, grid, DEFAULT_FD_STEP)?));
    }
    Ok(out)
}

/// Default ray magnitudes `2^3 .. 2^20`.
pub fn default_ray_points() -> Vec<f64> {
    (3..=20).map(|k| 2f64.powi(k)).collect()
}

/// Extrapolated limit of a sequence sampled along one ray.
///
/// The tail increments of `v_k = L + c·x_k^{-p}` on a geometric grid form a
/// geometric sequence; the complex increment ratio estimates the decay and
/// the remaining tail, which is exact for a single power mode.
fn ray_limit(vals: &[Complex64]) -> Option<Complex64> {
    let n = vals.len();
    if n < 4 {
        return None;
    }
    let v2 = vals[n - 1];
    let v1 = vals[n - 2];
    let v0 = vals[n - 3];
    let d_last = v2 - v1;
    let d_prev = v1 - v0;
    let scale = 1.0 + v2.norm();
    if d_last.norm() < 1e-12 * scale {
        return Some(v2);
    }
    if d_prev.norm() < 1e-300 {
        return None;
    }
    let q = d_last / d_prev;
    if q.norm() >= 0.95 {
        return None; // not settling
    }
    let limit = v2 + d_last * q / (Complex64::new(1.0, 0.0) - q);
    // Cross-check with the previous window.
    let d0 = vals[n - 4] - vals[n - 3];
    if d0.norm() > 1e-300 {
        let q2 = d_prev / (-d0);
        if q2.norm() < 0.95 {
            let limit2 = v1 + d_prev * q2 / (Complex64::new(1.0, 0.0) - q2);
            if (limit - limit2).norm() > 1e-7 * scale {
                return None;
            }
        }
    }
    Some(limit)
}

fn angular_limit<F>(f: &F, ray_points: &[f64]) -> Result<Option<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if ray_points.len() < 4 {
        return Err(Error::InvalidArgument("need at least 4 ray points".into()));
    }
    let mut limits = Vec::new();
    for &alpha in &[0.0, std::f64::consts::FRAC_PI_4, -std::f64::consts::FRAC_PI_4] {
        let dir = Complex64::from_polar(1.0, alpha);
        let mut vals = Vec::with_capacity(ray_points.len());
        for &x in ray_points {
            let z = dir * x;
            vals.push(f(z)?);
        }
        match ray_limit(&vals) {
            Some(l) => limits.push(l),
            None => return Ok(None),
        }
    }
    let mean = (limits[0] + limits[1] + limits[2]) / 3.0;
    for l in &limits {
        if (l - mean).norm() > 1e-6 * (1.0 + mean.norm()) {
            return Ok(None); // rays disagree: no non-tangential limit
        }
    }
    Ok(Some(mean))
}

/// Angular limit `δ = ∠lim G(z)/z` along the rays `arg z ∈ {0, ±π/4}`;
/// `None` when the tails do not stabilize or the rays disagree.
pub fn delta_limit(g: &Expr, ray_points: &[f64]) -> Result<Option<f64>> {
    let quotient = |z: Complex64| -> Result<Complex64> { Ok(g.eval(z)? / z) };
    match angular_limit(&quotient, ray_points)? {
        Some(l) if l.im.abs() <= 1e-6 * (1.0 + l.norm()) => Ok(Some(l.re)),
        _ => Ok(None),
    }
}

/// `‖C_{φ_t}‖ = e^{-δt/2}` from the angular limit of the generator.
pub fn comp_norm_from_delta(delta: f64, t: f64) -> f64 {
    (-delta * t / 2.0).exp()
}

/// Norm of a single composition operator from its symbol:
/// `‖C_φ‖ = φ′(∞)^{-1/2}` where `φ′(∞) = ∠lim φ(z)/z` must exist and be
/// positive; otherwise the operator is unbounded.
pub fn norm_from_phi<F>(phi: &F, ray_points: &[f64]) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let quotient = |z: Complex64| -> Result<Complex64> { Ok(phi(z)? / z) };
    match angular_limit(&quotient, ray_points)? {
        Some(l) if l.re > 1e-12 && l.im.abs() <= 1e-6 * (1.0 + l.norm()) => {
            Ok(l.re.powf(-0.5))
        }
        _ => Err(Error::Unbounded(
            "phi(z)/z has no finite positive angular limit".into(),
        )),
    }
}

/// Infimum over the grid of `Re G(w)/Re w`, the reproducing-kernel
/// dissipativity quantity. A quasicontractive generator keeps it finite;
/// a contractive one keeps it ≥ 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelDissipativity {
    pub inf: f64,
    pub contractive_compatible: bool,
}

pub fn kernel_dissipativity(g: &Expr, grid: &[Complex64]) -> Result<KernelDissipativity> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let mut inf = f64::INFINITY;
    for &w in grid {
        if w.re <= 0.0 {
            return Err(Error::InvalidArgument(
                "grid must lie in the open right half-plane".into(),
            ));
        }
        inf = inf.min(g.eval(w)?.re / w.re);
    }
    Ok(KernelDissipativity {
        inf,
        contractive_compatible: inf >= -1e-9,
    })
}

/// A recognized group generator `G(z) = pz + iq` with its closed-form flows.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HalfPlaneGroup {
    pub p: f64,
    pub q: f64,
}

impl HalfPlaneGroup {
    /// Closed-form flow, valid for both signs of `t`.
    pub fn flow(&self, z: Complex64, t: f64) -> Complex64 {
        if self.p.abs() > 1e-12 {
            let ept = (self.p * t).exp();
            z * ept + Complex64::new(0.0, self.q / self.p) * (ept - 1.0)
        } else {
            z + Complex64::new(0.0, self.q * t)
        }
    }
}

/// Fit `G` against `pz + iq` (real p, q). The linear coefficients come from
/// two probes; validation runs over 20 further points to 1e-10 relative.
pub fn group_classify(g: &Expr) -> Result<HalfPlaneGroup> {
    let z1 = Complex64::new(1.0, 0.0);
    let z2 = Complex64::new(2.0, 0.0);
    let g1 = g.eval(z1)?;
    let g2 = g.eval(z2)?;
    let a = g2 - g1;
    let b = g1 - a;
    // Deterministic scatter of validation points in a half-plane box.
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64)
    };
    for _ in 0..20 {
        let z = Complex64::new(0.5 + 2.5 * next(), -2.0 + 4.0 * next());
        let v = g.eval(z)?;
        let fit = a * z + b;
        if (v - fit).norm() > 1e-10 * (1.0 + v.norm()) {
            return Err(Error::NotGroup(format!(
                "generator is not affine: residual {:e} at {z}",
                (v - fit).norm()
            )));
        }
    }
    if a.im.abs() > 1e-10 * (1.0 + a.norm()) {
        return Err(Error::NotGroup(format!(
            "linear coefficient {a} is not real"
        )));
    }
    if b.re.abs() > 1e-10 * (1.0 + b.norm()) {
        return Err(Error::NotGroup(format!(
            "constant term {b} is not purely imaginary"
        )));
    }
    Ok(HalfPlaneGroup { p: a.re, q: b.im })
}

/// Flow of a half-plane generator by ODE integration with the `Re w > 0`
/// guard (used when no closed form applies).
pub fn flow_halfplane(g: &Expr, z0: Complex64, t: f64, cfg: &FlowConfig) -> Result<Complex64> {
    flow_in(&|w| g.eval(w), z0, t, cfg, Domain::RightHalfPlane)
}

/// Assembled half-plane report.
#[derive(Debug, Clone, Serialize)]
pub struct HalfPlaneReport {
    /// Max of `x·∂(Re G)/∂x − Re G` over the grid (≤ 0 means the generation
    /// condition holds).
    pub bp_violation: f64,
    pub generates: bool,
    pub delta: Option<f64>,
    /// `(t, e^{-δt/2})` for the requested times; present only with `delta`.
    pub norms: Vec<(f64, f64)>,
    pub kernel: KernelDissipativity,
    pub group: Option<HalfPlaneGroup>,
    pub group_rejection: Option<String>,
    /// Per-θ results of the rotated-symbol sweep.
    pub analytic_sweep: Vec<(f64, f64)>,
}

/// Run the half-plane pipeline on a generator symbol.
pub fn analyze(g: &Expr, ts: &[f64]) -> Result<HalfPlaneReport> {
    let grid = log_grid(32, 32);
    let eval = |z: Complex64| g.eval(z);
    let bp_violation = berkson_porta_check(&eval, &grid, DEFAULT_FD_STEP)?;
    let delta = delta_limit(g, &default_ray_points())?;
    let norms = match delta {
        Some(d) => ts.iter().map(|&t| (t, comp_norm_from_delta(d, t))).collect(),
        None => Vec::new(),
    };
    let kernel = kernel_dissipativity(g, &kernel_grid())?;
    let (group, group_rejection) = match group_classify(g) {
        Ok(gr) => (Some(gr), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let analytic_sweep = analytic_sweep(g, &grid)?;
    Ok(HalfPlaneReport {
        bp_violation,
        generates: bp_violation <= 1e-9,
        delta,
        norms,
        kernel,
        group,
        group_rejection,
        analytic_sweep,
    })
}
