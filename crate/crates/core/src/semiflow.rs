//! Semiflow integration and model verification.
//!
//! The flow of a generator `G` solves `w′ = G(w), w(0) = z₀`. We integrate
//! with an adaptive embedded Dormand–Prince 5(4) pair and a domain guard:
//! the true flow never leaves the disc (or the half-plane), so a step that
//! exits is rejected and halved — repeated exits indicate a non-generator or
//! a tolerance failure and are reported as errors.
//!
//! The module also locates the Denjoy–Wolff point (Newton on `G = 0` with a
//! flow-iteration fallback), estimates `‖φ_t‖_∞` near the boundary, and
//! evaluates the conformal model `φ_t(z) = h⁻¹(e^{-ct} h(z))`, which accepts
//! complex `t` (the analytic extension is algebraically determined by the
//! model; no integration along complex rays is performed).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::expr::Expr;
use crate::Result;

/// Integrator tolerances and the boundary guard.
#[derive(Debug, Clone, Copy)]
pub struct FlowConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    /// Radius of the guarded disc; flows must satisfy `|w| < boundary_guard`.
    pub boundary_guard: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 0.1,
            boundary_guard: 1.0,
        }
    }
}

impl FlowConfig {
    /// Tighter tolerances for matrix assembly, where per-sample flow errors
    /// feed coefficient extraction.
    pub fn tight() -> Self {
        FlowConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.abs_tol <= 0.0 || self.rel_tol <= 0.0 || self.max_step <= 0.0 {
            return Err(Error::InvalidArgument(
                "flow tolerances and max_step must be positive".into(),
            ));
        }
        if !(self.boundary_guard > 0.0 && self.boundary_guard <= 1.0) {
            return Err(Error::InvalidArgument(
                "boundary_guard must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Domain the trajectory is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    UnitDisc,
    RightHalfPlane,
}

impl Domain {
    fn contains(self, w: Complex64, guard: f64) -> bool {
        match self {
            Domain::UnitDisc => w.norm() < guard,
            Domain::RightHalfPlane => w.re > 0.0,
        }
    }

    fn witness(self, w: Complex64) -> f64 {
        match self {
            Domain::UnitDisc => w.norm(),
            Domain::RightHalfPlane => w.re,
        }
    }
}

// Dormand–Prince 5(4) tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b(5th) - b(4th), for the embedded error estimate.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn dp45_step<F>(f: &F, w: Complex64, h: f64) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let k1 = f(w)?;
    let k2 = f(w + k1 * (A21 * h))?;
    let k3 = f(w + k1 * (A31 * h) + k2 * (A32 * h))?;
    let k4 = f(w + k1 * (A41 * h) + k2 * (A42 * h) + k3 * (A43 * h))?;
    let k5 = f(w + k1 * (A51 * h) + k2 * (A52 * h) + k3 * (A53 * h) + k4 * (A54 * h))?;
    let k6 = f(w
        + k1 * (A61 * h)
        + k2 * (A62 * h)
        + k3 * (A63 * h)
        + k4 * (A64 * h)
        + k5 * (A65 * h))?;
    let w5 = w + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * h;
    let k7 = f(w5)?;
    let err = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
    Ok((w5, err.norm()))
}

/// Integrate `w′ = f(w)` from `z0` for time `t >= 0` inside `domain`.
pub fn flow_in<F>(
    f: &F,
    z0: Complex64,
    t: f64,
    cfg: &FlowConfig,
    domain: Domain,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    cfg.validate()?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("flow time {t} must be >= 0")));
    }
    if !domain.contains(z0, cfg.boundary_guard) {
        return Err(Error::InvalidArgument(
            "initial point outside the guarded domain".into(),
        ));
    }
    // φ_0 is the identity exactly; no integration at t = 0.
    if t == 0.0 {
        return Ok(z0);
    }

    let mut w = z0;
    let mut s = 0.0f64;
    let slope0 = f(z0)?.norm();
    let mut h = cfg.max_step.min(t).min(1e-2 / (1.0 + slope0));
    let mut halvings = 0u32;
    let mut steps: u64 = 0;
    let h_floor = 1e-15 * t.max(1.0);

    while t - s > 1e-14 * t.max(1.0) {
        h = h.min(cfg.max_step).min(t - s);
        if h < h_floor {
            return Err(Error::StepUnderflow { t: s });
        }
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::NoConvergence(format!(
                "flow step budget exhausted at t={s}"
            )));
        }
        match dp45_step(f, w, h) {
            Err(_) => {
                // A stage left the domain of f; shrink and retry.
                halvings += 1;
                if halvings > 60 {
                    return Err(Error::GuardViolation {
                        t: s,
                        witness: domain.witness(w),
                    });
                }
                h *= 0.5;
            }
            Ok((wn, err)) => {
                let scale = cfg.abs_tol + cfg.rel_tol * w.norm().max(wn.norm());
                let ratio = err / scale;
                if ratio <= 1.0 {
                    if domain.contains(wn, cfg.boundary_guard) {
                        w = wn;
                        s += h;
                        halvings = 0;
                        let grow = if ratio > 0.0 {
                            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
                        } else {
                            5.0
                        };
                        h *= grow;
                    } else {
                        // The exact flow cannot exit; halve and retry.
                        halvings += 1;
                        if halvings > 60 {
                            return Err(Error::GuardViolation {
                                t: s,
                                witness: domain.witness(wn),
                            });
                        }
                        h *= 0.5;
                    }
                } else {
                    h *= (0.9 * ratio.powf(-0.2)).clamp(0.2, 0.9);
                }
            }
        }
    }
    Ok(w)
}

/// Flow of a disc generator: `φ_t(z0)` with the unit-disc guard.
pub fn flow(g: &Expr, z0: Complex64, t: f64, cfg: &FlowConfig) -> Result<Complex64> {
    flow_in(&|w| g.eval(w), z0, t, cfg, Domain::UnitDisc)
}

/// The map `z ↦ φ_t(z)` as a reusable evaluator.
pub fn flow_map<'a>(
    g: &'a Expr,
    t: f64,
    cfg: FlowConfig,
) -> impl Fn(Complex64) -> Result<Complex64> + Sync + 'a {
    move |z| flow(g, z, t, &cfg)
}

/// Max over `grid` of `|φ_{s+t}(z) − φ_s(φ_t(z))|`.
pub fn semiflow_defect(
    g: &Expr,
    grid: &[Complex64],
    s: f64,
    t: f64,
    cfg: &FlowConfig,
) -> Result<f64> {
    let defects: Vec<f64> = grid
        .par_iter()
        .map(|&z| -> Result<f64> {
            let direct = flow(g, z, s + t, cfg)?;
            let composed = flow(g, flow(g, z, t, cfg)?, s, cfg)?;
            Ok((direct - composed).norm())
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Denjoy–Wolff point of the semiflow generated by `g`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DenjoyWolff {
    pub point: Complex64,
    /// Set when `|point| >= 1 - 1e-6`: the common fixed point sits on the
    /// circle and the semigroup cannot be immediately compact.
    pub boundary: bool,
}

const BOUNDARY_DETECT: f64 = 1.0 - 1e-6;

/// Locate the Denjoy–Wolff point: Newton iteration on `G(z) = 0` seeded at 0
/// and at 8 points of `|z| = 1/2`, with a forward-flow fallback that detects
/// boundary attraction.
pub fn denjoy_wolff(g: &Expr, cfg: &FlowConfig) -> Result<DenjoyWolff> {
    let mut seeds = vec![Complex64::new(0.0, 0.0)];
    for k in 0..8 {
        let th = std::f64::consts::TAU * (k as f64) / 8.0;
        seeds.push(Complex64::from_polar(0.5, th));
    }

    let mut roots: Vec<Complex64> = Vec::new();
    for seed in seeds {
        if let Some(root) = newton_zero(g, seed) {
            if root.norm() <= 1.0 + 1e-8 && !roots.iter().any(|r| (r - root).norm() < 1e-7) {
                roots.push(root);
            }
        }
    }

    let interior: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|r| r.norm() < BOUNDARY_DETECT)
        .collect();
    if interior.len() == 1 {
        return Ok(DenjoyWolff {
            point: interior[0],
            boundary: false,
        });
    }

    // Either no interior zero (boundary Denjoy–Wolff point) or several Newton
    // candidates; let the forward flow decide which point attracts.
    let mut z = Complex64::new(0.0, 0.0);
    let mut prev_norm = 0.0f64;
    for _ in 0..200 {
        let next = match flow(g, z, 1.0, cfg) {
            Ok(w) => w,
            Err(_) if z.norm() > 0.9 => {
                // Integration failed hugging the circle: boundary attraction.
                return Ok(boundary_verdict(z, &roots));
            }
            Err(e) => return Err(e),
        };
        if (next - z).norm() < 1e-11 {
            let point = interior
                .iter()
                .copied()
                .find(|r| (r - next).norm() < 1e-6)
                .unwrap_or(next);
            return Ok(DenjoyWolff {
                point,
                boundary: point.norm() >= BOUNDARY_DETECT,
            });
        }
        if next.norm() >= BOUNDARY_DETECT {
            return Ok(boundary_verdict(next, &roots));
        }
        prev_norm = z.norm();
        z = next;
    }
    if z.norm() > 0.9 && z.norm() >= prev_norm {
        // Slow (parabolic-type) boundary convergence; snap to the nearest
        // boundary zero of G when one is in reach.
        let snapped = roots
            .iter()
            .copied()
            .filter(|r| r.norm() >= BOUNDARY_DETECT)
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()));
        if let Some(r) = snapped {
            if (r - z).norm() < 0.05 {
                return Ok(DenjoyWolff {
                    point: r,
                    boundary: true,
                });
            }
        }
        return Ok(DenjoyWolff {
            point: z / z.norm(),
            boundary: true,
        });
    }
    Err(Error::NoConvergence(
        "Denjoy-Wolff iteration is indeterminate".into(),
    ))
}

fn boundary_verdict(z: Complex64, roots: &[Complex64]) -> DenjoyWolff {
    let nearest = roots
        .iter()
        .copied()
        .filter(|r| r.norm() >= BOUNDARY_DETECT)
        .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()));
    let point = match nearest {
        Some(r) if (r - z).norm() < 1e-2 => r,
        _ => z / z.norm().max(1.0),
    };
    DenjoyWolff {
        point,
        boundary: true,
    }
}

fn newton_zero(g: &Expr, seed: Complex64) -> Option<Complex64> {
    let h = 1e-7;
    let mut z = seed;
    for _ in 0..60 {
        let v = g.eval(z).ok()?;
        if v.norm() < 1e-14 {
            return Some(z);
        }
        let dp = g.eval(z + Complex64::new(h, 0.0)).ok()?;
        let dm = g.eval(z - Complex64::new(h, 0.0)).ok()?;
        let deriv = (dp - dm) / Complex64::new(2.0 * h, 0.0);
        if deriv.norm() < 1e-13 {
            return None;
        }
        let step = v / deriv;
        z -= step;
        if z.norm() > 1.5 {
            return None;
        }
        if step.norm() < 1e-13 {
            let v = g.eval(z).ok()?;
            if v.norm() < 1e-10 {
                return Some(z);
            }
            return None;
        }
    }
    None
}

/// Estimated `‖φ_t‖_∞` from flows started on the circle `|z| = 1 - 1e-6`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SupNormFlow {
    pub value: f64,
    /// Flow failures on the sample circle, excluded from the max.
    pub failures: usize,
    pub samples: usize,
}

pub fn sup_norm_flow(g: &Expr, t: f64, m: usize, cfg: &FlowConfig) -> Result<SupNormFlow> {
    if t <= 0.0 {
        return Err(Error::InvalidArgument("sup_norm_flow needs t > 0".into()));
    }
    let r = 1.0 - 1e-6;
    let outcomes: Vec<Option<f64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let th = std::f64::consts::TAU * (j as f64) / (m as f64);
            flow(g, Complex64::from_polar(r, th), t, cfg)
                .ok()
                .map(|w| w.norm())
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_none()).count();
    if failures == m {
        return Err(Error::NoConvergence(
            "all boundary flows failed in sup_norm_flow".into(),
        ));
    }
    let value = outcomes.into_iter().flatten().fold(0.0, f64::max);
    Ok(SupNormFlow {
        value,
        failures,
        samples: m,
    })
}

/// Conformal-conjugation model `φ_t(z) = h⁻¹(e^{-ct} h(z))`.
#[derive(Debug, Clone)]
pub struct SemiflowModel {
    pub h: Expr,
    pub h_inv: Expr,
    pub c: Complex64,
}

impl SemiflowModel {
    /// Validates `Re c >= 0` and the inverse pair `h_inv(h(z)) = z` on a
    /// test grid of the disc.
    pub fn new(h: Expr, h_inv: Expr, c: Complex64) -> Result<SemiflowModel> {
        if c.re < -1e-12 {
            return Err(Error::InvalidArgument(format!(
                "model exponent must have Re c >= 0, got {c}"
            )));
        }
        let model = SemiflowModel { h, h_inv, c };
        let mut worst = 0.0f64;
        for &r in &[0.15, 0.35, 0.55, 0.75] {
            for k in 0..16 {
                let th = std::f64::consts::TAU * (k as f64) / 16.0;
                let z = Complex64::from_polar(r, th);
                let w = model.h.eval(z)?;
                let back = model.h_inv.eval(w)?;
                worst = worst.max((back - z).norm());
            }
        }
        if worst > 1e-8 {
            return Err(Error::ModelDomain(format!(
                "h_inv(h(z)) deviates from z by {worst:e} on the test grid"
            )));
        }
        Ok(model)
    }
}

/// Evaluate the model flow at a (possibly complex) parameter `t`.
///
/// The result is validated by the round trip `h(result) = e^{-ct} h(z)`;
/// failure means the scaled point left the image domain.
pub fn model_flow(m: &SemiflowModel, z: Complex64, t: Complex64) -> Result<Complex64> {
    let w = m.h.eval(z)?;
    if w.re == 0.0 && w.im == 0.0 {
        // h vanishes only at the interior fixed point, which the flow fixes.
        return Ok(z);
    }
    let target = (-m.c * t).exp() * w;
    let y = m.h_inv.eval(target)?;
    let back = m.h.eval(y)?;
    if (back - target).norm() > 1e-6 * (1.0 + target.norm()) {
        return Err(Error::ModelDomain(format!(
            "round-trip defect {:e} at z={z}, t={t}",
            (back - target).norm()
        )));
    }
    Ok(y)
}

/// Max over `grid` of `|flow(G, z, t) − model_flow(m, z, t)|`.
pub fn model_defect(
    g: &Expr,
    m: &SemiflowModel,
    grid: &[Complex64],
    t: f64,
    cfg: &FlowConfig,
) -> Result<f64> {
    let defects: Vec<f64> = grid
        .par_iter()
        .map(|&z| -> Result<f64> {
            let ode = flow(g, z, t, cfg)?;
            let model = model_flow(m, z, Complex64::new(t, 0.0))?;
            Ok((ode - model).norm())
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// `k × k` polar grid of the disc with radii up to 0.9.
pub fn disc_grid(k: usize) -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(k * k);
    for i in 0..k {
        let r = 0.9 * ((i + 1) as f64) / (k as f64);
        for j in 0..k {
            let th = std::f64::consts::TAU * (j as f64) / (k as f64);
            grid.push(Complex64::from_polar(r, th));
        }
    }
    grid
}

/// Polar grid of an annulus `rmin <= |z| <= rmax`.
pub fn annulus_grid(rmin: f64, rmax: f64, nr: usize, na: usize) -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(nr * na);
    for i in 0..nr {
        let r = if nr == 1 {
            rmin
        } else {
            rmin + (rmax - rmin) * (i as f64) / ((nr - 1) as f64)
        };
        for j in 0..na {
            let th = std::f64::consts::TAU * (j as f64) / (na as f64);
            grid.push(Complex64::from_polar(r, th));
        }
    }
    grid
}
