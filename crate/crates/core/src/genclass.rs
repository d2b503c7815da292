//! Classification of disc generators.
//!
//! The boundary data is the profile `θ ↦ z̄·G(z)` on a circle close to (or
//! on) `|z| = 1`. Generation of a semigroup of composition operators is the
//! sign test `sup Re z̄G ≤ 0`; the group property is `Re z̄G = 0`; the
//! analyticity sector is the largest `θ` for which all three rotations
//! `e^{±iθ}, 1` keep the profile in the closed left half-plane.
//!
//! Two compactness diagnostics are provided: the annulus condition
//! `Re z̄G ≤ -δ` on `1-ε < |z| < 1` (sufficient for an immediately
//! trace-class semigroup) and the growth of `|G(z)/(z-ξ)|` along approaches
//! to boundary points `ξ` (divergence at every `ξ` characterizes compactness
//! for analytic semigroups).
//!
//! A measure-zero caveat applies throughout: sampling cannot see a boundary
//! essential supremum on an exceptional null set, so verdicts are relative
//! to the grid.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::expr::Expr;
use crate::semiflow::{self, FlowConfig};
use crate::Result;

/// Default tolerance for boundary sign tests: closed-form examples hit 0
/// exactly, and float noise must not flip verdicts.
pub const SIGN_TOL: f64 = 1e-9;

/// Near-boundary fallback radius for symbols that cannot be evaluated on the
/// unit circle itself.
pub const NEAR_BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;

/// Bisection resolution for the sector half-angle.
pub const SECTOR_RESOLUTION: f64 = 1e-3;

/// Samples of `z̄·G(z)` on a circle of the given radius.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryProfile {
    pub radius: f64,
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Angles whose samples hit a singularity of `G` and were excluded.
    pub excluded: Vec<f64>,
}

impl BoundaryProfile {
    pub fn max_re(&self) -> f64 {
        self.values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_re(&self) -> f64 {
        self.values.iter().map(|v| v.re.abs()).fold(0.0, f64::max)
    }

    /// Largest sample magnitude; sign tolerances scale with it because the
    /// rounding noise in `Re z̄G` is relative to `|z̄G|` (profiles with
    /// boundary poles reach magnitudes of 1e3 and more).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Sample `values[j] = conj(z_j)·G(z_j)` at `z_j = radius·e^{2πij/m}`.
/// Singular samples are excluded and recorded.
pub fn boundary_profile(g: &Expr, m: usize, radius: f64) -> Result<BoundaryProfile> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "profile radius {radius} outside (0, 1]"
        )));
    }
    if m < 16 {
        return Err(Error::InvalidArgument("need at least 16 samples".into()));
    }
    let mut thetas = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    let mut excluded = Vec::new();
    for j in 0..m {
        let theta = std::f64::consts::TAU * (j as f64) / (m as f64);
        let z = Complex64::from_polar(radius, theta);
        match g.eval(z) {
            Ok(v) => {
                thetas.push(theta);
                values.push(z.conj() * v);
            }
            Err(_) => excluded.push(theta),
        }
    }
    if values.is_empty() {
        return Err(Error::Singularity(
            "generator not evaluable anywhere on the sample circle".into(),
        ));
    }
    Ok(BoundaryProfile {
        radius,
        thetas,
        values,
        excluded,
    })
}

/// Profile at radius 1 when the symbol tolerates it (isolated singular
/// samples are excluded); falls back to `1 - 1e-6` when more than 1% of the
/// circle fails to evaluate.
pub fn profile_with_fallback(g: &Expr, m: usize) -> Result<BoundaryProfile> {
    let on_circle = boundary_profile(g, m, 1.0)?;
    if on_circle.excluded.len() * 100 <= m {
        return Ok(on_circle);
    }
    boundary_profile(g, m, NEAR_BOUNDARY_RADIUS)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SemigroupCheck {
    pub generates: bool,
    /// `sup Re z̄G` over the sampled circle.
    pub s0: f64,
}

/// Generation test: `A = G d/dz` generates a semigroup of composition
/// operators iff the boundary essential sup of `Re z̄G` is ≤ 0.
/// The tolerance is scaled by the profile magnitude.
pub fn classify_semigroup(profile: &BoundaryProfile, tol: f64) -> SemigroupCheck {
    let s0 = profile.max_re();
    SemigroupCheck {
        generates: s0 <= tol * profile.max_abs().max(1.0),
        s0,
    }
}

/// Group test: `Re z̄G = 0` a.e. on the circle, up to the
/// magnitude-scaled tolerance.
pub fn is_group(profile: &BoundaryProfile, tol: f64) -> bool {
    profile.max_abs_re() <= tol * profile.max_abs().max(1.0)
}

/// Feasibility of a sector half-angle θ: all three rotations keep the
/// profile in the closed left half-plane.
fn sector_feasible(profile: &BoundaryProfile, theta: f64, tol: f64) -> bool {
    for alpha in [-theta, 0.0, theta] {
        let rot = Complex64::from_polar(1.0, alpha);
        let sup = profile
            .values
            .iter()
            .map(|v| (rot * v).re)
            .fold(f64::NEG_INFINITY, f64::max);
        if sup > tol {
            return false;
        }
    }
    true
}

/// Largest verified sector half-angle on a 1e-3-resolution bisection of
/// `(0, π/2)`; angles below the resolution are reported as 0 (no positive
/// angle certified).
pub fn sector_angle_from_profile(profile: &BoundaryProfile, tol: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::FRAC_PI_2;
    if !sector_feasible(profile, 0.0, tol) {
        return 0.0;
    }
    while hi - lo > SECTOR_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if sector_feasible(profile, mid, tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo < SECTOR_RESOLUTION {
        0.0
    } else {
        lo
    }
}

/// Sector half-angle computed from a fresh 8192-sample profile.
pub fn sector_angle(g: &Expr, tol: f64) -> Result<f64> {
    let profile = profile_with_fallback(g, 8192)?;
    Ok(sector_angle_from_profile(&profile, tol))
}

/// Result of the annulus sufficiency test for immediate compactness.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnnulusCheck {
    pub holds: bool,
    pub delta: f64,
    pub eps: f64,
    /// Worst (largest) value of `Re z̄G` seen on the annulus grid.
    pub worst: f64,
    pub excluded: usize,
}

/// `Re z̄G(z) ≤ -δ` on a dense grid of the annulus `1-ε < |z| < 1`;
/// sufficient for an immediately trace-class semigroup.
pub fn immediate_compactness_sufficient(
    g: &Expr,
    delta: f64,
    eps: f64,
) -> Result<AnnulusCheck> {
    if delta <= 0.0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(
            "need delta > 0 and eps in (0, 1)".into(),
        ));
    }
    let radial = 32;
    let angular = 1024;
    let mut worst = f64::NEG_INFINITY;
    let mut excluded = 0usize;
    for i in 0..radial {
        let r = 1.0 - eps + eps * ((i + 1) as f64) / ((radial + 1) as f64);
        for j in 0..angular {
            let th = std::f64::consts::TAU * (j as f64) / (angular as f64);
            let z = Complex64::from_polar(r, th);
            match g.eval(z) {
                Ok(v) => worst = worst.max((z.conj() * v).re),
                Err(_) => excluded += 1,
            }
        }
    }
    if !worst.is_finite() {
        return Err(Error::Singularity(
            "generator not evaluable on the annulus".into(),
        ));
    }
    Ok(AnnulusCheck {
        holds: worst <= -delta + SIGN_TOL,
        delta,
        eps,
        worst,
        excluded,
    })
}

/// Verdict of the boundary growth diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthVerdict {
    Diverges,
    Bounded,
    Inconclusive,
}

/// Samples of `|G(z)/(z-ξ)|` along one approach ray to `ξ`.
#[derive(Debug, Clone, Serialize)]
pub struct RayDiagnostic {
    /// Approach angle relative to the inward radius (0 = radial).
    pub angle: f64,
    pub ratios: Vec<f64>,
    pub verdict: GrowthVerdict,
}

/// Growth diagnostic at one boundary point, radial plus two oblique rays.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthDiagnostic {
    pub xi: Complex64,
    pub rays: Vec<RayDiagnostic>,
    /// Agreement of the three rays; `Inconclusive` when they disagree.
    pub verdict: GrowthVerdict,
}

/// Default geometric approach depths `1e-1 … 1e-9`.
pub fn default_approach_depths() -> Vec<f64> {
    (0..=16).map(|k| 10f64.powf(-1.0 - 0.5 * (k as f64))).collect()
}

const GROWTH_THRESHOLD: f64 = 1e4;

fn ray_verdict(q: &[f64]) -> GrowthVerdict {
    let n = q.len();
    if n < 6 {
        return GrowthVerdict::Inconclusive;
    }
    let tail = &q[n - 5..];
    let non_decreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let increasing = tail.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-6));
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let span = tail.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - tail.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let scale = tail.last().copied().unwrap_or(0.0).abs().max(1e-300);
    if *tail.last().unwrap() >= GROWTH_THRESHOLD && non_decreasing {
        GrowthVerdict::Diverges
    } else if span / scale < 1e-3 {
        GrowthVerdict::Bounded
    } else if decreasing {
        GrowthVerdict::Bounded
    } else if increasing {
        GrowthVerdict::Diverges
    } else {
        GrowthVerdict::Inconclusive
    }
}

/// Sample `q = |G(z)/(z-ξ)|` along `z = ξ(1 - ε·e^{iψ})`, `ψ ∈ {0, ±π/4}`,
/// with `ε` running through `depths`, and classify the growth.
pub fn compact_criterion(g: &Expr, xi: Complex64, depths: &[f64]) -> Result<GrowthDiagnostic> {
    if (xi.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "approach point {xi} is not unimodular"
        )));
    }
    if depths.len() < 6 {
        return Err(Error::InvalidArgument(
            "need at least 6 approach depths".into(),
        ));
    }
    let mut rays = Vec::new();
    for &psi in &[-std::f64::consts::FRAC_PI_4, 0.0, std::f64::consts::FRAC_PI_4] {
        let dir = Complex64::from_polar(1.0, psi);
        let mut ratios = Vec::with_capacity(depths.len());
        for &eps in depths {
            let z = xi * (Complex64::new(1.0, 0.0) - dir * eps);
            let v = g.eval(z)?;
            ratios.push((v / (z - xi)).norm());
        }
        let verdict = ray_verdict(&ratios);
        rays.push(RayDiagnostic {
            angle: psi,
            ratios,
            verdict,
        });
    }
    let first = rays[0].verdict;
    let verdict = if rays.iter().all(|r| r.verdict == first) {
        first
    } else {
        GrowthVerdict::Inconclusive
    };
    Ok(GrowthDiagnostic { xi, rays, verdict })
}

/// Minimum of `Re F` for the factorization `G(z) = (α−z)(1−ᾱz)F(z)` sampled
/// on a polar grid that avoids `z = α`. Generator consistency expects the
/// minimum to be ≥ 0 up to tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BpCheck {
    pub alpha: Complex64,
    pub min_re: f64,
    pub samples: usize,
}

pub fn bp_decomposition(g: &Expr, alpha: Complex64) -> Result<BpCheck> {
    if alpha.norm() > 1.0 + 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "base point {alpha} outside the closed disc"
        )));
    }
    let mut min_re = f64::INFINITY;
    let mut samples = 0usize;
    for i in 0..18 {
        let r = 0.05 + 0.9 * (i as f64) / 17.0;
        for j in 0..128 {
            let th = std::f64::consts::TAU * (j as f64) / 128.0;
            let z = Complex64::from_polar(r, th);
            let d1 = alpha - z;
            let d2 = Complex64::new(1.0, 0.0) - alpha.conj() * z;
            if d1.norm() < 0.05 || d2.norm() < 0.05 {
                continue;
            }
            let Ok(v) = g.eval(z) else { continue };
            min_re = min_re.min((v / (d1 * d2)).re);
            samples += 1;
        }
    }
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "no usable grid points in the factorization check".into(),
        ));
    }
    Ok(BpCheck {
        alpha,
        min_re,
        samples,
    })
}

/// Knobs for the assembled classification pipeline.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub samples: usize,
    pub tol: f64,
    pub delta: f64,
    pub eps: f64,
    /// Number of equispaced roots of unity probed by the growth diagnostic.
    pub xi_count: usize,
    pub flow: FlowConfig,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            samples: 4096,
            tol: SIGN_TOL,
            delta: 0.2,
            eps: 0.3,
            xi_count: 64,
            flow: FlowConfig::default(),
        }
    }
}

/// Generator verdicts with the raw boundary profile.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub s0: f64,
    pub generates_semigroup: bool,
    /// All profile values vanish: the trivial semigroup.
    pub trivial: bool,
    pub is_group: bool,
    pub theta_max: f64,
    pub imm_compact: AnnulusCheck,
    pub compact_criterion: Vec<GrowthDiagnostic>,
    pub compact_diverges_everywhere: bool,
    pub bp_min_re: Option<f64>,
    pub dw_point: Option<Complex64>,
    pub dw_boundary: Option<bool>,
    pub profile: BoundaryProfile,
    /// Non-fatal issues encountered while assembling the report.
    pub notes: Vec<String>,
}

/// Run the full disc classification pipeline.
pub fn classify(g: &Expr, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let profile = profile_with_fallback(g, opts.samples)?;
    let sem = classify_semigroup(&profile, opts.tol);
    let trivial = profile.values.iter().all(|v| v.norm() <= opts.tol);
    let group = is_group(&profile, opts.tol);
    let mut notes = Vec::new();

    let theta_max = if sem.generates {
        let fine = profile_with_fallback(g, 8192)?;
        let theta = sector_angle_from_profile(&fine, opts.tol);
        if group && !trivial && theta > 0.0 {
            // A non-trivial group is never analytic; keep the boundary verdict.
            notes.push(format!(
                "sector bisection reported {theta} for a group; clamped to 0"
            ));
            0.0
        } else {
            theta
        }
    } else {
        0.0
    };

    let imm_compact = immediate_compactness_sufficient(g, opts.delta, opts.eps)?;

    let depths = default_approach_depths();
    let mut diagnostics = Vec::with_capacity(opts.xi_count);
    for k in 0..opts.xi_count {
        let th = std::f64::consts::TAU * (k as f64) / (opts.xi_count as f64);
        let xi = Complex64::from_polar(1.0, th);
        match compact_criterion(g, xi, &depths) {
            Ok(d) => diagnostics.push(d),
            Err(e) => notes.push(format!("growth diagnostic failed at xi={xi}: {e}")),
        }
    }
    let compact_diverges_everywhere = !diagnostics.is_empty()
        && diagnostics.iter().all(|d| d.verdict == GrowthVerdict::Diverges);

    let (dw_point, dw_boundary, bp_min_re) = if sem.generates && !trivial {
        match semiflow::denjoy_wolff(g, &opts.flow) {
            Ok(dw) => {
                let bp = match bp_decomposition(g, dw.point) {
                    Ok(b) => Some(b.min_re),
                    Err(e) => {
                        notes.push(format!("factorization check failed: {e}"));
                        None
                    }
                };
                (Some(dw.point), Some(dw.boundary), bp)
            }
            Err(e) => {
                notes.push(format!("Denjoy-Wolff search failed: {e}"));
                (None, None, None)
            }
        }
    } else {
        (None, None, None)
    };

    Ok(ClassificationReport {
        s0: sem.s0,
        generates_semigroup: sem.generates,
        trivial,
        is_group: group,
        theta_max,
        imm_compact,
        compact_criterion: diagnostics,
        compact_diverges_everywhere,
        bp_min_re,
        dw_point,
        dw_boundary,
        profile,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str) -> Expr {
        Expr::parse(src).unwrap()
    }

    #[test]
    fn profile_of_group_generator_is_imaginary() {
        // z̄·(1-z²) on |z|=1 equals -2i·Im z.
        let p = boundary_profile(&g("1 - z^2"), 4096, 1.0).unwrap();
        for (theta, v) in p.thetas.iter().zip(&p.values) {
            assert!(v.re.abs() < 1e-12);
            assert!((v.im - (-2.0 * theta.sin())).abs() < 1e-10);
        }
    }

    #[test]
    fn profile_of_parabolic_generator_is_negative_real() {
        // Re z̄·(1-z)² = -4 sin²(θ/2) on the circle.
        let p = boundary_profile(&g("(1-z)^2"), 4096, 1.0).unwrap();
        for (theta, v) in p.thetas.iter().zip(&p.values) {
            let expected = -4.0 * (theta / 2.0).sin().powi(2);
            assert!((v.re - expected).abs() < 1e-9, "θ={theta}");
        }
    }

    #[test]
    fn profile_of_nonanalytic_generator_lies_on_a_line() {
        // z̄·2z/(z-1) maps the circle onto Re = -1 (the pole at z=1 is excluded).
        let p = boundary_profile(&g("2*z/(z-1)"), 4096, 1.0).unwrap();
        assert_eq!(p.excluded.len(), 1);
        for v in &p.values {
            assert!((v.re + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn semigroup_sign_test() {
        let p = boundary_profile(&g("-z"), 1024, 1.0).unwrap();
        let s = classify_semigroup(&p, SIGN_TOL);
        assert!(s.generates && (s.s0 + 1.0).abs() < 1e-12);

        let p = boundary_profile(&g("1 - z^2"), 1024, 1.0).unwrap();
        let s = classify_semigroup(&p, 1e-10);
        assert!(s.generates && s.s0.abs() < 1e-10);

        let p = boundary_profile(&g("z"), 1024, 1.0).unwrap();
        let s = classify_semigroup(&p, SIGN_TOL);
        assert!(!s.generates && (s.s0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_detection() {
        let p = boundary_profile(&g("1 - z^2"), 1024, 1.0).unwrap();
        assert!(is_group(&p, SIGN_TOL));
        let p = boundary_profile(&g("-z"), 1024, 1.0).unwrap();
        assert!(!is_group(&p, SIGN_TOL));
        let p = boundary_profile(&g("z*(z-1)"), 1024, 1.0).unwrap();
        assert!(!is_group(&p, SIGN_TOL));
    }

    #[test]
    fn group_generator_works_in_both_directions() {
        let fwd = g("1 - z^2");
        let back = fwd.clone().negated();
        for gen in [&fwd, &back] {
            let p = boundary_profile(gen, 1024, 1.0).unwrap();
            assert!(classify_semigroup(&p, SIGN_TOL).generates);
        }
    }

    #[test]
    fn sector_angles() {
        // (1-z)²: profile real non-positive, sector extends to π/2.
        let th = sector_angle(&g("(1-z)^2"), SIGN_TOL).unwrap();
        assert!(th >= std::f64::consts::FRAC_PI_2 - 1e-2, "theta = {th}");

        // 2z/(z-1): profile on the line Re = -1; no positive angle.
        let th = sector_angle(&g("2*z/(z-1)"), SIGN_TOL).unwrap();
        assert_eq!(th, 0.0);

        // 1-z²: purely imaginary profile; any rotation fails.
        let th = sector_angle(&g("1 - z^2"), SIGN_TOL).unwrap();
        assert_eq!(th, 0.0);

        // z(z²-2): rotations stay feasible up to π/3 (1 - 2cos θ <= 0).
        let th = sector_angle(&g("z*(z^2 - 2)"), SIGN_TOL).unwrap();
        assert!((th - std::f64::consts::FRAC_PI_3).abs() < 2e-3, "theta = {th}");
    }

    #[test]
    fn sector_monotone_in_theta() {
        let profile = profile_with_fallback(&g("z*(z^2 - 2)"), 4096).unwrap();
        let theta = sector_angle_from_profile(&profile, SIGN_TOL);
        for &frac in &[0.25, 0.5, 0.75] {
            assert!(sector_feasible(&profile, theta * frac, SIGN_TOL));
        }
        assert!(!sector_feasible(&profile, theta + 0.05, SIGN_TOL));
    }

    #[test]
    fn annulus_sufficiency() {
        let c = immediate_compactness_sufficient(&g("-z"), 0.2, 0.5).unwrap();
        assert!(c.holds, "worst = {}", c.worst);

        let c = immediate_compactness_sufficient(&g("z*(z^2 - 2)"), 0.5, 0.1).unwrap();
        assert!(c.holds, "worst = {}", c.worst);

        // Profile reaches 0 at θ=0: no δ > 0 works.
        let c = immediate_compactness_sufficient(&g("(1-z)^2"), 1e-3, 0.3).unwrap();
        assert!(!c.holds);
    }

    #[test]
    fn growth_diagnostics() {
        let depths = default_approach_depths();
        let one = Complex64::new(1.0, 0.0);

        // G/(z-1) = -(1-z): ratios decay, bounded.
        let d = compact_criterion(&g("(1-z)^2"), one, &depths).unwrap();
        assert_eq!(d.verdict, GrowthVerdict::Bounded);

        // |z|/|z-1| blows past the threshold monotonically.
        let d = compact_criterion(&g("-z"), one, &depths).unwrap();
        assert_eq!(d.verdict, GrowthVerdict::Diverges);

        // |log(1-z)| grows without bound but slowly: still divergent.
        let d = compact_criterion(&g("(1-z)*log(1-z)"), one, &depths).unwrap();
        assert_eq!(d.verdict, GrowthVerdict::Diverges);

        // Finite non-zero limit -(1+z) -> -2: bounded.
        let d = compact_criterion(&g("1 - z^2"), one, &depths).unwrap();
        assert_eq!(d.verdict, GrowthVerdict::Bounded);
    }

    #[test]
    fn sufficiency_implies_divergence_at_every_boundary_point() {
        let depths = default_approach_depths();
        for src in ["-z", "z*(z^2 - 2)"] {
            let gen = g(src);
            assert!(immediate_compactness_sufficient(&gen, 0.2, 0.3).unwrap().holds);
            for k in 0..16 {
                let xi = Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64) / 16.0);
                let d = compact_criterion(&gen, xi, &depths).unwrap();
                assert_eq!(d.verdict, GrowthVerdict::Diverges, "{src} at xi={xi}");
            }
        }
    }

    #[test]
    fn bp_factorization_examples() {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);

        // -z = (0-z)·1·F with F ≡ 1.
        let b = bp_decomposition(&g("-z"), zero).unwrap();
        assert!((b.min_re - 1.0).abs() < 1e-10);

        // (1-z)² = (1-z)(1-z)·F with F ≡ 1.
        let b = bp_decomposition(&g("(1-z)^2"), one).unwrap();
        assert!((b.min_re - 1.0).abs() < 1e-10);

        // 1-z² factors through the right-half-plane map (1+z)/(1-z).
        let b = bp_decomposition(&g("1 - z^2"), one).unwrap();
        assert!(b.min_re >= -1e-10, "min Re F = {}", b.min_re);
    }

    #[test]
    fn refining_the_grid_is_stable_on_closed_forms() {
        for src in ["-z", "1 - z^2", "(1-z)^2", "2*z/(z-1)", "z*(z-1)", "z*(z^2 - 2)"] {
            let gen = g(src);
            let coarse = classify_semigroup(&boundary_profile(&gen, 4096, 1.0).unwrap(), SIGN_TOL);
            let fine = classify_semigroup(&boundary_profile(&gen, 8192, 1.0).unwrap(), SIGN_TOL);
            assert!(
                (coarse.s0 - fine.s0).abs() < 1e-6,
                "{src}: {} vs {}",
                coarse.s0,
                fine.s0
            );
        }
    }

    #[test]
    fn full_pipeline_on_the_group_example() {
        let report = classify(&g("1 - z^2"), &ClassifyOptions::default()).unwrap();
        assert!(report.generates_semigroup);
        assert!(report.is_group);
        assert!(!report.trivial);
        assert_eq!(report.theta_max, 0.0);
        assert!(!report.imm_compact.holds);
        assert_eq!(report.dw_boundary, Some(true));
        let dw = report.dw_point.unwrap();
        assert!((dw - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!(report.bp_min_re.unwrap() >= -1e-8);
    }

    #[test]
    fn full_pipeline_on_a_trace_class_example() {
        let report = classify(&g("-z"), &ClassifyOptions::default()).unwrap();
        assert!(report.generates_semigroup);
        assert!(!report.is_group);
        assert!(report.imm_compact.holds);
        assert!(report.compact_diverges_everywhere);
        assert!(report.dw_point.unwrap().norm() < 1e-9);
        assert!(report.theta_max > 1.5, "theta = {}", report.theta_max);
        assert!(report.bp_min_re.unwrap() >= -1e-8);
    }

    #[test]
    fn non_generator_is_rejected() {
        let report = classify(&g("z"), &ClassifyOptions::default()).unwrap();
        assert!(!report.generates_semigroup);
        assert!(report.dw_point.is_none());
        assert_eq!(report.theta_max, 0.0);
    }
}
