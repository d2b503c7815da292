//! Catalogue of worked examples with closed-form data and known verdicts.
//!
//! Each case records the generator (or a static self-map), the closed-form
//! flow when one exists, an optional conformal model, and the expected
//! classification outcomes. The regression suite replays every expectation
//! against the classifiers.

use num_complex::Complex64;

use crate::expr::Expr;
use crate::genclass::GrowthVerdict;
use crate::semiflow::SemiflowModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Disc,
    HalfPlane,
}

/// Closed-form flow `(z, t) ↦ φ_t(z)`.
pub type ClosedFlow = fn(Complex64, f64) -> Complex64;

/// Expectation on the sector half-angle.
#[derive(Debug, Clone, Copy)]
pub enum ThetaExpectation {
    Zero,
    AtLeast(f64),
    Near(f64, f64),
}

/// Expected verdicts; `None` fields are not asserted for that case.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub generates: Option<bool>,
    pub is_group: Option<bool>,
    pub theta: Option<ThetaExpectation>,
    /// Annulus sufficiency at (δ, ε) = (0.2, 0.3).
    pub imm_compact_sufficient: Option<bool>,
    /// Growth verdict of `|G(z)/(z-1)|` at ξ = 1.
    pub growth_at_one: Option<GrowthVerdict>,
    /// `(t, expected trace-class flag)` pairs.
    pub trace_class_at: Vec<(f64, bool)>,
    /// `(point, boundary flag)`.
    pub dw: Option<(Complex64, bool)>,
    /// Half-plane: angular limit of `G(z)/z`.
    pub delta: Option<f64>,
    /// Half-plane: affine group parameters `(p, q)`.
    pub group_pq: Option<(f64, f64)>,
    /// Half-plane: the affine-group fit must reject this generator.
    pub group_rejected: bool,
}

pub struct ExampleCase {
    pub name: &'static str,
    pub summary: &'static str,
    pub space: Space,
    pub generator: Option<Expr>,
    /// Static self-map for discrete (single-operator) cases.
    pub static_map: Option<Expr>,
    pub closed_form_flow: Option<ClosedFlow>,
    pub model: Option<SemiflowModel>,
    pub expected: Expected,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mobius_flow(z: Complex64, t: f64) -> Complex64 {
    let th = t.tanh();
    (z + th) / (c(1.0, 0.0) + z * th)
}

fn linear_flow(z: Complex64, t: f64) -> Complex64 {
    z * (-t).exp()
}

fn parabolic_flow(z: Complex64, t: f64) -> Complex64 {
    ((1.0 - t) * z + t) / (-t * z + (1.0 + t))
}

fn koebe(z: Complex64) -> Complex64 {
    let d = c(1.0, 0.0) - z;
    z / (d * d)
}

fn koebe_inv(w: Complex64) -> Complex64 {
    if w.re == 0.0 && w.im == 0.0 {
        return w;
    }
    (w * 2.0 + 1.0 - (c(1.0, 0.0) + w * 4.0).sqrt()) / (w * 2.0)
}

/// Flow of the star-like conjugation example, computed natively (independent
/// of the expression evaluator).
fn koenigs_flow(z: Complex64, t: f64) -> Complex64 {
    koebe_inv(koebe(z) * (-t).exp())
}

fn hp_affine_flow(z: Complex64, t: f64) -> Complex64 {
    z * (-t).exp() + c(1.0 - (-t).exp(), 0.0)
}

fn hp_group_flow(z: Complex64, t: f64) -> Complex64 {
    // p = 2, q = 3
    let e = (2.0 * t).exp();
    z * e + c(0.0, 1.5) * (e - 1.0)
}

fn hp_drift_flow(z: Complex64, t: f64) -> Complex64 {
    z + c(0.0, 5.0 * t)
}

fn parse(src: &str) -> Expr {
    Expr::parse(src).expect("registry expression parses")
}

/// The built-in example catalogue.
pub fn builtin_examples() -> Vec<ExampleCase> {
    let frac_pi_2 = std::f64::consts::FRAC_PI_2;
    let frac_pi_3 = std::f64::consts::FRAC_PI_3;
    vec![
        ExampleCase {
            name: "mobius-group",
            summary: "automorphism group with flow (z+tanh t)/(1+z tanh t); not analytic",
            space: Space::Disc,
            generator: Some(parse("1 - z^2")),
            static_map: None,
            closed_form_flow: Some(mobius_flow),
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(true),
                theta: Some(ThetaExpectation::Zero),
                imm_compact_sufficient: Some(false),
                growth_at_one: Some(GrowthVerdict::Bounded),
                trace_class_at: vec![(1.0, false)],
                dw: Some((c(1.0, 0.0), true)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "linear-contraction",
            summary: "radial contraction e^{-t}z; analytic and immediately trace-class",
            space: Space::Disc,
            generator: Some(parse("-z")),
            static_map: None,
            closed_form_flow: Some(linear_flow),
            model: Some(
                SemiflowModel::new(parse("z"), parse("z"), c(1.0, 0.0))
                    .expect("trivial model validates"),
            ),
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                theta: Some(ThetaExpectation::AtLeast(1.5)),
                imm_compact_sufficient: Some(true),
                growth_at_one: Some(GrowthVerdict::Diverges),
                trace_class_at: vec![(1.0, true)],
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "cubic-contraction",
            summary: "cubic contraction with sector angle pi/3; immediately trace-class",
            space: Space::Disc,
            generator: Some(parse("z*(z^2 - 2)")),
            static_map: None,
            closed_form_flow: None,
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                theta: Some(ThetaExpectation::Near(frac_pi_3, 2e-3)),
                imm_compact_sufficient: Some(true),
                growth_at_one: Some(GrowthVerdict::Diverges),
                trace_class_at: vec![(0.5, true)],
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "parabolic-analytic",
            summary: "analytic semigroup with boundary fixed point 1; never compact",
            space: Space::Disc,
            generator: Some(parse("(1-z)^2")),
            static_map: None,
            closed_form_flow: Some(parabolic_flow),
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                theta: Some(ThetaExpectation::AtLeast(frac_pi_2 - 1e-2)),
                imm_compact_sufficient: Some(false),
                growth_at_one: Some(GrowthVerdict::Bounded),
                trace_class_at: vec![(1.0, false)],
                dw: Some((c(1.0, 0.0), true)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "nonanalytic-traceclass",
            summary: "non-analytic semigroup that is immediately trace-class",
            space: Space::Disc,
            generator: Some(parse("2*z/(z-1)")),
            static_map: None,
            closed_form_flow: None,
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                theta: Some(ThetaExpectation::Zero),
                imm_compact_sufficient: Some(true),
                growth_at_one: Some(GrowthVerdict::Diverges),
                trace_class_at: vec![(0.1, true), (1.0, true)],
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "neither-analytic-nor-group",
            summary: "generates a semigroup that is neither analytic nor a group",
            space: Space::Disc,
            generator: Some(parse("z*(z-1)")),
            static_map: None,
            closed_form_flow: None,
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                theta: Some(ThetaExpectation::Zero),
                imm_compact_sufficient: Some(false),
                trace_class_at: vec![(1.0, false)],
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "siskakis-log",
            summary: "immediately compact although the boundary supremum is 0",
            space: Space::Disc,
            generator: Some(parse("(1-z)*log(1-z)")),
            static_map: None,
            closed_form_flow: None,
            model: None,
            expected: Expected {
                generates: Some(true),
                is_group: Some(false),
                // Immediately compact although the boundary sup is 0: the
                // annulus sufficiency must fail while the growth test fires.
                imm_compact_sufficient: Some(false),
                growth_at_one: Some(GrowthVerdict::Diverges),
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "koenigs-starlike",
            summary: "star-like conjugation model flow h^{-1}(e^{-t}h) for the Koebe map",
            space: Space::Disc,
            generator: Some(parse("-z*(1-z)/(1+z)")),
            static_map: None,
            closed_form_flow: Some(koenigs_flow),
            model: Some(
                SemiflowModel::new(
                    parse("z/(1-z)^2"),
                    parse("(2*z + 1 - sqrt(1 + 4*z))/(2*z)"),
                    c(1.0, 0.0),
                )
                .expect("star-like model validates"),
            ),
            expected: Expected {
                generates: Some(true),
                // The boundary criterion reports a group here (the profile is
                // purely imaginary), but the generator has a boundary pole and
                // the backward flow leaves the disc; no group assertion.
                imm_compact_sufficient: Some(false),
                growth_at_one: Some(GrowthVerdict::Bounded),
                trace_class_at: vec![(1.0, false)],
                dw: Some((c(0.0, 0.0), false)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "lotto",
            summary: "static self-map: compact, not Hilbert-Schmidt; its square is Hilbert-Schmidt",
            space: Space::Disc,
            generator: None,
            static_map: Some(parse("1/(1 - i*sqrt(i*(1-z)/(1+z)))")),
            closed_form_flow: None,
            model: None,
            expected: Expected {
                // Compact but not Hilbert-Schmidt; the square is
                // Hilbert-Schmidt. Checked through the HS integral flags.
                trace_class_at: vec![(0.0, false)],
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "halfplane-affine",
            summary: "half-plane semigroup, neither group nor analytic; norm e^{t/2}",
            space: Space::HalfPlane,
            generator: Some(parse("1 - z")),
            static_map: None,
            closed_form_flow: Some(hp_affine_flow),
            model: None,
            expected: Expected {
                generates: Some(true),
                delta: Some(-1.0),
                group_rejected: true,
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "halfplane-group",
            summary: "half-plane group with affine generator 2z+3i",
            space: Space::HalfPlane,
            generator: Some(parse("2*z + 3*i")),
            static_map: None,
            closed_form_flow: Some(hp_group_flow),
            model: None,
            expected: Expected {
                generates: Some(true),
                delta: Some(2.0),
                group_pq: Some((2.0, 3.0)),
                ..Expected::default()
            },
        },
        ExampleCase {
            name: "halfplane-drift",
            summary: "half-plane vertical drift group z+5it",
            space: Space::HalfPlane,
            generator: Some(parse("5*i")),
            static_map: None,
            closed_form_flow: Some(hp_drift_flow),
            model: None,
            expected: Expected {
                generates: Some(true),
                delta: Some(0.0),
                group_pq: Some((0.0, 5.0)),
                ..Expected::default()
            },
        },
    ]
}

/// Look up an example by name.
pub fn lookup(name: &str) -> Option<ExampleCase> {
    builtin_examples().into_iter().find(|e| e.name == name)
}

/// Names of all built-in examples.
pub fn names() -> Vec<&'static str> {
    builtin_examples().iter().map(|e| e.name).collect()
}
