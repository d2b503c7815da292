//! Job specification and pipeline execution.
//!
//! A job names one command, exactly one symbol source (an expression string
//! or a registry example), and the knobs and output paths. Jobs arrive
//! either from command-line flags or from a JSON file (`--job job.json`);
//! both routes build the same [`JobSpec`].

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use semiflow_lab_core::expr::Expr;
use semiflow_lab_core::genclass::{self, ClassifyOptions};
use semiflow_lab_core::halfplane;
use semiflow_lab_core::opmatrix::{self, WeightSequence};
use semiflow_lab_core::registry::{self, ExampleCase, Space};
use semiflow_lab_core::semiflow::{self, FlowConfig};
use semiflow_lab_core::series;

use crate::report::{
    profile_csv, trajectory_csv, write_atomic, ExampleInfo, FlowResults, MatrixResults, OpError,
    Provenance, Report, Results, Timing, SCHEMA_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Flow,
    Matrix,
    Halfplane,
    ReportAll,
    ListExamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaKind {
    Hardy,
    Dirichlet,
    Bergman,
}

impl BetaKind {
    fn build(self, order: usize) -> WeightSequence {
        match self {
            BetaKind::Hardy => WeightSequence::hardy(order),
            BetaKind::Dirichlet => WeightSequence::dirichlet(order),
            BetaKind::Bergman => WeightSequence::bergman(order),
        }
    }

    fn name(self) -> &'static str {
        match self {
            BetaKind::Hardy => "hardy",
            BetaKind::Dirichlet => "dirichlet",
            BetaKind::Bergman => "bergman",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traj_csv: Option<PathBuf>,
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths {
            report: None,
            profile_csv: None,
            spectrum_csv: None,
            matrix_csv: None,
            traj_csv: None,
        }
    }
}

fn default_samples() -> usize {
    4096
}
fn default_order() -> usize {
    64
}
fn default_tol() -> f64 {
    genclass::SIGN_TOL
}
fn default_delta() -> f64 {
    0.2
}
fn default_eps() -> f64 {
    0.3
}
fn default_grid() -> usize {
    10
}
fn default_beta() -> BetaKind {
    BetaKind::Hardy
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    /// Expression source for the generator (or self-map for `matrix --phi`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    /// Static self-map source for matrix jobs without a semigroup.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default = "default_beta")]
    pub beta: BetaKind,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub outputs: OutputPaths,
}

impl JobSpec {
    pub fn validate(&self) -> Result<(), String> {
        let sources = [self.g.is_some(), self.example.is_some(), self.phi.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        match self.command {
            Command::ListExamples => {
                if sources != 0 {
                    return Err("list-examples takes no symbol source".into());
                }
            }
            _ => {
                if sources != 1 {
                    return Err(
                        "exactly one symbol source (--G, --example, or --phi) is required".into(),
                    );
                }
            }
        }
        if self.phi.is_some() && self.command != Command::Matrix {
            return Err("--phi applies to the matrix command only".into());
        }
        if self.t.iter().any(|&t| t < 0.0) {
            return Err("t values must be non-negative for semigroup commands".into());
        }
        if self.order == 0 || self.order > 512 {
            return Err("order must lie in 1..=512".into());
        }
        Ok(())
    }
}

/// Resolved symbol: either a bare generator or a full registry case.
struct Subject {
    generator: Option<Expr>,
    case: Option<ExampleCase>,
    space: Space,
}

fn resolve(spec: &JobSpec) -> Result<Subject, String> {
    if let Some(name) = &spec.example {
        let case = registry::lookup(name).ok_or_else(|| {
            format!(
                "unknown example `{name}` (known: {})",
                registry::names().join(", ")
            )
        })?;
        Ok(Subject {
            generator: case.generator.clone(),
            space: case.space,
            case: Some(case),
        })
    } else if let Some(src) = &spec.g {
        let generator = Expr::parse(src).map_err(|e| format!("invalid expression: {e}"))?;
        let space = match spec.command {
            Command::Halfplane => Space::HalfPlane,
            _ => Space::Disc,
        };
        Ok(Subject {
            generator: Some(generator),
            case: None,
            space,
        })
    } else {
        Err("no symbol source".into())
    }
}

pub struct Outcome {
    pub report: Report,
    pub had_errors: bool,
}

/// Execute a validated job and assemble the report.
pub fn run(spec: &JobSpec) -> Result<Outcome, String> {
    spec.validate()?;
    let start = Instant::now();
    let mut results = Results::default();
    let mut errors: Vec<OpError> = Vec::new();

    match spec.command {
        Command::ListExamples => {
            results.examples = Some(
                registry::builtin_examples()
                    .iter()
                    .map(|e| ExampleInfo {
                        name: e.name.to_string(),
                        summary: e.summary.to_string(),
                        space: match e.space {
                            Space::Disc => "disc".into(),
                            Space::HalfPlane => "halfplane".into(),
                        },
                        generator: e.generator.as_ref().map(|g| g.to_string()),
                        static_map: e.static_map.as_ref().map(|p| p.to_string()),
                        has_closed_form_flow: e.closed_form_flow.is_some(),
                    })
                    .collect(),
            );
        }
        Command::Classify => {
            let subject = resolve(spec)?;
            run_classify(spec, &subject, &mut results, &mut errors);
        }
        Command::Flow => {
            let subject = resolve(spec)?;
            run_flow(spec, &subject, &mut results, &mut errors);
        }
        Command::Matrix => {
            if spec.phi.is_some() {
                run_matrix_static(spec, &mut results, &mut errors);
            } else {
                let subject = resolve(spec)?;
                run_matrix(spec, &subject, &mut results, &mut errors);
            }
        }
        Command::Halfplane => {
            let subject = resolve(spec)?;
            if subject.space != Space::HalfPlane {
                return Err("halfplane command requires a half-plane symbol".into());
            }
            run_halfplane(spec, &subject, &mut results, &mut errors);
        }
        Command::ReportAll => {
            let subject = resolve(spec)?;
            match subject.space {
                Space::Disc => {
                    if subject.generator.is_some() {
                        run_classify(spec, &subject, &mut results, &mut errors);
                        run_flow(spec, &subject, &mut results, &mut errors);
                    }
                    run_matrix(spec, &subject, &mut results, &mut errors);
                }
                Space::HalfPlane => run_halfplane(spec, &subject, &mut results, &mut errors),
            }
        }
    }

    let report = Report {
        schema: SCHEMA_VERSION,
        tool: "semiflow-lab",
        version: env!("CARGO_PKG_VERSION"),
        job: serde_json::to_value(spec).map_err(|e| e.to_string())?,
        results,
        errors,
        provenance: Provenance {
            sign_tol: spec.tol,
            sector_resolution: genclass::SECTOR_RESOLUTION,
            flow_abs_tol: FlowConfig::default().abs_tol,
            flow_rel_tol: FlowConfig::default().rel_tol,
            profile_samples: spec.samples,
        },
        timing: Timing {
            total_ms: start.elapsed().as_millis(),
        },
    };
    let had_errors = !report.errors.is_empty();
    Ok(Outcome { report, had_errors })
}

fn run_classify(
    spec: &JobSpec,
    subject: &Subject,
    results: &mut Results,
    errors: &mut Vec<OpError>,
) {
    let Some(g) = subject.generator.as_ref() else {
        errors.push(OpError {
            op: "classify".into(),
            message: "example has no generator symbol".into(),
        });
        return;
    };
    if subject.space != Space::Disc {
        errors.push(OpError {
            op: "classify".into(),
            message: "classification applies to disc generators; use `halfplane`".into(),
        });
        return;
    }
    let opts = ClassifyOptions {
        samples: spec.samples,
        tol: spec.tol,
        delta: spec.delta,
        eps: spec.eps,
        ..ClassifyOptions::default()
    };
    let outcome = if let Some(r) = spec.radius {
        genclass::boundary_profile(g, spec.samples, r)
            .and_then(|_| genclass::classify(g, &opts))
    } else {
        genclass::classify(g, &opts)
    };
    match outcome {
        Ok(report) => {
            if let Some(path) = &spec.outputs.profile_csv {
                if let Err(e) = write_atomic(path, &profile_csv(&report)) {
                    errors.push(OpError {
                        op: "classify/profile-csv".into(),
                        message: e.to_string(),
                    });
                }
            }
            results.classification = Some(report);
        }
        Err(e) => errors.push(OpError {
            op: "classify".into(),
            message: e.to_string(),
        }),
    }
}

fn run_flow(spec: &JobSpec, subject: &Subject, results: &mut Results, errors: &mut Vec<OpError>) {
    let Some(g) = subject.generator.as_ref() else {
        errors.push(OpError {
            op: "flow".into(),
            message: "example has no generator symbol".into(),
        });
        return;
    };
    let ts: Vec<f64> = if spec.t.is_empty() {
        vec![0.5]
    } else {
        spec.t.clone()
    };
    let cfg = FlowConfig::default();
    let grid = semiflow::disc_grid(spec.grid.max(2));

    let mut traj_rows: Vec<(Complex64, f64, Complex64)> = Vec::new();
    let mut sup_norms = Vec::new();
    let mut defects = Vec::new();
    let mut closed_dev: Option<f64> = None;

    for &t in &ts {
        match semiflow::sup_norm_flow(g, t.max(1e-6), 256, &cfg) {
            Ok(s) => sup_norms.push((t, s.value, s.failures)),
            Err(e) => errors.push(OpError {
                op: format!("flow/sup-norm t={t}"),
                message: e.to_string(),
            }),
        }
        for &z in &grid {
            match semiflow::flow(g, z, t, &cfg) {
                Ok(w) => traj_rows.push((z, t, w)),
                Err(e) => errors.push(OpError {
                    op: format!("flow t={t} z={z}"),
                    message: e.to_string(),
                }),
            }
        }
    }
    for (i, &s) in ts.iter().enumerate() {
        for &t in &ts[i..] {
            match semiflow::semiflow_defect(g, &grid, s, t, &cfg) {
                Ok(d) => defects.push((s, t, d)),
                Err(e) => errors.push(OpError {
                    op: format!("flow/defect (s,t)=({s},{t})"),
                    message: e.to_string(),
                }),
            }
        }
    }
    if let Some(case) = &subject.case {
        if let Some(closed) = case.closed_form_flow {
            let mut worst = 0.0f64;
            for &(z0, t, w) in &traj_rows {
                worst = worst.max((w - closed(z0, t)).norm());
            }
            closed_dev = Some(worst);
        }
    }
    let dw = semiflow::denjoy_wolff(g, &cfg);
    let (dw_point, dw_boundary) = match dw {
        Ok(d) => (Some(d.point), Some(d.boundary)),
        Err(e) => {
            errors.push(OpError {
                op: "flow/denjoy-wolff".into(),
                message: e.to_string(),
            });
            (None, None)
        }
    };

    if let Some(path) = &spec.outputs.traj_csv {
        if let Err(e) = write_atomic(path, &trajectory_csv(&traj_rows)) {
            errors.push(OpError {
                op: "flow/traj-csv".into(),
                message: e.to_string(),
            });
        }
    }

    results.flow = Some(FlowResults {
        dw_point,
        dw_boundary,
        sup_norms,
        semiflow_defects: defects,
        closed_form_deviation: closed_dev,
        grid_points: grid.len(),
    });
}

/// φ_t evaluator for matrix jobs: closed form when available, ODE otherwise.
fn matrix_phi<'a>(
    subject: &'a Subject,
    t: f64,
) -> impl Fn(Complex64) -> semiflow_lab_core::Result<Complex64> + Sync + 'a {
    let closed = subject.case.as_ref().and_then(|c| c.closed_form_flow);
    move |z| match closed {
        Some(f) => Ok(f(z, t)),
        None => semiflow::flow(
            subject.generator.as_ref().expect("generator present"),
            z,
            t,
            &FlowConfig::tight(),
        ),
    }
}

fn run_matrix(spec: &JobSpec, subject: &Subject, results: &mut Results, errors: &mut Vec<OpError>) {
    // Static map examples (no semiflow) fall through to the static path.
    if subject.generator.is_none() {
        if let Some(case) = &subject.case {
            if let Some(phi) = case.static_map.clone() {
                build_matrix_results(spec, move |z| phi.eval(z), None, None, results, errors);
                return;
            }
        }
        errors.push(OpError {
            op: "matrix".into(),
            message: "no symbol available for matrix assembly".into(),
        });
        return;
    }
    if subject.space != Space::Disc {
        errors.push(OpError {
            op: "matrix".into(),
            message: "matrix truncations are defined on the disc spaces only".into(),
        });
        return;
    }
    let t = spec.t.first().copied().unwrap_or(1.0);
    let phi = matrix_phi(subject, t);
    let gen = subject.generator.clone();
    build_matrix_results(spec, phi, Some(t), gen, results, errors);
}

fn run_matrix_static(spec: &JobSpec, results: &mut Results, errors: &mut Vec<OpError>) {
    let src = spec.phi.as_ref().expect("validated");
    match Expr::parse(src) {
        Ok(phi) => build_matrix_results(spec, move |z| phi.eval(z), None, None, results, errors),
        Err(e) => errors.push(OpError {
            op: "matrix".into(),
            message: format!("invalid self-map: {e}"),
        }),
    }
}

fn build_matrix_results<F>(
    spec: &JobSpec,
    phi: F,
    t: Option<f64>,
    generator: Option<Expr>,
    results: &mut Results,
    errors: &mut Vec<OpError>,
) where
    F: Fn(Complex64) -> semiflow_lab_core::Result<Complex64> + Sync,
{
    let order = spec.order;
    let beta = spec.beta.build(order);
    let r = spec
        .radius
        .unwrap_or_else(|| series::default_sample_radius(order));
    let matrix = match opmatrix::composition_matrix(&phi, beta, r) {
        Ok(m) => m,
        Err(e) => {
            errors.push(OpError {
                op: "matrix/composition".into(),
                message: e.to_string(),
            });
            return;
        }
    };
    let sigma = matrix.singular_values();
    let hs_norm = matrix.hs_norm();
    let char_defect = opmatrix::characterization_defect(&matrix);

    let hs_integral = match spec.beta {
        BetaKind::Hardy => match opmatrix::hs_integral_hardy(&phi, 4096) {
            Ok(h) => Some(h),
            Err(e) => {
                errors.push(OpError {
                    op: "matrix/hs-integral".into(),
                    message: e.to_string(),
                });
                None
            }
        },
        _ => None,
    };
    let trace_class = match opmatrix::trace_class_flag(&phi) {
        Ok(f) => Some(f),
        Err(e) => {
            errors.push(OpError {
                op: "matrix/trace-class".into(),
                message: e.to_string(),
            });
            None
        }
    };

    let expm_block_diff = match (generator.as_ref(), t) {
        (Some(g), Some(t)) => {
            match opmatrix::generator_matrix(g, spec.beta.build(order), r)
                .and_then(|a| opmatrix::expm_compare(&a, t, &matrix, (order + 1) / 2))
            {
                Ok(d) => Some(d),
                Err(e) => {
                    errors.push(OpError {
                        op: "matrix/expm-compare".into(),
                        message: e.to_string(),
                    });
                    None
                }
            }
        }
        _ => None,
    };

    if let Some(path) = &spec.outputs.matrix_csv {
        if let Err(e) = write_atomic(path, &matrix.to_csv()) {
            errors.push(OpError {
                op: "matrix/matrix-csv".into(),
                message: e.to_string(),
            });
        }
    }
    if let Some(path) = &spec.outputs.spectrum_csv {
        if let Err(e) = write_atomic(path, &opmatrix::spectrum_csv(&sigma)) {
            errors.push(OpError {
                op: "matrix/spectrum-csv".into(),
                message: e.to_string(),
            });
        }
    }

    results.matrix = Some(MatrixResults {
        beta: spec.beta.name().to_string(),
        order,
        t,
        entry_error: matrix.entry_error,
        characterization_defect: char_defect,
        sigma_max: sigma.first().copied().unwrap_or(0.0),
        sigma,
        hs_norm,
        hs_norm_sq: hs_norm * hs_norm,
        hs_integral,
        trace_class,
        expm_block_diff,
    });
}

fn run_halfplane(
    spec: &JobSpec,
    subject: &Subject,
    results: &mut Results,
    errors: &mut Vec<OpError>,
) {
    let Some(g) = subject.generator.as_ref() else {
        errors.push(OpError {
            op: "halfplane".into(),
            message: "example has no generator symbol".into(),
        });
        return;
    };
    let ts: Vec<f64> = if spec.t.is_empty() {
        vec![0.5, 1.0]
    } else {
        spec.t.clone()
    };
    match halfplane::analyze(g, &ts) {
        Ok(r) => results.halfplane = Some(r),
        Err(e) => errors.push(OpError {
            op: "halfplane".into(),
            message: e.to_string(),
        }),
    }
}
