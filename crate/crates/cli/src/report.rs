//! Report envelope and file output.
//!
//! Reports are JSON with a versioned schema. All numeric content is
//! deterministic for a fixed job and tool version; wall-clock data lives
//! only in the `timing` block. Files are written atomically (temp + rename).

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use semiflow_lab_core::genclass::ClassificationReport;
use semiflow_lab_core::halfplane::HalfPlaneReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct OpError {
    pub op: String,
    pub message: String,
}

#[derive(Debug, Serialize, Default)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowResults>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixResults>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halfplane: Option<HalfPlaneReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examples: Option<Vec<ExampleInfo>>,
}

#[derive(Debug, Serialize)]
pub struct ExampleInfo {
    pub name: String,
    pub summary: String,
    pub space: String,
    pub generator: Option<String>,
    pub static_map: Option<String>,
    pub has_closed_form_flow: bool,
}

#[derive(Debug, Serialize)]
pub struct FlowResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dw_point: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dw_boundary: Option<bool>,
    /// `(t, estimated sup-norm, excluded flow failures)`.
    pub sup_norms: Vec<(f64, f64, usize)>,
    /// `(s, t, max deviation of φ_{s+t} from φ_s∘φ_t)`.
    pub semiflow_defects: Vec<(f64, f64, f64)>,
    /// Max deviation of the integrated flow from the closed form, when the
    /// example carries one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_deviation: Option<f64>,
    pub grid_points: usize,
}

#[derive(Debug, Serialize)]
pub struct MatrixResults {
    pub beta: String,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub entry_error: f64,
    pub characterization_defect: f64,
    pub sigma: Vec<f64>,
    pub sigma_max: f64,
    pub hs_norm: f64,
    pub hs_norm_sq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hs_integral: Option<semiflow_lab_core::opmatrix::HsIntegral>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_class: Option<bool>,
    /// Max leading-block difference between `exp(tA)` and the flow matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expm_block_diff: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub sign_tol: f64,
    pub sector_resolution: f64,
    pub flow_abs_tol: f64,
    pub flow_rel_tol: f64,
    pub profile_samples: usize,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub total_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub job: Value,
    pub results: Results,
    pub errors: Vec<OpError>,
    pub provenance: Provenance,
    pub timing: Timing,
}

/// Atomic write: stage in a sibling temp file, then rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}tmp",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Profile CSV: `theta,re,im` rows.
pub fn profile_csv(report: &ClassificationReport) -> String {
    let mut out = String::from("theta,re,im\n");
    for (theta, v) in report.profile.thetas.iter().zip(&report.profile.values) {
        out.push_str(&format!("{theta},{},{}\n", v.re, v.im));
    }
    out
}

/// Trajectory CSV: `z0_re,z0_im,t,w_re,w_im` rows.
pub fn trajectory_csv(rows: &[(Complex64, f64, Complex64)]) -> String {
    let mut out = String::from("z0_re,z0_im,t,w_re,w_im\n");
    for (z0, t, w) in rows {
        out.push_str(&format!("{},{},{t},{},{}\n", z0.re, z0.im, w.re, w.im));
    }
    out
}
