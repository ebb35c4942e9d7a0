//! Complex to SVG in one call, shared by the command line and the service.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{Complex, ValidationReport};
use crate::motif::{assemble, Design, MotifError, MotifParams};
use crate::packing::{pack, Packing, PackingError};
use crate::patch::{
    build_patch, optimize_tau, Patch, PatchError, PatchParams, TauCurve, TauMode, TauSweep,
};
use crate::render::{emit_svg, RenderError, Scene, StyleConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignParams {
    pub tau: f64,
    pub tau_mode: TauMode,
    /// Replace `tau` by the minimiser of the mean filler CSM over `sweep`.
    pub optimize_tau: bool,
    pub sweep: TauSweep,
    pub motif: MotifParams,
    pub style: StyleConfig,
}

impl Default for DesignParams {
    fn default() -> Self {
        Self {
            tau: 0.8,
            tau_mode: TauMode::Scale,
            optimize_tau: false,
            sweep: TauSweep::default(),
            motif: MotifParams::default(),
            style: StyleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid complex:\n{0}")]
    InvalidComplex(ValidationReport),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// The solver or layout failed to reach its tolerance.
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Failed(String),
}

impl PipelineError {
    /// Process exit status: 1 for bad input, 2 for numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Numeric(_) => 2,
            _ => 1,
        }
    }

    pub fn report(&self) -> Option<&ValidationReport> {
        match self {
            PipelineError::InvalidComplex(r) => Some(r),
            _ => None,
        }
    }
}

impl From<PackingError> for PipelineError {
    fn from(e: PackingError) -> Self {
        match e {
            PackingError::InvalidComplex(r) => PipelineError::InvalidComplex(r),
            PackingError::InvalidConfig(m) => PipelineError::InvalidParams(m),
            e
            @ (PackingError::NonConvergence { .. } | PackingError::LayoutInconsistency { .. }) => {
                PipelineError::Numeric(e.to_string())
            }
            e => PipelineError::Failed(e.to_string()),
        }
    }
}

impl From<PatchError> for PipelineError {
    fn from(e: PatchError) -> Self {
        match e {
            PatchError::InvalidComplex(r) => PipelineError::InvalidComplex(r),
            e @ PatchError::InvalidTau(_) => PipelineError::InvalidParams(e.to_string()),
            e => PipelineError::Failed(e.to_string()),
        }
    }
}

impl From<MotifError> for PipelineError {
    fn from(e: MotifError) -> Self {
        match e {
            MotifError::InvalidComplex(r) => PipelineError::InvalidComplex(r),
            e @ (MotifError::InvalidTheta(_) | MotifError::InvalidAlpha(_)) => {
                PipelineError::InvalidParams(e.to_string())
            }
            e => PipelineError::Failed(e.to_string()),
        }
    }
}

impl From<RenderError> for PipelineError {
    fn from(e: RenderError) -> Self {
        match e {
            e @ RenderError::InvalidStyle(_) => PipelineError::InvalidParams(e.to_string()),
            e => PipelineError::Failed(e.to_string()),
        }
    }
}

/// JSON form of a validation report.
pub fn report_json(report: &ValidationReport) -> Value {
    Value::Array(
        report
            .violations
            .iter()
            .map(|v| {
                json!({
                    "kind": format!("{:?}", v.kind),
                    "location": v.location.to_string(),
                    "message": v.message,
                })
            })
            .collect(),
    )
}

fn check(complex: &Complex) -> Result<(), PipelineError> {
    complex
        .structure()
        .map(|_| ())
        .map_err(PipelineError::InvalidComplex)
}

pub fn run_pack(complex: &Complex) -> Result<Packing<f64>, PipelineError> {
    check(complex)?;
    Ok(pack::<f64>(complex)?)
}

/// The τ actually used, with the sweep when it was optimised.
pub fn choose_tau(
    packing: &Packing<f64>,
    complex: &Complex,
    params: &DesignParams,
) -> Result<(f64, Option<TauCurve>), PipelineError> {
    if !params.optimize_tau {
        return Ok((params.tau, None));
    }
    let curve = optimize_tau(packing, complex, &params.sweep, params.tau_mode)?;
    Ok((curve.best_tau, Some(curve)))
}

pub fn tau_sweep(
    complex: &Complex,
    sweep: &TauSweep,
    mode: TauMode,
) -> Result<TauCurve, PipelineError> {
    let packing = run_pack(complex)?;
    Ok(optimize_tau(&packing, complex, sweep, mode)?)
}

/// Every stage of a run except the SVG.
#[derive(Debug, Clone, PartialEq)]
pub struct Stages {
    pub packing: Packing<f64>,
    pub patch: Patch<f64>,
    pub design: Design<f64>,
    pub tau: f64,
    pub tau_curve: Option<TauCurve>,
}

impl Stages {
    pub fn scene(&self) -> Scene<'_, f64> {
        Scene {
            packing: Some(&self.packing),
            patch: Some(&self.patch),
            design: Some(&self.design),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub stages: Stages,
    pub svg: String,
}

impl PipelineOutput {
    pub fn to_json(&self) -> Value {
        let s = &self.stages;
        let mut v = json!({
            "tau": s.tau,
            "packing": s.packing.dump(),
            "patch": s.patch.dump(),
            "design": s.design.dump(),
            "svg": self.svg,
        });
        if let Some(c) = &s.tau_curve {
            v["tau_curve"] = serde_json::to_value(c).expect("curve serializes");
        }
        v
    }
}

/// Packing, τ choice and patch.
pub fn run_patch(
    complex: &Complex,
    params: &DesignParams,
) -> Result<(Packing<f64>, Patch<f64>, f64, Option<TauCurve>), PipelineError> {
    let packing = run_pack(complex)?;
    let (tau, tau_curve) = choose_tau(&packing, complex, params)?;
    let patch = build_patch(
        &packing,
        complex,
        &PatchParams {
            tau,
            tau_mode: params.tau_mode,
        },
    )?;
    Ok((packing, patch, tau, tau_curve))
}

pub fn run_design(complex: &Complex, params: &DesignParams) -> Result<Stages, PipelineError> {
    let (packing, patch, tau, tau_curve) = run_patch(complex, params)?;
    let design = assemble(&patch, &packing, complex, &params.motif)?;
    Ok(Stages {
        packing,
        patch,
        design,
        tau,
        tau_curve,
    })
}

/// Packing, patch, design and SVG for `complex`.
pub fn run(complex: &Complex, params: &DesignParams) -> Result<PipelineOutput, PipelineError> {
    let stages = run_design(complex, params)?;
    let svg = emit_svg(&stages.scene(), &params.style)?;
    Ok(PipelineOutput { stages, svg })
}
