//! Fourier pseudo-spectral solver for the Allen-Cahn flow of the
//! Landau-Brazovskii energy with convex-splitting and (adaptive) spectral
//! deferred correction time stepping.

pub mod error;
pub mod exec;
pub mod experiment;
pub mod grid;
pub mod model;
pub mod phases;
pub mod quadrature;
pub mod relax;
pub mod sdc;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Exec;
pub use grid::{Grid, ScalarField, Spectrum};
pub use model::{BoundDiagnostic, EnergyReport, LbModel, ModelParams, SourceTerm};
pub use phases::{make_2d_phase, make_cubic_phase, CubicPhaseSpec, ManufacturedCase, Phase, TwoDPhase, TwoDPhaseSpec};
pub use quadrature::NodeFamily;
pub use relax::{relax, IterationRecord, RunLog, RunSummary, StopMode, StopRule};
pub use sdc::{asdc_step, sdc_correct_sweep, sdc_predict, sdc_step, SdcScheme, StageState};
pub use spectral::SpectralPlan;
