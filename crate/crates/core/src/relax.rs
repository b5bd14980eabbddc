//! Outer relaxation loop towards a stationary state.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::model::LbModel;
use crate::sdc::{asdc_step, sdc_step, SdcScheme};

/// Largest `|mean(phi_0)|` accepted as a zero-mass start.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopMode {
    /// `E - E_ref <= eps`.
    ReferenceGap,
    /// `|E_prev - E| <= eps`.
    EnergyIncrement,
    /// Run exactly `max_iters` steps.
    MaxIters,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopRule {
    pub mode: StopMode,
    pub epsilon: f64,
    pub e_ref: Option<f64>,
    pub max_iters: usize,
}

impl StopRule {
    pub fn reference_gap(e_ref: f64, epsilon: f64, max_iters: usize) -> Self {
        StopRule { mode: StopMode::ReferenceGap, epsilon, e_ref: Some(e_ref), max_iters }
    }

    pub fn energy_increment(epsilon: f64, max_iters: usize) -> Self {
        StopRule { mode: StopMode::EnergyIncrement, epsilon, e_ref: None, max_iters }
    }

    pub fn max_iters(max_iters: usize) -> Self {
        StopRule { mode: StopMode::MaxIters, epsilon: 1.0, e_ref: None, max_iters }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance {} must be positive", self.epsilon)));
        }
        if self.mode == StopMode::ReferenceGap && !self.e_ref.is_some_and(f64::is_finite) {
            return Err(Error::InvalidParams("reference-gap stopping needs a finite reference energy".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub t: f64,
    pub energy: f64,
    /// `E - E_ref`, when a reference is known.
    pub gap: Option<f64>,
    pub mass: f64,
    /// Correction solves spent on this step.
    pub corrections: usize,
    /// Cumulative seconds since the start of the run.
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunLog {
    /// Record 0 describes the initial field.
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSummary {
    pub iterations: usize,
    /// Average correction solves per step.
    pub mean_corrections: f64,
    pub final_energy: f64,
    pub final_gap: Option<f64>,
    pub wall_seconds: f64,
    pub converged: bool,
}

impl RunLog {
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn summary(&self) -> RunSummary {
        let last = self.records.last().expect("log holds the initial record");
        let steps = &self.records[1..];
        let mean_corrections = if steps.is_empty() {
            0.0
        } else {
            steps.iter().map(|r| r.corrections as f64).sum::<f64>() / steps.len() as f64
        };
        RunSummary {
            iterations: self.iterations(),
            mean_corrections,
            final_energy: last.energy,
            final_gap: last.gap,
            wall_seconds: last.wall_seconds,
            converged: self.converged,
        }
    }
}

/// Steps `phi_0` with `SDC_M^K` (or `ASDC_M^K` if `adaptive`) until `stop`
/// holds. A run that exhausts `max_iters` first still returns its field and
/// log, with `converged = false`.
pub fn relax(
    model: &mut LbModel,
    phi_0: &ScalarField,
    scheme: &SdcScheme,
    dt: f64,
    stop: &StopRule,
    adaptive: bool,
) -> Result<(ScalarField, RunLog)> {
    relax_observed(model, phi_0, scheme, dt, stop, adaptive, |_| {})
}

/// [`relax`] calling `on_record` after every logged record.
pub fn relax_observed(
    model: &mut LbModel,
    phi_0: &ScalarField,
    scheme: &SdcScheme,
    dt: f64,
    stop: &StopRule,
    adaptive: bool,
    mut on_record: impl FnMut(&IterationRecord),
) -> Result<(ScalarField, RunLog)> {
    stop.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!("step size {dt} must be positive")));
    }
    let clock = Instant::now();
    let first = model.energy(phi_0)?;
    if first.mass.abs() > MASS_TOL {
        return Err(Error::MassConstraint(first.mass));
    }
    let gap_of = |e: f64| stop.e_ref.map(|r| e - r);
    let rec0 = IterationRecord {
        iter: 0,
        t: 0.0,
        energy: first.total,
        gap: gap_of(first.total),
        mass: first.mass,
        corrections: 0,
        wall_seconds: clock.elapsed().as_secs_f64(),
    };
    on_record(&rec0);
    let mut log = RunLog { records: vec![rec0], converged: false };
    let reached = |prev: f64, rec: &IterationRecord| match stop.mode {
        StopMode::ReferenceGap => rec.gap.is_some_and(|g| g <= stop.epsilon),
        StopMode::EnergyIncrement => rec.iter > 0 && (prev - rec.energy).abs() <= stop.epsilon,
        StopMode::MaxIters => false,
    };
    if reached(f64::NAN, &log.records[0]) {
        log.converged = true;
        return Ok((phi_0.clone(), log));
    }
    let mut phi = phi_0.clone();
    for iter in 1..=stop.max_iters {
        let t_n = (iter - 1) as f64 * dt;
        let (next, corrections) = if adaptive {
            asdc_step(model, &phi, scheme, dt, t_n, None)?
        } else {
            (sdc_step(model, &phi, scheme, dt, t_n, None)?, scheme.k() * (scheme.m() - 1))
        };
        phi = next;
        let e = model.energy(&phi)?;
        let prev = log.records.last().expect("non-empty").energy;
        let rec = IterationRecord {
            iter,
            t: iter as f64 * dt,
            energy: e.total,
            gap: gap_of(e.total),
            mass: e.mass,
            corrections,
            wall_seconds: clock.elapsed().as_secs_f64(),
        };
        on_record(&rec);
        let done = reached(prev, &rec);
        log.records.push(rec);
        if done {
            log.converged = true;
            return Ok((phi, log));
        }
    }
    log.converged = stop.mode == StopMode::MaxIters;
    Ok((phi, log))
}
