//! Landau-Brazovskii energy, its convex/concave split and the linear
//! convex-splitting step.
//!
//! The energy on the grid is
//!
//! ```text
//! E(phi) = |Omega|/N^2d sum_k ((1 - 4 pi^2 |Bk|^2)^2 - alpha)/2 |phi_hat(k)|^2
//!        + |Omega|/N^d  sum_x (phi^4/24 - gamma phi^3/6)
//! ```
//!
//! and it splits as `E = E_c - E_e` with
//! `dE_c = (Delta + 1)^2 phi + (S - alpha) phi` (treated implicitly) and
//! `dE_e = S phi - phi^3/6 + gamma phi^2/2` (treated explicitly).

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, ScalarField};
use crate::spectral::{grid_mean_with, swift_hohenberg_symbol, SpectralPlan};

/// Model parameters `alpha`, `gamma` and the stabilizer `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub gamma: f64,
    pub s: f64,
}

impl ModelParams {
    pub const DEFAULT_STABILIZER: f64 = 2.0;

    pub fn new(alpha: f64, gamma: f64, s: f64) -> Result<Self> {
        let p = ModelParams { alpha, gamma, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.gamma.is_finite() && self.s.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameters {self:?}")));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {} must be non-negative", self.gamma)));
        }
        if self.s <= self.alpha {
            return Err(Error::InvalidParams(format!(
                "stabilizer S = {} must exceed alpha = {}",
                self.s, self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    pub total: f64,
    /// Spectral sum over the gradient and quadratic terms.
    pub quadratic_part: f64,
    /// Pointwise quartic and cubic terms.
    pub bulk_part: f64,
    /// Grid mean of the field.
    pub mass: f64,
}

/// Sup-norm bound `C(phi) = sqrt((E(phi) + (9 gamma^4 + 3)|Omega|) / lambda)`
/// for a user supplied embedding constant `lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundDiagnostic {
    pub lambda: f64,
    pub c_of_phi: f64,
}

/// Time-dependent forcing added to the explicit part of the flow.
pub trait SourceTerm: Sync {
    fn sample(&self, t: f64, grid: &Grid) -> ScalarField;
}

impl<F> SourceTerm for F
where
    F: Fn(f64, &Grid) -> ScalarField + Sync,
{
    fn sample(&self, t: f64, grid: &Grid) -> ScalarField {
        self(t, grid)
    }
}

/// The model bound to one grid, with its transform plan and cached symbols.
///
/// Not meant for concurrent use; build one per worker thread.
#[derive(Debug)]
pub struct LbModel {
    params: ModelParams,
    plan: SpectralPlan,
    /// `(1 - 4 pi^2 |Bk|^2)^2` per mode.
    sh: Vec<f64>,
    min_sh: f64,
    spec: Vec<Complex64>,
}

impl LbModel {
    pub fn new(grid: Grid, params: ModelParams) -> Result<Self> {
        Self::with_exec(grid, params, Exec::default())
    }

    pub fn with_exec(grid: Grid, params: ModelParams, exec: Exec) -> Result<Self> {
        params.validate()?;
        let plan = SpectralPlan::with_exec(grid, exec);
        let mut sh = vec![0.0; grid.len()];
        let k2 = plan.k_squared();
        exec.fill(&mut sh, |i| swift_hohenberg_symbol(k2[i]));
        let min_sh = sh.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(LbModel { params, plan, sh, min_sh, spec: Vec::new() })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        self.plan.grid()
    }

    pub fn exec(&self) -> Exec {
        self.plan.exec()
    }

    pub fn plan_mut(&mut self) -> &mut SpectralPlan {
        &mut self.plan
    }

    fn check(&self, field: &ScalarField) -> Result<()> {
        if field.grid() == self.grid() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn with_spectrum<T>(&mut self, values: &[f64], f: impl FnOnce(&mut Self, &[Complex64]) -> T) -> T {
        let mut spec = std::mem::take(&mut self.spec);
        self.plan.forward_raw(values, &mut spec);
        let out = f(self, &spec);
        self.spec = spec;
        out
    }

    /// Discrete LB energy. Independent of `S`.
    pub fn energy(&mut self, field: &ScalarField) -> Result<EnergyReport> {
        self.check(field)?;
        let grid = *self.grid();
        let exec = self.exec();
        let alpha = self.params.alpha;
        let gamma = self.params.gamma;
        let n_total = grid.len() as f64;
        let quadratic_part = self.with_spectrum(field.values(), |m, spec| {
            let sh = &m.sh;
            let sum = exec.sum(spec.len(), |i| 0.5 * (sh[i] - alpha) * spec[i].norm_sqr());
            grid.volume() / (n_total * n_total) * sum
        });
        let v = field.values();
        let bulk_part = grid.cell_volume()
            * exec.sum(v.len(), |i| {
                let p = v[i];
                let p3 = p * p * p;
                p3 * p / 24.0 - gamma * p3 / 6.0
            });
        Ok(EnergyReport {
            total: quadratic_part + bulk_part,
            quadratic_part,
            bulk_part,
            mass: grid_mean_with(exec, field),
        })
    }

    /// `dE/dphi = (Delta + 1)^2 phi - alpha phi + phi^3/6 - gamma phi^2/2`.
    pub fn variational_derivative(&mut self, field: &ScalarField) -> Result<ScalarField> {
        self.check(field)?;
        let alpha = self.params.alpha;
        let mut linear = self.with_spectrum(field.values(), |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_from_fn(|i| spec[i] * (sh[i] - alpha))
        })?;
        let gamma = self.params.gamma;
        let v = field.values();
        let exec = self.exec();
        let lin = linear.values().to_vec();
        exec.fill(linear.values_mut(), |i| {
            let p = v[i];
            lin[i] + p * p * p / 6.0 - gamma * p * p / 2.0
        });
        Ok(linear)
    }

    /// Contractive part `(Delta + 1)^2 phi + (S - alpha) phi`.
    pub fn delta_ec(&mut self, field: &ScalarField) -> Result<ScalarField> {
        self.check(field)?;
        let shift = self.params.s - self.params.alpha;
        self.with_spectrum(field.values(), |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_from_fn(|i| spec[i] * (sh[i] + shift))
        })
    }

    /// Expansive part `S phi - phi^3/6 + gamma phi^2/2`.
    pub fn delta_ee(&self, field: &ScalarField) -> Result<ScalarField> {
        self.check(field)?;
        let mut out = ScalarField::zeros(*self.grid());
        self.delta_ee_into(field.values(), out.values_mut());
        Ok(out)
    }

    fn delta_ee_into(&self, v: &[f64], out: &mut [f64]) {
        let ModelParams { gamma, s, .. } = self.params;
        self.exec().fill(out, |i| {
            let p = v[i];
            s * p - p * p * p / 6.0 + gamma * p * p / 2.0
        });
    }

    /// Mass Lagrange multiplier, the grid mean of
    /// `(1 - alpha) phi + phi^3/6 - gamma phi^2/2`.
    pub fn beta(&self, field: &ScalarField) -> f64 {
        self.beta_raw(field.values())
    }

    fn beta_raw(&self, v: &[f64]) -> f64 {
        let ModelParams { alpha, gamma, .. } = self.params;
        let sum = self.exec().sum(v.len(), |i| {
            let p = v[i];
            (1.0 - alpha) * p + p * p * p / 6.0 - gamma * p * p / 2.0
        });
        sum / v.len() as f64
    }

    fn check_step(&self, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(format!("step size {dt} must be positive")));
        }
        let shift = self.params.s - self.params.alpha;
        if 1.0 + dt * (self.min_sh + shift) <= 0.0 {
            let (index, value) = self
                .sh
                .iter()
                .map(|&v| 1.0 + dt * (v + shift))
                .enumerate()
                .find(|&(_, d)| d <= 0.0)
                .expect("minimum symbol is attained");
            return Err(Error::SingularSymbol { index, value });
        }
        Ok(())
    }

    /// Solves `(I + dt ((Delta + 1)^2 + S - alpha)) phi = rhs` mode by mode.
    pub fn implicit_solve(&mut self, rhs: &ScalarField, dt: f64) -> Result<ScalarField> {
        self.check(rhs)?;
        self.check_step(dt)?;
        let shift = self.params.s - self.params.alpha;
        self.with_spectrum(rhs.values(), |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_from_fn(|i| spec[i] / (1.0 + dt * (sh[i] + shift)))
        })
    }

    /// Like [`LbModel::implicit_solve`] but also returns `dE_c(phi)` of the
    /// solution, obtained from the same transform.
    pub fn implicit_solve_with_operator(&mut self, rhs: &ScalarField, dt: f64) -> Result<(ScalarField, ScalarField)> {
        self.check(rhs)?;
        self.check_step(dt)?;
        let grid = *self.grid();
        let (phi, ec) = self.solve_raw(rhs.values(), dt);
        Ok((ScalarField::from_raw(grid, phi), ScalarField::from_raw(grid, ec)))
    }

    fn solve_raw(&mut self, rhs: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
        let shift = self.params.s - self.params.alpha;
        self.with_spectrum(rhs, |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_pair(|i| {
                let sigma = sh[i] + shift;
                let y = spec[i] / (1.0 + dt * sigma);
                (y, y * sigma)
            })
        })
    }

    /// Explicit right-hand side `phi + dt (dE_e(phi) + beta(phi) + src)`.
    fn explicit_rhs(&self, phi: &[f64], dt: f64, src: Option<&[f64]>) -> Vec<f64> {
        let mut g = vec![0.0; phi.len()];
        self.explicit_term_raw(phi, src, &mut g);
        let mut rhs = vec![0.0; phi.len()];
        self.exec().fill(&mut rhs, |i| phi[i] + dt * g[i]);
        rhs
    }

    /// `G_ex = dE_e(phi) + beta(phi) (+ src)`.
    fn explicit_term_raw(&self, phi: &[f64], src: Option<&[f64]>, out: &mut [f64]) {
        let beta = self.beta_raw(phi);
        let ModelParams { gamma, s, .. } = self.params;
        let exec = self.exec();
        match src {
            Some(src) => exec.fill(out, |i| {
                let p = phi[i];
                s * p - p * p * p / 6.0 + gamma * p * p / 2.0 + beta + src[i]
            }),
            None => exec.fill(out, |i| {
                let p = phi[i];
                s * p - p * p * p / 6.0 + gamma * p * p / 2.0 + beta
            }),
        }
    }

    /// One linear convex-splitting step of size `dt` from time `t_n`.
    pub fn cs_step(
        &mut self,
        phi_n: &ScalarField,
        dt: f64,
        src: Option<&dyn SourceTerm>,
        t_n: f64,
    ) -> Result<ScalarField> {
        self.check(phi_n)?;
        self.check_step(dt)?;
        let grid = *self.grid();
        let forcing = src.map(|s| s.sample(t_n, &grid));
        let rhs = self.explicit_rhs(phi_n.values(), dt, forcing.as_ref().map(|f| f.values()));
        let shift = self.params.s - self.params.alpha;
        self.with_spectrum(&rhs, |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_from_fn(|i| spec[i] / (1.0 + dt * (sh[i] + shift)))
        })
    }

    /// Sup-norm bound diagnostic for a given embedding constant `lambda > 0`.
    pub fn uc_bound(&mut self, field: &ScalarField, lambda: f64) -> Result<BoundDiagnostic> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParams(format!("lambda = {lambda} must be positive")));
        }
        let e = self.energy(field)?.total;
        let g = self.params.gamma;
        let radicand = e + (9.0 * g.powi(4) + 3.0) * self.grid().volume();
        if radicand < 0.0 {
            return Err(Error::NegativeRadicand(radicand));
        }
        Ok(BoundDiagnostic { lambda, c_of_phi: (radicand / lambda).sqrt() })
    }

    /// Convex-concave indicator `<dE_c(next) - dE_e(prev), next - prev>`;
    /// a negative value guarantees `E(next) <= E(prev)`.
    pub fn splitting_indicator(&self, next: &ScalarField, ec_next: &ScalarField, prev: &ScalarField) -> Result<f64> {
        self.check(next)?;
        self.check(ec_next)?;
        self.check(prev)?;
        let mut ee = ScalarField::zeros(*self.grid());
        self.delta_ee_into(prev.values(), ee.values_mut());
        let (a, b, c, d) = (ec_next.values(), ee.values(), next.values(), prev.values());
        let exec = self.exec();
        let sum = exec.sum(a.len(), |i| (a[i] - b[i]) * (c[i] - d[i]));
        Ok(self.grid().cell_volume() * sum)
    }

    pub(crate) fn solve_with_operator_raw(&mut self, rhs: &[f64], dt: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_step(dt)?;
        Ok(self.solve_raw(rhs, dt))
    }

    pub(crate) fn explicit_term_into(&self, phi: &[f64], src: Option<&[f64]>, out: &mut [f64]) {
        self.explicit_term_raw(phi, src, out)
    }

    pub(crate) fn delta_ec_raw(&mut self, phi: &[f64]) -> Vec<f64> {
        let shift = self.params.s - self.params.alpha;
        // dE_c is real; pair it with a zero spectrum to reuse the packed inverse.
        let (ec, _) = self.with_spectrum(phi, |m, spec| {
            let sh = &m.sh;
            m.plan.inverse_pair(|i| (spec[i] * (sh[i] + shift), Complex64::new(0.0, 0.0)))
        });
        ec
    }

    /// Indicator with `dE_c(next)` given as its negative, `-G_im(next)`.
    pub(crate) fn raw_indicator(&self, next: &[f64], neg_ec_next: &[f64], prev: &[f64]) -> f64 {
        let ModelParams { gamma, s, .. } = self.params;
        let sum = self.exec().sum(next.len(), |i| {
            let p = prev[i];
            let ee = s * p - p * p * p / 6.0 + gamma * p * p / 2.0;
            (-neg_ec_next[i] - ee) * (next[i] - p)
        });
        self.grid().cell_volume() * sum
    }

    #[cfg(test)]
    fn inner_product(&self, u: &ScalarField, v: &ScalarField) -> Result<f64> {
        crate::spectral::grid_inner_product_with(self.exec(), u, v)
    }
}
