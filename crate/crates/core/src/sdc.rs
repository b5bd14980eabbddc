//! Spectral deferred correction on Gauss-Lobatto nodes.
//!
//! A step of size `dt` maps the reference nodes `x_1 < ... < x_M` to
//! `t_n + (x_i + 1) dt / 2`. The prediction is a chain of convex-splitting
//! steps across the subintervals; every correction sweep re-solves
//!
//! ```text
//! c_{i+1} - h_i G_im(c_{i+1}) = c_i + h_i (G_ex(c_i) - G_ex(p_i) - G_im(p_{i+1}))
//!                               + dt/2 sum_j w_ij (G_im(p_j) + G_ex(p_j))
//! ```
//!
//! with `p` the previous iterate and `h_i` the physical subinterval length.
//! The adaptive variant evaluates the convex-concave test after each stage
//! and, when it holds, copies stage `i + 1` over stage `i` and starts the
//! following sweeps at `i`.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::ScalarField;
use crate::model::{LbModel, SourceTerm};
use crate::quadrature::{lobatto_nodes, subinterval_weights, NodeFamily};

/// An ODE `y' = G_im(y) + G_ex(y, t)` on flat real vectors.
pub trait ImexSystem {
    fn exec(&self) -> Exec {
        Exec::Sequential
    }

    /// Solves `y - h G_im(y) = rhs`; returns `y` and `G_im(y)`.
    fn solve_implicit(&mut self, rhs: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)>;

    fn implicit_term(&mut self, y: &[f64]) -> Result<Vec<f64>>;

    fn explicit_term(&mut self, y: &[f64], t: f64) -> Result<Vec<f64>>;
}

/// Systems whose implicit part is minus the gradient of a convex energy.
pub trait ConvexSplit: ImexSystem {
    /// `<-G_im(next) - dE_e(prev), next - prev>`, up to a positive factor.
    fn acceptance_indicator(&mut self, next: &[f64], next_implicit: &[f64], prev: &[f64]) -> Result<f64>;
}

/// `sum_k c_k v_k`, evaluated left to right per element.
fn combine(exec: Exec, len: usize, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = vec![0.0; len];
    exec.fill(&mut out, |i| {
        let mut acc = 0.0;
        for (c, v) in terms {
            acc += c * v[i];
        }
        acc
    });
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdcScheme {
    m: usize,
    k: usize,
    family: NodeFamily,
    nodes: Vec<f64>,
    weights: Vec<Vec<f64>>,
}

impl SdcScheme {
    /// `M >= 2` nodes and `K` correction sweeps.
    pub fn new(m: usize, k: usize, family: NodeFamily) -> Result<Self> {
        let nodes = lobatto_nodes(m, family)?;
        let weights = subinterval_weights(&nodes)?;
        Ok(SdcScheme { m, k, family, nodes, weights })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> NodeFamily {
        self.family
    }

    /// Nodes on `[-1, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weight matrix on `[-1, 1]`, one row per subinterval.
    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn with_corrections(&self, k: usize) -> Self {
        SdcScheme { k, ..self.clone() }
    }

    pub fn node_times(&self, t_n: f64, dt: f64) -> Vec<f64> {
        self.nodes.iter().map(|x| t_n + (x + 1.0) * 0.5 * dt).collect()
    }

    /// Physical subinterval lengths.
    pub fn substeps(&self, dt: f64) -> Vec<f64> {
        self.nodes.windows(2).map(|w| (w[1] - w[0]) * 0.5 * dt).collect()
    }

    fn check_dt(dt: f64) -> Result<()> {
        if dt.is_finite() && dt > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("step size {dt} must be positive")))
        }
    }

    /// Convex-splitting prediction over all subintervals.
    pub fn predict<S: ImexSystem + ?Sized>(&self, sys: &mut S, phi_n: &[f64], t_n: f64, dt: f64) -> Result<StageState> {
        Self::check_dt(dt)?;
        let times = self.node_times(t_n, dt);
        let h = self.substeps(dt);
        let len = phi_n.len();
        let mut state = StageState {
            stages: vec![phi_n.to_vec()],
            g_im: vec![sys.implicit_term(phi_n)?],
            g_ex: vec![sys.explicit_term(phi_n, times[0])?],
            t_n,
            dt,
        };
        for i in 0..self.m - 1 {
            let rhs = combine(sys.exec(), len, &[(1.0, &state.stages[i]), (h[i], &state.g_ex[i])]);
            let (y, g_im) = sys.solve_implicit(&rhs, h[i])?;
            state.g_ex.push(sys.explicit_term(&y, times[i + 1])?);
            state.g_im.push(g_im);
            state.stages.push(y);
        }
        Ok(state)
    }

    /// One correction sweep over subintervals `start..M-1` (0-based).
    pub fn correct_sweep<S: ImexSystem + ?Sized>(&self, sys: &mut S, prev: &StageState, start: usize) -> Result<StageState> {
        self.sweep(sys, prev, start, |_, _, _| Ok(()))
    }

    fn sweep<S, F>(&self, sys: &mut S, prev: &StageState, start: usize, mut after_stage: F) -> Result<StageState>
    where
        S: ImexSystem + ?Sized,
        F: FnMut(&mut S, &mut StageState, usize) -> Result<()>,
    {
        if prev.stages.len() != self.m {
            return Err(Error::InvalidScheme(format!(
                "stage state holds {} stages, scheme has {}",
                prev.stages.len(),
                self.m
            )));
        }
        if start >= self.m - 1 {
            return Err(Error::InvalidScheme(format!("sweep start {start} past the last subinterval")));
        }
        let times = self.node_times(prev.t_n, prev.dt);
        let h = self.substeps(prev.dt);
        let half = 0.5 * prev.dt;
        let len = prev.stages[0].len();
        let mut next = prev.clone();
        for i in start..self.m - 1 {
            let mut terms: Vec<(f64, &[f64])> = Vec::with_capacity(4 + 2 * self.m);
            terms.push((1.0, &next.stages[i]));
            terms.push((h[i], &next.g_ex[i]));
            terms.push((-h[i], &prev.g_ex[i]));
            terms.push((-h[i], &prev.g_im[i + 1]));
            for j in 0..self.m {
                let w = half * self.weights[i][j];
                terms.push((w, &prev.g_im[j]));
                terms.push((w, &prev.g_ex[j]));
            }
            let rhs = combine(sys.exec(), len, &terms);
            let (y, g_im) = sys.solve_implicit(&rhs, h[i])?;
            next.g_ex[i + 1] = sys.explicit_term(&y, times[i + 1])?;
            next.g_im[i + 1] = g_im;
            next.stages[i + 1] = y;
            after_stage(sys, &mut next, i)?;
        }
        Ok(next)
    }

    /// Prediction followed by `K` full sweeps; returns the final stage.
    pub fn step<S: ImexSystem + ?Sized>(&self, sys: &mut S, phi_n: &[f64], t_n: f64, dt: f64) -> Result<Vec<f64>> {
        let mut state = self.predict(sys, phi_n, t_n, dt)?;
        for _ in 0..self.k {
            state = self.correct_sweep(sys, &state, 0)?;
        }
        Ok(state.into_last())
    }

    /// Adaptive step; returns the final stage and the number of correction solves.
    pub fn adaptive_step<S: ConvexSplit + ?Sized>(
        &self,
        sys: &mut S,
        phi_n: &[f64],
        t_n: f64,
        dt: f64,
    ) -> Result<(Vec<f64>, usize)> {
        self.adaptive_step_observed(sys, phi_n, t_n, dt, &mut |_| {})
    }

    /// [`SdcScheme::adaptive_step`] reporting every acceptance test to `observer`.
    pub fn adaptive_step_observed<S: ConvexSplit + ?Sized>(
        &self,
        sys: &mut S,
        phi_n: &[f64],
        t_n: f64,
        dt: f64,
        observer: &mut dyn FnMut(AcceptanceEvent<'_>),
    ) -> Result<(Vec<f64>, usize)> {
        let mut state = self.predict(sys, phi_n, t_n, dt)?;
        let times = self.node_times(t_n, dt);
        let mut start = 0;
        let mut solves = 0;
        for sweep in 0..self.k {
            // The range of this sweep is fixed here; acceptances only move
            // the start of the following sweeps.
            let mut next_start = start;
            state = self.sweep(sys, &state, start, |sys, st, i| {
                solves += 1;
                let indicator = sys.acceptance_indicator(&st.stages[i + 1], &st.g_im[i + 1], &st.stages[i])?;
                let fired = indicator < 0.0;
                observer(AcceptanceEvent {
                    sweep,
                    stage: i,
                    indicator,
                    fired,
                    prev: &st.stages[i],
                    next: &st.stages[i + 1],
                });
                if fired {
                    st.stages[i] = st.stages[i + 1].clone();
                    st.g_im[i] = st.g_im[i + 1].clone();
                    st.g_ex[i] = sys.explicit_term(&st.stages[i], times[i])?;
                    next_start = i;
                }
                Ok(())
            })?;
            start = next_start;
        }
        Ok((state.into_last(), solves))
    }
}

/// One evaluation of the adaptive acceptance test, reported before any overwrite.
#[derive(Debug)]
pub struct AcceptanceEvent<'a> {
    pub sweep: usize,
    /// 0-based index of the left stage of the subinterval.
    pub stage: usize,
    pub indicator: f64,
    pub fired: bool,
    pub prev: &'a [f64],
    pub next: &'a [f64],
}

/// Stage values and the cached split right-hand sides at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct StageState {
    pub stages: Vec<Vec<f64>>,
    pub g_im: Vec<Vec<f64>>,
    pub g_ex: Vec<Vec<f64>>,
    pub t_n: f64,
    pub dt: f64,
}

impl StageState {
    /// `G = G_im + G_ex` at node `i`.
    pub fn g_value(&self, i: usize) -> Vec<f64> {
        self.g_im[i].iter().zip(&self.g_ex[i]).map(|(a, b)| a + b).collect()
    }

    pub fn last(&self) -> &[f64] {
        self.stages.last().expect("at least two stages")
    }

    pub fn into_last(mut self) -> Vec<f64> {
        self.stages.pop().expect("at least two stages")
    }
}

/// The mass-conserving Allen-Cahn flow of the LB energy as an IMEX system:
/// `G_im = -dE_c`, `G_ex = dE_e + beta + src(t)`.
pub struct LbFlow<'a> {
    model: &'a mut LbModel,
    source: Option<&'a dyn SourceTerm>,
}

impl<'a> LbFlow<'a> {
    pub fn new(model: &'a mut LbModel, source: Option<&'a dyn SourceTerm>) -> Self {
        LbFlow { model, source }
    }
}

impl ImexSystem for LbFlow<'_> {
    fn exec(&self) -> Exec {
        self.model.exec()
    }

    fn solve_implicit(&mut self, rhs: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let (phi, mut ec) = self.model.solve_with_operator_raw(rhs, h)?;
        self.model.exec().for_each_chunk(&mut ec, crate::exec::CHUNK, |_, c| {
            for v in c {
                *v = -*v;
            }
        });
        Ok((phi, ec))
    }

    fn implicit_term(&mut self, y: &[f64]) -> Result<Vec<f64>> {
        let mut ec = self.model.delta_ec_raw(y);
        for v in &mut ec {
            *v = -*v;
        }
        Ok(ec)
    }

    fn explicit_term(&mut self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let grid = *self.model.grid();
        let forcing = self.source.map(|s| s.sample(t, &grid));
        let mut out = vec![0.0; y.len()];
        self.model.explicit_term_into(y, forcing.as_ref().map(|f| f.values()), &mut out);
        Ok(out)
    }
}

impl ConvexSplit for LbFlow<'_> {
    fn acceptance_indicator(&mut self, next: &[f64], next_implicit: &[f64], prev: &[f64]) -> Result<f64> {
        Ok(self.model.raw_indicator(next, next_implicit, prev))
    }
}

fn check_field(model: &LbModel, field: &ScalarField) -> Result<()> {
    if field.grid() == model.grid() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Prediction stage values for the LB flow.
pub fn sdc_predict(
    model: &mut LbModel,
    phi_n: &ScalarField,
    scheme: &SdcScheme,
    dt: f64,
    t_n: f64,
    src: Option<&dyn SourceTerm>,
) -> Result<StageState> {
    check_field(model, phi_n)?;
    scheme.predict(&mut LbFlow::new(model, src), phi_n.values(), t_n, dt)
}

/// One correction sweep starting at 0-based subinterval `start`.
pub fn sdc_correct_sweep(
    model: &mut LbModel,
    state: &StageState,
    scheme: &SdcScheme,
    src: Option<&dyn SourceTerm>,
    start: usize,
) -> Result<StageState> {
    if state.stages.iter().any(|s| s.len() != model.grid().len()) {
        return Err(Error::GridMismatch);
    }
    scheme.correct_sweep(&mut LbFlow::new(model, src), state, start)
}

/// `SDC_M^K` step of the LB flow.
pub fn sdc_step(
    model: &mut LbModel,
    phi_n: &ScalarField,
    scheme: &SdcScheme,
    dt: f64,
    t_n: f64,
    src: Option<&dyn SourceTerm>,
) -> Result<ScalarField> {
    check_field(model, phi_n)?;
    let grid = *model.grid();
    let out = scheme.step(&mut LbFlow::new(model, src), phi_n.values(), t_n, dt)?;
    ScalarField::from_values(grid, out)
}

/// `ASDC_M^K` step of the LB flow; also returns the number of correction solves.
pub fn asdc_step(
    model: &mut LbModel,
    phi_n: &ScalarField,
    scheme: &SdcScheme,
    dt: f64,
    t_n: f64,
    src: Option<&dyn SourceTerm>,
) -> Result<(ScalarField, usize)> {
    check_field(model, phi_n)?;
    let grid = *model.grid();
    let (out, solves) = scheme.adaptive_step(&mut LbFlow::new(model, src), phi_n.values(), t_n, dt)?;
    Ok((ScalarField::from_values(grid, out)?, solves))
}
