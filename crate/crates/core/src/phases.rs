//! Initial conditions: 2D lamellar and cylindrical seeds, 3D cubic Fourier
//! seeds, and a manufactured solution with its forcing term.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, Spectrum};
use crate::model::{ModelParams, SourceTerm};
use crate::spectral::SpectralPlan;

const PERIODICITY_TOL: f64 = 1e-9;

/// Every named seed the crate can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Lamellar,
    Cylindrical,
    A15,
    Bcc,
    Fcc,
    Gyroid,
}

impl Phase {
    pub const ALL: [Phase; 6] = [Phase::Lamellar, Phase::Cylindrical, Phase::A15, Phase::Bcc, Phase::Fcc, Phase::Gyroid];

    pub fn dim(self) -> usize {
        match self {
            Phase::Lamellar | Phase::Cylindrical => 2,
            _ => 3,
        }
    }

    /// Converged energy of the stationary state at the default parameters.
    pub fn reference_energy(self) -> f64 {
        match self {
            Phase::Lamellar => -16.532074091947,
            Phase::Cylindrical => -17.324103376071,
            Phase::A15 => -57.4752889933902,
            Phase::Bcc => -14.4932738221454,
            Phase::Fcc => -209.6360921245683,
            Phase::Gyroid => -162.0665004168457,
        }
    }

    /// Default `(alpha, gamma)`.
    pub fn default_params(self) -> (f64, f64) {
        match self {
            Phase::Lamellar | Phase::Cylindrical => (0.15, 0.25),
            Phase::A15 | Phase::Bcc => (0.0, 1.23),
            Phase::Fcc => (0.0, 2.0),
            Phase::Gyroid => (0.47, 0.46),
        }
    }

    /// Box lengths of the default computational cell.
    pub fn default_box(self) -> Vec<f64> {
        match self {
            Phase::Lamellar | Phase::Cylindrical => two_d_box().to_vec(),
            _ => vec![cubic_edge(self); 3],
        }
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lamellar" | "lam" => Ok(Phase::Lamellar),
            "cylindrical" | "cyl" => Ok(Phase::Cylindrical),
            "a15" => Ok(Phase::A15),
            "bcc" => Ok(Phase::Bcc),
            "fcc" => Ok(Phase::Fcc),
            "gyr" | "gyroid" => Ok(Phase::Gyroid),
            _ => Err(Error::Config(format!("unknown phase {s:?}"))),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Lamellar => "lamellar",
            Phase::Cylindrical => "cylindrical",
            Phase::A15 => "a15",
            Phase::Bcc => "bcc",
            Phase::Fcc => "fcc",
            Phase::Gyroid => "gyr",
        })
    }
}

/// `[0, 16 pi / sqrt 3] x [0, 8 pi]`.
pub fn two_d_box() -> [f64; 2] {
    [16.0 * PI / 3f64.sqrt(), 8.0 * PI]
}

fn cubic_edge(phase: Phase) -> f64 {
    let r: f64 = match phase {
        Phase::A15 => 5.0,
        Phase::Bcc => 2.0,
        Phase::Fcc => 3.0,
        Phase::Gyroid => 6.0,
        _ => unreachable!("2D phase has no cubic cell"),
    };
    2.0 * r.sqrt() * PI
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoDPhase {
    Lamellar,
    Cylindrical,
}

/// `phi(x) = 2 a1 cos(G1.x) + 2 a2 (cos(G2.x) + cos(G3.x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoDPhaseSpec {
    pub kind: TwoDPhase,
    pub alpha: f64,
    pub gamma: f64,
    pub g: [[f64; 2]; 3],
    pub a1: f64,
    pub a2: f64,
}

impl TwoDPhaseSpec {
    pub fn new(kind: TwoDPhase, alpha: f64, gamma: f64) -> Result<Self> {
        let h = 3f64.sqrt() / 2.0;
        let g = [[0.0, 1.0], [-h, 0.5], [-h, -0.5]];
        let (a1, a2) = match kind {
            TwoDPhase::Lamellar => {
                if alpha < 0.0 {
                    return Err(Error::InvalidParams(format!("lamellar seed needs alpha >= 0, got {alpha}")));
                }
                ((2.0 * alpha).sqrt(), 0.0)
            }
            TwoDPhase::Cylindrical => {
                let disc = gamma * gamma + 10.0 * alpha;
                if disc < 0.0 {
                    return Err(Error::InvalidParams(format!("cylindrical seed: gamma^2 + 10 alpha = {disc} < 0")));
                }
                let a = (gamma + disc.sqrt()) / 5.0;
                (a, a)
            }
        };
        Ok(TwoDPhaseSpec { kind, alpha, gamma, g, a1, a2 })
    }
}

/// Samples a 2D seed; every `G_i` must be periodic on the box.
pub fn make_2d_phase(grid: &Grid, spec: &TwoDPhaseSpec) -> Result<ScalarField> {
    if grid.dim() != 2 {
        return Err(Error::InvalidGrid(format!("2D seed on a {}-dimensional grid", grid.dim())));
    }
    for (index, gv) in spec.g.iter().enumerate() {
        for (j, &l) in grid.lengths().iter().enumerate() {
            let turns = gv[j] * l / (2.0 * PI);
            let offset = turns - turns.round();
            if offset.abs() > PERIODICITY_TOL {
                return Err(Error::NonPeriodicWavevector { index, offset });
            }
        }
    }
    let [g1, g2, g3] = spec.g;
    let dot = |g: [f64; 2], x: [f64; 3]| g[0] * x[0] + g[1] * x[1];
    Ok(ScalarField::from_fn(*grid, |x| {
        2.0 * spec.a1 * dot(g1, x).cos() + 2.0 * spec.a2 * (dot(g2, x).cos() + dot(g3, x).cos())
    }))
}

/// One lattice point of a cubic seed with the sign of its coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub k: [i64; 3],
    pub negative: bool,
}

/// Parses entries like `(±2,±1,0)` or `(1,2,-1)o`, separated by commas or
/// whitespace. `±` (or `+-`) expands to both signs; a trailing `o` flips
/// the sign of the coefficient.
pub fn parse_lattice(text: &str) -> Result<Vec<LatticePoint>> {
    let bad = |msg: &str| Error::Config(format!("lattice {text:?}: {msg}"));
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
        let comps: Vec<&str> = body[..close].split(',').map(str::trim).collect();
        if comps.len() != 3 {
            return Err(bad("entries need three components"));
        }
        rest = &body[close + 1..];
        let negative = rest.starts_with(['o', '^']);
        if negative {
            rest = rest.trim_start_matches(['^', 'o']);
        }
        let mut choices: Vec<Vec<i64>> = Vec::with_capacity(3);
        for c in comps {
            let (both, digits) = match c.strip_prefix('±').or_else(|| c.strip_prefix("+-")) {
                Some(d) => (true, d),
                None => (false, c),
            };
            let v: i64 = digits.parse().map_err(|_| bad("bad integer"))?;
            choices.push(if both && v != 0 { vec![v, -v] } else { vec![v] });
        }
        for &a in &choices[0] {
            for &b in &choices[1] {
                for &c in &choices[2] {
                    out.push(LatticePoint { k: [a, b, c], negative });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GyroidLattice {
    /// The table as printed; `(-2,1,1)` appears with both signs.
    Printed,
    /// The last sign-flipped entry replaced by `(2,1,-1)`.
    Corrected,
}

/// Fourier seed on the cube `[0, a]^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicPhaseSpec {
    pub phase: Phase,
    pub edge: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub lattice: Vec<LatticePoint>,
    pub amplitude: f64,
}

impl CubicPhaseSpec {
    pub const DEFAULT_AMPLITUDE: f64 = 0.3;

    /// Tabulated seed for a cubic phase; the gyroid uses the printed lattice.
    pub fn table(phase: Phase) -> Result<Self> {
        Self::table_with(phase, GyroidLattice::Printed)
    }

    pub fn table_with(phase: Phase, gyroid: GyroidLattice) -> Result<Self> {
        let text = match phase {
            Phase::A15 => "(±2,±1,0), (0,±2,1), (±1,0,2), (±1,±2,0)o, (±2,0,1)o, (0,±1,2)o",
            Phase::Bcc => "(±1,±1,0), (±1,0,±1), (0,±1,±1)",
            Phase::Fcc => "(±1,±1,1)",
            Phase::Gyroid => match gyroid {
                GyroidLattice::Printed => {
                    "(1,-2,1), (1,2,-1), (-2,1,1), (1,1,-2), (-1,1,2), (2,-1,1), \
                     (1,2,1)o, (-1,2,1)o, (2,1,1)o, (1,1,2)o, (1,-1,2)o, (-2,1,1)o"
                }
                GyroidLattice::Corrected => {
                    "(1,-2,1), (1,2,-1), (-2,1,1), (1,1,-2), (-1,1,2), (2,-1,1), \
                     (1,2,1)o, (-1,2,1)o, (2,1,1)o, (1,1,2)o, (1,-1,2)o, (2,1,-1)o"
                }
            },
            _ => return Err(Error::Config(format!("{phase} is not a cubic phase"))),
        };
        let (alpha, gamma) = phase.default_params();
        Ok(CubicPhaseSpec {
            phase,
            edge: cubic_edge(phase),
            alpha,
            gamma,
            lattice: parse_lattice(text)?,
            amplitude: Self::DEFAULT_AMPLITUDE,
        })
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_lattice(mut self, lattice: Vec<LatticePoint>) -> Self {
        self.lattice = lattice;
        self
    }

    pub fn grid(&self, n: usize) -> Result<Grid> {
        Grid::cube(3, n, self.edge)
    }
}

/// Builds the seed spectrum (coefficient `+-amplitude N^3 / 2` at every
/// listed `k` and at `-k`) and transforms it to a real field.
pub fn make_cubic_phase(grid: &Grid, spec: &CubicPhaseSpec) -> Result<ScalarField> {
    if grid.dim() != 3 {
        return Err(Error::InvalidGrid(format!("cubic seed on a {}-dimensional grid", grid.dim())));
    }
    let half = (grid.n() / 2) as i64;
    let coeff = spec.amplitude * grid.len() as f64 / 2.0;
    let mut spectrum = Spectrum::zeros(*grid);
    let mut signs: Vec<Option<bool>> = vec![None; grid.len()];
    let mut seen = std::collections::HashSet::new();
    for p in &spec.lattice {
        if p.k.iter().all(|&c| c == 0) {
            return Err(Error::Config("the zero mode cannot carry a seed coefficient".into()));
        }
        if p.k.iter().any(|c| c.abs() >= half) {
            return Err(Error::LatticeOutOfRange(p.k));
        }
        if !seen.insert(p.k) {
            return Err(Error::DuplicateLatticePoint(p.k));
        }
        let mirror = [-p.k[0], -p.k[1], -p.k[2]];
        for k in [p.k, mirror] {
            let idx = grid.mode_index(k).ok_or(Error::LatticeOutOfRange(k))?;
            match signs[idx] {
                Some(neg) if neg != p.negative => return Err(Error::DuplicateLatticePoint(p.k)),
                _ => signs[idx] = Some(p.negative),
            }
            let c = if p.negative { -coeff } else { coeff };
            spectrum.coeffs_mut()[idx] = Complex64::new(c, 0.0);
        }
    }
    SpectralPlan::new(*grid).inverse_dft(&spectrum)
}

/// Smooth exact solution `exp(-2t) sin(sqrt3 x) sin(y)` of the forced flow
/// on the 2D box, with the forcing that makes it exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub params: ModelParams,
}

impl Default for ManufacturedCase {
    fn default() -> Self {
        ManufacturedCase { params: ModelParams { alpha: 0.15, gamma: 0.25, s: 2.0 } }
    }
}

impl ManufacturedCase {
    pub fn grid(&self, n: usize) -> Result<Grid> {
        Grid::new(2, n, &two_d_box())
    }

    fn mode(t: f64, x: [f64; 3]) -> f64 {
        (-2.0 * t).exp() * (3f64.sqrt() * x[0]).sin() * x[1].sin()
    }

    pub fn exact(&self, t: f64, grid: &Grid) -> ScalarField {
        ScalarField::from_fn(*grid, |x| Self::mode(t, x))
    }

    /// `(7 - alpha) phi + phi^3/6 - gamma phi^2/2 + gamma exp(-4t)/8`.
    /// The mode has `Delta phi = -4 phi`, hence `(Delta + 1)^2 phi = 9 phi`,
    /// and `beta(phi) = -gamma exp(-4t)/8`.
    pub fn source(&self, t: f64, grid: &Grid) -> ScalarField {
        let ModelParams { alpha, gamma, .. } = self.params;
        let shift = gamma * (-4.0 * t).exp() / 8.0;
        ScalarField::from_fn(*grid, |x| {
            let p = Self::mode(t, x);
            (7.0 - alpha) * p + p * p * p / 6.0 - gamma * p * p / 2.0 + shift
        })
    }
}

impl SourceTerm for ManufacturedCase {
    fn sample(&self, t: f64, grid: &Grid) -> ScalarField {
        self.source(t, grid)
    }
}
