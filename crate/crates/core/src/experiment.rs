//! Batch experiments: run configuration, field snapshots and the
//! `converge`, `relax` and `energy-ref` drivers.
//!
//! Configuration is flat `key = value` text; `#` starts a comment. Keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `phase` | lamellar, cylindrical, a15, bcc, fcc, gyr | lamellar |
//! | `n` | points per axis | 64 (converge), 256 (2D), 128 (3D) |
//! | `box` | comma separated box lengths | phase cell |
//! | `alpha`, `gamma`, `s` | model parameters | phase values, `s = 2` |
//! | `m`, `k` | nodes and corrections | 4, 4 |
//! | `nodes` | legendre or chebyshev | legendre |
//! | `adaptive` | true for ASDC | false |
//! | `dt` | relaxation step | 1 |
//! | `dts` | convergence study steps | 0.05, 0.025, 0.0125, 0.00625 |
//! | `ks` | convergence study corrections | 1, 2, 3, 4 |
//! | `t_final` | convergence study horizon | 4 |
//! | `stop` | gap, increment or max | gap |
//! | `eps` | stopping tolerance | 1e-12 |
//! | `eref` | reference energy for `stop = gap` | phase value |
//! | `max_iters` | iteration cap | 10000 |
//! | `amplitude` | cubic seed amplitude | 0.3 |
//! | `lattice` | cubic seed lattice, e.g. `(±1,±1,0), (1,2,1)o` | phase table |
//! | `gyroid_lattice` | printed or corrected | printed |
//! | `exec` | parallel or sequential | parallel |
//! | `out` | output directory | none |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, ScalarField, Spectrum};
use crate::model::{LbModel, ModelParams};
use crate::phases::{
    make_2d_phase, make_cubic_phase, parse_lattice, CubicPhaseSpec, GyroidLattice, ManufacturedCase, Phase, TwoDPhase,
    TwoDPhaseSpec,
};
use crate::quadrature::NodeFamily;
use crate::relax::{relax_observed, IterationRecord, RunLog, StopMode, StopRule};
use crate::sdc::{sdc_step, SdcScheme};
use crate::spectral::{grid_l2_norm, grid_max_norm, SpectralPlan};

const MAGIC: &str = "LBFIELD 1";

/// Raw `key = value` pairs; later insertions win.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigMap(BTreeMap<String, String>);

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            map.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_ascii_lowercase(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("{key} = {v:?} is not valid"))))
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("{key} = {v:?} is not a list"))))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Converge,
    Relax,
    EnergyRef,
}

/// Validated settings for one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub phase: Phase,
    pub n: usize,
    pub lengths: Vec<f64>,
    pub params: ModelParams,
    pub m: usize,
    pub k: usize,
    pub nodes: NodeFamily,
    pub adaptive: bool,
    pub dt: f64,
    pub dts: Vec<f64>,
    pub ks: Vec<usize>,
    pub t_final: f64,
    pub stop: StopRule,
    pub amplitude: f64,
    pub lattice: Option<String>,
    pub gyroid_lattice: GyroidLattice,
    pub exec: Exec,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_map(experiment: Experiment, map: &ConfigMap) -> Result<Self> {
        let known = [
            "phase", "n", "box", "alpha", "gamma", "s", "m", "k", "nodes", "adaptive", "dt", "dts", "ks", "t_final",
            "stop", "eps", "eref", "max_iters", "amplitude", "lattice", "gyroid_lattice", "exec", "out",
        ];
        if let Some(key) = map.0.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        let phase: Phase = map.parsed("phase")?.unwrap_or(Phase::Lamellar);
        let converge = experiment == Experiment::Converge;
        if converge && phase.dim() != 2 {
            return Err(Error::Config("the convergence study runs on the 2D manufactured case".into()));
        }
        let default_n = match (converge, phase.dim()) {
            (true, _) => 64,
            (false, 2) => 256,
            _ => 128,
        };
        let n = map.parsed("n")?.unwrap_or(default_n);
        let lengths = map.list("box")?.unwrap_or_else(|| phase.default_box());
        Grid::new(phase.dim(), n, &lengths)?;
        let (alpha0, gamma0) = if converge {
            let p = ManufacturedCase::default().params;
            (p.alpha, p.gamma)
        } else {
            phase.default_params()
        };
        let params = ModelParams::new(
            map.parsed("alpha")?.unwrap_or(alpha0),
            map.parsed("gamma")?.unwrap_or(gamma0),
            map.parsed("s")?.unwrap_or(ModelParams::DEFAULT_STABILIZER),
        )?;
        let m = map.parsed("m")?.unwrap_or(4);
        let k = map.parsed("k")?.unwrap_or(4);
        let nodes = map.parsed("nodes")?.unwrap_or_default();
        SdcScheme::new(m, k, nodes)?;
        let adaptive = map.parsed("adaptive")?.unwrap_or(false);
        let dt: f64 = map.parsed("dt")?.unwrap_or(1.0);
        let dts = map.list("dts")?.unwrap_or_else(|| vec![0.05, 0.025, 0.0125, 0.00625]);
        let ks = match map.list("ks")? {
            Some(v) => v
                .iter()
                .map(|&x| if x >= 0.0 && x.fract() == 0.0 { Ok(x as usize) } else { Err(Error::Config(format!("ks entry {x}"))) })
                .collect::<Result<Vec<_>>>()?,
            None => vec![1, 2, 3, 4],
        };
        let t_final: f64 = map.parsed("t_final")?.unwrap_or(4.0);
        for &h in dts.iter().chain([&dt]) {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::Config(format!("step size {h} must be positive")));
            }
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::Config(format!("t_final = {t_final} must be positive")));
        }
        let mode = match map.get("stop").unwrap_or("gap") {
            "gap" => StopMode::ReferenceGap,
            "increment" => StopMode::EnergyIncrement,
            "max" => StopMode::MaxIters,
            other => return Err(Error::Config(format!("stop = {other:?} (gap, increment or max)"))),
        };
        let eref = map.parsed("eref")?.or(Some(phase.reference_energy()));
        let stop = StopRule {
            mode,
            epsilon: map.parsed("eps")?.unwrap_or(1e-12),
            e_ref: eref,
            max_iters: map.parsed("max_iters")?.unwrap_or(10_000),
        };
        stop.validate()?;
        let gyroid_lattice = match map.get("gyroid_lattice").unwrap_or("printed") {
            "printed" => GyroidLattice::Printed,
            "corrected" => GyroidLattice::Corrected,
            other => return Err(Error::Config(format!("gyroid_lattice = {other:?} (printed or corrected)"))),
        };
        let lattice = map.get("lattice").map(str::to_string);
        if let Some(l) = &lattice {
            parse_lattice(l)?;
        }
        let exec = match map.get("exec").unwrap_or("parallel") {
            "parallel" => Exec::Parallel,
            "sequential" => Exec::Sequential,
            other => return Err(Error::Config(format!("exec = {other:?} (parallel or sequential)"))),
        };
        Ok(RunConfig {
            experiment,
            phase,
            n,
            lengths,
            params,
            m,
            k,
            nodes,
            adaptive,
            dt,
            dts,
            ks,
            t_final,
            stop,
            amplitude: map.parsed("amplitude")?.unwrap_or(CubicPhaseSpec::DEFAULT_AMPLITUDE),
            lattice,
            gyroid_lattice,
            exec,
            out: map.get("out").map(PathBuf::from),
        })
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.phase.dim(), self.n, &self.lengths)
    }

    pub fn scheme(&self) -> Result<SdcScheme> {
        SdcScheme::new(self.m, self.k, self.nodes)
    }

    /// Seed field of the configured phase on `grid`.
    pub fn seed(&self, grid: &Grid) -> Result<ScalarField> {
        let ModelParams { alpha, gamma, .. } = self.params;
        match self.phase {
            Phase::Lamellar => make_2d_phase(grid, &TwoDPhaseSpec::new(TwoDPhase::Lamellar, alpha, gamma)?),
            Phase::Cylindrical => make_2d_phase(grid, &TwoDPhaseSpec::new(TwoDPhase::Cylindrical, alpha, gamma)?),
            cubic => {
                let mut spec = CubicPhaseSpec::table_with(cubic, self.gyroid_lattice)?.with_amplitude(self.amplitude);
                if let Some(l) = &self.lattice {
                    spec = spec.with_lattice(parse_lattice(l)?);
                }
                make_cubic_phase(grid, &spec)
            }
        }
    }
}

/// Writes the snapshot format: `LBFIELD 1`, then `d N L_1 .. L_d`, then
/// `N^d` little-endian f64 values, last axis fastest.
pub fn write_field(field: &ScalarField, path: &Path) -> Result<()> {
    let g = field.grid();
    let mut header = format!("{MAGIC}\n{} {}", g.dim(), g.n());
    for l in g.lengths() {
        write!(header, " {l}").expect("writing to a String");
    }
    header.push('\n');
    let mut bytes = header.into_bytes();
    bytes.reserve(8 * g.len());
    for v in field.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::File::create(path)?.write_all(&bytes)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    parse_field(&bytes)
}

fn parse_field(bytes: &[u8]) -> Result<ScalarField> {
    let mut lines = bytes.splitn(3, |&b| b == b'\n');
    let magic = lines.next().unwrap_or_default();
    if magic != MAGIC.as_bytes() {
        return Err(Error::Format("missing LBFIELD 1 header".into()));
    }
    let dims = lines.next().ok_or_else(|| Error::Format("missing grid line".into()))?;
    let payload = lines.next().unwrap_or_default();
    let dims = std::str::from_utf8(dims).map_err(|_| Error::Format("grid line is not text".into()))?;
    let nums: Vec<&str> = dims.split_whitespace().collect();
    let parse_usize = |s: &str| s.parse::<usize>().map_err(|_| Error::Format(format!("bad integer {s:?}")));
    if nums.len() < 2 {
        return Err(Error::Format(format!("grid line {dims:?}")));
    }
    let d = parse_usize(nums[0])?;
    let n = parse_usize(nums[1])?;
    let lengths = nums[2..]
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| Error::Format(format!("bad length {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(d, n, &lengths).map_err(|e| Error::Format(e.to_string()))?;
    let expected = grid.len();
    if payload.len() < 8 * expected {
        return Err(Error::TruncatedPayload { expected, found: payload.len() / 8 });
    }
    if payload.len() > 8 * expected {
        return Err(Error::Format(format!("{} trailing bytes after the payload", payload.len() - 8 * expected)));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    ScalarField::from_values(grid, values).map_err(|e| Error::Format(e.to_string()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// CSV rendering of a run log; numbers use round-trip formatting.
pub fn runlog_csv(log: &RunLog) -> String {
    let mut s = String::from("iter,t,energy,gap,mass,corrections,wall_seconds\n");
    for r in &log.records {
        writeln!(
            s,
            "{},{:e},{:e},{},{:e},{},{:.6}",
            r.iter,
            r.t,
            r.energy,
            fmt_opt(r.gap),
            r.mass,
            r.corrections,
            r.wall_seconds
        )
        .expect("writing to a String");
    }
    s
}

fn ensure_out(cfg: &RunConfig) -> Result<Option<&Path>> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub dt: f64,
    pub l2_err: f64,
    pub l2_order: Option<f64>,
    pub max_err: f64,
    pub max_order: Option<f64>,
}

/// Error of `SDC_M^K` on the manufactured case at time `t_final`.
pub fn manufactured_error(cfg: &RunConfig, k: usize, dt: f64) -> Result<(f64, f64)> {
    let case = ManufacturedCase { params: cfg.params };
    let grid = cfg.grid()?;
    let steps = (cfg.t_final / dt).round();
    if (steps * dt - cfg.t_final).abs() > 1e-9 * cfg.t_final {
        return Err(Error::Config(format!("dt = {dt} does not divide t_final = {}", cfg.t_final)));
    }
    let scheme = SdcScheme::new(cfg.m, k, cfg.nodes)?;
    let mut model = LbModel::with_exec(grid, cfg.params, cfg.exec)?;
    let mut phi = case.exact(0.0, &grid);
    for step in 0..steps as usize {
        phi = sdc_step(&mut model, &phi, &scheme, dt, step as f64 * dt, Some(&case))?;
    }
    let exact = case.exact(cfg.t_final, &grid);
    let diff: Vec<f64> = phi.values().iter().zip(exact.values()).map(|(a, b)| a - b).collect();
    let diff = ScalarField::from_values(grid, diff)?;
    Ok((grid_l2_norm(&diff), grid_max_norm(&diff)))
}

/// Convergence table over `ks x dts`; writes `table.csv` when `out` is set.
pub fn cmd_converge(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for &k in &cfg.ks {
        let mut prev: Option<(f64, f64, f64)> = None;
        for &dt in &cfg.dts {
            let (l2, max) = manufactured_error(cfg, k, dt)?;
            let order = |e_prev: f64, e: f64, h_prev: f64| (e_prev / e).ln() / (h_prev / dt).ln();
            let (l2_order, max_order) = match prev {
                Some((h, l2p, maxp)) => (Some(order(l2p, l2, h)), Some(order(maxp, max, h))),
                None => (None, None),
            };
            rows.push(ConvergenceRow { k, dt, l2_err: l2, l2_order, max_err: max, max_order });
            prev = Some((dt, l2, max));
        }
    }
    if let Some(dir) = ensure_out(cfg)? {
        fs::write(dir.join("table.csv"), convergence_csv(&rows))?;
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("K,dt,l2_err,l2_order,max_err,max_order\n");
    for r in rows {
        writeln!(
            s,
            "{},{:e},{:e},{},{:e},{}",
            r.k,
            r.dt,
            r.l2_err,
            fmt_opt(r.l2_order),
            r.max_err,
            fmt_opt(r.max_order)
        )
        .expect("writing to a String");
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxOutcome {
    pub field: ScalarField,
    pub log: RunLog,
}

/// Relaxes `phi_0` with the configured scheme and stop rule.
pub fn relax_field(
    cfg: &RunConfig,
    phi_0: &ScalarField,
    on_record: impl FnMut(&IterationRecord),
) -> Result<RelaxOutcome> {
    let mut model = LbModel::with_exec(*phi_0.grid(), cfg.params, cfg.exec)?;
    let (field, log) = relax_observed(&mut model, phi_0, &cfg.scheme()?, cfg.dt, &cfg.stop, cfg.adaptive, on_record)?;
    Ok(RelaxOutcome { field, log })
}

/// Relaxes the configured seed; writes `runlog.csv` and `final.lbfield` when
/// `out` is set.
pub fn cmd_relax(cfg: &RunConfig, on_record: impl FnMut(&IterationRecord)) -> Result<RelaxOutcome> {
    let seed = cfg.seed(&cfg.grid()?)?;
    let outcome = relax_field(cfg, &seed, on_record)?;
    if let Some(dir) = ensure_out(cfg)? {
        fs::write(dir.join("runlog.csv"), runlog_csv(&outcome.log))?;
        write_field(&outcome.field, &dir.join("final.lbfield"))?;
    }
    Ok(outcome)
}

/// Zero-pads the spectrum of `field` onto a grid with `n_fine` points per
/// axis. Modes on the coarse Nyquist planes are dropped.
pub fn prolong(field: &ScalarField, n_fine: usize) -> Result<ScalarField> {
    let coarse = *field.grid();
    let fine = Grid::new(coarse.dim(), n_fine, coarse.lengths())?;
    if n_fine < coarse.n() {
        return Err(Error::InvalidGrid(format!("cannot prolong N = {} to {n_fine}", coarse.n())));
    }
    let spec = SpectralPlan::new(coarse).forward_dft(field)?;
    let half = (coarse.n() / 2) as i64;
    let scale = fine.len() as f64 / coarse.len() as f64;
    let mut out = Spectrum::zeros(fine);
    for (i, c) in spec.coeffs().iter().enumerate() {
        let k = coarse.wavevector(i);
        if k.iter().any(|v| v.abs() == half) {
            continue;
        }
        let j = fine.mode_index(k).expect("coarse modes fit on the fine grid");
        out.coeffs_mut()[j] = c * Complex64::new(scale, 0.0);
    }
    SpectralPlan::new(fine).inverse_dft(&out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyRefReport {
    pub n: usize,
    pub energy_coarse: f64,
    pub energy_fine: f64,
    pub difference: f64,
    /// Significant decimal digits shared by the two energies.
    pub digits: u32,
    pub converged: bool,
}

/// Relaxes at `N` and then, starting from the prolonged result, at `2N`.
/// Without a reference energy both runs stop on the energy increment.
pub fn cmd_energy_ref(cfg: &RunConfig) -> Result<EnergyRefReport> {
    let mut cfg = cfg.clone();
    if cfg.stop.mode == StopMode::ReferenceGap {
        cfg.stop.mode = StopMode::EnergyIncrement;
    }
    let coarse = cmd_relax(&cfg, |_| {})?;
    let start = prolong(&coarse.field, 2 * cfg.n)?;
    let fine = relax_field(&cfg, &start, |_| {})?;
    let energy_coarse = coarse.log.summary().final_energy;
    let energy_fine = fine.log.summary().final_energy;
    let difference = energy_fine - energy_coarse;
    let digits = agreeing_digits(energy_coarse, energy_fine);
    Ok(EnergyRefReport {
        n: cfg.n,
        energy_coarse,
        energy_fine,
        difference,
        digits,
        converged: coarse.log.converged && fine.log.converged,
    })
}

/// Number of leading significant decimal digits two values share.
pub fn agreeing_digits(a: f64, b: f64) -> u32 {
    if a == b {
        return 17;
    }
    let rel = (a - b).abs() / a.abs().max(b.abs());
    (-rel.log10()).floor().clamp(0.0, 17.0) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_overrides() {
        let mut map = ConfigMap::parse("# comment\nphase = cyl\nn = 32 # inline\nadaptive = true\n").unwrap();
        map.set("k", "5");
        let cfg = RunConfig::from_map(Experiment::Relax, &map).unwrap();
        assert_eq!(cfg.phase, Phase::Cylindrical);
        assert_eq!((cfg.n, cfg.k, cfg.adaptive), (32, 5, true));
        assert_eq!(cfg.stop.e_ref, Some(Phase::Cylindrical.reference_energy()));
        assert!(ConfigMap::parse("no equals sign").is_err());
    }

    #[test]
    fn config_validation() {
        let bad = |text: &str| RunConfig::from_map(Experiment::Relax, &ConfigMap::parse(text).unwrap()).is_err();
        assert!(bad("n = 7"));
        assert!(bad("s = 0.1"));
        assert!(bad("eps = 0"));
        assert!(bad("dt = -1"));
        assert!(bad("nodes = gauss"));
        assert!(bad("colour = red"));
        assert!(bad("m = 1"));
        assert!(RunConfig::from_map(Experiment::Converge, &ConfigMap::parse("phase = bcc").unwrap()).is_err());
    }

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(2, 4, &[1.5, std::f64::consts::PI]).unwrap();
        let f = ScalarField::from_values(g, (0..16).map(|i| (i as f64 * 0.731).sin() / 3.0).collect()).unwrap();
        let path = dir.path().join("f.lbfield");
        write_field(&f, &path).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.grid(), f.grid());
        assert!(back.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn snapshot_errors() {
        let header = b"LBFIELD 1\n2 4 1 1\n".to_vec();
        assert_eq!(parse_field(&header), Err(Error::TruncatedPayload { expected: 16, found: 0 }));
        let mut short = header.clone();
        short.extend(std::iter::repeat_n(0u8, 15 * 8));
        assert_eq!(parse_field(&short), Err(Error::TruncatedPayload { expected: 16, found: 15 }));
        let mut full = header.clone();
        full.extend(std::iter::repeat_n(0u8, 16 * 8));
        assert!(parse_field(&full).is_ok());
        assert!(matches!(parse_field(b"LBFIELD 2\n2 4 1 1\n"), Err(Error::Format(_))));
        assert!(matches!(parse_field(b"LBFIELD 1\n2 5 1 1\n"), Err(Error::Format(_))));
    }

    #[test]
    fn prolongation_preserves_band_limited_fields() {
        let g = Grid::new(2, 16, &[3.0, 5.0]).unwrap();
        let f = ScalarField::from_fn(g, |x| {
            (2.0 * std::f64::consts::PI * (2.0 * x[0] / 3.0 - 3.0 * x[1] / 5.0)).cos() + 0.25
        });
        let fine = prolong(&f, 32).unwrap();
        let want = ScalarField::from_fn(*fine.grid(), |x| {
            (2.0 * std::f64::consts::PI * (2.0 * x[0] / 3.0 - 3.0 * x[1] / 5.0)).cos() + 0.25
        });
        assert!(fine.values().iter().zip(want.values()).all(|(a, b)| (a - b).abs() < 1e-13));
    }

    #[test]
    fn digits() {
        assert_eq!(agreeing_digits(1.0, 1.0), 17);
        assert_eq!(agreeing_digits(-16.532074091947, -16.532074091950), 12);
        assert_eq!(agreeing_digits(1.0, 2.0), 0);
    }
}
