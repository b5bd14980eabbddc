//! Periodic grid descriptor and the two field containers living on it.
//!
//! Storage order is lexicographic with the last axis fastest: on a 3D grid
//! the value at point `(n0, n1, n2)` sits at `(n0 * N + n1) * N + n2`. Point
//! `n` on axis `j` has coordinate `n * L_j / N`, `n = 0..N`; the coordinate
//! `N * L_j / N = L_j` is the same point as `0` by periodicity.
//!
//! Spectrum storage uses the same flat layout. Index `n` on an axis carries
//! the integer wavenumber `n` for `n <= N/2` and `n - N` above it, so the
//! Nyquist index `N/2` stands for both `+N/2` and `-N/2`.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// Periodic box `[0, L_1] x ... x [0, L_d]` sampled with `N` points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    lengths: [f64; 3],
}

impl Grid {
    pub fn new(dim: usize, n: usize, lengths: &[f64]) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidGrid(format!("dimension {dim} (expected 2 or 3)")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("N = {n} must be even and at least 4")));
        }
        if lengths.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "{} box lengths for a {dim}-dimensional grid",
                lengths.len()
            )));
        }
        if lengths.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidGrid(format!("box lengths {lengths:?} must be positive")));
        }
        if n.checked_pow(dim as u32).is_none_or(|t| t > (1 << 31)) {
            return Err(Error::InvalidGrid(format!("N^d too large for N = {n}")));
        }
        let mut l = [0.0; 3];
        l[..dim].copy_from_slice(lengths);
        Ok(Grid { dim, n, lengths: l })
    }

    /// Cubic box `[0, a]^dim`.
    pub fn cube(dim: usize, n: usize, edge: f64) -> Result<Self> {
        Self::new(dim, n, &vec![edge; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths[..self.dim]
    }

    /// Total number of grid points, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|Omega|`.
    pub fn volume(&self) -> f64 {
        self.lengths().iter().product()
    }

    /// Quadrature weight of a single grid point, `|Omega| / N^d`.
    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    /// Per-axis indices of a flat position; unused trailing axes are zero.
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for j in (0..self.dim).rev() {
            idx[j] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn flatten(&self, idx: [usize; 3]) -> usize {
        idx[..self.dim].iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Physical coordinates of a grid point.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 3];
        for j in 0..self.dim {
            x[j] = idx[j] as f64 * self.lengths[j] / self.n as f64;
        }
        x
    }

    /// Signed integer wavenumber of a storage index along one axis.
    pub fn wavenumber(&self, index: usize) -> i64 {
        if index <= self.n / 2 {
            index as i64
        } else {
            index as i64 - self.n as i64
        }
    }

    /// Integer wavevector `k` stored at a flat spectrum position.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let idx = self.unflatten(flat);
        let mut k = [0; 3];
        for j in 0..self.dim {
            k[j] = self.wavenumber(idx[j]);
        }
        k
    }

    /// Flat spectrum position holding wavevector `k`, if it lies in range.
    pub fn mode_index(&self, k: [i64; 3]) -> Option<usize> {
        let half = (self.n / 2) as i64;
        let mut idx = [0usize; 3];
        for j in 0..self.dim {
            if k[j].abs() > half {
                return None;
            }
            idx[j] = k[j].rem_euclid(self.n as i64) as usize;
        }
        if k[self.dim..].iter().any(|&v| v != 0) {
            return None;
        }
        Some(self.flatten(idx))
    }

    /// `|Bk|^2 = sum_j (k_j / L_j)^2`.
    pub fn scaled_k_squared(&self, flat: usize) -> f64 {
        let k = self.wavevector(flat);
        (0..self.dim)
            .map(|j| {
                let s = k[j] as f64 / self.lengths[j];
                s * s
            })
            .sum()
    }
}

/// Real samples of a field on every grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        ScalarField { grid, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        ScalarField { grid, values: vec![c; grid.len()] }
    }

    /// Wraps raw values, checking length and finiteness.
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(ScalarField { grid, values })
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        ScalarField { grid, values }
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Complex Fourier coefficients `phi_hat(k)` for every `k` in the grid's mode set.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid) -> Self {
        Spectrum { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: coeffs.len() });
        }
        Ok(Spectrum { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: [i64; 3]) -> Option<Complex64> {
        self.grid.mode_index(k).map(|i| self.coeffs[i])
    }

    /// Largest `|c(k) - conj(c(-k))|` over all modes.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let g = &self.grid;
        (0..g.len())
            .map(|i| {
                let k = g.wavevector(i);
                let j = g
                    .mode_index([-k[0], -k[1], -k[2]])
                    .expect("negated wavevector stays in range");
                (self.coeffs[i] - self.coeffs[j].conj()).norm()
            })
            .fold(0.0, f64::max)
    }
}
