//! Discrete Fourier transforms on the periodic grid, spectral symbols and
//! grid reductions.
//!
//! Transform convention: the forward transform is unnormalized,
//! `phi_hat(k) = sum_x phi(x) exp(-i 2 pi (Bk).x)`, and the inverse carries
//! the `1/N^d` factor.
//!
//! The d-dimensional transform is built from 1D transforms along the
//! contiguous last axis followed by a transpose that rotates the axes; after
//! `d` rounds every axis has been transformed once and the layout is back in
//! its original order.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Grid, ScalarField, Spectrum};

/// Tolerance for the imaginary residue left by an inverse transform,
/// relative to the largest real part.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Reusable transform plan with its scratch buffers.
///
/// A plan is bound to one grid and must not be shared between threads while
/// transforming; create one plan per worker.
pub struct SpectralPlan {
    grid: Grid,
    exec: Exec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k_squared: Vec<f64>,
    buf: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan").field("grid", &self.grid).field("exec", &self.exec).finish()
    }
}

impl SpectralPlan {
    pub fn new(grid: Grid) -> Self {
        Self::with_exec(grid, Exec::default())
    }

    pub fn with_exec(grid: Grid, exec: Exec) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        let mut k_squared = vec![0.0; grid.len()];
        exec.fill(&mut k_squared, |i| grid.scaled_k_squared(i));
        SpectralPlan {
            grid,
            exec,
            forward: planner.plan_fft(n, FftDirection::Forward),
            inverse: planner.plan_fft(n, FftDirection::Inverse),
            k_squared,
            buf: vec![ZERO; grid.len()],
            tmp: vec![ZERO; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    /// `|Bk|^2` per spectrum position.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_squared
    }

    fn check(&self, field: &ScalarField) -> Result<()> {
        if *field.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn forward_dft(&mut self, field: &ScalarField) -> Result<Spectrum> {
        self.check(field)?;
        let values = field.values();
        let mut out = vec![ZERO; self.grid.len()];
        self.exec.fill(&mut out, |i| Complex64::new(values[i], 0.0));
        self.transform(&mut out, FftDirection::Forward);
        Ok(Spectrum::from_coeffs(self.grid, out).expect("length matches grid"))
    }

    /// Inverse transform of a conjugate-symmetric spectrum.
    ///
    /// Fails with [`Error::ImaginaryResidue`] when the result is not real to
    /// within [`IMAGINARY_RESIDUE_TOL`] of its largest real part.
    pub fn inverse_dft(&mut self, spec: &Spectrum) -> Result<ScalarField> {
        if *spec.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let mut buf = std::mem::take(&mut self.buf);
        buf.copy_from_slice(spec.coeffs());
        self.transform(&mut buf, FftDirection::Inverse);
        let result = self.real_part_checked(&buf);
        self.buf = buf;
        result
    }

    /// Forward transform of raw grid values into a caller-owned buffer.
    pub(crate) fn forward_raw(&mut self, values: &[f64], out: &mut Vec<Complex64>) {
        debug_assert_eq!(values.len(), self.grid.len());
        out.resize(self.grid.len(), ZERO);
        self.exec.fill(out, |i| Complex64::new(values[i], 0.0));
        self.transform(out, FftDirection::Forward);
    }

    /// Inverse-transforms two conjugate-symmetric spectra `a` and `b` with a
    /// single complex transform of `a + i b`, returning both real fields.
    ///
    /// `spectra(i)` yields `(a_i, b_i)` for every spectrum position.
    pub(crate) fn inverse_pair<F>(&mut self, spectra: F) -> (Vec<f64>, Vec<f64>)
    where
        F: Fn(usize) -> (Complex64, Complex64) + Sync + Send,
    {
        let mut buf = std::mem::take(&mut self.buf);
        self.exec.fill(&mut buf, |i| {
            let (a, b) = spectra(i);
            Complex64::new(a.re - b.im, a.im + b.re)
        });
        self.transform(&mut buf, FftDirection::Inverse);
        let scale = 1.0 / self.grid.len() as f64;
        let mut re = vec![0.0; buf.len()];
        let mut im = vec![0.0; buf.len()];
        self.exec.fill(&mut re, |i| buf[i].re * scale);
        self.exec.fill(&mut im, |i| buf[i].im * scale);
        self.buf = buf;
        (re, im)
    }

    /// Inverse transform of a spectrum generated on the fly by `spectrum(i)`.
    pub(crate) fn inverse_from_fn<F>(&mut self, spectrum: F) -> Result<ScalarField>
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        let mut buf = std::mem::take(&mut self.buf);
        self.exec.fill(&mut buf, spectrum);
        self.transform(&mut buf, FftDirection::Inverse);
        let result = self.real_part_checked(&buf);
        self.buf = buf;
        result
    }

    fn real_part_checked(&self, buf: &[Complex64]) -> Result<ScalarField> {
        let scale = 1.0 / self.grid.len() as f64;
        let max_re = self.exec.max(buf.len(), |i| buf[i].re.abs());
        let max_im = self.exec.max(buf.len(), |i| buf[i].im.abs());
        if max_im > IMAGINARY_RESIDUE_TOL * max_re {
            return Err(Error::ImaginaryResidue { residue: max_im * scale, scale: max_re * scale });
        }
        let mut values = vec![0.0; buf.len()];
        self.exec.fill(&mut values, |i| buf[i].re * scale);
        Ok(ScalarField::from_raw(self.grid, values))
    }

    /// Unnormalized in-place d-dimensional transform.
    fn transform(&mut self, data: &mut Vec<Complex64>, direction: FftDirection) {
        let n = self.grid.n();
        let rows = data.len() / n;
        let fft = match direction {
            FftDirection::Forward => Arc::clone(&self.forward),
            FftDirection::Inverse => Arc::clone(&self.inverse),
        };
        let scratch_len = fft.get_inplace_scratch_len();
        // A handful of rows per work item keeps the per-task overhead small.
        let rows_per_task = (4096 / n).max(1);
        for _ in 0..self.grid.dim() {
            self.exec.for_each_chunk_init(
                data,
                n * rows_per_task,
                || vec![ZERO; scratch_len],
                |scratch, _, chunk| fft.process_with_scratch(chunk, scratch),
            );
            transpose(self.exec, data, &mut self.tmp, rows, n);
            std::mem::swap(data, &mut self.tmp);
        }
    }
}

/// `dst[c * rows + r] = src[r * cols + c]`.
fn transpose(exec: Exec, src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    let band = BLOCK.min(cols);
    exec.for_each_chunk(dst, rows * band, |offset, out| {
        let c0 = offset / rows;
        let nc = out.len() / rows;
        for r0 in (0..rows).step_by(BLOCK) {
            let r1 = (r0 + BLOCK).min(rows);
            for dc in 0..nc {
                let c = c0 + dc;
                let line = &mut out[dc * rows..(dc + 1) * rows];
                for r in r0..r1 {
                    line[r] = src[r * cols + c];
                }
            }
        }
    });
}

/// `sigma(k) = (1 - 4 pi^2 |Bk|^2)^2 + (S - alpha)`: the Fourier symbol of
/// `(Delta + 1)^2 + (S - alpha)`.
pub fn biharmonic_plus_symbol(grid: &Grid, s: f64, alpha: f64) -> Vec<f64> {
    (0..grid.len()).map(|i| swift_hohenberg_symbol(grid.scaled_k_squared(i)) + (s - alpha)).collect()
}

/// Symbol of `(Delta + 1)^2` at a given `|Bk|^2`.
#[inline]
pub fn swift_hohenberg_symbol(k_squared: f64) -> f64 {
    let lap = 1.0 - 4.0 * PI * PI * k_squared;
    lap * lap
}

/// Grid mean `N^-d sum_x phi(x)`.
pub fn grid_mean(field: &ScalarField) -> f64 {
    grid_mean_with(Exec::default(), field)
}

pub fn grid_mean_with(exec: Exec, field: &ScalarField) -> f64 {
    let v = field.values();
    exec.sum(v.len(), |i| v[i]) / v.len() as f64
}

/// Discrete L2 inner product `(|Omega| / N^d) sum_x u(x) v(x)`.
pub fn grid_inner_product(u: &ScalarField, v: &ScalarField) -> Result<f64> {
    grid_inner_product_with(Exec::default(), u, v)
}

pub fn grid_inner_product_with(exec: Exec, u: &ScalarField, v: &ScalarField) -> Result<f64> {
    u.check_same_grid(v)?;
    let (a, b) = (u.values(), v.values());
    Ok(u.grid().cell_volume() * exec.sum(a.len(), |i| a[i] * b[i]))
}

/// Discrete L2 norm.
pub fn grid_l2_norm(field: &ScalarField) -> f64 {
    grid_inner_product(field, field).expect("same grid").sqrt()
}

/// Max norm.
pub fn grid_max_norm(field: &ScalarField) -> f64 {
    field.max_abs()
}
