//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use lbsdc::{Grid, LbModel, ManufacturedCase, ScalarField};
use rand::Rng;

/// Dense matrix of the periodic convolution with Fourier symbol `symbol(|Bk|^2)`,
/// assembled from the naive inverse DFT of the symbol.
pub fn circulant_operator(grid: &Grid, symbol: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    let n = grid.n();
    let len = grid.len();
    let d = grid.dim();
    let lengths = grid.lengths().to_vec();
    let index = |flat: usize| -> Vec<i64> {
        let mut idx = vec![0i64; d];
        let mut f = flat;
        for j in (0..d).rev() {
            idx[j] = (f % n) as i64;
            f /= n;
        }
        idx
    };
    let signed = |i: i64| if i <= n as i64 / 2 { i } else { i - n as i64 };
    let symbols: Vec<(Vec<i64>, f64)> = (0..len)
        .map(|q| {
            let k: Vec<i64> = index(q).into_iter().map(signed).collect();
            let k2: f64 = k.iter().zip(&lengths).map(|(&kj, l)| (kj as f64 / l).powi(2)).sum();
            (k, symbol(k2))
        })
        .collect();
    let kernel: Vec<f64> = (0..len)
        .map(|r| {
            let rv = index(r);
            symbols
                .iter()
                .map(|(k, s)| {
                    let phase: f64 = k.iter().zip(&rv).map(|(&kj, &rj)| (kj * rj) as f64).sum();
                    s * (2.0 * PI * phase / n as f64).cos()
                })
                .sum::<f64>()
                / len as f64
        })
        .collect();
    (0..len)
        .map(|x| {
            let xv = index(x);
            (0..len)
                .map(|y| {
                    let yv = index(y);
                    let r = xv.iter().zip(&yv).fold(0usize, |acc, (&a, &b)| acc * n + (a - b).rem_euclid(n as i64) as usize);
                    kernel[r]
                })
                .collect()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        let pivot = a[c].clone();
        for r in c + 1..n {
            let f = a[r][c] / pivot[c];
            if f != 0.0 {
                for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * p;
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

pub fn sh(k2: f64) -> f64 {
    (1.0 - 4.0 * PI * PI * k2).powi(2)
}

/// `I + dt ((Delta + 1)^2 + S - alpha)` as a dense matrix.
pub fn implicit_matrix(grid: &Grid, dt: f64, s: f64, alpha: f64) -> Vec<Vec<f64>> {
    let mut a = circulant_operator(grid, |k2| dt * (sh(k2) + s - alpha));
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += 1.0;
    }
    a
}

/// Dense convex-splitting step.
pub fn dense_cs_step(grid: &Grid, phi: &[f64], dt: f64, alpha: f64, gamma: f64, s: f64) -> Vec<f64> {
    let beta = phi.iter().map(|&p| (1.0 - alpha) * p + p.powi(3) / 6.0 - gamma * p * p / 2.0).sum::<f64>() / phi.len() as f64;
    let rhs: Vec<f64> = phi
        .iter()
        .map(|&p| p + dt * (s * p - p.powi(3) / 6.0 + gamma * p * p / 2.0 + beta))
        .collect();
    dense_solve(implicit_matrix(grid, dt, s, alpha), rhs)
}

/// Smooth random field: a few random Fourier modes, mean removed.
pub fn random_smooth_field(grid: &Grid, rng: &mut impl Rng, modes: usize, amplitude: f64) -> ScalarField {
    let d = grid.dim();
    let terms: Vec<(Vec<f64>, f64, f64)> = (0..modes)
        .map(|_| {
            let k: Vec<f64> = (0..d)
                .map(|j| 2.0 * PI * rng.random_range(-3i64..=3) as f64 / grid.lengths()[j])
                .collect();
            (k, rng.random_range(-1.0..1.0) * amplitude, rng.random_range(0.0..2.0 * PI))
        })
        .collect();
    let mut f = ScalarField::from_fn(*grid, |x| {
        terms
            .iter()
            .map(|(k, a, ph)| a * ((0..d).map(|j| k[j] * x[j]).sum::<f64>() + ph).cos())
            .sum()
    });
    let mean = f.values().iter().sum::<f64>() / grid.len() as f64;
    f.values_mut().iter_mut().for_each(|v| *v -= mean);
    f
}

/// Smallest relative error between `<dE(phi), psi>` and central differences
/// of the energy over a sweep of step sizes.
pub fn gradient_check(model: &mut LbModel, phi: &ScalarField, psi: &ScalarField) -> f64 {
    let grad = model.variational_derivative(phi).unwrap();
    let exact = lbsdc::spectral::grid_inner_product(&grad, psi).unwrap();
    let shifted = |h: f64| {
        let v = phi.values().iter().zip(psi.values()).map(|(p, q)| p + h * q).collect();
        ScalarField::from_values(*phi.grid(), v).unwrap()
    };
    (1..=8)
        .map(|e| {
            let h = 10f64.powi(-e);
            let fd = (model.energy(&shifted(h)).unwrap().total - model.energy(&shifted(-h)).unwrap().total) / (2.0 * h);
            (fd - exact).abs() / exact.abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Largest pointwise residual of the forced flow on the manufactured
/// solution, with a fourth-order central difference in time.
pub fn manufactured_residual(n: usize, times: &[f64]) -> f64 {
    let case = ManufacturedCase::default();
    let grid = case.grid(n).unwrap();
    let mut model = LbModel::new(grid, case.params).unwrap();
    let h = 1e-3;
    let mut worst = 0.0f64;
    for &t in times {
        let at = |s: f64| case.exact(t + s, &grid);
        let (m2, m1, p1, p2) = (at(-2.0 * h), at(-h), at(h), at(2.0 * h));
        let phi = at(0.0);
        let de = model.variational_derivative(&phi).unwrap();
        let beta = model.beta(&phi);
        let g = case.source(t, &grid);
        for i in 0..grid.len() {
            let dt = (m2.values()[i] - 8.0 * m1.values()[i] + 8.0 * p1.values()[i] - p2.values()[i]) / (12.0 * h);
            let r = dt + de.values()[i] - beta - g.values()[i];
            worst = worst.max(r.abs());
        }
    }
    worst
}
