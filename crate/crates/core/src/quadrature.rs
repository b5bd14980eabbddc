//! Gauss-Lobatto nodes on `[-1, 1]` and the subinterval integration weights
//! `w[i][j] = integral of l_j over [x_i, x_{i+1}]`, `l_j` the Lagrange basis.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITERS: usize = 100;
const EXACTNESS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NodeFamily {
    #[default]
    LegendreGaussLobatto,
    ChebyshevGaussLobatto,
}

impl FromStr for NodeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "legendre" | "lgl" => Ok(NodeFamily::LegendreGaussLobatto),
            "chebyshev" | "cgl" => Ok(NodeFamily::ChebyshevGaussLobatto),
            _ => Err(Error::InvalidScheme(format!("unknown node family {s:?}"))),
        }
    }
}

impl fmt::Display for NodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeFamily::LegendreGaussLobatto => "legendre",
            NodeFamily::ChebyshevGaussLobatto => "chebyshev",
        })
    }
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence, `n >= 1`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * p - (k - 1) as f64 * p_prev) / k as f64;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `M` Gauss-Lobatto nodes of the given family, ascending, ends at `-1` and `1`.
pub fn lobatto_nodes(m: usize, family: NodeFamily) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InvalidScheme(format!("node count M = {m} must be at least 2")));
    }
    let n = m - 1;
    let mut nodes: Vec<f64> = (0..m).map(|j| -(j as f64 * PI / n as f64).cos()).collect();
    if family == NodeFamily::LegendreGaussLobatto {
        // Interior nodes are the roots of P'_n. Newton on (1 - x^2) P'_n, using
        // (1 - x^2) P'_n = n (P_{n-1} - x P_n) and its derivative -n (n + 1) P_n.
        for x in nodes.iter_mut().take(n).skip(1) {
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITERS {
                let (p, p_prev) = legendre_pair(n, *x);
                let delta = (*x * p - p_prev) / ((n + 1) as f64 * p);
                *x -= delta;
                if delta.abs() <= NEWTON_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence { what: "Legendre-Gauss-Lobatto nodes" });
            }
        }
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    // Symmetrize so that mirrored nodes agree to the last bit.
    for j in 0..m / 2 {
        let a = 0.5 * (nodes[n - j] - nodes[j]);
        nodes[j] = -a;
        nodes[n - j] = a;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(nodes)
}

/// Gauss-Legendre rule with `q` points on `[-1, 1]`.
fn gauss_legendre(q: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = Vec::with_capacity(q);
    let mut w = Vec::with_capacity(q);
    for i in 0..q {
        let mut t = -(PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITERS {
            let (p, p_prev) = legendre_pair(q, t);
            let dp = q as f64 * (t * p - p_prev) / (t * t - 1.0);
            let delta = p / dp;
            t -= delta;
            if delta.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { what: "Gauss-Legendre nodes" });
        }
        let (p, p_prev) = legendre_pair(q, t);
        let dp = q as f64 * (t * p - p_prev) / (t * t - 1.0);
        x.push(t);
        w.push(2.0 / ((1.0 - t * t) * dp * dp));
    }
    Ok((x, w))
}

fn lagrange_basis(nodes: &[f64], j: usize, t: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != j)
        .map(|(_, &xm)| (t - xm) / (nodes[j] - xm))
        .product()
}

/// `(M - 1) x M` weight matrix on the reference interval.
pub fn subinterval_weights(nodes: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = nodes.len();
    if m < 2 {
        return Err(Error::InvalidScheme(format!("need at least 2 nodes, got {m}")));
    }
    if nodes.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidScheme("nodes must be strictly increasing".into()));
    }
    // The integrand has degree M - 1; q points integrate degree 2q - 1 exactly.
    let (gx, gw) = gauss_legendre(m.div_ceil(2) + 1)?;
    let weights: Vec<Vec<f64>> = nodes
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            (0..m)
                .map(|j| {
                    gx.iter()
                        .zip(&gw)
                        .map(|(&x, &wq)| wq * half * lagrange_basis(nodes, j, mid + half * x))
                        .sum()
                })
                .collect()
        })
        .collect();
    let err = exactness_error(nodes, &weights);
    if err > EXACTNESS_TOL {
        return Err(Error::IllConditioned(err));
    }
    Ok(weights)
}

/// Largest error integrating `t^q`, `q < M`, over every subinterval.
pub fn exactness_error(nodes: &[f64], weights: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for q in 0..nodes.len() {
        for (i, row) in weights.iter().enumerate() {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let exact = (b.powi(q as i32 + 1) - a.powi(q as i32 + 1)) / (q + 1) as f64;
            let approx: f64 = row.iter().zip(nodes).map(|(w, x)| w * x.powi(q as i32)).sum();
            worst = worst.max((approx - exact).abs());
        }
    }
    worst
}
