//! Floating-point Gaussian quadrature for the q-Gaussian orthogonality
//! measure, as an independent numeric cross-check of the exact layer.
//!
//! The monic q-Hermite recurrence `x H_n = H_{n+1} + [n]_q H_{n-1}` has
//! zero diagonal and positive recurrence weights `[n]_q`, so its Jacobi
//! matrix is symmetric tridiagonal with off-diagonals `sqrt([n]_q)`. By the
//! Golub–Welsch construction the eigenvalues of its `N x N` truncation are
//! the quadrature nodes and the squared first components of the normalized
//! eigenvectors are the weights. An `N`-point rule integrates polynomials
//! of degree `<= 2N - 1` exactly, which is what lets a 16-point rule
//! reproduce the exact vacuum moments and Hermite orthogonality relations
//! to near machine precision — a genuinely different route than the Fock
//! combinatorics, sharing only the recurrence coefficients.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qcore::QParam;

/// Nodes and weights of a Gaussian rule for the q-Gaussian measure.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Number of points.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True for the (unconstructible) empty rule; included for clippy's
    /// `len`-without-`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in strictly increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights, positive and summing to 1, aligned with [`nodes`](Self::nodes).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The quadrature value of `x^k`.
    pub fn moment(&self, k: u32) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * x.powi(k as i32))
            .sum()
    }

    /// The quadrature value of an arbitrary integrand.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Validates `-1 < q < 1` for the float-side entry points.
fn require_open_q(q: f64) -> Result<()> {
    if q > -1.0 && q < 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::QOutOfRange(format!(
            "quadrature requires -1 < q < 1, got {q}"
        )))
    }
}

/// `[n]_q` in floating point.
fn q_int_f64(n: u32, q: f64) -> f64 {
    let mut acc = 0.0;
    let mut power = 1.0;
    for _ in 0..n {
        acc += power;
        power *= q;
    }
    acc
}

/// `[n]_q!` in floating point.
fn q_factorial_f64(n: u32, q: f64) -> f64 {
    (1..=n).map(|k| q_int_f64(k, q)).product()
}

/// Evaluates the monic q-Hermite polynomial `H_n` at `x` by running the
/// recurrence forward.
pub fn hermite_value(n: u32, q: f64, x: f64) -> f64 {
    let mut prev = 0.0; // H_{-1}
    let mut cur = 1.0; // H_0
    for k in 0..n {
        let next = x * cur - q_int_f64(k, q) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Half-width of the support interval, `2/sqrt(1-q)`.
pub fn support_halfwidth(q: f64) -> f64 {
    2.0 / (1.0 - q).sqrt()
}

/// Builds the `n`-point Gaussian rule for the q-Gaussian measure.
///
/// The eigenproblem is handed to a standard symmetric solver; a
/// convergence failure (not expected for `n <= 64`) is reported as
/// [`Error::EigenFailure`]. Nodes are returned sorted.
pub fn gauss_rule(n: usize, q: f64) -> Result<QuadratureRule> {
    require_open_q(q)?;
    if n == 0 {
        return Err(Error::Domain(
            "a quadrature rule needs at least one point".into(),
        ));
    }
    let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            q_int_f64(i.max(j) as u32, q).sqrt()
        } else {
            0.0
        }
    });
    let eigen = SymmetricEigen::try_new(jacobi, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let mut points: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let first = eigen.eigenvectors[(0, j)];
            (eigen.eigenvalues[j], first * first)
        })
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = points.into_iter().unzip();
    Ok(QuadratureRule { nodes, weights })
}

/// Max absolute error of the quadrature against the exact q-Hermite
/// orthogonality relations:
///
/// ```text
/// max over n, m <= nmax of | sum_i w_i H_n(x_i) H_m(x_i) - delta_nm [n]_q! |
/// ```
///
/// Requires `nmax < n_points` so every product `H_n H_m` stays within the
/// rule's exactness degree.
pub fn check_orthogonality(n_points: usize, q: f64, nmax: u32) -> Result<f64> {
    if nmax as usize >= n_points {
        return Err(Error::Domain(format!(
            "orthogonality check needs nmax < n_points, got nmax = {nmax}, n_points = {n_points}"
        )));
    }
    let rule = gauss_rule(n_points, q)?;
    // Evaluate all polynomials once per node.
    let table: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&x| (0..=nmax).map(|k| hermite_value(k, q, x)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for n in 0..=nmax {
        for m in 0..=nmax {
            let integral: f64 = rule
                .weights
                .iter()
                .zip(&table)
                .map(|(w, row)| w * row[n as usize] * row[m as usize])
                .sum();
            let expected = if n == m { q_factorial_f64(n, q) } else { 0.0 };
            worst = worst.max((integral - expected).abs());
        }
    }
    Ok(worst)
}

/// Convenience: the exact `q` sweep used by the float cross-checks, as
/// parallel `(QParam, f64)` pairs built from the same rational so the two
/// sides agree on the parameter to full precision.
pub fn float_q_sweep() -> Vec<(QParam, f64)> {
    [(-9, 10), (-1, 2), (0, 1), (1, 2), (9, 10)]
        .into_iter()
        .map(|(num, den)| {
            let exact = QParam::new(crate::qcore::rat(num, den)).expect("in range");
            let float = exact.to_f64();
            (exact, float)
        })
        .collect()
}
