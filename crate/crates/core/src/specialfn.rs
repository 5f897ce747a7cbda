//! Orthogonal polynomials and Gauss-Hermite quadrature.
//!
//! Hermite polynomials use the physicists' convention (`H_1(x) = 2x`),
//! orthogonal against the weight `exp(-x^2)`. Every normalization constant
//! in the crate assumes this convention; mixing in the probabilists' `He_n`
//! would silently rescale every variance.

use faer::{Mat, Side};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Quadrature order used when nothing else is requested. Exact for
/// polynomial integrands up to degree 255.
pub const DEFAULT_QUAD_ORDER: usize = 128;

const NEWTON_MAX_ITER: usize = 100;

/// `H_n(x)` by the three-term recurrence `H_{k+1} = 2x H_k - 2k H_{k-1}`.
///
/// Overflow for very large `n` or `|x|` shows up as a non-finite value.
pub fn hermite(n: usize, x: f64) -> f64 {
    hermite_pair(n, x).0
}

/// `(H_n(x), H_{n-1}(x))`, with `H_{-1} = 0`.
pub fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `H_n`, `H_n'` and `H_n''` at `x`, using `H_n' = 2n H_{n-1}`.
pub fn hermite_derivatives(n: usize, x: f64) -> [f64; 3] {
    let (h, h_prev) = hermite_pair(n, x);
    let nf = n as f64;
    let d1 = 2.0 * nf * h_prev;
    // H_n satisfies H'' - 2x H' + 2n H = 0.
    let d2 = 2.0 * x * d1 - 2.0 * nf * h;
    [h, d1, d2]
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)`.
///
/// `n = -1` is accepted and yields 0, so expressions containing
/// `L_{n-1}` stay evaluable at `n = 0`. Negative `n` below -1 also return 0.
pub fn laguerre(n: i64, alpha: u32, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let a = f64::from(alpha);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `n!` as a float. Exact for `n <= 20`; beyond that the product is only
/// as good as floating point allows, and callers should use
/// [`ln_factorial`].
pub fn factorial(n: usize) -> f64 {
    if n <= 20 {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// `ln(n!)`, exact integer arithmetic up to 20 and a log-sum beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 20 {
        ((1..=n as u64).product::<u64>() as f64).ln()
    } else {
        let head = ((1..=20u64).product::<u64>() as f64).ln();
        head + (21..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// The finite sums `F_n(lambda)` entering the normalization of the
/// non-orthogonal `b = a + lambda a^dagger` family.
///
/// Even `n`: `sum_{l=0}^{n/2} 2^{2l} lambda^{n-2l} / ((2l)! ((n/2-l)!)^2)`.
/// Odd `n`: `sum_{l=0}^{(n-1)/2} 2^{2l+1} lambda^{n-1-2l} / ((2l+1)! (((n-1)/2-l)!)^2)`.
pub fn f_n(n: usize, lambda: f64) -> f64 {
    let half = n / 2;
    let odd = n % 2;
    (0..=half)
        .map(|l| {
            let k = 2 * l + odd;
            let power = (n - odd - 2 * l) as i32;
            let ln_den = ln_factorial(k) + 2.0 * ln_factorial(half - l);
            let ln_num = k as f64 * std::f64::consts::LN_2;
            // lambda^0 must be 1 even at lambda = 0
            lambda.powi(power) * (ln_num - ln_den).exp()
        })
        .sum()
}

/// Gauss-Hermite nodes and weights for the weight function `exp(-x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Abscissae, strictly increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights, all positive, summing to `sqrt(pi)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `integral exp(-x^2) f(x) dx` over the real line.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64) -> f64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Builds the `order`-point Gauss-Hermite rule, exact for polynomials of
/// degree `2 * order - 1` against `exp(-x^2)`.
///
/// Roots of the orthonormal Hermite polynomial are found by Newton
/// iteration from asymptotic initial guesses, largest root first; weights
/// follow from the derivative at each root.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::ZeroQuadratureOrder);
    }
    let n = order;
    let nf = n as f64;
    let half = n.div_ceil(2);
    let pim4 = PI.powf(-0.25);
    let mut roots = vec![0.0; half];
    let mut wts = vec![0.0; half];
    // Starting points from the symmetric Jacobi matrix (Golub-Welsch); Newton
    // then polishes each one against the three-term recurrence.
    let jacobi = Mat::<f64>::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses = jacobi
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::QuadratureNoConvergence { order })?;
    guesses.sort_by(|a, b| b.total_cmp(a));
    for i in 0..half {
        let mut z = if n % 2 == 1 && i == half - 1 {
            0.0
        } else {
            guesses[i]
        };
        let mut converged = false;
        let mut deriv = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            // orthonormal recurrence: p_j = x sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2}
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            deriv = (2.0 * nf).sqrt() * p2;
            let step = p1 / deriv;
            z -= step;
            if step.abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::QuadratureNoConvergence { order });
        }
        roots[i] = z;
        wts[i] = 2.0 / (deriv * deriv);
    }
    if roots.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::QuadratureNoConvergence { order });
    }
    // `roots` is descending and non-negative; mirror into ascending order.
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n / 2 {
        nodes.push(-roots[i]);
        weights.push(wts[i]);
    }
    if n % 2 == 1 {
        nodes.push(0.0);
        weights.push(wts[half - 1]);
    }
    for i in (0..n / 2).rev() {
        nodes.push(roots[i]);
        weights.push(wts[i]);
    }
    Ok(QuadratureRule { nodes, weights })
}
