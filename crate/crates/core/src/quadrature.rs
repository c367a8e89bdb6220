//! Gauss and Gauss-Lobatto rules on the reference interval `[-1, 1]`.

use crate::error::{Error, Result};

/// Points and weights on `[-1, 1]`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * f(r))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Largest Gauss rule the solver asks for.
pub const MAX_GAUSS_POINTS: usize = 8;

/// `n`-point Gauss-Legendre rule, exact through degree `2n - 1`.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    let (points, weights) = match n {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        3 => {
            let a = (3.0f64 / 5.0).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let s30 = 30f64.sqrt();
            let outer = (525.0 + 70.0 * s30).sqrt() / 35.0;
            let inner = (525.0 - 70.0 * s30).sqrt() / 35.0;
            let w_outer = (18.0 - s30) / 36.0;
            let w_inner = (18.0 + s30) / 36.0;
            (
                vec![-outer, -inner, inner, outer],
                vec![w_outer, w_inner, w_inner, w_outer],
            )
        }
        5..=MAX_GAUSS_POINTS => gauss_newton(n),
        _ => {
            return Err(Error::invalid(format!(
                "gauss rule with {n} points not supported (1..={MAX_GAUSS_POINTS})"
            )))
        }
    };
    Ok(QuadratureRule { points, weights })
}

/// `n`-point Gauss-Lobatto rule (endpoints included), exact through degree `2n - 3`.
pub fn gauss_lobatto_rule(n: usize) -> Result<QuadratureRule> {
    let (points, weights) = match n {
        2 => (vec![-1.0, 1.0], vec![1.0, 1.0]),
        3 => (vec![-1.0, 0.0, 1.0], vec![1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]),
        4 => {
            let a = 1.0 / 5f64.sqrt();
            (
                vec![-1.0, -a, a, 1.0],
                vec![1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0],
            )
        }
        5..=MAX_GAUSS_POINTS => lobatto_newton(n),
        _ => {
            return Err(Error::invalid(format!(
                "gauss-lobatto rule with {n} points not supported (2..={MAX_GAUSS_POINTS})"
            )))
        }
    };
    Ok(QuadratureRule { points, weights })
}

/// `(P_n(x), P_n'(x))` via the three-term recurrence.
pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // P_n'(+-1) = (+-1)^{n+1} n(n+1)/2
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

fn gauss_newton(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = x;
        points[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    (points, weights)
}

fn lobatto_newton(n: usize) -> (Vec<f64>, Vec<f64>) {
    // interior nodes are the roots of P'_{n-1}
    let m = n - 1;
    let mf = m as f64;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    points[0] = -1.0;
    points[m] = 1.0;
    for i in 1..=(m / 2) {
        let mut x = -(std::f64::consts::PI * i as f64 / mf).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            // (1-x^2) P'' = 2x P' - m(m+1) P
            let d2p = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        points[i] = x;
        points[m - i] = -x;
    }
    if n % 2 == 1 {
        points[m / 2] = 0.0;
    }
    for (w, &x) in weights.iter_mut().zip(&points) {
        let (p, _) = legendre_with_derivative(m, x);
        *w = 2.0 / (mf * (mf + 1.0) * p * p);
    }
    (points, weights)
}
