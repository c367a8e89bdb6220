//! Flux models, wave-speed bounds, characteristic decompositions and exact-solution oracles.

mod euler;
pub mod exact;
pub mod riemann;
mod scalar;

pub use euler::{Euler1D, Euler2D, EulerState, GAMMA};
pub use scalar::{buckley_leverett_flux, burgers_flux, BuckleyLeverett, Burgers, LinearAdvection};

use crate::error::Result;

/// Flux direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Upper bound on the number of conserved variables of any model.
pub const MAX_VARS: usize = 4;

/// A hyperbolic flux `f(U)` (and `g(U)` in 2D).
///
/// Every evaluator is a pure function of its arguments.
pub trait FluxModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn num_vars(&self) -> usize;

    fn flux(&self, u: &[f64], axis: Axis, out: &mut [f64]);

    /// Bound on the spectral radius of the flux Jacobian along `axis`.
    fn max_speed(&self, u: &[f64], axis: Axis) -> f64;

    /// Floor under every wave-speed estimate. A nonconvex flux can have zero speed at
    /// every state present in the data while waves fan out between them.
    fn speed_floor(&self) -> f64 {
        0.0
    }

    /// `Err(reason)` when `u` is not physically admissible.
    fn check_state(&self, u: &[f64]) -> std::result::Result<(), String> {
        if u.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err("non-finite value".into())
        }
    }

    /// Fill row-major left/right eigenvector matrices of the Jacobian along `axis`
    /// at `u_ref`. Returns `Ok(false)` for scalar models (no decomposition needed).
    fn characteristics(
        &self,
        _u_ref: &[f64],
        _axis: Axis,
        _left: &mut [f64],
        _right: &mut [f64],
    ) -> Result<bool> {
        Ok(false)
    }

    /// Mirror a state across a wall normal to `axis`.
    fn reflect(&self, _u: &mut [f64], _axis: Axis) {}

    /// Signed transport speed used to decide which faces are inflow faces.
    fn advection_speed(&self, u: &[f64], axis: Axis) -> f64;

    /// Variables inspected by the troubled-cell indicator.
    fn indicator_vars(&self) -> &'static [usize] {
        &[0]
    }

    /// True for the Euler equations (enables the positivity fix).
    fn is_euler(&self) -> bool {
        false
    }
}

/// `y = A x` for a row-major `m x m` matrix.
#[cfg(test)]
pub(crate) fn mat_vec(a: &[f64], x: &[f64], y: &mut [f64]) {
    let m = x.len();
    for (i, yi) in y.iter_mut().enumerate().take(m) {
        *yi = (0..m).map(|j| a[i * m + j] * x[j]).sum();
    }
}
