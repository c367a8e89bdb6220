//! Modal discontinuous Galerkin discretisation: solution storage, boundary handling and
//! the semi-discrete right-hand side.

mod boundary;
pub(crate) mod neighbors;
mod rhs1d;
mod rhs2d;
mod solution;

pub use boundary::{BoundaryCondition, BoundarySpec1D, BoundarySpec2D, Side, StateFn};
pub use rhs1d::Dg1D;
pub use rhs2d::{Dg2D, WaveSpeeds};
pub use solution::{DGSolution1D, DGSolution2D};

use crate::physics::{Axis, FluxModel, MAX_VARS};

/// Global Lax-Friedrichs flux `(f(uL) + f(uR))/2 - alpha/2 (uR - uL)`.
pub fn lax_friedrichs<F: FluxModel + ?Sized>(
    model: &F,
    ul: &[f64],
    ur: &[f64],
    axis: Axis,
    alpha: f64,
    out: &mut [f64],
) {
    let m = ul.len();
    let mut fl = [0.0; MAX_VARS];
    let mut fr = [0.0; MAX_VARS];
    model.flux(ul, axis, &mut fl[..m]);
    model.flux(ur, axis, &mut fr[..m]);
    for v in 0..m {
        out[v] = 0.5 * (fl[v] + fr[v]) - 0.5 * alpha * (ur[v] - ul[v]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{BuckleyLeverett, Burgers, Euler1D, EulerState};
    use proptest::prelude::*;

    #[test]
    fn burgers_example() {
        let mut out = [0.0];
        lax_friedrichs(&Burgers, &[1.0], &[-1.0], Axis::X, 1.0, &mut out);
        assert!((out[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn consistent_for_equal_states() {
        let u = EulerState::from_primitive_1d(1.2, 0.3, 2.0).to_conserved_1d();
        let mut out = [0.0; 3];
        let mut f = [0.0; 3];
        lax_friedrichs(&Euler1D, &u, &u, Axis::X, 3.0, &mut out);
        Euler1D.flux(&u, Axis::X, &mut f);
        for v in 0..3 {
            assert!((out[v] - f[v]).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn monotone_in_each_argument(a in 0.0f64..1.0, b in 0.0f64..1.0, d in 1e-6f64..0.1) {
            // alpha bounds |f'| on [0, 1.1]
            let alpha = 2.2;
            let mut base = [0.0];
            let mut up_l = [0.0];
            let mut up_r = [0.0];
            lax_friedrichs(&Burgers, &[a], &[b], Axis::X, alpha, &mut base);
            lax_friedrichs(&Burgers, &[a + d], &[b], Axis::X, alpha, &mut up_l);
            lax_friedrichs(&Burgers, &[a], &[b + d], Axis::X, alpha, &mut up_r);
            prop_assert!(up_l[0] >= base[0] - 1e-15);
            prop_assert!(up_r[0] <= base[0] + 1e-15);
        }

        #[test]
        fn buckley_leverett_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0, d in 1e-6f64..1e-3) {
            let alpha = 2.5;
            let mut base = [0.0];
            let mut up = [0.0];
            lax_friedrichs(&BuckleyLeverett, &[a], &[b], Axis::X, alpha, &mut base);
            lax_friedrichs(&BuckleyLeverett, &[a + d], &[b], Axis::X, alpha, &mut up);
            prop_assert!(up[0] >= base[0] - 1e-15);
        }
    }
}
