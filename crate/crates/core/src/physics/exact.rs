//! Closed-form and iterative reference solutions for the benchmark problems.

use std::f64::consts::{PI, TAU};

use super::euler::{EulerState, GAMMA};
use crate::error::{Error, Result};

/// Smooth solution of `u_t + (u^2/2)_x = 0`, `u(x,0) = 0.5 + sin x`, valid before the
/// shock forms (`t < 1`). Newton iteration on `u = 0.5 + sin(x - u t)`.
pub fn exact_burgers(x: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.5 + x.sin());
    }
    let mut u = 0.5 + x.sin();
    for _ in 0..100 {
        let arg = x - u * t;
        let g = u - 0.5 - arg.sin();
        if g.abs() <= 1e-13 {
            return Ok(u);
        }
        let dg = 1.0 + t * arg.cos();
        u -= g / dg;
    }
    let g = u - 0.5 - (x - u * t).sin();
    if g.abs() <= 1e-13 {
        Ok(u)
    } else {
        Err(Error::Oracle(format!(
            "Newton iteration for Burgers at x={x}, t={t} did not converge (residual {g:e})"
        )))
    }
}

/// Entropy solution of the same problem for any `t >= 0`, including after the shock forms.
///
/// Writing `u = 0.5 + v(x - t/2, t)`, `v` solves Burgers with `v(x,0) = sin x`, which is odd
/// about `pi`; its shock sits at `pi` for `t >= 1`. Each point is traced back along the
/// characteristic from the monotone branch `xi + t sin xi` on `[0, xi_max]`.
pub fn exact_burgers_entropy(x: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Oracle("negative time".into()));
    }
    let s = (x - 0.5 * t).rem_euclid(TAU);
    let v = if s == 0.0 || s == PI {
        0.0
    } else if s < PI {
        characteristic_value(s, t)?
    } else {
        -characteristic_value(TAU - s, t)?
    };
    Ok(0.5 + v)
}

/// `sin(xi)` for the root of `xi + t sin(xi) = s`, `s` in `(0, pi)`.
fn characteristic_value(s: f64, t: f64) -> Result<f64> {
    let xi_max = if t <= 1.0 { PI } else { (-1.0 / t).acos() };
    let f = |xi: f64| xi + t * xi.sin() - s;
    let (mut lo, mut hi) = (0.0, xi_max);
    if f(hi) < 0.0 {
        return Err(Error::Oracle(format!("no characteristic reaches s={s} at t={t}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut xi = 0.5 * (lo + hi);
    // polish
    for _ in 0..3 {
        let d = 1.0 + t * xi.cos();
        if d.abs() > 1e-8 {
            let next = xi - f(xi) / d;
            if (0.0..=xi_max).contains(&next) {
                xi = next;
            }
        }
    }
    Ok(xi.sin())
}

/// 2D Burgers with `u(x,y,0) = 0.5 + sin(x + y)`: the solution is the 1D one in `x + y`
/// travelling at twice the speed.
pub fn exact_burgers_2d(x: f64, y: f64, t: f64) -> Result<f64> {
    exact_burgers(x + y, 2.0 * t)
}

/// Isentropic vortex parameters.
pub const VORTEX_CENTER: (f64, f64) = (5.0, 0.0);
pub const VORTEX_STRENGTH: f64 = 5.0;

/// Isentropic vortex advected with unit speed along x.
pub fn isentropic_vortex(x: f64, y: f64, t: f64) -> EulerState {
    let (x0, y0) = VORTEX_CENTER;
    let beta = VORTEX_STRENGTH;
    let dx = x - x0 - t;
    let dy = y - y0;
    let r2 = dx * dx + dy * dy;
    let e = (1.0 - r2).exp();
    let rho = (1.0 - (GAMMA - 1.0) / (16.0 * GAMMA * PI * PI) * beta * beta * e * e)
        .powf(1.0 / (GAMMA - 1.0));
    let u = 1.0 - beta * e * dy / (2.0 * PI);
    let v = beta * e * dx / (2.0 * PI);
    EulerState::from_primitive(rho, [u, v], rho.powf(GAMMA))
}

/// Density wave `rho = 1 + 0.2 sin(x + y - t)` with `(u, v, p) = (0.7, 0.3, 1)`.
pub fn density_wave(x: f64, y: f64, t: f64) -> EulerState {
    EulerState::from_primitive(1.0 + 0.2 * (x + y - t).sin(), [0.7, 0.3], 1.0)
}

/// Pre- and post-shock primitive states `(rho, u, v, p)` of a shock of Mach number
/// `mach` running into gas at rest with `(rho, p) = (1.4, 1)`, the shock normal at
/// `angle` (radians) below the x axis.
pub fn oblique_shock_states(mach: f64, angle: f64) -> ([f64; 4], [f64; 4]) {
    let (rho1, p1) = (GAMMA, 1.0);
    let c1 = (GAMMA * p1 / rho1).sqrt();
    let m2 = mach * mach;
    let rho2 = rho1 * (GAMMA + 1.0) * m2 / ((GAMMA - 1.0) * m2 + 2.0);
    let p2 = p1 * (2.0 * GAMMA * m2 - (GAMMA - 1.0)) / (GAMMA + 1.0);
    let w = mach * c1;
    let un = w * (1.0 - rho1 / rho2);
    (
        [rho1, 0.0, 0.0, p1],
        [rho2, un * angle.cos(), -un * angle.sin(), p2],
    )
}

/// Double Mach reflection: Mach 10 shock at 60 degrees to the x axis.
pub fn dmr_states() -> ([f64; 4], [f64; 4]) {
    oblique_shock_states(10.0, PI / 6.0)
}

/// x position where the moving DMR shock meets the line `y`.
pub fn dmr_shock_position(y: f64, t: f64) -> f64 {
    1.0 / 6.0 + (y + 20.0 * t) / 3f64.sqrt()
}

/// DMR solution outside the reflection region: post-shock to the left of the shock.
pub fn dmr_state(x: f64, y: f64, t: f64) -> EulerState {
    let (pre, post) = dmr_states();
    let s = if x < dmr_shock_position(y, t) { post } else { pre };
    EulerState::from_primitive(s[0], [s[1], s[2]], s[3])
}
