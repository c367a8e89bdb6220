//! Exact solution of the 1D Euler Riemann problem for an ideal gas.

use super::euler::GAMMA;
use crate::error::{Error, Result};

/// Primitive 1D state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub density: f64,
    pub velocity: f64,
    pub pressure: f64,
}

impl Primitive {
    pub fn new(density: f64, velocity: f64, pressure: f64) -> Self {
        Self {
            density,
            velocity,
            pressure,
        }
    }

    fn sound_speed(&self) -> f64 {
        (GAMMA * self.pressure / self.density).sqrt()
    }

    pub fn to_conserved(&self) -> [f64; 3] {
        [
            self.density,
            self.density * self.velocity,
            self.pressure / (GAMMA - 1.0) + 0.5 * self.density * self.velocity * self.velocity,
        ]
    }
}

/// Solved Riemann problem: star-region pressure and velocity plus the two data states.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution {
    pub left: Primitive,
    pub right: Primitive,
    pub p_star: f64,
    pub u_star: f64,
}

/// Pressure function `f_K(p)` and its derivative for one side.
fn pressure_function(p: f64, s: &Primitive) -> (f64, f64) {
    let g = GAMMA;
    let c = s.sound_speed();
    if p > s.pressure {
        let a = 2.0 / ((g + 1.0) * s.density);
        let b = (g - 1.0) / (g + 1.0) * s.pressure;
        let q = (a / (p + b)).sqrt();
        ((p - s.pressure) * q, q * (1.0 - 0.5 * (p - s.pressure) / (b + p)))
    } else {
        let pr = p / s.pressure;
        let e = (g - 1.0) / (2.0 * g);
        (
            2.0 * c / (g - 1.0) * (pr.powf(e) - 1.0),
            1.0 / (s.density * c) * pr.powf(-(g + 1.0) / (2.0 * g)),
        )
    }
}

impl RiemannSolution {
    pub fn solve(left: Primitive, right: Primitive) -> Result<Self> {
        for s in [&left, &right] {
            if !(s.density > 0.0 && s.pressure > 0.0) {
                return Err(Error::Oracle(format!("inadmissible Riemann data {s:?}")));
            }
        }
        let g = GAMMA;
        let (cl, cr) = (left.sound_speed(), right.sound_speed());
        let du = right.velocity - left.velocity;
        if 2.0 / (g - 1.0) * (cl + cr) <= du {
            return Err(Error::Oracle("Riemann data generate vacuum".into()));
        }
        // two-rarefaction guess, floored
        let e = (g - 1.0) / (2.0 * g);
        let tr = (cl + cr - 0.5 * (g - 1.0) * du)
            / (cl / left.pressure.powf(e) + cr / right.pressure.powf(e));
        let mut p = tr.powf(1.0 / e).max(1e-12);
        let mut converged = false;
        for _ in 0..200 {
            let (fl, dl) = pressure_function(p, &left);
            let (fr, dr) = pressure_function(p, &right);
            let f = fl + fr + du;
            let mut next = p - f / (dl + dr);
            if next <= 0.0 {
                next = 0.5 * p;
            }
            let change = (next - p).abs() / (0.5 * (next + p));
            p = next;
            if change < 1e-15 {
                converged = true;
                break;
            }
        }
        let (fl, _) = pressure_function(p, &left);
        let (fr, _) = pressure_function(p, &right);
        let residual = fl + fr + du;
        if !converged && residual.abs() > 1e-12 {
            return Err(Error::Oracle(format!(
                "star pressure iteration did not converge (residual {residual:e})"
            )));
        }
        let u_star = 0.5 * (left.velocity + right.velocity) + 0.5 * (fr - fl);
        Ok(Self {
            left,
            right,
            p_star: p,
            u_star,
        })
    }

    /// Residual of the star-pressure equation `f_L + f_R + du`.
    pub fn residual(&self) -> f64 {
        let (fl, _) = pressure_function(self.p_star, &self.left);
        let (fr, _) = pressure_function(self.p_star, &self.right);
        fl + fr + self.right.velocity - self.left.velocity
    }

    /// Star-region densities `(left of contact, right of contact)`.
    pub fn star_densities(&self) -> (f64, f64) {
        (
            star_density(self.p_star, &self.left),
            star_density(self.p_star, &self.right),
        )
    }

    /// Sample the self-similar solution at `xi = (x - x0) / t`.
    pub fn sample(&self, xi: f64) -> Primitive {
        let g = GAMMA;
        let ps = self.p_star;
        let us = self.u_star;
        if xi <= us {
            let s = self.left;
            let c = s.sound_speed();
            if ps > s.pressure {
                let shock = s.velocity
                    - c * ((g + 1.0) / (2.0 * g) * ps / s.pressure + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= shock {
                    s
                } else {
                    Primitive::new(star_density(ps, &s), us, ps)
                }
            } else {
                let head = s.velocity - c;
                let cs = c * (ps / s.pressure).powf((g - 1.0) / (2.0 * g));
                let tail = us - cs;
                if xi <= head {
                    s
                } else if xi >= tail {
                    Primitive::new(star_density(ps, &s), us, ps)
                } else {
                    let k = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * c) * (s.velocity - xi);
                    Primitive::new(
                        s.density * k.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.velocity + xi),
                        s.pressure * k.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        } else {
            let s = self.right;
            let c = s.sound_speed();
            if ps > s.pressure {
                let shock = s.velocity
                    + c * ((g + 1.0) / (2.0 * g) * ps / s.pressure + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= shock {
                    s
                } else {
                    Primitive::new(star_density(ps, &s), us, ps)
                }
            } else {
                let head = s.velocity + c;
                let cs = c * (ps / s.pressure).powf((g - 1.0) / (2.0 * g));
                let tail = us + cs;
                if xi >= head {
                    s
                } else if xi <= tail {
                    Primitive::new(star_density(ps, &s), us, ps)
                } else {
                    let k = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * c) * (s.velocity - xi);
                    Primitive::new(
                        s.density * k.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.velocity + xi),
                        s.pressure * k.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        }
    }

    /// Shock speeds `(left, right)`; `None` on the side of a rarefaction.
    pub fn shock_speeds(&self) -> (Option<f64>, Option<f64>) {
        let g = GAMMA;
        let speed = |s: &Primitive, sign: f64| {
            s.velocity
                + sign
                    * s.sound_speed()
                    * ((g + 1.0) / (2.0 * g) * self.p_star / s.pressure + (g - 1.0) / (2.0 * g))
                        .sqrt()
        };
        (
            (self.p_star > self.left.pressure).then(|| speed(&self.left, -1.0)),
            (self.p_star > self.right.pressure).then(|| speed(&self.right, 1.0)),
        )
    }
}

fn star_density(ps: f64, s: &Primitive) -> f64 {
    let g = GAMMA;
    let pr = ps / s.pressure;
    if ps > s.pressure {
        let gm = (g - 1.0) / (g + 1.0);
        s.density * (pr + gm) / (gm * pr + 1.0)
    } else {
        s.density * pr.powf(1.0 / g)
    }
}

/// Exact solution of a Riemann problem at similarity coordinate `xi = x/t`.
pub fn exact_riemann(left: Primitive, right: Primitive, xi: f64) -> Result<Primitive> {
    Ok(RiemannSolution::solve(left, right)?.sample(xi))
}
