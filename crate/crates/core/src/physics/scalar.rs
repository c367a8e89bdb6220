use super::{Axis, FluxModel};

pub fn burgers_flux(u: f64) -> f64 {
    0.5 * u * u
}

pub fn buckley_leverett_flux(u: f64) -> f64 {
    let u2 = u * u;
    4.0 * u2 / (4.0 * u2 + (1.0 - u) * (1.0 - u))
}

fn buckley_leverett_speed(u: f64) -> f64 {
    let d = 4.0 * u * u + (1.0 - u) * (1.0 - u);
    8.0 * u * (1.0 - u) / (d * d)
}

/// Inviscid Burgers, `f(u) = g(u) = u^2 / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl FluxModel for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    fn num_vars(&self) -> usize {
        1
    }

    #[inline]
    fn flux(&self, u: &[f64], _axis: Axis, out: &mut [f64]) {
        out[0] = burgers_flux(u[0]);
    }

    #[inline]
    fn max_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        u[0].abs()
    }

    fn advection_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        u[0]
    }
}

/// Linear advection `u_t + a u_x + b u_y = 0`.
#[derive(Debug, Clone, Copy)]
pub struct LinearAdvection {
    pub velocity: [f64; 2],
}

impl FluxModel for LinearAdvection {
    fn name(&self) -> &'static str {
        "advection"
    }

    fn num_vars(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64], axis: Axis, out: &mut [f64]) {
        out[0] = self.advection_speed(u, axis) * u[0];
    }

    fn max_speed(&self, u: &[f64], axis: Axis) -> f64 {
        self.advection_speed(u, axis).abs()
    }

    fn advection_speed(&self, _u: &[f64], axis: Axis) -> f64 {
        match axis {
            Axis::X => self.velocity[0],
            Axis::Y => self.velocity[1],
        }
    }
}

/// Buckley-Leverett, `f(u) = 4u^2 / (4u^2 + (1-u)^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuckleyLeverett;

impl FluxModel for BuckleyLeverett {
    fn name(&self) -> &'static str {
        "buckley-leverett"
    }

    fn num_vars(&self) -> usize {
        1
    }

    #[inline]
    fn flux(&self, u: &[f64], _axis: Axis, out: &mut [f64]) {
        out[0] = buckley_leverett_flux(u[0]);
    }

    #[inline]
    fn max_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        buckley_leverett_speed(u[0]).abs()
    }

    /// Largest `f'` over `[0, 1]`.
    fn speed_floor(&self) -> f64 {
        // f' is a single hump on [0, 1]
        let (mut a, mut b) = (0.0, 1.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if buckley_leverett_speed(c) < buckley_leverett_speed(d) {
                a = c;
            } else {
                b = d;
            }
        }
        buckley_leverett_speed(0.5 * (a + b))
    }

    fn advection_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        buckley_leverett_speed(u[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_values() {
        assert_eq!(burgers_flux(0.0), 0.0);
        assert_eq!(burgers_flux(1.0), 0.5);
        assert_eq!(burgers_flux(-3.0), 4.5);
        assert_eq!(buckley_leverett_flux(0.0), 0.0);
        assert_eq!(buckley_leverett_flux(1.0), 1.0);
        assert!((buckley_leverett_flux(0.5) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn speeds_match_finite_differences() {
        for i in 0..=100 {
            let u = -0.5 + 2.0 * i as f64 / 100.0;
            let d = 1e-6;
            let fd = (buckley_leverett_flux(u + d) - buckley_leverett_flux(u - d)) / (2.0 * d);
            assert!((fd - buckley_leverett_speed(u)).abs() < 1e-7);
            let fd = (burgers_flux(u + d) - burgers_flux(u - d)) / (2.0 * d);
            assert!(Burgers.max_speed(&[u], Axis::X) >= fd.abs() - 1e-8);
        }
    }

    #[test]
    fn buckley_floor_bounds_sampled_speeds() {
        let floor = BuckleyLeverett.speed_floor();
        let sampled = (0..=10_000).map(|i| buckley_leverett_speed(i as f64 / 10_000.0)).fold(0.0, f64::max);
        assert!(floor >= sampled - 1e-12 && floor < sampled + 1e-6, "{floor} {sampled}");
        assert_eq!(Burgers.speed_floor(), 0.0);
    }
}
