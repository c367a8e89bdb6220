use super::{Axis, FluxModel};
use crate::error::{Error, Result};

/// Ratio of specific heats of the ideal gas.
pub const GAMMA: f64 = 1.4;

/// Conserved Euler state `(rho, rho*u, rho*v, E)`; `v = 0` in 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub density: f64,
    pub momentum: [f64; 2],
    pub energy: f64,
}

impl EulerState {
    pub fn from_primitive(density: f64, velocity: [f64; 2], pressure: f64) -> Self {
        let ke = 0.5 * density * (velocity[0] * velocity[0] + velocity[1] * velocity[1]);
        Self {
            density,
            momentum: [density * velocity[0], density * velocity[1]],
            energy: pressure / (GAMMA - 1.0) + ke,
        }
    }

    pub fn from_primitive_1d(density: f64, velocity: f64, pressure: f64) -> Self {
        Self::from_primitive(density, [velocity, 0.0], pressure)
    }

    pub fn from_conserved_1d(u: &[f64]) -> Self {
        Self {
            density: u[0],
            momentum: [u[1], 0.0],
            energy: u[2],
        }
    }

    pub fn from_conserved_2d(u: &[f64]) -> Self {
        Self {
            density: u[0],
            momentum: [u[1], u[2]],
            energy: u[3],
        }
    }

    pub fn to_conserved_1d(&self) -> [f64; 3] {
        [self.density, self.momentum[0], self.energy]
    }

    pub fn to_conserved_2d(&self) -> [f64; 4] {
        [self.density, self.momentum[0], self.momentum[1], self.energy]
    }

    pub fn velocity(&self) -> [f64; 2] {
        [self.momentum[0] / self.density, self.momentum[1] / self.density]
    }

    pub fn pressure(&self) -> f64 {
        let [mx, my] = self.momentum;
        (GAMMA - 1.0) * (self.energy - 0.5 * (mx * mx + my * my) / self.density)
    }

    pub fn sound_speed(&self) -> f64 {
        (GAMMA * self.pressure() / self.density).sqrt()
    }

    pub fn is_admissible(&self) -> bool {
        self.density > 0.0 && self.pressure() > 0.0 && self.energy.is_finite()
    }

    /// Flux vector `u U + (0, p, 0, p u)` along `axis` (2D layout).
    pub fn flux(&self, axis: Axis) -> Result<[f64; 4]> {
        if !self.is_admissible() {
            return Err(Error::state(0, format!("{self:?}")));
        }
        let mut out = [0.0; 4];
        flux_2d(&self.to_conserved_2d(), axis, &mut out);
        Ok(out)
    }
}

#[inline]
fn pressure_1d(u: &[f64]) -> f64 {
    (GAMMA - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
}

#[inline]
fn pressure_2d(u: &[f64]) -> f64 {
    (GAMMA - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
}

#[inline]
fn flux_2d(u: &[f64], axis: Axis, out: &mut [f64]) {
    let p = pressure_2d(u);
    let (n, t) = match axis {
        Axis::X => (1, 2),
        Axis::Y => (2, 1),
    };
    let vn = u[n] / u[0];
    out[0] = u[n];
    out[n] = u[n] * vn + p;
    out[t] = u[t] * vn;
    out[3] = (u[3] + p) * vn;
}

fn check(rho: f64, p: f64, u: &[f64]) -> std::result::Result<(), String> {
    if !u.iter().all(|v| v.is_finite()) {
        Err("non-finite value".into())
    } else if rho <= 0.0 {
        Err(format!("density {rho:.6e} <= 0"))
    } else if p <= 0.0 {
        Err(format!("pressure {p:.6e} <= 0"))
    } else {
        Ok(())
    }
}

/// One-dimensional Euler equations, `U = (rho, rho u, E)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euler1D;

impl FluxModel for Euler1D {
    fn name(&self) -> &'static str {
        "euler1d"
    }

    fn num_vars(&self) -> usize {
        3
    }

    #[inline]
    fn flux(&self, u: &[f64], _axis: Axis, out: &mut [f64]) {
        let p = pressure_1d(u);
        let vel = u[1] / u[0];
        out[0] = u[1];
        out[1] = u[1] * vel + p;
        out[2] = (u[2] + p) * vel;
    }

    #[inline]
    fn max_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        let p = pressure_1d(u).max(0.0);
        (u[1] / u[0]).abs() + (GAMMA * p / u[0]).sqrt()
    }

    fn check_state(&self, u: &[f64]) -> std::result::Result<(), String> {
        check(u[0], pressure_1d(u), u)
    }

    fn characteristics(
        &self,
        u_ref: &[f64],
        _axis: Axis,
        left: &mut [f64],
        right: &mut [f64],
    ) -> crate::error::Result<bool> {
        self.check_state(u_ref)
            .map_err(|m| Error::state(0, format!("characteristic reference state: {m}")))?;
        let rho = u_ref[0];
        let u = u_ref[1] / rho;
        let p = pressure_1d(u_ref);
        let c = (GAMMA * p / rho).sqrt();
        let h = (u_ref[2] + p) / rho;
        let b1 = (GAMMA - 1.0) / (c * c);
        let b2 = 0.5 * b1 * u * u;
        right.copy_from_slice(&[
            1.0, 1.0, 1.0, //
            u - c, u, u + c, //
            h - u * c, 0.5 * u * u, h + u * c,
        ]);
        left.copy_from_slice(&[
            0.5 * (b2 + u / c), 0.5 * (-b1 * u - 1.0 / c), 0.5 * b1, //
            1.0 - b2, b1 * u, -b1, //
            0.5 * (b2 - u / c), 0.5 * (-b1 * u + 1.0 / c), 0.5 * b1,
        ]);
        Ok(true)
    }

    fn reflect(&self, u: &mut [f64], _axis: Axis) {
        u[1] = -u[1];
    }

    fn advection_speed(&self, u: &[f64], _axis: Axis) -> f64 {
        u[1] / u[0]
    }

    fn indicator_vars(&self) -> &'static [usize] {
        &[0, 2]
    }

    fn is_euler(&self) -> bool {
        true
    }
}

/// Two-dimensional Euler equations, `U = (rho, rho u, rho v, E)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euler2D;

impl FluxModel for Euler2D {
    fn name(&self) -> &'static str {
        "euler2d"
    }

    fn num_vars(&self) -> usize {
        4
    }

    #[inline]
    fn flux(&self, u: &[f64], axis: Axis, out: &mut [f64]) {
        flux_2d(u, axis, out);
    }

    #[inline]
    fn max_speed(&self, u: &[f64], axis: Axis) -> f64 {
        let p = pressure_2d(u).max(0.0);
        let n = match axis {
            Axis::X => 1,
            Axis::Y => 2,
        };
        (u[n] / u[0]).abs() + (GAMMA * p / u[0]).sqrt()
    }

    fn check_state(&self, u: &[f64]) -> std::result::Result<(), String> {
        check(u[0], pressure_2d(u), u)
    }

    fn characteristics(
        &self,
        u_ref: &[f64],
        axis: Axis,
        left: &mut [f64],
        right: &mut [f64],
    ) -> crate::error::Result<bool> {
        self.check_state(u_ref)
            .map_err(|m| Error::state(0, format!("characteristic reference state: {m}")))?;
        let rho = u_ref[0];
        let p = pressure_2d(u_ref);
        let c = (GAMMA * p / rho).sqrt();
        let h = (u_ref[3] + p) / rho;
        // normal/tangential velocity components and their slots in U
        let (n, t) = match axis {
            Axis::X => (1, 2),
            Axis::Y => (2, 1),
        };
        let un = u_ref[n] / rho;
        let ut = u_ref[t] / rho;
        let q2 = un * un + ut * ut;
        let b1 = (GAMMA - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;

        // columns: u-c, u (entropy), u (shear), u+c
        let mut r = [[0.0; 4]; 4]; // r[component][wave]
        r[0] = [1.0, 1.0, 0.0, 1.0];
        r[n] = [un - c, un, 0.0, un + c];
        r[t] = [ut, ut, 1.0, ut];
        r[3] = [h - un * c, 0.5 * q2, ut, h + un * c];

        let mut l = [[0.0; 4]; 4]; // l[wave][component]
        l[0][0] = 0.5 * (b2 + un / c);
        l[0][n] = 0.5 * (-b1 * un - 1.0 / c);
        l[0][t] = -0.5 * b1 * ut;
        l[0][3] = 0.5 * b1;
        l[1][0] = 1.0 - b2;
        l[1][n] = b1 * un;
        l[1][t] = b1 * ut;
        l[1][3] = -b1;
        l[2][0] = -ut;
        l[2][n] = 0.0;
        l[2][t] = 1.0;
        l[2][3] = 0.0;
        l[3][0] = 0.5 * (b2 - un / c);
        l[3][n] = 0.5 * (-b1 * un + 1.0 / c);
        l[3][t] = -0.5 * b1 * ut;
        l[3][3] = 0.5 * b1;

        for i in 0..4 {
            for j in 0..4 {
                right[i * 4 + j] = r[i][j];
                left[i * 4 + j] = l[i][j];
            }
        }
        Ok(true)
    }

    fn reflect(&self, u: &mut [f64], axis: Axis) {
        match axis {
            Axis::X => u[1] = -u[1],
            Axis::Y => u[2] = -u[2],
        }
    }

    fn advection_speed(&self, u: &[f64], axis: Axis) -> f64 {
        match axis {
            Axis::X => u[1] / u[0],
            Axis::Y => u[2] / u[0],
        }
    }

    fn indicator_vars(&self) -> &'static [usize] {
        &[0, 3]
    }

    fn is_euler(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::mat_vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
        let mut c = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                c[i * m + j] = (0..m).map(|k| a[i * m + k] * b[k * m + j]).sum();
            }
        }
        c
    }

    fn fd_jacobian(model: &dyn FluxModel, u: &[f64], axis: Axis) -> Vec<f64> {
        let m = u.len();
        let mut jac = vec![0.0; m * m];
        let mut fp = vec![0.0; m];
        let mut fm = vec![0.0; m];
        for j in 0..m {
            let d = 1e-6 * u[j].abs().max(1.0);
            let mut up = u.to_vec();
            let mut um = u.to_vec();
            up[j] += d;
            um[j] -= d;
            model.flux(&up, axis, &mut fp);
            model.flux(&um, axis, &mut fm);
            for i in 0..m {
                jac[i * m + j] = (fp[i] - fm[i]) / (2.0 * d);
            }
        }
        jac
    }

    fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
        let rho = rng.random_range(0.1..5.0);
        let u = rng.random_range(-3.0..3.0);
        let v = rng.random_range(-3.0..3.0);
        let p = rng.random_range(0.05..10.0);
        let s = EulerState::from_primitive(rho, [u, if dim == 1 { 0.0 } else { v }], p);
        if dim == 1 {
            s.to_conserved_1d().to_vec()
        } else {
            s.to_conserved_2d().to_vec()
        }
    }

    #[test]
    fn flux_examples() {
        let mut f = [0.0; 3];
        Euler1D.flux(&[1.0, 0.0, 2.5], Axis::X, &mut f);
        assert_eq!(f[0], 0.0);
        assert!((f[1] - 1.0).abs() < 1e-15);
        assert_eq!(f[2], 0.0);
        let s = EulerState::from_primitive(1.3, [0.0, 0.0], 2.0);
        let fx = s.flux(Axis::X).unwrap();
        let fy = s.flux(Axis::Y).unwrap();
        assert!((fx[1] - 2.0).abs() < 1e-15 && fx[0] == 0.0 && fx[2] == 0.0);
        assert!((fy[2] - 2.0).abs() < 1e-15 && fy[0] == 0.0 && fy[1] == 0.0);
        let sod = EulerState::from_primitive_1d(1.0, 0.0, 1.0);
        assert!((sod.energy - 2.5).abs() < 1e-15);
        let bad = EulerState::from_primitive_1d(1.0, 0.0, -1.0);
        assert!(bad.flux(Axis::X).is_err());
    }

    #[test]
    fn eigenvectors_diagonalize_jacobian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1usize, 2] {
            let model: &dyn FluxModel = if dim == 1 { &Euler1D } else { &Euler2D };
            let m = model.num_vars();
            let axes: &[Axis] = if dim == 1 { &[Axis::X] } else { &[Axis::X, Axis::Y] };
            for _ in 0..200 {
                let u = random_state(&mut rng, dim);
                for &axis in axes {
                    let mut l = vec![0.0; m * m];
                    let mut r = vec![0.0; m * m];
                    assert!(model.characteristics(&u, axis, &mut l, &mut r).unwrap());
                    let lr = matmul(&l, &r, m);
                    for i in 0..m {
                        for j in 0..m {
                            let e = if i == j { 1.0 } else { 0.0 };
                            assert!((lr[i * m + j] - e).abs() < 1e-10);
                        }
                    }
                    let a = fd_jacobian(model, &u, axis);
                    let d = matmul(&matmul(&l, &a, m), &r, m);
                    let s = EulerState::from_conserved_2d(&if dim == 1 {
                        vec![u[0], u[1], 0.0, u[2]]
                    } else {
                        u.clone()
                    });
                    let vn = s.velocity()[if axis == Axis::X { 0 } else { 1 }];
                    let c = s.sound_speed();
                    let mut expect = vec![vn - c];
                    expect.extend(std::iter::repeat_n(vn, m - 2));
                    expect.push(vn + c);
                    let scale = a.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
                    for i in 0..m {
                        for j in 0..m {
                            let e = if i == j { expect[i] } else { 0.0 };
                            assert!(
                                (d[i * m + j] - e).abs() < 1e-8 * scale * 10.0,
                                "dim {dim} {axis:?} ({i},{j}): {} vs {e}",
                                d[i * m + j]
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_transform_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_state(&mut rng, 2);
        let mut l = [0.0; 16];
        let mut r = [0.0; 16];
        Euler2D.characteristics(&u, Axis::Y, &mut l, &mut r).unwrap();
        for _ in 0..100 {
            let w: Vec<f64> = (0..4).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mut c = [0.0; 4];
            let mut back = [0.0; 4];
            mat_vec(&l, &w, &mut c);
            mat_vec(&r, &c, &mut back);
            for i in 0..4 {
                assert!((back[i] - w[i]).abs() < 1e-12 * 10.0);
            }
        }
    }

    #[test]
    fn max_speed_bounds_jacobian_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = random_state(&mut rng, 2);
            for axis in [Axis::X, Axis::Y] {
                let a = fd_jacobian(&Euler2D, &u, axis);
                let jac = nalgebra::DMatrix::from_row_slice(4, 4, &a);
                let ev = jac.complex_eigenvalues();
                let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(Euler2D.max_speed(&u, axis) >= rho - 1e-8 * rho.max(1.0));
            }
            let u1 = random_state(&mut rng, 1);
            let a = fd_jacobian(&Euler1D, &u1, Axis::X);
            let jac = nalgebra::DMatrix::from_row_slice(3, 3, &a);
            let rho = jac.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(Euler1D.max_speed(&u1, Axis::X) >= rho - 1e-8 * rho.max(1.0));
        }
    }
}
