//! KXRCF troubled-cell indicator.
//!
//! A cell is flagged when `|∫ (u_j - u_nb) ds| / (h^((N+1)/2) |∂I| max|u_j|) > C_k` on its
//! inflow faces, where inflow is decided by the sign of the transport speed at the cell mean.

use crate::basis::{tensor_grid_values, BasisSet};
use crate::dg::neighbors::{cell_1d, cell_2d};
use crate::dg::{BoundarySpec1D, BoundarySpec2D, DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::physics::{Axis, FluxModel, MAX_VARS};
use crate::quadrature::gauss_rule;

pub const DEFAULT_THRESHOLD: f64 = 1.0;

/// Per-direction troubled-cell flags on a 2D mesh, indexed like the mesh cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mask2D {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl Mask2D {
    pub fn any(&self, cell: usize) -> bool {
        self.x[cell] || self.y[cell]
    }

    pub fn count(&self) -> usize {
        (0..self.x.len()).filter(|&c| self.any(c)).count()
    }
}

fn ratio_exceeds(jump: f64, scale: f64, threshold: f64) -> bool {
    if jump <= 1e-14 * scale.max(1e-300) || jump == 0.0 {
        return false;
    }
    scale == 0.0 || jump / scale > threshold
}

/// Flag troubled cells of a 1D solution.
pub fn kxrcf_detect(
    sol: &DGSolution1D,
    model: &dyn FluxModel,
    bc: &BoundarySpec1D,
    t: f64,
    threshold: f64,
) -> Result<Vec<bool>> {
    let degree = sol.degree();
    if degree == 0 {
        return Err(Error::Unsupported("troubled-cell detection needs N >= 1".into()));
    }
    let np = degree + 1;
    let m = sol.nvars();
    let basis = BasisSet::new(degree);
    let rule = gauss_rule(degree + 2)?;
    let table = basis.table(&rule.points);
    let (lo, hi) = (basis.values(-1.0), basis.values(1.0));
    let vars = model.indicator_vars();
    let power = (degree as f64 + 1.0) / 2.0;
    let mut nb = vec![0.0; m * np];
    let mut mean = [0.0; MAX_VARS];
    let mut flags = vec![false; sol.num_cells()];
    for (k, flag) in flags.iter_mut().enumerate() {
        let c = sol.cell(k);
        for v in 0..m {
            mean[v] = sol.cell_average(k, v);
        }
        let speed = model.advection_speed(&mean[..m], Axis::X);
        if speed == 0.0 {
            continue;
        }
        // inflow face: left for positive speed
        let (nb_idx, own, theirs) = if speed > 0.0 {
            (k as isize - 1, &lo, &hi)
        } else {
            (k as isize + 1, &hi, &lo)
        };
        cell_1d(sol, model, bc, nb_idx, t, &mut nb)?;
        let h = sol.mesh.width(k);
        for &v in vars {
            let cv = &c[v * np..(v + 1) * np];
            let jump = (dot(cv, own) - dot(&nb[v * np..(v + 1) * np], theirs)).abs();
            let norm = (0..rule.len())
                .map(|q| dot(cv, &table[q * np..(q + 1) * np]).abs())
                .fold(0.0, f64::max);
            if ratio_exceeds(jump, h.powf(power) * norm, threshold) {
                *flag = true;
                break;
            }
        }
    }
    Ok(flags)
}

/// Flag troubled cells of a 2D solution separately in each direction.
pub fn kxrcf_detect_2d(
    sol: &DGSolution2D,
    model: &dyn FluxModel,
    bc: &BoundarySpec2D,
    t: f64,
    threshold: f64,
) -> Result<Mask2D> {
    let degree = sol.degree();
    if degree == 0 {
        return Err(Error::Unsupported("troubled-cell detection needs N >= 1".into()));
    }
    let np = degree + 1;
    let np2 = np * np;
    let m = sol.nvars();
    let basis = BasisSet::new(degree);
    let rule = gauss_rule(degree + 2)?;
    let nq = rule.len();
    let table = basis.table(&rule.points);
    let (lo, hi) = (basis.values(-1.0), basis.values(1.0));
    let vars = model.indicator_vars();
    let power = (degree as f64 + 1.0) / 2.0;
    let (nx, ny) = (sol.mesh.nx(), sol.mesh.ny());
    let mut nb = vec![0.0; m * np2];
    let mut mean = [0.0; MAX_VARS];
    let mut mask = Mask2D {
        x: vec![false; nx * ny],
        y: vec![false; nx * ny],
    };
    let mut own_line = vec![0.0; np];
    let mut tmp = vec![0.0; np * nq];
    let mut grid = vec![0.0; nq * nq];
    let mut nb_line = vec![0.0; np];
    for j in 0..ny {
        for i in 0..nx {
            let cell = sol.mesh.index(i, j);
            let c = sol.cell(i, j);
            for v in 0..m {
                mean[v] = sol.cell_average(i, j, v);
            }
            let (hx, hy) = (sol.mesh.x.width(i), sol.mesh.y.width(j));
            let mut norms = [0.0; MAX_VARS];
            for &v in vars {
                tensor_grid_values(&c[v * np2..(v + 1) * np2], np, &table, &mut tmp, &mut grid);
                norms[v] = grid.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            }
            for axis in [Axis::X, Axis::Y] {
                let speed = model.advection_speed(&mean[..m], axis);
                if speed == 0.0 {
                    continue;
                }
                let step = if speed > 0.0 { -1 } else { 1 };
                let (ni, nj) = match axis {
                    Axis::X => (i as isize + step, j as isize),
                    Axis::Y => (i as isize, j as isize + step),
                };
                cell_2d(sol, model, bc, ni, nj, t, &mut nb)?;
                let (own, theirs) = if speed > 0.0 { (&lo, &hi) } else { (&hi, &lo) };
                let (h, face) = match axis {
                    Axis::X => (hx, hy),
                    Axis::Y => (hy, hx),
                };
                let mut flagged = false;
                for &v in vars {
                    let cv = &c[v * np2..(v + 1) * np2];
                    let nv = &nb[v * np2..(v + 1) * np2];
                    // collapse the normal direction onto the face: line coefficients along it
                    for t_mode in 0..np {
                        let (mut so, mut sn) = (0.0, 0.0);
                        for n_mode in 0..np {
                            let idx = match axis {
                                Axis::X => t_mode * np + n_mode,
                                Axis::Y => n_mode * np + t_mode,
                            };
                            so += cv[idx] * own[n_mode];
                            sn += nv[idx] * theirs[n_mode];
                        }
                        own_line[t_mode] = so;
                        nb_line[t_mode] = sn;
                    }
                    // ∫ over the face = (face/2) Σ w_q (own - nb)(s_q)
                    let mut integral = 0.0;
                    for q in 0..nq {
                        let phi = &table[q * np..(q + 1) * np];
                        integral += rule.weights[q] * (dot(&own_line, phi) - dot(&nb_line, phi));
                    }
                    let jump = (0.5 * face * integral).abs();
                    if ratio_exceeds(jump, h.powf(power) * face * norms[v], threshold) {
                        flagged = true;
                        break;
                    }
                }
                match axis {
                    Axis::X => mask.x[cell] = flagged,
                    Axis::Y => mask.y[cell] = flagged,
                }
            }
        }
    }
    Ok(mask)
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_uniform_1d, build_uniform_2d};
    use crate::physics::{Burgers, Euler1D, Euler2D, EulerState};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn burgers_mask(sol: &DGSolution1D) -> Vec<bool> {
        kxrcf_detect(sol, &Burgers, &BoundarySpec1D::periodic(), 0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_solution_not_flagged() {
        let mesh = build_uniform_1d(0.0, 1.0, 20).unwrap();
        let sol = DGSolution1D::project(mesh, 2, 1, |_, o| o[0] = 0.7).unwrap();
        assert!(burgers_mask(&sol).iter().all(|f| !f));
    }

    #[test]
    fn step_cell_flagged() {
        // step at x = 0.51 inside cell 10 of 20; positive speed so the cell downstream of the
        // jump sees it across its inflow face
        let mesh = build_uniform_1d(0.0, 1.0, 20).unwrap();
        let sol =
            DGSolution1D::project(mesh, 2, 1, |x, o| o[0] = if x < 0.51 { 2.0 } else { 1.0 })
                .unwrap();
        for ck in [0.1, 0.5, 1.0] {
            let mask =
                kxrcf_detect(&sol, &Burgers, &BoundarySpec1D::periodic(), 0.0, ck).unwrap();
            assert!(mask[10] || mask[11], "C_k = {ck}: {mask:?}");
        }
    }

    #[test]
    fn smooth_flag_fraction_vanishes() {
        let mut fractions = Vec::new();
        for k in [20, 80, 320] {
            let mesh = build_uniform_1d(0.0, 2.0 * PI, k).unwrap();
            let sol = DGSolution1D::project(mesh, 2, 1, |x, o| o[0] = 0.5 + x.sin()).unwrap();
            let n = burgers_mask(&sol).iter().filter(|&&f| f).count();
            fractions.push(n as f64 / k as f64);
        }
        assert_eq!(*fractions.last().unwrap(), 0.0, "{fractions:?}");
    }

    #[test]
    fn degree_zero_unsupported() {
        let mesh = build_uniform_1d(0.0, 1.0, 4).unwrap();
        let sol = DGSolution1D::zeros(mesh, 0, 1);
        assert!(matches!(
            kxrcf_detect(&sol, &Burgers, &BoundarySpec1D::periodic(), 0.0, 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn euler_contact_flagged_by_density() {
        let mesh = build_uniform_1d(0.0, 1.0, 20).unwrap();
        let sol = DGSolution1D::project(mesh, 1, 3, |x, o| {
            let rho = if x < 0.52 { 1.0 } else { 0.125 };
            o.copy_from_slice(&EulerState::from_primitive_1d(rho, 1.0, 1.0).to_conserved_1d());
        })
        .unwrap();
        let bc = BoundarySpec1D::both(crate::dg::BoundaryCondition::Outflow);
        let mask = kxrcf_detect(&sol, &Euler1D, &bc, 0.0, 1.0).unwrap();
        assert!(mask[10] || mask[11]);
        assert!(!mask[3]);
    }

    #[test]
    fn two_d_flags_only_across_the_jump() {
        let mesh = build_uniform_2d((0.0, 1.0), (0.0, 1.0), 10, 10).unwrap();
        let sol = DGSolution2D::project(mesh, 2, 4, |x, _, o| {
            let rho = if x < 0.53 { 1.0 } else { 0.2 };
            o.copy_from_slice(&EulerState::from_primitive(rho, [1.0, 0.5], 1.0).to_conserved_2d());
        })
        .unwrap();
        let mask = kxrcf_detect_2d(&sol, &Euler2D, &BoundarySpec2D::periodic(), 0.0, 1.0).unwrap();
        assert!((0..10).all(|j| mask.x[j * 10 + 5] || mask.x[j * 10 + 6]));
        assert!(mask.y.iter().all(|f| !f));
    }

    proptest! {
        #[test]
        fn positive_scaling_keeps_mask(scale in 0.1f64..10.0, shift in 0.0f64..3.0) {
            let mesh = build_uniform_1d(0.0, 1.0, 16).unwrap();
            let f = |x: f64| 1.0 + shift * (x > 0.4) as u8 as f64 + (6.0 * x).sin() * 0.3;
            let a = DGSolution1D::project(mesh.clone(), 2, 1, |x, o| o[0] = f(x)).unwrap();
            let b = DGSolution1D::project(mesh, 2, 1, |x, o| o[0] = scale * f(x)).unwrap();
            prop_assert_eq!(burgers_mask(&a), burgers_mask(&b));
        }
    }
}
