//! Access to neighbouring cells, including ghost cells built from boundary conditions.

use super::boundary::{
    mirror_modes, project_state_1d, project_state_2d, reflect_modes, BoundaryCondition,
    BoundarySpec1D, BoundarySpec2D,
};
use super::solution::{DGSolution1D, DGSolution2D};
use crate::error::{Error, Result};
use crate::physics::{Axis, FluxModel};

/// Copy cell `k` (which may lie outside `0..K`) into `buf`; returns its width.
pub(crate) fn cell_1d<F: FluxModel + ?Sized>(
    sol: &DGSolution1D,
    model: &F,
    bc: &BoundarySpec1D,
    k: isize,
    t: f64,
    buf: &mut [f64],
) -> Result<f64> {
    let nk = sol.num_cells() as isize;
    if (0..nk).contains(&k) {
        buf.copy_from_slice(sol.cell(k as usize));
        return Ok(sol.mesh.width(k as usize));
    }
    let (side_bc, layer, x0) = if k < 0 {
        (&bc.left, (-1 - k) as usize, sol.mesh.x_left())
    } else {
        (&bc.right, (k - nk) as usize, sol.mesh.x_right())
    };
    if layer >= sol.num_cells() {
        return Err(Error::Config(format!("ghost layer {layer} deeper than the mesh")));
    }
    // interior cell mirrored onto this ghost
    let mirror = if k < 0 { layer } else { sol.num_cells() - 1 - layer };
    let h = sol.mesh.width(mirror);
    let nvars = sol.nvars();
    match side_bc {
        BoundaryCondition::Periodic => {
            let wrapped = k.rem_euclid(nk) as usize;
            buf.copy_from_slice(sol.cell(wrapped));
            Ok(sol.mesh.width(wrapped))
        }
        BoundaryCondition::Outflow | BoundaryCondition::Reflective => {
            buf.copy_from_slice(sol.cell(mirror));
            mirror_modes(buf, nvars, |n| n % 2 == 1);
            if matches!(side_bc, BoundaryCondition::Reflective) {
                reflect_modes(model, buf, nvars, Axis::X);
            }
            Ok(h)
        }
        BoundaryCondition::Prescribed(f) => {
            let (a, b) = sol.mesh.cell(mirror);
            // reflect [a, b] about the boundary node x0
            let (gl, gr) = (2.0 * x0 - b, 2.0 * x0 - a);
            project_state_1d(f, (gl, gr), t, sol.degree(), nvars, buf);
            Ok(h)
        }
        BoundaryCondition::Split { .. } => {
            Err(Error::Config("split boundary on a 1D domain".into()))
        }
    }
}

/// Copy cell `(i, j)` into `buf`; at most one index may lie outside the mesh.
/// Returns `(h_x, h_y)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cell_2d<F: FluxModel + ?Sized>(
    sol: &DGSolution2D,
    model: &F,
    bc: &BoundarySpec2D,
    i: isize,
    j: isize,
    t: f64,
    buf: &mut [f64],
) -> Result<(f64, f64)> {
    let (nx, ny) = (sol.mesh.nx() as isize, sol.mesh.ny() as isize);
    let in_x = (0..nx).contains(&i);
    let in_y = (0..ny).contains(&j);
    if in_x && in_y {
        buf.copy_from_slice(sol.cell(i as usize, j as usize));
        return Ok((sol.mesh.x.width(i as usize), sol.mesh.y.width(j as usize)));
    }
    if !in_x && !in_y {
        return Err(Error::Internal("corner ghost cells are not defined".into()));
    }
    let np = sol.degree() + 1;
    let nvars = sol.nvars();
    let (axis, idx, n, edge_bc, along) = if !in_x {
        let jj = j as usize;
        let bc = if i < 0 { &bc.left } else { &bc.right };
        (Axis::X, i, nx, bc, sol.mesh.y.center(jj))
    } else {
        let ii = i as usize;
        let bc = if j < 0 { &bc.bottom } else { &bc.top };
        (Axis::Y, j, ny, bc, sol.mesh.x.center(ii))
    };
    let layer = if idx < 0 { (-1 - idx) as usize } else { (idx - n) as usize };
    if layer >= n as usize {
        return Err(Error::Config(format!("ghost layer {layer} deeper than the mesh")));
    }
    let mirror = if idx < 0 { layer } else { n as usize - 1 - layer };
    let (mi, mj) = match axis {
        Axis::X => (mirror, j as usize),
        Axis::Y => (i as usize, mirror),
    };
    let widths = (sol.mesh.x.width(mi), sol.mesh.y.width(mj));
    match edge_bc.resolve(along) {
        BoundaryCondition::Periodic => {
            let w = idx.rem_euclid(n) as usize;
            let (wi, wj) = match axis {
                Axis::X => (w, j as usize),
                Axis::Y => (i as usize, w),
            };
            buf.copy_from_slice(sol.cell(wi, wj));
            Ok((sol.mesh.x.width(wi), sol.mesh.y.width(wj)))
        }
        bc @ (BoundaryCondition::Outflow | BoundaryCondition::Reflective) => {
            buf.copy_from_slice(sol.cell(mi, mj));
            match axis {
                Axis::X => mirror_modes(buf, nvars, |m| (m % np) % 2 == 1),
                Axis::Y => mirror_modes(buf, nvars, |m| (m / np) % 2 == 1),
            }
            if matches!(bc, BoundaryCondition::Reflective) {
                reflect_modes(model, buf, nvars, axis);
            }
            Ok(widths)
        }
        BoundaryCondition::Prescribed(f) => {
            let (cx, cy) = (sol.mesh.x.cell(mi), sol.mesh.y.cell(mj));
            let (cx, cy) = match axis {
                Axis::X => {
                    let x0 = if idx < 0 { sol.mesh.x.x_left() } else { sol.mesh.x.x_right() };
                    ((2.0 * x0 - cx.1, 2.0 * x0 - cx.0), cy)
                }
                Axis::Y => {
                    let y0 = if idx < 0 { sol.mesh.y.x_left() } else { sol.mesh.y.x_right() };
                    (cx, (2.0 * y0 - cy.1, 2.0 * y0 - cy.0))
                }
            };
            project_state_2d(f, cx, cy, t, sol.degree(), nvars, buf);
            Ok(widths)
        }
        BoundaryCondition::Split { .. } => unreachable!("resolved"),
    }
}
