use std::sync::Arc;

use super::boundary::{ghost_trace, BoundarySpec2D};
use super::lax_friedrichs;
use super::solution::DGSolution2D;
use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::physics::{Axis, FluxModel, MAX_VARS};
use crate::quadrature::gauss_rule;

/// Lax-Friedrichs speeds used in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveSpeeds {
    pub x: f64,
    pub y: f64,
}

/// Semi-discrete DG operator on a tensor-product Cartesian mesh.
///
/// Volume and face integrals use `(N+2)`-point Gauss rules in each direction and are
/// evaluated by sum factorisation.
pub struct Dg2D {
    model: Arc<dyn FluxModel>,
    bc: BoundarySpec2D,
    degree: usize,
    nq: usize,
    points: Vec<f64>,
    kernel: Kernel,
    // cell traces [cell][q][var]
    tx_lo: Vec<f64>,
    tx_hi: Vec<f64>,
    ty_lo: Vec<f64>,
    ty_hi: Vec<f64>,
    // face states and fluxes [face][q][var]
    xf_l: Vec<f64>,
    xf_r: Vec<f64>,
    yf_l: Vec<f64>,
    yf_r: Vec<f64>,
    xflux: Vec<f64>,
    yflux: Vec<f64>,
}

impl Dg2D {
    pub fn new(model: Arc<dyn FluxModel>, bc: BoundarySpec2D, degree: usize) -> Result<Self> {
        bc.validate()?;
        if degree > 3 {
            return Err(Error::Unsupported(format!("2D operator of degree {degree}")));
        }
        let basis = BasisSet::new(degree);
        let rule = gauss_rule(degree + 2)?;
        let np = degree + 1;
        let vals = basis.table(&rule.points);
        let mut wvals = vals.clone();
        let mut wgrads = basis.derivative_table(&rule.points);
        for (q, w) in rule.weights.iter().enumerate() {
            for n in 0..np {
                wvals[q * np + n] *= w;
                wgrads[q * np + n] *= w;
            }
        }
        let (lo, hi) = (basis.values(-1.0), basis.values(1.0));
        let kernel = match degree {
            0 => Kernel::P0(Tables::new(&vals, &wvals, &wgrads, &lo, &hi)),
            1 => Kernel::P1(Tables::new(&vals, &wvals, &wgrads, &lo, &hi)),
            2 => Kernel::P2(Tables::new(&vals, &wvals, &wgrads, &lo, &hi)),
            _ => Kernel::P3(Tables::new(&vals, &wvals, &wgrads, &lo, &hi)),
        };
        Ok(Self {
            model,
            bc,
            degree,
            nq: rule.len(),
            points: rule.points.clone(),
            kernel,
            tx_lo: Vec::new(),
            tx_hi: Vec::new(),
            ty_lo: Vec::new(),
            ty_hi: Vec::new(),
            xf_l: Vec::new(),
            xf_r: Vec::new(),
            yf_l: Vec::new(),
            yf_r: Vec::new(),
            xflux: Vec::new(),
            yflux: Vec::new(),
        })
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        &self.model
    }

    pub fn boundary(&self) -> &BoundarySpec2D {
        &self.bc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Directional wave speeds over all face traces, boundary ghosts included.
    pub fn max_wave_speeds(&mut self, sol: &DGSolution2D, t: f64) -> Result<WaveSpeeds> {
        self.traces(sol)?;
        self.faces(sol, t);
        Ok(self.speeds())
    }

    pub fn compute_rhs(
        &mut self,
        sol: &DGSolution2D,
        t: f64,
        rhs: &mut [f64],
    ) -> Result<WaveSpeeds> {
        if sol.degree() != self.degree {
            return Err(Error::invalid("solution degree does not match the operator"));
        }
        self.traces(sol)?;
        self.faces(sol, t);
        let speeds = self.speeds();
        let m = sol.nvars();
        let nq = self.nq;
        let model = self.model.as_ref();

        let stride = nq * m;
        self.xflux.resize(self.xf_l.len(), 0.0);
        for ((l, r), out) in self
            .xf_l
            .chunks_exact(m)
            .zip(self.xf_r.chunks_exact(m))
            .zip(self.xflux.chunks_exact_mut(m))
        {
            lax_friedrichs(model, l, r, Axis::X, speeds.x, out);
        }
        self.yflux.resize(self.yf_l.len(), 0.0);
        for ((l, r), out) in self
            .yf_l
            .chunks_exact(m)
            .zip(self.yf_r.chunks_exact(m))
            .zip(self.yflux.chunks_exact_mut(m))
        {
            lax_friedrichs(model, l, r, Axis::Y, speeds.y, out);
        }

        let (nx, ny) = (sol.mesh.nx(), sol.mesh.ny());
        let np = self.degree + 1;
        let block = m * np * np;
        for j in 0..ny {
            let sy = 2.0 / sol.mesh.y.width(j);
            for i in 0..nx {
                let sx = 2.0 / sol.mesh.x.width(i);
                let cell = sol.mesh.index(i, j);
                let faces = [
                    &self.xflux[(j * (nx + 1) + i) * stride..][..stride],
                    &self.xflux[(j * (nx + 1) + i + 1) * stride..][..stride],
                    &self.yflux[(j * nx + i) * stride..][..stride],
                    &self.yflux[((j + 1) * nx + i) * stride..][..stride],
                ];
                let out = &mut rhs[cell * block..(cell + 1) * block];
                with_tables!(&self.kernel, tb => cell_rhs(tb, model, m, sol.cell(i, j), (sx, sy), faces, out))
                    .map_err(|msg| Error::state(cell, msg))?;
            }
        }
        Ok(speeds)
    }

    /// Traces of every cell on its four faces at the face quadrature points.
    fn traces(&mut self, sol: &DGSolution2D) -> Result<()> {
        let m = sol.nvars();
        let nq = self.nq;
        let n_cells = sol.num_cells();
        let stride = nq * m;
        for buf in [&mut self.tx_lo, &mut self.tx_hi, &mut self.ty_lo, &mut self.ty_hi] {
            buf.resize(n_cells * stride, 0.0);
        }
        for j in 0..sol.mesh.ny() {
            for i in 0..sol.mesh.nx() {
                let cell = sol.mesh.index(i, j);
                let c = sol.cell(i, j);
                let r = cell * stride..(cell + 1) * stride;
                let outs = [
                    &mut self.tx_lo[r.clone()],
                    &mut self.tx_hi[r.clone()],
                    &mut self.ty_lo[r.clone()],
                    &mut self.ty_hi[r],
                ];
                with_tables!(&self.kernel, tb => cell_traces(tb, m, c, outs));
                for buf in [&self.tx_lo, &self.tx_hi, &self.ty_lo, &self.ty_hi] {
                    for u in buf[cell * stride..(cell + 1) * stride].chunks_exact(m) {
                        if let Err(msg) = self.model.check_state(u) {
                            return Err(Error::state(cell, msg));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Left/right (lower/upper) states on every x-face and y-face.
    fn faces(&mut self, sol: &DGSolution2D, t: f64) {
        let m = sol.nvars();
        let nq = self.nq;
        let stride = nq * m;
        let (nx, ny) = (sol.mesh.nx(), sol.mesh.ny());
        let model = self.model.as_ref();
        self.xf_l.resize((nx + 1) * ny * stride, 0.0);
        self.xf_r.resize((nx + 1) * ny * stride, 0.0);
        self.yf_l.resize(nx * (ny + 1) * stride, 0.0);
        self.yf_r.resize(nx * (ny + 1) * stride, 0.0);
        for j in 0..ny {
            for i in 0..=nx {
                let face = (j * (nx + 1) + i) * stride;
                if i > 0 {
                    let c = sol.mesh.index(i - 1, j) * stride;
                    self.xf_l[face..face + stride].copy_from_slice(&self.tx_hi[c..c + stride]);
                }
                if i < nx {
                    let c = sol.mesh.index(i, j) * stride;
                    self.xf_r[face..face + stride].copy_from_slice(&self.tx_lo[c..c + stride]);
                }
            }
            let cy = sol.mesh.y.cell(j);
            let first = sol.mesh.index(0, j) * stride;
            let last = sol.mesh.index(nx - 1, j) * stride;
            let lo_face = j * (nx + 1) * stride;
            let hi_face = (j * (nx + 1) + nx) * stride;
            let (xl, xr) = (sol.mesh.x.x_left(), sol.mesh.x.x_right());
            for q in 0..nq {
                let y = crate::basis::to_physical(cy, self.points[q]);
                let o = q * m;
                ghost_trace(
                    model,
                    &self.bc.left,
                    Axis::X,
                    y,
                    (xl, y),
                    t,
                    &self.tx_lo[first + o..first + o + m],
                    &self.tx_hi[last + o..last + o + m],
                    &mut self.xf_l[lo_face + o..lo_face + o + m],
                );
                ghost_trace(
                    model,
                    &self.bc.right,
                    Axis::X,
                    y,
                    (xr, y),
                    t,
                    &self.tx_hi[last + o..last + o + m],
                    &self.tx_lo[first + o..first + o + m],
                    &mut self.xf_r[hi_face + o..hi_face + o + m],
                );
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                let face = (j * nx + i) * stride;
                if j > 0 {
                    let c = sol.mesh.index(i, j - 1) * stride;
                    self.yf_l[face..face + stride].copy_from_slice(&self.ty_hi[c..c + stride]);
                }
                if j < ny {
                    let c = sol.mesh.index(i, j) * stride;
                    self.yf_r[face..face + stride].copy_from_slice(&self.ty_lo[c..c + stride]);
                }
            }
        }
        let (yb, yt) = (sol.mesh.y.x_left(), sol.mesh.y.x_right());
        for i in 0..nx {
            let cx = sol.mesh.x.cell(i);
            let first = sol.mesh.index(i, 0) * stride;
            let last = sol.mesh.index(i, ny - 1) * stride;
            let lo_face = i * stride;
            let hi_face = (ny * nx + i) * stride;
            for q in 0..nq {
                let x = crate::basis::to_physical(cx, self.points[q]);
                let o = q * m;
                ghost_trace(
                    model,
                    &self.bc.bottom,
                    Axis::Y,
                    x,
                    (x, yb),
                    t,
                    &self.ty_lo[first + o..first + o + m],
                    &self.ty_hi[last + o..last + o + m],
                    &mut self.yf_l[lo_face + o..lo_face + o + m],
                );
                ghost_trace(
                    model,
                    &self.bc.top,
                    Axis::Y,
                    x,
                    (x, yt),
                    t,
                    &self.ty_hi[last + o..last + o + m],
                    &self.ty_lo[first + o..first + o + m],
                    &mut self.yf_r[hi_face + o..hi_face + o + m],
                );
            }
        }
    }

    fn speeds(&self) -> WaveSpeeds {
        let m = self.model.num_vars();
        let model = self.model.as_ref();
        let max = |a: &[f64], b: &[f64], axis| {
            a.chunks_exact(m)
                .chain(b.chunks_exact(m))
                .map(|u| model.max_speed(u, axis))
                .fold(model.speed_floor(), f64::max)
        };
        WaveSpeeds {
            x: max(&self.xf_l, &self.xf_r, Axis::X),
            y: max(&self.yf_l, &self.yf_r, Axis::Y),
        }
    }
}

/// Basis tables with the number of modes `NP` and quadrature points `NQ` fixed at compile
/// time, so the per-cell loops unroll.
struct Tables<const NP: usize, const NQ: usize> {
    vals: [[f64; NP]; NQ],
    wvals: [[f64; NP]; NQ],
    wgrads: [[f64; NP]; NQ],
    lo: [f64; NP],
    hi: [f64; NP],
}

impl<const NP: usize, const NQ: usize> Tables<NP, NQ> {
    fn new(vals: &[f64], wvals: &[f64], wgrads: &[f64], lo: &[f64], hi: &[f64]) -> Self {
        let grid = |flat: &[f64]| std::array::from_fn(|q| std::array::from_fn(|n| flat[q * NP + n]));
        Self {
            vals: grid(vals),
            wvals: grid(wvals),
            wgrads: grid(wgrads),
            lo: std::array::from_fn(|n| lo[n]),
            hi: std::array::from_fn(|n| hi[n]),
        }
    }
}

enum Kernel {
    P0(Tables<1, 2>),
    P1(Tables<2, 3>),
    P2(Tables<3, 4>),
    P3(Tables<4, 5>),
}

macro_rules! with_tables {
    ($k:expr, $t:ident => $body:expr) => {
        match $k {
            Kernel::P0($t) => $body,
            Kernel::P1($t) => $body,
            Kernel::P2($t) => $body,
            Kernel::P3($t) => $body,
        }
    };
}
use with_tables;

/// Row `b` of variable `v` of a cell block stored `[v][b][a]`.
#[inline(always)]
fn row<const NP: usize>(c: &[f64], v: usize, b: usize) -> &[f64; NP] {
    c[(v * NP + b) * NP..(v * NP + b + 1) * NP].try_into().unwrap()
}

/// Four face traces `[q][v]` of one cell: x-low, x-high, y-low, y-high.
fn cell_traces<const NP: usize, const NQ: usize>(
    tb: &Tables<NP, NQ>,
    m: usize,
    c: &[f64],
    outs: [&mut [f64]; 4],
) {
    let [xl, xh, yl, yh] = outs;
    for v in 0..m {
        // collapse x modes at r = -1, 1 and y modes at s = -1, 1
        let (mut exl, mut exh, mut eyl, mut eyh) = ([0.0; NP], [0.0; NP], [0.0; NP], [0.0; NP]);
        for b in 0..NP {
            let r = row::<NP>(c, v, b);
            for a in 0..NP {
                exl[b] += r[a] * tb.lo[a];
                exh[b] += r[a] * tb.hi[a];
                eyl[a] += r[a] * tb.lo[b];
                eyh[a] += r[a] * tb.hi[b];
            }
        }
        for q in 0..NQ {
            let t = &tb.vals[q];
            let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
            for n in 0..NP {
                s0 += exl[n] * t[n];
                s1 += exh[n] * t[n];
                s2 += eyl[n] * t[n];
                s3 += eyh[n] * t[n];
            }
            xl[q * m + v] = s0;
            xh[q * m + v] = s1;
            yl[q * m + v] = s2;
            yh[q * m + v] = s3;
        }
    }
}

/// Volume and surface terms of one cell; `faces` holds the numerical fluxes `[q][v]` on
/// the x-low, x-high, y-low and y-high faces and `scale` is `(2/h_x, 2/h_y)`.
fn cell_rhs<const NP: usize, const NQ: usize>(
    tb: &Tables<NP, NQ>,
    model: &dyn FluxModel,
    m: usize,
    c: &[f64],
    scale: (f64, f64),
    faces: [&[f64]; 4],
    out: &mut [f64],
) -> std::result::Result<(), String> {
    let (sx, sy) = scale;
    // point values, then fluxes, [v][qy][qx]
    let mut fx = [[[0.0; NQ]; NQ]; MAX_VARS];
    let mut gy = [[[0.0; NQ]; NQ]; MAX_VARS];
    for v in 0..m {
        let mut tmp = [[0.0; NQ]; NP];
        for b in 0..NP {
            let r = row::<NP>(c, v, b);
            for qx in 0..NQ {
                let mut s = 0.0;
                for a in 0..NP {
                    s += r[a] * tb.vals[qx][a];
                }
                tmp[b][qx] = s;
            }
        }
        for qy in 0..NQ {
            for qx in 0..NQ {
                let mut s = 0.0;
                for b in 0..NP {
                    s += tmp[b][qx] * tb.vals[qy][b];
                }
                fx[v][qy][qx] = s;
            }
        }
    }
    let mut u = [0.0; MAX_VARS];
    let mut f = [0.0; MAX_VARS];
    let mut g = [0.0; MAX_VARS];
    for qy in 0..NQ {
        for qx in 0..NQ {
            for v in 0..m {
                u[v] = fx[v][qy][qx];
            }
            model.check_state(&u[..m])?;
            model.flux(&u[..m], Axis::X, &mut f[..m]);
            model.flux(&u[..m], Axis::Y, &mut g[..m]);
            for v in 0..m {
                fx[v][qy][qx] = f[v];
                gy[v][qy][qx] = g[v];
            }
        }
    }
    let [xlo, xhi, ylo, yhi] = faces;
    for v in 0..m {
        // a1[qy][a] = sum_qx Dw[qx][a] F, a2[qy][a] = sum_qx Tw[qx][a] G
        let mut a1 = [[0.0; NP]; NQ];
        let mut a2 = [[0.0; NP]; NQ];
        for qy in 0..NQ {
            for qx in 0..NQ {
                let (fv, gv) = (fx[v][qy][qx], gy[v][qy][qx]);
                for a in 0..NP {
                    a1[qy][a] += fv * tb.wgrads[qx][a];
                    a2[qy][a] += gv * tb.wvals[qx][a];
                }
            }
        }
        let mut o = [[0.0; NP]; NP];
        for qy in 0..NQ {
            for b in 0..NP {
                let (w1, w2) = (sx * tb.wvals[qy][b], sy * tb.wgrads[qy][b]);
                for a in 0..NP {
                    o[b][a] += w1 * a1[qy][a] + w2 * a2[qy][a];
                }
            }
        }
        // face integrals: sum_q Tw[q][n] F(q) along each face
        let (mut fxl, mut fxh, mut fyl, mut fyh) = ([0.0; NP], [0.0; NP], [0.0; NP], [0.0; NP]);
        for q in 0..NQ {
            let (a, b, cc, d) = (xlo[q * m + v], xhi[q * m + v], ylo[q * m + v], yhi[q * m + v]);
            for n in 0..NP {
                let w = tb.wvals[q][n];
                fxl[n] += w * a;
                fxh[n] += w * b;
                fyl[n] += w * cc;
                fyh[n] += w * d;
            }
        }
        for b in 0..NP {
            for a in 0..NP {
                let surf_x = fxh[b] * tb.hi[a] - fxl[b] * tb.lo[a];
                let surf_y = fyh[a] * tb.hi[b] - fyl[a] * tb.lo[b];
                out[(v * NP + b) * NP + a] = o[b][a] - sx * surf_x - sy * surf_y;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::BoundaryCondition;
    use crate::mesh::{build_uniform_2d, perturb_mesh_2d};
    use crate::physics::{Burgers, Euler2D, EulerState, LinearAdvection};
    use std::f64::consts::PI;

    #[test]
    fn free_stream_on_perturbed_mesh() {
        let mesh = build_uniform_2d((0.0, 1.0), (0.0, 2.0), 7, 5).unwrap();
        let mesh = perturb_mesh_2d(&mesh, 0.1, 42).unwrap();
        let u = EulerState::from_primitive(1.4, [0.3, -0.7], 2.0).to_conserved_2d();
        for degree in 0..=3 {
            let sol = DGSolution2D::project(mesh.clone(), degree, 4, |_, _, o| o.copy_from_slice(&u))
                .unwrap();
            let mut op = Dg2D::new(Arc::new(Euler2D), BoundarySpec2D::periodic(), degree).unwrap();
            let mut rhs = vec![1.0; sol.coeffs().len()];
            op.compute_rhs(&sol, 0.0, &mut rhs).unwrap();
            let max = rhs.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            assert!(max < 1e-12, "degree {degree}: {max}");
        }
    }

    #[test]
    fn stagnant_gas_between_walls() {
        let mesh = build_uniform_2d((0.0, 1.0), (0.0, 1.0), 4, 4).unwrap();
        let u = EulerState::from_primitive(1.0, [0.0, 0.0], 1.0).to_conserved_2d();
        let sol = DGSolution2D::project(mesh, 2, 4, |_, _, o| o.copy_from_slice(&u)).unwrap();
        let bc = BoundarySpec2D::all(BoundaryCondition::Reflective);
        let mut op = Dg2D::new(Arc::new(Euler2D), bc, 2).unwrap();
        let mut rhs = vec![1.0; sol.coeffs().len()];
        op.compute_rhs(&sol, 0.0, &mut rhs).unwrap();
        assert!(rhs.iter().all(|r| r.abs() < 1e-13));
    }

    #[test]
    fn periodic_rhs_conserves_mass() {
        let mesh = perturb_mesh_2d(&build_uniform_2d((0.0, 2.0 * PI), (0.0, 2.0 * PI), 6, 5).unwrap(), 0.1, 1)
            .unwrap();
        let sol = DGSolution2D::project(mesh, 2, 1, |x, y, o| o[0] = 0.5 + (x + y).sin()).unwrap();
        let mut op = Dg2D::new(Arc::new(Burgers), BoundarySpec2D::periodic(), 2).unwrap();
        let mut rhs = vec![0.0; sol.coeffs().len()];
        op.compute_rhs(&sol, 0.0, &mut rhs).unwrap();
        let total: f64 = (0..sol.num_cells())
            .map(|c| {
                let (i, j) = (c % 6, c / 6);
                rhs[c * 9] * 0.5 * sol.mesh.area(i, j)
            })
            .sum();
        assert!(total.abs() < 1e-12, "{total}");
    }

    #[test]
    fn matches_one_dimensional_operator() {
        // data varying only in x must give the 1D right-hand side in every row
        let model = Arc::new(LinearAdvection { velocity: [0.8, 0.0] });
        let mesh = build_uniform_2d((0.0, 1.0), (0.0, 1.0), 8, 3).unwrap();
        let f = |x: f64| (2.0 * PI * x).sin();
        let sol = DGSolution2D::project(mesh.clone(), 2, 1, |x, _, o| o[0] = f(x)).unwrap();
        let mut op = Dg2D::new(model.clone(), BoundarySpec2D::periodic(), 2).unwrap();
        let mut rhs = vec![0.0; sol.coeffs().len()];
        op.compute_rhs(&sol, 0.0, &mut rhs).unwrap();
        let sol1 = crate::dg::DGSolution1D::project(mesh.x.clone(), 2, 1, |x, o| o[0] = f(x)).unwrap();
        let mut op1 = crate::dg::Dg1D::new(model, crate::dg::BoundarySpec1D::periodic(), 2).unwrap();
        let mut rhs1 = vec![0.0; sol1.coeffs().len()];
        op1.compute_rhs(&sol1, 0.0, &mut rhs1).unwrap();
        for j in 0..3 {
            for i in 0..8 {
                let c = &rhs[(j * 8 + i) * 9..][..9];
                for a in 0..3 {
                    // y-constant: only the b = 0 row, scaled by the constant mode sqrt(2)
                    let expect = rhs1[i * 3 + a] * std::f64::consts::SQRT_2;
                    assert!((c[a] - expect).abs() < 1e-12);
                    assert!(c[3 + a].abs() < 1e-12 && c[6 + a].abs() < 1e-12);
                }
            }
        }
    }
}
