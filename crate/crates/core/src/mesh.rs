//! Interval and tensor-product Cartesian meshes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Ordered nodes of a 1D partition `x_0 < x_1 < ... < x_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    widths: Vec<f64>,
}

impl Mesh1D {
    /// Build a mesh from explicit nodes. Nodes must be finite and strictly increasing.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a mesh needs at least two nodes"));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("mesh nodes must be finite"));
        }
        let widths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(k) = widths.iter().position(|&h| h <= 0.0) {
            return Err(Error::invalid(format!("non-positive width in cell {k}")));
        }
        Ok(Self { nodes, widths })
    }

    pub fn uniform(x_left: f64, x_right: f64, cells: usize) -> Result<Self> {
        build_uniform_1d(x_left, x_right, cells)
    }

    pub fn num_cells(&self) -> usize {
        self.widths.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn width(&self, k: usize) -> f64 {
        self.widths[k]
    }

    /// `(x_l, x_r)` of cell `k`.
    pub fn cell(&self, k: usize) -> (f64, f64) {
        (self.nodes[k], self.nodes[k + 1])
    }

    pub fn center(&self, k: usize) -> f64 {
        0.5 * (self.nodes[k] + self.nodes[k + 1])
    }

    pub fn x_left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn x_right(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.x_right() - self.x_left()
    }

    pub fn min_width(&self) -> f64 {
        self.widths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_width(&self) -> f64 {
        self.widths.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the cell containing `x` (closed on the left, last cell closed on both ends).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if x < self.x_left() || x > self.x_right() {
            return None;
        }
        let k = self.nodes.partition_point(|&n| n <= x);
        Some(k.saturating_sub(1).min(self.num_cells() - 1))
    }
}

/// `K` equal cells covering `[x_left, x_right]`.
pub fn build_uniform_1d(x_left: f64, x_right: f64, cells: usize) -> Result<Mesh1D> {
    if cells == 0 {
        return Err(Error::invalid("cell count must be at least 1"));
    }
    if !(x_left < x_right) || !x_left.is_finite() || !x_right.is_finite() {
        return Err(Error::invalid(format!(
            "empty or invalid domain [{x_left}, {x_right}]"
        )));
    }
    let h = (x_right - x_left) / cells as f64;
    let mut nodes: Vec<f64> = (0..=cells).map(|k| x_left + k as f64 * h).collect();
    nodes[cells] = x_right;
    Mesh1D::from_nodes(nodes)
}

/// Displace every interior node of a uniform mesh by an independent uniform draw in
/// `[-fraction*h, +fraction*h]`. Endpoints stay put.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`; nodes are drawn left to
/// right, one draw per interior node, so the result is reproducible on every platform.
pub fn perturb_mesh(mesh: &Mesh1D, fraction: f64, seed: u64) -> Result<Mesh1D> {
    if !(0.0..0.5).contains(&fraction) {
        return Err(Error::invalid(format!(
            "perturbation fraction {fraction} outside [0, 0.5)"
        )));
    }
    let k = mesh.num_cells();
    let h = mesh.length() / k as f64;
    if mesh.max_width() - mesh.min_width() > 1e-9 * h {
        return Err(Error::invalid("perturb_mesh expects a uniform mesh"));
    }
    if fraction == 0.0 {
        return Ok(mesh.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = mesh.nodes().to_vec();
    for node in nodes.iter_mut().take(k).skip(1) {
        let d: f64 = rng.random_range(-1.0..=1.0);
        *node += d * fraction * h;
    }
    Mesh1D::from_nodes(nodes)
}

/// Tensor product of two 1D meshes: `K_x * K_y` rectangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub x: Mesh1D,
    pub y: Mesh1D,
}

impl Mesh2D {
    pub fn new(x: Mesh1D, y: Mesh1D) -> Self {
        Self { x, y }
    }

    pub fn nx(&self) -> usize {
        self.x.num_cells()
    }

    pub fn ny(&self) -> usize {
        self.y.num_cells()
    }

    pub fn num_cells(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn area(&self, i: usize, j: usize) -> f64 {
        self.x.width(i) * self.y.width(j)
    }

    /// Row-major cell index, x fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }
}

pub fn build_uniform_2d(
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Mesh2D> {
    Ok(Mesh2D::new(
        build_uniform_1d(x_range.0, x_range.1, nx)?,
        build_uniform_1d(y_range.0, y_range.1, ny)?,
    ))
}

/// Perturb each axis independently; the y axis uses `seed + 1`.
pub fn perturb_mesh_2d(mesh: &Mesh2D, fraction: f64, seed: u64) -> Result<Mesh2D> {
    Ok(Mesh2D::new(
        perturb_mesh(&mesh.x, fraction, seed)?,
        perturb_mesh(&mesh.y, fraction, seed.wrapping_add(1))?,
    ))
}
