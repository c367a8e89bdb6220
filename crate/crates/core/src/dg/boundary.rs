//! Boundary conditions and ghost data.

use std::fmt;
use std::sync::Arc;

use crate::basis::{to_physical, BasisSet};
use crate::error::{Error, Result};
use crate::physics::{Axis, FluxModel};
use crate::quadrature::gauss_rule;

/// Time-dependent state evaluator `(x, y, t, out)`; `y` is ignored in 1D.
pub type StateFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

/// Boundary treatment of one domain edge.
#[derive(Clone)]
pub enum BoundaryCondition {
    Periodic,
    /// Mirror state with the normal velocity negated.
    Reflective,
    /// Zero-gradient extrapolation.
    Outflow,
    Prescribed(StateFn),
    /// Use `below` where the edge coordinate is `< at`, `above` elsewhere.
    Split {
        at: f64,
        below: Box<BoundaryCondition>,
        above: Box<BoundaryCondition>,
    },
}

impl fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Periodic => write!(f, "Periodic"),
            Self::Reflective => write!(f, "Reflective"),
            Self::Outflow => write!(f, "Outflow"),
            Self::Prescribed(_) => write!(f, "Prescribed(..)"),
            Self::Split { at, below, above } => {
                write!(f, "Split {{ at: {at}, below: {below:?}, above: {above:?} }}")
            }
        }
    }
}

impl BoundaryCondition {
    pub fn prescribed(f: impl Fn(f64, f64, f64, &mut [f64]) + Send + Sync + 'static) -> Self {
        Self::Prescribed(Arc::new(f))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic)
    }

    /// Resolve `Split` at edge coordinate `s`.
    pub fn resolve(&self, s: f64) -> &BoundaryCondition {
        match self {
            Self::Split { at, below, above } => {
                if s < *at {
                    below.resolve(s)
                } else {
                    above.resolve(s)
                }
            }
            bc => bc,
        }
    }
}

/// Boundary conditions at the two ends of a 1D domain.
#[derive(Debug, Clone)]
pub struct BoundarySpec1D {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
}

impl BoundarySpec1D {
    pub fn periodic() -> Self {
        Self {
            left: BoundaryCondition::Periodic,
            right: BoundaryCondition::Periodic,
        }
    }

    pub fn both(bc: BoundaryCondition) -> Self {
        Self {
            left: bc.clone(),
            right: bc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.left.is_periodic() != self.right.is_periodic() {
            return Err(Error::Config("unmatched periodic boundary pair".into()));
        }
        if matches!(self.left, BoundaryCondition::Split { .. })
            || matches!(self.right, BoundaryCondition::Split { .. })
        {
            return Err(Error::Config("split boundaries need a 2D edge".into()));
        }
        Ok(())
    }
}

/// Boundary conditions on the four edges of a rectangle.
#[derive(Debug, Clone)]
pub struct BoundarySpec2D {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl BoundarySpec2D {
    pub fn periodic() -> Self {
        Self::all(BoundaryCondition::Periodic)
    }

    pub fn all(bc: BoundaryCondition) -> Self {
        Self {
            left: bc.clone(),
            right: bc.clone(),
            bottom: bc.clone(),
            top: bc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pair = |a: &BoundaryCondition, b: &BoundaryCondition| a.is_periodic() == b.is_periodic();
        if !pair(&self.left, &self.right) || !pair(&self.bottom, &self.top) {
            return Err(Error::Config("unmatched periodic boundary pair".into()));
        }
        Ok(())
    }
}

/// Which end of an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

/// Exterior trace state at a boundary point.
///
/// `interior` is the interior trace at that point and `periodic_partner` the trace of the
/// opposite boundary (only read for periodic edges). `point` is `(x, y)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn ghost_trace<F: FluxModel + ?Sized>(
    model: &F,
    bc: &BoundaryCondition,
    axis: Axis,
    edge_coord: f64,
    point: (f64, f64),
    t: f64,
    interior: &[f64],
    periodic_partner: &[f64],
    out: &mut [f64],
) {
    match bc.resolve(edge_coord) {
        BoundaryCondition::Periodic => out.copy_from_slice(periodic_partner),
        BoundaryCondition::Outflow => out.copy_from_slice(interior),
        BoundaryCondition::Reflective => {
            out.copy_from_slice(interior);
            model.reflect(out, axis);
        }
        BoundaryCondition::Prescribed(f) => f(point.0, point.1, t, out),
        BoundaryCondition::Split { .. } => unreachable!("resolved above"),
    }
}

/// Mirror a modal coefficient block across its normal axis: `psi_n(-r) = (-1)^n psi_n(r)`.
///
/// `block` is `[var][modes]`; `odd` says whether a mode index is odd along the normal axis.
pub(crate) fn mirror_modes(block: &mut [f64], nvars: usize, odd: impl Fn(usize) -> bool) {
    let per = block.len() / nvars;
    for v in 0..nvars {
        for n in 0..per {
            if odd(n) {
                block[v * per + n] = -block[v * per + n];
            }
        }
    }
}

/// Reflect the state carried by every mode (the reflection is linear).
pub(crate) fn reflect_modes<F: FluxModel + ?Sized>(
    model: &F,
    block: &mut [f64],
    nvars: usize,
    axis: Axis,
) {
    let per = block.len() / nvars;
    let mut state = [0.0; crate::physics::MAX_VARS];
    for n in 0..per {
        for v in 0..nvars {
            state[v] = block[v * per + n];
        }
        model.reflect(&mut state[..nvars], axis);
        for v in 0..nvars {
            block[v * per + n] = state[v];
        }
    }
}

/// 1D L2 projection of a prescribed state over `[xl, xr]`, `[var][mode]` layout.
pub(crate) fn project_state_1d(
    f: &StateFn,
    cell: (f64, f64),
    t: f64,
    degree: usize,
    nvars: usize,
    out: &mut [f64],
) {
    let basis = BasisSet::new(degree);
    let rule = gauss_rule(degree + 2).expect("supported degree");
    let np = degree + 1;
    out.iter_mut().for_each(|c| *c = 0.0);
    let mut val = [0.0; crate::physics::MAX_VARS];
    for (r, w) in rule.iter() {
        f(to_physical(cell, r), 0.0, t, &mut val[..nvars]);
        for n in 0..np {
            let p = w * basis.value(n, r);
            for v in 0..nvars {
                out[v * np + n] += p * val[v];
            }
        }
    }
}

/// 2D L2 projection over a rectangle, `[var][mode_y][mode_x]` layout.
pub(crate) fn project_state_2d(
    f: &StateFn,
    cx: (f64, f64),
    cy: (f64, f64),
    t: f64,
    degree: usize,
    nvars: usize,
    out: &mut [f64],
) {
    let basis = BasisSet::new(degree);
    let rule = gauss_rule(degree + 2).expect("supported degree");
    let np = degree + 1;
    let np2 = np * np;
    out.iter_mut().for_each(|c| *c = 0.0);
    let mut val = [0.0; crate::physics::MAX_VARS];
    for (s, ws) in rule.iter() {
        let y = to_physical(cy, s);
        for (r, wr) in rule.iter() {
            f(to_physical(cx, r), y, t, &mut val[..nvars]);
            for b in 0..np {
                let pb = ws * wr * basis.value(b, s);
                for a in 0..np {
                    let p = pb * basis.value(a, r);
                    for v in 0..nvars {
                        out[v * np2 + b * np + a] += p * val[v];
                    }
                }
            }
        }
    }
}
