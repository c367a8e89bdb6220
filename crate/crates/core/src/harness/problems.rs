//! Registered benchmark problems.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::dg::{BoundaryCondition, BoundarySpec1D, BoundarySpec2D};
use crate::error::{Error, Result};
use crate::physics::exact::{
    dmr_state, density_wave, exact_burgers, exact_burgers_2d, exact_burgers_entropy,
    isentropic_vortex,
};
use crate::physics::riemann::{exact_riemann, Primitive};
use crate::physics::{BuckleyLeverett, Burgers, Euler1D, Euler2D, EulerState, FluxModel};

pub type Initial1D = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;
pub type Initial2D = Arc<dyn Fn(f64, f64, &mut [f64]) + Send + Sync>;
/// `(x, t, out)`: conserved state of an exact solution.
pub type Exact1D = Arc<dyn Fn(f64, f64, &mut [f64]) -> Result<()> + Send + Sync>;
/// `(x, y, t, out)`.
pub type Exact2D = Arc<dyn Fn(f64, f64, f64, &mut [f64]) -> Result<()> + Send + Sync>;

/// Where the comparison data of a 1D problem comes from.
#[derive(Clone)]
pub enum Reference1D {
    /// Closed-form or semi-analytic exact solution.
    Exact(Exact1D),
    /// First-order Godunov (upwind) solution on a fine uniform mesh.
    Godunov { cells: usize },
    /// P1 DG solution with the limiter on a fine uniform mesh.
    FineGrid { cells: usize },
}

impl Reference1D {
    pub fn is_exact(&self) -> bool {
        matches!(self, Reference1D::Exact(_))
    }
}

#[derive(Clone)]
pub struct Problem1D {
    pub model: Arc<dyn FluxModel>,
    pub domain: (f64, f64),
    pub bc: BoundarySpec1D,
    pub initial: Initial1D,
    pub default_cells: usize,
    pub reference: Reference1D,
    pub positivity: bool,
}

#[derive(Clone)]
pub struct Problem2D {
    pub model: Arc<dyn FluxModel>,
    pub domain_x: (f64, f64),
    pub domain_y: (f64, f64),
    pub bc: BoundarySpec2D,
    pub initial: Initial2D,
    pub default_cells: (usize, usize),
    pub exact: Option<Exact2D>,
    pub positivity: bool,
}

#[derive(Clone)]
pub enum ProblemKind {
    OneD(Problem1D),
    TwoD(Problem2D),
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub t_end: f64,
    pub kind: ProblemKind,
}

impl ProblemSpec {
    pub fn dimension(&self) -> usize {
        match self.kind {
            ProblemKind::OneD(_) => 1,
            ProblemKind::TwoD(_) => 2,
        }
    }

    pub fn model(&self) -> &Arc<dyn FluxModel> {
        match &self.kind {
            ProblemKind::OneD(p) => &p.model,
            ProblemKind::TwoD(p) => &p.model,
        }
    }

    /// True when the problem has a closed-form or semi-analytic solution.
    pub fn has_exact(&self) -> bool {
        match &self.kind {
            ProblemKind::OneD(p) => p.reference.is_exact(),
            ProblemKind::TwoD(p) => p.exact.is_some(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        match &self.kind {
            ProblemKind::OneD(p) => p.bc.left.is_periodic(),
            ProblemKind::TwoD(p) => p.bc.left.is_periodic() && p.bc.bottom.is_periodic(),
        }
    }
}

/// Identifiers of all registered problems, in listing order.
pub const PROBLEM_IDS: [&str; 11] = [
    "burgers1d",
    "burgers2d",
    "euler2d-densitywave",
    "vortex",
    "burgers1d-shock",
    "buckley",
    "sod",
    "lax",
    "shuosher",
    "blast",
    "dmr",
];

pub fn registry() -> Vec<ProblemSpec> {
    PROBLEM_IDS.iter().map(|id| problem(id).expect("registered")).collect()
}

fn euler1d(rho: f64, u: f64, p: f64, out: &mut [f64]) {
    out.copy_from_slice(&EulerState::from_primitive_1d(rho, u, p).to_conserved_1d());
}

fn riemann_problem(
    left: Primitive,
    right: Primitive,
    x0: f64,
) -> (Initial1D, Exact1D) {
    let initial: Initial1D = Arc::new(move |x, out| {
        let s = if x < x0 { left } else { right };
        out.copy_from_slice(&s.to_conserved());
    });
    let exact: Exact1D = Arc::new(move |x, t, out| {
        let s = if t == 0.0 {
            if x < x0 {
                left
            } else {
                right
            }
        } else {
            exact_riemann(left, right, (x - x0) / t)?
        };
        out.copy_from_slice(&s.to_conserved());
        Ok(())
    });
    (initial, exact)
}

fn burgers_initial() -> Initial1D {
    Arc::new(|x, out| out[0] = 0.5 + x.sin())
}

/// Look up a registered problem by identifier.
pub fn problem(id: &str) -> Result<ProblemSpec> {
    let outflow = || BoundarySpec1D::both(BoundaryCondition::Outflow);
    let spec = match id {
        "burgers1d" => ProblemSpec {
            id: "burgers1d",
            description: "1D Burgers, u0 = 0.5 + sin x, smooth at t = 0.5",
            t_end: 0.5,
            kind: ProblemKind::OneD(Problem1D {
                model: Arc::new(Burgers),
                domain: (0.0, TAU),
                bc: BoundarySpec1D::periodic(),
                initial: burgers_initial(),
                default_cells: 80,
                reference: Reference1D::Exact(Arc::new(|x, t, out| {
                    out[0] = exact_burgers(x, t)?;
                    Ok(())
                })),
                positivity: false,
            }),
        },
        "burgers1d-shock" => ProblemSpec {
            id: "burgers1d-shock",
            description: "1D Burgers, u0 = 0.5 + sin x, after shock formation at t = 1.5",
            t_end: 1.5,
            kind: ProblemKind::OneD(Problem1D {
                model: Arc::new(Burgers),
                domain: (0.0, TAU),
                bc: BoundarySpec1D::periodic(),
                initial: burgers_initial(),
                default_cells: 80,
                reference: Reference1D::Exact(Arc::new(|x, t, out| {
                    out[0] = exact_burgers_entropy(x, t)?;
                    Ok(())
                })),
                positivity: false,
            }),
        },
        "burgers2d" => ProblemSpec {
            id: "burgers2d",
            description: "2D Burgers, u0 = 0.5 + sin(x + y), t = 0.25",
            t_end: 0.25,
            kind: ProblemKind::TwoD(Problem2D {
                model: Arc::new(Burgers),
                domain_x: (0.0, TAU),
                domain_y: (0.0, TAU),
                bc: BoundarySpec2D::periodic(),
                initial: Arc::new(|x, y, out| out[0] = 0.5 + (x + y).sin()),
                default_cells: (40, 40),
                exact: Some(Arc::new(|x, y, t, out| {
                    out[0] = exact_burgers_2d(x, y, t)?;
                    Ok(())
                })),
                positivity: false,
            }),
        },
        "euler2d-densitywave" => ProblemSpec {
            id: "euler2d-densitywave",
            description: "2D Euler, advected density wave 1 + 0.2 sin(x + y - t), t = 2 pi",
            t_end: TAU,
            kind: ProblemKind::TwoD(Problem2D {
                model: Arc::new(Euler2D),
                domain_x: (0.0, TAU),
                domain_y: (0.0, TAU),
                bc: BoundarySpec2D::periodic(),
                initial: Arc::new(|x, y, out| out.copy_from_slice(&density_wave(x, y, 0.0).to_conserved_2d())),
                default_cells: (40, 40),
                exact: Some(Arc::new(|x, y, t, out| {
                    out.copy_from_slice(&density_wave(x, y, t).to_conserved_2d());
                    Ok(())
                })),
                positivity: false,
            }),
        },
        "vortex" => ProblemSpec {
            id: "vortex",
            description: "2D Euler, isentropic vortex on [0,10]x[-5,5], t = 2",
            t_end: 2.0,
            kind: ProblemKind::TwoD(Problem2D {
                model: Arc::new(Euler2D),
                domain_x: (0.0, 10.0),
                domain_y: (-5.0, 5.0),
                bc: BoundarySpec2D::periodic(),
                initial: Arc::new(|x, y, out| {
                    out.copy_from_slice(&isentropic_vortex(x, y, 0.0).to_conserved_2d())
                }),
                default_cells: (40, 40),
                exact: Some(Arc::new(|x, y, t, out| {
                    out.copy_from_slice(&isentropic_vortex(x, y, t).to_conserved_2d());
                    Ok(())
                })),
                positivity: false,
            }),
        },
        "buckley" => ProblemSpec {
            id: "buckley",
            description: "Buckley-Leverett, u = 1 on [-1/2, 0], t = 0.4",
            t_end: 0.4,
            kind: ProblemKind::OneD(Problem1D {
                model: Arc::new(BuckleyLeverett),
                domain: (-1.0, 1.0),
                bc: outflow(),
                initial: Arc::new(|x, out| out[0] = if (-0.5..=0.0).contains(&x) { 1.0 } else { 0.0 }),
                default_cells: 80,
                reference: Reference1D::Godunov { cells: 10_000 },
                positivity: false,
            }),
        },
        "sod" | "lax" => {
            let (left, right, t_end, description, id) = if id == "sod" {
                (
                    Primitive::new(1.0, 0.0, 1.0),
                    Primitive::new(0.125, 0.0, 0.1),
                    0.2,
                    "Sod shock tube, t = 0.2",
                    "sod",
                )
            } else {
                (
                    Primitive::new(0.445, 0.698, 3.528),
                    Primitive::new(0.5, 0.0, 0.571),
                    0.1,
                    "Lax shock tube, t = 0.1",
                    "lax",
                )
            };
            let (initial, exact) = riemann_problem(left, right, 0.5);
            ProblemSpec {
                id,
                description,
                t_end,
                kind: ProblemKind::OneD(Problem1D {
                    model: Arc::new(Euler1D),
                    domain: (0.0, 1.0),
                    bc: outflow(),
                    initial,
                    default_cells: 200,
                    reference: Reference1D::Exact(exact),
                    positivity: false,
                }),
            }
        }
        "shuosher" => {
            let post = (3.857143, 2.629369, 10.333333);
            ProblemSpec {
                id: "shuosher",
                description: "Shock / entropy-wave interaction on [0, 1], t = 0.178",
                t_end: 0.178,
                kind: ProblemKind::OneD(Problem1D {
                    model: Arc::new(Euler1D),
                    domain: (0.0, 1.0),
                    bc: BoundarySpec1D {
                        left: BoundaryCondition::prescribed(move |_, _, _, out| {
                            euler1d(post.0, post.1, post.2, out)
                        }),
                        right: BoundaryCondition::Outflow,
                    },
                    initial: Arc::new(move |x, out| {
                        if x < 0.125 {
                            euler1d(post.0, post.1, post.2, out)
                        } else {
                            euler1d(1.0 + 0.2 * (16.0 * PI * x).sin(), 0.0, 1.0, out)
                        }
                    }),
                    default_cells: 200,
                    reference: Reference1D::FineGrid { cells: 4000 },
                    positivity: true,
                }),
            }
        }
        "blast" => ProblemSpec {
            id: "blast",
            description: "Interacting blast waves between reflecting walls, t = 0.038",
            t_end: 0.038,
            kind: ProblemKind::OneD(Problem1D {
                model: Arc::new(Euler1D),
                domain: (0.0, 1.0),
                bc: BoundarySpec1D::both(BoundaryCondition::Reflective),
                initial: Arc::new(|x, out| {
                    let p = if x < 0.1 {
                        1000.0
                    } else if x < 0.9 {
                        0.01
                    } else {
                        100.0
                    };
                    euler1d(1.0, 0.0, p, out)
                }),
                default_cells: 200,
                reference: Reference1D::FineGrid { cells: 4000 },
                positivity: true,
            }),
        },
        "dmr" => {
            let post = |_: f64, _: f64, _: f64, out: &mut [f64]| {
                out.copy_from_slice(&dmr_state(0.0, 0.0, 0.0).to_conserved_2d())
            };
            ProblemSpec {
                id: "dmr",
                description: "Double Mach reflection on [0,4]x[0,1], t = 0.2",
                t_end: 0.2,
                kind: ProblemKind::TwoD(Problem2D {
                    model: Arc::new(Euler2D),
                    domain_x: (0.0, 4.0),
                    domain_y: (0.0, 1.0),
                    bc: BoundarySpec2D {
                        left: BoundaryCondition::prescribed(post),
                        right: BoundaryCondition::Outflow,
                        bottom: BoundaryCondition::Split {
                            at: 1.0 / 6.0,
                            below: Box::new(BoundaryCondition::prescribed(post)),
                            above: Box::new(BoundaryCondition::Reflective),
                        },
                        top: BoundaryCondition::prescribed(|x, y, t, out| {
                            out.copy_from_slice(&dmr_state(x, y, t).to_conserved_2d())
                        }),
                    },
                    initial: Arc::new(|x, y, out| {
                        out.copy_from_slice(&dmr_state(x, y, 0.0).to_conserved_2d())
                    }),
                    default_cells: (480, 120),
                    exact: None,
                    positivity: true,
                }),
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown problem '{other}' (known: {})",
                PROBLEM_IDS.join(", ")
            )))
        }
    };
    Ok(spec)
}
