//! Model extensions: the incentives-based payoff variant and the
//! epidemic-style time-varying population split.
//!
//! The incentives variant replaces the users' cross-population payoff so
//! cooperation is rewarded rather than defection punished:
//! `B = [[a, a/2], [0, -1]]`, with the three other matrices unchanged.
//! Substituting into the coupled field and restricting to the invariant
//! subspace (the same reduction that yields the standard two-variable
//! system) gives
//!
//! ```text
//! dx/dt = (1/4) x (x - 1) [ -3 n_p x + 5 n_p - (1 - n_p)(2 a z + 2 a + 4 - 4 z) ]
//! dz/dt = -(1/4) z (z - 1) [ -16 n_p z + 16 z + 5 n_p - 8 + 5 n_p x ]
//! ```
//!
//! The moderator equation is untouched by the swap, while the user
//! equation now couples to `z`. A grid test against the four-component
//! field guards this derivation. Note that besides the four corners the
//! reduced field can vanish at edge and interior roots of the bracketed
//! factors for some parameters; [`incentives_extra_equilibria`] locates
//! those candidates in closed form so they can be reported.
//!
//! The epidemic extension lets the user proportion evolve by
//! conversion/recovery/turnover instead of staying fixed:
//!
//! ```text
//! dn_p/dt = lambda + rho n_c - beta n_p n_c - mu n_p
//! dn_c/dt = beta n_p n_c - rho n_c - mu n_c
//! ```
//!
//! Under the stable-population assumption `lambda = mu`, the total
//! `n_p + n_c` is conserved.

use crate::analysis::{classify_eigenvalues, eigenvalues, Classification};
use crate::error::{Error, Result};
use crate::game::{
    coupled_rhs_with, reduced_rhs_raw, FullState, PayoffMatrix2, ReducedState, BOX_TOL,
};
use crate::integrate::{
    basin_map_impl, field_sample_impl, nearest_equilibrium, omega_limit_impl, simulate_planar,
    BasinMap, FieldPoint, OmegaLabel, PlanarSystem, Trajectory, DEFAULT_DT, DEFAULT_T_MAX,
};

/// Parameters of the incentives variant: user proportion `n_p` and
/// incentive scale `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncentiveParams {
    n_p: f64,
    a: f64,
}

impl IncentiveParams {
    pub fn new(n_p: f64, a: f64) -> Result<Self> {
        if !(n_p > 0.0 && n_p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "n_p",
                value: n_p,
                requirement: "lie in (0, 1)",
            });
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                requirement: "be positive and finite",
            });
        }
        Ok(Self { n_p, a })
    }

    pub fn n_p(&self) -> f64 {
        self.n_p
    }

    pub fn n_c(&self) -> f64 {
        1.0 - self.n_p
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// Users' cross-population payoff under incentives: cooperators are
/// rewarded by every moderator, defectors gain nothing from positive
/// moderators and lose a unit against negative ones.
pub fn incentive_matrix(a: f64) -> PayoffMatrix2 {
    PayoffMatrix2::new([[a, a / 2.0], [0.0, -1.0]]).expect("finite entries")
}

fn incentives_rhs_raw(n_p: f64, a: f64, x: f64, z: f64) -> [f64; 2] {
    let psi = -3.0 * n_p * x + 5.0 * n_p - (1.0 - n_p) * (2.0 * a * z + 2.0 * a + 4.0 - 4.0 * z);
    let x_dot = 0.25 * x * (x - 1.0) * psi;
    let z_dot =
        -0.25 * z * (z - 1.0) * (-16.0 * n_p * z + 16.0 * z + 5.0 * n_p - 8.0 + 5.0 * n_p * x);
    [x_dot, z_dot]
}

/// Reduced two-variable field of the incentives variant. Vanishes at all
/// four corners for every parameter choice.
pub fn incentives_reduced_rhs(p: &IncentiveParams, s: ReducedState) -> [f64; 2] {
    incentives_rhs_raw(p.n_p(), p.a(), s.x(), s.z())
}

/// Coupled four-component field of the incentives variant, used to guard
/// the reduction above.
pub fn incentives_coupled_rhs(p: &IncentiveParams, s: &FullState) -> ([f64; 2], [f64; 2]) {
    coupled_rhs_with(
        &PayoffMatrix2::user_game(),
        &PayoffMatrix2::moderator_game(),
        &incentive_matrix(p.a()),
        &PayoffMatrix2::moderator_vs_user(),
        p.n_p(),
        s.user(),
        s.moderator(),
    )
}

/// Analytic Jacobian of the incentives reduced field.
pub fn incentives_jacobian(p: &IncentiveParams, s: ReducedState) -> [[f64; 2]; 2] {
    let (np, a) = (p.n_p(), p.a());
    let (x, z) = (s.x(), s.z());
    let psi = -3.0 * np * x + 5.0 * np - (1.0 - np) * (2.0 * a * z + 2.0 * a + 4.0 - 4.0 * z);
    let psi_z = -(1.0 - np) * (2.0 * a - 4.0);
    let gamma = -16.0 * np * z + 16.0 * z + 5.0 * np - 8.0 + 5.0 * np * x;
    let j11 = 0.25 * ((2.0 * x - 1.0) * psi + x * (x - 1.0) * (-3.0 * np));
    let j12 = 0.25 * x * (x - 1.0) * psi_z;
    let j21 = -0.25 * (z * (z - 1.0) * (5.0 * np));
    let j22 = -0.25 * ((2.0 * z - 1.0) * gamma + z * (z - 1.0) * (16.0 - 16.0 * np));
    [[j11, j12], [j21, j22]]
}

/// Closed-form stability of the incentives corner `(1,1)`:
/// `a > n_p / (2 (1 - n_p))`.
pub fn incentives_utopia_stable(p: &IncentiveParams) -> bool {
    0.5 * p.n_p() / (1.0 - p.n_p()) < p.a()
}

/// Closed-form stability of the incentives corner `(0,0)`:
/// `a < (9 n_p - 4) / (2 (1 - n_p))`. For `n_p <= 4/9` the threshold is
/// nonpositive and no positive incentive keeps this corner stable.
pub fn incentives_dystopia_stable(p: &IncentiveParams) -> bool {
    p.a() < 0.5 * (9.0 * p.n_p() - 4.0) / (1.0 - p.n_p())
}

/// Eigenvalue classification of one of the four incentives corners.
pub fn incentives_corner_classification(p: &IncentiveParams, x: f64, z: f64) -> Classification {
    let s = ReducedState::new(x, z).expect("corner is in the box");
    classify_eigenvalues(eigenvalues(incentives_jacobian(p, s)))
}

/// Locates every non-corner equilibrium candidate of the incentives
/// reduced field that falls inside the closed unit box: roots of the
/// bracketed factors on the four edges, plus the joint interior root of
/// the two (affine) factors. A non-empty result contradicts the
/// four-corner-equilibria picture and is reported as a finding by the
/// callers.
pub fn incentives_extra_equilibria(p: &IncentiveParams) -> Vec<(f64, f64)> {
    let (np, a) = (p.n_p(), p.a());
    let q = 1.0 - np;
    let mut found = Vec::new();
    let interior = |v: f64| v > 0.0 && v < 1.0;

    // psi(x, z) = 0 on the z = 0 and z = 1 edges
    let x_z0 = (5.0 * np - q * (2.0 * a + 4.0)) / (3.0 * np);
    if interior(x_z0) {
        found.push((x_z0, 0.0));
    }
    let x_z1 = (5.0 * np - 4.0 * a * q) / (3.0 * np);
    if interior(x_z1) {
        found.push((x_z1, 1.0));
    }

    // gamma(x, z) = 0 on the x = 0 and x = 1 edges (unchanged moderator
    // dynamics, so these match the standard edge candidates)
    let z_x0 = (5.0 * np - 8.0) / (16.0 * (np - 1.0));
    if interior(z_x0) {
        found.push((0.0, z_x0));
    }
    let z_x1 = (5.0 * np - 4.0) / (8.0 * (np - 1.0));
    if interior(z_x1) {
        found.push((1.0, z_x1));
    }

    // joint interior root of the two affine factors:
    //   -3 np x - q (2a - 4) z = -(5 np - q (2a + 4))
    //    5 np x + 16 (1 - np) z = 8 - 5 np
    let m = [[-3.0 * np, -q * (2.0 * a - 4.0)], [5.0 * np, 16.0 * q]];
    let rhs = [-(5.0 * np - q * (2.0 * a + 4.0)), 8.0 - 5.0 * np];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() > 1e-14 {
        let x = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
        let z = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
        if interior(x) && interior(z) {
            found.push((x, z));
        }
    }
    found
}

fn incentives_anchors() -> [(f64, f64, OmegaLabel); 4] {
    [
        (0.0, 0.0, OmegaLabel::Dystopia),
        (0.0, 1.0, OmegaLabel::Corner01),
        (1.0, 0.0, OmegaLabel::Corner10),
        (1.0, 1.0, OmegaLabel::Utopia),
    ]
}

/// Fixed-step trajectory of the incentives reduced system.
pub fn simulate_incentives(
    p: &IncentiveParams,
    s0: ReducedState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory<ReducedState>> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| incentives_rhs_raw(np, a, x, z);
    simulate_planar(&rhs, &incentives_anchors(), s0, t_final, dt)
}

/// Omega-limit classification for the incentives system. Convergence to
/// anything other than a corner is reported unresolved.
pub fn incentives_omega_limit(p: &IncentiveParams, s0: ReducedState) -> Result<OmegaLabel> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| incentives_rhs_raw(np, a, x, z);
    let anchors = incentives_anchors();
    let sys = PlanarSystem {
        rhs: &rhs,
        anchors: &anchors,
        separatrix: None,
    };
    omega_limit_impl(&sys, s0.x(), s0.z(), DEFAULT_DT, DEFAULT_T_MAX)
}

/// Basin map of the incentives system over the open unit box.
pub fn incentives_basin_map(p: &IncentiveParams, n: usize) -> Result<BasinMap> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| incentives_rhs_raw(np, a, x, z);
    let anchors = incentives_anchors();
    let sys = PlanarSystem {
        rhs: &rhs,
        anchors: &anchors,
        separatrix: None,
    };
    basin_map_impl(&sys, n)
}

/// Samples the incentives field on an `n` by `n` grid spanning the
/// closed unit box.
pub fn incentives_field_sample(p: &IncentiveParams, n: usize) -> Result<Vec<FieldPoint>> {
    let (np, a) = (p.n_p(), p.a());
    field_sample_impl(&move |x, z| incentives_rhs_raw(np, a, x, z), n)
}

/// Rates of the epidemic-style population exchange between users and
/// moderators: conversion `beta`, recovery `rho`, turnover `mu`, and
/// inflow `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    beta: f64,
    rho: f64,
    mu: f64,
    lambda: f64,
}

impl EpidemicParams {
    /// General rates. `lambda != mu` is accepted but lies outside the
    /// stable-population analysis; see [`EpidemicParams::is_stable_population`].
    pub fn new(beta: f64, rho: f64, mu: f64, lambda: f64) -> Result<Self> {
        for (name, value) in [("beta", beta), ("rho", rho), ("mu", mu), ("lambda", lambda)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: match name {
                        "beta" => "beta",
                        "rho" => "rho",
                        "mu" => "mu",
                        _ => "lambda",
                    },
                    value,
                    requirement: "be nonnegative and finite",
                });
            }
        }
        Ok(Self {
            beta,
            rho,
            mu,
            lambda,
        })
    }

    /// Stable-population rates with `lambda = mu`.
    pub fn stable(beta: f64, rho: f64, mu: f64) -> Result<Self> {
        Self::new(beta, rho, mu, mu)
    }

    /// Whether the inflow balances turnover, so `n_p + n_c` is conserved
    /// on the unit-total manifold.
    pub fn is_stable_population(&self) -> bool {
        self.lambda == self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The population split `n_p*` at which conversion balances recovery
    /// and turnover (`beta n_p* = rho + mu`), when it lies in `(0, 1)`.
    pub fn endemic_split(&self) -> Option<f64> {
        if self.beta <= 0.0 {
            return None;
        }
        let np = (self.rho + self.mu) / self.beta;
        (np > 0.0 && np < 1.0).then_some(np)
    }
}

/// Two-compartment population drift. Rejects negative populations.
/// Returns `[dn_p/dt, dn_c/dt]`.
pub fn epidemic_rhs(ep: &EpidemicParams, n_p: f64, n_c: f64) -> Result<[f64; 2]> {
    if n_p < 0.0 || n_c < 0.0 {
        return Err(Error::NegativePopulation { np: n_p, nc: n_c });
    }
    Ok(epidemic_rhs_raw(ep, n_p, n_c))
}

fn epidemic_rhs_raw(ep: &EpidemicParams, n_p: f64, n_c: f64) -> [f64; 2] {
    [
        ep.lambda + ep.rho * n_c - ep.beta * n_p * n_c - ep.mu * n_p,
        ep.beta * n_p * n_c - ep.rho * n_c - ep.mu * n_c,
    ]
}

/// Replicator game with an epidemic-driven population split: punishment
/// scale `a` plus exchange rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicModel {
    a: f64,
    rates: EpidemicParams,
}

impl EpidemicModel {
    pub fn new(a: f64, rates: EpidemicParams) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                requirement: "be positive and finite",
            });
        }
        Ok(Self { a, rates })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn rates(&self) -> &EpidemicParams {
        &self.rates
    }
}

/// Combined field on `(x, z, n_p)`: the reduced game field evaluated at
/// the current population split, plus the epidemic drift of the split
/// itself (with `n_c = 1 - n_p`).
pub fn coupled_epidemic_rhs(m: &EpidemicModel, state: [f64; 3]) -> Result<[f64; 3]> {
    let [x, z, n_p] = state;
    for v in state {
        if !(v.is_finite() && (-BOX_TOL..=1.0 + BOX_TOL).contains(&v)) {
            return Err(Error::OutOfBox { x, z });
        }
    }
    Ok(coupled_epidemic_rhs_raw(m, x, z, n_p))
}

fn coupled_epidemic_rhs_raw(m: &EpidemicModel, x: f64, z: f64, n_p: f64) -> [f64; 3] {
    let game = reduced_rhs_raw(n_p, m.a, x, z);
    let drift = epidemic_rhs_raw(&m.rates, n_p, 1.0 - n_p);
    [game[0], game[1], drift[0]]
}

/// A trajectory of the combined `(x, z, n_p)` system.
#[derive(Debug, Clone, PartialEq)]
pub struct EpidemicTrajectory {
    /// `(t, [x, z, n_p])` samples at every step.
    pub samples: Vec<(f64, [f64; 3])>,
    /// Set when the population split reached 0 or 1, where the game
    /// coefficients degenerate; the split is clamped there.
    pub degenerate_split: bool,
    /// Corner-proximity classification of the final `(x, z)`.
    pub terminal_label: OmegaLabel,
}

impl EpidemicTrajectory {
    pub fn final_state(&self) -> [f64; 3] {
        self.samples.last().expect("trajectory is non-empty").1
    }
}

/// Fixed-step trajectory of the combined system. All three coordinates
/// are clamped onto `[0, 1]` after each step; a split that reaches the
/// boundary is flagged as degenerate.
pub fn simulate_epidemic(
    m: &EpidemicModel,
    s0: [f64; 3],
    t_final: f64,
    dt: f64,
) -> Result<EpidemicTrajectory> {
    coupled_epidemic_rhs(m, s0)?; // validate the initial state
    let steps = crate::integrate::horizon_steps(t_final, dt)?;
    let rhs = |y: &[f64; 3]| coupled_epidemic_rhs_raw(m, y[0], y[1], y[2]);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut s = [
        s0[0].clamp(0.0, 1.0),
        s0[1].clamp(0.0, 1.0),
        s0[2].clamp(0.0, 1.0),
    ];
    samples.push((0.0, s));
    let mut degenerate = s[2] <= 0.0 || s[2] >= 1.0;
    for k in 1..=steps {
        let t = k as f64 * dt;
        s = crate::integrate::step_rk4(rhs, &s, dt).map_err(|e| match e {
            Error::NonFinite { context, .. } => Error::NonFinite {
                context,
                t,
                state: format!("{s:?}"),
            },
            other => other,
        })?;
        if s[2] <= 0.0 || s[2] >= 1.0 {
            degenerate = true;
        }
        samples.push((t, s));
    }
    let terminal_label = nearest_equilibrium(&incentives_anchors(), s[0], s[1]);
    Ok(EpidemicTrajectory {
        samples,
        degenerate_split: degenerate,
        terminal_label,
    })
}
