//! Payoff structures and replicator vector fields.
//!
//! Two sub-populations share one arena: ordinary users play a prisoner's
//! dilemma among themselves, moderators play a coordination game among
//! themselves, and the cross-population encounters form a bimatrix game.
//! This module defines the payoff matrices, the population states, and
//! every right-hand side used elsewhere in the crate:
//!
//! - the general bimatrix replicator field ([`hofbauer_rhs`]),
//! - the single-population symmetric-game field ([`symmetric_rhs`]),
//! - the coupled four-component field for the full model ([`coupled_rhs`]),
//! - and its two-variable reduction on the invariant subspace
//!   `x + y = 1`, `z + w = 1` ([`reduced_rhs`]).

use crate::error::{Error, Result};

/// Input tolerance for simplex membership checks.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Tolerance for the pair-sum invariant of a [`FullState`].
pub const PAIR_SUM_TOL: f64 = 1e-12;

/// Tolerance for unit-box membership of a [`ReducedState`].
pub const BOX_TOL: f64 = 1e-9;

/// Prisoner's-dilemma reward scale (fixed to 1; kept named so the
/// generalized parameterization stays visible).
pub const USER_REWARD: f64 = 1.0;

/// Coordination-game reward scale (fixed to 1).
pub const MODERATOR_REWARD: f64 = 1.0;

/// Moderator benefit scale in cross-population play (fixed to 1).
pub const MODERATOR_BENEFIT: f64 = 1.0;

/// A 2x2 real payoff matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix2 {
    entries: [[f64; 2]; 2],
}

impl PayoffMatrix2 {
    /// Builds a payoff matrix, rejecting non-finite entries.
    pub fn new(entries: [[f64; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for &e in row {
                if !e.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "payoff entry",
                        value: e,
                        requirement: "be finite",
                    });
                }
            }
        }
        Ok(Self { entries })
    }

    /// Prisoner's dilemma played among ordinary users (strategy order:
    /// cooperate, defect).
    pub fn user_game() -> Self {
        let r = USER_REWARD;
        Self {
            entries: [[r / 2.0, -r], [r, r / 4.0]],
        }
    }

    /// Coordination game played among moderators (strategy order:
    /// positive, negative).
    pub fn moderator_game() -> Self {
        let v = MODERATOR_REWARD;
        Self {
            entries: [[v, -v], [-v, v]],
        }
    }

    /// Users' payoff when meeting moderators, under punishment of scale
    /// `a`: cooperators gain from positive moderators, defectors are
    /// penalized by every moderator and doubly so by negative ones.
    pub fn user_vs_moderator(a: f64) -> Self {
        Self {
            entries: [[a / 2.0, 0.0], [-a / 2.0, -a]],
        }
    }

    /// Moderators' payoff (as column players) when meeting users.
    pub fn moderator_vs_user() -> Self {
        let s = MODERATOR_BENEFIT;
        Self {
            entries: [[s / 2.0, 0.0], [s / 4.0, s]],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    /// Matrix-vector product `M v`.
    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.entries[0][0] * v[0] + self.entries[0][1] * v[1],
            self.entries[1][0] * v[0] + self.entries[1][1] * v[1],
        ]
    }

    /// Vector-matrix product `v^T M`.
    pub fn vec_mul(&self, v: [f64; 2]) -> [f64; 2] {
        [
            v[0] * self.entries[0][0] + v[1] * self.entries[1][0],
            v[0] * self.entries[0][1] + v[1] * self.entries[1][1],
        ]
    }

    /// Quadratic form `l^T M r`.
    pub fn quad(&self, l: [f64; 2], r: [f64; 2]) -> f64 {
        let mv = self.mul_vec(r);
        l[0] * mv[0] + l[1] * mv[1]
    }
}

/// Static model parameters: the user proportion `n_p` and the punishment
/// scale `a`. The moderator proportion is always derived as `1 - n_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_p: f64,
    a: f64,
}

impl ModelParams {
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

    /// Proportion of ordinary users.
    pub fn n_p(&self) -> f64 {
        self.n_p
    }

    /// Proportion of moderators, always `1 - n_p`.
    pub fn n_c(&self) -> f64 {
        1.0 - self.n_p
    }

    /// Punishment scale.
    pub fn a(&self) -> f64 {
        self.a
    }
}

/// Reduced state on the invariant subspace: `x` is the cooperating-user
/// fraction, `z` the positive-moderator fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    x: f64,
    z: f64,
}

impl ReducedState {
    /// Accepts states inside the unit box; values within [`BOX_TOL`] of
    /// the boundary are clamped onto it, anything further out is an error.
    pub fn new(x: f64, z: f64) -> Result<Self> {
        let inside = |v: f64| (-BOX_TOL..=1.0 + BOX_TOL).contains(&v);
        if !x.is_finite() || !z.is_finite() || !inside(x) || !inside(z) {
            return Err(Error::OutOfBox { x, z });
        }
        Ok(Self {
            x: x.clamp(0.0, 1.0),
            z: z.clamp(0.0, 1.0),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Full four-component state: user strategy frequencies `(x, y)` and
/// moderator strategy frequencies `(z, w)`, each pair on the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    x: f64,
    y: f64,
    z: f64,
    w: f64,
}

impl FullState {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Result<Self> {
        for v in [x, y, z, w] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(Error::OutOfBox { x: v, z: v });
            }
        }
        if (x + y - 1.0).abs() > PAIR_SUM_TOL {
            return Err(Error::OffSimplex(x, y));
        }
        if (z + w - 1.0).abs() > PAIR_SUM_TOL {
            return Err(Error::OffSimplex(z, w));
        }
        Ok(Self { x, y, z, w })
    }

    /// Lifts a reduced state onto the invariant subspace.
    pub fn from_reduced(s: ReducedState) -> Self {
        Self {
            x: s.x(),
            y: 1.0 - s.x(),
            z: s.z(),
            w: 1.0 - s.z(),
        }
    }

    /// Projects back to the reduced coordinates.
    pub fn reduced(&self) -> ReducedState {
        ReducedState {
            x: self.x.clamp(0.0, 1.0),
            z: self.z.clamp(0.0, 1.0),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }
    pub fn w(&self) -> f64 {
        self.w
    }

    /// User strategy frequencies `(x, y)`.
    pub fn user(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    /// Moderator strategy frequencies `(z, w)`.
    pub fn moderator(&self) -> [f64; 2] {
        [self.z, self.w]
    }

    /// Rescales each pair to sum to exactly one (used after integration
    /// steps, where drift is purely numerical).
    pub(crate) fn renormalized(x: f64, y: f64, z: f64, w: f64) -> Self {
        let su = x + y;
        let sm = z + w;
        Self {
            x: x / su,
            y: y / su,
            z: z / sm,
            w: w / sm,
        }
    }
}

fn check_simplex(v: [f64; 2]) -> Result<()> {
    if v[0] < -SIMPLEX_TOL || v[1] < -SIMPLEX_TOL || (v[0] + v[1] - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::OffSimplex(v[0], v[1]));
    }
    Ok(())
}

/// General bimatrix replicator field: each side's strategy share grows in
/// proportion to its payoff advantage over its own population average.
/// Returns `(d/dt row_pop, d/dt col_pop)`.
pub fn hofbauer_rhs(
    a: &PayoffMatrix2,
    b: &PayoffMatrix2,
    row_pop: [f64; 2],
    col_pop: [f64; 2],
) -> Result<([f64; 2], [f64; 2])> {
    check_simplex(row_pop)?;
    check_simplex(col_pop)?;
    let row_payoff = a.mul_vec(col_pop);
    let row_avg = row_pop[0] * row_payoff[0] + row_pop[1] * row_payoff[1];
    let col_payoff = b.vec_mul(row_pop);
    let col_avg = col_payoff[0] * col_pop[0] + col_payoff[1] * col_pop[1];
    Ok((
        [
            row_pop[0] * (row_payoff[0] - row_avg),
            row_pop[1] * (row_payoff[1] - row_avg),
        ],
        [
            col_pop[0] * (col_payoff[0] - col_avg),
            col_pop[1] * (col_payoff[1] - col_avg),
        ],
    ))
}

/// Population-average payoff of a single population playing a (possibly
/// asymmetric) game against itself, each member acting as row and column
/// player half the time: `(1/2) p^T (A + A^T) p`.
pub fn population_average(a: &PayoffMatrix2, pop: [f64; 2]) -> Result<f64> {
    check_simplex(pop)?;
    Ok(0.5 * (a.quad(pop, pop) + a.quad_transposed(pop)))
}

impl PayoffMatrix2 {
    /// Quadratic form of the transpose, `p^T A^T p = (p^T A) . p`.
    fn quad_transposed(&self, pop: [f64; 2]) -> f64 {
        let vm = self.vec_mul(pop);
        pop[0] * vm[0] + pop[1] * vm[1]
    }
}

/// Single-population replicator field for a symmetric game, using the
/// role-averaged population payoff of [`population_average`].
pub fn symmetric_rhs(a: &PayoffMatrix2, pop: [f64; 2]) -> Result<[f64; 2]> {
    check_simplex(pop)?;
    let payoff = a.mul_vec(pop);
    let avg = population_average(a, pop)?;
    Ok([pop[0] * (payoff[0] - avg), pop[1] * (payoff[1] - avg)])
}

/// Coupled four-component field with explicit payoff matrices. Written
/// out directly so shared terms are evaluated once per call.
pub(crate) fn coupled_rhs_with(
    a: &PayoffMatrix2,
    f: &PayoffMatrix2,
    b: &PayoffMatrix2,
    c: &PayoffMatrix2,
    n_p: f64,
    user: [f64; 2],
    moderator: [f64; 2],
) -> ([f64; 2], [f64; 2]) {
    let n_c = 1.0 - n_p;

    let user_self = a.mul_vec(user);
    let user_avg = 0.5 * (a.quad(user, user) + a.quad_transposed(user));
    let user_cross = b.mul_vec(moderator);
    let user_cross_avg = user[0] * user_cross[0] + user[1] * user_cross[1];

    let mod_self = f.mul_vec(moderator);
    let mod_avg = 0.5 * (f.quad(moderator, moderator) + f.quad_transposed(moderator));
    let mod_cross = c.vec_mul(user);
    let mod_cross_avg = mod_cross[0] * moderator[0] + mod_cross[1] * moderator[1];

    let user_dot = [
        user[0] * (n_p * (user_self[0] - user_avg) + n_c * (user_cross[0] - user_cross_avg)),
        user[1] * (n_p * (user_self[1] - user_avg) + n_c * (user_cross[1] - user_cross_avg)),
    ];
    let mod_dot = [
        moderator[0] * (n_c * (mod_self[0] - mod_avg) + n_p * (mod_cross[0] - mod_cross_avg)),
        moderator[1] * (n_c * (mod_self[1] - mod_avg) + n_p * (mod_cross[1] - mod_cross_avg)),
    ];
    (user_dot, mod_dot)
}

/// Coupled field of the full model: within-population symmetric replicator
/// terms weighted by each population's encounter probability, plus the
/// cross-population bimatrix terms. Returns `(d/dt (x,y), d/dt (z,w))`.
pub fn coupled_rhs(p: &ModelParams, s: &FullState) -> ([f64; 2], [f64; 2]) {
    coupled_rhs_with(
        &PayoffMatrix2::user_game(),
        &PayoffMatrix2::moderator_game(),
        &PayoffMatrix2::user_vs_moderator(p.a()),
        &PayoffMatrix2::moderator_vs_user(),
        p.n_p(),
        s.user(),
        s.moderator(),
    )
}

/// Reduced two-variable field on the invariant subspace, in the exact
/// factored form used throughout the stability analysis.
pub fn reduced_rhs(p: &ModelParams, s: ReducedState) -> [f64; 2] {
    reduced_rhs_raw(p.n_p(), p.a(), s.x(), s.z())
}

/// Unchecked reduced field. The factors `x (x - 1)` and `z (z - 1)` make
/// every box face invariant exactly in floating point.
pub(crate) fn reduced_rhs_raw(n_p: f64, a: f64, x: f64, z: f64) -> [f64; 2] {
    let x_dot = 0.25 * x * (x - 1.0) * (-3.0 * n_p * x + 5.0 * n_p + 4.0 * n_p * a - 4.0 * a);
    let z_dot =
        -0.25 * z * (z - 1.0) * (-16.0 * n_p * z + 16.0 * z + 5.0 * n_p - 8.0 + 5.0 * n_p * x);
    [x_dot, z_dot]
}
