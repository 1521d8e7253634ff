//! Closed-form equilibrium enumeration and linear stability analysis of
//! the reduced system.
//!
//! The right-hand side factors as `x (x - 1) phi(x)` and `z (z - 1)
//! gamma(x, z)` with `phi`, `gamma` affine, so all nine equilibrium
//! candidates have closed forms. Candidates may fall outside the unit
//! box; those are flagged spurious and carry no classification. Stability
//! is decided by the eigenvalues of the analytic Jacobian, with closed-form
//! predicates for the corners and a hyperbolicity guard: within
//! [`HYPERBOLICITY_TOL`] of a zero real part, linearization does not decide
//! and the classification is reported as marginal.

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::game::{ModelParams, ReducedState};

/// Real parts closer to zero than this are treated as non-hyperbolic.
pub const HYPERBOLICITY_TOL: f64 = 1e-9;

/// Half-width of the separatrix line in [`analytic_basin`].
pub const SEPARATRIX_TOL: f64 = 1e-12;

/// Linear stability classification of a hyperbolic (or nearly so) fixed
/// point of a planar system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Both eigenvalue real parts negative.
    StableNode,
    /// Both eigenvalue real parts positive.
    UnstableNode,
    /// Real parts of opposite sign.
    Saddle,
    /// Some real part within [`HYPERBOLICITY_TOL`] of zero; linearization
    /// does not decide.
    Marginal,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::StableNode => "stable-node",
            Classification::UnstableNode => "unstable-node",
            Classification::Saddle => "saddle",
            Classification::Marginal => "marginal",
        })
    }
}

/// One of the nine closed-form equilibrium candidates.
///
/// `x` and `z` may fall outside the unit box, in which case the candidate
/// is spurious and carries no eigenvalues or classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    /// Position in the fixed enumeration order, 1..=9.
    pub index: u8,
    pub x: f64,
    pub z: f64,
    pub spurious: bool,
    pub eigenvalues: Option<[Complex64; 2]>,
    pub classification: Option<Classification>,
}

impl Equilibrium {
    fn candidate(index: u8, x: f64, z: f64) -> Self {
        let inside = (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&z);
        Equilibrium {
            index,
            x,
            z,
            spurious: !inside,
            eigenvalues: None,
            classification: None,
        }
    }
}

/// `x`-coordinate shared by the three equilibria with `phi(x) = 0`.
fn interior_x(p: &ModelParams) -> f64 {
    let (np, a) = (p.n_p(), p.a());
    (5.0 * np + 4.0 * np * a - 4.0 * a) / (3.0 * np)
}

/// Enumerates all nine equilibrium candidates in the fixed order:
/// the four corners `(0,0), (0,1), (1,0), (1,1)`, the four edge
/// candidates, and the interior candidate. Spuriousness is evaluated;
/// eigenvalues and classification are left for [`classify`].
pub fn enumerate_equilibria(p: &ModelParams) -> Vec<Equilibrium> {
    let (np, a) = (p.n_p(), p.a());
    let xh = interior_x(p);
    let z5 = (5.0 * np - 8.0) / (16.0 * (np - 1.0));
    let z7 = (5.0 * np - 4.0) / (8.0 * (np - 1.0));
    let z9 = (10.0 * np - 6.0 + 5.0 * np * a - 5.0 * a) / (12.0 * (np - 1.0));
    vec![
        Equilibrium::candidate(1, 0.0, 0.0),
        Equilibrium::candidate(2, 0.0, 1.0),
        Equilibrium::candidate(3, 1.0, 0.0),
        Equilibrium::candidate(4, 1.0, 1.0),
        Equilibrium::candidate(5, 0.0, z5),
        Equilibrium::candidate(6, xh, 0.0),
        Equilibrium::candidate(7, 1.0, z7),
        Equilibrium::candidate(8, xh, 1.0),
        Equilibrium::candidate(9, xh, z9),
    ]
}

/// Analytic Jacobian of the reduced field at `s`.
///
/// The `(1,2)` entry is identically zero: the user equation does not
/// depend on `z`.
pub fn jacobian(p: &ModelParams, s: ReducedState) -> [[f64; 2]; 2] {
    let (np, a) = (p.n_p(), p.a());
    let (x, z) = (s.x(), s.z());
    let phi = -3.0 * np * x + 5.0 * np + 4.0 * np * a - 4.0 * a;
    let gamma = -16.0 * np * z + 16.0 * z + 5.0 * np - 8.0 + 5.0 * np * x;
    let j11 = 0.25 * ((2.0 * x - 1.0) * phi + x * (x - 1.0) * (-3.0 * np));
    let j21 = -0.25 * (z * (z - 1.0) * (5.0 * np));
    let j22 = -0.25 * ((2.0 * z - 1.0) * gamma + z * (z - 1.0) * (16.0 - 16.0 * np));
    [[j11, 0.0], [j21, j22]]
}

/// Eigenvalues of a real 2x2 matrix via trace and determinant, in
/// ascending `(re, im)` order. Complex pairs are permitted.
pub fn eigenvalues(m: [[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [
            Complex64::new(0.5 * (tr - s), 0.0),
            Complex64::new(0.5 * (tr + s), 0.0),
        ]
    } else {
        let s = (-disc).sqrt();
        [
            Complex64::new(0.5 * tr, -0.5 * s),
            Complex64::new(0.5 * tr, 0.5 * s),
        ]
    }
}

/// Classifies a pair of eigenvalues by the signs of their real parts.
pub fn classify_eigenvalues(eig: [Complex64; 2]) -> Classification {
    let re = [eig[0].re, eig[1].re];
    if re.iter().any(|r| r.abs() <= HYPERBOLICITY_TOL) {
        Classification::Marginal
    } else if re.iter().all(|r| *r < 0.0) {
        Classification::StableNode
    } else if re.iter().all(|r| *r > 0.0) {
        Classification::UnstableNode
    } else {
        Classification::Saddle
    }
}

/// Fills in eigenvalues and classification for a non-spurious equilibrium.
/// Classifying a spurious candidate is rejected.
pub fn classify(p: &ModelParams, e: &Equilibrium) -> Result<Equilibrium> {
    if e.spurious {
        return Err(Error::SpuriousEquilibrium { index: e.index });
    }
    let s = ReducedState::new(e.x, e.z)?;
    let eig = eigenvalues(jacobian(p, s));
    Ok(Equilibrium {
        eigenvalues: Some(eig),
        classification: Some(classify_eigenvalues(eig)),
        ..*e
    })
}

/// Enumerates the nine candidates and classifies every non-spurious one.
pub fn classify_all(p: &ModelParams) -> Vec<Equilibrium> {
    enumerate_equilibria(p)
        .iter()
        .map(|e| {
            if e.spurious {
                *e
            } else {
                classify(p, e).expect("non-spurious candidate must classify")
            }
        })
        .collect()
}

/// Closed-form test for stability of the all-cooperate, all-positive
/// corner `(1,1)`: holds strictly when `a > n_p / (2 (1 - n_p))`.
pub fn utopia_stable(p: &ModelParams) -> bool {
    p.n_p() / (2.0 * (1.0 - p.n_p())) < p.a()
}

/// Closed-form test for stability of the all-defect, all-negative corner
/// `(0,0)`: holds strictly when `a < 5 n_p / (4 (1 - n_p))`.
pub fn dystopia_stable(p: &ModelParams) -> bool {
    p.a() < 5.0 * p.n_p() / (4.0 * (1.0 - p.n_p()))
}

/// Stability of the two mixed corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerStability {
    /// `(x, z) = (0, 1)`: all users defect, all moderators positive.
    pub corner_01: bool,
    /// `(x, z) = (1, 0)`: all users cooperate, all moderators negative.
    pub corner_10: bool,
}

/// Stability of the corners `(0,1)` and `(1,0)`.
///
/// `(0,1)` follows the closed form `n_p < 8/11` and
/// `a < (5/4) n_p / (1 - n_p)`. `(1,0)` is decided from the eigenvalues
/// of the analytic Jacobian; its often-quoted closed form has the wrong
/// sign in the denominator and is vacuous on `n_p` in `(0,1)`, so it is
/// deliberately not used here.
pub fn corner_stability(p: &ModelParams) -> CornerStability {
    let np = p.n_p();
    let corner_01 = np < 8.0 / 11.0 && p.a() < 1.25 * np / (1.0 - np);
    let eig = eigenvalues(jacobian(p, ReducedState::new(1.0, 0.0).expect("corner")));
    let corner_10 = eig.iter().all(|l| l.re < -HYPERBOLICITY_TOL);
    CornerStability {
        corner_01,
        corner_10,
    }
}

/// Closed-form test for existence of a non-spurious interior equilibrium,
/// evaluated from the printed piecewise parameter conditions (three cases
/// split at `n_p = 8/11` and `n_p = 4/5`).
pub fn interior_exists(p: &ModelParams) -> bool {
    let (np, a) = (p.n_p(), p.a());
    let q = 1.0 - np;
    if np < 8.0 / 11.0 {
        np / (2.0 * q) < a && a < 1.25 * np / q
    } else if np < 0.8 {
        np / (2.0 * q) < a && a < 0.4 * (3.0 - np) / q
    } else {
        0.4 * (5.0 * np - 3.0) / q < a && a < 0.4 * (3.0 - np) / q
    }
}

/// The separatrix abscissa `x* = (5 n_p + 4 n_p a - 4 a) / (3 n_p)`,
/// returned only when it falls strictly inside `(0, 1)`.
pub fn basin_threshold(p: &ModelParams) -> Option<f64> {
    let x = interior_x(p);
    (x > 0.0 && x < 1.0).then_some(x)
}

/// True when the basin boundary between the two stable corners is exactly
/// the vertical line `x = x*`: requires `n_p > 4/5` and
/// `(2/5)(5 n_p - 3)/(1 - n_p) < a < (2/5)(3 - n_p)/(1 - n_p)`.
pub fn vertical_separatrix(p: &ModelParams) -> bool {
    let (np, a) = (p.n_p(), p.a());
    let q = 1.0 - np;
    np > 0.8 && 0.4 * (5.0 * np - 3.0) / q < a && a < 0.4 * (3.0 - np) / q
}

/// Which basin the reduced state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticBasin {
    Utopia,
    Dystopia,
    /// On the separatrix line within [`SEPARATRIX_TOL`].
    Boundary,
}

/// Closed-form basin membership in the vertical-separatrix regime:
/// states with `x > x*` flow to `(1,1)`, states with `x < x*` flow to
/// `(0,0)`, for any interior `z`. Outside that regime (or for boundary
/// `z`) the caller must fall back to numeric basin mapping.
pub fn analytic_basin(p: &ModelParams, s: ReducedState) -> Result<AnalyticBasin> {
    if !vertical_separatrix(p) {
        return Err(Error::BasinHypotheses(
            "parameters outside the vertical-separatrix regime",
        ));
    }
    if s.z() <= 0.0 || s.z() >= 1.0 {
        return Err(Error::BasinHypotheses("z must be strictly interior"));
    }
    let x_star = basin_threshold(p).expect("separatrix exists in this regime");
    Ok(if (s.x() - x_star).abs() <= SEPARATRIX_TOL {
        AnalyticBasin::Boundary
    } else if s.x() > x_star {
        AnalyticBasin::Utopia
    } else {
        AnalyticBasin::Dystopia
    })
}

/// One cell of a parameter-regime map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeCell {
    pub n_p: f64,
    pub a: f64,
    pub utopia_stable: bool,
    pub dystopia_stable: bool,
    pub interior_exists: bool,
    pub corner_01_stable: bool,
    pub corner_10_stable: bool,
}

/// Evaluates every closed-form regime predicate at one parameter point.
pub fn regime_cell(p: &ModelParams) -> RegimeCell {
    let corners = corner_stability(p);
    RegimeCell {
        n_p: p.n_p(),
        a: p.a(),
        utopia_stable: utopia_stable(p),
        dystopia_stable: dystopia_stable(p),
        interior_exists: interior_exists(p),
        corner_01_stable: corners.corner_01,
        corner_10_stable: corners.corner_10,
    }
}
