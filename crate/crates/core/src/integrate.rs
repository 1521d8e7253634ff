//! Fixed-step numerical integration, omega-limit classification, basin
//! maps, and vector-field sampling for the reduced and full systems.
//!
//! The vector fields are polynomial and globally smooth on the unit box,
//! so a classical fixed-step fourth-order Runge-Kutta scheme is used
//! throughout; adaptive stepping is deliberately omitted in favor of
//! simplicity and bit-for-bit determinism. States are clamped onto the
//! box after every step (the dynamics preserve it exactly; any drift is
//! numerical), and full states are additionally renormalized so each
//! strategy pair sums to one.

use rayon::prelude::*;

use crate::analysis::{basin_threshold, enumerate_equilibria};
use crate::error::{Error, Result};
use crate::game::{coupled_rhs, reduced_rhs_raw, FullState, ModelParams, ReducedState};

/// Default integration step.
pub const DEFAULT_DT: f64 = 1e-2;

/// Default integration horizon for omega-limit classification.
pub const DEFAULT_T_MAX: f64 = 1e4;

/// A state counts as converged once the field norm drops below this.
/// Corners are boundary-degenerate fixed points, so convergence is
/// detected on the field norm rather than on state distance.
pub const CONVERGENCE_TOL: f64 = 1e-9;

/// Maximum distance at which a converged state is matched to an
/// equilibrium.
pub const MATCH_TOL: f64 = 1e-3;

/// Initial conditions closer than this to the vertical separatrix are
/// reported unresolved rather than forced to a side.
pub const SEPARATRIX_GUARD: f64 = 1e-9;

/// Omega-limit classification of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaLabel {
    /// The all-cooperate, all-positive corner `(1,1)`.
    Utopia,
    /// The all-defect, all-negative corner `(0,0)`.
    Dystopia,
    /// The corner `(0,1)`.
    Corner01,
    /// The corner `(1,0)`.
    Corner10,
    /// A non-corner equilibrium, identified by its enumeration index.
    Equilibrium(u8),
    /// Not within [`MATCH_TOL`] of any non-spurious equilibrium.
    Unresolved,
}

impl std::fmt::Display for OmegaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OmegaLabel::Utopia => f.write_str("utopia"),
            OmegaLabel::Dystopia => f.write_str("dystopia"),
            OmegaLabel::Corner01 => f.write_str("corner01"),
            OmegaLabel::Corner10 => f.write_str("corner10"),
            OmegaLabel::Equilibrium(i) => write!(f, "eq{i}"),
            OmegaLabel::Unresolved => f.write_str("unresolved"),
        }
    }
}

/// The fixed label enumeration used in basin-map files. Convergence to a
/// non-corner equilibrium happens only on measure-zero sets and is folded
/// into `Unresolved`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinLabel {
    Utopia,
    Dystopia,
    Corner01,
    Corner10,
    Unresolved,
}

impl From<OmegaLabel> for BasinLabel {
    fn from(l: OmegaLabel) -> Self {
        match l {
            OmegaLabel::Utopia => BasinLabel::Utopia,
            OmegaLabel::Dystopia => BasinLabel::Dystopia,
            OmegaLabel::Corner01 => BasinLabel::Corner01,
            OmegaLabel::Corner10 => BasinLabel::Corner10,
            OmegaLabel::Equilibrium(_) | OmegaLabel::Unresolved => BasinLabel::Unresolved,
        }
    }
}

impl std::fmt::Display for BasinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BasinLabel::Utopia => "utopia",
            BasinLabel::Dystopia => "dystopia",
            BasinLabel::Corner01 => "corner01",
            BasinLabel::Corner10 => "corner10",
            BasinLabel::Unresolved => "unresolved",
        })
    }
}

impl std::str::FromStr for BasinLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "utopia" => Ok(BasinLabel::Utopia),
            "dystopia" => Ok(BasinLabel::Dystopia),
            "corner01" => Ok(BasinLabel::Corner01),
            "corner10" => Ok(BasinLabel::Corner10),
            "unresolved" => Ok(BasinLabel::Unresolved),
            other => Err(format!("unknown basin label `{other}`")),
        }
    }
}

/// A single classical fourth-order Runge-Kutta step for an autonomous
/// system, with no boundary handling.
pub fn rk4_step<const N: usize>(
    rhs: impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    dt: f64,
) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], h: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += h * k[i];
        }
        out
    };
    let k1 = rhs(y);
    let k2 = rhs(&add(y, &k1, 0.5 * dt));
    let k3 = rhs(&add(y, &k2, 0.5 * dt));
    let k4 = rhs(&add(y, &k3, dt));
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// A Runge-Kutta step followed by a finiteness check and a clamp of every
/// coordinate onto `[0, 1]`.
pub fn step_rk4<const N: usize>(
    rhs: impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    dt: f64,
) -> Result<[f64; N]> {
    let raw = rk4_step(rhs, y, dt);
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "runge-kutta step",
            t: f64::NAN,
            state: format!("{y:?}"),
        });
    }
    Ok(raw.map(|v| v.clamp(0.0, 1.0)))
}

/// One clamped step of the reduced system.
pub fn step_reduced(p: &ModelParams, s: ReducedState, dt: f64) -> Result<ReducedState> {
    let (np, a) = (p.n_p(), p.a());
    let f = |y: &[f64; 2]| reduced_rhs_raw(np, a, y[0], y[1]);
    let next = step_rk4(f, &[s.x(), s.z()], dt)?;
    Ok(ReducedState::new(next[0], next[1]).expect("clamped state is in the box"))
}

/// One clamped, renormalized step of the full four-component system.
pub fn step_full(p: &ModelParams, s: &FullState, dt: f64) -> Result<FullState> {
    let f = |y: &[f64; 4]| {
        let state = FullState::renormalized(y[0], y[1], y[2], y[3]);
        let (ud, md) = coupled_rhs(p, &state);
        [ud[0], ud[1], md[0], md[1]]
    };
    let next = step_rk4(f, &[s.x(), s.y(), s.z(), s.w()], dt)?;
    Ok(FullState::renormalized(next[0], next[1], next[2], next[3]))
}

/// A time-stamped state sequence with its terminal classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    /// `(t, state)` samples at every step, starting at `t = 0`.
    pub samples: Vec<(f64, S)>,
    /// Classification of the final state by equilibrium proximity.
    pub terminal_label: OmegaLabel,
}

impl<S: Copy> Trajectory<S> {
    pub fn final_time(&self) -> f64 {
        self.samples.last().expect("trajectory is non-empty").0
    }

    pub fn final_state(&self) -> S {
        self.samples.last().expect("trajectory is non-empty").1
    }
}

pub(crate) fn horizon_steps(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "T",
            value: t_final,
            requirement: "be positive and finite",
        });
    }
    if !(dt > 0.0 && dt <= t_final) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            requirement: "satisfy 0 < dt <= T",
        });
    }
    Ok((t_final / dt - 1e-9).ceil() as usize)
}

fn at_time(e: Error, t: f64, state: String) -> Error {
    match e {
        Error::NonFinite { context, .. } => Error::NonFinite { context, t, state },
        other => other,
    }
}

/// Fixed-step trajectory of an arbitrary planar field on the unit box,
/// labeled against the given anchors.
pub(crate) fn simulate_planar(
    rhs: &dyn Fn(f64, f64) -> [f64; 2],
    anchors: &[(f64, f64, OmegaLabel)],
    s0: ReducedState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory<ReducedState>> {
    let steps = horizon_steps(t_final, dt)?;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, s0));
    let mut s = s0;
    for k in 1..=steps {
        let t = k as f64 * dt;
        let next = step_rk4(|y: &[f64; 2]| rhs(y[0], y[1]), &[s.x(), s.z()], dt)
            .map_err(|e| at_time(e, t, format!("({}, {})", s.x(), s.z())))?;
        s = ReducedState::new(next[0], next[1]).expect("clamped state is in the box");
        samples.push((t, s));
    }
    let terminal_label = nearest_equilibrium(anchors, s.x(), s.z());
    Ok(Trajectory {
        samples,
        terminal_label,
    })
}

/// Integrates the reduced system with fixed steps over `[0, T]`,
/// recording every step.
pub fn simulate(
    p: &ModelParams,
    s0: ReducedState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory<ReducedState>> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| reduced_rhs_raw(np, a, x, z);
    simulate_planar(&rhs, &standard_anchors(p), s0, t_final, dt)
}

/// Integrates the full four-component system with fixed steps.
pub fn simulate_full(
    p: &ModelParams,
    s0: FullState,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory<FullState>> {
    let steps = horizon_steps(t_final, dt)?;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, s0));
    let mut s = s0;
    for k in 1..=steps {
        let t = k as f64 * dt;
        s = step_full(p, &s, dt).map_err(|e| at_time(e, t, format!("{s:?}")))?;
        samples.push((t, s));
    }
    let r = s.reduced();
    let terminal_label = nearest_equilibrium(&standard_anchors(p), r.x(), r.z());
    Ok(Trajectory {
        samples,
        terminal_label,
    })
}

/// Non-spurious equilibria of the standard model, paired with labels.
pub(crate) fn standard_anchors(p: &ModelParams) -> Vec<(f64, f64, OmegaLabel)> {
    enumerate_equilibria(p)
        .iter()
        .filter(|e| !e.spurious)
        .map(|e| {
            let label = match e.index {
                1 => OmegaLabel::Dystopia,
                2 => OmegaLabel::Corner01,
                3 => OmegaLabel::Corner10,
                4 => OmegaLabel::Utopia,
                i => OmegaLabel::Equilibrium(i),
            };
            (e.x, e.z, label)
        })
        .collect()
}

/// Labels a state by its nearest anchor if within [`MATCH_TOL`].
pub(crate) fn nearest_equilibrium(
    anchors: &[(f64, f64, OmegaLabel)],
    x: f64,
    z: f64,
) -> OmegaLabel {
    let mut best = (f64::INFINITY, OmegaLabel::Unresolved);
    for &(ex, ez, label) in anchors {
        let d = ((x - ex).powi(2) + (z - ez).powi(2)).sqrt();
        if d < best.0 {
            best = (d, label);
        }
    }
    if best.0 <= MATCH_TOL {
        best.1
    } else {
        OmegaLabel::Unresolved
    }
}

/// A planar system together with its classification anchors; shared by
/// the standard and incentives omega-limit machinery.
pub(crate) struct PlanarSystem<'a> {
    pub rhs: &'a (dyn Fn(f64, f64) -> [f64; 2] + Sync),
    pub anchors: &'a [(f64, f64, OmegaLabel)],
    /// Vertical separatrix abscissa, when one is known in closed form.
    pub separatrix: Option<f64>,
}

pub(crate) fn omega_limit_impl(
    sys: &PlanarSystem<'_>,
    x0: f64,
    z0: f64,
    dt: f64,
    t_max: f64,
) -> Result<OmegaLabel> {
    let mut s = [x0, z0];
    let mut t = 0.0;
    loop {
        let d = (sys.rhs)(s[0], s[1]);
        if (d[0] * d[0] + d[1] * d[1]).sqrt() < CONVERGENCE_TOL || t >= t_max {
            return Ok(nearest_equilibrium(sys.anchors, s[0], s[1]));
        }
        s = step_rk4(|y: &[f64; 2]| (sys.rhs)(y[0], y[1]), &s, dt)
            .map_err(|e| at_time(e, t, format!("({}, {})", s[0], s[1])))?;
        t += dt;
    }
}

/// Integrates until the field norm drops below [`CONVERGENCE_TOL`] (or
/// the horizon [`DEFAULT_T_MAX`] runs out) and labels the end state by
/// equilibrium proximity. Running out of horizon is a label, not a
/// failure.
pub fn omega_limit(p: &ModelParams, s0: ReducedState) -> Result<OmegaLabel> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| reduced_rhs_raw(np, a, x, z);
    let anchors = standard_anchors(p);
    let sys = PlanarSystem {
        rhs: &rhs,
        anchors: &anchors,
        separatrix: basin_threshold(p),
    };
    omega_limit_impl(&sys, s0.x(), s0.z(), DEFAULT_DT, DEFAULT_T_MAX)
}

/// A labeled grid of omega-limit outcomes over the open unit box.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinMap {
    resolution: usize,
    labels: Vec<BasinLabel>,
}

impl BasinMap {
    /// Grid resolution per axis.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Row-major labels (`z` varies slowest).
    pub fn labels(&self) -> &[BasinLabel] {
        &self.labels
    }

    /// Label of the cell with `x` index `ix` and `z` index `iz`.
    pub fn label(&self, ix: usize, iz: usize) -> BasinLabel {
        self.labels[iz * self.resolution + ix]
    }

    /// Center coordinate of cell `i` along either axis: `(i + 1/2) / n`.
    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.resolution as f64
    }

    pub fn count(&self, label: BasinLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn fraction(&self, label: BasinLabel) -> f64 {
        self.count(label) as f64 / self.labels.len() as f64
    }

    /// Measured separatrix abscissa in one `z` row: the midpoint between
    /// the rightmost dystopia cell and the leftmost utopia cell, provided
    /// they are ordered.
    pub fn row_separatrix(&self, iz: usize) -> Option<f64> {
        let row = &self.labels[iz * self.resolution..(iz + 1) * self.resolution];
        let last_d = row.iter().rposition(|&l| l == BasinLabel::Dystopia)?;
        let first_u = row.iter().position(|&l| l == BasinLabel::Utopia)?;
        (last_d < first_u).then(|| 0.5 * (self.cell_center(last_d) + self.cell_center(first_u)))
    }

    /// Measured separatrix abscissa averaged over all rows that contain
    /// a dystopia-to-utopia transition.
    pub fn separatrix_estimate(&self) -> Option<f64> {
        let rows: Vec<f64> = (0..self.resolution)
            .filter_map(|iz| self.row_separatrix(iz))
            .collect();
        (!rows.is_empty()).then(|| rows.iter().sum::<f64>() / rows.len() as f64)
    }
}

pub(crate) fn basin_map_impl(sys: &PlanarSystem<'_>, n: usize) -> Result<BasinMap> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: n as f64,
            requirement: "be at least 2",
        });
    }
    let labels: Result<Vec<BasinLabel>> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let ix = idx % n;
            let iz = idx / n;
            let x0 = (ix as f64 + 0.5) / n as f64;
            let z0 = (iz as f64 + 0.5) / n as f64;
            if let Some(x_star) = sys.separatrix {
                if (x0 - x_star).abs() < SEPARATRIX_GUARD {
                    return Ok(BasinLabel::Unresolved);
                }
            }
            omega_limit_impl(sys, x0, z0, DEFAULT_DT, DEFAULT_T_MAX).map(BasinLabel::from)
        })
        .collect();
    Ok(BasinMap {
        resolution: n,
        labels: labels?,
    })
}

/// Classifies the omega limit of every cell center of an `n` by `n` grid
/// over the open unit box. Cells are independent and evaluated in
/// parallel; the output ordering is deterministic.
pub fn basin_map(p: &ModelParams, n: usize) -> Result<BasinMap> {
    let (np, a) = (p.n_p(), p.a());
    let rhs = move |x: f64, z: f64| reduced_rhs_raw(np, a, x, z);
    let anchors = standard_anchors(p);
    let sys = PlanarSystem {
        rhs: &rhs,
        anchors: &anchors,
        separatrix: basin_threshold(p),
    };
    basin_map_impl(&sys, n)
}

/// A sampled vector-field point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub x: f64,
    pub z: f64,
    pub dx: f64,
    pub dz: f64,
}

pub(crate) fn field_sample_impl(
    rhs: &dyn Fn(f64, f64) -> [f64; 2],
    n: usize,
) -> Result<Vec<FieldPoint>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: n as f64,
            requirement: "be at least 2",
        });
    }
    let mut out = Vec::with_capacity(n * n);
    for iz in 0..n {
        let z = iz as f64 / (n - 1) as f64;
        for ix in 0..n {
            let x = ix as f64 / (n - 1) as f64;
            let d = rhs(x, z);
            out.push(FieldPoint {
                x,
                z,
                dx: d[0],
                dz: d[1],
            });
        }
    }
    Ok(out)
}

/// Samples the reduced field on an `n` by `n` grid of nodes spanning the
/// closed unit box (corners included).
pub fn field_sample(p: &ModelParams, n: usize) -> Result<Vec<FieldPoint>> {
    let (np, a) = (p.n_p(), p.a());
    field_sample_impl(&move |x, z| reduced_rhs_raw(np, a, x, z), n)
}
