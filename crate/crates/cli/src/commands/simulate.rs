//! `simulate`: fixed-step trajectory of the chosen model, written as a
//! CSV time series with the terminal omega-limit label on stdout.

use std::fmt::Write as _;

use modgame::extensions::{simulate_epidemic, simulate_incentives};
use modgame::integrate::{simulate, Trajectory};
use modgame::ReducedState;

use crate::commands::from_core;
use crate::config::{ModelKind, Scenario};
use crate::output::{fmt_f64, write_atomic};
use crate::CliError;

fn initial_state(scenario: &Scenario) -> Result<ReducedState, CliError> {
    let (x0, z0) = scenario.initial_state()?;
    ReducedState::new(x0, z0).map_err(|e| CliError::Config(e.to_string()))
}

/// Strided `t,x,z` rows; the final sample is always written.
fn reduced_csv(traj: &Trajectory<ReducedState>, stride: usize) -> String {
    let mut csv = String::from("t,x,z\n");
    for (i, (t, s)) in traj.samples.iter().enumerate() {
        if i % stride == 0 || i == traj.samples.len() - 1 {
            let _ = writeln!(csv, "{},{},{}", fmt_f64(*t), fmt_f64(s.x()), fmt_f64(s.z()));
        }
    }
    csv
}

fn report_terminal(traj: &Trajectory<ReducedState>) {
    let end = traj.final_state();
    println!(
        "terminal state: x = {:.9}, z = {:.9}; omega-limit label: {}",
        end.x(),
        end.z(),
        traj.terminal_label
    );
}

pub fn run(scenario: &Scenario) -> Result<(), CliError> {
    let path = scenario.out_or("trajectory.csv");
    let stride = scenario.stride;
    match scenario.model {
        ModelKind::Standard => {
            let p = scenario.standard_params()?;
            let s0 = initial_state(scenario)?;
            let traj = simulate(&p, s0, scenario.t_final, scenario.dt).map_err(from_core)?;
            write_atomic(&path, &reduced_csv(&traj, stride))?;
            report_terminal(&traj);
        }
        ModelKind::Incentives => {
            let p = scenario.incentive_params()?;
            let s0 = initial_state(scenario)?;
            let traj =
                simulate_incentives(&p, s0, scenario.t_final, scenario.dt).map_err(from_core)?;
            write_atomic(&path, &reduced_csv(&traj, stride))?;
            report_terminal(&traj);
        }
        ModelKind::Epidemic => {
            let model = scenario.epidemic_model()?;
            let (x0, z0) = scenario.initial_state()?;
            let np0 = scenario.np()?;
            if !model.rates().is_stable_population() {
                eprintln!("note: lambda != mu; population total is not conserved in this mode");
            }
            let traj = simulate_epidemic(&model, [x0, z0, np0], scenario.t_final, scenario.dt)
                .map_err(from_core)?;
            let mut csv = String::from("t,x,z,np\n");
            for (i, (t, s)) in traj.samples.iter().enumerate() {
                if i % stride == 0 || i == traj.samples.len() - 1 {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{}",
                        fmt_f64(*t),
                        fmt_f64(s[0]),
                        fmt_f64(s[1]),
                        fmt_f64(s[2])
                    );
                }
            }
            write_atomic(&path, &csv)?;
            report_regime_crossings(&traj.samples, model.a());
            if traj.degenerate_split {
                eprintln!(
                    "note: population split reached a boundary; game coefficients degenerate there"
                );
            }
            let end = traj.final_state();
            println!(
                "terminal state: x = {:.9}, z = {:.9}, np = {:.9}; omega-limit label: {}",
                end[0], end[1], end[2], traj.terminal_label
            );
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// As the population split drifts it can cross the closed-form corner
/// stability thresholds; annotate each crossing time.
fn report_regime_crossings(samples: &[(f64, [f64; 3])], a: f64) {
    let utopia = |np: f64| np / (2.0 * (1.0 - np)) < a;
    let dystopia = |np: f64| a < 5.0 * np / (4.0 * (1.0 - np));
    let interior = |np: f64| np > 1e-12 && np < 1.0 - 1e-12;
    let mut prev: Option<(bool, bool)> = None;
    for (t, s) in samples {
        let np = s[2];
        if !interior(np) {
            continue;
        }
        let now = (utopia(np), dystopia(np));
        if let Some(was) = prev {
            if was.0 != now.0 {
                println!(
                    "t = {t:.4}: utopia corner stability changed ({} -> {}) at np = {np:.6}",
                    verdict(was.0),
                    verdict(now.0)
                );
            }
            if was.1 != now.1 {
                println!(
                    "t = {t:.4}: dystopia corner stability changed ({} -> {}) at np = {np:.6}",
                    verdict(was.1),
                    verdict(now.1)
                );
            }
        }
        prev = Some(now);
    }
}

fn verdict(stable: bool) -> &'static str {
    if stable {
        "stable"
    } else {
        "unstable"
    }
}
