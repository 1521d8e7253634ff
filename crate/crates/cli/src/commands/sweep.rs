//! `sweep`: closed-form regime predicates evaluated over a rectangular
//! parameter grid, one CSV row per `(n_p, a)` cell.

use std::fmt::Write as _;

use modgame::analysis::regime_cell;
use modgame::ModelParams;

use crate::config::{parse_range, ModelKind, Scenario};
use crate::output::{fmt_f64, write_atomic};
use crate::CliError;

pub fn run(scenario: &Scenario) -> Result<(), CliError> {
    if scenario.model != ModelKind::Standard {
        return Err(CliError::Config(format!(
            "`sweep` supports only the standard model (got {})",
            scenario.model
        )));
    }
    // a bare --np or --a doubles as a one-point range
    let np_values = match (&scenario.np_range, scenario.np) {
        (Some(text), _) => parse_range(text, "np")?,
        (None, Some(np)) => vec![np],
        (None, None) => {
            return Err(CliError::Config(
                "sweep needs --np-range (or --np) and --a-range (or --a)".into(),
            ))
        }
    };
    let a_values = match (&scenario.a_range, scenario.a) {
        (Some(text), _) => parse_range(text, "a")?,
        (None, Some(a)) => vec![a],
        (None, None) => {
            return Err(CliError::Config(
                "sweep needs --np-range (or --np) and --a-range (or --a)".into(),
            ))
        }
    };

    let mut csv = String::from(
        "np,a,utopia_stable,dystopia_stable,interior_exists,corner01_stable,corner10_stable\n",
    );
    let mut both_stable = 0usize;
    let mut interior = 0usize;
    for &np in &np_values {
        for &a in &a_values {
            let p = ModelParams::new(np, a).map_err(|e| CliError::Config(e.to_string()))?;
            let cell = regime_cell(&p);
            both_stable += (cell.utopia_stable && cell.dystopia_stable) as usize;
            interior += cell.interior_exists as usize;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                fmt_f64(cell.n_p),
                fmt_f64(cell.a),
                cell.utopia_stable,
                cell.dystopia_stable,
                cell.interior_exists,
                cell.corner_01_stable,
                cell.corner_10_stable
            );
        }
    }
    let path = scenario.out_or("sweep.csv");
    write_atomic(&path, &csv)?;
    let total = np_values.len() * a_values.len();
    println!(
        "swept {} cells ({} np x {} a): {both_stable} with both corners stable, {interior} with an interior equilibrium",
        total,
        np_values.len(),
        a_values.len()
    );
    println!("wrote {}", path.display());
    Ok(())
}
