//! `basin`: omega-limit label for every cell center of a grid over the
//! open unit box, written as CSV with a console summary that includes the
//! measured separatrix location.

use std::fmt::Write as _;

use modgame::analysis::{basin_threshold, vertical_separatrix};
use modgame::extensions::incentives_basin_map;
use modgame::integrate::{basin_map, BasinLabel, BasinMap};

use crate::commands::from_core;
use crate::config::{ModelKind, Scenario};
use crate::output::{fmt_f64, write_atomic};
use crate::CliError;

pub fn run(scenario: &Scenario) -> Result<(), CliError> {
    let n = scenario.grid;
    let (map, analytic): (BasinMap, Option<f64>) = match scenario.model {
        ModelKind::Standard => {
            let p = scenario.standard_params()?;
            let map = basin_map(&p, n).map_err(from_core)?;
            let analytic = vertical_separatrix(&p)
                .then(|| basin_threshold(&p))
                .flatten();
            (map, analytic)
        }
        ModelKind::Incentives => {
            let p = scenario.incentive_params()?;
            (incentives_basin_map(&p, n).map_err(from_core)?, None)
        }
        ModelKind::Epidemic => {
            return Err(CliError::Config(
                "`basin` supports the standard and incentives models".into(),
            ))
        }
    };

    let mut csv = String::from("x,z,label\n");
    for iz in 0..n {
        for ix in 0..n {
            let _ = writeln!(
                csv,
                "{},{},{}",
                fmt_f64(map.cell_center(ix)),
                fmt_f64(map.cell_center(iz)),
                map.label(ix, iz)
            );
        }
    }
    let path = scenario.out_or("basin.csv");
    write_atomic(&path, &csv)?;

    println!(
        "basin map {n}x{n} for np = {}, a = {} ({} model)",
        scenario.np()?,
        scenario.a()?,
        scenario.model
    );
    let total = (n * n) as f64;
    for label in [
        BasinLabel::Utopia,
        BasinLabel::Dystopia,
        BasinLabel::Corner01,
        BasinLabel::Corner10,
        BasinLabel::Unresolved,
    ] {
        let count = map.count(label);
        if count > 0 || label == BasinLabel::Unresolved {
            println!(
                "  {label}: {count} cells ({:.2}%)",
                100.0 * count as f64 / total
            );
        }
    }
    match map.separatrix_estimate() {
        Some(measured) => println!("  measured separatrix x = {measured:.6}"),
        None => println!("  no dystopia-to-utopia transition measured"),
    }
    if let Some(x_star) = analytic {
        println!("  analytic separatrix x* = {x_star:.6}");
    }
    println!("wrote {}", path.display());
    Ok(())
}
