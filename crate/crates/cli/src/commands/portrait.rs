//! `portrait`: the vector field sampled on a grid spanning the closed
//! unit box, as CSV and optionally as an SVG quiver plot with equilibria
//! overlaid.

use std::fmt::Write as _;

use modgame::analysis::{classify_all, classify_eigenvalues, eigenvalues};
use modgame::extensions::{
    incentives_extra_equilibria, incentives_field_sample, incentives_jacobian,
};
use modgame::integrate::field_sample;
use modgame::ReducedState;

use crate::commands::from_core;
use crate::config::{ModelKind, Scenario};
use crate::output::{fmt_f64, write_atomic};
use crate::svg::{render_portrait, Marker};
use crate::CliError;

pub fn run(scenario: &Scenario) -> Result<(), CliError> {
    let n = scenario.grid;
    let (field, markers, title) = match scenario.model {
        ModelKind::Standard => {
            let p = scenario.standard_params()?;
            let field = field_sample(&p, n).map_err(from_core)?;
            let markers: Vec<Marker> = classify_all(&p)
                .iter()
                .filter(|e| !e.spurious)
                .map(|e| Marker {
                    x: e.x,
                    z: e.z,
                    classification: e.classification,
                })
                .collect();
            let title = format!("phase portrait (standard), np = {}, a = {}", p.n_p(), p.a());
            (field, markers, title)
        }
        ModelKind::Incentives => {
            let p = scenario.incentive_params()?;
            let field = incentives_field_sample(&p, n).map_err(from_core)?;
            let mut markers: Vec<Marker> = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
                .into_iter()
                .map(|(x, z)| Marker {
                    x,
                    z,
                    classification: Some(classify_eigenvalues(eigenvalues(incentives_jacobian(
                        &p,
                        ReducedState::new(x, z).expect("corner"),
                    )))),
                })
                .collect();
            let extras = incentives_extra_equilibria(&p);
            if !extras.is_empty() {
                println!("note: non-corner equilibria present: {extras:?}");
                for (x, z) in extras {
                    markers.push(Marker {
                        x,
                        z,
                        classification: Some(classify_eigenvalues(eigenvalues(
                            incentives_jacobian(&p, ReducedState::new(x, z).expect("in box")),
                        ))),
                    });
                }
            }
            let title = format!(
                "phase portrait (incentives), np = {}, a = {}",
                p.n_p(),
                p.a()
            );
            (field, markers, title)
        }
        ModelKind::Epidemic => {
            return Err(CliError::Config(
                "`portrait` supports the standard and incentives models".into(),
            ))
        }
    };

    let mut csv = String::from("x,z,xdot,zdot\n");
    for f in &field {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_f64(f.x),
            fmt_f64(f.z),
            fmt_f64(f.dx),
            fmt_f64(f.dz)
        );
    }
    let path = scenario.out_or("portrait.csv");
    write_atomic(&path, &csv)?;
    println!("wrote {}", path.display());

    if let Some(svg_path) = &scenario.svg {
        let svg = render_portrait(&field, n, &markers, &title);
        write_atomic(svg_path, &svg)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
