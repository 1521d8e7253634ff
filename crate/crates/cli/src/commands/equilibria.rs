//! `equilibria`: the nine-candidate table with spuriousness, eigenvalues,
//! and stability classification, as console output plus a JSON record.

use serde::Serialize;

use modgame::analysis::{classify_all, Complex64};

use crate::config::{ModelKind, Scenario};
use crate::output::{to_json, write_atomic};
use crate::CliError;

#[derive(Serialize)]
struct EigenvalueRecord {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct EquilibriumRecord {
    index: u8,
    x: f64,
    z: f64,
    spurious: bool,
    eigenvalues: Option<[EigenvalueRecord; 2]>,
    classification: Option<String>,
}

#[derive(Serialize)]
struct Report {
    model: String,
    np: f64,
    a: f64,
    equilibria: Vec<EquilibriumRecord>,
}

fn fmt_eigenvalue(e: Complex64) -> String {
    if e.im == 0.0 {
        format!("{:.6}", e.re)
    } else {
        format!("{:.6}{:+.6}i", e.re, e.im)
    }
}

pub fn run(scenario: &Scenario) -> Result<(), CliError> {
    if scenario.model != ModelKind::Standard {
        return Err(CliError::Config(format!(
            "`equilibria` supports only the standard model (got {})",
            scenario.model
        )));
    }
    let p = scenario.standard_params()?;
    let all = classify_all(&p);

    let report = Report {
        model: scenario.model.to_string(),
        np: p.n_p(),
        a: p.a(),
        equilibria: all
            .iter()
            .map(|e| EquilibriumRecord {
                index: e.index,
                x: e.x,
                z: e.z,
                spurious: e.spurious,
                eigenvalues: e.eigenvalues.map(|[a, b]| {
                    [
                        EigenvalueRecord { re: a.re, im: a.im },
                        EigenvalueRecord { re: b.re, im: b.im },
                    ]
                }),
                classification: e.classification.map(|c| c.to_string()),
            })
            .collect(),
    };
    let path = scenario.out_or("equilibria.json");
    write_atomic(&path, &to_json(&report)?)?;

    println!(
        "equilibria for n_p = {}, a = {} (standard model)",
        p.n_p(),
        p.a()
    );
    println!(
        "{:>2}  {:>15}  {:>15}  {:>8}  {:>14}  eigenvalues",
        "#", "x", "z", "spurious", "classification"
    );
    for e in &all {
        let class = e
            .classification
            .map(|c| c.to_string())
            .unwrap_or_else(|| "-".into());
        let eig = e
            .eigenvalues
            .map(|[a, b]| format!("{}, {}", fmt_eigenvalue(a), fmt_eigenvalue(b)))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>2}  {:>15.9}  {:>15.9}  {:>8}  {:>14}  {}",
            e.index,
            e.x,
            e.z,
            if e.spurious { "yes" } else { "no" },
            class,
            eig
        );
    }

    println!("wrote {}", path.display());
    Ok(())
}
