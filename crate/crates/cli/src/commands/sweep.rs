use chainmix::perturbation::{sweep_csv, RestartKind, SweepConfig};
use chainmix::{trichotomy_sweep, BoundOptions, Family};

use super::check_unit_open;
use crate::error::CliError;
use crate::output::{to_json, write};
use crate::svg::{Chart, Series};
use crate::{Format, RestartChoice, SweepArgs};

pub fn run(a: &SweepArgs) -> Result<(), CliError> {
    let family: Family = a.family.parse().map_err(CliError::Usage)?;
    if a.n_list.is_empty() {
        return Err(CliError::Usage("--n-list is empty".into()));
    }
    check_unit_open("eps", a.eps)?;
    if a.svg && a.output.out.is_none() {
        return Err(CliError::Usage("--svg needs --out".into()));
    }
    let restart = match a.restart {
        RestartChoice::Uniform => RestartKind::Uniform,
        RestartChoice::Adversarial => {
            if !(a.delta > 0.0 && a.delta < 0.5) {
                return Err(CliError::Usage(format!("--delta must lie in (0, 1/2), got {}", a.delta)));
            }
            RestartKind::Adversarial { delta: a.delta }
        }
    };
    let cfg = SweepConfig {
        family,
        n_list: a.n_list.clone(),
        rule: a.alpha_rule,
        restart,
        opts: BoundOptions {
            eps: a.eps,
            t_cap: a.t_cap,
            ..BoundOptions::default()
        },
    };
    let rows = trichotomy_sweep(&cfg)?;
    let csv = sweep_csv(&rows);
    let json = to_json(&rows);
    match a.output.format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{json}"),
    }
    if let Some(dir) = &a.output.out {
        write(dir, "sweep.csv", &csv)?;
        write(dir, "sweep.json", &json)?;
        if a.svg {
            let pts = |f: &dyn Fn(&chainmix::PerturbationReport) -> Option<f64>| {
                rows.iter().filter_map(|r| f(r).map(|v| (r.n as f64, v))).collect::<Vec<_>>()
            };
            let mut series = vec![
                Series {
                    name: "error".into(),
                    color: "#1f77b4",
                    points: pts(&|r| Some(r.error)),
                },
                Series {
                    name: "upper bound".into(),
                    color: "#2ca02c",
                    points: pts(&|r| Some(r.upper_bound)),
                },
            ];
            let lower = pts(&|r| r.lower_bound);
            if !lower.is_empty() {
                series.push(Series {
                    name: "certified lower".into(),
                    color: "#d62728",
                    points: lower,
                });
            }
            let chart = Chart {
                title: format!("{} sweep, alpha rule {}", family.name(), a.alpha_rule),
                x_label: "n".into(),
                y_label: "||pi - pi~||".into(),
                y_range: (0.0, 1.0),
                series,
            };
            write(dir, "sweep.svg", &chart.render())?;
        }
    }
    Ok(())
}
