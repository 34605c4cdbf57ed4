use chainmix::io::parse_chain;
use chainmix::perturbation::{adversarial_restart, perturbation_report, sweep_csv, PerturbationReport};
use chainmix::{restart_matrix, BoundOptions, RestartPerturbation, VALIDATION_TOL};

use super::check_unit_open;
use crate::error::CliError;
use crate::output::{read, to_json, write};
use crate::source::{parse_sigma, SigmaSpec};
use crate::{Format, PerturbArgs};

pub fn run(a: &PerturbArgs) -> Result<(), CliError> {
    check_unit_open("alpha", a.alpha)?;
    check_unit_open("eps", a.eps)?;
    let chain = a.chain.load()?;
    let (p, pi) = (&chain.p, &chain.pi);
    let opts = BoundOptions {
        eps: a.eps,
        t_cap: a.t_cap,
        ..BoundOptions::default()
    };
    let report: PerturbationReport = if let Some(path) = &a.ptilde {
        let pt = parse_chain(&read(path)?, VALIDATION_TOL).map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
        perturbation_report(p, pi, &pt, a.alpha, &opts)?
    } else {
        match parse_sigma(&a.sigma, pi)? {
            SigmaSpec::Adversarial => {
                if !(a.delta > 0.0 && a.delta < 0.5) {
                    return Err(CliError::Usage(format!("--delta must lie in (0, 1/2), got {}", a.delta)));
                }
                adversarial_restart(p, pi, a.delta, a.alpha, &opts)?.report
            }
            SigmaSpec::Law(sigma) => {
                let pt = restart_matrix(p, &RestartPerturbation::new(a.alpha, sigma)?)?;
                perturbation_report(p, pi, &pt, a.alpha, &opts)?
            }
        }
    };
    if report.radius > a.alpha + 1e-12 {
        eprintln!(
            "warning: radius {} exceeds alpha {}; the upper bound does not apply",
            report.radius, a.alpha
        );
    }
    let csv = sweep_csv(std::slice::from_ref(&report));
    let json = to_json(&report);
    match a.output.format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{json}"),
    }
    if let Some(dir) = &a.output.out {
        write(dir, "perturbation.csv", &csv)?;
        write(dir, "perturbation.json", &json)?;
    }
    Ok(())
}
