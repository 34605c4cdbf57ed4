use chainmix::perturbation::adversarial_restart;
use chainmix::{
    cgb_even_coupling, cgb_odd_coupling, restart_coupling, restart_matrix, BoundOptions,
    RestartPerturbation,
};

use super::check_unit_open;
use crate::error::CliError;
use crate::output::{to_json, write};
use crate::source::{parse_sigma, SigmaSpec};
use crate::{CoupleArgs, CouplingKind, Format};

pub fn run(a: &CoupleArgs) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let trace = match a.coupling {
        CouplingKind::Cgb => {
            let n = match (a.chain.family.as_deref(), a.chain.n) {
                (Some("cgb"), Some(n)) => n,
                _ => return Err(CliError::Usage("--coupling cgb needs --family cgb --n <n>".into())),
            };
            let j = a.j.unwrap_or(n);
            for (name, s) in [("i", a.i), ("j", j)] {
                if s == 0 || s > n {
                    return Err(CliError::Usage(format!("--{name} {s} is outside states 1..={n}")));
                }
            }
            if n % 2 == 0 {
                cgb_even_coupling(n, a.i - 1, j - 1, a.t, a.trials, a.seed)?
            } else {
                cgb_odd_coupling(n, a.i - 1, j - 1, a.t, a.trials, a.seed)?
            }
        }
        CouplingKind::Restart => {
            check_unit_open("alpha", a.alpha)?;
            let chain = a.chain.load()?;
            let pert = match parse_sigma(&a.sigma, &chain.pi)? {
                SigmaSpec::Law(sigma) => RestartPerturbation::new(a.alpha, sigma)?,
                SigmaSpec::Adversarial => {
                    adversarial_restart(&chain.p, &chain.pi, 0.1, a.alpha, &BoundOptions::default())?.pert
                }
            };
            let pt = restart_matrix(&chain.p, &pert)?;
            restart_coupling(&chain.p, &pt, a.t, a.trials, a.seed)?
        }
    };
    let csv = trace.to_csv();
    let json = to_json(&trace);
    match a.output.format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{json}"),
    }
    if let Some(dir) = &a.output.out {
        write(dir, "coupling.csv", &csv)?;
        write(dir, "coupling.json", &json)?;
    }
    Ok(())
}
