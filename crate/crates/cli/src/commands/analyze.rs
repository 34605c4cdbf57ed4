use std::fmt::Write as _;

use chainmix::mixing::profile_until;
use chainmix::{classify, distance_profile, spectrum, BALANCE_TOL};
use serde::Serialize;

use super::check_unit_open;
use crate::error::CliError;
use crate::output::{to_json, write};
use crate::{AnalyzeArgs, Format};

#[derive(Serialize)]
struct MixingRow {
    eps: f64,
    t_mix: usize,
}

#[derive(Serialize)]
struct Summary {
    chain: String,
    n: usize,
    properties: chainmix::ChainProperties,
    /// Present for reversible chains; null when infinite.
    lambda_star: Option<f64>,
    t_rel: Option<f64>,
    stationary: Vec<f64>,
    mixing_times: Vec<MixingRow>,
    profile_t_max: usize,
}

pub fn run(a: &AnalyzeArgs) -> Result<(), CliError> {
    if a.eps.is_empty() {
        return Err(CliError::Usage("--eps needs at least one value".into()));
    }
    for &e in &a.eps {
        check_unit_open("eps", e)?;
    }
    let chain = a.chain.load()?;
    let (p, pi) = (&chain.p, &chain.pi);
    let n = p.n();

    let min_eps = a.eps.iter().copied().fold(1.0, f64::min);
    let t_max = a.t_max.unwrap_or(4 * n);
    let mut profile = profile_until(p, pi, min_eps, a.t_cap)?;
    if profile.t_max() < t_max {
        profile = distance_profile(p, pi, t_max)?;
    }
    let mixing_times = a
        .eps
        .iter()
        .map(|&eps| Ok(MixingRow { eps, t_mix: profile.mixing_time(eps)? }))
        .collect::<Result<Vec<_>, chainmix::Error>>()?;

    let properties = classify(p, pi, BALANCE_TOL)?;
    let (lambda_star, t_rel) = if properties.reversible {
        let s = spectrum(p, pi)?;
        (Some(s.lambda_star), s.t_rel.is_finite().then_some(s.t_rel))
    } else {
        (None, None)
    };
    let summary = Summary {
        chain: chain.label.clone(),
        n,
        properties,
        lambda_star,
        t_rel,
        stationary: pi.probs().to_vec(),
        mixing_times,
        profile_t_max: profile.t_max(),
    };

    let mut table = String::from("eps,t_mix\n");
    for r in &summary.mixing_times {
        let _ = writeln!(table, "{:?},{}", r.eps, r.t_mix);
    }
    let json = to_json(&summary);
    match a.output.format {
        Format::Csv => print!("{table}"),
        Format::Json => print!("{json}"),
    }
    if let Some(dir) = &a.output.out {
        let mut stationary = String::from("state,pi\n");
        for (i, v) in pi.probs().iter().enumerate() {
            let _ = writeln!(stationary, "{},{v:?}", i + 1);
        }
        write(dir, "profile.csv", &profile.to_csv())?;
        write(dir, "mixing_times.csv", &table)?;
        write(dir, "stationary.csv", &stationary)?;
        write(dir, "properties.json", &json)?;
    }
    Ok(())
}
