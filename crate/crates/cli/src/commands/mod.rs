pub mod analyze;
pub mod couple;
pub mod figure1;
pub mod perturb;
pub mod sweep;

use crate::error::CliError;

pub(crate) fn check_unit_open(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must lie in (0, 1), got {v}")))
    }
}
