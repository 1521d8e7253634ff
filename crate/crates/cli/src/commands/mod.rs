pub mod basin;
pub mod equilibria;
pub mod portrait;
pub mod simulate;
pub mod sweep;

use crate::CliError;

/// Parameter and state validation failures are configuration errors;
/// only failures arising mid-run count as runtime errors.
pub fn from_core(e: modgame::Error) -> CliError {
    match e {
        modgame::Error::NonFinite { .. } => CliError::Runtime(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}
