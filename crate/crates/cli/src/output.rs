//! File emission helpers: atomic writes, full-precision float formatting,
//! and a JSON formatter that keeps that precision.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Formats a float in scientific notation with 17 significant digits,
/// enough to reparse to the identical bit pattern.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a file through a temporary sibling and a rename, so partial
/// output is never observed at the final path.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |e: io::Error| CliError::Runtime(format!("cannot write {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(io_err)
}

/// JSON formatter that renders every float via [`fmt_f64`].
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a value to JSON with full-precision floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Runtime(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| CliError::Runtime(format!("non-utf8 json: {e}")))
}
