pub mod analyze;
pub mod dilate;
pub mod paper;
pub mod repeat;

use crate::error::{CliError, CliResult};
use std::path::Path;

pub(crate) fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
