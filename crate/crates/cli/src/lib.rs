//! Command-line front end for `k3si`: model-file loading and the
//! reproduction report.

pub mod commands;
pub mod report;

use std::path::Path;

use k3si::io::{parse_model_text, IoError, ModelFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: IoError },
}

/// Reads a lattice or Weierstrass-model JSON file, running the invariant
/// self-checks of the parser.
pub fn parse_model_file(path: impl AsRef<Path>) -> Result<ModelFile, CliError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    parse_model_text(&text).map_err(|source| CliError::Parse { path: shown, source })
}

#[cfg(test)]
mod tests {
    use std::io::Write;
    use std::path::PathBuf;

    use super::*;

    fn models() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
    }

    #[test]
    fn model_files() {
        match parse_model_file(models().join("a2.json")).unwrap() {
            ModelFile::Lattice { lattice, .. } => {
                assert!(lattice.is_even());
                assert_eq!(lattice.det(), 3.into());
            }
            other => panic!("{other:?}"),
        }
        match parse_model_file(models().join("x3.json")).unwrap() {
            ModelFile::Weierstrass(w) => {
                assert_eq!(w.chi(), 2);
                assert!(w.is_squared());
            }
            other => panic!("{other:?}"),
        }
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"name": "bad", "gram": [[2, "1/0"], [1, 2]]}}"#).unwrap();
        match parse_model_file(f.path()) {
            Err(CliError::Parse { source: IoError::Schema { path, .. }, .. }) => assert_eq!(path, "gram[0][1]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_model_file(models().join("missing.json")), Err(CliError::Read { .. })));
    }
}
