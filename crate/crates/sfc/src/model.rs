//! The model file: one JSON document holding a [`ChainModel`].

use std::path::Path;

use sfc_core::ChainModel;

use crate::{Error, Result};

/// Compact JSON plus a trailing newline. Equal models give equal bytes.
pub fn to_bytes(model: &ChainModel) -> Vec<u8> {
    let mut out = serde_json::to_vec(model).expect("models serialize");
    out.push(b'\n');
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<ChainModel> {
    let model: ChainModel = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("model file: {e}"),
    })?;
    model.validate()?;
    Ok(model)
}

pub fn save_model(path: &Path, model: &ChainModel) -> Result<()> {
    std::fs::write(path, to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<ChainModel> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    })
}
