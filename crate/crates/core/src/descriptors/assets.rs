//! Loading of the tab-separated parameter assets. Every asset ships embedded
//! in the library and can be overridden from a data directory.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::molkit::data_lines;

pub(crate) const CRIPPEN: &str = include_str!("../../data/crippen.tsv");
pub(crate) const TPSA: &str = include_str!("../../data/tpsa.tsv");
pub(crate) const QED_PARAMS: &str = include_str!("../../data/qed_params.tsv");
pub(crate) const SA_PARAMS: &str = include_str!("../../data/sa_params.tsv");
pub(crate) const SA_FRAGMENTS_GZ: &[u8] = include_bytes!("../../data/sa_fragments.tsv.gz");
pub(crate) const EGG: &str = include_str!("../../data/egg.tsv");
pub(crate) const BRENK: &str = include_str!("../../data/brenk.smarts");
pub(crate) const PAINS: &str = include_str!("../../data/pains.smarts");
pub(crate) const QED_ALERTS: &str = include_str!("../../data/qed_alerts.smarts");

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("{asset}:{line}: {reason}")]
    Malformed { asset: String, line: usize, reason: String },
    #[error("{asset}: {reason}")]
    Invalid { asset: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AssetError {
    pub(crate) fn malformed(asset: &str, line: usize, reason: impl Into<String>) -> Self {
        AssetError::Malformed {
            asset: asset.to_string(),
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(asset: &str, reason: impl Into<String>) -> Self {
        AssetError::Invalid {
            asset: asset.to_string(),
            reason: reason.into(),
        }
    }
}

/// Split data lines (comments and blanks removed) into tab-separated fields,
/// requiring at least `min_fields`.
pub(crate) fn records<'a>(
    asset: &'a str,
    text: &'a str,
    min_fields: usize,
) -> impl Iterator<Item = Result<(usize, Vec<&'a str>), AssetError>> + 'a {
    data_lines(text).map(move |(line, content)| {
        let fields: Vec<&str> = content.split('\t').map(str::trim).collect();
        if fields.len() < min_fields || fields[..min_fields].iter().any(|f| f.is_empty()) {
            Err(AssetError::malformed(
                asset,
                line,
                format!("expected at least {min_fields} tab-separated fields"),
            ))
        } else {
            Ok((line, fields))
        }
    })
}

pub(crate) fn parse_f64(asset: &str, line: usize, field: &str) -> Result<f64, AssetError> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| AssetError::malformed(asset, line, format!("not a number: {field:?}")))
}

/// Read `name` from `dir` when present there, else use the embedded text.
pub(crate) fn read_text(dir: Option<&Path>, name: &str, embedded: &'static str) -> Result<String, AssetError> {
    match dir.map(|d| d.join(name)).filter(|p| p.exists()) {
        Some(path) => std::fs::read_to_string(&path).map_err(|source| AssetError::Io { path, source }),
        None => Ok(embedded.to_string()),
    }
}
