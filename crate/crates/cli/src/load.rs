use std::path::{Path, PathBuf};

use thiserror::Error;

use occ_core::frobenius::{builtins, EmbeddingData, FrobeniusModel};
use occ_core::io::{self, ParseError};
use occ_core::sewing::SewPlan;
use occ_core::surface::{validate, Cobordism, Violation};
use occ_core::tqft::TableAssignment;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    /// semantically invalid input; exit code 1
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse and validate. A component without outgoing strings is kept so the
/// classifier can report it; every other violation is an error.
pub fn cobordism(path: &Path) -> Result<Cobordism, CliError> {
    let c = parsed(path, io::parse_occ(&read(path)?))?;
    let fatal: Vec<String> = validate(&c)
        .into_iter()
        .filter(|v| !matches!(v, Violation::PositiveBoundaryViolation { .. }))
        .map(|v| v.to_string())
        .collect();
    if fatal.is_empty() {
        Ok(c)
    } else {
        Err(CliError::Domain(format!("{}: invalid cobordism: {}", path.display(), fatal.join("; "))))
    }
}

/// Like [`cobordism`], but rejects every violation.
pub fn strict_cobordism(path: &Path) -> Result<Cobordism, CliError> {
    let c = cobordism(path)?;
    let all: Vec<String> = validate(&c).iter().map(ToString::to_string).collect();
    if all.is_empty() {
        Ok(c)
    } else {
        Err(CliError::Domain(format!("{}: invalid cobordism: {}", path.display(), all.join("; "))))
    }
}

pub fn plan(path: &Path) -> Result<SewPlan, CliError> {
    parsed(path, io::parse_plan(&read(path)?))
}

pub fn assignment(path: &Path) -> Result<TableAssignment, CliError> {
    parsed(path, io::parse_assignment(&read(path)?))
}

/// Built-in name, matched case-insensitively per factor of `AxB`.
fn builtin_model(name: &str) -> Option<FrobeniusModel> {
    let factors: Option<Vec<&str>> = name
        .to_lowercase()
        .split('x')
        .map(|f| {
            builtins::MODEL_NAMES
                .iter()
                .copied()
                .find(|n| n.eq_ignore_ascii_case(f))
        })
        .collect();
    builtins::model(&factors?.join("x"))
}

/// A built-in model name or a model file.
pub fn model(spec: &str) -> Result<FrobeniusModel, CliError> {
    if let Some(m) = builtin_model(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if path.is_file() {
        return parsed(path, io::parse_model(&read(path)?));
    }
    Err(CliError::Usage(format!(
        "unknown model `{spec}`: expected one of {} (or AxB) or a model file",
        builtins::MODEL_NAMES.join(", ")
    )))
}

/// Embeddings selected by the two optional flags.
pub fn embeddings(model_spec: Option<&str>, embedding_spec: Option<&str>) -> Result<Vec<EmbeddingData>, CliError> {
    let target = model_spec.map(model).transpose()?;
    let connected = |m: &FrobeniusModel| {
        if m.component_count() == 1 {
            Ok(())
        } else {
            Err(CliError::Usage(format!("model {} is not connected", m.name())))
        }
    };
    match (target, embedding_spec) {
        (None, None) => Ok(builtins::builtin_embeddings()),
        (Some(m), None) => {
            connected(&m)?;
            Ok(vec![builtins::point_in(&m), builtins::identity(&m), builtins::diagonal(&m)])
        }
        (m, Some(spec)) => {
            let needs_model = || {
                m.clone()
                    .ok_or_else(|| CliError::Usage(format!("--embedding {spec} needs --model")))
            };
            match spec.to_lowercase().as_str() {
                "point" => {
                    let m = needs_model()?;
                    connected(&m)?;
                    return Ok(vec![builtins::point_in(&m)]);
                }
                "identity" => return Ok(vec![builtins::identity(&needs_model()?)]),
                "diagonal" => return Ok(vec![builtins::diagonal(&needs_model()?)]),
                _ => {}
            }
            if let Some(e) = builtins::builtin_embeddings()
                .into_iter()
                .find(|e| e.name().eq_ignore_ascii_case(spec))
            {
                return Ok(vec![e]);
            }
            let path = Path::new(spec);
            if path.is_file() {
                let dir = path.parent().unwrap_or(Path::new("."));
                let resolve = |name: &str| {
                    let local = dir.join(name);
                    let spec = if builtin_model(name).is_none() && local.is_file() {
                        local.to_string_lossy().into_owned()
                    } else {
                        name.to_string()
                    };
                    model(&spec).map_err(|e| e.to_string())
                };
                return Ok(vec![parsed(path, io::parse_embedding(&read(path)?, &resolve))?]);
            }
            Err(CliError::Usage(format!(
                "unknown embedding `{spec}`: expected point, identity, diagonal, a built-in name or a file"
            )))
        }
    }
}
