use thiserror::Error;

/// Errors raised across the workbench.
///
/// The variants follow the failure classes used by the command-line front end:
/// configuration problems, domain violations (an input outside the set an
/// operation is defined on), unmet preconditions, and resource caps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {what} ({size} > {cap})")]
    Resource { what: String, size: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::Resource { what: what.to_string(), size, cap })
    } else {
        Ok(())
    }
}
