//! Shared validation error for configuration types.

use std::fmt;

/// A configuration value violated one of its documented invariants.
///
/// Carries the offending field name so callers (in particular the CLI) can
/// report field-level messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidConfig {
    /// Name of the field that failed validation.
    pub field: &'static str,
    /// Human-readable description of the violation.
    pub reason: String,
}

impl InvalidConfig {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for InvalidConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for InvalidConfig {}
