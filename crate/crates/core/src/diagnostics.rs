//! Structured diagnostics with stable codes.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    DimensionConflict,
    UnresolvedName,
    ForwardReference,
    UnsizedNode,
    AmbiguousName,
    SyntaxError,
    SchemaError,
    DegenerateConnector,
    UnknownKind,
    MissingProp,
    BadEnumValue,
    RefWithChildren,
    DuplicateNameInScope,
    SelfReference,
    RefToRef,
    UndefinedExtent,
    InvalidExtent,
    InconsistentBBox,
    Internal,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::DimensionConflict => "BF001",
            Code::UnresolvedName => "BF002",
            Code::ForwardReference => "BF003",
            Code::UnsizedNode => "BF004",
            Code::AmbiguousName => "BF005",
            Code::SyntaxError => "BF006",
            Code::SchemaError => "BF007",
            Code::DegenerateConnector => "BF008",
            Code::UnknownKind => "BF009",
            Code::MissingProp => "BF010",
            Code::BadEnumValue => "BF011",
            Code::RefWithChildren => "BF012",
            Code::DuplicateNameInScope => "BF013",
            Code::SelfReference => "BF014",
            Code::RefToRef => "BF015",
            Code::UndefinedExtent => "BF016",
            Code::InvalidExtent => "BF017",
            Code::InconsistentBBox => "BF018",
            Code::Internal => "BF099",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Code::DimensionConflict => "DimensionConflict",
            Code::UnresolvedName => "UnresolvedName",
            Code::ForwardReference => "ForwardReference",
            Code::UnsizedNode => "UnsizedNode",
            Code::AmbiguousName => "AmbiguousName",
            Code::SyntaxError => "SyntaxError",
            Code::SchemaError => "SchemaError",
            Code::DegenerateConnector => "DegenerateConnector",
            Code::UnknownKind => "UnknownKind",
            Code::MissingProp => "MissingProp",
            Code::BadEnumValue => "BadEnumValue",
            Code::RefWithChildren => "RefWithChildren",
            Code::DuplicateNameInScope => "DuplicateNameInScope",
            Code::SelfReference => "SelfReference",
            Code::RefToRef => "RefToRef",
            Code::UndefinedExtent => "UndefinedExtent",
            Code::InvalidExtent => "InvalidExtent",
            Code::InconsistentBBox => "InconsistentBBox",
            Code::Internal => "Internal",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

/// Path used for problems that concern the document as a whole.
pub const DOCUMENT_PATH: &str = "<document>";

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub message: String,
    /// Node paths, e.g. `group[0]/stackV[1]#label`. Never empty.
    pub paths: Vec<String>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>, paths: Vec<String>) -> Self {
        Self::new(code, Severity::Error, message, paths)
    }

    pub fn warning(code: Code, message: impl Into<String>, paths: Vec<String>) -> Self {
        Self::new(code, Severity::Warning, message, paths)
    }

    fn new(code: Code, severity: Severity, message: impl Into<String>, mut paths: Vec<String>) -> Self {
        if paths.is_empty() {
            paths.push(DOCUMENT_PATH.to_owned());
        }
        Self {
            code,
            severity,
            message: message.into(),
            paths,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.severity.as_str(), self.code, self.message)?;
        for p in &self.paths {
            write!(f, "\n  at {p}")?;
        }
        Ok(())
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
