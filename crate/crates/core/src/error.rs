use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("cover relation contains a cycle through {0:?}")]
    CycleDetected(String),
    #[error("cover ({lower:?}, {upper:?}) is implied by transitivity")]
    TransitiveCover { lower: String, upper: String },
    #[error("cover ({lower:?}, {upper:?}) listed twice")]
    DuplicateCover { lower: String, upper: String },
    #[error("{a:?} is not strictly below {b:?}")]
    NotComparable { a: String, b: String },
    #[error("poset has no least element")]
    NoLeastElement,
    #[error("poset is not ranked at {element:?}: maximal chains {short:?} and {long:?} have different lengths")]
    NotRanked {
        element: String,
        short: Vec<String>,
        long: Vec<String>,
    },
    #[error("not a CW-poset: {reason}")]
    NotCwPoset {
        witness: Option<String>,
        reason: String,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate basis label {label:?} in degree {degree}")]
    DuplicateLabel { degree: i32, label: String },
    #[error("not a chain complex: composition nonzero in degree {degree} at ({row}, {col})")]
    NotAComplex { degree: i32, row: usize, col: usize },
    #[error("selection is not a subcomplex: {label:?} in degree {degree} has boundary outside it")]
    NotASubcomplex { degree: i32, label: String },
    #[error("chain in degree {0} is not a cycle")]
    NotACycle(i32),
    #[error("could not express a cycle in the homology basis: {0}")]
    CoordinateSolveFailed(String),
    #[error("incidence number for ({sigma:?}, {tau:?}) is {value}, not a unit")]
    EntryNotUnit {
        sigma: String,
        tau: String,
        value: String,
    },
    #[error("invalid cell {id:?}: {reason}")]
    InvalidCell { id: String, reason: String },
    #[error("cell {0:?} has no multidegree")]
    MissingMultidegrees(String),
    #[error("multidegree labels are not monotone: {face:?} does not divide {cell:?}")]
    NonMonotoneLabels { cell: String, face: String },
    #[error("grading is not order preserving: eta({lower:?}) does not divide eta({upper:?})")]
    NonMonotoneGrading { lower: String, upper: String },
    #[error("entry ({row}, {col}) in degree {degree} is not homogeneous")]
    NotHomogeneous {
        degree: usize,
        row: usize,
        col: usize,
    },
    #[error("monomial ideal needs at least one generator")]
    EmptyGeneratorList,
    #[error("expected {expected} variables, got {got}")]
    VariableCountMismatch { expected: usize, got: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {reason}")]
    Input {
        path: String,
        kind: &'static str,
        line: Option<usize>,
        reason: String,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateId(_) => "DuplicateId",
            Error::UnknownElement(_) => "UnknownElement",
            Error::CycleDetected(_) => "CycleDetected",
            Error::TransitiveCover { .. } => "TransitiveCover",
            Error::DuplicateCover { .. } => "DuplicateCover",
            Error::NotComparable { .. } => "NotComparable",
            Error::NoLeastElement => "NoLeastElement",
            Error::NotRanked { .. } => "NotRanked",
            Error::NotCwPoset { .. } => "NotCWPoset",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DuplicateLabel { .. } => "DuplicateLabel",
            Error::NotAComplex { .. } => "NotAComplex",
            Error::NotASubcomplex { .. } => "NotASubcomplex",
            Error::NotACycle(_) => "NotACycle",
            Error::CoordinateSolveFailed(_) => "CoordinateSolveFailed",
            Error::EntryNotUnit { .. } => "EntryNotUnit",
            Error::InvalidCell { .. } => "InvalidCell",
            Error::MissingMultidegrees(_) => "MissingMultidegrees",
            Error::NonMonotoneLabels { .. } => "NonMonotoneLabels",
            Error::NonMonotoneGrading { .. } => "NonMonotoneGrading",
            Error::NotHomogeneous { .. } => "NotHomogeneous",
            Error::EmptyGeneratorList => "EmptyGeneratorList",
            Error::VariableCountMismatch { .. } => "VariableCountMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::Parse(_) => "Parse",
            Error::Input { kind, .. } => kind,
            Error::Json(_) => "Json",
            Error::Io(_) => "Io",
        }
    }

    /// Where in the input the problem sits, when that is known.
    pub fn location(&self) -> Option<String> {
        match self {
            Error::DuplicateId(id)
            | Error::UnknownElement(id)
            | Error::CycleDetected(id)
            | Error::MissingMultidegrees(id) => Some(id.clone()),
            Error::TransitiveCover { lower, upper } | Error::DuplicateCover { lower, upper } => {
                Some(format!("cover [{lower}, {upper}]"))
            }
            Error::NotComparable { a, b } => Some(format!("({a}, {b})")),
            Error::NotRanked { element, .. } => Some(element.clone()),
            Error::NotCwPoset { witness, .. } => witness.clone(),
            Error::DuplicateLabel { degree, label } => Some(format!("degree {degree}, {label}")),
            Error::NotAComplex { degree, row, col } => {
                Some(format!("degree {degree}, entry ({row}, {col})"))
            }
            Error::NotASubcomplex { degree, label } => Some(format!("degree {degree}, {label}")),
            Error::NotACycle(d) => Some(format!("degree {d}")),
            Error::EntryNotUnit { sigma, tau, .. } => Some(format!("({sigma}, {tau})")),
            Error::InvalidCell { id, .. } => Some(id.clone()),
            Error::NonMonotoneLabels { cell, .. } => Some(cell.clone()),
            Error::NonMonotoneGrading { upper, .. } => Some(upper.clone()),
            Error::NotHomogeneous { degree, row, col } => {
                Some(format!("degree {degree}, entry ({row}, {col})"))
            }
            Error::Input {
                path,
                line: Some(l),
                ..
            } => Some(format!("{path}:{l}")),
            Error::Input { path, .. } => Some(path.clone()),
            Error::Json(e) => Some(format!("line {}, column {}", e.line(), e.column())),
            _ => None,
        }
    }
}
