use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parcel {id}: area must be positive and finite, got {area}")]
    NonPositiveArea { id: String, area: f64 },

    #[error("parcel {id}: population must be non-negative and finite, got {population}")]
    NegativePopulation { id: String, population: f64 },

    #[error("parcel table {region} has no parcels")]
    EmptyTable { region: String },

    #[error("duplicate parcel id {0}")]
    DuplicateId(String),

    #[error("empty region: PWD undefined")]
    EmptyRegion,

    #[error("reference density must be positive, got {0}")]
    NonPositiveReference(f64),

    #[error("bound requires equal parcel populations")]
    UnequalPopulations,

    #[error("mean of an empty list is undefined")]
    EmptyValues,

    #[error("value {value} at index {index} must be positive")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("weight {weight} at index {index} must be non-negative")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("weights sum to zero")]
    ZeroTotalWeight,

    #[error("length mismatch: {values} values but {weights} weights")]
    LengthMismatch { values: usize, weights: usize },

    #[error("fine parcel {0} has no parent")]
    UnmappedParcel(String),

    #[error("fine parcel {0} is mapped more than once")]
    DoublyMappedParcel(String),

    #[error("mapping references unknown fine parcel {0}")]
    UnknownFineParcel(String),

    #[error("fine parcel {fine} maps to unknown coarse parcel {coarse}")]
    UnknownParent { fine: String, coarse: String },

    #[error("coarse parcel {0} has no children")]
    ChildlessParent(String),

    #[error("refinement violates conservation for {count} coarse parcel(s)")]
    RefinementViolations { count: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("missing required column {0}")]
    MissingColumn(String),

    #[error("series has no rows")]
    EmptySeries,

    #[error("row {row}: year {year} does not follow {previous}")]
    NonMonotoneYears {
        row: usize,
        year: i64,
        previous: i64,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
