use serde_json::{json, Value};

use crate::linalg::{Field, LinalgError};
use crate::verify::{Property, Verdict, Witness};

#[derive(Debug, thiserror::Error)]
pub enum Error<F: Field> {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    /// The input was checked and does not have the property; the witness,
    /// when present, re-verifies the failure.
    #[error("input is not a {property}")]
    NotPreserver { property: Property, witness: Option<Box<Witness<F>>> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operation requires a field of characteristic other than 2")]
    CharacteristicTwo,

    #[error("field too small: {0}")]
    FieldTooSmall(String),

    /// A randomized search could not reach a trustworthy answer within budget.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A self-check of a computed certificate failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl<F: Field> Error<F> {
    pub fn not_preserver(property: Property, verdict: Verdict<F>) -> Self {
        Error::NotPreserver { property, witness: verdict.witness.map(Box::new) }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Linalg(_) => "linalg",
            Error::NotPreserver { .. } => "not_preserver",
            Error::Precondition(_) => "precondition",
            Error::CharacteristicTwo => "characteristic_two",
            Error::FieldTooSmall(_) => "field_too_small",
            Error::Inconclusive(_) => "inconclusive",
            Error::Internal(_) => "internal",
        }
    }

    /// `{"error", "message"}`, plus `"property"` and `"witness"` for
    /// [`Error::NotPreserver`].
    pub fn to_json(&self) -> Value {
        let mut doc = json!({ "error": self.kind(), "message": self.to_string() });
        if let Error::NotPreserver { property, witness } = self {
            doc["property"] = json!(property.key());
            doc["witness"] = witness.as_ref().map_or(Value::Null, |w| w.to_json());
        }
        doc
    }

    /// Exit-code class for the command line: 1 when the input was understood
    /// but fails, 2 when it could not be processed.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPreserver { .. } | Error::Internal(_) => 1,
            Error::Linalg(_)
            | Error::Precondition(_)
            | Error::CharacteristicTwo
            | Error::FieldTooSmall(_)
            | Error::Inconclusive(_) => 2,
        }
    }
}

pub(crate) fn require_odd_characteristic<F: Field>(field: &F) -> Result<(), Error<F>> {
    if field.characteristic() == 2 {
        Err(Error::CharacteristicTwo)
    } else {
        Ok(())
    }
}
