//! Mod-2 characteristic classes of projective spaces, pin obstructions and a
//! small pin bordism ledger with the Brown invariant as its dimension-2 oracle.

mod brown;
mod ledger;
mod sw;

pub use brown::{brown_invariant, QuadraticEnhancement, MAX_RANK};
pub use ledger::{
    bordism_group, bounding_witness, class_of, distinguish, ledger_add, projective_pin_kind, BordismClass,
    BordismGroup, CharacteristicTag, ClassSummary, DistinguishReport, DistinguishVerdict, Element,
    LiteratureConstant, PinKind, Provenance, Symbolic,
};
pub use sw::{pin_table_csv, pin_verdicts, sw_number_top, total_sw_rp, Mod2Poly, SWReport, PIN_TABLE_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum PinError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid quadratic enhancement: {0}")]
    InvalidEnhancement(String),
    #[error("Gauss sum modulus {modulus} differs from {expected}")]
    GaussSumModulusMismatch { modulus: f64, expected: f64 },
    #[error("structure mismatch: {left} vs {right}")]
    StructureMismatch { left: String, right: String },
    #[error("{0} is not a recognized double")]
    NotARecognizedDouble(String),
    #[error("{0} carries no characteristic submanifold")]
    MissingCharacteristicTag(String),
}
