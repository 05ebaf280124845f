//! Periodic points of polynomial maps over p-adic fields and quadratic
//! number fields.

pub mod dynamics;
pub mod error;
pub mod expr;
pub mod number_field;
pub mod oracle;
pub mod padic;
pub mod poly;

pub use dynamics::{DynPoly, Embedding, LocalPoly, PeriodicPoint};
pub use error::{Error, Result};
pub use number_field::{QuadElement, QuadField, SplitKind, SplittingData};
pub use padic::{FieldRef, FieldSpec, PadicElement, ResidueElement, ResidueField, Valuation};
pub use poly::Poly;
