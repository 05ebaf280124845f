//! Finite extensions of `Q_p`: an unramified layer of degree `f` under an
//! Eisenstein layer of degree `e`, with `pi`-adic precision tracking.

mod element;
mod field;
mod hensel;
mod residue;
mod text;

pub use element::{PadicElement, Valuation};
pub use field::{
    make_field, qp, unramified, FieldDescriptor, FieldRef, FieldSpec, DEFAULT_PRECISION,
};
pub use hensel::{hensel_lift, sqrt, NewtonTarget, PadicPoly};
pub use residue::{smallest_irreducible, ResidueElement, ResidueField};
pub use text::parse_element;
pub(crate) use text::ElementTarget;
