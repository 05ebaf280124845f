//! Periodic points of polynomial maps: exact dynatomic polynomials over
//! `Q`-algebras and Hensel-lifted periodic points over local fields.

mod exact;
mod local;
mod parse;

pub use exact::{
    dynatomic_degree, parse_poly_with, parse_rational_poly, parse_symbolic_poly, unicritical,
    DynPoly, DynatomicPoly, DynatomicReport, Embedding, ExactCoeff, PolyTarget, RationalTarget,
    SymbolicTarget,
};
pub use local::{
    m_value, residue_period, ExactValue, ExpansionCertificate, LocalPoly, PeriodCensus,
    PeriodicPoint,
};
pub use parse::parse_local_poly;
