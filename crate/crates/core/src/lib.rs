//! Exact sl2-equivariant machinery for the algebraic Jacobian of a genus-2
//! curve `y^2 = g6 x^6 + 6 g5 x^5 + ... + g0`.
//!
//! The crate builds the fifteen inhomogeneous coordinates as irreducible sl2
//! modules, the covariants of the curve coefficients, pole valuations on the
//! product of the curve with itself, and an identity engine that verifies,
//! audits and re-derives the quadratic relations cutting out the Jacobian
//! together with the Kummer quartic.

pub mod catalog;
pub mod curve;
pub mod deriver;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod eval;
pub mod formal;
pub mod linalg;
pub mod poles;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sl2;

pub use catalog::{AtomRegistry, Discrepancy};
pub use curve::{curve_deriv, curve_sextic, invariant_i, polar_form, CurveElement, Point};
pub use deriver::{derive_all, verify_table, DerivationReport, Deriver, TableReport};
pub use dsl::{
    parse_catalog, parse_expr, parse_record, parse_relation, CovExpr, IdentityRecord, RecordKind,
};
pub use engine::{audit, shipped_records, verify_catalog, verify_kummer, VerifyOptions};
pub use error::Error;
pub use formal::{rank_check, FormalForm, RankReport, RelationRows};
pub use poles::{branch_expand, pole_orders, Branch, PoleOrders};
pub use poly::{Monomial, Poly, Variable};
pub use rational::Rational;
pub use report::{RecordOutcome, Status, VerificationReport, REPORT_SCHEMA};
pub use sl2::{derive_e, derive_f, derive_h, expand_orbit, hw_tensor, IrrModule, Sl2Value};
