//! Exact field arithmetic and sparse multivariate polynomial algebra — the
//! substrate for every other module.

pub mod field;
pub mod json;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod vars;

pub use field::{FieldOp, FieldSpec, Value};
pub use json::{poly_from_json, poly_from_json_str, poly_to_json, poly_to_json_string, PolyJson};
pub use monomial::Monomial;
pub use order::{MonomialOrder, VarPartition};
pub use poly::{PolyBuilder, SparsePoly};
pub use vars::{union_tables, VarId, VarTable};
