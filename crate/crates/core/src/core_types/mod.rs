//! Exact data model: affine parameters, series, expressions and identities.

mod affine;
mod expr;
mod identity;
mod parse;
mod series;

pub use affine::{parse_rational, Affine, Bindings};
pub use expr::{rational_pow, Expr, Func};
pub use identity::{ConstraintPredicate, Identity, Relation};
pub use parse::{parse_expr, parse_series};
pub use series::{
    arg_position, cancel_parameters, convergence_class, pochhammer, pochhammer_expr, series_term, ArgPosition,
    ConvergenceClass, HypSeries, ParamList,
};
