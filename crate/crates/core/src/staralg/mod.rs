//! `L(E,C)` over the rationals: words in the extended graph, the rewriting
//! system whose irreducible words are the C-separated reduced paths, and the
//! expression language used by the command line.
//!
//! Rewrite rules, for a fixed `e_X` (the greatest name) in every C-set `X`:
//!
//! - `e* f → δ_{e,f} r(e)` when `X_e = X_f`;
//! - `e_X e_X* → s(e_X) − Σ_{g ∈ X, g ≠ e_X} g g*`.

mod algebra;
mod expr;
mod scalar;
mod word;

pub use algebra::{AlgElement, Algebra, AlgebraError, NormalFormStats, Redex, Side};
pub use expr::{eval_separated, parse_expr, ExprError, FreeExpr, Generator, Vocabulary};
pub use scalar::{Scalar, ScalarParseError};
pub use word::{flip, is_ghost, letter, letter_edge, Letter, Word};
