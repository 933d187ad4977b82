//! Exact scalars, sparse commutative polynomials, truncated power series and
//! polynomial matrices.

pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;

pub use matrix::{matrix_resolvent, poly_det, poly_det_bounded, MatrixError, PolyMatrix};
pub use poly::{poly_arith, Monomial, Poly, PolyOp, Var};
pub use scalar::{is_prime, Field, Scalar, ScalarError};
pub use series::{series_inverse, SeriesError, TruncSeries};
