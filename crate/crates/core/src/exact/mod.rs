//! Exact arithmetic: integer/rational matrices, normal forms, ℚ[t] and ℚ(t).

mod factor;
mod matrix;
mod normal_form;
mod places;
mod poly;
mod ratfunc;

pub use factor::factor_squarefree;
pub use matrix::{int_vec, int_vec_mat, rat, rat_vec, vec_mat, IntMatrix, Matrix, RatMatrix};
pub use normal_form::{hermite, invariant_factors, smith, NormalForm};
pub use places::{coprime_basis, place_valuation, ratfunc_valuation, BasisElement, Place, ROOT_SEARCH_CAP};
pub use poly::{rat_sqrt, RatPoly};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    #[error("valuation of the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    Singular,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degree {degree} exceeds bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("polynomial is not even in t")]
    NotEven,
}
