//! Integer polynomials, certified real and complex roots, logarithmic
//! heights and the constants of the problem.

pub mod complex_roots;
pub mod constants;
pub mod height;
pub mod poly;
pub mod roots;

pub use complex_roots::{certified_roots, RootDisk};
pub use constants::{
    alpha_algebraic, c_lambda_algebraic, certified_log, dominant_root_alpha, f_k_alpha,
    lambda_algebraic, narayana_constants, NarayanaConstants, NarayanaConstantsRecord,
};
pub use height::{height_methods, log_height, log_height_of, HeightMethod};
pub use poly::IntPoly;
pub use roots::{refine_root, AlgebraicNumber, AlgebraicRecord};
