//! Exact rational linear algebra and linear programming, plus a small float
//! eigensolver. Everything that feeds a verified identity stays in exact
//! arithmetic; floats appear only in eigenvalue estimation with an explicit
//! tolerance.

pub mod eigen;
pub mod smallrat;
pub mod lp;
pub mod matrix;
pub mod rat;

pub use eigen::{symmetric_eigen, EigenResult};
pub use lp::{lp_solve, LinearProgram, LpOutcome, LpSolution, Rel};
pub use matrix::RatMatrix;
pub use rat::Rat;
