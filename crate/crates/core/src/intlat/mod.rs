//! Exact integer linear algebra and arithmetic in Q/Z.

mod matrix;
mod qz;
pub(crate) mod smith;
mod solve;

pub use matrix::IntMatrix;
pub use qz::Qz;
pub use smith::{smith_normal_form, SmithDecomposition};
pub use solve::{
    integer_kernel, kernel_mod, level_classes, solve_integer, solve_qz, unimodular_inverse,
    Obstruction, ObstructionMap, QzSolver,
};
