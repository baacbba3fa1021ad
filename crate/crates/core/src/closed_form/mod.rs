//! Closed formulas for intersection numbers: trace numbers of the matrix
//! series `M(lambda)`, two-point formulas, and the n-point sum.

mod matrix;
mod npoint;
mod two_point;

pub use matrix::{
    a_value, a_value_direct, canonical_rotation, matrix_coeff, matrix_scalar, shape_of, shape_trace, Mat2,
    MatrixSeries, Shape,
};
pub use npoint::{compositions, four_point, m_floor, n_point, n_point_sequential, three_point, NPointPlan};
pub use two_point::{eta, two_point_bdy, two_point_zograf, xi, xi_half_variant};
