#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixed_points;
pub mod map;
pub mod orbits;
pub mod render;
