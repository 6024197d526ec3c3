//! Sparse (toric) resultants.

pub mod arith;
pub mod geometry;
pub mod family;
pub(crate) mod serde_util;
pub mod subdivision;
pub mod sampling;
pub mod canny_emiris;
pub mod elimination;
pub mod koszul;
pub mod fixtures;
pub mod respoly;
pub mod resultant;
pub mod interp;
pub mod system;
