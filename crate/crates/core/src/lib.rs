//! 2-isogeny descent on the twin-prime curves `y^2 = x(x + sp)(x + sq)`.

pub mod arith;
pub mod curve;
pub mod descent;
mod fp_poly;
pub mod localdata;
pub mod localsolve;
pub mod rank1;
pub mod cli;
