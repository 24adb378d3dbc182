pub mod algebra;
pub mod cli;
pub mod convex;
pub mod kahler;
pub mod kw;
pub mod lie;
pub mod linalg;
pub mod phase;
pub mod quadrature;
pub mod repr;
pub mod transforms;
