pub mod acceptance;
pub mod arith;
pub mod error;
pub mod factor;
pub mod fatness;
pub mod field;
pub mod groups;
pub mod matrix;
pub mod modspin;
pub mod poly;
pub mod proportions;
pub mod reduction;
pub mod subspace;
pub mod textfmt;

pub use error::{Error, Result};
pub use field::Field;
pub use groups::GroupDescriptor;
pub use matrix::Matrix;
pub use modspin::{Irreducibility, Submodule};
pub use poly::Poly;
pub use subspace::Subspace;
pub use num_bigint::BigUint;
pub use num_rational::BigRational;
