//! Exact Tate cohomology, complete resolutions and module linkage over
//! finite-dimensional commutative local algebras over prime fields.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod exactla;
pub mod homalg;
pub mod invariants;
pub mod io;
pub mod linkage;
pub mod modrep;
pub mod theorems;

pub use algebra::{Algebra, Ideal};
pub use error::{Error, Result};
pub use exactla::{Mat, PrimeField, Scalar};
pub use homalg::{Session, TateTable};
pub use modrep::Module;
