//! Computational algebra for cyclic p-extensions: lattices over `Z_p[Γ]`
//! with `Γ` cyclic of order `p^n`, their Tate cohomology and Yakovlev
//! diagrams, a structure predictor for S-unit lattices, and a search for
//! primes with prescribed splitting.

pub mod arithmetic;
pub mod cohomology;
pub mod diagrams;
pub mod error;
pub mod gamma;
pub mod primes;

pub use error::{Error, Result};
