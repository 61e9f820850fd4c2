//! Combinatorial Heegaard Floer homology of nice multi-pointed Heegaard
//! diagrams: the chain complex counted by empty bigons and rectangles, its
//! homology, the stable invariant, twisted coefficients, nice moves and
//! brute-force oracles.
//!
//! ```
//! use stablehf::complex::homology;
//! use stablehf::diagram::make_s3_sphere;
//!
//! let d = make_s3_sphere();
//! assert_eq!(homology(&d).unwrap().total, 2);
//! ```

pub mod complex;
pub mod diagram;
pub mod domains;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod moves;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod surface;
pub mod twisted;

pub use error::{HfError, Result};
