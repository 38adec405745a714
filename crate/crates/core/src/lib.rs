//! Tensor rank of generalized Gabidulin rank-metric codes over small finite fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`gf`]: `F_{p^e}` arithmetic with a designated subfield `F_q`;
//! * [`linpoly`]: the algebra `L_{n,q}` of q-linearized polynomials;
//! * [`rankcode`]: `F_q`-linear rank-metric codes (Gabidulin codes, distance, equivalence);
//! * [`search`]: tensor rank via rank-one covers (Kruskal bound, exhaustive search, certificates);
//! * [`replicate`]: finite certification of the algebraic claims behind the 8-dimensional case.

pub mod error;
pub mod fqmat;
pub mod gf;
pub mod linpoly;
pub mod rankcode;
pub mod replicate;
pub mod search;

pub use error::{Error, Result};
