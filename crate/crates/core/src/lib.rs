//! Exact computation of the exponent lattice of polynomial roots.
//!
//! Given `f` in `Q[x]` with `f(0) != 0`, the exponent lattice `R_f` is the set
//! of integer vectors `v` with `beta_1^v1 * ... * beta_n^vn = 1` over the
//! complex roots of `f`. This crate computes a basis of `R_f` for every
//! polynomial in a generic class (a constant times a power of an irreducible
//! polynomial whose roots are either all roots of rationals, or whose
//! pair-product polynomial is irreducible), and reports a definitive `F`
//! verdict otherwise.
//!
//! The crate also ships a fractal-circulant rank laboratory and a certified
//! numeric oracle used to cross-check every emitted basis.

pub mod arith;
pub mod circulant;
pub mod deadline;
pub mod error;
pub mod factor;
pub mod fastbasis;
pub mod lattice;
pub mod modfactor;
pub mod oracle;
pub mod pairprod;
pub mod poly;
pub mod ror;
pub mod roots;
pub mod roots_order;

pub use circulant::FractalCirculant;
pub use error::{Error, Result};
pub use fastbasis::{fast_basis, fast_basis_with, check_e, BasisResult, FastBasisConfig};
pub use lattice::LatticeBasis;
pub use poly::{FactoredForm, IntPoly, RatPoly, RatScalar};
pub use roots::RootEnclosure;
