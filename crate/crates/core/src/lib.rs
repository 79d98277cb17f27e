//! Bar-Natan link homology over `F2[H]`.
//!
//! The crate builds cube-of-resolutions complexes from planar-diagram codes,
//! simplifies them by Gaussian elimination and reads off homology as a bigraded
//! module with explicit generators. On top of that sit cobordism maps from
//! movies, H-torsion orders, the theory at `H = 1` with its orientation
//! generators, and the cabling systems used for 2-handlebodies.

pub mod algebra;
pub mod cobordism;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod lasagna;
pub mod lee;
pub mod torsion;
pub(crate) mod util;

pub use algebra::{FrobeniusTheory, ModuleDecomp, Poly, PolyMatrix};
pub use complex::{GradedComplex, GradedModule, Homology, HomologyClass};
pub use diagram::{parse_pd, Diagram};
pub use error::{Error, Result};
