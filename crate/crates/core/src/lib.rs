//! Exact computations with finite-dimensional Hopf algebras: integrals and
//! modular data, classification of bialgebra maps, f-Frobenius elements of
//! comodule algebras, and algebras of internal natural transformations in the
//! Yetter-Drinfeld category.

pub mod bimodule;
pub mod builtins;
pub mod comodule;
pub mod descriptor;
pub mod error;
pub mod hopf;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod module;
pub mod report;
pub mod scalar;
pub mod yd;

pub use error::{Error, Result};
pub use hopf::{dual, HopfAlgebra, Presentation, Tables};
pub use linalg::{LinearMap, Matrix, Rref, Solution, SparseVec};
pub use report::{Check, Report};
pub use scalar::{Field, FieldSpec, Scalar};
pub use bimodule::HLBimodule;
pub use comodule::{ComoduleAlgebra, FrobeniusElement, SearchOptions};
pub use descriptor::{Builtin, Descriptor};
pub use invariants::InvariantBundle;
pub use maps::{BialgebraMap, MapClassification, PerfectMode, Perfectness};
pub use module::ModuleRep;
pub use yd::{FormReport, YDAlgebra, YDModule};
