//! Exact-arithmetic duality engine between finite groupoids and Hopf
//! algebroids over a finite base.
//!
//! The base is a finite set `M`; the base ring is `Fun(M, Q)` with pointwise
//! operations. On one side live finite sheaves and groupoids over `M`; on
//! the other, coalgebras and Hopf algebroids over the base ring. The crate
//! implements both functors of each duality — the sheaf/convolution
//! coalgebra and the spectral sheaf, the convolution algebroid and the
//! spectral groupoid — together with the unit and counit maps, the exact
//! classifiers deciding which coalgebras and algebroids arise from sheaves
//! and groupoids, and the grouplike machinery underneath (localization,
//! normal generation and independence, translation operators).
//!
//! All arithmetic is exact over the rationals; every verdict is an equality
//! of tables, never an approximation.

pub mod base;
pub mod coalgebra;
pub mod error;
pub mod fixtures;
pub mod groupoid;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod sheaf;
mod solver;

pub use base::{BaseRingElement, BaseSet, Point, Rational};
pub use coalgebra::{Coalgebra, CoalgebraMorphism, GradedVector, LocalCoalgebra};
pub use error::{Error, Result, SolverObstruction};
pub use groupoid::{Bisection, FiniteGroupoid, GroupoidMorphism};
pub use hopf::{AlgebroidMorphism, HopfAlgebroid};
pub use sheaf::{FiniteSheaf, SheafMorphism};
