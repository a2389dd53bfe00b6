//! Desk-scale deformation theory for Dirac structures.
//!
//! The crate implements, over exact rationals wherever the mathematics is
//! exact: finite-dimensional L-infinity[1] algebras with Maurer-Cartan
//! theory and twisting; Courant algebroids over a point (quadratic Lie
//! algebras) with Dirac subspaces and their deformation algebra;
//! polynomial-coefficient Lie algebroids over affine space with Schouten
//! calculus and twisted Poisson residuals; and the cohomological
//! stability criterion for fixed points of Dirac structures. Numerical
//! gauge flows (fixed-step RK4) and Newton rectification live in `gauge`.

pub mod rat;
pub mod linalg;
pub mod graded;
pub mod exterior;
pub mod linfty;
pub mod stability;
pub mod courant;
pub mod poly;
pub mod algebroid;
pub mod gauge;
pub mod doc;
pub mod report;
pub mod cli;
