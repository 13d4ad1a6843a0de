//! Rhombus substitutions with 2n-fold symmetry for even n.
//!
//! The crate builds the Sub Rosa and Planar Rosa substitutions from their
//! edgewords, tiles the metatiles, iterates the substitution on patches lifted
//! to `Z^n`, and checks planarity both from the spectrum of the expansion and
//! from the measured deviation of the lifted patches.

pub mod cli;
pub mod edgeword;
pub mod error;
pub mod geometry;
pub mod kenyon;
pub mod multigrid;
pub mod planarity;
pub mod render;
pub mod spectral;
pub mod substitution;

pub use edgeword::Edgeword;
pub use error::{KenyonProperty, Result, RosaError};
pub use geometry::{AlgebraicReal, LiftedPoint, Tile};
