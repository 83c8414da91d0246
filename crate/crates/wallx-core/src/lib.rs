//! Quivers with potential for small toric Calabi–Yau threefolds, their
//! affine wall-and-chamber structure, wall-crossing generating functions,
//! and a brute-force crystal oracle to check them against.
//!
//! Module map:
//! - [`toric`]: trapezoid partitions, divisors, support functions
//! - [`quiver`]: arrows, relations, potential, path normal forms
//! - [`rootlat`]: affine roots, reflections, chamber paths
//! - [`series`]: truncated power series with big-integer coefficients
//! - [`engine`]: wall-crossing products and closed forms
//! - [`homalg`]: modules, stability, Hom/Ext
//! - [`crystal`]: molten-crystal enumeration
//! - [`io`]: JSON formats
//! - [`verify`]: the end-to-end checks run by `wallx selftest`

pub mod crystal;
pub mod engine;
pub mod homalg;
pub mod io;
pub mod quiver;
pub mod rootlat;
pub mod series;
pub mod toric;
pub mod verify;

use thiserror::Error;

/// Any domain error raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Toric(#[from] toric::ToricError),
    #[error(transparent)]
    Quiver(#[from] quiver::QuiverError),
    #[error(transparent)]
    Root(#[from] rootlat::RootError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Homalg(#[from] homalg::HomalgError),
    #[error(transparent)]
    Crystal(#[from] crystal::CrystalError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}
