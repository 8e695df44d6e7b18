//! Computational topology for signal processing and sound synthesis.
//!
//! * [`complex`] and [`binlinalg`]: simplicial complexes and GF(2) linear algebra.
//! * [`homology`]: Betti numbers from boundary-matrix ranks.
//! * [`persistence`]: Vietoris–Rips filtrations and barcodes.
//! * [`embedding`]: time-delay embedding of time series.
//! * [`dynamics`]: circle-map phase oscillators and projections.
//! * [`sheaf_filter`]: filters as sheaves over a line complex (LTI and FM).
//! * [`acoustics`]: waveguide covers, image sources and torus winding paths.
//! * [`cli`]: the `topodsp` command line.

pub mod acoustics;
pub mod binlinalg;
pub mod cli;
pub mod complex;
pub mod dynamics;
pub mod embedding;
pub mod formats;
pub mod homology;
pub mod persistence;
pub mod sheaf_filter;
