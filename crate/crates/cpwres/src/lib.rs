//! Design and characterization toolkit for superconducting coplanar-waveguide
//! (CPW) microwave resonators.
//!
//! The crate covers the full loop from design to measured-data analysis:
//!
//! - [`cpw`]: conformal-mapping line parameters, kinetic inductance,
//!   penetration depth, and quarter-wave resonance frequencies.
//! - [`notch`]: the notch-type S21 model — synthesis of complex traces with
//!   optional noise.
//! - [`fit`]: inversion of the notch model — delay, circle and phase fits
//!   feeding a full seven-parameter refinement with uncertainties.
//! - [`loss`]: photon-number calibration, two-level-system (TLS) and
//!   quasiparticle loss models, and resonance-frequency shifts.
//! - [`sweeps`]: TLS fits against power sweeps and joint TLS +
//!   quasiparticle fits against temperature sweeps.
//! - [`io`], [`manifest`], [`synth`], [`report`], [`cli`]: trace file
//!   formats (Touchstone `.s2p`, CSV), sweep manifests, deterministic
//!   synthetic-dataset generation, and machine-readable reports behind the
//!   `cpwres` command-line tool.
//!
//! Runnable walk-throughs for each capability live in `examples/`.

pub mod cli;
pub mod constants;
pub mod cpw;
pub mod error;
pub mod fit;
pub mod io;
pub mod lm;
pub mod loss;
pub mod manifest;
pub mod notch;
pub mod report;
pub mod special;
pub mod sweeps;
pub mod synth;

pub use error::{Error, Result};
