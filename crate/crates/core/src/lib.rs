//! Distance-relay characteristics from incremental phasor quantities.
//!
//! The relay at bus L of a protected line measures three-phase voltage and
//! current phasors. Subtracting the previous cycle removes the operating
//! point: the incremental current fed into a fault from the remote end is a
//! linear function of the relay's *prefault* window whose coefficients
//! depend only on the network structure, fault type and uncertain fault
//! location/resistance `m = (m_T, m_F)`.
//!
//! Pipeline, per fault type and `m`:
//!
//! 1. [`admittance`] assembles `Y(m_T)` with a virtual fault bus, then the
//!    incremental system and solves for `ω^η(m)`;
//! 2. [`incremental`] turns `ω` into the remote-current operator `Ω^η(m)`;
//! 3. [`loops`] evaluates the apparent impedance of the relevant fault loop;
//! 4. [`characteristics`] sweeps `m` to build exact-sampled, parallelogram
//!    and convex-hull characteristics.
//!
//! [`simulator`] is an independent full-network fault solver used as the
//! oracle for all of the above.

#![allow(clippy::needless_range_loop)]

pub mod admittance;
pub mod characteristics;
pub mod error;
pub mod fixtures;
pub mod incremental;
pub mod linalg;
pub mod loops;
pub mod network;
pub mod phasors;
pub mod settings;
pub mod simulator;

pub use admittance::{FaultSpec, FaultType};
pub use characteristics::{Characteristic, CharacteristicKind, Grid, GridPreset, Sample, Target};
pub use error::{Error, Result};
pub use loops::Loop;
pub use network::{parse_network, BusRole, NetworkModel};
pub use num_complex::Complex64;
pub use phasors::{MeasurementWindow, Phasor3};
pub use settings::Settings;
