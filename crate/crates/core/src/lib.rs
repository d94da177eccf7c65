//! Spectrum-sensing and packet-loss modelling for single-channel cognitive
//! radio networks with half-duplex and full-duplex secondary users.
//!
//! The crate is organised around the pipeline that turns physical-layer
//! parameters into primary-user packet loss:
//!
//! * [`specfun`] — noncentral chi-square statistics of the energy detector,
//!   the Rayleigh-faded mixture distribution of its test statistic, and the
//!   incomplete-gamma / Bessel machinery behind them.
//! * [`interference`] — residual self-interference after antenna cancellation
//!   and the RIC/DIC gain chain, plus the resulting detector noncentrality.
//! * [`detector`] — missed-detection probability for perfect and imperfect
//!   full duplex, and CFAR threshold selection.
//! * [`lossmodel`] — closed-form primary-user loss rates for the three
//!   duplex scenarios.
//! * [`sim`] — seeded discrete-event Monte Carlo simulation of the
//!   single-channel network that validates the closed forms mechanistically.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature used by the numerical
//!   oracles.

pub mod detector;
pub mod error;
pub mod interference;
pub mod lossmodel;
pub mod quad;
pub mod sim;
pub mod specfun;

pub use detector::DetectorConfig;
pub use error::InvalidConfig;
pub use interference::{LinkBudget, SelfInterferenceParams};
pub use lossmodel::TrafficConfig;
pub use sim::{DuplexMode, DuplexScenario, SimResult};
pub use specfun::{NoncentralChiSquare, RayleighMixture};
