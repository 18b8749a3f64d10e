//! Achievable perfect-secrecy rates and outer bounds for the four-terminal
//! relay-eavesdropper channel.
//!
//! The crate covers two channel families:
//!
//! * **AWGN** ([`awgn`]): closed-form secrecy rates for the relay-free
//!   wiretap baseline, decode-and-forward, noise-forwarding (and its
//!   compress-and-forward alias), two-symbol amplify-and-forward, and the
//!   deaf-helper scheme, plus a Gaussian evaluation of the
//!   rate-equivocation outer bound and seeded phase-fading Monte Carlo.
//! * **Discrete memoryless** ([`dmc`]): exact mutual-information evaluation
//!   of the achievable regions and the outer bound on small finite
//!   alphabets, with brute-force maximization over rational input grids.
//!
//! Everything is generic over the floating scalar through [`Scalar`]
//! (`f32` or `f64`); the `*64` aliases below fix `f64`, which is what the
//! command-line front end uses.

pub mod awgn;
pub mod channel;
pub mod dmc;
pub mod error;
pub mod info;
pub mod optim;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type JointPmf64 = info::JointPmf<f64>;
pub type CovariancePair64 = info::CovariancePair<f64>;
pub type ChannelGains64 = channel::ChannelGains<f64>;
pub type Topology64 = channel::Topology<f64>;
pub type RelayDmc64 = channel::RelayDmc<f64>;
pub type PhaseDraw64 = channel::PhaseDraw<f64>;
pub type StrategyResult64 = awgn::StrategyResult<f64>;
pub type InputDesign64 = dmc::InputDesign<f64>;
pub type CfDesign64 = dmc::CfDesign<f64>;
pub type RegionPoint64 = dmc::RegionPoint<f64>;
