//! XOR games, nonlocal boxes, and spectral lower bounds for two-party
//! communication.
//!
//! The crate has three layers:
//!
//! * representations: boolean functions as packed truth tables, densities,
//!   Fourier spectra via the fast Walsh-Hadamard transform ([`boolfn`]), and
//!   a dense two-phase simplex solver ([`linprog`]);
//! * games and devices: exact XOR-game biases, optimal strategies and worst
//!   input distributions ([`xorgame`]), isotropic nonlocal boxes ([`nlbox`]),
//!   and a compiler from deterministic protocol trees to box-powered XOR-game
//!   strategies ([`compiler`]);
//! * analysis: approximate Fourier l1 norms and exhaustive sign-class
//!   classification ([`approxnorm`]) and closed-form lower-bound calculators
//!   ([`bounds`]).
//!
//! All types are immutable after construction and all operations are pure,
//! so everything is safe to share across threads. Randomized operations take
//! an explicit splittable [`rng::Stream`].

pub mod approxnorm;
pub mod boolfn;
pub mod bounds;
pub mod compiler;
pub mod error;
pub mod linprog;
pub mod nlbox;
pub mod rng;
pub mod xorgame;

pub use boolfn::{BoolFn, Density, RealFn, Spectrum};
pub use error::{Error, Result};
