//! Gaussian wave packets and the coherence lengths of particles.
//!
//! Packet algebra works in natural units with energies in MeV and lengths in
//! fm; the interaction and scenario layers use SI.

pub mod constants;
pub mod continuum;
pub mod error;
pub mod interactions;
pub mod oracle;
pub mod packets;
pub mod propagation;
pub mod quadrature;
pub mod scenarios;
pub mod units;
pub mod vec3;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use packets::{Dispersion, WavePacket};
pub use vec3::Vec3;
