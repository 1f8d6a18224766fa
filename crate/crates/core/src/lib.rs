//! Quantum radiation-pressure fluctuations on mirrors, computed by two
//! independent routes — photon counting statistics and stress-tensor
//! cross-term integration — together with interferometer noise budgets
//! and a seeded Monte Carlo oracle.
//!
//! The crate is organized around the pipeline that turns a light state
//! into a mirror noise figure:
//!
//! * [`field_modes`]: standing-wave mode functions, vacuum two-point
//!   functions with and without a mirror, and wavepacket overlap
//!   integrals at the mirror surface.
//! * [`singular_integrals`]: the regularized double time integral of the
//!   cross-term kernel (closed form, residue building blocks, and a
//!   numeric quadrature oracle), plus a generic regularizer for quartic
//!   coincidence singularities.
//! * [`mirror_fluctuations`]: single-mirror momentum, velocity and
//!   position dispersions by both routes, number-state cancellation and
//!   the variance decomposition.
//! * [`interferometer`]: beam-splitter reciprocity, delay-line and
//!   Fabry-Perot bounce scaling, inter-arm correlations, and the noise
//!   budget with optimal power and the standard quantum limit.
//! * [`mc_oracle`]: seeded Poisson photon-counting Monte Carlo used as a
//!   statistical cross-check of the analytic dispersions.
//!
//! Everything works in natural units (hbar = c = 1, Lorentz-Heaviside);
//! SI conversion is left to front ends.

pub mod field_modes;
pub mod interferometer;
pub mod mc_oracle;
pub mod mirror_fluctuations;
mod quad;
pub mod singular_integrals;

pub use singular_integrals::SeparationParams;
