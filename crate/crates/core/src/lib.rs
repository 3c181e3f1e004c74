//! Bounds, exact Fock-basis numerics and seeded Monte Carlo simulation for
//! covert communication over lossy bosonic optical channels.

pub mod bounds;
pub mod exec;
pub mod fock;
pub mod metrics;
pub mod oracle;
pub mod sim;
