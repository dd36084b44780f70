//! Capacity-achieving network codes for networks with hidden node-based
//! adversaries, using a small amount of randomness shared between the source
//! and every other node.
//!
//! The source appends linearized-polynomial hash headers to random linear
//! network coded packets. Every relay authenticates its inputs against its
//! own shared secret, drops what fails, and forwards random combinations of
//! the rest. Destinations decode from the surviving packets.

pub mod galois;
pub mod topology;
pub mod secretcode;
pub mod adversary;
pub mod harness;
pub mod cli;
