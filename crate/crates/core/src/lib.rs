//! Consistent channel hopping for the multichannel rendezvous problem.
//!
//! Channels are labeled `1..=N`. A consistent selector picks the smallest
//! channel after a relabeling, so hopping schedules are sequences of
//! permutations. The crate provides the selectors, the schedules, a slotted
//! multi-user simulator with the generic, stick-together, spread-out and
//! hybrid strategies, exact closed forms for expected rendezvous times, the
//! scenario generators used in experiments, and a Monte Carlo harness.

pub mod analytic;
pub mod channel;
pub mod engine;
pub mod error;
pub mod harness;
pub mod permutation;
pub mod rng;
pub mod scenario;
pub mod schedule;
pub mod selectors;
pub mod strategy;

pub use channel::{ChannelId, ChannelMask, ChannelSet, MaskedSet};
pub use engine::{Algorithm, AsyncFallback, AsyncParams, RunOptions, RunResult, UserState};
pub use error::{Error, Result};
pub use permutation::{ModuloParams, Permutation};
pub use schedule::{SelectorSchedule, SlotSelector, VirtualClocks};
pub use strategy::StrategyKind;
