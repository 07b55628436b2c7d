//! Broadcast conflict graphs for wireless ad hoc networks, claw elimination by
//! greedy edge insertion, and one-slot schedulers.
//!
//! `no_std` with `alloc`. Vertex indices are `usize` into a [`Graph`];
//! transceivers are identified by [`TransceiverId`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod clawfree;
pub mod claws;
pub mod conflict;
pub mod error;
pub mod graph;
pub mod net;
pub mod rng;
pub mod schedule;
pub mod topology;

pub use bitset::BitSet;
pub use clawfree::{caro_wei, init_ledger, make_claw_free, ClawFreeResult, EdgeLedger, TieBreak};
pub use claws::{count_claws, list_claws, Claw, ClawReport};
pub use conflict::{build_conflict_graph, ConflictGraph, Transmission, WeightFn};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use net::{Antenna, Connectivity, Network, RuleSet, ScenarioRules, Transceiver, TransceiverId};
pub use schedule::{IndependentSet, Partition};
