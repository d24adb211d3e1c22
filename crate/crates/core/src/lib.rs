// SPDX-License-Identifier: Apache-2.0

//! Transistor-level standard-cell synthesis for FinFET libraries.
//!
//! The pipeline: parse a flat cell deck ([`netlist`]), size transistors in
//! whole fins by exhaustive enumeration ([`sizing`]), place transistors in
//! columns along (generalized) Euler trails of the pull-up and pull-down
//! diffusion graphs ([`graph`], [`placer`]), and compare cell architectures
//! by FO4 delay and power ([`arch`]). [`cli`] strings these together.

pub mod arch;
pub mod cli;
pub mod config;
pub mod graph;
pub mod library;
pub mod netlist;
pub mod placer;
pub mod sizing;

pub use arch::{load_architecture, Architecture};
pub use graph::{build_diffusion_graph, DiffusionGraph, GateSequence, Label, Trail};
pub use netlist::{parse_netlist, CellNetlist, Device, Transistor};
pub use placer::{PlacementCandidate, ScoreBreakdown};
pub use sizing::{DelayModel, SharingGroup, SizingCandidate};
