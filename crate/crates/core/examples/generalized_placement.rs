// SPDX-License-Identifier: Apache-2.0

//! Independent row orders with `0` diffusion breaks. Cells without a
//! shared gate order still get a minimum-width placement.
//!
//!     cargo run --release --example generalized_placement -- [CELL]

use cellsmith::placer::{dedup_sequences, find_consistent_placements, find_generalized_placements, min_generalized_width};
use cellsmith::{build_diffusion_graph, library, Device};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "MXT2_X1".into());
    let cell = library::builtin(&name).expect("known cell").unwrap();
    let pu = build_diffusion_graph(&cell, Device::Pmos).unwrap();
    let pd = build_diffusion_graph(&cell, Device::Nmos).unwrap();
    println!("{}: {} consistent placement(s)", cell.name, find_consistent_placements(&pu, &pd, 10).len());
    let w = min_generalized_width(&pu, &pd);
    let found = dedup_sequences(find_generalized_placements(&pu, &pd, w, 1000).candidates);
    println!("minimum width {w}, {} distinct row pair(s):", found.len());
    for c in found.iter().take(12) {
        println!("  PU {}  PD {}", c.pu_sequence, c.pd_sequence);
    }
}
