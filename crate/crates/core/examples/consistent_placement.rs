// SPDX-License-Identifier: Apache-2.0

//! Placements whose pull-up and pull-down rows share one gate order.
//!
//!     cargo run --example consistent_placement -- [CELL]

use cellsmith::placer::find_consistent_placements;
use cellsmith::{build_diffusion_graph, library, Device};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "AOI31_X2".into());
    let cell = library::builtin(&name).expect("known cell").unwrap();
    let pu = build_diffusion_graph(&cell, Device::Pmos).unwrap();
    let pd = build_diffusion_graph(&cell, Device::Nmos).unwrap();
    let found = find_consistent_placements(&pu, &pd, 1000);
    println!("{}: {} consistent gate order(s)", cell.name, found.len());
    for c in &found {
        println!("  {}", c.pu_sequence);
    }
}
