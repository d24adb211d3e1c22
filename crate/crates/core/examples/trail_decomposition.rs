// SPDX-License-Identifier: Apache-2.0

//! Split a non-Eulerian diffusion graph into the fewest trails.
//!
//!     cargo run --example trail_decomposition -- [CELL]

use cellsmith::graph::decompose_into_trails;
use cellsmith::{build_diffusion_graph, library, Device};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "MXT2_X1".into());
    let cell = library::builtin(&name).expect("known cell").unwrap();
    for dev in [Device::Pmos, Device::Nmos] {
        let g = build_diffusion_graph(&cell, dev).unwrap();
        let d = decompose_into_trails(&g, g.min_trails(), 8);
        println!("{} {}: minimum {} trail(s)", cell.name, dev.network(), d.minimum);
        for (count, sets) in &d.by_count {
            for s in sets {
                let parts: Vec<String> = s.trails.iter().map(|t| t.label_string(&g)).collect();
                println!("  {count}: {}", parts.join(" | "));
            }
        }
        // Below the minimum nothing exists.
        assert!(decompose_into_trails(&g, d.minimum - 1, 8).is_empty());
    }
}
