// SPDX-License-Identifier: Apache-2.0

//! Build the pull-up and pull-down diffusion graphs of a cell, classify
//! them, list their Euler paths and print them as DOT.
//!
//!     cargo run --example euler_paths -- [CELL]

use cellsmith::graph::enumerate_euler_paths;
use cellsmith::{build_diffusion_graph, library, Device};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "NAND2_X1".into());
    let cell = library::builtin(&name).expect("known cell").unwrap();
    for dev in [Device::Pmos, Device::Nmos] {
        let g = build_diffusion_graph(&cell, dev).unwrap();
        println!("{} {}: {:?}, min trails {}", cell.name, dev.network(), g.eulerian_status(), g.min_trails());
        match enumerate_euler_paths(&g, 50) {
            Ok(paths) => {
                for p in paths {
                    let nodes: Vec<&str> = p.nodes(&g).into_iter().map(|n| g.node_name(n)).collect();
                    println!("  {}  via {}", p.label_string(&g), nodes.join("-"));
                }
            }
            Err(e) => println!("  {e}"),
        }
        print!("{}", g.to_dot());
    }
}
