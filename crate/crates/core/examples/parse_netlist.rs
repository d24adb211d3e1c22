// SPDX-License-Identifier: Apache-2.0

//! Parse a SPICE deck and print its pins, nets and topology diagnostics.
//!
//!     cargo run --example parse_netlist -- [deck.sp]

use cellsmith::netlist::validate_topology;
use cellsmith::{library, parse_netlist};

fn main() {
    let text = match std::env::args().nth(1) {
        Some(p) => std::fs::read_to_string(&p).expect("readable deck"),
        None => library::deck("AOI31_X2").unwrap().to_string(),
    };
    let cell = match parse_netlist(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("{}: inputs {:?}, outputs {:?}, rails {}/{}", cell.name, cell.inputs, cell.outputs, cell.power, cell.ground);
    println!("internal nets: {:?}", cell.internal);
    for t in &cell.transistors {
        println!("  {:<5} {:?} g={:<4} {}-{} nfin={}", t.name, t.device, t.gate, t.source, t.drain, t.fins);
    }
    for d in validate_topology(&cell) {
        println!("{d}");
    }
    print!("round trip:\n{}", cell.unparse());
}
