// SPDX-License-Identifier: Apache-2.0

//! Enumerate fin counts per sharing group under the RC model and pick the
//! most rise/fall-balanced one.
//!
//!     cargo run --example size_cell -- [CELL]

use cellsmith::sizing::size_exhaustive;
use cellsmith::{library, DelayModel};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "NAND2_X1".into());
    let cell = library::builtin(&name).expect("known cell").unwrap();
    let r = size_exhaustive(&cell, 2, 3, &DelayModel::default(), None).unwrap();
    for g in &r.groups {
        println!("group {} depth {} {:?}", g.label, g.depth, g.members);
    }
    println!("{:<10} {:>8} {:>8} {:>8}", "sizing", "rise", "fall", "balance");
    for c in &r.candidates {
        if let Some(e) = &c.evaluation {
            println!("{:<10} {:>8.3} {:>8.3} {:>8.4}", c.label, e.rise_delay, e.fall_delay, e.balance);
        }
    }
    println!("winner {}", r.winner);
}
