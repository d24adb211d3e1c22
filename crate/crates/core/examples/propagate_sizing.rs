// SPDX-License-Identifier: Apache-2.0

//! Size the basic cells exhaustively, carry their fins over to complex
//! cells by device and stack depth, then hand-tune with an overrides file.
//!
//!     cargo run --example propagate_sizing

use cellsmith::sizing::{propagate_to_complex, size_exhaustive, BasicSizingTable, Overrides};
use cellsmith::{library, DelayModel};

fn main() {
    let model = DelayModel::default();
    let reports: Vec<_> =
        library::BASIC_CELLS.iter().map(|n| size_exhaustive(&library::builtin(n).unwrap().unwrap(), 2, 3, &model, None).unwrap()).collect();
    let table = BasicSizingTable::from_reports(&reports);
    println!("{:?}", table.entries);

    let aoi = library::builtin("AOI31_X2").unwrap().unwrap();
    let (sized, warnings) = propagate_to_complex(&aoi, &table, 4);
    for t in &sized.transistors {
        println!("  {} {:?} nfin={}", t.name, t.device, t.fins);
    }
    for w in warnings {
        println!("warning: {w}");
    }

    let tune = Overrides::from_toml("[AOI31_X2]\nn0 = 2\n").unwrap();
    let tuned = tune.apply(&sized).unwrap();
    println!("after override: {}", tuned.transistors.iter().map(|t| t.fins.to_string()).collect::<Vec<_>>().join(" "));
}
