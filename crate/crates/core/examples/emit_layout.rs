// SPDX-License-Identifier: Apache-2.0

//! Rank placements by width, pin access and pin capacitance, then emit
//! the best one as an ASCII grid and as JSON.
//!
//!     cargo run --example emit_layout -- [CELL] [9T|7.5T]

use cellsmith::placer::{emit_layout, place_cell, LayoutFormat, PlaceOptions};
use cellsmith::{library, Architecture};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "AOI31_X2".into());
    let arch = Architecture::builtin(&args.next().unwrap_or_else(|| "7.5T".into())).expect("known architecture");
    let cell = library::builtin(&name).expect("known cell").unwrap();
    let p = place_cell(&cell, &arch, &PlaceOptions::default()).unwrap();
    for (i, c) in p.ranked.iter().take(5).enumerate() {
        let s = c.score.as_ref().unwrap();
        println!("#{i} {} width {} access {} cap {}", c.pair_string(), c.width, s.pin_access.aggregate, s.pin_cap.total);
    }
    let best = p.best().expect("a placement");
    print!("{}", emit_layout(best, &arch, LayoutFormat::Ascii));
    println!("{}", emit_layout(best, &arch, LayoutFormat::Json));
}
