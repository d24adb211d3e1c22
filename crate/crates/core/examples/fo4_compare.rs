// SPDX-License-Identifier: Apache-2.0

//! FO4 delay and switched-capacitance proxy of the basic cells on both
//! built-in architectures.
//!
//!     cargo run --example fo4_compare

use cellsmith::arch::{fo4_evaluate, size_uniform};
use cellsmith::{library, Architecture, DelayModel};

fn main() {
    let model = DelayModel::default();
    println!("{:<10} {:>6} {:>9} {:>9}", "cell", "arch", "delay", "power");
    for n in library::BASIC_CELLS {
        let cell = library::builtin(n).unwrap().unwrap();
        for arch in [Architecture::nine_track(), Architecture::seven_half_track()] {
            let r = fo4_evaluate(&size_uniform(&cell, arch.fins_per_transistor), &arch, &model).unwrap();
            println!("{:<10} {:>6} {:>9.3} {:>9.3}", r.cell, r.arch, r.delay, r.power_proxy);
        }
    }
}
