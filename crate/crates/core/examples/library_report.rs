// SPDX-License-Identifier: Apache-2.0

//! Synthesize every built-in cell and print the library summary as JSON.
//!
//!     cargo run --release --example library_report -- [9T|7.5T]

use cellsmith::arch::{library_report, LibraryEntry};
use cellsmith::cli::synthesize_cell;
use cellsmith::config::RunConfig;
use cellsmith::library;
use cellsmith::sizing::{size_exhaustive, BasicSizingTable, Overrides};

fn main() {
    let mut cfg = RunConfig::default();
    if let Some(a) = std::env::args().nth(1) {
        cfg.arch = a;
    }
    let arch = cfg.resolve_arch().unwrap();
    let cells: Vec<_> = library::ALL.iter().map(|(n, _)| library::builtin(n).unwrap().unwrap()).collect();
    let basics: Vec<_> = cells
        .iter()
        .filter(|c| cfg.basic_cells.contains(&c.name))
        .map(|c| size_exhaustive(c, cfg.min_fins, cfg.max_fins, &cfg.model, cfg.load).unwrap())
        .collect();
    let table = BasicSizingTable::from_reports(&basics);
    let entries: Vec<LibraryEntry> = cells
        .iter()
        .map(|c| {
            let a = synthesize_cell(c, &cfg, &arch, &table, &Overrides::default(), Some(1), false).unwrap();
            let best = a.placement.best();
            LibraryEntry {
                width_columns: best.map_or(0, |b| b.width),
                sizing_candidates: a.sizing.candidates.len(),
                placement_candidates: a.placement.ranked.len(),
                best_sequence: best.map(|b| (b.pu_sequence.to_string(), b.pd_sequence.to_string())),
                cell: a.sizing.sized,
            }
        })
        .collect();
    println!("{}", serde_json::to_string_pretty(&library_report(&entries, &arch, &cfg.model)).unwrap());
}
