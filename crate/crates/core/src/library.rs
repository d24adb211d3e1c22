// SPDX-License-Identifier: Apache-2.0

//! Decks shipped with the crate (also under `cells/`).

use crate::netlist::{parse_netlist, CellNetlist, ParseError};

pub const INV_X1: &str = include_str!("../cells/INV_X1.sp");
pub const NAND2_X1: &str = include_str!("../cells/NAND2_X1.sp");
pub const NOR2_X1: &str = include_str!("../cells/NOR2_X1.sp");
pub const AOI31_X2: &str = include_str!("../cells/AOI31_X2.sp");
pub const MXT2_X1: &str = include_str!("../cells/MXT2_X1.sp");

/// Basic cells whose balanced sizings seed complex-cell sizing, in lookup priority.
pub const BASIC_CELLS: &[&str] = &["INV_X1", "NAND2_X1", "NOR2_X1"];

pub const ALL: &[(&str, &str)] = &[("INV_X1", INV_X1), ("NAND2_X1", NAND2_X1), ("NOR2_X1", NOR2_X1), ("AOI31_X2", AOI31_X2), ("MXT2_X1", MXT2_X1)];

pub fn deck(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

/// Parses a bundled deck. `None` if no deck has that name.
pub fn builtin(name: &str) -> Option<Result<CellNetlist, ParseError>> {
    deck(name).map(parse_netlist)
}
