// SPDX-License-Identifier: Apache-2.0

//! Cell architectures (track height, fin budget, routing resources) and
//! architecture-level comparisons: FO4 delay/power and library reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::CellNetlist;
use crate::sizing::{self, DelayModel, Evaluation};

#[derive(Debug, Error)]
pub enum ArchError {
    #[error("unknown architecture `{0}` (expected 9T, 7.5T or a config file)")]
    UnknownName(String),
    #[error("invalid architecture config: {0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing architecture config: {0}")]
    Toml(#[from] toml::de::Error),
}

fn default_reserved() -> u32 {
    4
}

fn default_poly_pitch() -> f64 {
    54.0
}

/// Lengths are in nanometers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Architecture {
    pub name: String,
    /// Cell height in metal-2 pitches.
    pub tracks: f64,
    pub fin_pitch: u32,
    pub m1_pitch: u32,
    pub m2_pitch: u32,
    pub total_fins: u32,
    pub fins_per_transistor: u32,
    pub m1_signal_tracks: f64,
    pub m2_signal_tracks: u32,
    pub m1_m2_offset: u32,
    /// Fins lost to rails and the gap between the P and N rows.
    #[serde(default = "default_reserved")]
    pub reserved_fins: u32,
    /// Column pitch used to convert widths to nanometers. Placeholder value.
    #[serde(default = "default_poly_pitch")]
    pub poly_pitch: f64,
}

impl Architecture {
    pub fn nine_track() -> Self {
        Architecture {
            name: "9T".into(),
            tracks: 9.0,
            fin_pitch: 27,
            m1_pitch: 36,
            m2_pitch: 36,
            total_fins: 12,
            fins_per_transistor: 4,
            m1_signal_tracks: 8.0,
            m2_signal_tracks: 8,
            m1_m2_offset: 0,
            reserved_fins: default_reserved(),
            poly_pitch: default_poly_pitch(),
        }
    }

    pub fn seven_half_track() -> Self {
        Architecture {
            name: "7.5T".into(),
            tracks: 7.5,
            fin_pitch: 27,
            m1_pitch: 36,
            m2_pitch: 36,
            total_fins: 10,
            fins_per_transistor: 3,
            m1_signal_tracks: 5.5,
            m2_signal_tracks: 6,
            m1_m2_offset: 9,
            reserved_fins: default_reserved(),
            poly_pitch: default_poly_pitch(),
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "9T" | "9" | "nine_track" => Some(Self::nine_track()),
            "7.5T" | "7.5" | "seven_half_track" => Some(Self::seven_half_track()),
            _ => None,
        }
    }

    pub fn cell_height_nm(&self) -> f64 {
        self.tracks * self.m2_pitch as f64
    }

    /// Whole metal-1 tracks available for intra-cell routing.
    pub fn routing_tracks(&self) -> usize {
        self.m1_signal_tracks.floor() as usize
    }

    pub fn validate(&self) -> Result<(), ArchError> {
        let bad = |m: String| Err(ArchError::Invalid(m));
        // Written so NaN fails too.
        let positive = |x: f64| x > 0.0;
        if !positive(self.tracks) || !positive(self.m1_signal_tracks) || !positive(self.poly_pitch) {
            return bad("tracks, m1_signal_tracks and poly_pitch must be positive".into());
        }
        for (k, v) in [
            ("fin_pitch", self.fin_pitch),
            ("m1_pitch", self.m1_pitch),
            ("m2_pitch", self.m2_pitch),
            ("total_fins", self.total_fins),
            ("fins_per_transistor", self.fins_per_transistor),
            ("m2_signal_tracks", self.m2_signal_tracks),
        ] {
            if v == 0 {
                return bad(format!("{k} must be positive"));
            }
        }
        if self.reserved_fins >= self.total_fins {
            return bad("reserved_fins must be below total_fins".into());
        }
        let room = (self.total_fins - self.reserved_fins) / 2;
        if self.fins_per_transistor > room {
            return bad(format!("fins_per_transistor {} exceeds (total_fins - reserved_fins)/2 = {room}", self.fins_per_transistor));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, ArchError> {
        let a: Architecture = toml::from_str(text)?;
        a.validate()?;
        Ok(a)
    }
}

/// Resolves a built-in name (`9T`, `7.5T`) or reads a TOML config file.
pub fn load_architecture(name_or_path: &str) -> Result<Architecture, ArchError> {
    if let Some(a) = Architecture::builtin(name_or_path) {
        return Ok(a);
    }
    let path = Path::new(name_or_path);
    if !path.is_file() {
        return Err(ArchError::UnknownName(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| ArchError::Io { path: name_or_path.to_string(), source })?;
    Architecture::from_toml(&text)
}

#[derive(Debug, Error, PartialEq)]
pub enum Fo4Error {
    #[error("transistor `{name}` has {fins} fins, above the {arch} limit of {limit}")]
    FinCap { name: String, fins: u32, arch: String, limit: u32 },
    #[error(transparent)]
    Unevaluable(#[from] sizing::Unevaluable),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fo4Result {
    pub cell: String,
    pub arch: String,
    /// Mean of rise and fall delay.
    pub delay: f64,
    /// Switched capacitance per transition at unit voltage and activity.
    pub power_proxy: f64,
    pub load: f64,
    pub evaluation: Evaluation,
}

pub fn check_fin_cap(cell: &CellNetlist, arch: &Architecture) -> Result<(), Fo4Error> {
    match cell.transistors.iter().find(|t| t.fins > arch.fins_per_transistor) {
        Some(t) => Err(Fo4Error::FinCap { name: t.name.clone(), fins: t.fins, arch: arch.name.clone(), limit: arch.fins_per_transistor }),
        None => Ok(()),
    }
}

/// Stage delay and switched capacitance of `cell` driving four copies of its
/// own (largest) input capacitance plus the model's fixed wire load.
pub fn fo4_evaluate(cell: &CellNetlist, arch: &Architecture, model: &DelayModel) -> Result<Fo4Result, Fo4Error> {
    check_fin_cap(cell, arch)?;
    let load = sizing::fo4_load(cell, model);
    let ev = sizing::evaluate_netlist(cell, model, load)?;
    Ok(Fo4Result {
        cell: cell.name.clone(),
        arch: arch.name.clone(),
        delay: 0.5 * (ev.rise_delay + ev.fall_delay),
        power_proxy: 0.5 * (ev.rise_cap + ev.fall_cap),
        load,
        evaluation: ev,
    })
}

/// Copy of `cell` with every transistor at the architecture's fin limit.
pub fn size_uniform(cell: &CellNetlist, fins: u32) -> CellNetlist {
    let mut out = cell.clone();
    for t in &mut out.transistors {
        t.fins = fins;
    }
    out
}

/// One synthesized cell as fed into [`library_report`].
#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub cell: CellNetlist,
    pub width_columns: usize,
    pub sizing_candidates: usize,
    pub placement_candidates: usize,
    pub best_sequence: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LibraryRow {
    pub cell: String,
    pub width_columns: usize,
    pub width_nm: f64,
    pub height_nm: f64,
    pub fo4_delay: Option<f64>,
    pub fo4_power: Option<f64>,
    pub pin_caps: BTreeMap<String, f64>,
    pub sizing_candidates: usize,
    pub placement_candidates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pu_sequence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd_sequence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LibrarySummary {
    pub cells: usize,
    pub total_width_columns: usize,
    pub total_area_nm2: f64,
    pub mean_fo4_delay: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LibraryReport {
    pub arch: Architecture,
    pub rows: Vec<LibraryRow>,
    pub summary: LibrarySummary,
}

pub fn library_report(cells: &[LibraryEntry], arch: &Architecture, model: &DelayModel) -> LibraryReport {
    let height = arch.cell_height_nm();
    let rows: Vec<LibraryRow> = cells
        .iter()
        .map(|e| {
            let fo4 = fo4_evaluate(&e.cell, arch, model);
            let (pu, pd) = match &e.best_sequence {
                Some((a, b)) => (Some(a.clone()), Some(b.clone())),
                None => (None, None),
            };
            LibraryRow {
                cell: e.cell.name.clone(),
                width_columns: e.width_columns,
                width_nm: e.width_columns as f64 * arch.poly_pitch,
                height_nm: height,
                fo4_delay: fo4.as_ref().ok().map(|r| r.delay),
                fo4_power: fo4.as_ref().ok().map(|r| r.power_proxy),
                pin_caps: sizing::input_caps(&e.cell, model),
                sizing_candidates: e.sizing_candidates,
                placement_candidates: e.placement_candidates,
                pu_sequence: pu,
                pd_sequence: pd,
                note: fo4.err().map(|err| err.to_string()),
            }
        })
        .collect();
    let delays: Vec<f64> = rows.iter().filter_map(|r| r.fo4_delay).collect();
    let summary = LibrarySummary {
        cells: rows.len(),
        total_width_columns: rows.iter().map(|r| r.width_columns).sum(),
        total_area_nm2: rows.iter().map(|r| r.width_nm * r.height_nm).sum(),
        mean_fo4_delay: if delays.is_empty() { None } else { Some(delays.iter().sum::<f64>() / delays.len() as f64) },
    };
    LibraryReport { arch: arch.clone(), rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn table_values() {
        let a = load_architecture("9T").unwrap();
        assert_eq!(a.fins_per_transistor, 4);
        assert_eq!(a.cell_height_nm(), 324.0);
        let b = load_architecture("7.5T").unwrap();
        assert_eq!(b.m1_signal_tracks, 5.5);
        assert_eq!(b.m1_m2_offset, 9);
        assert_eq!(b.cell_height_nm(), 270.0);
        assert_eq!(b.routing_tracks(), 5);
        a.validate().unwrap();
        b.validate().unwrap();
    }

    #[test]
    fn custom_config() {
        let mut text = toml::to_string(&Architecture::nine_track()).unwrap();
        text = text.replace("name = \"9T\"", "name = \"10T\"").replace("tracks = 9.0", "tracks = 10.0");
        let a = Architecture::from_toml(&text).unwrap();
        assert_eq!(a.name, "10T");

        let zero = text.replace("fins_per_transistor = 4", "fins_per_transistor = 0");
        assert!(matches!(Architecture::from_toml(&zero), Err(ArchError::Invalid(_))));
        let too_many = text.replace("fins_per_transistor = 4", "fins_per_transistor = 5");
        assert!(matches!(Architecture::from_toml(&too_many), Err(ArchError::Invalid(_))));
        assert!(matches!(load_architecture("11T"), Err(ArchError::UnknownName(_))));
    }

    #[test]
    fn fo4_direction_for_inverter() {
        let inv = library::builtin("INV_X1").unwrap().unwrap();
        let m = DelayModel::default();
        let nine = Architecture::nine_track();
        let seven = Architecture::seven_half_track();
        let r9 = fo4_evaluate(&size_uniform(&inv, 4), &nine, &m).unwrap();
        let r7 = fo4_evaluate(&size_uniform(&inv, 3), &seven, &m).unwrap();
        assert!(r7.delay > r9.delay);
        assert!(r9.power_proxy > r7.power_proxy);
    }

    #[test]
    fn fo4_fin_invariant_without_wire_load() {
        let inv = library::builtin("INV_X1").unwrap().unwrap();
        let m = DelayModel { cw: 0.0, beta: 1.0, ..DelayModel::default() };
        let nine = Architecture::nine_track();
        let d: Vec<f64> = (1..=4).map(|f| fo4_evaluate(&size_uniform(&inv, f), &nine, &m).unwrap().delay).collect();
        for w in d.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn fo4_rejects_oversized_cells() {
        let inv = library::builtin("INV_X1").unwrap().unwrap();
        let err = fo4_evaluate(&size_uniform(&inv, 4), &Architecture::seven_half_track(), &DelayModel::default());
        assert!(matches!(err, Err(Fo4Error::FinCap { limit: 3, .. })));
    }

    #[test]
    fn empty_library_report() {
        let r = library_report(&[], &Architecture::nine_track(), &DelayModel::default());
        assert!(r.rows.is_empty());
        assert_eq!(r.summary.cells, 0);
        assert_eq!(r.summary.mean_fo4_delay, None);
    }
}
