// SPDX-License-Identifier: Apache-2.0

//! Discrete fin sizing.
//!
//! Transistors that share a source/drain region must carry the same fin
//! count, so fins are assigned per *sharing group* rather than per device.
//! Every assignment in a fin range is enumerated and scored with a
//! single-time-constant RC model; the candidate with the most balanced rise
//! and fall delays wins.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{CellNetlist, Device};

/// Normalized RC constants. `beta` is the NMOS/PMOS per-fin drive ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelayModel {
    pub r1: f64,
    pub cg: f64,
    pub cd: f64,
    pub cw: f64,
    pub beta: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        DelayModel { r1: 1.0, cg: 1.0, cd: 0.5, cw: 1.0, beta: 1.1 }
    }
}

impl DelayModel {
    /// `r1`, `cg` and `cd` must be positive; `cw` may be zero and `beta` one,
    /// which is how the symmetric corner cases are exercised.
    pub fn validate(&self) -> Result<(), String> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.r1) || !ok(self.cg) || !ok(self.cd) {
            return Err("r1, cg and cd must be positive".into());
        }
        if !self.cw.is_finite() || self.cw < 0.0 {
            return Err("cw must be non-negative".into());
        }
        if !self.beta.is_finite() || self.beta < 1.0 {
            return Err("beta must be at least 1".into());
        }
        Ok(())
    }

    fn drive(&self, d: Device) -> f64 {
        match d {
            Device::Pmos => 1.0,
            Device::Nmos => self.beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharingGroup {
    pub device: Device,
    /// Indices into `CellNetlist::transistors`, ascending.
    pub members: Vec<usize>,
    /// Longest rail-anchored chain of series devices inside the group.
    pub depth: usize,
    /// `p0`, `p1`, `n0`, ... in enumeration order.
    pub label: String,
}

/// Groups for one polarity, ordered by their smallest member index.
pub fn derive_sharing_groups(netlist: &CellNetlist, device: Device) -> Vec<SharingGroup> {
    let idx: Vec<usize> = netlist.devices(device).map(|(i, _)| i).collect();
    let mut parent: BTreeMap<usize, usize> = idx.iter().map(|&i| (i, i)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    let mut first_on_net: BTreeMap<&str, usize> = BTreeMap::new();
    for &i in &idx {
        let t = &netlist.transistors[i];
        for net in [t.source.as_str(), t.drain.as_str()] {
            if netlist.is_rail(net) {
                continue;
            }
            match first_on_net.get(net) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent.insert(a.max(b), a.min(b));
                    }
                }
                None => {
                    first_on_net.insert(net, i);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &idx {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    by_root
        .into_values()
        .enumerate()
        .map(|(k, members)| SharingGroup {
            device,
            depth: group_depth(netlist, &members, netlist.rail_for(device)),
            members,
            label: format!("{}{k}", device.letter()),
        })
        .collect()
}

/// All groups, PMOS first.
pub fn all_sharing_groups(netlist: &CellNetlist) -> Vec<SharingGroup> {
    let mut g = derive_sharing_groups(netlist, Device::Pmos);
    g.extend(derive_sharing_groups(netlist, Device::Nmos));
    g
}

fn group_depth(netlist: &CellNetlist, members: &[usize], rail: &str) -> usize {
    fn walk(netlist: &CellNetlist, members: &[usize], at: &str, seen: &mut Vec<String>) -> usize {
        let mut best = 0;
        for &i in members {
            let t = &netlist.transistors[i];
            let next = if t.source == at {
                &t.drain
            } else if t.drain == at {
                &t.source
            } else {
                continue;
            };
            if seen.iter().any(|s| s == next) {
                continue;
            }
            seen.push(next.clone());
            best = best.max(1 + walk(netlist, members, next, seen));
            seen.pop();
        }
        best
    }
    let d = walk(netlist, members, rail, &mut vec![rail.to_string()]);
    // A group floating off the rail (e.g. a pass gate) still has one device in series.
    d.max(1)
}

#[derive(Debug, Error, PartialEq)]
pub enum SizingError {
    #[error("no sharing groups to size")]
    NoGroups,
    #[error("invalid fin range {min}..={max}")]
    BadRange { min: u32, max: u32 },
    #[error("no evaluable candidate")]
    NothingEvaluable,
}

#[derive(Debug, Clone, Error, PartialEq, Serialize)]
#[error("no conducting {device} path from `{output}` to a rail")]
pub struct Unevaluable {
    pub output: String,
    pub device: Device,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub rise_delay: f64,
    pub fall_delay: f64,
    pub rise_slew: f64,
    pub fall_slew: f64,
    pub balance: f64,
    /// Capacitance charged on a rising / discharged on a falling output.
    pub rise_cap: f64,
    pub fall_cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizingCandidate {
    /// Fins per group, parallel to the group list the candidate came from.
    pub fins: Vec<u32>,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unevaluable: Option<String>,
}

impl SizingCandidate {
    pub fn total_fins(&self, groups: &[SharingGroup]) -> u32 {
        self.fins.iter().zip(groups).map(|(f, g)| f * g.members.len() as u32).sum()
    }

    /// Copy of `netlist` with each group's members set to this candidate's fins.
    pub fn apply(&self, netlist: &CellNetlist, groups: &[SharingGroup]) -> CellNetlist {
        let mut out = netlist.clone();
        for (f, g) in self.fins.iter().zip(groups) {
            for &m in &g.members {
                out.transistors[m].fins = *f;
            }
        }
        out
    }
}

fn label_for(groups: &[SharingGroup], fins: &[u32]) -> String {
    let parts: Vec<String> = groups.iter().zip(fins).map(|(g, f)| format!("{f}{}", g.device.letter())).collect();
    format!("({})", parts.join(", "))
}

/// Cartesian product of fin counts over groups; the last group varies fastest.
pub fn enumerate_sizings(groups: &[SharingGroup], min_fins: u32, max_fins: u32) -> Result<Vec<SizingCandidate>, SizingError> {
    if groups.is_empty() {
        return Err(SizingError::NoGroups);
    }
    if min_fins == 0 || min_fins > max_fins {
        return Err(SizingError::BadRange { min: min_fins, max: max_fins });
    }
    let mut out = Vec::new();
    let mut fins = vec![min_fins; groups.len()];
    loop {
        out.push(SizingCandidate { label: label_for(groups, &fins), fins: fins.clone(), load: None, evaluation: None, unevaluable: None });
        let mut k = groups.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if fins[k] < max_fins {
                fins[k] += 1;
                break;
            }
            fins[k] = min_fins;
        }
    }
}

/// Gate capacitance seen at each input pin.
pub fn input_caps(netlist: &CellNetlist, model: &DelayModel) -> BTreeMap<String, f64> {
    netlist
        .inputs
        .iter()
        .map(|p| {
            let c = netlist.transistors.iter().filter(|t| &t.gate == p).map(|t| model.cg * t.fins as f64).sum();
            (p.clone(), c)
        })
        .collect()
}

/// Four copies of the cell's largest input capacitance.
pub fn fo4_load(netlist: &CellNetlist, model: &DelayModel) -> f64 {
    4.0 * input_caps(netlist, model).values().fold(0.0, |a: f64, &b| a.max(b))
}

fn diffusion_cap(netlist: &CellNetlist, model: &DelayModel, net: &str) -> f64 {
    netlist
        .transistors
        .iter()
        .map(|t| {
            let n = (t.source == net) as u32 + (t.drain == net) as u32;
            model.cd * (n * t.fins) as f64
        })
        .sum()
}

/// Worst path from `output` to the rail through `device` transistors:
/// (resistance, internal nets along it). Highest resistance wins, then the
/// larger internal capacitance.
fn worst_path(netlist: &CellNetlist, model: &DelayModel, output: &str, device: Device) -> Option<(f64, f64)> {
    let rail = netlist.rail_for(device);
    let devs: Vec<usize> = netlist.devices(device).map(|(i, _)| i).collect();
    let mut best: Option<(f64, f64)> = None;
    let mut stack = vec![output.to_string()];
    fn dfs(
        netlist: &CellNetlist,
        model: &DelayModel,
        devs: &[usize],
        rail: &str,
        stack: &mut Vec<String>,
        r: f64,
        c: f64,
        best: &mut Option<(f64, f64)>,
    ) {
        let at = stack.last().unwrap().clone();
        for &i in devs {
            let t = &netlist.transistors[i];
            let next = if t.source == at {
                &t.drain
            } else if t.drain == at {
                &t.source
            } else {
                continue;
            };
            if stack.iter().any(|s| s == next) {
                continue;
            }
            let r2 = r + model.r1 / (t.fins as f64 * model.drive(t.device));
            if next == rail {
                let better = match best {
                    None => true,
                    Some((br, bc)) => r2 > *br || (r2 == *br && c > *bc),
                };
                if better {
                    *best = Some((r2, c));
                }
                continue;
            }
            if netlist.is_rail(next) {
                continue;
            }
            let c2 = c + diffusion_cap(netlist, model, next);
            stack.push(next.clone());
            dfs(netlist, model, devs, rail, stack, r2, c2, best);
            stack.pop();
        }
    }
    dfs(netlist, model, &devs, rail, &mut stack, 0.0, 0.0, &mut best);
    best
}

/// RC evaluation of an already-sized netlist at a fixed output load. With
/// several outputs the slowest one is reported.
pub fn evaluate_netlist(netlist: &CellNetlist, model: &DelayModel, load: f64) -> Result<Evaluation, Unevaluable> {
    let ln2 = std::f64::consts::LN_2;
    let mut worst: Option<Evaluation> = None;
    for out in &netlist.outputs {
        let base = load + model.cw + diffusion_cap(netlist, model, out);
        let (rp, cp) = worst_path(netlist, model, out, Device::Pmos).ok_or_else(|| Unevaluable { output: out.clone(), device: Device::Pmos })?;
        let (rn, cn) = worst_path(netlist, model, out, Device::Nmos).ok_or_else(|| Unevaluable { output: out.clone(), device: Device::Nmos })?;
        let (rise_cap, fall_cap) = (base + cp, base + cn);
        let rise = ln2 * rp * rise_cap;
        let fall = ln2 * rn * fall_cap;
        let hi = rise.max(fall);
        let ev = Evaluation {
            rise_delay: rise,
            fall_delay: fall,
            rise_slew: 2.2 * rp * rise_cap,
            fall_slew: 2.2 * rn * fall_cap,
            balance: if hi > 0.0 { (rise - fall).abs() / hi } else { 0.0 },
            rise_cap,
            fall_cap,
        };
        let slower = match &worst {
            None => true,
            Some(w) => ev.rise_delay.max(ev.fall_delay) > w.rise_delay.max(w.fall_delay),
        };
        if slower {
            worst = Some(ev);
        }
    }
    worst.ok_or(Unevaluable { output: String::new(), device: Device::Pmos })
}

/// Evaluates `candidate` on `netlist`. `load = None` means FO4 of the sized cell.
pub fn evaluate_candidate(
    candidate: &SizingCandidate,
    groups: &[SharingGroup],
    netlist: &CellNetlist,
    model: &DelayModel,
    load: Option<f64>,
) -> SizingCandidate {
    let sized = candidate.apply(netlist, groups);
    let load = load.unwrap_or_else(|| fo4_load(&sized, model));
    let mut out = candidate.clone();
    out.load = Some(load);
    match evaluate_netlist(&sized, model, load) {
        Ok(ev) => {
            out.evaluation = Some(ev);
            out.unevaluable = None;
        }
        Err(e) => {
            out.evaluation = None;
            out.unevaluable = Some(e.to_string());
        }
    }
    out
}

/// Balance compared on a 1e-9 grid so that algebraically equal ratios tie.
fn balance_key(b: f64) -> i64 {
    (b * 1e9).round() as i64
}

pub fn select_balanced<'a>(candidates: &'a [SizingCandidate], groups: &[SharingGroup]) -> Result<&'a SizingCandidate, SizingError> {
    candidates
        .iter()
        .filter_map(|c| c.evaluation.as_ref().map(|e| (c, e)))
        .min_by(|(a, ea), (b, eb)| {
            balance_key(ea.balance).cmp(&balance_key(eb.balance)).then(a.total_fins(groups).cmp(&b.total_fins(groups))).then(a.label.cmp(&b.label))
        })
        .map(|(c, _)| c)
        .ok_or(SizingError::NothingEvaluable)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub label: String,
    pub device: Device,
    pub depth: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizingReport {
    pub cell: String,
    /// `exhaustive`, `propagated`, `override` or `fixed`.
    pub mode: String,
    pub min_fins: u32,
    pub max_fins: u32,
    pub groups: Vec<GroupReport>,
    pub candidates: Vec<SizingCandidate>,
    pub winner: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub sized: CellNetlist,
    #[serde(skip)]
    pub group_list: Vec<SharingGroup>,
}

impl SizingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn group_reports(netlist: &CellNetlist, groups: &[SharingGroup]) -> Vec<GroupReport> {
    groups
        .iter()
        .map(|g| GroupReport {
            label: g.label.clone(),
            device: g.device,
            depth: g.depth,
            members: g.members.iter().map(|&m| netlist.transistors[m].name.clone()).collect(),
        })
        .collect()
}

/// Enumerate, evaluate and pick the most balanced sizing of one cell.
pub fn size_exhaustive(
    netlist: &CellNetlist,
    min_fins: u32,
    max_fins: u32,
    model: &DelayModel,
    load: Option<f64>,
) -> Result<SizingReport, SizingError> {
    let groups = all_sharing_groups(netlist);
    let candidates: Vec<SizingCandidate> =
        enumerate_sizings(&groups, min_fins, max_fins)?.iter().map(|c| evaluate_candidate(c, &groups, netlist, model, load)).collect();
    let winner = select_balanced(&candidates, &groups)?;
    Ok(SizingReport {
        cell: netlist.name.clone(),
        mode: "exhaustive".into(),
        warnings: Vec::new(),
        min_fins,
        max_fins,
        groups: group_reports(netlist, &groups),
        sized: winner.apply(netlist, &groups),
        winner: winner.label.clone(),
        candidates,
        group_list: groups,
    })
}

/// Report for a netlist whose fins are already decided (propagated or
/// hand-tuned): a single evaluated candidate.
pub fn report_fixed(sized: &CellNetlist, mode: &str, warnings: Vec<String>, model: &DelayModel, load: Option<f64>) -> SizingReport {
    let groups = all_sharing_groups(sized);
    let fins: Vec<u32> = groups.iter().map(|g| sized.transistors[g.members[0]].fins).collect();
    let c = SizingCandidate { label: label_for(&groups, &fins), fins, load: None, evaluation: None, unevaluable: None };
    let c = evaluate_candidate(&c, &groups, sized, model, load);
    let lo = sized.transistors.iter().map(|t| t.fins).min().unwrap_or(0);
    let hi = sized.transistors.iter().map(|t| t.fins).max().unwrap_or(0);
    SizingReport {
        cell: sized.name.clone(),
        mode: mode.into(),
        min_fins: lo,
        max_fins: hi,
        groups: group_reports(sized, &groups),
        winner: c.label.clone(),
        candidates: vec![c],
        warnings,
        sized: sized.clone(),
        group_list: groups,
    }
}

/// Fins per (polarity, series depth), learned from the basic cells.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BasicSizingTable {
    pub entries: BTreeMap<(Device, usize), u32>,
}

impl BasicSizingTable {
    /// Earlier cells take precedence when two cells yield the same shape.
    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a SizingReport>) -> Self {
        let mut t = BasicSizingTable::default();
        for r in reports {
            for g in &r.group_list {
                let fins = r.sized.transistors[g.members[0]].fins;
                t.entries.entry((g.device, g.depth)).or_insert(fins);
            }
        }
        t
    }

    pub fn get(&self, device: Device, depth: usize) -> Option<u32> {
        self.entries.get(&(device, depth)).copied()
    }
}

/// Sizes a complex cell group-by-group from the basic table. Groups with no
/// matching shape get `fallback` fins and a warning.
pub fn propagate_to_complex(cell: &CellNetlist, table: &BasicSizingTable, fallback: u32) -> (CellNetlist, Vec<String>) {
    let mut out = cell.clone();
    let mut warnings = Vec::new();
    for g in all_sharing_groups(cell) {
        let fins = match table.get(g.device, g.depth) {
            Some(f) => f,
            None => {
                warnings
                    .push(format!("{}: no basic {} shape of depth {} for group {}; using {fallback} fins", cell.name, g.device, g.depth, g.label));
                fallback
            }
        };
        for &m in &g.members {
            out.transistors[m].fins = fins;
        }
    }
    (out, warnings)
}

/// Hand-tuned per-cell fin assignments:
///
/// ```toml
/// [AOI31_X2]
/// p0 = 3
/// n0 = 2
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Overrides(pub BTreeMap<String, BTreeMap<String, u32>>);

#[derive(Debug, Error)]
pub enum OverrideError {
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error("{cell}: no sharing group `{group}`")]
    UnknownGroup { cell: String, group: String },
    #[error("{cell}: group `{group}` needs at least one fin")]
    ZeroFins { cell: String, group: String },
}

impl Overrides {
    pub fn from_toml(text: &str) -> Result<Self, OverrideError> {
        Ok(toml::from_str(text)?)
    }

    pub fn apply(&self, cell: &CellNetlist) -> Result<CellNetlist, OverrideError> {
        let Some(map) = self.0.get(&cell.name) else {
            return Ok(cell.clone());
        };
        let groups = all_sharing_groups(cell);
        let mut out = cell.clone();
        for (label, &fins) in map {
            let g = groups
                .iter()
                .find(|g| &g.label == label)
                .ok_or_else(|| OverrideError::UnknownGroup { cell: cell.name.clone(), group: label.clone() })?;
            if fins == 0 {
                return Err(OverrideError::ZeroFins { cell: cell.name.clone(), group: label.clone() });
            }
            for &m in &g.members {
                out.transistors[m].fins = fins;
            }
        }
        Ok(out)
    }
}

/// Every member of every group carries one fin count.
pub fn groups_uniform(netlist: &CellNetlist) -> bool {
    all_sharing_groups(netlist).iter().all(|g| {
        let f: BTreeSet<u32> = g.members.iter().map(|&m| netlist.transistors[m].fins).collect();
        f.len() == 1
    })
}
