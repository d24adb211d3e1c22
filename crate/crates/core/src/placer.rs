// SPDX-License-Identifier: Apache-2.0

//! Two-row column placement.
//!
//! A placement is a sequence of poly columns. Each column carries one pull-up
//! and one pull-down transistor, or a `0` in either row: a dummy gate when the
//! other row has a transistor, a diffusion break when both rows are `0`. Two
//! different gates never share a column. Within a row, neighbouring
//! transistors must share the diffusion net at their junction unless a `0`
//! column separates them, so each maximal run of a row is a trail of that
//! row's diffusion graph.
//!
//! Both searches walk the two graphs column by column in lockstep; neither
//! builds full trail lists first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arch::Architecture;
use crate::graph::{build_diffusion_graph, DiffusionGraph, GateSequence, GraphError, Label};
use crate::netlist::{CellNetlist, Device};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowSlot {
    pub transistor: String,
    pub left: String,
    pub right: String,
    pub fins: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementColumn {
    pub pu_gate: Label,
    pub pd_gate: Label,
    pub pu: Option<RowSlot>,
    pub pd: Option<RowSlot>,
}

impl PlacementColumn {
    pub fn slot(&self, device: Device) -> Option<&RowSlot> {
        match device {
            Device::Pmos => self.pu.as_ref(),
            Device::Nmos => self.pd.as_ref(),
        }
    }

    /// The gate net on this column's poly, if any.
    pub fn gate(&self) -> Option<&str> {
        self.pu_gate.gate().or(self.pd_gate.gate())
    }
}

/// Model constants for the pin capacitance proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PinCapModel {
    /// Per gate column.
    pub g: f64,
    /// Per column pitch of strap.
    pub m: f64,
}

impl Default for PinCapModel {
    fn default() -> Self {
        PinCapModel { g: 1.0, m: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinAccess {
    pub per_pin: BTreeMap<String, usize>,
    pub aggregate: usize,
    pub zero_access: Vec<String>,
    /// Straps that found no free track.
    pub unrouted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinCap {
    pub per_pin: BTreeMap<String, f64>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    pub width: usize,
    pub pin_access: PinAccess,
    pub pin_cap: PinCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementCandidate {
    pub cell: String,
    pub pu_sequence: GateSequence,
    pub pd_sequence: GateSequence,
    pub width: usize,
    /// Same sequence in both rows.
    pub consistent: bool,
    pub columns: Vec<PlacementColumn>,
    #[serde(skip)]
    pub inputs: Vec<String>,
    #[serde(skip)]
    pub rails: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<ScoreBreakdown>,
}

impl PlacementCandidate {
    /// `PU|PD` label strings.
    pub fn pair_string(&self) -> String {
        format!("{}|{}", self.pu_sequence.canonical(), self.pd_sequence.canonical())
    }

    /// Pair string of whichever of the candidate and its mirror image sorts first.
    pub fn sequence_key(&self) -> String {
        let fwd = self.pair_string();
        let rev = format!("{}|{}", self.pu_sequence.reversed().canonical(), self.pd_sequence.reversed().canonical());
        fwd.min(rev)
    }

    /// Like [`sequence_key`](Self::sequence_key) but including diffusion nets.
    pub fn realization_key(&self) -> String {
        realization_key(&self.columns)
    }

    pub fn has_zero_access(&self) -> bool {
        self.score.as_ref().is_some_and(|s| !s.pin_access.zero_access.is_empty())
    }

    /// Checks the column rules: gate match or `0`, diffusion sharing within
    /// runs, each transistor of `pu`/`pd` placed once.
    pub fn check_legal(&self, pu: &DiffusionGraph, pd: &DiffusionGraph) -> Result<(), String> {
        if self.columns.len() != self.width || self.pu_sequence.len() != self.width || self.pd_sequence.len() != self.width {
            return Err("length mismatch".into());
        }
        for (i, c) in self.columns.iter().enumerate() {
            if let (Some(a), Some(b)) = (c.pu_gate.gate(), c.pd_gate.gate()) {
                if a != b {
                    return Err(format!("column {i}: gates {a} and {b} share poly"));
                }
            }
        }
        for (g, dev) in [(pu, Device::Pmos), (pd, Device::Nmos)] {
            let mut seen = BTreeSet::new();
            let mut prev: Option<&RowSlot> = None;
            for (i, c) in self.columns.iter().enumerate() {
                let label = if dev == Device::Pmos { &c.pu_gate } else { &c.pd_gate };
                match c.slot(dev) {
                    Some(s) => {
                        let e = g
                            .edges
                            .iter()
                            .find(|e| e.name == s.transistor)
                            .ok_or_else(|| format!("column {i}: unknown transistor {}", s.transistor))?;
                        let (a, b) = (g.node_name(e.a), g.node_name(e.b));
                        if !((a == s.left && b == s.right) || (a == s.right && b == s.left)) {
                            return Err(format!("column {i}: {} terminals misreported", s.transistor));
                        }
                        if label.gate() != Some(e.gate.as_str()) {
                            return Err(format!("column {i}: label does not match {}", s.transistor));
                        }
                        if !seen.insert(s.transistor.clone()) {
                            return Err(format!("{} placed twice", s.transistor));
                        }
                        if let Some(p) = prev {
                            if p.right != s.left {
                                return Err(format!("column {i}: {} does not share diffusion with its neighbour", s.transistor));
                            }
                        }
                        prev = Some(s);
                    }
                    None => {
                        if !label.is_break() {
                            return Err(format!("column {i}: gate label without transistor"));
                        }
                        prev = None;
                    }
                }
            }
            if seen.len() != g.edge_count() {
                return Err(format!("{} row places {} of {} transistors", dev.network(), seen.len(), g.edge_count()));
            }
        }
        Ok(())
    }
}

fn realization_key(cols: &[PlacementColumn]) -> String {
    fn side(l: &Label, s: &Option<RowSlot>, rev: bool) -> String {
        match s {
            None => "0".into(),
            Some(s) if rev => format!("{}:{}:{}", s.right, l, s.left),
            Some(s) => format!("{}:{}:{}", s.left, l, s.right),
        }
    }
    let render = |rev: bool| {
        let it: Box<dyn Iterator<Item = &PlacementColumn>> = if rev { Box::new(cols.iter().rev()) } else { Box::new(cols.iter()) };
        it.map(|c| format!("{}/{}", side(&c.pu_gate, &c.pu, rev), side(&c.pd_gate, &c.pd, rev))).collect::<Vec<_>>().join(",")
    };
    render(false).min(render(true))
}

// --- search -----------------------------------------------------------------

/// One row's view of the search: edge gate ids and a bitmask of used edges.
struct Row<'g> {
    g: &'g DiffusionGraph,
    gate: Vec<usize>,
    full: u64,
}

impl<'g> Row<'g> {
    fn new(g: &'g DiffusionGraph, gate_ids: &BTreeMap<&str, usize>) -> Self {
        assert!(g.edge_count() <= 63, "networks are limited to 63 transistors");
        Row { g, gate: g.edges.iter().map(|e| gate_ids[e.gate.as_str()]).collect(), full: (1u64 << g.edge_count()) - 1 }
    }

    /// Placeable next steps: (edge, forward) that continue the current run.
    fn moves(&self, used: u64, end: Option<usize>) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for &e in self.g.ordered_edges() {
            if used & (1 << e) != 0 || !self.g.class_eligible(e, used) {
                continue;
            }
            let edge = &self.g.edges[e];
            match end {
                Some(n) if edge.a == n => out.push((e, true)),
                Some(n) if edge.b == n => out.push((e, false)),
                Some(_) => {}
                None => {
                    out.push((e, true));
                    out.push((e, false));
                }
            }
        }
        out
    }

    fn to(&self, (e, fwd): (usize, bool)) -> usize {
        let edge = &self.g.edges[e];
        if fwd {
            edge.b
        } else {
            edge.a
        }
    }

    /// Columns this row still needs: remaining transistors plus a `0`
    /// between each pair of trails they must split into.
    fn lower_bound(&self, used: u64) -> usize {
        let rest = self.full & !used;
        if rest == 0 {
            0
        } else {
            rest.count_ones() as usize + self.g.min_trails_in(rest) - 1
        }
    }
}

type Step = Option<(usize, bool)>;

struct Search<'g> {
    pu: Row<'g>,
    pd: Row<'g>,
    ngates: usize,
    width: usize,
    breaks: bool,
    limit: usize,
    cols: Vec<(Step, Step)>,
    found: Vec<Vec<(Step, Step)>>,
    seen: HashSet<String>,
    dead: HashSet<(usize, u64, u64, Option<usize>, Option<usize>)>,
    completions: usize,
}

impl<'g> Search<'g> {
    fn new(pu: &'g DiffusionGraph, pd: &'g DiffusionGraph, width: usize, breaks: bool, limit: usize) -> Self {
        let gates: BTreeSet<&str> = pu.edges.iter().chain(&pd.edges).map(|e| e.gate.as_str()).collect();
        let ids: BTreeMap<&str, usize> = gates.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        Search {
            pu: Row::new(pu, &ids),
            pd: Row::new(pd, &ids),
            ngates: ids.len(),
            width,
            breaks,
            limit,
            cols: Vec::new(),
            found: Vec::new(),
            seen: HashSet::new(),
            dead: HashSet::new(),
            completions: 0,
        }
    }

    fn bound_ok(&self, col: usize, up: u64, dn: u64) -> bool {
        let left = self.width - col;
        let (a, b) = (self.pu.lower_bound(up), self.pd.lower_bound(dn));
        if a > left || b > left {
            return false;
        }
        let mut cu = vec![0usize; self.ngates];
        let mut cd = vec![0usize; self.ngates];
        for e in 0..self.pu.gate.len() {
            if up & (1 << e) == 0 {
                cu[self.pu.gate[e]] += 1;
            }
        }
        for e in 0..self.pd.gate.len() {
            if dn & (1 << e) == 0 {
                cd[self.pd.gate[e]] += 1;
            }
        }
        let ru = (self.pu.full & !up).count_ones() as usize;
        let rd = (self.pd.full & !dn).count_ones() as usize;
        let shared: usize = cu.iter().zip(&cd).map(|(x, y)| x.min(y)).sum();
        ru + rd - shared <= left
    }

    fn run(&mut self) {
        self.dfs(0, 0, 0, None, None);
    }

    fn dfs(&mut self, col: usize, up: u64, dn: u64, eu: Option<usize>, ed: Option<usize>) {
        if self.found.len() >= self.limit {
            return;
        }
        if col == self.width {
            if up == self.pu.full && dn == self.pd.full {
                self.completions += 1;
                let key = self.raw_key();
                if self.seen.insert(key) {
                    self.found.push(self.cols.clone());
                }
            }
            return;
        }
        let state = (col, up, dn, eu, ed);
        if self.dead.contains(&state) || !self.bound_ok(col, up, dn) {
            return;
        }
        let before = self.completions;
        let mu = self.pu.moves(up, eu);
        let md = self.pd.moves(dn, ed);
        // Shared poly: same gate in both rows.
        for &u in &mu {
            for &d in &md {
                if self.pu.gate[u.0] != self.pd.gate[d.0] {
                    continue;
                }
                self.cols.push((Some(u), Some(d)));
                let (nu, nd) = (self.pu.to(u), self.pd.to(d));
                self.dfs(col + 1, up | 1 << u.0, dn | 1 << d.0, Some(nu), Some(nd));
                self.cols.pop();
            }
        }
        if self.breaks {
            for &u in &mu {
                self.cols.push((Some(u), None));
                let nu = self.pu.to(u);
                self.dfs(col + 1, up | 1 << u.0, dn, Some(nu), None);
                self.cols.pop();
            }
            for &d in &md {
                self.cols.push((None, Some(d)));
                let nd = self.pd.to(d);
                self.dfs(col + 1, up, dn | 1 << d.0, None, Some(nd));
                self.cols.pop();
            }
            // A break in both rows is pointless at either edge of the cell.
            if col > 0 && col + 1 < self.width {
                self.cols.push((None, None));
                self.dfs(col + 1, up, dn, None, None);
                self.cols.pop();
            }
        }
        if self.completions == before && self.found.len() < self.limit {
            self.dead.insert(state);
        }
    }

    fn raw_key(&self) -> String {
        realization_key(&self.columns_of(&self.cols))
    }

    fn columns_of(&self, cols: &[(Step, Step)]) -> Vec<PlacementColumn> {
        let slot = |row: &Row, s: Step| -> (Label, Option<RowSlot>) {
            match s {
                None => (Label::Break, None),
                Some((e, fwd)) => {
                    let edge = &row.g.edges[e];
                    let (l, r) = if fwd { (edge.a, edge.b) } else { (edge.b, edge.a) };
                    (
                        Label::Gate(edge.gate.clone()),
                        Some(RowSlot {
                            transistor: edge.name.clone(),
                            left: row.g.node_name(l).to_string(),
                            right: row.g.node_name(r).to_string(),
                            fins: edge.fins,
                        }),
                    )
                }
            }
        };
        cols.iter()
            .map(|&(u, d)| {
                let (pu_gate, pu) = slot(&self.pu, u);
                let (pd_gate, pd) = slot(&self.pd, d);
                PlacementColumn { pu_gate, pd_gate, pu, pd }
            })
            .collect()
    }

    fn candidates(&self) -> Vec<PlacementCandidate> {
        let g = self.pu.g;
        self.found
            .iter()
            .map(|cols| {
                let columns = self.columns_of(cols);
                let pu_sequence = GateSequence(columns.iter().map(|c| c.pu_gate.clone()).collect());
                let pd_sequence = GateSequence(columns.iter().map(|c| c.pd_gate.clone()).collect());
                PlacementCandidate {
                    cell: g.cell.clone(),
                    consistent: pu_sequence == pd_sequence && !pu_sequence.0.iter().any(Label::is_break),
                    pu_sequence,
                    pd_sequence,
                    width: columns.len(),
                    columns,
                    inputs: g.input_pins.clone(),
                    rails: [self.pu.g.rail.clone(), self.pd.g.rail.clone()],
                    score: None,
                }
            })
            .collect()
    }
}

/// Break-free placements whose gate sequence is an Euler trail of both
/// graphs, one realization per sequence (up to mirroring).
pub fn find_consistent_placements(pu: &DiffusionGraph, pd: &DiffusionGraph, limit: usize) -> Vec<PlacementCandidate> {
    if pu.edge_count() != pd.edge_count() || limit == 0 {
        return Vec::new();
    }
    let mut s = Search::new(pu, pd, pu.edge_count(), false, usize::MAX);
    s.run();
    let mut seen = HashSet::new();
    s.candidates().into_iter().filter(|c| seen.insert(c.sequence_key())).take(limit).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPlacements {
    pub candidates: Vec<PlacementCandidate>,
    /// Narrowest feasible width, reported even when it exceeds `max_width`.
    pub min_width: usize,
}

fn width_lower_bound(pu: &DiffusionGraph, pd: &DiffusionGraph) -> usize {
    let mut probe = Search::new(pu, pd, 1, true, 1);
    while !probe.bound_ok(0, 0, 0) {
        probe.width += 1;
    }
    probe.width
}

/// Narrowest width at which any placement exists.
pub fn min_generalized_width(pu: &DiffusionGraph, pd: &DiffusionGraph) -> usize {
    // Placing every transistor in its own column with a `0` after each one
    // always works, so the loop terminates.
    let cap = 2 * (pu.edge_count() + pd.edge_count());
    let mut w = width_lower_bound(pu, pd);
    while w < cap {
        let mut s = Search::new(pu, pd, w, true, 1);
        s.run();
        if !s.found.is_empty() {
            return w;
        }
        w += 1;
    }
    cap
}

/// Placements with dummy gates and diffusion breaks, from the narrowest
/// feasible width up to `max_width`, stopping after `limit` candidates.
/// Candidates come out narrowest first; each realization appears once, with
/// its mirror image removed.
pub fn find_generalized_placements(pu: &DiffusionGraph, pd: &DiffusionGraph, max_width: usize, limit: usize) -> GeneralizedPlacements {
    let min_width = min_generalized_width(pu, pd);
    let mut candidates = Vec::new();
    for w in min_width..=max_width {
        if candidates.len() >= limit {
            break;
        }
        let mut s = Search::new(pu, pd, w, true, limit - candidates.len());
        s.run();
        candidates.extend(s.candidates());
    }
    GeneralizedPlacements { candidates, min_width }
}

// --- scoring ----------------------------------------------------------------

/// Horizontal extent of each non-rail net in half column pitches: column `i`
/// has its gate at `2i+1` and its diffusion contacts at `2i` and `2i+2`.
pub fn net_spans(c: &PlacementCandidate) -> BTreeMap<String, (usize, usize)> {
    let mut spans: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut add = |net: &str, x: usize| {
        if c.rails.iter().any(|r| r == net) {
            return;
        }
        let e = spans.entry(net.to_string()).or_insert((x, x));
        e.0 = e.0.min(x);
        e.1 = e.1.max(x);
    };
    for (i, col) in c.columns.iter().enumerate() {
        if let Some(g) = col.gate() {
            add(g, 2 * i + 1);
        }
        for s in [&col.pu, &col.pd].into_iter().flatten() {
            add(&s.left, 2 * i);
            add(&s.right, 2 * i + 2);
        }
    }
    spans
}

/// Left-edge track assignment of the straps, lowest track first.
/// Returns (per-track straps, unrouted nets).
pub fn assign_tracks(c: &PlacementCandidate, tracks: usize) -> (Vec<Vec<(String, usize, usize)>>, Vec<String>) {
    let mut straps: Vec<(usize, usize, String)> = net_spans(c).into_iter().filter(|(_, (l, r))| r > l).map(|(n, (l, r))| (l, r, n)).collect();
    straps.sort();
    let mut out: Vec<Vec<(String, usize, usize)>> = vec![Vec::new(); tracks];
    let mut unrouted = Vec::new();
    for (l, r, net) in straps {
        match out.iter_mut().find(|t| t.iter().all(|&(_, a, b)| b < l || a > r)) {
            Some(t) => t.push((net, l, r)),
            None => unrouted.push(net),
        }
    }
    (out, unrouted)
}

pub fn score_pin_access(c: &PlacementCandidate, arch: &Architecture) -> PinAccess {
    let (tracks, unrouted) = assign_tracks(c, arch.routing_tracks());
    let blocked = |pin: &str, x: usize| tracks.iter().all(|t| t.iter().any(|(n, a, b)| n != pin && *a <= x && x <= *b));
    let mut per_pin = BTreeMap::new();
    for pin in &c.inputs {
        let n = c.columns.iter().enumerate().filter(|(i, col)| col.gate() == Some(pin.as_str()) && !blocked(pin, 2 * i + 1)).count();
        per_pin.insert(pin.clone(), n);
    }
    let zero_access = per_pin.iter().filter(|(_, &n)| n == 0).map(|(p, _)| p.clone()).collect();
    PinAccess { aggregate: per_pin.values().copied().min().unwrap_or(0), per_pin, zero_access, unrouted }
}

pub fn score_pin_cap(c: &PlacementCandidate, model: &PinCapModel) -> PinCap {
    let mut per_pin = BTreeMap::new();
    for pin in &c.inputs {
        let cols: Vec<usize> = c.columns.iter().enumerate().filter(|(_, col)| col.gate() == Some(pin.as_str())).map(|(i, _)| i).collect();
        let strap = match (cols.first(), cols.last()) {
            (Some(a), Some(b)) => (b - a) as f64,
            _ => 0.0,
        };
        per_pin.insert(pin.clone(), cols.len() as f64 * model.g + strap * model.m);
    }
    PinCap { total: per_pin.values().sum(), per_pin }
}

pub fn score_candidate(c: &mut PlacementCandidate, arch: &Architecture, model: &PinCapModel) {
    c.score = Some(ScoreBreakdown { width: c.width, pin_access: score_pin_access(c, arch), pin_cap: score_pin_cap(c, model) });
}

/// Ranking: narrower first, then candidates without an unreachable pin, then
/// better worst-pin access, then lower pin capacitance, then by name.
/// Unscored candidates sort last.
pub fn compare_candidates(a: &PlacementCandidate, b: &PlacementCandidate) -> Ordering {
    compare_with_keys(a, b, &(a.sequence_key(), a.realization_key()), &(b.sequence_key(), b.realization_key()))
}

fn compare_with_keys(a: &PlacementCandidate, b: &PlacementCandidate, ka: &(String, String), kb: &(String, String)) -> Ordering {
    let by_name = || ka.cmp(kb);
    let (sa, sb) = match (&a.score, &b.score) {
        (Some(x), Some(y)) => (x, y),
        (Some(_), None) => return Ordering::Less,
        (None, Some(_)) => return Ordering::Greater,
        (None, None) => return a.width.cmp(&b.width).then_with(by_name),
    };
    a.width
        .cmp(&b.width)
        .then(sa.pin_access.zero_access.is_empty().cmp(&sb.pin_access.zero_access.is_empty()).reverse())
        .then(sb.pin_access.aggregate.cmp(&sa.pin_access.aggregate))
        .then(sa.pin_cap.total.total_cmp(&sb.pin_cap.total))
        .then_with(by_name)
}

pub fn rank_candidates(candidates: Vec<PlacementCandidate>) -> Vec<PlacementCandidate> {
    let mut keyed: Vec<((String, String), PlacementCandidate)> =
        candidates.into_iter().map(|c| ((c.sequence_key(), c.realization_key()), c)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| compare_with_keys(a, b, ka, kb));
    keyed.into_iter().map(|(_, c)| c).collect()
}

/// Keeps the first (best) realization of each sequence pair.
pub fn dedup_sequences(ranked: Vec<PlacementCandidate>) -> Vec<PlacementCandidate> {
    let mut seen = HashSet::new();
    ranked.into_iter().filter(|c| seen.insert(c.sequence_key())).collect()
}

// --- cell-level driver ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaceOptions {
    /// Columns beyond the minimum to explore.
    pub extra_width: usize,
    pub limit: usize,
    pub pin_cap: PinCapModel,
}

impl Default for PlaceOptions {
    fn default() -> Self {
        PlaceOptions { extra_width: 2, limit: 20_000, pin_cap: PinCapModel::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellPlacement {
    pub pu: DiffusionGraph,
    pub pd: DiffusionGraph,
    pub min_width: usize,
    pub consistent: usize,
    /// Scored, ranked, one realization per sequence pair.
    pub ranked: Vec<PlacementCandidate>,
}

impl CellPlacement {
    pub fn best(&self) -> Option<&PlacementCandidate> {
        self.ranked.first()
    }

    /// Every candidate has an input pin that cannot be reached.
    pub fn infeasible(&self) -> bool {
        self.ranked.iter().all(PlacementCandidate::has_zero_access)
    }
}

pub fn place_cell(netlist: &CellNetlist, arch: &Architecture, opts: &PlaceOptions) -> Result<CellPlacement, GraphError> {
    let pu = build_diffusion_graph(netlist, Device::Pmos)?;
    let pd = build_diffusion_graph(netlist, Device::Nmos)?;
    let consistent = find_consistent_placements(&pu, &pd, opts.limit).len();
    let min_width = min_generalized_width(&pu, &pd);
    let mut g = find_generalized_placements(&pu, &pd, min_width + opts.extra_width, opts.limit);
    for c in &mut g.candidates {
        score_candidate(c, arch, &opts.pin_cap);
    }
    let ranked = dedup_sequences(rank_candidates(g.candidates));
    Ok(CellPlacement { pu, pd, min_width, consistent, ranked })
}

// --- layout emission --------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayoutFormat {
    Json,
    Ascii,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsupported layout format `{0}` (expected json or ascii)")]
pub struct UnsupportedFormat(pub String);

impl FromStr for LayoutFormat {
    type Err = UnsupportedFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(LayoutFormat::Json),
            "ascii" | "txt" => Ok(LayoutFormat::Ascii),
            _ => Err(UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Serialize)]
struct LayoutColumn<'a> {
    pu_gate: &'a Label,
    pd_gate: &'a Label,
    pu_diff: Option<[&'a str; 2]>,
    pd_diff: Option<[&'a str; 2]>,
    pu_fins: Option<u32>,
    pd_fins: Option<u32>,
    pu_device: Option<&'a str>,
    pd_device: Option<&'a str>,
}

#[derive(Serialize)]
struct LayoutDoc<'a> {
    cell: &'a str,
    arch: &'a Architecture,
    width: usize,
    width_nm: f64,
    height_nm: f64,
    pu_sequence: &'a GateSequence,
    pd_sequence: &'a GateSequence,
    columns: Vec<LayoutColumn<'a>>,
    scores: &'a Option<ScoreBreakdown>,
}

pub fn emit_layout(c: &PlacementCandidate, arch: &Architecture, format: LayoutFormat) -> String {
    match format {
        LayoutFormat::Json => {
            let doc = LayoutDoc {
                cell: &c.cell,
                arch,
                width: c.width,
                width_nm: c.width as f64 * arch.poly_pitch,
                height_nm: arch.cell_height_nm(),
                pu_sequence: &c.pu_sequence,
                pd_sequence: &c.pd_sequence,
                columns: c
                    .columns
                    .iter()
                    .map(|col| LayoutColumn {
                        pu_gate: &col.pu_gate,
                        pd_gate: &col.pd_gate,
                        pu_diff: col.pu.as_ref().map(|s| [s.left.as_str(), s.right.as_str()]),
                        pd_diff: col.pd.as_ref().map(|s| [s.left.as_str(), s.right.as_str()]),
                        pu_fins: col.pu.as_ref().map(|s| s.fins),
                        pd_fins: col.pd.as_ref().map(|s| s.fins),
                        pu_device: col.pu.as_ref().map(|s| s.transistor.as_str()),
                        pd_device: col.pd.as_ref().map(|s| s.transistor.as_str()),
                    })
                    .collect(),
                scores: &c.score,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("layout serializes");
            s.push('\n');
            s
        }
        LayoutFormat::Ascii => ascii(c, arch),
    }
}

/// Emits by format tag (`json` / `ascii`).
pub fn emit_layout_tagged(c: &PlacementCandidate, arch: &Architecture, tag: &str) -> Result<String, UnsupportedFormat> {
    Ok(emit_layout(c, arch, tag.parse()?))
}

/// Two diffusion rows, each drawn as a junction line (nets between poly
/// columns, `a/b` where a `0` separates two different nets) and a gate line.
fn ascii(c: &PlacementCandidate, arch: &Architecture) -> String {
    let w = c.width;
    let junctions = |dev: Device| -> Vec<String> {
        (0..=w)
            .map(|j| {
                let left = j.checked_sub(1).and_then(|i| c.columns[i].slot(dev)).map(|s| s.right.as_str());
                let right = c.columns.get(j).and_then(|col| col.slot(dev)).map(|s| s.left.as_str());
                match (left, right) {
                    (Some(a), Some(b)) if a == b => a.to_string(),
                    (Some(a), Some(b)) => format!("{a}/{b}"),
                    (Some(a), None) | (None, Some(a)) => a.to_string(),
                    (None, None) => ".".to_string(),
                }
            })
            .collect()
    };
    let (ju, jd) = (junctions(Device::Pmos), junctions(Device::Nmos));
    let gu: Vec<String> = c.columns.iter().map(|col| col.pu_gate.to_string()).collect();
    let gd: Vec<String> = c.columns.iter().map(|col| col.pd_gate.to_string()).collect();
    let cell_w = ju.iter().chain(&jd).chain(&gu).chain(&gd).map(String::len).max().unwrap_or(1) + 1;
    // Junctions sit at even slots, gates at odd slots.
    let line = |tag: &str, items: &[String], odd: bool| {
        let mut s = format!("{tag:<4}");
        for k in 0..(2 * w + 1) {
            let item = if (k % 2 == 1) == odd { items.get(k / 2).map(String::as_str).unwrap_or("") } else { "" };
            let _ = write!(s, "{item:^cell_w$}");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut s = format!("{} {} width={}\n", c.cell, arch.name, w);
    let idx: Vec<String> = (0..w).map(|i| i.to_string()).collect();
    s += &line("col", &idx, true);
    s += &line("PU", &ju, false);
    s += &line("", &gu, true);
    s += &line("", &gd, true);
    s += &line("PD", &jd, false);
    if let Some(sc) = &c.score {
        let access: Vec<String> = sc.pin_access.per_pin.iter().map(|(p, n)| format!("{p}={n}")).collect();
        let _ = writeln!(s, "pin access: {} (min {})", access.join(" "), sc.pin_access.aggregate);
        let _ = writeln!(s, "pin cap: {}", sc.pin_cap.total);
    }
    s
}
