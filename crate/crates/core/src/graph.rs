// SPDX-License-Identifier: Apache-2.0

//! Diffusion multigraphs and Euler-trail machinery.
//!
//! One graph per network: nets are nodes, each transistor is an edge between
//! its source and drain, labeled with its gate net. A trail through the graph
//! is a left-to-right transistor order in which neighbors share a
//! source/drain region.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::netlist::{CellNetlist, Device};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("cell has no {0} transistors")]
    NoTransistors(Device),
    #[error("transistor `{0}` has source = drain (self-loop)")]
    SelfLoop(String),
    #[error("graph is not eulerian ({odd} odd-degree nodes, {components} components)")]
    NotEulerian { odd: usize, components: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    /// Index of the transistor in the source netlist.
    pub transistor: usize,
    pub name: String,
    pub a: usize,
    pub b: usize,
    pub gate: String,
    pub fins: u32,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, node: usize) -> bool {
        self.a == node || self.b == node
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionGraph {
    pub cell: String,
    pub device: Device,
    /// Supply net of this network (power for PMOS, ground for NMOS).
    pub rail: String,
    pub input_pins: Vec<String>,
    /// Sorted net names; node ids index into this.
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    order: Vec<usize>,
    class_of: Vec<usize>,
}

pub fn build_diffusion_graph(netlist: &CellNetlist, device: Device) -> Result<DiffusionGraph, GraphError> {
    let devs: Vec<_> = netlist.devices(device).collect();
    if devs.is_empty() {
        return Err(GraphError::NoTransistors(device));
    }
    let mut names = BTreeSet::new();
    for (_, t) in &devs {
        if t.source == t.drain {
            return Err(GraphError::SelfLoop(t.name.clone()));
        }
        names.insert(t.source.clone());
        names.insert(t.drain.clone());
    }
    let nodes: Vec<String> = names.into_iter().collect();
    let idx = |n: &str| nodes.binary_search_by(|x| x.as_str().cmp(n)).expect("node present");
    let edges = devs
        .iter()
        .enumerate()
        .map(|(id, (ti, t))| Edge {
            id,
            transistor: *ti,
            name: t.name.clone(),
            a: idx(&t.source),
            b: idx(&t.drain),
            gate: t.gate.clone(),
            fins: t.fins,
        })
        .collect();
    Ok(DiffusionGraph::from_parts(netlist.name.clone(), device, netlist.rail_for(device).to_string(), netlist.inputs.clone(), nodes, edges))
}

/// Odd-degree nodes and edge-bearing components of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EulerianStatus {
    Closed,
    Open { endpoints: (String, String) },
    NotEulerian { odd_nodes: Vec<String>, components: usize },
}

impl EulerianStatus {
    pub fn has_trail(&self) -> bool {
        !matches!(self, EulerianStatus::NotEulerian { .. })
    }
}

impl DiffusionGraph {
    /// Assembles a graph from raw parts. Node ids in `edges` index `nodes`,
    /// which must be sorted and unique.
    pub fn from_parts(cell: String, device: Device, rail: String, input_pins: Vec<String>, nodes: Vec<String>, edges: Vec<Edge>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by(|&x, &y| edges[x].gate.cmp(&edges[y].gate).then(x.cmp(&y)));
        let class_of = edges
            .iter()
            .map(|e| {
                let key = (e.a.min(e.b), e.a.max(e.b));
                edges.iter().find(|f| f.gate == e.gate && (f.a.min(f.b), f.a.max(f.b)) == key).map(|f| f.id).unwrap_or(e.id)
            })
            .collect();
        DiffusionGraph { cell, device, rail, input_pins, nodes, edges, order, class_of }
    }

    pub fn node_name(&self, id: usize) -> &str {
        &self.nodes[id]
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.nodes.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge ids sorted by gate label, then id.
    pub fn ordered_edges(&self) -> &[usize] {
        &self.order
    }

    /// Parallel edges with the same gate are interchangeable; this is the
    /// lowest id of `edge`'s class.
    pub fn class_of(&self, edge: usize) -> usize {
        self.class_of[edge]
    }

    /// True when `edge` is the lowest unused member of its class.
    pub fn class_eligible(&self, edge: usize, used: u64) -> bool {
        let c = self.class_of[edge];
        (c..edge).all(|e| self.class_of[e] != c || used & (1 << e) != 0)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(node)).count()
    }

    /// Connected components restricted to the edges in `mask`, as lists of node ids.
    fn components(&self, mask: u64) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        let mut touched = vec![false; self.nodes.len()];
        for e in self.edges.iter().filter(|e| mask & (1 << e.id) != 0) {
            touched[e.a] = true;
            touched[e.b] = true;
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (n, &t) in touched.iter().enumerate() {
            if t {
                let r = find(&mut parent, n);
                groups.entry(r).or_default().push(n);
            }
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    fn all_mask(&self) -> u64 {
        assert!(self.edges.len() <= 64, "networks are limited to 64 transistors");
        if self.edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.edges.len()) - 1
        }
    }

    fn degree_in(&self, node: usize, mask: u64) -> usize {
        self.edges.iter().filter(|e| mask & (1 << e.id) != 0 && e.touches(node)).count()
    }

    /// Fewest edge-disjoint trails covering the edges in `mask`:
    /// sum over components of max(1, odd/2).
    pub fn min_trails_in(&self, mask: u64) -> usize {
        self.components(mask)
            .iter()
            .map(|comp| {
                let odd = comp.iter().filter(|&&n| self.degree_in(n, mask) % 2 == 1).count();
                (odd / 2).max(1)
            })
            .sum()
    }

    pub fn min_trails(&self) -> usize {
        self.min_trails_in(self.all_mask())
    }

    pub fn eulerian_status(&self) -> EulerianStatus {
        let comps = self.components(self.all_mask());
        let odd: Vec<usize> = (0..self.nodes.len()).filter(|&n| self.degree(n) % 2 == 1).collect();
        match (comps.len(), odd.as_slice()) {
            (1, []) => EulerianStatus::Closed,
            (1, [u, v]) => EulerianStatus::Open { endpoints: (self.nodes[*u].clone(), self.nodes[*v].clone()) },
            _ => EulerianStatus::NotEulerian { odd_nodes: odd.iter().map(|&n| self.nodes[n].clone()).collect(), components: comps.len() },
        }
    }

    /// Graphviz rendering: nets as nodes, gate nets as edge labels.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph \"{}_{}\" {{\n", self.cell, self.device.network());
        for n in &self.nodes {
            let shape = if *n == self.rail { " [shape=box]" } else { "" };
            s.push_str(&format!("  \"{n}\"{shape};\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\", tooltip=\"{} nfin={}\"];\n",
                self.nodes[e.a], self.nodes[e.b], e.gate, e.name, e.fins
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// A column label: a gate net, or the break/dummy marker rendered `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Gate(String),
    Break,
}

impl Label {
    pub fn gate(&self) -> Option<&str> {
        match self {
            Label::Gate(g) => Some(g),
            Label::Break => None,
        }
    }

    pub fn is_break(&self) -> bool {
        matches!(self, Label::Break)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Gate(g) => f.write_str(g),
            Label::Break => f.write_str("0"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GateSequence(pub Vec<Label>);

impl GateSequence {
    /// Parses `(A,B,0,C)` or `A,B,0,C`. A bare `0` is a break.
    pub fn parse(s: &str) -> Self {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        GateSequence(
            inner
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| if t == "0" { Label::Break } else { Label::Gate(t.to_string()) })
                .collect(),
        )
    }

    /// Comma-joined labels with `0` for breaks.
    pub fn canonical(&self) -> String {
        self.0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        GateSequence(self.0.iter().rev().cloned().collect())
    }

    pub fn gates(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(Label::gate)
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.canonical())
    }
}

impl Serialize for GateSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Edges in walk order; `forward` means traversed from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trail {
    pub steps: Vec<(usize, bool)>,
}

/// Identity of a trail up to interchangeable parallel edges and reversal:
/// the gate-label string and the node walk.
pub type TrailKey = (Vec<String>, Vec<String>);

impl Trail {
    pub fn reversed(&self) -> Trail {
        Trail { steps: self.steps.iter().rev().map(|&(e, f)| (e, !f)).collect() }
    }

    pub fn labels<'g>(&self, g: &'g DiffusionGraph) -> Vec<&'g str> {
        self.steps.iter().map(|&(e, _)| g.edges[e].gate.as_str()).collect()
    }

    pub fn label_string(&self, g: &DiffusionGraph) -> String {
        self.labels(g).join(",")
    }

    pub fn sequence(&self, g: &DiffusionGraph) -> GateSequence {
        GateSequence(self.labels(g).into_iter().map(|l| Label::Gate(l.to_string())).collect())
    }

    /// Node ids visited, one more than the number of steps.
    pub fn nodes(&self, g: &DiffusionGraph) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        for (i, &(e, fwd)) in self.steps.iter().enumerate() {
            let edge = &g.edges[e];
            let (from, to) = if fwd { (edge.a, edge.b) } else { (edge.b, edge.a) };
            if i == 0 {
                out.push(from);
            }
            out.push(to);
        }
        out
    }

    /// Consecutive edges meet at a node and no edge repeats.
    pub fn is_valid(&self, g: &DiffusionGraph) -> bool {
        let mut seen = BTreeSet::new();
        let mut at: Option<usize> = None;
        for &(e, fwd) in &self.steps {
            let Some(edge) = g.edges.get(e) else { return false };
            if !seen.insert(e) {
                return false;
            }
            let (from, to) = if fwd { (edge.a, edge.b) } else { (edge.b, edge.a) };
            if at.is_some_and(|n| n != from) {
                return false;
            }
            at = Some(to);
        }
        true
    }

    fn oriented_key(&self, g: &DiffusionGraph) -> TrailKey {
        (self.labels(g).into_iter().map(String::from).collect(), self.nodes(g).into_iter().map(|n| g.nodes[n].clone()).collect())
    }

    pub fn key(&self, g: &DiffusionGraph) -> TrailKey {
        self.oriented_key(g).min(self.reversed().oriented_key(g))
    }

    /// Orients the trail so its gate-label string (then node walk) is the
    /// lexicographically smaller of the two directions.
    pub fn canonical(self, g: &DiffusionGraph) -> Trail {
        let r = self.reversed();
        if r.oriented_key(g) < self.oriented_key(g) {
            r
        } else {
            self
        }
    }
}

/// Exhaustive Euler-trail enumeration by backtracking, up to `limit` distinct
/// trails. Interchangeable parallel edges are not distinguished and each trail
/// is reported once, in its canonical orientation. Output is sorted.
pub fn enumerate_euler_paths(g: &DiffusionGraph, limit: usize) -> Result<Vec<Trail>, GraphError> {
    let starts: Vec<usize> = match g.eulerian_status() {
        EulerianStatus::Closed => (0..g.nodes.len()).filter(|&n| g.degree(n) > 0).collect(),
        EulerianStatus::Open { endpoints } => vec![g.node_id(&endpoints.0).expect("endpoint")],
        EulerianStatus::NotEulerian { odd_nodes, components } => return Err(GraphError::NotEulerian { odd: odd_nodes.len(), components }),
    };
    let full = g.all_mask();
    let mut found: BTreeMap<TrailKey, Trail> = BTreeMap::new();
    let mut steps = Vec::new();

    fn walk(
        g: &DiffusionGraph,
        at: usize,
        used: u64,
        full: u64,
        steps: &mut Vec<(usize, bool)>,
        found: &mut BTreeMap<TrailKey, Trail>,
        limit: usize,
    ) {
        if found.len() >= limit {
            return;
        }
        if used == full {
            let t = Trail { steps: steps.clone() }.canonical(g);
            found.entry(t.key(g)).or_insert(t);
            return;
        }
        for &e in g.ordered_edges() {
            let edge = &g.edges[e];
            if used & (1 << e) != 0 || !edge.touches(at) || !g.class_eligible(e, used) {
                continue;
            }
            steps.push((e, edge.a == at));
            walk(g, edge.other(at), used | (1 << e), full, steps, found, limit);
            steps.pop();
        }
    }

    for s in starts {
        walk(g, s, 0, full, &mut steps, &mut found, limit);
    }
    Ok(found.into_values().collect())
}

/// A partition of a graph's edges into trails, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailSet {
    pub trails: Vec<Trail>,
}

impl TrailSet {
    pub fn key(&self, g: &DiffusionGraph) -> Vec<TrailKey> {
        self.trails.iter().map(|t| t.key(g)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Provable minimum trail count for the graph.
    pub minimum: usize,
    /// Trail sets grouped by trail count, ascending.
    pub by_count: BTreeMap<usize, Vec<TrailSet>>,
}

impl Decomposition {
    pub fn is_empty(&self) -> bool {
        self.by_count.values().all(Vec::is_empty)
    }

    pub fn len(&self) -> usize {
        self.by_count.values().map(Vec::len).sum()
    }
}

/// Enumerates partitions of the edge set into at most `max_trails`
/// edge-disjoint trails, stopping after `limit` distinct partitions.
/// When `max_trails` is below the provable minimum the result is empty.
pub fn decompose_into_trails(g: &DiffusionGraph, max_trails: usize, limit: usize) -> Decomposition {
    let full = g.all_mask();
    let minimum = g.min_trails();
    let mut found: BTreeMap<Vec<TrailKey>, Vec<Trail>> = BTreeMap::new();
    if max_trails >= minimum && limit > 0 {
        let mut st = DecompState { g, full, max_trails, limit, found: &mut found, done: Vec::new() };
        st.next_trail(0);
    }
    let mut by_count: BTreeMap<usize, Vec<TrailSet>> = BTreeMap::new();
    for (_, trails) in found {
        by_count.entry(trails.len()).or_default().push(TrailSet { trails });
    }
    Decomposition { minimum, by_count }
}

struct DecompState<'a> {
    g: &'a DiffusionGraph,
    full: u64,
    max_trails: usize,
    limit: usize,
    found: &'a mut BTreeMap<Vec<TrailKey>, Vec<Trail>>,
    done: Vec<Trail>,
}

impl DecompState<'_> {
    fn next_trail(&mut self, used: u64) {
        if self.found.len() >= self.limit {
            return;
        }
        if used == self.full {
            let mut trails: Vec<Trail> = self.done.iter().cloned().map(|t| t.canonical(self.g)).collect();
            trails.sort_by_key(|t| t.key(self.g));
            let key = trails.iter().map(|t| t.key(self.g)).collect();
            self.found.entry(key).or_insert(trails);
            return;
        }
        let remaining = self.max_trails - self.done.len();
        if remaining == 0 || self.g.min_trails_in(self.full & !used) > remaining {
            return;
        }
        // The trail holding the first unused edge (in gate/id order) comes next,
        // grown forward then backward from that edge.
        let seed = *self.g.ordered_edges().iter().find(|&&e| used & (1 << e) == 0 && self.g.class_eligible(e, used)).expect("unused edge");
        for fwd in [true, false] {
            let edge = &self.g.edges[seed];
            let (from, to) = if fwd { (edge.a, edge.b) } else { (edge.b, edge.a) };
            let mut steps = std::collections::VecDeque::from([(seed, fwd)]);
            self.grow(used | (1 << seed), &mut steps, from, to, true);
        }
    }

    fn grow(&mut self, used: u64, steps: &mut std::collections::VecDeque<(usize, bool)>, head: usize, tail: usize, extending_tail: bool) {
        if self.found.len() >= self.limit {
            return;
        }
        if extending_tail {
            // Stop growing the tail and switch to the head.
            self.grow(used, steps, head, tail, false);
        } else {
            self.done.push(Trail { steps: steps.iter().copied().collect() });
            self.next_trail(used);
            self.done.pop();
        }
        let at = if extending_tail { tail } else { head };
        for &e in self.g.ordered_edges() {
            let edge = &self.g.edges[e];
            if used & (1 << e) != 0 || !edge.touches(at) || !self.g.class_eligible(e, used) {
                continue;
            }
            let next = edge.other(at);
            if extending_tail {
                steps.push_back((e, edge.a == at));
                self.grow(used | (1 << e), steps, head, next, true);
                steps.pop_back();
            } else {
                steps.push_front((e, edge.b == at));
                self.grow(used | (1 << e), steps, next, tail, false);
                steps.pop_front();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    fn graphs(name: &str) -> (DiffusionGraph, DiffusionGraph) {
        let n = library::builtin(name).unwrap().unwrap();
        (build_diffusion_graph(&n, Device::Pmos).unwrap(), build_diffusion_graph(&n, Device::Nmos).unwrap())
    }

    fn label_multiset(g: &DiffusionGraph) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for e in &g.edges {
            *m.entry(e.gate.clone()).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn aoi31_pull_up_labels() {
        let (pu, pd) = graphs("AOI31_X2");
        let expect: BTreeMap<String, usize> = [("A0", 2), ("A1", 2), ("A2", 2), ("B0", 2)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        assert_eq!(label_multiset(&pu), expect);
        assert_eq!(label_multiset(&pd), expect);
        assert!(pu.eulerian_status().has_trail());
        assert!(pd.eulerian_status().has_trail());
    }

    #[test]
    fn inverter_single_edge() {
        let (pu, _) = graphs("INV_X1");
        assert_eq!(pu.edge_count(), 1);
        assert_eq!(pu.edges[0].gate, "A");
        assert_eq!(pu.eulerian_status(), EulerianStatus::Open { endpoints: ("VDD".into(), "Y".into()) });
        let trails = enumerate_euler_paths(&pu, 10).unwrap();
        assert_eq!(trails.len(), 1);
    }

    #[test]
    fn nand2_pull_down_is_a_path() {
        let (_, pd) = graphs("NAND2_X1");
        assert_eq!(pd.nodes, vec!["VSS", "Y", "n1"]);
        assert_eq!(pd.edge_count(), 2);
        assert_eq!(pd.degree(pd.node_id("n1").unwrap()), 2);
        assert_eq!(pd.eulerian_status(), EulerianStatus::Open { endpoints: ("VSS".into(), "Y".into()) });
    }

    #[test]
    fn aoi31_reference_trails_present() {
        let (pu, pd) = graphs("AOI31_X2");
        for g in [&pu, &pd] {
            let labels: BTreeSet<String> = enumerate_euler_paths(g, 1_000_000).unwrap().iter().map(|t| t.label_string(g)).collect();
            for want in ["A0,B0,B0,A0,A1,A2,A2,A1", "B0,A0,A1,A2,A2,A1,A0,B0"] {
                let rev: Vec<&str> = want.split(',').rev().collect();
                assert!(labels.contains(want) || labels.contains(&rev.join(",")), "{} missing {want}", g.device);
            }
        }
    }

    #[test]
    fn no_reversed_duplicates() {
        let (pu, _) = graphs("AOI31_X2");
        let trails = enumerate_euler_paths(&pu, 1_000_000).unwrap();
        let keys: BTreeSet<_> = trails.iter().map(|t| t.key(&pu)).collect();
        assert_eq!(keys.len(), trails.len());
        for t in &trails {
            assert!(t.is_valid(&pu));
            assert_eq!(t.steps.len(), pu.edge_count());
            assert!(t.label_string(&pu) <= t.reversed().label_string(&pu));
        }
    }

    #[test]
    fn not_eulerian_is_an_error() {
        let (pu, _) = graphs("MXT2_X1");
        assert!(pu.eulerian_status().has_trail());
        // Star with three leaves: four odd-degree nodes.
        let g = DiffusionGraph::from_parts(
            "T".into(),
            Device::Nmos,
            "a".into(),
            vec![],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                Edge { id: 0, transistor: 0, name: "M0".into(), a: 0, b: 1, gate: "x".into(), fins: 1 },
                Edge { id: 1, transistor: 1, name: "M1".into(), a: 0, b: 2, gate: "y".into(), fins: 1 },
                Edge { id: 2, transistor: 2, name: "M2".into(), a: 0, b: 3, gate: "z".into(), fins: 1 },
            ],
        );
        assert_eq!(
            g.eulerian_status(),
            EulerianStatus::NotEulerian { odd_nodes: vec!["a".into(), "b".into(), "c".into(), "d".into()], components: 1 }
        );
        assert!(matches!(enumerate_euler_paths(&g, 10), Err(GraphError::NotEulerian { odd: 4, components: 1 })));
        assert_eq!(g.min_trails(), 2);
        let d = decompose_into_trails(&g, 1, 100);
        assert!(d.is_empty());
        assert_eq!(d.minimum, 2);
        let d = decompose_into_trails(&g, 2, 1000);
        assert!(!d.by_count[&2].is_empty());
        assert!(!d.by_count.contains_key(&1));
    }

    #[test]
    fn decomposition_matches_euler_enumeration_on_eulerian_graphs() {
        let (pu, pd) = graphs("AOI31_X2");
        for g in [&pu, &pd] {
            let euler: BTreeSet<Vec<TrailKey>> = enumerate_euler_paths(g, usize::MAX).unwrap().iter().map(|t| vec![t.key(g)]).collect();
            let dec = decompose_into_trails(g, 1, usize::MAX);
            assert_eq!(dec.minimum, 1);
            let keys: BTreeSet<Vec<TrailKey>> = dec.by_count[&1].iter().map(|s| s.key(g)).collect();
            assert_eq!(keys, euler);
        }
    }

    #[test]
    fn mxt2_pull_up_three_trail_split() {
        let (pu, _) = graphs("MXT2_X1");
        let dec = decompose_into_trails(&pu, 3, usize::MAX);
        let want: BTreeSet<String> = ["S0,ny", "S0,ns0", "A,B"].into_iter().map(String::from).collect();
        let hit = dec.by_count[&3].iter().any(|s| {
            let got: BTreeSet<String> = s
                .trails
                .iter()
                .map(|t| {
                    let fwd = t.label_string(&pu);
                    let rev = t.reversed().label_string(&pu);
                    fwd.min(rev)
                })
                .collect();
            got == want
        });
        assert!(hit);
    }

    #[test]
    fn self_loops_rejected() {
        let n = crate::netlist::parse_netlist(
            ".SUBCKT T A Y VDD VSS\nM1 Y A VDD VDD pmos nfin=1\nM2 Y A Y VSS nmos nfin=1\nM3 Y A VSS VSS nmos nfin=1\n.ENDS\n",
        )
        .unwrap();
        assert_eq!(build_diffusion_graph(&n, Device::Nmos), Err(GraphError::SelfLoop("M2".into())));
    }

    #[test]
    fn dot_output() {
        let (_, pd) = graphs("NAND2_X1");
        let dot = pd.to_dot();
        assert!(dot.starts_with("graph \"NAND2_X1_PD\" {"));
        assert!(dot.contains("\"n1\" -- \"Y\" [label=\"A\""));
    }

    #[test]
    fn sequence_parse_roundtrip() {
        let s = GateSequence::parse("(S0,ny,0,S0,ns0,0,B,A)");
        assert_eq!(s.len(), 8);
        assert_eq!(s.0[2], Label::Break);
        assert_eq!(s.to_string(), "(S0,ny,0,S0,ns0,0,B,A)");
    }
}
