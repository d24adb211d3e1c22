// SPDX-License-Identifier: Apache-2.0

//! Transistor-level cell netlists.
//!
//! Decks are a strict SPICE subset: one flat `.SUBCKT ... .ENDS` block whose
//! body holds only MOSFET cards of the form
//!
//! ```text
//! M<name> <drain> <gate> <source> <bulk> <model> nfin=<k> [key=value ...]
//! ```
//!
//! Device polarity comes from the model name (`pmos` / `nmos`, case-insensitive).
//! The bulk terminal is parsed and dropped. Pin directions come from a
//! Calibre-style `*.PININFO` comment when present, and are otherwise inferred:
//! `VDD`/`VPWR`/`VCC` is power, `VSS`/`GND`/`VGND` is ground, pins touching a
//! source/drain are outputs and the remaining pins are inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const POWER_NAMES: &[&str] = &["VDD", "VPWR", "VCC"];
const GROUND_NAMES: &[&str] = &["VSS", "GND", "VGND"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Device {
    Pmos,
    Nmos,
}

impl Device {
    /// Suffix used in sizing labels such as `(2p, 3n)`.
    pub fn letter(self) -> char {
        match self {
            Device::Pmos => 'p',
            Device::Nmos => 'n',
        }
    }

    pub fn network(self) -> &'static str {
        match self {
            Device::Pmos => "PU",
            Device::Nmos => "PD",
        }
    }
}

impl fmt::Display for Device {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Device::Pmos => write!(f, "PMOS"),
            Device::Nmos => write!(f, "NMOS"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transistor {
    pub name: String,
    pub device: Device,
    pub gate: String,
    pub source: String,
    pub drain: String,
    pub fins: u32,
}

impl Transistor {
    pub fn touches_diffusion(&self, net: &str) -> bool {
        self.source == net || self.drain == net
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellNetlist {
    pub name: String,
    pub nets: BTreeSet<String>,
    pub power: String,
    pub ground: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub internal: BTreeSet<String>,
    pub transistors: Vec<Transistor>,
}

impl CellNetlist {
    pub fn is_rail(&self, net: &str) -> bool {
        net == self.power || net == self.ground
    }

    pub fn rail_for(&self, device: Device) -> &str {
        match device {
            Device::Pmos => &self.power,
            Device::Nmos => &self.ground,
        }
    }

    pub fn is_pin(&self, net: &str) -> bool {
        self.inputs.iter().any(|p| p == net) || self.outputs.iter().any(|p| p == net)
    }

    pub fn devices(&self, device: Device) -> impl Iterator<Item = (usize, &Transistor)> {
        self.transistors.iter().enumerate().filter(move |(_, t)| t.device == device)
    }

    /// Checks the structural invariants the parser guarantees. Useful for
    /// netlists assembled in code.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        let mut claim = |net: &String| -> Result<(), String> {
            if !seen.insert(net.clone()) {
                return Err(format!("net `{net}` has more than one role"));
            }
            Ok(())
        };
        claim(&self.power)?;
        claim(&self.ground)?;
        for n in self.inputs.iter().chain(&self.outputs).chain(&self.internal) {
            claim(n)?;
        }
        if seen != self.nets {
            return Err("net roles do not partition the net set".into());
        }
        for t in &self.transistors {
            for n in [&t.gate, &t.source, &t.drain] {
                if !self.nets.contains(n) {
                    return Err(format!("transistor {} references unknown net `{n}`", t.name));
                }
            }
            if t.fins < 1 {
                return Err(format!("transistor {}: fins < 1", t.name));
            }
        }
        for d in [Device::Pmos, Device::Nmos] {
            if self.devices(d).next().is_none() {
                return Err(format!("no {d} transistors"));
            }
        }
        Ok(())
    }

    /// Renders the netlist back into the deck grammar accepted by [`parse_netlist`].
    pub fn unparse(&self) -> String {
        let mut out = String::new();
        let pins: Vec<&str> =
            self.inputs.iter().chain(&self.outputs).map(String::as_str).chain([self.power.as_str(), self.ground.as_str()]).collect();
        out.push_str(&format!(".SUBCKT {} {}\n", self.name, pins.join(" ")));
        let mut info: Vec<String> = Vec::new();
        info.extend(self.inputs.iter().map(|p| format!("{p}:I")));
        info.extend(self.outputs.iter().map(|p| format!("{p}:O")));
        info.push(format!("{}:P", self.power));
        info.push(format!("{}:G", self.ground));
        out.push_str(&format!("*.PININFO {}\n", info.join(" ")));
        for t in &self.transistors {
            let (bulk, model) = match t.device {
                Device::Pmos => (&self.power, "pmos"),
                Device::Nmos => (&self.ground, "nmos"),
            };
            out.push_str(&format!("{} {} {} {} {} {} nfin={}\n", t.name, t.drain, t.gate, t.source, bulk, model, t.fins));
        }
        out.push_str(".ENDS\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown device model `{0}` (expected a name containing pmos or nmos)")]
    UnknownModel(String),
    #[error("undeclared pin `{0}`")]
    UndeclaredPin(String),
    #[error("missing nfin on transistor `{0}`")]
    MissingFins(String),
    #[error("fins < 1 on transistor `{0}`")]
    FinsBelowOne(String),
    #[error("empty subcircuit")]
    EmptySubcircuit,
    #[error("parasitic element `{0}` is not supported")]
    Parasitic(String),
    #[error("subcircuit instance `{0}` is not supported (decks must be flat)")]
    Hierarchy(String),
    #[error("no {0} rail among the subcircuit pins")]
    MissingRail(&'static str),
    #[error("cell has no {0} transistors")]
    MissingPolarity(Device),
    #[error("duplicate transistor name `{0}`")]
    DuplicateTransistor(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// Where each transistor and net first appeared in the deck.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub transistors: Vec<(usize, usize)>,
    pub nets: BTreeMap<String, (usize, usize)>,
}

pub fn parse_netlist(text: &str) -> Result<CellNetlist, ParseError> {
    parse_netlist_with_spans(text).map(|(n, _)| n)
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                toks.push(Tok { text: &line[s..i], col: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        toks.push(Tok { text: &line[s..], col: s + 1 });
    }
    toks
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PinRole {
    Input,
    Output,
    Power,
    Ground,
}

pub fn parse_netlist_with_spans(text: &str) -> Result<(CellNetlist, SourceMap), ParseError> {
    let err = |line: usize, col: usize, kind| ParseError { line, col, kind };

    let mut header: Option<(String, Vec<(String, usize, usize)>)> = None;
    let mut pininfo: Option<Vec<(String, PinRole, usize, usize)>> = None;
    let mut closed = false;
    let mut transistors: Vec<Transistor> = Vec::new();
    let mut spans = SourceMap::default();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let toks = tokenize(raw);
        let Some(first) = toks.first() else { continue };
        let head = first.text;

        if head.len() >= 9 && head[..9].eq_ignore_ascii_case("*.PININFO") {
            if head.len() > 9 {
                return Err(err(lineno, first.col, ParseErrorKind::Syntax("malformed *.PININFO".into())));
            }
            let mut roles = Vec::new();
            for t in &toks[1..] {
                let Some((pin, role)) = t.text.rsplit_once(':') else {
                    return Err(err(lineno, t.col, ParseErrorKind::Syntax(format!("expected PIN:DIR, got `{}`", t.text))));
                };
                let role = match role.to_ascii_uppercase().as_str() {
                    "I" => PinRole::Input,
                    "O" | "B" => PinRole::Output,
                    "P" => PinRole::Power,
                    "G" => PinRole::Ground,
                    _ => return Err(err(lineno, t.col, ParseErrorKind::Syntax(format!("unknown pin direction `{role}`")))),
                };
                roles.push((pin.to_string(), role, lineno, t.col));
            }
            pininfo.get_or_insert_with(Vec::new).extend(roles);
            continue;
        }
        if head.starts_with('*') {
            continue;
        }

        let lower = head.to_ascii_lowercase();
        if lower == ".subckt" {
            if header.is_some() {
                return Err(err(lineno, first.col, ParseErrorKind::Syntax("only one .SUBCKT per deck".into())));
            }
            let Some(name) = toks.get(1) else {
                return Err(err(lineno, first.col, ParseErrorKind::Syntax(".SUBCKT needs a name".into())));
            };
            let pins = toks[2..].iter().map(|t| (t.text.to_string(), lineno, t.col)).collect::<Vec<_>>();
            for p in &pins {
                if p.0.contains('=') {
                    return Err(err(lineno, p.2, ParseErrorKind::Syntax("subcircuit parameters are not supported".into())));
                }
            }
            header = Some((name.text.to_string(), pins));
            continue;
        }
        if lower == ".ends" {
            if header.is_none() || closed {
                return Err(err(lineno, first.col, ParseErrorKind::Syntax(".ENDS without .SUBCKT".into())));
            }
            closed = true;
            continue;
        }
        if lower == ".end" && closed {
            continue;
        }
        if lower.starts_with('.') {
            return Err(err(lineno, first.col, ParseErrorKind::Syntax(format!("unsupported directive `{head}`"))));
        }
        if header.is_none() || closed {
            return Err(err(lineno, first.col, ParseErrorKind::Syntax("element card outside .SUBCKT".into())));
        }
        match lower.as_bytes()[0] {
            b'm' => {}
            b'r' | b'c' | b'l' => return Err(err(lineno, first.col, ParseErrorKind::Parasitic(head.to_string()))),
            b'x' => return Err(err(lineno, first.col, ParseErrorKind::Hierarchy(head.to_string()))),
            _ => return Err(err(lineno, first.col, ParseErrorKind::Syntax(format!("unsupported element `{head}`")))),
        }

        if toks.len() < 6 {
            let col = toks.last().map(|t| t.col + t.text.len()).unwrap_or(1);
            return Err(err(lineno, col, ParseErrorKind::Syntax("MOSFET card needs drain gate source bulk model".into())));
        }
        let model = &toks[5];
        let mlow = model.text.to_ascii_lowercase();
        let device = if mlow.contains("pmos") {
            Device::Pmos
        } else if mlow.contains("nmos") {
            Device::Nmos
        } else {
            return Err(err(lineno, model.col, ParseErrorKind::UnknownModel(model.text.to_string())));
        };
        let mut fins = None;
        for t in &toks[6..] {
            let Some((k, v)) = t.text.split_once('=') else {
                return Err(err(lineno, t.col, ParseErrorKind::Syntax(format!("expected key=value, got `{}`", t.text))));
            };
            if k.eq_ignore_ascii_case("nfin") {
                let n: i64 = v.parse().map_err(|_| err(lineno, t.col, ParseErrorKind::Syntax(format!("nfin must be an integer, got `{v}`"))))?;
                if n < 1 {
                    return Err(err(lineno, t.col, ParseErrorKind::FinsBelowOne(head.to_string())));
                }
                fins = Some(u32::try_from(n).map_err(|_| err(lineno, t.col, ParseErrorKind::Syntax(format!("nfin out of range: {n}"))))?);
            }
        }
        let Some(fins) = fins else {
            return Err(err(lineno, first.col, ParseErrorKind::MissingFins(head.to_string())));
        };
        if transistors.iter().any(|t| t.name == head) {
            return Err(err(lineno, first.col, ParseErrorKind::DuplicateTransistor(head.to_string())));
        }
        for t in &toks[1..4] {
            spans.nets.entry(t.text.to_string()).or_insert((lineno, t.col));
        }
        spans.transistors.push((lineno, first.col));
        transistors.push(Transistor {
            name: head.to_string(),
            device,
            drain: toks[1].text.to_string(),
            gate: toks[2].text.to_string(),
            source: toks[3].text.to_string(),
            fins,
        });
    }

    let Some((name, pins)) = header else {
        return Err(err(last_line.max(1), 1, ParseErrorKind::Syntax("no .SUBCKT found".into())));
    };
    if !closed {
        return Err(err(last_line.max(1), 1, ParseErrorKind::Syntax("missing .ENDS".into())));
    }
    if transistors.is_empty() {
        let (line, col) = pins.first().map(|p| (p.1, 1)).unwrap_or((1, 1));
        return Err(err(line, col, ParseErrorKind::EmptySubcircuit));
    }
    for (p, line, col) in &pins {
        spans.nets.entry(p.clone()).or_insert((*line, *col));
    }

    let mut roles: Vec<(String, PinRole)> = Vec::new();
    match pininfo {
        Some(info) => {
            for (pin, role, line, col) in &info {
                if !pins.iter().any(|p| &p.0 == pin) {
                    return Err(err(*line, *col, ParseErrorKind::UndeclaredPin(pin.clone())));
                }
                if !roles.iter().any(|(p, _)| p == pin) {
                    roles.push((pin.clone(), *role));
                }
            }
            for (pin, line, col) in &pins {
                if !roles.iter().any(|(p, _)| p == pin) {
                    return Err(err(*line, *col, ParseErrorKind::UndeclaredPin(pin.clone())));
                }
            }
            // Keep subcircuit pin order.
            roles.sort_by_key(|(p, _)| pins.iter().position(|q| &q.0 == p));
        }
        None => {
            for (pin, _, _) in &pins {
                let role = if POWER_NAMES.contains(&pin.as_str()) {
                    PinRole::Power
                } else if GROUND_NAMES.contains(&pin.as_str()) {
                    PinRole::Ground
                } else if transistors.iter().any(|t| t.touches_diffusion(pin)) {
                    PinRole::Output
                } else {
                    PinRole::Input
                };
                roles.push((pin.clone(), role));
            }
        }
    }

    let header_pos = |pin: &str| pins.iter().find(|p| p.0 == pin).map(|p| (p.1, p.2)).unwrap_or((1, 1));
    let pick = |role: PinRole, what: &'static str| -> Result<String, ParseError> {
        let found: Vec<&String> = roles.iter().filter(|(_, r)| *r == role).map(|(p, _)| p).collect();
        match found.as_slice() {
            [one] => Ok((*one).clone()),
            [] => Err(err(pins.first().map(|p| p.1).unwrap_or(1), 1, ParseErrorKind::MissingRail(what))),
            [_, second, ..] => {
                let (l, c) = header_pos(second);
                Err(err(l, c, ParseErrorKind::Syntax(format!("more than one {what} rail"))))
            }
        }
    };
    let power = pick(PinRole::Power, "power")?;
    let ground = pick(PinRole::Ground, "ground")?;
    let inputs: Vec<String> = roles.iter().filter(|(_, r)| *r == PinRole::Input).map(|(p, _)| p.clone()).collect();
    let outputs: Vec<String> = roles.iter().filter(|(_, r)| *r == PinRole::Output).map(|(p, _)| p.clone()).collect();

    let mut nets: BTreeSet<String> = pins.iter().map(|p| p.0.clone()).collect();
    for t in &transistors {
        nets.insert(t.gate.clone());
        nets.insert(t.source.clone());
        nets.insert(t.drain.clone());
    }
    let internal = nets.iter().filter(|n| !pins.iter().any(|p| &p.0 == *n)).cloned().collect();

    for d in [Device::Pmos, Device::Nmos] {
        if !transistors.iter().any(|t| t.device == d) {
            return Err(err(last_line, 1, ParseErrorKind::MissingPolarity(d)));
        }
    }

    Ok((CellNetlist { name, nets, power, ground, inputs, outputs, internal, transistors }, spans))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    FloatingNet { net: String },
    SourceEqualsDrain { transistor: usize, name: String },
    OutputNotFullyDriven { net: String, missing: Device },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::FloatingNet { net } => write!(f, "warning: floating net `{net}`"),
            Diagnostic::SourceEqualsDrain { name, .. } => {
                write!(f, "warning: transistor `{name}` has source = drain")
            }
            Diagnostic::OutputNotFullyDriven { net, missing } => {
                write!(f, "warning: output `{net}` is not driven by any {missing} device")
            }
        }
    }
}

/// Structural lint. Pass-gate and other non-complementary structures are legal.
pub fn validate_topology(netlist: &CellNetlist) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for net in &netlist.nets {
        if netlist.is_rail(net) {
            continue;
        }
        let diff_refs = netlist.transistors.iter().map(|t| (t.source == *net) as usize + (t.drain == *net) as usize).sum::<usize>();
        let gate_refs = netlist.transistors.iter().filter(|t| t.gate == *net).count();
        let dangling_internal = !netlist.is_pin(net) && diff_refs == 1 && gate_refs == 0;
        if diff_refs + gate_refs == 0 || dangling_internal {
            out.push(Diagnostic::FloatingNet { net: net.clone() });
        }
    }
    for (i, t) in netlist.transistors.iter().enumerate() {
        if t.source == t.drain {
            out.push(Diagnostic::SourceEqualsDrain { transistor: i, name: t.name.clone() });
        }
    }
    for o in &netlist.outputs {
        for d in [Device::Pmos, Device::Nmos] {
            if !netlist.devices(d).any(|(_, t)| t.touches_diffusion(o)) {
                out.push(Diagnostic::OutputNotFullyDriven { net: o.clone(), missing: d });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAND2: &str = "\
.SUBCKT NAND2 A B Y VDD VSS
MP0 Y A VDD VDD pmos nfin=2
MP1 Y B VDD VDD pmos nfin=2
MN0 Y A n1 VSS nmos nfin=2
MN1 n1 B VSS VSS nmos nfin=2
.ENDS
";

    #[test]
    fn nand2_fields() {
        let n = parse_netlist(NAND2).unwrap();
        assert_eq!(n.name, "NAND2");
        assert_eq!(n.power, "VDD");
        assert_eq!(n.ground, "VSS");
        assert_eq!(n.inputs, vec!["A", "B"]);
        assert_eq!(n.outputs, vec!["Y"]);
        assert_eq!(n.internal.iter().collect::<Vec<_>>(), vec!["n1"]);
        assert_eq!(n.devices(Device::Pmos).count(), 2);
        assert_eq!(n.devices(Device::Nmos).count(), 2);
        let mn0 = &n.transistors[2];
        assert_eq!((mn0.drain.as_str(), mn0.gate.as_str(), mn0.source.as_str()), ("Y", "A", "n1"));
        assert!(n.transistors.iter().all(|t| t.fins == 2));
        assert!(n.check_invariants().is_ok());
        assert!(validate_topology(&n).is_empty());
    }

    #[test]
    fn inverter_is_two_devices() {
        let n = parse_netlist(".subckt INV A Y VDD VSS\nM1 Y A VDD VDD PMOS_RVT nfin=1\nM2 Y A VSS VSS nmos_rvt nfin=1\n.ends\n").unwrap();
        assert_eq!(n.transistors.len(), 2);
        assert_eq!(n.transistors[0].device, Device::Pmos);
    }

    #[test]
    fn rejects_zero_fins() {
        let e = parse_netlist(&NAND2.replace("MN1 n1 B VSS VSS nmos nfin=2", "MN1 n1 B VSS VSS nmos nfin=0")).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::FinsBelowOne("MN1".into()));
        assert_eq!((e.line, e.col), (5, 23));
        assert!(e.to_string().contains("fins < 1"));
    }

    #[test]
    fn error_paths() {
        let missing = parse_netlist(&NAND2.replace(" nfin=2\nMN1", "\nMN1")).unwrap_err();
        assert_eq!(missing.kind, ParseErrorKind::MissingFins("MN0".into()));

        let model = parse_netlist(&NAND2.replace("MP1 Y B VDD VDD pmos", "MP1 Y B VDD VDD xfet")).unwrap_err();
        assert_eq!(model.kind, ParseErrorKind::UnknownModel("xfet".into()));
        assert_eq!((model.line, model.col), (3, 17));

        let empty = parse_netlist(".SUBCKT E A Y VDD VSS\n.ENDS\n").unwrap_err();
        assert_eq!(empty.kind, ParseErrorKind::EmptySubcircuit);

        let rc = parse_netlist(&NAND2.replace(".ENDS", "R1 Y n1 1k\n.ENDS")).unwrap_err();
        assert!(matches!(rc.kind, ParseErrorKind::Parasitic(_)));

        let x = parse_netlist(&NAND2.replace(".ENDS", "X1 A Y INV\n.ENDS")).unwrap_err();
        assert!(matches!(x.kind, ParseErrorKind::Hierarchy(_)));

        let undeclared =
            parse_netlist(&NAND2.replace(".SUBCKT NAND2 A B Y VDD VSS", ".SUBCKT NAND2 A B Y VDD VSS\n*.PININFO A:I B:I C:I Y:O VDD:P VSS:G"))
                .unwrap_err();
        assert_eq!(undeclared.kind, ParseErrorKind::UndeclaredPin("C".into()));

        let partial =
            parse_netlist(&NAND2.replace(".SUBCKT NAND2 A B Y VDD VSS", ".SUBCKT NAND2 A B Y VDD VSS\n*.PININFO A:I Y:O VDD:P VSS:G")).unwrap_err();
        assert_eq!(partial.kind, ParseErrorKind::UndeclaredPin("B".into()));

        let unterminated = parse_netlist(&NAND2.replace(".ENDS\n", "")).unwrap_err();
        assert!(matches!(unterminated.kind, ParseErrorKind::Syntax(_)));

        let only_n = parse_netlist(".SUBCKT P A Y VDD VSS\nM1 Y A VSS VSS nmos nfin=1\n.ENDS\n").unwrap_err();
        assert_eq!(only_n.kind, ParseErrorKind::MissingPolarity(Device::Pmos));
    }

    #[test]
    fn pininfo_overrides_inference() {
        let deck = ".SUBCKT T A Y PWR GNDX\n*.PININFO A:I Y:O PWR:P GNDX:G\nM1 Y A PWR PWR pmos nfin=1\nM2 Y A GNDX GNDX nmos nfin=1\n.ENDS\n";
        let n = parse_netlist(deck).unwrap();
        assert_eq!((n.power.as_str(), n.ground.as_str()), ("PWR", "GNDX"));
        assert_eq!(parse_netlist(&n.unparse()).unwrap(), n);
    }

    #[test]
    fn net_names_are_case_sensitive() {
        let deck = ".SUBCKT T A a Y VDD VSS\nM1 Y A VDD VDD pmos nfin=1\nM2 Y a VSS VSS nmos nfin=1\n.ENDS\n";
        let n = parse_netlist(deck).unwrap();
        assert_eq!(n.inputs, vec!["A", "a"]);
    }

    #[test]
    fn floating_and_degenerate_diagnostics() {
        let mut n = parse_netlist(NAND2).unwrap();
        n.nets.insert("spare".into());
        n.internal.insert("spare".into());
        assert_eq!(validate_topology(&n), vec![Diagnostic::FloatingNet { net: "spare".into() }]);

        let deg = parse_netlist(&NAND2.replace("MN1 n1 B VSS", "MN1 n1 B n1").replace("MN0 Y A n1", "MN0 Y A VSS")).unwrap();
        let d = validate_topology(&deg);
        assert!(d.iter().any(|d| matches!(d, Diagnostic::SourceEqualsDrain { name, .. } if name == "MN1")));
    }

    #[test]
    fn spans_point_at_cards() {
        let (_, spans) = parse_netlist_with_spans(NAND2).unwrap();
        assert_eq!(spans.transistors[0], (2, 1));
        assert_eq!(spans.nets["n1"], (4, 9));
    }
}
