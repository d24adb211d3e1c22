// SPDX-License-Identifier: Apache-2.0

//! `cellsmith` command line: `synth`, `fo4` and `graph`.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 a cell has no placement
//! in which every input pin is reachable. Input errors take precedence.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::arch::{fo4_evaluate, library_report, load_architecture, size_uniform, Architecture, LibraryEntry};
use crate::config::RunConfig;
use crate::graph::{build_diffusion_graph, enumerate_euler_paths};
use crate::library;
use crate::netlist::{parse_netlist, validate_topology, CellNetlist, Device};
use crate::placer::{emit_layout, place_cell, CellPlacement, LayoutFormat, PlacementCandidate};
use crate::sizing::{self, propagate_to_complex, report_fixed, BasicSizingTable, Overrides, SizingReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cellsmith", version, about = "FinFET standard-cell sizing and placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size, place and report each cell deck.
    Synth(SynthArgs),
    /// Compare FO4 delay and power of the basic cells across architectures.
    Fo4(Fo4Args),
    /// Dump a deck's diffusion graphs.
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SynthArgs {
    /// Architecture name (9T, 7.5T) or architecture file.
    #[arg(long)]
    pub arch: Option<String>,
    #[arg(long)]
    pub min_fins: Option<u32>,
    #[arg(long)]
    pub max_fins: Option<u32>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Run configuration (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write ASCII layouts and print them.
    #[arg(long)]
    pub ascii: bool,
    /// Ranked placements to keep per cell.
    #[arg(long, conflicts_with = "all")]
    pub top: Option<usize>,
    /// Keep every ranked placement.
    #[arg(long)]
    pub all: bool,
    /// Per-cell fin overrides (TOML).
    #[arg(long)]
    pub overrides: Option<PathBuf>,
    pub decks: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Fo4Args {
    /// Comma-separated architecture names or files.
    #[arg(long, value_delimiter = ',', default_value = "9T,7.5T")]
    pub archs: Vec<String>,
    /// Directory holding `<CELL>.sp` decks; the bundled decks when absent.
    #[arg(long)]
    pub lib: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graphviz output (default: Euler status and trails as JSON).
    #[arg(long)]
    pub dot: bool,
    /// Trails listed per network in JSON mode.
    #[arg(long, default_value_t = 20)]
    pub paths: usize,
    pub deck: PathBuf,
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match cli.command {
        Command::Synth(a) => cmd_synth(&a, out, err),
        Command::Fo4(a) => cmd_fo4(&a, out, err),
        Command::Graph(a) => cmd_graph(&a, out, err),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, String> {
    match path {
        Some(p) => RunConfig::load(p).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(RunConfig::default()),
    }
}

fn read_deck(path: &Path) -> Result<CellNetlist, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_netlist(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PlacementReport<'a> {
    cell: &'a str,
    arch: &'a str,
    min_width: usize,
    consistent_paths: usize,
    ranked_total: usize,
    infeasible: bool,
    candidates: &'a [PlacementCandidate],
}

/// Everything `synth` writes for one cell.
#[derive(Debug, Clone)]
pub struct CellArtifacts {
    pub cell: String,
    pub sizing: SizingReport,
    pub placement: CellPlacement,
    /// File name to contents.
    pub files: BTreeMap<String, String>,
    pub infeasible: bool,
}

/// Balanced sizings of the basic cells: decks among the inputs take
/// precedence over the bundled ones.
fn basic_table(cfg: &RunConfig, inputs: &[CellNetlist], err: &mut dyn Write) -> BasicSizingTable {
    let reports: Vec<SizingReport> = cfg
        .basic_cells
        .iter()
        .filter_map(|name| {
            let cell = inputs.iter().find(|c| &c.name == name).cloned().or_else(|| library::builtin(name).and_then(Result::ok))?;
            match sizing::size_exhaustive(&cell, cfg.min_fins, cfg.max_fins, &cfg.model, cfg.load) {
                Ok(r) => Some(r),
                Err(e) => {
                    let _ = writeln!(err, "warning: basic cell {name}: {e}");
                    None
                }
            }
        })
        .collect();
    BasicSizingTable::from_reports(&reports)
}

/// Sizes, places and renders one cell.
pub fn synthesize_cell(
    cell: &CellNetlist,
    cfg: &RunConfig,
    arch: &Architecture,
    table: &BasicSizingTable,
    overrides: &Overrides,
    top: Option<usize>,
    ascii: bool,
) -> Result<CellArtifacts, String> {
    let mut sizing = if cfg.basic_cells.contains(&cell.name) {
        sizing::size_exhaustive(cell, cfg.min_fins, cfg.max_fins, &cfg.model, cfg.load)
            .unwrap_or_else(|e| report_fixed(cell, "fixed", vec![format!("exhaustive sizing failed: {e}; deck fins kept")], &cfg.model, cfg.load))
    } else {
        let (sized, warnings) = propagate_to_complex(cell, table, arch.fins_per_transistor);
        report_fixed(&sized, "propagated", warnings, &cfg.model, cfg.load)
    };
    if overrides.0.contains_key(&cell.name) {
        let tuned = overrides.apply(&sizing.sized).map_err(|e| e.to_string())?;
        let mut warnings = sizing.warnings.clone();
        warnings.push("hand-tuned fins applied from overrides".into());
        sizing = report_fixed(&tuned, "override", warnings, &cfg.model, cfg.load);
    }
    let placement = place_cell(&sizing.sized, arch, &cfg.place_options()).map_err(|e| format!("{}: {e}", cell.name))?;
    let infeasible = placement.infeasible();
    let shown = match top {
        Some(n) => &placement.ranked[..n.min(placement.ranked.len())],
        None => &placement.ranked[..],
    };
    let mut files = BTreeMap::new();
    files.insert(format!("{}.sizing.json", cell.name), sizing.to_json() + "\n");
    files.insert(
        format!("{}.placements.json", cell.name),
        to_json(&PlacementReport {
            cell: &cell.name,
            arch: &arch.name,
            min_width: placement.min_width,
            consistent_paths: placement.consistent,
            ranked_total: placement.ranked.len(),
            infeasible,
            candidates: shown,
        }),
    );
    if let Some(best) = placement.best() {
        files.insert(format!("{}.layout.json", cell.name), emit_layout(best, arch, LayoutFormat::Json));
        if ascii {
            files.insert(format!("{}.layout.txt", cell.name), emit_layout(best, arch, LayoutFormat::Ascii));
        }
    }
    Ok(CellArtifacts { cell: cell.name.clone(), sizing, placement, files, infeasible })
}

pub fn cmd_synth(a: &SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if a.decks.is_empty() {
        let _ = writeln!(err, "error: no cell decks given\nusage: cellsmith synth --out <DIR> [OPTIONS] <DECKS>...");
        return EXIT_INPUT;
    }
    let mut cfg = match load_config(&a.config) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Some(x) = &a.arch {
        cfg.arch = x.clone();
    }
    if let Some(x) = a.min_fins {
        cfg.min_fins = x;
    }
    if let Some(x) = a.max_fins {
        cfg.max_fins = x;
    }
    if let Some(x) = &a.overrides {
        cfg.overrides = Some(x.clone());
    }
    let arch = match cfg.resolve_arch() {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let overrides = match &cfg.overrides {
        None => Overrides::default(),
        Some(p) => match std::fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| Overrides::from_toml(&t).map_err(|e| e.to_string())) {
            Ok(o) => o,
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                return EXIT_INPUT;
            }
        },
    };
    if let Err(e) = std::fs::create_dir_all(&a.out) {
        let _ = writeln!(err, "error: {}: {e}", a.out.display());
        return EXIT_INPUT;
    }
    let top = if a.all { None } else { Some(a.top.unwrap_or(cfg.top_n)) };

    let mut code = EXIT_OK;
    let mut cells = Vec::new();
    for path in &a.decks {
        match read_deck(path) {
            Ok(c) => {
                for d in validate_topology(&c) {
                    let _ = writeln!(err, "{}: {d}", path.display());
                }
                cells.push(c);
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                code = EXIT_INPUT;
            }
        }
    }
    let table = basic_table(&cfg, &cells, err);
    let mut entries = Vec::new();
    let mut infeasible = false;
    let mut written: BTreeMap<String, ()> = BTreeMap::new();
    for cell in &cells {
        if written.insert(cell.name.clone(), ()).is_some() {
            let _ = writeln!(err, "warning: cell {} appears twice; later artifacts overwrite earlier ones", cell.name);
        }
        let art = match synthesize_cell(cell, &cfg, &arch, &table, &overrides, top, a.ascii) {
            Ok(x) => x,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                code = EXIT_INPUT;
                continue;
            }
        };
        for w in &art.sizing.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        for (name, body) in &art.files {
            if let Err(e) = std::fs::write(a.out.join(name), body) {
                let _ = writeln!(err, "error: writing {name}: {e}");
                code = EXIT_INPUT;
            }
        }
        if a.ascii {
            if let Some(t) = art.files.get(&format!("{}.layout.txt", cell.name)) {
                let _ = write!(out, "{t}");
            }
        }
        let best = art.placement.best();
        let _ = writeln!(
            out,
            "{}: sizing {} ({}), width {}, best {}{}",
            art.cell,
            art.sizing.winner,
            art.sizing.mode,
            best.map_or(0, |b| b.width),
            best.map_or_else(|| "-".into(), |b| b.pair_string()),
            if art.infeasible { " [no placement with all pins accessible]" } else { "" }
        );
        infeasible |= art.infeasible;
        entries.push(LibraryEntry {
            width_columns: best.map_or(0, |b| b.width),
            sizing_candidates: art.sizing.candidates.len(),
            placement_candidates: art.placement.ranked.len(),
            best_sequence: best.map(|b| (b.pu_sequence.to_string(), b.pd_sequence.to_string())),
            cell: art.sizing.sized.clone(),
        });
    }
    let report = library_report(&entries, &arch, &cfg.model);
    if let Err(e) = std::fs::write(a.out.join("library.json"), to_json(&report)) {
        let _ = writeln!(err, "error: writing library.json: {e}");
        code = EXIT_INPUT;
    }
    if code == EXIT_OK && infeasible {
        code = EXIT_INFEASIBLE;
    }
    code
}

#[derive(Debug, Clone, Serialize)]
pub struct Fo4Row {
    pub cell: String,
    pub arch: String,
    pub fins: u32,
    pub delay: f64,
    pub power: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fo4Verdict {
    /// Architecture with more fins per transistor.
    pub taller: String,
    pub shorter: String,
    /// Every cell is slower on the shorter architecture.
    pub shorter_slower: bool,
    /// Every cell draws more power on the taller architecture.
    pub taller_more_power: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fo4Report {
    pub rows: Vec<Fo4Row>,
    pub missing: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Fo4Verdict>,
}

/// FO4 table of `cells` on every architecture, each cell sized uniformly
/// at the architecture's fin count.
pub fn fo4_compare(cells: &[CellNetlist], archs: &[Architecture], model: &sizing::DelayModel) -> Result<Fo4Report, String> {
    let mut rows = Vec::new();
    for c in cells {
        for a in archs {
            let r = fo4_evaluate(&size_uniform(c, a.fins_per_transistor), a, model).map_err(|e| format!("{}: {e}", c.name))?;
            rows.push(Fo4Row { cell: c.name.clone(), arch: a.name.clone(), fins: a.fins_per_transistor, delay: r.delay, power: r.power_proxy });
        }
    }
    let verdict = if archs.len() == 2 && archs[0].fins_per_transistor != archs[1].fins_per_transistor {
        let (t, s) = if archs[0].fins_per_transistor > archs[1].fins_per_transistor { (&archs[0], &archs[1]) } else { (&archs[1], &archs[0]) };
        let pick = |cell: &str, arch: &str| rows.iter().find(|r| r.cell == cell && r.arch == arch).expect("row");
        Some(Fo4Verdict {
            taller: t.name.clone(),
            shorter: s.name.clone(),
            shorter_slower: cells.iter().all(|c| pick(&c.name, &s.name).delay > pick(&c.name, &t.name).delay),
            taller_more_power: cells.iter().all(|c| pick(&c.name, &t.name).power > pick(&c.name, &s.name).power),
        })
    } else {
        None
    };
    Ok(Fo4Report { rows, missing: Vec::new(), verdict })
}

pub fn cmd_fo4(a: &Fo4Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match load_config(&a.config) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Err(e) = cfg.model.validate() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    let mut archs = Vec::new();
    for name in &a.archs {
        match load_architecture(name) {
            Ok(x) => archs.push(x),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
        }
    }
    let mut cells = Vec::new();
    let mut missing = Vec::new();
    for name in &cfg.basic_cells {
        let parsed = match &a.lib {
            Some(dir) => {
                let p = dir.join(format!("{name}.sp"));
                if p.is_file() {
                    Some(read_deck(&p))
                } else {
                    None
                }
            }
            None => library::builtin(name).map(|r| r.map_err(|e| format!("{name}:{e}"))),
        };
        match parsed {
            Some(Ok(c)) => cells.push(c),
            Some(Err(e)) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            None => {
                let _ = writeln!(err, "warning: basic cell {name} not found; table is partial");
                missing.push(name.clone());
            }
        }
    }
    if cells.is_empty() {
        let _ = writeln!(err, "error: none of the basic cells were found");
        return EXIT_INPUT;
    }
    let mut report = match fo4_compare(&cells, &archs, &cfg.model) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    report.missing = missing;
    let body = to_json(&report);
    match &a.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = write!(out, "{body}");
        }
    }
    EXIT_OK
}

#[derive(Serialize)]
struct NetworkDump {
    network: &'static str,
    status: crate::graph::EulerianStatus,
    min_trails: usize,
    trails: Vec<String>,
}

pub fn cmd_graph(a: &GraphArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cell = match read_deck(&a.deck) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut dumps = Vec::new();
    for d in [Device::Pmos, Device::Nmos] {
        let g = match build_diffusion_graph(&cell, d) {
            Ok(g) => g,
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", a.deck.display());
                return EXIT_INPUT;
            }
        };
        if a.dot {
            let _ = write!(out, "{}", g.to_dot());
            continue;
        }
        let trails = enumerate_euler_paths(&g, a.paths).map(|ts| ts.iter().map(|t| t.sequence(&g).to_string()).collect()).unwrap_or_default();
        dumps.push(NetworkDump { network: d.network(), status: g.eulerian_status(), min_trails: g.min_trails(), trails });
    }
    if !a.dot {
        let _ = write!(out, "{}", to_json(&dumps));
    }
    EXIT_OK
}
