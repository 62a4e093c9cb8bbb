//! Area, switching power, power-delay product and side-by-side comparison.
//!
//! Dynamic power is `P = Σ α·C·V²·f` over nets, where `α` is the fraction
//! of vector transitions on which the net toggled and `C` counts only the
//! transistor gate terminals the net drives. GDI diffusion inputs add no
//! capacitance in this model.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cells::DEFAULT_MAX_DEGRADATION;
use crate::generators::{ports, AdderSpec, Architecture};
use crate::cells::{CellKind, Library};
use crate::netlist::Netlist;
use crate::sim::{static_timing, Granularity, SimError, Simulator, Stimulus, Trace};

/// Delay charged per cell level when forming the power-delay product.
pub const UNIT_DELAY_NS: f64 = 1.0;

pub const CSV_HEADER: &str = "design,library,width,transistors,area_um2,logical_depth_carry,\
cell_depth_carry,toggles,power_uW,pdp_fJ,seed,cycles";

pub const REFERENCE_LABEL: &str = "published reference, SPICE-measured, not a pass/fail target";

/// Published 4-bit results: (architecture, library, area µm², power µW).
pub const REFERENCE_4BIT: [(Architecture, Library, f64, f64); 4] = [
    (Architecture::Rca, Library::Gdi, 5.4432, 46.33),
    (Architecture::Rca, Library::Cmos, 8.1648, 99.22),
    (Architecture::Cpa, Library::Gdi, 9.72, 46.25),
    (Architecture::Cpa, Library::Cmos, 29.16, 104.3),
];

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("power needs a trace of at least 2 cycles, got {0}")]
    TooFewCycles(usize),
    #[error("trace does not belong to this netlist: {0}")]
    TraceMismatch(String),
    #[error("model parameter {0} must be strictly positive")]
    NonPositive(&'static str),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub supply_voltage: f64,
    pub frequency: f64,
    /// Farads per transistor gate terminal.
    pub gate_cap_per_transistor: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel {
            supply_voltage: 1.8,
            frequency: 1e8,
            gate_cap_per_transistor: 2e-15,
        }
    }
}

impl PowerModel {
    pub fn new(supply_voltage: f64, frequency: f64, gate_cap_per_transistor: f64) -> Result<Self, MetricsError> {
        for (name, v) in [
            ("supply_voltage", supply_voltage),
            ("frequency", frequency),
            ("gate_cap_per_transistor", gate_cap_per_transistor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MetricsError::NonPositive(name));
            }
        }
        Ok(PowerModel {
            supply_voltage,
            frequency,
            gate_cap_per_transistor,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaModel {
    /// Meters.
    pub transistor_width: f64,
    /// Meters.
    pub transistor_length: f64,
}

impl Default for AreaModel {
    fn default() -> Self {
        AreaModel {
            transistor_width: 540e-9,
            transistor_length: 180e-9,
        }
    }
}

impl AreaModel {
    pub fn new(transistor_width: f64, transistor_length: f64) -> Result<Self, MetricsError> {
        if !(transistor_width > 0.0 && transistor_width.is_finite()) {
            return Err(MetricsError::NonPositive("transistor_width"));
        }
        if !(transistor_length > 0.0 && transistor_length.is_finite()) {
            return Err(MetricsError::NonPositive("transistor_length"));
        }
        Ok(AreaModel {
            transistor_width,
            transistor_length,
        })
    }

    pub fn transistor_area_um2(&self) -> f64 {
        (self.transistor_width * 1e6) * (self.transistor_length * 1e6)
    }
}

/// Active area in µm².
pub fn area(netlist: &Netlist, model: &AreaModel) -> f64 {
    netlist.transistor_count() as f64 * model.transistor_area_um2()
}

/// Gate terminals driven by each net.
pub fn gate_terminals(netlist: &Netlist) -> BTreeMap<&str, u32> {
    let mut load: BTreeMap<&str, u32> = netlist.nets.keys().map(|n| (n.as_str(), 0)).collect();
    for cell in &netlist.cells {
        for (port, net) in cell.inputs() {
            *load.entry(net).or_insert(0) += cell.kind.gate_terminals(port);
        }
    }
    load
}

/// Average dynamic power over the trace, in µW.
pub fn estimate_power(netlist: &Netlist, trace: &Trace, model: &PowerModel) -> Result<f64, MetricsError> {
    if trace.cycles < 2 {
        return Err(MetricsError::TooFewCycles(trace.cycles));
    }
    for net in trace.toggles.keys() {
        if !netlist.nets.contains_key(net) {
            return Err(MetricsError::TraceMismatch(format!("unknown net '{net}'")));
        }
    }
    if let Some(missing) = netlist.nets.keys().find(|n| !trace.toggles.contains_key(*n)) {
        return Err(MetricsError::TraceMismatch(format!("no toggle count for '{missing}'")));
    }
    let transitions = (trace.cycles - 1) as f64;
    let v2f = model.supply_voltage * model.supply_voltage * model.frequency;
    let watts: f64 = gate_terminals(netlist)
        .into_iter()
        .map(|(net, terminals)| {
            let alpha = trace.toggles[net] as f64 / transitions;
            let cap = terminals as f64 * model.gate_cap_per_transistor;
            alpha * cap * v2f
        })
        .sum();
    Ok(watts * 1e6)
}

/// "gdi", "cmos", or "mixed" depending on the cells present.
pub fn library_label(netlist: &Netlist) -> &'static str {
    let gdi = netlist.cells.iter().any(|c| c.kind == CellKind::Gdi);
    let cmos = netlist.cells.iter().any(|c| c.kind != CellKind::Gdi);
    match (gdi, cmos) {
        (true, false) => "gdi",
        (false, true) => "cmos",
        (true, true) => "mixed",
        (false, false) => "none",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub design: String,
    pub library: String,
    pub width: usize,
    pub transistor_count: u32,
    pub area_um2: f64,
    pub logical_depth_carry: Option<u32>,
    pub cell_depth_carry: Option<u32>,
    /// Deepest input-to-output path in cells; the delay proxy behind PDP.
    pub cell_critical_path: Option<u32>,
    pub logical_critical_path: Option<u32>,
    pub total_toggles: u64,
    pub power_uw: f64,
    pub pdp_fj: f64,
    pub seed: Option<u64>,
    pub cycles: usize,
    pub collapses: u64,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl MetricsReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.4},{},{},{},{:.4},{:.4},{},{}",
            self.design,
            self.library,
            self.width,
            self.transistor_count,
            self.area_um2,
            opt(self.logical_depth_carry),
            opt(self.cell_depth_carry),
            self.total_toggles,
            self.power_uw,
            self.pdp_fj,
            opt(self.seed),
            self.cycles
        )
    }

    /// Multi-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} ({}, width {}): {} transistors, {:.4} um2\n  \
             carry path C0->Cout: logical {} / cell {}; critical path: logical {} / cell {}\n  \
             {} toggles over {} cycles, {:.4} uW, PDP {:.4} fJ (cell path x {} ns proxy), {} collapses",
            self.design,
            self.library,
            self.width,
            self.transistor_count,
            self.area_um2,
            opt(self.logical_depth_carry),
            opt(self.cell_depth_carry),
            opt(self.logical_critical_path),
            opt(self.cell_critical_path),
            self.total_toggles,
            self.cycles,
            self.power_uw,
            self.pdp_fj,
            UNIT_DELAY_NS,
            self.collapses
        )
    }
}

/// Everything needed to turn a netlist and stimulus into a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    pub power: PowerModel,
    pub area: AreaModel,
    pub max_degradation: u32,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            power: PowerModel::default(),
            area: AreaModel::default(),
            max_degradation: DEFAULT_MAX_DEGRADATION,
        }
    }
}

/// Runs trace, timing, area and power for one netlist.
///
/// Generated adders report their architecture as the design name; other
/// netlists keep their own name, and width is the number of `S[i]` outputs.
pub fn measure(netlist: &Netlist, stimulus: &Stimulus, config: &MeasureConfig) -> Result<MetricsReport, MetricsError> {
    let sim = Simulator::new(netlist)?.with_max_degradation(config.max_degradation);
    let trace = sim.run_trace(stimulus)?;
    let power_uw = estimate_power(netlist, &trace, &config.power)?;

    let has_carry = netlist.net_kind(ports::CARRY_IN).is_some() && netlist.net_kind(ports::CARRY_OUT).is_some();
    let carry_depth = |g| -> Result<Option<u32>, MetricsError> {
        if !has_carry {
            return Ok(None);
        }
        Ok(static_timing(netlist, g, Some(ports::CARRY_IN))?.depth(ports::CARRY_OUT))
    };
    let logical_depth_carry = carry_depth(Granularity::Logical)?;
    let cell_depth_carry = carry_depth(Granularity::Cell)?;
    let cell_critical_path = static_timing(netlist, Granularity::Cell, None)?.critical_path();
    let logical_critical_path = static_timing(netlist, Granularity::Logical, None)?.critical_path();

    let (design, width) = match AdderSpec::from_design_name(&netlist.design_name) {
        Some(spec) => (spec.architecture.to_string(), spec.width),
        None => {
            let width = netlist
                .outputs()
                .iter()
                .filter(|o| crate::netlist::split_bus(o).0 == "S")
                .count();
            (netlist.design_name.clone(), width)
        }
    };
    let delay_ns = cell_critical_path.unwrap_or(0) as f64 * UNIT_DELAY_NS;
    Ok(MetricsReport {
        design,
        library: library_label(netlist).to_string(),
        width,
        transistor_count: netlist.transistor_count(),
        area_um2: area(netlist, &config.area),
        logical_depth_carry,
        cell_depth_carry,
        cell_critical_path,
        logical_critical_path,
        total_toggles: trace.total_toggles(),
        power_uw,
        pdp_fj: power_uw * delay_ns,
        seed: stimulus.seed,
        cycles: trace.cycles,
        collapses: trace.collapses,
    })
}

fn reference(design: &str, width: usize, library: &str) -> Option<(f64, f64)> {
    if width != 4 {
        return None;
    }
    REFERENCE_4BIT
        .iter()
        .find(|(a, l, _, _)| a.name() == design && l.name() == library)
        .map(|&(_, _, area, power)| (area, power))
}

/// CSV table sorted by (design, width, library), followed by one `# ratio`
/// line per design/width present in both libraries and `# note` lines where
/// a transistor count departs from the count implied by a published area.
pub fn compare(reports: &[MetricsReport]) -> String {
    let mut sorted: Vec<&MetricsReport> = reports.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.design, a.width, &a.library).cmp(&(&b.design, b.width, &b.library))
    });
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in &sorted {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }

    let find = |design: &str, width: usize, lib: &str| {
        sorted
            .iter()
            .find(|r| r.design == design && r.width == width && r.library == lib)
            .copied()
    };
    let mut pairs: Vec<(&str, usize)> = sorted.iter().map(|r| (r.design.as_str(), r.width)).collect();
    pairs.dedup();
    let mut trailer = Vec::new();
    for (design, width) in pairs {
        let (Some(g), Some(c)) = (find(design, width, "gdi"), find(design, width, "cmos")) else {
            continue;
        };
        let power_ratio = if c.power_uw > 0.0 {
            format!("{:.4}", g.power_uw / c.power_uw)
        } else {
            "n/a".to_string()
        };
        let mut line = format!(
            "# ratio {design}-{width} gdi/cmos: area={:.4} power={power_ratio}",
            g.area_um2 / c.area_um2
        );
        match (reference(design, width, "gdi"), reference(design, width, "cmos")) {
            (Some((ga, gp)), Some((ca, cp))) => {
                write!(line, " | {REFERENCE_LABEL}: area={:.4} power={:.4}", ga / ca, gp / cp).unwrap();
            }
            _ => write!(line, " | {REFERENCE_LABEL}: n/a").unwrap(),
        }
        trailer.push(line);
    }
    for r in &sorted {
        if let Some((ref_area, _)) = reference(&r.design, r.width, &r.library) {
            let implied = (ref_area / AreaModel::default().transistor_area_um2()).round() as u32;
            if implied != r.transistor_count {
                trailer.push(format!(
                    "# note {}-{} {}: {} transistors here; the published area {} um2 implies {}",
                    r.design, r.width, r.library, r.transistor_count, ref_area, implied
                ));
            }
        }
    }
    for line in trailer {
        writeln!(out, "{line}").unwrap();
    }
    out
}
