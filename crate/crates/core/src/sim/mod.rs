//! Levelized zero-delay simulation with switching and degradation tracking.
//!
//! Each input vector is evaluated in a single topological pass. Toggles are
//! counted between the settled values of consecutive vectors, so glitches
//! inside a cycle are not seen.

mod stimulus;
mod timing;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::ops::Index;

use rayon::prelude::*;
use thiserror::Error;

use crate::cells::{cmos_eval, gdi_eval, CellKind, Port, DEFAULT_MAX_DEGRADATION};
use crate::logic::{LogicValue, Signal};
use crate::netlist::{validate, Diagnostic, NetKind, Netlist};

pub use stimulus::{Stimulus, StimulusError};
pub use timing::{static_timing, Granularity, TimingReport};
pub use verify::{
    verify_against_oracle, Counterexample, VerificationReport, VerifyMode, MAX_EXHAUSTIVE_WIDTH, MAX_RANDOM_WIDTH,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("netlist is not valid:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
    #[error("no value assigned to input '{0}'")]
    MissingInput(String),
    #[error("'{0}' is not a net of this netlist")]
    UnknownNet(String),
    #[error("stimulus does not match netlist: {0}")]
    StimulusMismatch(String),
    #[error("netlist does not follow the adder port convention: {0}")]
    PortConvention(String),
    #[error("{mode} verification supports widths up to {max}, got {width}")]
    TooWide {
        mode: &'static str,
        max: usize,
        width: usize,
    },
}

/// A GDI output that lost its swing and became `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegradationEvent {
    pub cycle: usize,
    pub cell: String,
    pub degradation: u32,
}

#[derive(Debug, Clone, Copy)]
struct CompiledCell {
    cell: usize,
    kind: CellKind,
    inputs: [usize; 3],
    arity: usize,
    out: usize,
}

/// A netlist prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    netlist: &'a Netlist,
    names: Vec<&'a str>,
    index: HashMap<&'a str, usize>,
    inputs: Vec<usize>,
    consts: Vec<(usize, LogicValue)>,
    order: Vec<CompiledCell>,
    max_degradation: u32,
}

/// Settled values of one evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub values: BTreeMap<String, Signal>,
    pub collapses: Vec<DegradationEvent>,
}

impl Index<&str> for Evaluation {
    type Output = Signal;

    fn index(&self, net: &str) -> &Signal {
        &self.values[net]
    }
}

impl<'a> Simulator<'a> {
    pub fn new(netlist: &'a Netlist) -> Result<Self, SimError> {
        validate(netlist).map_err(SimError::Invalid)?;
        let names: Vec<&str> = netlist.nets.keys().map(String::as_str).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let inputs = netlist.inputs().iter().map(|n| index[n]).collect();
        let consts = netlist
            .nets
            .iter()
            .filter_map(|(n, k)| match k {
                NetKind::Const0 => Some((index[n.as_str()], LogicValue::Zero)),
                NetKind::Const1 => Some((index[n.as_str()], LogicValue::One)),
                _ => None,
            })
            .collect();
        let order = netlist
            .topo_indices()
            .expect("validated netlists are acyclic")
            .into_iter()
            .map(|ci| {
                let cell = &netlist.cells[ci];
                let mut ins = [0usize; 3];
                let ports = cell.kind.input_ports();
                for (slot, port) in ports.iter().enumerate() {
                    ins[slot] = index[cell.net(*port).expect("validated port set")];
                }
                CompiledCell {
                    cell: ci,
                    kind: cell.kind,
                    inputs: ins,
                    arity: ports.len(),
                    out: index[cell.net(Port::Out).expect("validated port set")],
                }
            })
            .collect();
        Ok(Simulator {
            netlist,
            names,
            index,
            inputs,
            consts,
            order,
            max_degradation: DEFAULT_MAX_DEGRADATION,
        })
    }

    pub fn with_max_degradation(mut self, max_degradation: u32) -> Self {
        assert!(max_degradation >= 1, "max_degradation must be at least 1");
        self.max_degradation = max_degradation;
        self
    }

    pub fn max_degradation(&self) -> u32 {
        self.max_degradation
    }

    pub fn netlist(&self) -> &'a Netlist {
        self.netlist
    }

    /// Input nets in the order `eval_slots` expects them.
    pub fn input_nets(&self) -> Vec<&'a str> {
        self.inputs.iter().map(|&i| self.names[i]).collect()
    }

    pub fn net_count(&self) -> usize {
        self.names.len()
    }

    pub(crate) fn slot(&self, net: &str) -> Option<usize> {
        self.index.get(net).copied()
    }

    /// Evaluates with inputs given positionally (see [`input_nets`]).
    /// `values` is resized to one entry per net; collapses are appended
    /// as `(cell index, degradation)`.
    ///
    /// [`input_nets`]: Simulator::input_nets
    pub fn eval_slots(
        &self,
        inputs: &[LogicValue],
        values: &mut Vec<Signal>,
        collapses: &mut Vec<(usize, u32)>,
    ) {
        assert_eq!(inputs.len(), self.inputs.len());
        values.clear();
        values.resize(self.names.len(), Signal::X);
        for (&slot, &v) in self.inputs.iter().zip(inputs) {
            values[slot] = Signal::strong(v);
        }
        for &(slot, v) in &self.consts {
            values[slot] = Signal::strong(v);
        }
        for c in &self.order {
            let ins = &c.inputs[..c.arity];
            values[c.out] = match c.kind {
                CellKind::Gdi => {
                    let out = gdi_eval(
                        values[ins[0]],
                        values[ins[1]],
                        values[ins[2]],
                        self.max_degradation,
                    );
                    if let Some(d) = out.collapsed {
                        collapses.push((c.cell, d));
                    }
                    out.signal
                }
                kind => {
                    let sigs = c.inputs.map(|i| values[i]);
                    cmos_eval(kind, &sigs[..c.arity])
                }
            };
        }
    }

    pub fn evaluate(&self, assignment: &BTreeMap<String, LogicValue>) -> Result<Evaluation, SimError> {
        for net in assignment.keys() {
            if self.netlist.net_kind(net) != Some(NetKind::Input) {
                return Err(SimError::UnknownNet(net.clone()));
            }
        }
        let inputs = self
            .input_nets()
            .into_iter()
            .map(|n| {
                assignment
                    .get(n)
                    .copied()
                    .ok_or_else(|| SimError::MissingInput(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut values = Vec::new();
        let mut collapses = Vec::new();
        self.eval_slots(&inputs, &mut values, &mut collapses);
        Ok(Evaluation {
            values: self
                .names
                .iter()
                .zip(values)
                .map(|(n, s)| (n.to_string(), s))
                .collect(),
            collapses: collapses
                .into_iter()
                .map(|(ci, d)| DegradationEvent {
                    cycle: 0,
                    cell: self.netlist.cells[ci].id.clone(),
                    degradation: d,
                })
                .collect(),
        })
    }

    pub fn run_trace(&self, stimulus: &Stimulus) -> Result<Trace, SimError> {
        let columns = self.stimulus_columns(stimulus)?;
        let n = self.names.len();
        let mut toggles = vec![0u64; n];
        let mut peak = vec![0u32; n];
        let mut events = Vec::new();
        let mut prev: Vec<Signal> = Vec::new();
        let mut values = Vec::new();
        let mut inputs = vec![LogicValue::Zero; columns.len()];
        let mut collapses = Vec::new();

        for (cycle, row) in stimulus.vectors.iter().enumerate() {
            for (slot, &col) in columns.iter().enumerate() {
                inputs[slot] = LogicValue::from_bool(row[col]);
            }
            collapses.clear();
            self.eval_slots(&inputs, &mut values, &mut collapses);
            for (ci, d) in collapses.drain(..) {
                events.push(DegradationEvent {
                    cycle,
                    cell: self.netlist.cells[ci].id.clone(),
                    degradation: d,
                });
            }
            for (i, s) in values.iter().enumerate() {
                peak[i] = peak[i].max(s.degradation());
                if let Some(p) = prev.get(i) {
                    if p.value().is_known() && s.value().is_known() && p.value() != s.value() {
                        toggles[i] += 1;
                    }
                }
            }
            std::mem::swap(&mut prev, &mut values);
        }

        Ok(Trace {
            cycles: stimulus.vectors.len(),
            toggles: self.names.iter().map(|n| n.to_string()).zip(toggles).collect(),
            collapses: events.len() as u64,
            degradation_events: events,
            peak_degradation: self.names.iter().map(|n| n.to_string()).zip(peak).collect(),
        })
    }

    /// Splits the stimulus into `parts` overlapping chunks, traces them in
    /// parallel and stitches the results. Equal to [`run_trace`] on the whole
    /// stimulus.
    ///
    /// [`run_trace`]: Simulator::run_trace
    pub fn run_trace_partitioned(&self, stimulus: &Stimulus, parts: usize) -> Result<Trace, SimError> {
        self.stimulus_columns(stimulus)?;
        let chunks = stimulus.partitions(parts);
        let traces = chunks
            .par_iter()
            .map(|chunk| self.run_trace(chunk))
            .collect::<Result<Vec<_>, _>>()?;
        let mut iter = traces.into_iter();
        let mut merged = iter.next().unwrap_or_else(|| self.empty_trace());
        for t in iter {
            merged.append(t);
        }
        Ok(merged)
    }

    fn empty_trace(&self) -> Trace {
        Trace {
            cycles: 0,
            toggles: self.names.iter().map(|n| (n.to_string(), 0)).collect(),
            degradation_events: Vec::new(),
            collapses: 0,
            peak_degradation: self.names.iter().map(|n| (n.to_string(), 0)).collect(),
        }
    }

    /// For each simulator input slot, the stimulus column feeding it.
    fn stimulus_columns(&self, stimulus: &Stimulus) -> Result<Vec<usize>, SimError> {
        let pos: HashMap<&str, usize> = stimulus
            .input_nets
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        for net in &stimulus.input_nets {
            if self.netlist.net_kind(net) != Some(NetKind::Input) {
                return Err(SimError::StimulusMismatch(format!(
                    "'{net}' is not an input of {}",
                    self.netlist.design_name
                )));
            }
        }
        self.input_nets()
            .into_iter()
            .map(|n| {
                pos.get(n)
                    .copied()
                    .ok_or_else(|| SimError::StimulusMismatch(format!("input '{n}' has no column")))
            })
            .collect()
    }
}

/// Switching and degradation record of a stimulus run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub cycles: usize,
    /// Known-to-known value changes between consecutive vectors, per net.
    pub toggles: BTreeMap<String, u64>,
    pub degradation_events: Vec<DegradationEvent>,
    /// Number of GDI outputs that collapsed to `X` over the run.
    pub collapses: u64,
    pub peak_degradation: BTreeMap<String, u32>,
}

impl Trace {
    pub fn total_toggles(&self) -> u64 {
        self.toggles.values().sum()
    }

    pub fn toggles_of(&self, net: &str) -> u64 {
        self.toggles.get(net).copied().unwrap_or(0)
    }

    /// Adds a trace whose first vector repeats this trace's last one.
    pub fn append(&mut self, next: Trace) {
        if self.cycles == 0 {
            *self = next;
            return;
        }
        for (net, t) in next.toggles {
            *self.toggles.entry(net).or_insert(0) += t;
        }
        for (net, d) in next.peak_degradation {
            let e = self.peak_degradation.entry(net).or_insert(0);
            *e = (*e).max(d);
        }
        let offset = self.cycles - 1;
        for mut e in next.degradation_events.into_iter().filter(|e| e.cycle > 0) {
            e.cycle += offset;
            self.degradation_events.push(e);
        }
        self.collapses = self.degradation_events.len() as u64;
        self.cycles += next.cycles.saturating_sub(1);
    }
}

pub fn evaluate(
    netlist: &Netlist,
    assignment: &BTreeMap<String, LogicValue>,
) -> Result<Evaluation, SimError> {
    Simulator::new(netlist)?.evaluate(assignment)
}

/// Evaluates with inputs listed in canonical input order.
///
/// # Panics
///
/// On an invalid netlist or a wrong number of inputs.
pub fn evaluate_bits(netlist: &Netlist, inputs: &[bool]) -> Evaluation {
    let sim = Simulator::new(netlist).expect("valid netlist");
    let nets = sim.input_nets();
    assert_eq!(nets.len(), inputs.len(), "one bit per input net");
    let assignment = nets
        .iter()
        .zip(inputs)
        .map(|(n, &b)| (n.to_string(), LogicValue::from_bool(b)))
        .collect();
    sim.evaluate(&assignment).expect("assignment covers every input")
}

pub fn run_trace(netlist: &Netlist, stimulus: &Stimulus) -> Result<Trace, SimError> {
    Simulator::new(netlist)?.run_trace(stimulus)
}
