//! Cell templates: the GDI primitive, the static CMOS gates, their
//! switch-level evaluation, and the mapping of logical gates onto cells.

use std::fmt;
use std::str::FromStr;

use crate::logic::{eval_gate, GateKind, LogicValue, Signal};
use crate::netlist::{Netlist, NetlistBuilder};

/// Degradation beyond which a GDI output collapses to `X`.
pub const DEFAULT_MAX_DEGRADATION: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Gdi,
    CmosAnd2,
    CmosOr2,
    CmosXor2,
    CmosNot,
}

/// Cell terminals. Declaration order is the canonical order on a cell line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    G,
    P,
    N,
    A,
    B,
    Out,
}

impl Port {
    pub fn key(self) -> &'static str {
        match self {
            Port::G => "g",
            Port::P => "p",
            Port::N => "n",
            Port::A => "a",
            Port::B => "b",
            Port::Out => "out",
        }
    }

    pub fn from_key(key: &str) -> Option<Port> {
        Some(match key {
            "g" => Port::G,
            "p" => Port::P,
            "n" => Port::N,
            "a" => Port::A,
            "b" => Port::B,
            "out" => Port::Out,
            _ => return None,
        })
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Static facts about one cell kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellTemplate {
    pub kind: CellKind,
    pub transistor_count: u32,
    pub restoring: bool,
}

impl CellKind {
    pub const ALL: [CellKind; 5] = [
        CellKind::Gdi,
        CellKind::CmosAnd2,
        CellKind::CmosOr2,
        CellKind::CmosXor2,
        CellKind::CmosNot,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            CellKind::Gdi => "GDI",
            CellKind::CmosAnd2 => "CMOS_AND2",
            CellKind::CmosOr2 => "CMOS_OR2",
            CellKind::CmosXor2 => "CMOS_XOR2",
            CellKind::CmosNot => "CMOS_NOT",
        }
    }

    pub fn from_keyword(s: &str) -> Option<CellKind> {
        CellKind::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Input ports followed by `Out`.
    pub fn ports(self) -> &'static [Port] {
        match self {
            CellKind::Gdi => &[Port::G, Port::P, Port::N, Port::Out],
            CellKind::CmosAnd2 | CellKind::CmosOr2 | CellKind::CmosXor2 => {
                &[Port::A, Port::B, Port::Out]
            }
            CellKind::CmosNot => &[Port::A, Port::Out],
        }
    }

    pub fn input_ports(self) -> &'static [Port] {
        let ports = self.ports();
        &ports[..ports.len() - 1]
    }

    pub fn template(self) -> CellTemplate {
        let transistor_count = match self {
            CellKind::Gdi => 2,
            CellKind::CmosAnd2 | CellKind::CmosOr2 => 6,
            CellKind::CmosXor2 => 12,
            CellKind::CmosNot => 2,
        };
        CellTemplate {
            kind: self,
            transistor_count,
            restoring: self != CellKind::Gdi,
        }
    }

    pub fn transistor_count(self) -> u32 {
        self.template().transistor_count
    }

    pub fn is_restoring(self) -> bool {
        self.template().restoring
    }

    /// Number of transistor gate terminals hanging on `port`. Diffusion
    /// inputs of the GDI cell and all outputs count zero.
    pub fn gate_terminals(self, port: Port) -> u32 {
        match (self, port) {
            (_, Port::Out) => 0,
            (CellKind::Gdi, Port::G) => 2,
            (CellKind::Gdi, _) => 0,
            (CellKind::CmosAnd2 | CellKind::CmosOr2, _) => 3,
            (CellKind::CmosXor2, _) => 6,
            (CellKind::CmosNot, _) => 2,
        }
    }

    /// Logical function of a CMOS cell; `None` for the GDI primitive.
    pub fn cmos_function(self) -> Option<GateKind> {
        match self {
            CellKind::Gdi => None,
            CellKind::CmosAnd2 => Some(GateKind::And),
            CellKind::CmosOr2 => Some(GateKind::Or),
            CellKind::CmosXor2 => Some(GateKind::Xor),
            CellKind::CmosNot => Some(GateKind::Not),
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

pub fn transistor_count(kind: CellKind) -> u32 {
    kind.transistor_count()
}

/// Result of evaluating one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellOutput {
    pub signal: Signal,
    /// Degradation that exceeded the limit, when the output collapsed to `X`.
    pub collapsed: Option<u32>,
}

impl CellOutput {
    fn settled(signal: Signal) -> Self {
        CellOutput {
            signal,
            collapsed: None,
        }
    }
}

/// The nMOS branch conducts when `g` is high and passes `n`; a passed 1 loses
/// a threshold. The pMOS branch conducts when `g` is low and passes `p`; a
/// passed 0 loses a threshold.
pub fn gdi_eval(g: Signal, p: Signal, n: Signal, max_degradation: u32) -> CellOutput {
    debug_assert!(max_degradation >= 1);
    let nmos = || {
        let extra = u32::from(n.value() == LogicValue::One);
        (n.value(), n.degradation() + extra)
    };
    let pmos = || {
        let extra = u32::from(p.value() == LogicValue::Zero);
        (p.value(), p.degradation() + extra)
    };
    let (value, degradation) = match g.value() {
        LogicValue::One => nmos(),
        LogicValue::Zero => pmos(),
        LogicValue::X => {
            let (nv, nd) = nmos();
            let (pv, pd) = pmos();
            if nv == pv && nv.is_known() {
                (nv, nd.max(pd))
            } else {
                (LogicValue::X, 0)
            }
        }
    };
    if value.is_known() && degradation > max_degradation {
        return CellOutput {
            signal: Signal::X,
            collapsed: Some(degradation),
        };
    }
    CellOutput::settled(Signal::new(value, degradation))
}

/// Static CMOS cells restore full swing whatever their inputs carry.
pub fn cmos_eval(kind: CellKind, inputs: &[Signal]) -> Signal {
    let function = kind
        .cmos_function()
        .expect("cmos_eval called on a GDI cell");
    let values: Vec<LogicValue> = inputs.iter().map(|s| s.value()).collect();
    let value = eval_gate(function, &values).expect("cell arity matches its function");
    Signal::strong(value)
}

/// The two cell families an adder can be built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Library {
    Cmos,
    Gdi,
}

impl Library {
    pub fn name(self) -> &'static str {
        match self {
            Library::Gdi => "gdi",
            Library::Cmos => "cmos",
        }
    }
}

impl fmt::Display for Library {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Library {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gdi" => Ok(Library::Gdi),
            "cmos" => Ok(Library::Cmos),
            other => Err(format!("unknown library '{other}' (expected gdi or cmos)")),
        }
    }
}

/// Appends `suffix` to the base of a net name, keeping any `[i]` bus suffix
/// at the end: `P[3]` + `_n` is `P_n[3]`.
pub(crate) fn derived_net(name: &str, suffix: &str) -> String {
    match name.find('[') {
        Some(pos) => format!("{}{}{}", &name[..pos], suffix, &name[pos..]),
        None => format!("{name}{suffix}"),
    }
}

/// Emits one logical gate into `builder` using `library` cells.
///
/// The first input always lands on the GDI `G` terminal. The second input
/// lands on a diffusion terminal, so any degradation it carries moves on to
/// the output. Multi-cell realizations share the id `id` as a prefix
/// (`id.inv`, `id.mux`) so timing can fold them back into one logical gate.
pub fn emit_gate(
    builder: &mut NetlistBuilder,
    library: Library,
    kind: GateKind,
    inputs: &[&str],
    out: &str,
    id: &str,
) {
    assert!(kind.arity_ok(inputs.len()) && inputs.len() <= 2);
    match library {
        Library::Cmos => {
            let cell = match kind {
                GateKind::And => CellKind::CmosAnd2,
                GateKind::Or => CellKind::CmosOr2,
                GateKind::Xor => CellKind::CmosXor2,
                GateKind::Not => CellKind::CmosNot,
            };
            let mut ports = vec![(Port::A, inputs[0])];
            if let Some(b) = inputs.get(1) {
                ports.push((Port::B, b));
            }
            ports.push((Port::Out, out));
            builder.cell(id, cell, &ports);
        }
        Library::Gdi => match kind {
            GateKind::And => {
                let zero = builder.const0();
                builder.gdi(id, inputs[0], &zero, inputs[1], out);
            }
            GateKind::Or => {
                let one = builder.const1();
                builder.gdi(id, inputs[0], inputs[1], &one, out);
            }
            GateKind::Not => {
                let (zero, one) = (builder.const0(), builder.const1());
                builder.gdi(id, inputs[0], &one, &zero, out);
            }
            GateKind::Xor => {
                let inverted = derived_net(out, "_n");
                let (zero, one) = (builder.const0(), builder.const1());
                builder.gdi(&format!("{id}.inv"), inputs[1], &one, &zero, &inverted);
                builder.gdi(&format!("{id}.mux"), inputs[0], inputs[1], &inverted, out);
            }
        },
    }
}

/// A standalone GDI gate with inputs `A` (and `B`) and output `OUT`.
pub fn build_gdi_gate(function: GateKind) -> Netlist {
    build_gate(Library::Gdi, function)
}

pub fn build_gate(library: Library, function: GateKind) -> Netlist {
    let name = format!("{}_{}", library, function.to_string().to_lowercase());
    let mut b = NetlistBuilder::new(&name);
    let inputs: &[&str] = if function == GateKind::Not {
        &["A"]
    } else {
        &["A", "B"]
    };
    for i in inputs {
        b.input(i);
    }
    b.output("OUT");
    emit_gate(&mut b, library, function, inputs, "OUT", "u0");
    b.finish()
}
