//! Flat structural netlists of GDI and CMOS cells.
//!
//! Nets are plain names; `NAME[i]` is only a naming convention for bus bits.
//! Internal nets are never declared in the text format. They come into
//! existence by being referenced from a cell line.
//!
//! A cell id of the form `group.part` marks the cell as one piece of a
//! multi-cell logical gate (a GDI XOR, or a chain of 2-input cells standing
//! in for one wide AND/OR). Logical-depth timing folds each group back to a
//! single level.

mod text;
mod validate;

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cells::{CellKind, Port};

pub use text::{parse_netlist, serialize_netlist, ParseError, ParseErrorKind};
pub use validate::{validate, Diagnostic, Rule};

#[derive(Debug, Error)]
pub enum NetlistError {
    #[error("{} parse error(s):\n{}", .0.len(), join_lines(.0))]
    Parse(Vec<ParseError>),
    #[error("{} validation error(s):\n{}", .0.len(), join_lines(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("combinational cycle through cells {}", .0.join(", "))]
    Cycle(Vec<String>),
}

fn join_lines<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetKind {
    Input,
    Output,
    Internal,
    Const0,
    Const1,
}

impl NetKind {
    pub fn is_const(self) -> bool {
        matches!(self, NetKind::Const0 | NetKind::Const1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub name: String,
    pub kind: NetKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInstance {
    pub id: String,
    pub kind: CellKind,
    pub ports: BTreeMap<Port, String>,
}

impl CellInstance {
    pub fn new(id: &str, kind: CellKind, ports: &[(Port, &str)]) -> Self {
        CellInstance {
            id: id.to_string(),
            kind,
            ports: ports
                .iter()
                .map(|(p, n)| (*p, n.to_string()))
                .collect(),
        }
    }

    pub fn net(&self, port: Port) -> Option<&str> {
        self.ports.get(&port).map(String::as_str)
    }

    pub fn output(&self) -> Option<&str> {
        self.net(Port::Out)
    }

    /// Input (port, net) pairs in canonical port order.
    pub fn inputs(&self) -> impl Iterator<Item = (Port, &str)> {
        self.ports
            .iter()
            .filter(|(p, _)| **p != Port::Out)
            .map(|(p, n)| (*p, n.as_str()))
    }

    /// Logical-gate group this cell belongs to, if any.
    pub fn group(&self) -> Option<&str> {
        self.id.rsplit_once('.').map(|(g, _)| g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub design_name: String,
    pub nets: BTreeMap<String, NetKind>,
    pub cells: Vec<CellInstance>,
}

impl Netlist {
    /// Assembles a netlist from declared nets and cells. Every net a cell
    /// mentions that is not declared becomes an internal net.
    pub fn from_parts(
        design_name: &str,
        declared: impl IntoIterator<Item = (String, NetKind)>,
        cells: Vec<CellInstance>,
    ) -> Self {
        let mut nets: BTreeMap<String, NetKind> = declared.into_iter().collect();
        for cell in &cells {
            for net in cell.ports.values() {
                nets.entry(net.clone()).or_insert(NetKind::Internal);
            }
        }
        Netlist {
            design_name: design_name.to_string(),
            nets,
            cells,
        }
    }

    pub fn net_kind(&self, name: &str) -> Option<NetKind> {
        self.nets.get(name).copied()
    }

    /// Nets of one kind in canonical order.
    pub fn nets_of(&self, kind: NetKind) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .nets
            .iter()
            .filter(|(_, k)| **k == kind)
            .map(|(n, _)| n.as_str())
            .collect();
        v.sort_by(|a, b| net_name_cmp(a, b));
        v
    }

    pub fn inputs(&self) -> Vec<&str> {
        self.nets_of(NetKind::Input)
    }

    pub fn outputs(&self) -> Vec<&str> {
        self.nets_of(NetKind::Output)
    }

    pub fn cell(&self, id: &str) -> Option<&CellInstance> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn transistor_count(&self) -> u32 {
        self.cells.iter().map(|c| c.kind.transistor_count()).sum()
    }

    /// Equality up to cell order.
    pub fn structurally_eq(&self, other: &Netlist) -> bool {
        if self.design_name != other.design_name || self.nets != other.nets {
            return false;
        }
        let by_id = |n: &Netlist| -> BTreeMap<String, CellInstance> {
            n.cells.iter().map(|c| (c.id.clone(), c.clone())).collect()
        };
        self.cells.len() == other.cells.len() && by_id(self) == by_id(other)
    }

    /// Cells ordered so that each appears after every cell driving one of
    /// its inputs. Ready cells are taken in lexicographic id order.
    pub fn topo_order(&self) -> Result<Vec<String>, NetlistError> {
        self.topo_indices()
            .map(|order| order.into_iter().map(|i| self.cells[i].id.clone()).collect())
            .map_err(|stuck| {
                NetlistError::Cycle(stuck.into_iter().map(|i| self.cells[i].id.clone()).collect())
            })
    }

    /// Cell indices in topological order, or the indices left over on a cycle.
    pub(crate) fn topo_indices(&self) -> Result<Vec<usize>, Vec<usize>> {
        let mut drivers: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(out) = c.output() {
                drivers.entry(out).or_default().push(i);
            }
        }
        let mut indegree = vec![0usize; self.cells.len()];
        let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); self.cells.len()];
        for (i, c) in self.cells.iter().enumerate() {
            for (_, net) in c.inputs() {
                for &d in drivers.get(net).map(Vec::as_slice).unwrap_or(&[]) {
                    indegree[i] += 1;
                    fanout[d].push(i);
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<(&str, usize)>> = indegree
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == 0)
            .map(|(i, _)| Reverse((self.cells[i].id.as_str(), i)))
            .collect();
        let mut order = Vec::with_capacity(self.cells.len());
        while let Some(Reverse((_, i))) = ready.pop() {
            order.push(i);
            for &next in &fanout[i] {
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.push(Reverse((self.cells[next].id.as_str(), next)));
                }
            }
        }
        if order.len() == self.cells.len() {
            Ok(order)
        } else {
            let mut stuck: Vec<usize> = (0..self.cells.len()).filter(|&i| indegree[i] > 0).collect();
            stuck.sort_by(|&a, &b| self.cells[a].id.cmp(&self.cells[b].id));
            Err(stuck)
        }
    }
}

/// Splits `NAME[i]` into `("NAME", Some(i))`.
pub fn split_bus(name: &str) -> (&str, Option<u64>) {
    if let Some(stripped) = name.strip_suffix(']') {
        if let Some((base, idx)) = stripped.rsplit_once('[') {
            if let Ok(i) = idx.parse() {
                return (base, Some(i));
            }
        }
    }
    (name, None)
}

/// Canonical net ordering: by base name, then numerically by bus index.
pub fn net_name_cmp(a: &str, b: &str) -> Ordering {
    let (ab, ai) = split_bus(a);
    let (bb, bi) = split_bus(b);
    ab.cmp(bb).then(ai.cmp(&bi)).then(a.cmp(b))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// `[A-Za-z_][A-Za-z0-9_.]*` with an optional `[index]` suffix.
pub fn is_valid_net_name(s: &str) -> bool {
    match s.strip_suffix(']') {
        Some(stripped) => match stripped.split_once('[') {
            Some((base, idx)) => {
                is_ident(base) && !idx.is_empty() && idx.chars().all(|c| c.is_ascii_digit())
            }
            None => false,
        },
        None => is_ident(s),
    }
}

pub fn is_valid_cell_id(s: &str) -> bool {
    is_ident(s)
}

/// Incremental construction used by the generators.
#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    design_name: String,
    declared: BTreeMap<String, NetKind>,
    cells: Vec<CellInstance>,
}

pub const CONST0_NET: &str = "GND";
pub const CONST1_NET: &str = "VDD";

impl NetlistBuilder {
    pub fn new(design_name: &str) -> Self {
        NetlistBuilder {
            design_name: design_name.to_string(),
            declared: BTreeMap::new(),
            cells: Vec::new(),
        }
    }

    fn declare(&mut self, name: &str, kind: NetKind) {
        let prev = self.declared.insert(name.to_string(), kind);
        assert!(
            prev.is_none() || prev == Some(kind),
            "net {name} declared twice with different kinds"
        );
    }

    pub fn input(&mut self, name: &str) {
        self.declare(name, NetKind::Input);
    }

    pub fn output(&mut self, name: &str) {
        self.declare(name, NetKind::Output);
    }

    pub fn const0(&mut self) -> String {
        self.declare(CONST0_NET, NetKind::Const0);
        CONST0_NET.to_string()
    }

    pub fn const1(&mut self) -> String {
        self.declare(CONST1_NET, NetKind::Const1);
        CONST1_NET.to_string()
    }

    pub fn cell(&mut self, id: &str, kind: CellKind, ports: &[(Port, &str)]) {
        debug_assert!(
            !self.cells.iter().any(|c| c.id == id),
            "duplicate cell id {id}"
        );
        self.cells.push(CellInstance::new(id, kind, ports));
    }

    pub fn gdi(&mut self, id: &str, g: &str, p: &str, n: &str, out: &str) {
        self.cell(
            id,
            CellKind::Gdi,
            &[(Port::G, g), (Port::P, p), (Port::N, n), (Port::Out, out)],
        );
    }

    pub fn finish(self) -> Netlist {
        Netlist::from_parts(&self.design_name, self.declared, self.cells)
    }
}
