use std::collections::BTreeMap;
use std::fmt;

use super::{NetKind, Netlist};
use crate::cells::Port;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    PortMismatch,
    UnknownNet,
    MultipleDrivers,
    DrivesInput,
    DrivesConst,
    UndrivenOutput,
    DanglingInput,
    CombinationalCycle,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::PortMismatch => "port-mismatch",
            Rule::UnknownNet => "unknown-net",
            Rule::MultipleDrivers => "multiple-drivers",
            Rule::DrivesInput => "drives-input",
            Rule::DrivesConst => "drives-const",
            Rule::UndrivenOutput => "undriven-output",
            Rule::DanglingInput => "dangling-input",
            Rule::CombinationalCycle => "combinational-cycle",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub nets: Vec<String>,
    pub cells: Vec<String>,
}

impl Diagnostic {
    fn new(rule: Rule, nets: &[&str], cells: &[&str]) -> Self {
        Diagnostic {
            rule,
            nets: nets.iter().map(|s| s.to_string()).collect(),
            cells: cells.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if !self.nets.is_empty() {
            write!(f, " net(s) {}", self.nets.join(", "))?;
        }
        if !self.cells.is_empty() {
            write!(f, " cell(s) {}", self.cells.join(", "))?;
        }
        Ok(())
    }
}

/// Checks the structural rules a netlist must satisfy before simulation.
/// Returns every violation found, not only the first.
pub fn validate(netlist: &Netlist) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut drivers: BTreeMap<&str, Vec<&str>> = BTreeMap::new();

    for cell in &netlist.cells {
        let expected = cell.kind.ports();
        if cell.ports.len() != expected.len() || !expected.iter().all(|p| cell.ports.contains_key(p))
        {
            diags.push(Diagnostic::new(Rule::PortMismatch, &[], &[&cell.id]));
        }
        for net in cell.ports.values() {
            if netlist.net_kind(net).is_none() {
                diags.push(Diagnostic::new(Rule::UnknownNet, &[net], &[&cell.id]));
            }
        }
        if let Some(out) = cell.net(Port::Out) {
            drivers.entry(out).or_default().push(&cell.id);
            match netlist.net_kind(out) {
                Some(NetKind::Input) => {
                    diags.push(Diagnostic::new(Rule::DrivesInput, &[out], &[&cell.id]))
                }
                Some(k) if k.is_const() => {
                    diags.push(Diagnostic::new(Rule::DrivesConst, &[out], &[&cell.id]))
                }
                _ => {}
            }
        }
    }

    for (net, cells) in &drivers {
        if cells.len() > 1 {
            diags.push(Diagnostic::new(Rule::MultipleDrivers, &[net], cells));
        }
    }

    for (net, kind) in &netlist.nets {
        if *kind == NetKind::Output && !drivers.contains_key(net.as_str()) {
            diags.push(Diagnostic::new(Rule::UndrivenOutput, &[net], &[]));
        }
    }

    for cell in &netlist.cells {
        for (_, net) in cell.inputs() {
            let sourced = matches!(
                netlist.net_kind(net),
                Some(NetKind::Input | NetKind::Const0 | NetKind::Const1)
            );
            if !sourced && !drivers.contains_key(net) {
                diags.push(Diagnostic::new(Rule::DanglingInput, &[net], &[&cell.id]));
            }
        }
    }

    if let Err(stuck) = netlist.topo_indices() {
        let ids: Vec<&str> = stuck.iter().map(|&i| netlist.cells[i].id.as_str()).collect();
        diags.push(Diagnostic::new(Rule::CombinationalCycle, &[], &ids));
    }

    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_netlist;

    fn rules(text: &str) -> Vec<Rule> {
        let n = parse_netlist(text).unwrap();
        validate(&n).unwrap_err().into_iter().map(|d| d.rule).collect()
    }

    #[test]
    fn ok_inverter() {
        let n = parse_netlist("design d\ninput a\noutput y\ncell i1 CMOS_NOT a=a out=y\n").unwrap();
        assert!(validate(&n).is_ok());
    }

    #[test]
    fn drives_input() {
        assert!(rules("design d\ninput a b\noutput y\ncell i1 CMOS_NOT a=a out=b\ncell i2 CMOS_NOT a=b out=y\n")
            .contains(&Rule::DrivesInput));
    }

    #[test]
    fn drives_const() {
        assert!(rules("design d\ninput a\nconst0 z\noutput y\ncell i1 CMOS_NOT a=a out=z\ncell i2 CMOS_NOT a=a out=y\n")
            .contains(&Rule::DrivesConst));
    }

    #[test]
    fn cycle() {
        let r = rules("design d\ninput a\noutput y\ncell i1 CMOS_AND2 a=a b=n2 out=n1\n\
                       cell i2 CMOS_NOT a=n1 out=n2\ncell i3 CMOS_NOT a=n2 out=y\n");
        assert_eq!(r, [Rule::CombinationalCycle]);
        let n = parse_netlist("design d\ncell a CMOS_NOT a=x out=y\ncell b CMOS_NOT a=y out=x\n").unwrap();
        let diags = validate(&n).unwrap_err();
        assert_eq!(diags[0].rule, Rule::CombinationalCycle);
        assert_eq!(diags[0].cells, ["a", "b"]);
        assert_eq!(diags[0].to_string(), "combinational-cycle cell(s) a, b");
    }

    #[test]
    fn undriven_output_and_dangling_input() {
        let r = rules("design d\ninput a\noutput y z\ncell i1 CMOS_AND2 a=a b=floating out=y\n");
        assert!(r.contains(&Rule::UndrivenOutput));
        assert!(r.contains(&Rule::DanglingInput));
    }

    #[test]
    fn programmatic_port_mismatch() {
        let mut n = parse_netlist("design d\ninput a\noutput y\ncell i1 CMOS_NOT a=a out=y\n").unwrap();
        n.cells[0].kind = crate::cells::CellKind::CmosAnd2;
        let diags = validate(&n).unwrap_err();
        assert_eq!(diags[0].rule, Rule::PortMismatch);
    }
}
