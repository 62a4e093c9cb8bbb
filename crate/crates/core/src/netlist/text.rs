//! Line-oriented netlist text format.
//!
//! ```text
//! design <name>
//! input <net> [<net> ...]
//! output <net> [<net> ...]
//! const0 <net>
//! const1 <net>
//! cell <id> <KIND> <port>=<net> ...
//! ```
//!
//! `#` starts a comment. The `design` line must come first.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use super::{
    is_valid_cell_id, is_valid_net_name, CellInstance, NetKind, Netlist,
    NetlistError,
};
use crate::cells::{CellKind, Port};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownKeyword(String),
    BadIdentifier(String),
    DuplicateCellId(String),
    UnknownCellKind(String),
    WrongPortSet { kind: CellKind, got: Vec<String> },
    MalformedPort(String),
    DuplicateDeclaration(String),
    MissingDesign,
    DesignNotFirst,
    DuplicateDesign,
    WrongOperandCount { keyword: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::UnknownKeyword(k) => write!(f, "unknown keyword '{k}'"),
            ParseErrorKind::BadIdentifier(s) => write!(f, "bad identifier '{s}'"),
            ParseErrorKind::DuplicateCellId(s) => write!(f, "duplicate cell id '{s}'"),
            ParseErrorKind::UnknownCellKind(s) => write!(f, "unknown cell kind '{s}'"),
            ParseErrorKind::WrongPortSet { kind, got } => {
                let want: Vec<&str> = kind.ports().iter().map(|p| p.key()).collect();
                write!(
                    f,
                    "{kind} needs ports {{{}}}, got {{{}}}",
                    want.join(","),
                    got.join(",")
                )
            }
            ParseErrorKind::MalformedPort(s) => write!(f, "malformed port binding '{s}'"),
            ParseErrorKind::DuplicateDeclaration(s) => write!(f, "net '{s}' declared twice"),
            ParseErrorKind::MissingDesign => write!(f, "missing design statement"),
            ParseErrorKind::DesignNotFirst => write!(f, "design must be the first statement"),
            ParseErrorKind::DuplicateDesign => write!(f, "more than one design statement"),
            ParseErrorKind::WrongOperandCount { keyword } => {
                write!(f, "wrong number of operands for '{keyword}'")
            }
        }
    }
}

/// Parses netlist text. Semantic rules (drivers, cycles) are left to
/// [`validate`](super::validate); every syntactic problem is collected.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut errors = Vec::new();
    let mut design: Option<String> = None;
    let mut declared: BTreeMap<String, NetKind> = BTreeMap::new();
    let mut cells: Vec<CellInstance> = Vec::new();
    let mut cell_ids: HashSet<String> = HashSet::new();
    let mut seen_statement = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, operands)) = tokens.split_first() else {
            continue;
        };
        let mut err = |kind| errors.push(ParseError { line, kind });
        let first = !seen_statement;
        seen_statement = true;

        match keyword {
            "design" => {
                if operands.len() != 1 {
                    err(ParseErrorKind::WrongOperandCount { keyword: "design" });
                } else if design.is_some() {
                    err(ParseErrorKind::DuplicateDesign);
                } else if !first {
                    err(ParseErrorKind::DesignNotFirst);
                } else {
                    design = Some(operands[0].to_string());
                }
            }
            "input" | "output" | "const0" | "const1" => {
                let (kind, kw, single) = match keyword {
                    "input" => (NetKind::Input, "input", false),
                    "output" => (NetKind::Output, "output", false),
                    "const0" => (NetKind::Const0, "const0", true),
                    _ => (NetKind::Const1, "const1", true),
                };
                if operands.is_empty() || (single && operands.len() != 1) {
                    err(ParseErrorKind::WrongOperandCount { keyword: kw });
                    continue;
                }
                for &net in operands {
                    if !is_valid_net_name(net) {
                        err(ParseErrorKind::BadIdentifier(net.to_string()));
                    } else if declared.insert(net.to_string(), kind).is_some() {
                        err(ParseErrorKind::DuplicateDeclaration(net.to_string()));
                    }
                }
            }
            "cell" => {
                if operands.len() < 2 {
                    err(ParseErrorKind::WrongOperandCount { keyword: "cell" });
                    continue;
                }
                let id = operands[0];
                let mut ok = true;
                if !is_valid_cell_id(id) {
                    err(ParseErrorKind::BadIdentifier(id.to_string()));
                    ok = false;
                } else if !cell_ids.insert(id.to_string()) {
                    err(ParseErrorKind::DuplicateCellId(id.to_string()));
                    ok = false;
                }
                let Some(kind) = CellKind::from_keyword(operands[1]) else {
                    err(ParseErrorKind::UnknownCellKind(operands[1].to_string()));
                    continue;
                };
                let mut ports: BTreeMap<Port, String> = BTreeMap::new();
                let mut keys = Vec::new();
                let mut port_set_ok = true;
                for &binding in &operands[2..] {
                    let Some((key, net)) = binding.split_once('=') else {
                        err(ParseErrorKind::MalformedPort(binding.to_string()));
                        ok = false;
                        continue;
                    };
                    keys.push(key.to_string());
                    if !is_valid_net_name(net) {
                        err(ParseErrorKind::BadIdentifier(net.to_string()));
                        ok = false;
                    }
                    match Port::from_key(key) {
                        Some(p) if kind.ports().contains(&p) => {
                            if ports.insert(p, net.to_string()).is_some() {
                                port_set_ok = false;
                            }
                        }
                        _ => port_set_ok = false,
                    }
                }
                if port_set_ok && ports.len() != kind.ports().len() {
                    port_set_ok = false;
                }
                if !port_set_ok {
                    err(ParseErrorKind::WrongPortSet { kind, got: keys });
                    ok = false;
                }
                if ok {
                    cells.push(CellInstance {
                        id: id.to_string(),
                        kind,
                        ports,
                    });
                }
            }
            other => {
                if first {
                    err(ParseErrorKind::DesignNotFirst);
                }
                err(ParseErrorKind::UnknownKeyword(other.to_string()));
            }
        }
    }

    let design = match design {
        Some(d) => d,
        None => {
            if !errors
                .iter()
                .any(|e| e.kind == ParseErrorKind::DesignNotFirst)
            {
                errors.push(ParseError {
                    line: text.lines().count().max(1),
                    kind: ParseErrorKind::MissingDesign,
                });
            }
            String::new()
        }
    };
    if !errors.is_empty() {
        return Err(NetlistError::Parse(errors));
    }
    Ok(Netlist::from_parts(&design, declared, cells))
}

/// Canonical text: declarations sorted by name, then cells in topological
/// order, one statement per line.
pub fn serialize_netlist(netlist: &Netlist) -> String {
    let mut out = String::new();
    writeln!(out, "design {}", netlist.design_name).unwrap();
    for (kind, keyword) in [
        (NetKind::Input, "input"),
        (NetKind::Output, "output"),
        (NetKind::Const0, "const0"),
        (NetKind::Const1, "const1"),
    ] {
        for net in netlist.nets_of(kind) {
            writeln!(out, "{keyword} {net}").unwrap();
        }
    }
    let order = netlist
        .topo_indices()
        .unwrap_or_else(|_| (0..netlist.cells.len()).collect());
    for i in order {
        let cell = &netlist.cells[i];
        write!(out, "cell {} {}", cell.id, cell.kind).unwrap();
        for (port, net) in &cell.ports {
            write!(out, " {port}={net}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{validate, Rule};

    const INVERTER: &str = "design d\ninput a\noutput y\ncell i1 CMOS_NOT a=a out=y\n";

    fn errors(text: &str) -> Vec<ParseErrorKind> {
        match parse_netlist(text) {
            Err(NetlistError::Parse(e)) => e.into_iter().map(|e| e.kind).collect(),
            other => panic!("expected parse errors, got {other:?}"),
        }
    }

    #[test]
    fn inverter_parses() {
        let n = parse_netlist(INVERTER).unwrap();
        assert_eq!(n.design_name, "d");
        assert_eq!(n.cells.len(), 1);
        assert_eq!(n.nets.len(), 2);
        assert_eq!(serialize_netlist(&n), INVERTER);
    }

    #[test]
    fn comments_and_spacing() {
        let text = "# header\n\ndesign  d   # trailing\ninput a b\noutput y\n\
                    cell u  CMOS_AND2  out=y b=b   a=a\n";
        let n = parse_netlist(text).unwrap();
        assert_eq!(n.cells[0].net(Port::A), Some("a"));
        assert_eq!(
            serialize_netlist(&n),
            "design d\ninput a\ninput b\noutput y\ncell u CMOS_AND2 a=a b=b out=y\n"
        );
    }

    #[test]
    fn double_driver_parses_then_fails_validation() {
        let text = "design d\ninput a\noutput y\ncell i1 CMOS_NOT a=a out=y\ncell i2 CMOS_NOT a=a out=y\n";
        let n = parse_netlist(text).unwrap();
        let diags = validate(&n).unwrap_err();
        assert!(diags.iter().any(|d| d.rule == Rule::MultipleDrivers));
    }

    #[test]
    fn error_cases_carry_line_numbers() {
        let text = "design d\nwire x\n";
        match parse_netlist(text) {
            Err(NetlistError::Parse(e)) => {
                assert_eq!(e[0].line, 2);
                assert_eq!(e[0].kind, ParseErrorKind::UnknownKeyword("wire".into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(errors("input a\n")[0], ParseErrorKind::MissingDesign);
        assert_eq!(errors("input a\ndesign d\n")[0], ParseErrorKind::DesignNotFirst);
        assert_eq!(errors("")[0], ParseErrorKind::MissingDesign);
        assert_eq!(
            errors("design d\ndesign e\n")[0],
            ParseErrorKind::DuplicateDesign
        );
        assert_eq!(
            errors("design d\ninput 9a\n")[0],
            ParseErrorKind::BadIdentifier("9a".into())
        );
        assert_eq!(
            errors("design d\ninput a\ninput a\n")[0],
            ParseErrorKind::DuplicateDeclaration("a".into())
        );
        assert_eq!(
            errors("design d\ncell u CMOS_NOT a=a out=y\ncell u CMOS_NOT a=a out=z\n")[0],
            ParseErrorKind::DuplicateCellId("u".into())
        );
        assert!(matches!(
            errors("design d\ncell u CMOS_NOT a=a b=b out=y\n")[0],
            ParseErrorKind::WrongPortSet { .. }
        ));
        assert!(matches!(
            errors("design d\ncell u GDI g=a p=b out=y\n")[0],
            ParseErrorKind::WrongPortSet { .. }
        ));
        assert!(matches!(
            errors("design d\ncell u GDI g=a g=a p=b out=y\n")[0],
            ParseErrorKind::WrongPortSet { .. }
        ));
        assert_eq!(
            errors("design d\ncell u NAND a=a b=b out=y\n")[0],
            ParseErrorKind::UnknownCellKind("NAND".into())
        );
        assert_eq!(
            errors("design d\ncell u CMOS_NOT a out=y\n")[0],
            ParseErrorKind::MalformedPort("a".into())
        );
        assert_eq!(
            errors("design d\nconst0 x y\n")[0],
            ParseErrorKind::WrongOperandCount { keyword: "const0" }
        );
    }

    #[test]
    fn every_error_is_collected() {
        let e = errors("design d\nfoo\nbar\ninput 1x\n");
        assert_eq!(e.len(), 3);
    }
}
