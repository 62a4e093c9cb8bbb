//! Adder netlist generators.
//!
//! Every generated adder uses the same port names: `A[i]`, `B[i]`, carry-in
//! `C0`, sums `S[i]` and carry-out `Cout`. Intermediate carries are `C[i]`.
//!
//! The carry-propagate adder groups bits into blocks of four. Inside a block
//! each carry is the flat sum of products over the block's propagate and
//! generate signals. Wide AND/OR terms become left-to-right chains of 2-input
//! cells with the block carry-in joining last, so the carry-in sees one AND
//! and one OR cell on its way to every block carry.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cells::{emit_gate, Library};
use crate::logic::GateKind;
use crate::netlist::{Netlist, NetlistBuilder};

pub const BLOCK_SIZE: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("adder width must be at least 1")]
    ZeroWidth,
    #[error("carry index {0} out of range 1..={BLOCK_SIZE}")]
    CarryIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Architecture {
    Cpa,
    Rca,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::Rca => "rca",
            Architecture::Cpa => "cpa",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rca" => Ok(Architecture::Rca),
            "cpa" => Ok(Architecture::Cpa),
            other => Err(format!("unknown adder '{other}' (expected rca or cpa)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdderSpec {
    pub architecture: Architecture,
    pub width: usize,
    pub library: Library,
}

impl AdderSpec {
    pub fn new(architecture: Architecture, width: usize, library: Library) -> Result<Self, GenError> {
        if width == 0 {
            return Err(GenError::ZeroWidth);
        }
        Ok(AdderSpec {
            architecture,
            width,
            library,
        })
    }

    /// `cpa4_gdi` style name used as the generated design name.
    pub fn design_name(&self) -> String {
        format!("{}{}_{}", self.architecture, self.width, self.library)
    }

    pub fn from_design_name(name: &str) -> Option<AdderSpec> {
        let (head, lib) = name.split_once('_')?;
        let library = lib.parse().ok()?;
        if head.len() < 4 {
            return None;
        }
        let architecture = head[..3].parse().ok()?;
        let width = head[3..].parse().ok()?;
        AdderSpec::new(architecture, width, library).ok()
    }

    pub fn generate(&self) -> Netlist {
        match self.architecture {
            Architecture::Rca => gen_rca(self.width, self.library),
            Architecture::Cpa => gen_cpa(self.width, self.library),
        }
    }
}

impl fmt::Display for AdderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{} {}", self.architecture, self.width, self.library)
    }
}

pub mod ports {
    pub const CARRY_IN: &str = "C0";
    pub const CARRY_OUT: &str = "Cout";

    pub fn a(i: usize) -> String {
        format!("A[{i}]")
    }

    pub fn b(i: usize) -> String {
        format!("B[{i}]")
    }

    pub fn sum(i: usize) -> String {
        format!("S[{i}]")
    }

    /// Carry into bit `i` of a `width`-bit adder; `i == width` is the carry-out.
    pub fn carry(i: usize, width: usize) -> String {
        if i == 0 {
            CARRY_IN.to_string()
        } else if i == width {
            CARRY_OUT.to_string()
        } else {
            format!("C[{i}]")
        }
    }
}

struct FullAdderNets<'a> {
    a: &'a str,
    b: &'a str,
    cin: &'a str,
    sum: &'a str,
    cout: &'a str,
    p: String,
    g: String,
    t: String,
}

/// P = A xor B, G = A and B, S = P xor Cin, Cout = G + P·Cin.
///
/// The carry-in only ever drives GDI select terminals here, so carry
/// degradation does not pile up along a ripple chain.
fn emit_full_adder(b: &mut NetlistBuilder, lib: Library, nets: &FullAdderNets, tag: &str) {
    emit_gate(b, lib, GateKind::Xor, &[nets.a, nets.b], &nets.p, &format!("p{tag}"));
    emit_gate(b, lib, GateKind::And, &[nets.a, nets.b], &nets.g, &format!("g{tag}"));
    emit_gate(b, lib, GateKind::Xor, &[nets.cin, &nets.p], nets.sum, &format!("s{tag}"));
    emit_gate(b, lib, GateKind::And, &[nets.cin, &nets.p], &nets.t, &format!("t{tag}"));
    emit_gate(b, lib, GateKind::Or, &[&nets.t, &nets.g], nets.cout, &format!("co{tag}"));
}

/// A lone full adder with ports `A`, `B`, `Cin`, `Sum`, `Cout`.
pub fn gen_full_adder(library: Library) -> Netlist {
    let mut b = NetlistBuilder::new(&format!("fa_{library}"));
    for p in ["A", "B", "Cin"] {
        b.input(p);
    }
    for p in ["Sum", "Cout"] {
        b.output(p);
    }
    let nets = FullAdderNets {
        a: "A",
        b: "B",
        cin: "Cin",
        sum: "Sum",
        cout: "Cout",
        p: "P".into(),
        g: "G".into(),
        t: "T".into(),
    };
    emit_full_adder(&mut b, library, &nets, "");
    b.finish()
}

fn declare_adder_ports(b: &mut NetlistBuilder, width: usize) {
    for i in 0..width {
        b.input(&ports::a(i));
        b.input(&ports::b(i));
        b.output(&ports::sum(i));
    }
    b.input(ports::CARRY_IN);
    b.output(ports::CARRY_OUT);
}

pub fn gen_rca(width: usize, library: Library) -> Netlist {
    assert!(width >= 1, "adder width must be at least 1");
    let spec = AdderSpec::new(Architecture::Rca, width, library).unwrap();
    let mut b = NetlistBuilder::new(&spec.design_name());
    declare_adder_ports(&mut b, width);
    for i in 0..width {
        let (a, bb, s) = (ports::a(i), ports::b(i), ports::sum(i));
        let (cin, cout) = (ports::carry(i, width), ports::carry(i + 1, width));
        let nets = FullAdderNets {
            a: &a,
            b: &bb,
            cin: &cin,
            sum: &s,
            cout: &cout,
            p: format!("P[{i}]"),
            g: format!("G[{i}]"),
            t: format!("T[{i}]"),
        };
        emit_full_adder(&mut b, library, &nets, &i.to_string());
    }
    b.finish()
}

/// One factor of a carry product term, indexed within its block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Generate(usize),
    Propagate(usize),
    CarryIn,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Generate(j) => write!(f, "G{j}"),
            Literal::Propagate(j) => write!(f, "P{j}"),
            Literal::CarryIn => write!(f, "C0"),
        }
    }
}

/// Sum-of-products form of one block carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryFormula {
    pub carry: usize,
    pub terms: Vec<Vec<Literal>>,
}

impl CarryFormula {
    pub fn eval(&self, generate: &[bool], propagate: &[bool], carry_in: bool) -> bool {
        self.terms.iter().any(|term| {
            term.iter().all(|lit| match *lit {
                Literal::Generate(j) => generate[j],
                Literal::Propagate(j) => propagate[j],
                Literal::CarryIn => carry_in,
            })
        })
    }
}

impl fmt::Display for CarryFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("·"))
            .collect();
        write!(f, "C{} = {}", self.carry, terms.join(" + "))
    }
}

/// Terms of carry `k`: generate first, then products ending in ever lower
/// generates, then the all-propagate product with the carry-in.
fn carry_terms(k: usize) -> Vec<Vec<Literal>> {
    let mut terms = vec![vec![Literal::Generate(k - 1)]];
    for j in (0..k - 1).rev() {
        let mut term: Vec<Literal> = (j + 1..k).rev().map(Literal::Propagate).collect();
        term.push(Literal::Generate(j));
        terms.push(term);
    }
    let mut last: Vec<Literal> = (0..k).rev().map(Literal::Propagate).collect();
    last.push(Literal::CarryIn);
    terms.push(last);
    terms
}

pub fn two_level_carry_formula(i: usize) -> Result<CarryFormula, GenError> {
    if !(1..=BLOCK_SIZE).contains(&i) {
        return Err(GenError::CarryIndex(i));
    }
    Ok(CarryFormula {
        carry: i,
        terms: carry_terms(i),
    })
}

/// Chains `inputs` through 2-input `kind` gates left to right. The running
/// result goes on the first (select) input of each gate.
fn emit_chain(
    b: &mut NetlistBuilder,
    lib: Library,
    kind: GateKind,
    inputs: &[String],
    out: &str,
    group: &str,
) {
    assert!(inputs.len() >= 2);
    let mut acc = inputs[0].clone();
    let links = inputs.len() - 1;
    for (m, next) in inputs[1..].iter().enumerate() {
        let step = m + 1;
        let net = if step == links {
            out.to_string()
        } else {
            format!("{}_{}", group.replace('.', "_"), step)
        };
        emit_gate(b, lib, kind, &[&acc, next], &net, &format!("{group}.{step}"));
        acc = net;
    }
}

/// Carry-propagate adder built from 4-bit two-level lookahead blocks.
///
/// In the GDI library a block carry passes through two GDI inverters before
/// entering the next block's lookahead terms. Without them the carry would
/// cross two diffusion inputs per block and its swing would collapse from
/// the second block on.
pub fn gen_cpa(width: usize, library: Library) -> Netlist {
    assert!(width >= 1, "adder width must be at least 1");
    let spec = AdderSpec::new(Architecture::Cpa, width, library).unwrap();
    let mut b = NetlistBuilder::new(&spec.design_name());
    declare_adder_ports(&mut b, width);

    let p = |i: usize| format!("P[{i}]");
    let g = |i: usize| format!("G[{i}]");
    for i in 0..width {
        let (a, bb) = (ports::a(i), ports::b(i));
        emit_gate(&mut b, library, GateKind::Xor, &[&a, &bb], &p(i), &format!("p{i}"));
        emit_gate(&mut b, library, GateKind::And, &[&a, &bb], &g(i), &format!("g{i}"));
    }

    for base in (0..width).step_by(BLOCK_SIZE) {
        let size = BLOCK_SIZE.min(width - base);
        let block_cin = ports::carry(base, width);
        let lookahead_cin = if base > 0 && library == Library::Gdi {
            let inverted = format!("CB_n[{base}]");
            let restored = format!("CB[{base}]");
            emit_gate(&mut b, library, GateKind::Not, &[&block_cin], &inverted, &format!("cb{base}.inv1"));
            emit_gate(&mut b, library, GateKind::Not, &[&inverted], &restored, &format!("cb{base}.inv2"));
            restored
        } else {
            block_cin.clone()
        };

        for k in 1..=size {
            let carry = base + k;
            let out = ports::carry(carry, width);
            let mut term_nets = Vec::new();
            for (ti, term) in carry_terms(k).iter().enumerate() {
                let lits: Vec<String> = term
                    .iter()
                    .map(|lit| match *lit {
                        Literal::Generate(j) => g(base + j),
                        Literal::Propagate(j) => p(base + j),
                        Literal::CarryIn => lookahead_cin.clone(),
                    })
                    .collect();
                if lits.len() == 1 {
                    term_nets.push(lits[0].clone());
                } else {
                    let group = format!("c{carry}.t{ti}");
                    let net = format!("c{carry}_t{ti}");
                    emit_chain(&mut b, library, GateKind::And, &lits, &net, &group);
                    term_nets.push(net);
                }
            }
            emit_chain(&mut b, library, GateKind::Or, &term_nets, &out, &format!("c{carry}.or"));
        }

        for j in 0..size {
            let bit = base + j;
            let cin = ports::carry(bit, width);
            emit_gate(
                &mut b,
                library,
                GateKind::Xor,
                &[&cin, &p(bit)],
                &ports::sum(bit),
                &format!("s{bit}"),
            );
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::validate;

    #[test]
    fn formulas() {
        use Literal::*;
        assert_eq!(
            two_level_carry_formula(1).unwrap().terms,
            vec![vec![Generate(0)], vec![Propagate(0), CarryIn]]
        );
        assert_eq!(
            two_level_carry_formula(2).unwrap().terms,
            vec![
                vec![Generate(1)],
                vec![Propagate(1), Generate(0)],
                vec![Propagate(1), Propagate(0), CarryIn]
            ]
        );
        let c4 = two_level_carry_formula(4).unwrap();
        assert_eq!(c4.terms.len(), 5);
        assert_eq!(
            c4.terms.last().unwrap(),
            &vec![Propagate(3), Propagate(2), Propagate(1), Propagate(0), CarryIn]
        );
        assert_eq!(
            two_level_carry_formula(3).unwrap().to_string(),
            "C3 = G2 + P2·G1 + P2·P1·G0 + P2·P1·P0·C0"
        );
        assert!(two_level_carry_formula(0).is_err());
        assert!(two_level_carry_formula(5).is_err());
    }

    #[test]
    fn full_adder_counts() {
        assert_eq!(gen_full_adder(Library::Gdi).transistor_count(), 14);
        assert_eq!(gen_full_adder(Library::Cmos).transistor_count(), 42);
    }

    #[test]
    fn adder_counts() {
        assert_eq!(gen_rca(4, Library::Gdi).transistor_count(), 56);
        assert_eq!(gen_rca(4, Library::Cmos).transistor_count(), 168);
        assert_eq!(gen_cpa(4, Library::Gdi).transistor_count(), 100);
        assert_eq!(gen_cpa(4, Library::Cmos).transistor_count(), 300);
        assert_eq!(gen_cpa(8, Library::Cmos).transistor_count(), 600);
        // two blocks plus one 4-transistor restoring buffer between them
        assert_eq!(gen_cpa(8, Library::Gdi).transistor_count(), 204);
    }

    #[test]
    fn rca_width_one() {
        let n = gen_rca(1, Library::Cmos);
        assert_eq!(n.inputs(), ["A[0]", "B[0]", "C0"]);
        assert_eq!(n.outputs(), ["Cout", "S[0]"]);
        assert_eq!(n.cells.len(), 5);
    }

    #[test]
    fn generated_adders_validate() {
        for arch in [Architecture::Rca, Architecture::Cpa] {
            for lib in [Library::Gdi, Library::Cmos] {
                for w in 1..=16 {
                    let n = AdderSpec::new(arch, w, lib).unwrap().generate();
                    if let Err(d) = validate(&n) {
                        panic!("{arch}{w} {lib}: {d:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn design_names_round_trip() {
        let spec = AdderSpec::new(Architecture::Cpa, 12, Library::Gdi).unwrap();
        assert_eq!(spec.design_name(), "cpa12_gdi");
        assert_eq!(AdderSpec::from_design_name("cpa12_gdi"), Some(spec));
        assert_eq!(AdderSpec::from_design_name("cpa0_gdi"), None);
        assert_eq!(AdderSpec::from_design_name("inv"), None);
        assert_eq!(AdderSpec::new(Architecture::Rca, 0, Library::Gdi), Err(GenError::ZeroWidth));
    }
}
