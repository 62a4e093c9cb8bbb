//! Checking generated adders against integer addition.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SimError, Simulator};
use crate::generators::{ports, AdderSpec};
use crate::logic::{LogicValue, Signal};
use crate::netlist::{Netlist, NetKind};

pub const MAX_EXHAUSTIVE_WIDTH: usize = 8;
pub const MAX_RANDOM_WIDTH: usize = 64;
const KEPT_COUNTEREXAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Random { vectors: usize, seed: u64 },
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyMode::Exhaustive => write!(f, "exhaustive"),
            VerifyMode::Random { vectors, seed } => write!(f, "random vectors={vectors} seed={seed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub a: u64,
    pub b: u64,
    pub carry_in: bool,
    pub expected: u128,
    /// Observed `Cout` followed by `S[w-1]..S[0]`, `X` where unknown.
    pub observed: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={} B={} C0={} expected={} observed={}",
            self.a, self.b, self.carry_in as u8, self.expected, self.observed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub width: usize,
    pub mode: VerifyMode,
    pub total: u64,
    pub passed: u64,
    /// Vectors where any output settled to `X`.
    pub unknown_outputs: u64,
    pub collapses: u64,
    /// The first few failing vectors.
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn failures(&self) -> u64 {
        self.total - self.passed
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}/{} pass", self.passed, self.total)?;
        writeln!(
            f,
            "unknown_outputs={} collapses={}",
            self.unknown_outputs, self.collapses
        )?;
        for c in &self.counterexamples {
            writeln!(f, "counterexample {c}")?;
        }
        Ok(())
    }
}

struct AdderPorts {
    a: Vec<usize>,
    b: Vec<usize>,
    carry_in: usize,
    sum: Vec<usize>,
    carry_out: usize,
}

fn adder_ports(sim: &Simulator, netlist: &Netlist, width: usize) -> Result<AdderPorts, SimError> {
    let inputs = sim.input_nets();
    let want = |name: String, kind: NetKind| -> Result<String, SimError> {
        match netlist.net_kind(&name) {
            Some(k) if k == kind => Ok(name),
            _ => Err(SimError::PortConvention(format!(
                "missing {} '{name}'",
                if kind == NetKind::Input { "input" } else { "output" }
            ))),
        }
    };
    let position = |name: &str| inputs.iter().position(|n| *n == name).expect("declared input");
    let mut ports_ = AdderPorts {
        a: Vec::new(),
        b: Vec::new(),
        carry_in: 0,
        sum: Vec::new(),
        carry_out: 0,
    };
    for i in 0..width {
        ports_.a.push(position(&want(ports::a(i), NetKind::Input)?));
        ports_.b.push(position(&want(ports::b(i), NetKind::Input)?));
        let s = want(ports::sum(i), NetKind::Output)?;
        ports_.sum.push(sim.slot(&s).expect("declared output"));
    }
    ports_.carry_in = position(&want(ports::CARRY_IN.into(), NetKind::Input)?);
    let co = want(ports::CARRY_OUT.into(), NetKind::Output)?;
    ports_.carry_out = sim.slot(&co).expect("declared output");
    if inputs.len() != 2 * width + 1 {
        return Err(SimError::PortConvention(format!(
            "expected {} inputs for width {width}, found {}",
            2 * width + 1,
            inputs.len()
        )));
    }
    Ok(ports_)
}

/// Simulates `netlist` as a `spec.width`-bit adder and compares every
/// result against `A + B + C0`.
pub fn verify_against_oracle(
    netlist: &Netlist,
    spec: &AdderSpec,
    mode: VerifyMode,
) -> Result<VerificationReport, SimError> {
    let width = spec.width;
    match mode {
        VerifyMode::Exhaustive if width > MAX_EXHAUSTIVE_WIDTH => {
            return Err(SimError::TooWide {
                mode: "exhaustive",
                max: MAX_EXHAUSTIVE_WIDTH,
                width,
            })
        }
        VerifyMode::Random { .. } if width > MAX_RANDOM_WIDTH => {
            return Err(SimError::TooWide {
                mode: "random",
                max: MAX_RANDOM_WIDTH,
                width,
            })
        }
        _ => {}
    }
    let sim = Simulator::new(netlist)?;
    let ports = adder_ports(&sim, netlist, width)?;
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };

    let mut report = VerificationReport {
        width,
        mode,
        total: 0,
        passed: 0,
        unknown_outputs: 0,
        collapses: 0,
        counterexamples: Vec::new(),
    };
    let mut inputs = vec![LogicValue::Zero; sim.input_nets().len()];
    let mut values: Vec<Signal> = Vec::new();
    let mut collapses = Vec::new();

    let mut check = |a: u64, b: u64, c: bool| {
        for i in 0..width {
            inputs[ports.a[i]] = LogicValue::from_bool(a >> i & 1 == 1);
            inputs[ports.b[i]] = LogicValue::from_bool(b >> i & 1 == 1);
        }
        inputs[ports.carry_in] = LogicValue::from_bool(c);
        collapses.clear();
        sim.eval_slots(&inputs, &mut values, &mut collapses);
        report.collapses += collapses.len() as u64;

        let expected = a as u128 + b as u128 + c as u128;
        let mut observed: Option<u128> = Some(0);
        let bits = ports.sum.iter().copied().chain([ports.carry_out]);
        for (i, slot) in bits.enumerate() {
            observed = match (observed, values[slot].value().to_bool()) {
                (Some(acc), Some(bit)) => Some(acc | (bit as u128) << i),
                _ => None,
            };
        }
        report.total += 1;
        if observed.is_none() {
            report.unknown_outputs += 1;
        }
        if observed == Some(expected) {
            report.passed += 1;
        } else if report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            let mut text = String::new();
            text.push(values[ports.carry_out].value().as_char());
            text.push(' ');
            text.extend(ports.sum.iter().rev().map(|&s| values[s].value().as_char()));
            report.counterexamples.push(Counterexample {
                a,
                b,
                carry_in: c,
                expected,
                observed: text,
            });
        }
    };

    match mode {
        VerifyMode::Exhaustive => {
            for c in [false, true] {
                for a in 0..=mask {
                    for b in 0..=mask {
                        check(a, b, c);
                    }
                }
            }
        }
        VerifyMode::Random { vectors, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..vectors {
                let a = rng.next_u64() & mask;
                let b = rng.next_u64() & mask;
                let c = rng.next_u64() & 1 == 1;
                check(a, b, c);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{CellKind, Library, Port};
    use crate::generators::{gen_cpa, gen_rca, Architecture};

    fn spec(arch: Architecture, w: usize, lib: Library) -> AdderSpec {
        AdderSpec::new(arch, w, lib).unwrap()
    }

    #[test]
    fn cpa4_gdi_exhaustive() {
        let s = spec(Architecture::Cpa, 4, Library::Gdi);
        let r = verify_against_oracle(&s.generate(), &s, VerifyMode::Exhaustive).unwrap();
        assert_eq!((r.passed, r.total), (512, 512));
        assert_eq!(r.to_string().lines().next(), Some("512/512 pass"));
    }

    #[test]
    fn rca8_cmos_random() {
        let s = spec(Architecture::Rca, 8, Library::Cmos);
        let r = verify_against_oracle(
            &s.generate(),
            &s,
            VerifyMode::Random {
                vectors: 10_000,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!((r.passed, r.total), (10_000, 10_000));
    }

    #[test]
    fn swapped_and_is_caught() {
        let s = spec(Architecture::Cpa, 4, Library::Cmos);
        let mut n = gen_cpa(4, Library::Cmos);
        let c = n.cells.iter_mut().find(|c| c.kind == CellKind::CmosAnd2).unwrap();
        c.kind = CellKind::CmosOr2;
        let r = verify_against_oracle(&n, &s, VerifyMode::Exhaustive).unwrap();
        assert!(r.failures() > 0);
        assert!(!r.counterexamples.is_empty());
    }

    #[test]
    fn swapped_gdi_and_is_caught() {
        let s = spec(Architecture::Rca, 4, Library::Gdi);
        let mut n = gen_rca(4, Library::Gdi);
        // rewire g0 from AND (p=GND n=B) to OR (p=B n=VDD)
        let c = n.cells.iter_mut().find(|c| c.id == "g0").unwrap();
        let b = c.ports[&Port::N].clone();
        c.ports.insert(Port::P, b);
        c.ports.insert(Port::N, "VDD".into());
        n.nets.insert("VDD".into(), NetKind::Const1);
        let r = verify_against_oracle(&n, &s, VerifyMode::Exhaustive).unwrap();
        assert!(r.failures() > 0);
    }

    #[test]
    fn width_limits() {
        let s = spec(Architecture::Rca, 9, Library::Cmos);
        assert!(matches!(
            verify_against_oracle(&s.generate(), &s, VerifyMode::Exhaustive),
            Err(SimError::TooWide { .. })
        ));
    }

    #[test]
    fn port_convention_mismatch() {
        let s = spec(Architecture::Rca, 5, Library::Cmos);
        let n = gen_rca(4, Library::Cmos);
        assert!(matches!(
            verify_against_oracle(&n, &s, VerifyMode::Exhaustive),
            Err(SimError::PortConvention(_))
        ));
    }
}
