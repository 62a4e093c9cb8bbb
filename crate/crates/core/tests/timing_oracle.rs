//! Longest paths by brute-force path enumeration, checked against
//! `static_timing`.

use std::collections::HashMap;

use adderlab::cells::Library;
use adderlab::generators::{AdderSpec, Architecture};
use adderlab::netlist::{CellInstance, Netlist};
use adderlab::sim::{static_timing, Granularity};

fn group(id: &str) -> Option<&str> {
    id.rsplit_once('.').map(|(g, _)| g)
}

/// Enumerates every path from `from` and returns the longest depth to `to`.
fn longest(n: &Netlist, from: &str, to: &str, logical: bool) -> Option<u32> {
    let mut readers: HashMap<&str, Vec<&CellInstance>> = HashMap::new();
    for c in &n.cells {
        for (_, net) in c.inputs() {
            readers.entry(net).or_default().push(c);
        }
    }
    fn walk<'a>(
        net: &'a str,
        prev: Option<&'a str>,
        depth: u32,
        to: &str,
        logical: bool,
        readers: &HashMap<&'a str, Vec<&'a CellInstance>>,
        best: &mut Option<u32>,
    ) {
        if net == to {
            *best = Some(best.map_or(depth, |b| b.max(depth)));
        }
        for c in readers.get(net).into_iter().flatten() {
            let same = logical && prev.is_some() && group(&c.id).is_some() && group(&c.id) == prev.and_then(group);
            let d = if same { depth } else { depth + 1 };
            walk(c.output().unwrap(), Some(&c.id), d, to, logical, readers, best);
        }
    }
    let mut best = None;
    walk(from, None, 0, to, logical, &readers, &mut best);
    best
}

#[test]
fn carry_path_matches_enumeration() {
    for w in 1..=8 {
        for arch in [Architecture::Rca, Architecture::Cpa] {
            for lib in [Library::Gdi, Library::Cmos] {
                let n = AdderSpec::new(arch, w, lib).unwrap().generate();
                for (g, logical) in [(Granularity::Cell, false), (Granularity::Logical, true)] {
                    let t = static_timing(&n, g, Some("C0")).unwrap();
                    for out in n.outputs() {
                        assert_eq!(
                            t.depth(out),
                            longest(&n, "C0", out, logical),
                            "{arch}{w} {lib} {g} {out}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn rca_carry_depth_is_two_per_bit() {
    for w in 1..=12 {
        let n = AdderSpec::new(Architecture::Rca, w, Library::Cmos).unwrap().generate();
        let t = static_timing(&n, Granularity::Cell, Some("C0")).unwrap();
        assert_eq!(t.depth("Cout"), Some(2 * w as u32));
    }
}
