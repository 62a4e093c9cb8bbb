//! Unit-delay longest-path depths.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::SimError;
use crate::netlist::{validate, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    /// Every multi-cell logical gate (cells sharing an id group) counts once.
    Logical,
    /// Every cell counts once.
    Cell,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Logical => "logical",
            Granularity::Cell => "cell",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimingReport {
    pub granularity: Granularity,
    pub from: Option<String>,
    /// Depth of every net reachable from the sources.
    pub depths: BTreeMap<String, u32>,
    outputs: Vec<String>,
}

impl TimingReport {
    pub fn depth(&self, net: &str) -> Option<u32> {
        self.depths.get(net).copied()
    }

    pub fn output_depths(&self) -> BTreeMap<&str, u32> {
        self.outputs
            .iter()
            .filter_map(|o| self.depth(o).map(|d| (o.as_str(), d)))
            .collect()
    }

    /// Deepest reachable primary output.
    pub fn critical_path(&self) -> Option<u32> {
        self.outputs.iter().filter_map(|o| self.depth(o)).max()
    }
}

/// Longest path, in unit delays, from the primary inputs (or from `from_net`
/// alone) to every net.
pub fn static_timing(
    netlist: &Netlist,
    granularity: Granularity,
    from_net: Option<&str>,
) -> Result<TimingReport, SimError> {
    validate(netlist).map_err(SimError::Invalid)?;
    let mut depths: HashMap<&str, u32> = HashMap::new();
    match from_net {
        Some(net) => {
            if netlist.net_kind(net).is_none() {
                return Err(SimError::UnknownNet(net.to_string()));
            }
            depths.insert(net, 0);
        }
        None => {
            for net in netlist.inputs() {
                depths.insert(net, 0);
            }
        }
    }

    let driver_group: HashMap<&str, Option<&str>> = netlist
        .cells
        .iter()
        .filter_map(|c| c.output().map(|o| (o, c.group())))
        .collect();

    let order = netlist.topo_indices().expect("validated netlists are acyclic");
    for ci in order {
        let cell = &netlist.cells[ci];
        let group = cell.group();
        let mut best: Option<u32> = None;
        for (_, net) in cell.inputs() {
            let Some(&d) = depths.get(net) else { continue };
            let same_group = granularity == Granularity::Logical
                && group.is_some()
                && driver_group.get(net).copied().flatten() == group;
            let here = if same_group { d } else { d + 1 };
            best = Some(best.map_or(here, |b| b.max(here)));
        }
        if let (Some(d), Some(out)) = (best, cell.output()) {
            // the from-net itself stays at 0 even if some cell drives it
            depths.entry(out).and_modify(|e| *e = (*e).max(d)).or_insert(d);
            if Some(out) == from_net {
                depths.insert(out, 0);
            }
        }
    }

    Ok(TimingReport {
        granularity,
        from: from_net.map(String::from),
        depths: depths.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        outputs: netlist.outputs().into_iter().map(String::from).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::Library;
    use crate::generators::{gen_cpa, gen_rca};
    use crate::netlist::parse_netlist;

    #[test]
    fn not_chain_depth() {
        let n = parse_netlist(
            "design d\ninput a\noutput y\ncell i1 CMOS_NOT a=a out=n1\n\
             cell i2 CMOS_NOT a=n1 out=n2\ncell i3 CMOS_NOT a=n2 out=y\n",
        )
        .unwrap();
        let t = static_timing(&n, Granularity::Cell, None).unwrap();
        assert_eq!(t.depth("y"), Some(3));
        assert_eq!(t.critical_path(), Some(3));
        let t = static_timing(&n, Granularity::Cell, Some("n1")).unwrap();
        assert_eq!(t.depth("y"), Some(2));
        assert_eq!(t.depth("a"), None);
    }

    #[test]
    fn grouped_chain_collapses() {
        let n = parse_netlist(
            "design d\ninput a b c d\noutput y\ncell and.1 CMOS_AND2 a=a b=b out=t1\n\
             cell and.2 CMOS_AND2 a=t1 b=c out=t2\ncell and.3 CMOS_AND2 a=t2 b=d out=y\n",
        )
        .unwrap();
        assert_eq!(static_timing(&n, Granularity::Cell, None).unwrap().depth("y"), Some(3));
        assert_eq!(static_timing(&n, Granularity::Logical, None).unwrap().depth("y"), Some(1));
    }

    #[test]
    fn unknown_from_net() {
        let n = gen_rca(2, Library::Cmos);
        assert!(matches!(
            static_timing(&n, Granularity::Cell, Some("nope")),
            Err(SimError::UnknownNet(_))
        ));
    }

    #[test]
    fn carry_paths() {
        for lib in [Library::Gdi, Library::Cmos] {
            let rca = gen_rca(4, lib);
            let t = static_timing(&rca, Granularity::Cell, Some("C0")).unwrap();
            assert_eq!(t.depth("Cout"), Some(8), "{lib}");
            let cpa = gen_cpa(4, lib);
            for g in [Granularity::Cell, Granularity::Logical] {
                let t = static_timing(&cpa, g, Some("C0")).unwrap();
                for c in ["C[1]", "C[2]", "C[3]", "Cout"] {
                    assert_eq!(t.depth(c), Some(2), "{lib} {g} {c}");
                }
            }
            let rca_all = static_timing(&rca, Granularity::Cell, None).unwrap();
            let cpa_all = static_timing(&cpa, Granularity::Cell, None).unwrap();
            assert!(cpa_all.critical_path() < rca_all.critical_path(), "{lib}");
        }
    }
}
