//! Carry-path depth of ripple versus lookahead adders.

use adderlab::cells::Library;
use adderlab::generators::{AdderSpec, Architecture};
use adderlab::sim::{static_timing, Granularity};

fn main() {
    println!("{:<12} {:>8} {:>8} {:>9}", "design", "logical", "cell", "critical");
    for width in [4, 8, 16, 32] {
        for arch in [Architecture::Rca, Architecture::Cpa] {
            let n = AdderSpec::new(arch, width, Library::Cmos).unwrap().generate();
            let logical = static_timing(&n, Granularity::Logical, Some("C0")).unwrap();
            let cell = static_timing(&n, Granularity::Cell, Some("C0")).unwrap();
            let all = static_timing(&n, Granularity::Cell, None).unwrap();
            println!(
                "{:<12} {:>8} {:>8} {:>9}",
                n.design_name,
                logical.depth("Cout").unwrap(),
                cell.depth("Cout").unwrap(),
                all.critical_path().unwrap()
            );
        }
    }
}
