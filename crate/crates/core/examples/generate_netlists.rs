//! Generates every adder flavour, prints sizes, and writes one netlist out.

use adderlab::cells::Library;
use adderlab::generators::{two_level_carry_formula, AdderSpec, Architecture};
use adderlab::metrics::{area, AreaModel};
use adderlab::netlist::serialize_netlist;

fn main() {
    let model = AreaModel::default();
    for arch in [Architecture::Rca, Architecture::Cpa] {
        for width in [4, 8, 16] {
            for lib in [Library::Gdi, Library::Cmos] {
                let n = AdderSpec::new(arch, width, lib).unwrap().generate();
                println!(
                    "{:<12} {:>4} cells {:>5} transistors {:>9.4} um2",
                    n.design_name,
                    n.cells.len(),
                    n.transistor_count(),
                    area(&n, &model)
                );
            }
        }
    }
    for i in 1..=4 {
        println!("{}", two_level_carry_formula(i).unwrap());
    }
    let fa = AdderSpec::new(Architecture::Rca, 1, Library::Gdi).unwrap().generate();
    print!("\n{}", serialize_netlist(&fa));
}
