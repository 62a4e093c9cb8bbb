//! GDI versus CMOS area and switching power on shared stimulus.

use adderlab::cells::Library;
use adderlab::generators::{AdderSpec, Architecture};
use adderlab::metrics::{compare, measure, MeasureConfig};
use adderlab::sim::Stimulus;

fn main() {
    let config = MeasureConfig::default();
    let mut reports = Vec::new();
    for arch in [Architecture::Rca, Architecture::Cpa] {
        for width in [4, 8] {
            for lib in [Library::Gdi, Library::Cmos] {
                let n = AdderSpec::new(arch, width, lib).unwrap().generate();
                let nets = n.inputs().into_iter().map(String::from).collect();
                let stimulus = Stimulus::random(nets, 1000, 1);
                let r = measure(&n, &stimulus, &config).unwrap();
                eprintln!("{}", r.summary());
                reports.push(r);
            }
        }
    }
    print!("{}", compare(&reports));
}
