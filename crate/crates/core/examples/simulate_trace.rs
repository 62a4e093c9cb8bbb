//! Runs a random stimulus through a GDI carry-lookahead adder and reports
//! switching activity; the partitioned run gives identical counts.

use adderlab::cells::Library;
use adderlab::generators::gen_cpa;
use adderlab::sim::{Simulator, Stimulus};

fn main() {
    let n = gen_cpa(8, Library::Gdi);
    let sim = Simulator::new(&n).unwrap();
    let nets = sim.input_nets().into_iter().map(String::from).collect();
    let stimulus = Stimulus::random(nets, 2000, 1);

    let trace = sim.run_trace(&stimulus).unwrap();
    let split = sim.run_trace_partitioned(&stimulus, 8).unwrap();
    assert_eq!(trace.toggles, split.toggles);

    println!("{} cycles, {} toggles, {} collapses", trace.cycles, trace.total_toggles(), trace.collapses);
    let mut busiest: Vec<_> = trace.toggles.iter().collect();
    busiest.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for (net, t) in busiest.iter().take(8) {
        println!("  {net:<10} {t}");
    }
    let worst = trace.peak_degradation.values().max().copied().unwrap_or(0);
    println!("worst degradation seen: {worst}");
}
