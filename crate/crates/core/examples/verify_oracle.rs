//! Checks adders against integer addition and shows a counterexample for a
//! deliberately broken netlist.

use adderlab::cells::{CellKind, Library};
use adderlab::generators::{AdderSpec, Architecture};
use adderlab::sim::{verify_against_oracle, VerifyMode};

fn main() {
    for lib in [Library::Gdi, Library::Cmos] {
        for arch in [Architecture::Rca, Architecture::Cpa] {
            let spec = AdderSpec::new(arch, 4, lib).unwrap();
            let r = verify_against_oracle(&spec.generate(), &spec, VerifyMode::Exhaustive).unwrap();
            print!("{spec}: {r}");
        }
    }

    let spec = AdderSpec::new(Architecture::Cpa, 16, Library::Cmos).unwrap();
    let mut broken = spec.generate();
    let cell = broken.cells.iter_mut().find(|c| c.kind == CellKind::CmosOr2).unwrap();
    println!("breaking {} (OR -> AND)", cell.id);
    cell.kind = CellKind::CmosAnd2;
    let r = verify_against_oracle(&broken, &spec, VerifyMode::Random { vectors: 10_000, seed: 1 }).unwrap();
    print!("{r}");
}
