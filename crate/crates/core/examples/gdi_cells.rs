//! Truth tables and swing degradation of the GDI and CMOS gates.

use adderlab::cells::{build_gate, gdi_eval, Library};
use adderlab::logic::{GateKind, LogicValue, Signal};
use adderlab::sim::evaluate_bits;

fn main() {
    for lib in [Library::Gdi, Library::Cmos] {
        for gate in [GateKind::And, GateKind::Or, GateKind::Xor] {
            let n = build_gate(lib, gate);
            println!("{lib} {gate:?}: {} transistors", n.transistor_count());
            for a in [false, true] {
                for b in [false, true] {
                    let out = evaluate_bits(&n, &[a, b])["OUT"];
                    println!(
                        "  {} {} -> {} (degradation {})",
                        a as u8,
                        b as u8,
                        out.value().as_char(),
                        out.degradation()
                    );
                }
            }
        }
    }

    // three weak passes in a row exceed the default limit of 2
    let mut s = Signal::strong(LogicValue::One);
    let sel = Signal::strong(LogicValue::One);
    let low = Signal::strong(LogicValue::Zero);
    for stage in 1..=3 {
        let out = gdi_eval(sel, low, s, 2);
        println!("stage {stage}: {:?} collapsed={:?}", out.signal, out.collapsed);
        s = out.signal;
    }
}
