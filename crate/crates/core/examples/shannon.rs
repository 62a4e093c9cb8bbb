//! Shannon expansion of the GDI multiplexer function and a brute-force sweep.

use adderlab::logic::{shannon_cofactors, shannon_identity_holds, TruthTable};

fn main() {
    // out = A̅·B + A·C, the function a GDI cell computes with A on G
    let mux = TruthTable::from_fn(3, |x| (!x[0] && x[1]) || (x[0] && x[2]));
    let (pos, neg) = shannon_cofactors(&mux, 1).unwrap();
    println!("F      = {:?}", mux.rows());
    println!("F|A=1  = {:?}  (C)", pos.rows());
    println!("F|A=0  = {:?}  (B)", neg.rows());

    let all = (0..256u64)
        .filter(|&bits| (1..=3).all(|v| shannon_identity_holds(&TruthTable::from_bits(3, bits), v).unwrap()))
        .count();
    println!("identity holds for {all}/256 three-input functions on every variable");
}
