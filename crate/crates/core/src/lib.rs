//! Switch-level modeling of Gate Diffusion Input (GDI) and static CMOS
//! adders: ternary logic with signal degradation, a textual netlist format,
//! ripple-carry and carry-lookahead generators, zero-delay simulation,
//! unit-delay timing, and area/power estimation.
//!
//! ```
//! use adderlab::cells::Library;
//! use adderlab::generators::gen_cpa;
//! use adderlab::metrics::{area, AreaModel};
//!
//! let cpa = gen_cpa(4, Library::Gdi);
//! assert_eq!(cpa.transistor_count(), 100);
//! assert!((area(&cpa, &AreaModel::default()) - 9.72).abs() < 1e-9);
//! ```

pub mod cells;
pub mod cli;
pub mod generators;
pub mod logic;
pub mod metrics;
pub mod netlist;
pub mod sim;

pub use cells::{CellKind, Library, Port};
pub use generators::{AdderSpec, Architecture};
pub use logic::{GateKind, LogicValue, Signal, TruthTable};
pub use netlist::{parse_netlist, serialize_netlist, Netlist};
pub use sim::{Simulator, Stimulus, Trace};
