//! Ternary logic values, gate semantics, and Shannon cofactoring.
//!
//! Truth tables index their minterms with `x1` as the most significant bit,
//! so for arity 3 the row index is `x1·4 + x2·2 + x3`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("{kind} expects {expected} input(s), got {got}")]
    Arity {
        kind: GateKind,
        expected: &'static str,
        got: usize,
    },
    #[error("variable index {index} out of range for arity {arity} (expected 1..={arity})")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("truth table of arity {arity} needs {expected} rows, got {got}")]
    TableLength {
        arity: usize,
        expected: usize,
        got: usize,
    },
}

/// A three-state logic level. `X` is unknown or conflicting, never "undriven".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicValue {
    Zero,
    One,
    X,
}

impl LogicValue {
    pub const ALL: [LogicValue; 3] = [LogicValue::Zero, LogicValue::One, LogicValue::X];

    pub fn from_bool(b: bool) -> Self {
        if b {
            LogicValue::One
        } else {
            LogicValue::Zero
        }
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            LogicValue::Zero => Some(false),
            LogicValue::One => Some(true),
            LogicValue::X => None,
        }
    }

    pub fn is_known(self) -> bool {
        self != LogicValue::X
    }

    pub fn as_char(self) -> char {
        match self {
            LogicValue::Zero => '0',
            LogicValue::One => '1',
            LogicValue::X => 'X',
        }
    }
}

impl From<bool> for LogicValue {
    fn from(b: bool) -> Self {
        LogicValue::from_bool(b)
    }
}

impl fmt::Display for LogicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A logic value together with the number of threshold drops it has picked
/// up on its way through pass transistors. Zero means full swing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signal {
    value: LogicValue,
    degradation: u32,
}

impl Signal {
    pub const X: Signal = Signal {
        value: LogicValue::X,
        degradation: 0,
    };

    /// Full-swing signal.
    pub fn strong(value: LogicValue) -> Self {
        Signal {
            value,
            degradation: 0,
        }
    }

    /// `X` never carries a degradation; it is dropped to 0 here.
    pub fn new(value: LogicValue, degradation: u32) -> Self {
        let degradation = if value == LogicValue::X {
            0
        } else {
            degradation
        };
        Signal { value, degradation }
    }

    pub fn value(&self) -> LogicValue {
        self.value
    }

    pub fn degradation(&self) -> u32 {
        self.degradation
    }

    pub fn is_degraded(&self) -> bool {
        self.degradation > 0
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degradation == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{}~{}", self.value, self.degradation)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 4] = [GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Not];

    pub fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::Not => n == 1,
            GateKind::Xor => n == 2,
            GateKind::And | GateKind::Or => n >= 2,
        }
    }

    fn arity_text(self) -> &'static str {
        match self {
            GateKind::Not => "exactly 1",
            GateKind::Xor => "exactly 2",
            GateKind::And | GateKind::Or => "at least 2",
        }
    }

    /// Boolean reference definition.
    pub fn eval_bool(self, inputs: &[bool]) -> bool {
        match self {
            GateKind::And => inputs.iter().all(|&b| b),
            GateKind::Or => inputs.iter().any(|&b| b),
            GateKind::Xor => inputs.iter().fold(false, |acc, &b| acc ^ b),
            GateKind::Not => !inputs[0],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Not => "NOT",
        };
        f.write_str(s)
    }
}

/// Pessimistic-X evaluation: a controlling input decides the output even
/// next to an `X`; otherwise any `X` input makes the output `X`.
pub fn eval_gate(kind: GateKind, inputs: &[LogicValue]) -> Result<LogicValue, LogicError> {
    if !kind.arity_ok(inputs.len()) {
        return Err(LogicError::Arity {
            kind,
            expected: kind.arity_text(),
            got: inputs.len(),
        });
    }
    let controlling = match kind {
        GateKind::And => Some(LogicValue::Zero),
        GateKind::Or => Some(LogicValue::One),
        GateKind::Xor | GateKind::Not => None,
    };
    if let Some(c) = controlling {
        if inputs.contains(&c) {
            return Ok(c);
        }
    }
    let bits: Option<Vec<bool>> = inputs.iter().map(|v| v.to_bool()).collect();
    Ok(match bits {
        Some(bits) => LogicValue::from_bool(kind.eval_bool(&bits)),
        None => LogicValue::X,
    })
}

/// A complete Boolean function of `arity` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    rows: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, rows: Vec<bool>) -> Result<Self, LogicError> {
        let expected = 1usize << arity;
        if rows.len() != expected {
            return Err(LogicError::TableLength {
                arity,
                expected,
                got: rows.len(),
            });
        }
        Ok(TruthTable { arity, rows })
    }

    /// Builds a table by calling `f` with `[x1, x2, ..., xn]` for every row.
    pub fn from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> bool) -> Self {
        let rows = (0..1usize << arity)
            .map(|row| f(&Self::row_inputs(arity, row)))
            .collect();
        TruthTable { arity, rows }
    }

    /// Row `i` of the table takes bit `i` of `bits`.
    pub fn from_bits(arity: usize, bits: u64) -> Self {
        assert!(arity <= 6, "from_bits supports arity up to 6");
        let rows = (0..1usize << arity).map(|i| bits >> i & 1 == 1).collect();
        TruthTable { arity, rows }
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        TruthTable {
            arity,
            rows: vec![value; 1 << arity],
        }
    }

    /// Projection onto variable `var` (1-based).
    pub fn variable(arity: usize, var: usize) -> Self {
        Self::from_fn(arity, |x| x[var - 1])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[bool] {
        &self.rows
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        assert_eq!(inputs.len(), self.arity);
        let idx = inputs.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        self.rows[idx]
    }

    pub fn output(&self, row: usize) -> LogicValue {
        LogicValue::from_bool(self.rows[row])
    }

    fn row_inputs(arity: usize, row: usize) -> Vec<bool> {
        (0..arity).map(|k| row >> (arity - 1 - k) & 1 == 1).collect()
    }

    fn check_var(&self, var_index: usize) -> Result<(), LogicError> {
        if var_index == 0 || var_index > self.arity {
            return Err(LogicError::VariableOutOfRange {
                index: var_index,
                arity: self.arity,
            });
        }
        Ok(())
    }
}

/// Positive and negative cofactors of `tt` with respect to `x{var_index}`.
pub fn shannon_cofactors(
    tt: &TruthTable,
    var_index: usize,
) -> Result<(TruthTable, TruthTable), LogicError> {
    tt.check_var(var_index)?;
    let k = var_index - 1;
    let cofactor = |value: bool| {
        TruthTable::from_fn(tt.arity - 1, |rest| {
            let mut full = Vec::with_capacity(tt.arity);
            full.extend_from_slice(&rest[..k]);
            full.push(value);
            full.extend_from_slice(&rest[k..]);
            tt.eval(&full)
        })
    };
    Ok((cofactor(true), cofactor(false)))
}

/// Checks `F = x·F|x=1 + x̄·F|x=0` row by row.
pub fn shannon_identity_holds(tt: &TruthTable, var_index: usize) -> Result<bool, LogicError> {
    let (pos, neg) = shannon_cofactors(tt, var_index)?;
    let k = var_index - 1;
    let holds = (0..1usize << tt.arity).all(|row| {
        let inputs = TruthTable::row_inputs(tt.arity, row);
        let mut rest = inputs.clone();
        let x = rest.remove(k);
        let recombined = (x && pos.eval(&rest)) || (!x && neg.eval(&rest));
        recombined == tt.eval(&inputs)
    });
    Ok(holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use LogicValue::{One, Zero, X};

    #[test]
    fn controlling_values() {
        assert_eq!(eval_gate(GateKind::And, &[Zero, X]).unwrap(), Zero);
        assert_eq!(eval_gate(GateKind::Or, &[One, X]).unwrap(), One);
        assert_eq!(eval_gate(GateKind::Xor, &[One, X]).unwrap(), X);
        assert_eq!(eval_gate(GateKind::And, &[One, X]).unwrap(), X);
        assert_eq!(eval_gate(GateKind::Not, &[X]).unwrap(), X);
    }

    #[test]
    fn arity_errors() {
        assert!(eval_gate(GateKind::Not, &[One, One]).is_err());
        assert!(eval_gate(GateKind::Xor, &[One, One, One]).is_err());
        assert!(eval_gate(GateKind::And, &[One]).is_err());
        assert!(eval_gate(GateKind::Or, &[]).is_err());
    }

    #[test]
    fn boolean_agreement_up_to_arity_5() {
        for kind in GateKind::ALL {
            for n in 1..=5usize {
                if !kind.arity_ok(n) {
                    continue;
                }
                for bits in 0..1u32 << n {
                    let bools: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                    let vals: Vec<LogicValue> = bools.iter().map(|&b| b.into()).collect();
                    let expected = match kind {
                        GateKind::And => bits == (1 << n) - 1,
                        GateKind::Or => bits != 0,
                        GateKind::Xor => bits.count_ones() % 2 == 1,
                        GateKind::Not => bits == 0,
                    };
                    assert_eq!(
                        eval_gate(kind, &vals).unwrap(),
                        LogicValue::from_bool(expected),
                        "{kind} {bools:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn signal_x_has_no_degradation() {
        assert_eq!(Signal::new(X, 3).degradation(), 0);
        assert_eq!(Signal::new(One, 3).degradation(), 3);
    }

    #[test]
    fn xor_cofactors() {
        let xor2 = TruthTable::from_fn(2, |x| x[0] ^ x[1]);
        let (pos, neg) = shannon_cofactors(&xor2, 1).unwrap();
        assert_eq!(pos, TruthTable::from_fn(1, |x| !x[0]));
        assert_eq!(neg, TruthTable::variable(1, 1));
        assert!(shannon_identity_holds(&xor2, 1).unwrap());
    }

    #[test]
    fn constant_cofactors() {
        let one = TruthTable::constant(2, true);
        let (pos, neg) = shannon_cofactors(&one, 2).unwrap();
        assert_eq!(pos, TruthTable::constant(1, true));
        assert_eq!(neg, TruthTable::constant(1, true));
    }

    #[test]
    fn mux_is_shannon_form() {
        // G selects between N (x3) and P (x2)
        let mux = TruthTable::from_fn(3, |x| (x[0] && x[2]) || (!x[0] && x[1]));
        assert!(shannon_identity_holds(&mux, 1).unwrap());
        let (pos, neg) = shannon_cofactors(&mux, 1).unwrap();
        assert_eq!(pos, TruthTable::variable(2, 2));
        assert_eq!(neg, TruthTable::variable(2, 1));
    }

    #[test]
    fn var_index_out_of_range() {
        let tt = TruthTable::constant(2, false);
        assert!(shannon_cofactors(&tt, 0).is_err());
        assert!(shannon_cofactors(&tt, 3).is_err());
        assert!(shannon_identity_holds(&TruthTable::constant(0, true), 1).is_err());
    }

    #[test]
    fn bad_table_length() {
        assert!(TruthTable::new(2, vec![true; 3]).is_err());
    }

    #[test]
    fn all_arity3_tables_recombine() {
        for bits in 0..256u64 {
            let tt = TruthTable::from_bits(3, bits);
            for var in 1..=3 {
                let (pos, neg) = shannon_cofactors(&tt, var).unwrap();
                // rebuild by brute force and compare whole tables
                let rebuilt = TruthTable::from_fn(3, |x| {
                    let mut rest = x.to_vec();
                    let v = rest.remove(var - 1);
                    if v {
                        pos.eval(&rest)
                    } else {
                        neg.eval(&rest)
                    }
                });
                assert_eq!(rebuilt, tt);
                assert!(shannon_identity_holds(&tt, var).unwrap());
            }
        }
    }

    fn ternary() -> impl Strategy<Value = LogicValue> {
        prop_oneof![Just(Zero), Just(One), Just(X)]
    }

    proptest! {
        #[test]
        fn refining_x_never_changes_known_output(
            kind in prop_oneof![Just(GateKind::And), Just(GateKind::Or), Just(GateKind::Xor), Just(GateKind::Not)],
            inputs in prop::collection::vec(ternary(), 1..6),
            refine in prop::collection::vec(any::<bool>(), 6),
        ) {
            prop_assume!(kind.arity_ok(inputs.len()));
            let before = eval_gate(kind, &inputs).unwrap();
            let refined: Vec<LogicValue> = inputs
                .iter()
                .zip(&refine)
                .map(|(&v, &r)| if v == X { LogicValue::from_bool(r) } else { v })
                .collect();
            let after = eval_gate(kind, &refined).unwrap();
            if before != X {
                prop_assert_eq!(before, after);
            }
        }
    }
}
