//! Program IR: registers plus an ordered gate list.
//!
//! Qubit operands are stored as `(register, index)` pairs. Mapping code works
//! on *flattened* logical indices, where registers are laid out back to back
//! in declaration order.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub size: usize,
}

/// A single bit of a declared register: `reg` indexes into the circuit's
/// quantum or classical register list, depending on where it appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operand {
    pub reg: usize,
    pub index: usize,
}

impl Operand {
    pub fn new(reg: usize, index: usize) -> Self {
        Self { reg, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Unitary,
    Measure,
    Reset,
    Barrier,
}

/// Classical guard from `if (creg == value) ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition {
    pub creg: usize,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub opcode: String,
    pub kind: GateKind,
    /// Evaluated parameters, radians where angular.
    pub params: Vec<f64>,
    pub qubits: Vec<Operand>,
    pub clbits: Vec<Operand>,
    pub condition: Option<Condition>,
}

impl Gate {
    pub fn unitary(opcode: impl Into<String>, qubits: Vec<Operand>) -> Self {
        Self {
            opcode: opcode.into(),
            kind: GateKind::Unitary,
            params: Vec::new(),
            qubits,
            clbits: Vec::new(),
            condition: None,
        }
    }

    pub fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    /// Measure, reset and barrier. These never contribute qubit pairs.
    pub fn is_directive(&self) -> bool {
        !matches!(self.kind, GateKind::Unitary)
    }

    /// Exactly two qubit operands on a unitary gate, whatever the opcode.
    pub fn is_two_qubit(&self) -> bool {
        self.kind == GateKind::Unitary && self.qubits.len() == 2
    }
}

/// A user `gate`/`opaque` declaration. Calls to it stay opaque; the text is
/// kept verbatim so a remapped program still declares it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDef {
    pub name: String,
    pub num_params: usize,
    pub num_qubits: usize,
    pub opaque: bool,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub source_name: String,
    pub qregs: Vec<Register>,
    pub cregs: Vec<Register>,
    pub gates: Vec<Gate>,
    /// Paths from `include "...";` lines, in order.
    pub includes: Vec<String>,
    pub gate_defs: Vec<GateDef>,
}

impl Circuit {
    pub fn new(source_name: impl Into<String>) -> Self {
        Self {
            source_name: source_name.into(),
            ..Self::default()
        }
    }

    /// Circuit over a single `q[num_qubits]` register, handy for tests and
    /// synthetic workloads.
    pub fn with_qubits(source_name: impl Into<String>, num_qubits: usize) -> Self {
        let mut c = Self::new(source_name);
        c.qregs.push(Register {
            name: "q".into(),
            size: num_qubits,
        });
        c
    }

    /// Appends a unitary gate on flattened logical indices.
    ///
    /// Panics if an index is outside the declared quantum registers.
    pub fn push(&mut self, opcode: &str, qubits: &[usize]) {
        let ops = qubits.iter().map(|&q| self.operand_of(q)).collect();
        self.gates.push(Gate::unitary(opcode, ops));
    }

    /// Total number of logical qubits across all quantum registers.
    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|r| r.size).sum()
    }

    fn qubit_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.qregs
            .iter()
            .map(|r| {
                let off = acc;
                acc += r.size;
                off
            })
            .collect()
    }

    /// Flattened logical index of a qubit operand.
    pub fn flat_qubit(&self, op: Operand) -> usize {
        self.qregs[..op.reg].iter().map(|r| r.size).sum::<usize>() + op.index
    }

    /// Inverse of [`Circuit::flat_qubit`].
    pub fn operand_of(&self, flat: usize) -> Operand {
        let mut rest = flat;
        for (reg, r) in self.qregs.iter().enumerate() {
            if rest < r.size {
                return Operand::new(reg, rest);
            }
            rest -= r.size;
        }
        panic!("logical qubit {flat} outside declared registers");
    }

    /// Flattened qubit operands of every gate, in gate order.
    pub fn flat_gates(&self) -> Vec<Vec<usize>> {
        let offsets = self.qubit_offsets();
        self.gates
            .iter()
            .map(|g| g.qubits.iter().map(|o| offsets[o.reg] + o.index).collect())
            .collect()
    }

    /// Every logical qubit that appears as an operand of any gate.
    pub fn referenced_qubits(&self) -> BTreeSet<usize> {
        self.flat_gates().into_iter().flatten().collect()
    }

    /// Per logical qubit, the number of gate operand slots it occupies.
    pub fn qubit_usage(&self) -> Vec<usize> {
        let mut usage = vec![0; self.num_qubits()];
        for q in self.flat_gates().into_iter().flatten() {
            usage[q] += 1;
        }
        usage
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Unitary gates with three or more qubit operands. They carry no pair
    /// symbol but are still counted in reports.
    pub fn multi_qubit_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Unitary && g.qubits.len() > 2)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flattening_follows_declaration_order() {
        let mut c = Circuit::new("t");
        c.qregs.push(Register { name: "a".into(), size: 2 });
        c.qregs.push(Register { name: "b".into(), size: 3 });
        assert_eq!(c.num_qubits(), 5);
        assert_eq!(c.flat_qubit(Operand::new(1, 0)), 2);
        assert_eq!(c.operand_of(4), Operand::new(1, 2));
        for q in 0..5 {
            assert_eq!(c.flat_qubit(c.operand_of(q)), q);
        }
    }

    #[test]
    fn usage_counts_operand_slots() {
        let mut c = Circuit::with_qubits("t", 3);
        c.push("cx", &[0, 1]);
        c.push("x", &[0]);
        assert_eq!(c.qubit_usage(), vec![2, 1, 0]);
        assert_eq!(c.referenced_qubits().into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(c.two_qubit_gate_count(), 1);
    }
}
