use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::layout::LayoutMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("logical qubit {0} is used by the circuit but has no physical assignment")]
    Unmapped(usize),
    #[error("logical qubits {first} and {second} are both mapped to physical qubit {physical}")]
    NotInjective {
        first: usize,
        second: usize,
        physical: usize,
    },
    #[error("physical qubit {physical} does not fit a device of width {width}")]
    OutOfRange { physical: usize, width: usize },
    #[error("classical register `q` clashes with the emitted quantum register name")]
    RegisterNameClash,
}

/// Writes `circuit` as OpenQASM 2.0 over a single device register `q[width]`,
/// with every logical operand replaced by its physical qubit.
///
/// Gate order, opcodes, parameters, classical registers, includes and gate
/// declarations are carried over unchanged.
pub fn emit_qasm(circuit: &Circuit, layout: &LayoutMap, device_width: usize) -> Result<String, EmitError> {
    if circuit.cregs.iter().any(|r| r.name == "q") {
        return Err(EmitError::RegisterNameClash);
    }
    // Injectivity over the logical qubits this circuit declares.
    let mut seen = vec![None::<usize>; device_width];
    for (l, p) in layout.iter() {
        if l >= circuit.num_qubits() {
            continue;
        }
        if p >= device_width {
            return Err(EmitError::OutOfRange {
                physical: p,
                width: device_width,
            });
        }
        if let Some(first) = seen[p] {
            return Err(EmitError::NotInjective {
                first,
                second: l,
                physical: p,
            });
        }
        seen[p] = Some(l);
    }

    let flat = circuit.flat_gates();
    let mut out = String::from("OPENQASM 2.0;\n");
    for inc in &circuit.includes {
        let _ = writeln!(out, "include \"{inc}\";");
    }
    for def in &circuit.gate_defs {
        out.push_str(&def.source);
        out.push('\n');
    }
    let _ = writeln!(out, "qreg q[{device_width}];");
    for r in &circuit.cregs {
        let _ = writeln!(out, "creg {}[{}];", r.name, r.size);
    }

    for (gate, qubits) in circuit.gates.iter().zip(&flat) {
        let physical = qubits
            .iter()
            .map(|&l| layout.get(l).ok_or(EmitError::Unmapped(l)))
            .collect::<Result<Vec<_>, _>>()?;
        write_gate(&mut out, circuit, gate, &physical);
    }
    Ok(out)
}

fn write_gate(out: &mut String, circuit: &Circuit, gate: &Gate, physical: &[usize]) {
    if let Some(cond) = gate.condition {
        let _ = write!(out, "if({}=={}) ", circuit.cregs[cond.creg].name, cond.value);
    }
    let qargs = physical.iter().map(|p| format!("q[{p}]")).collect::<Vec<_>>().join(",");
    match gate.kind {
        GateKind::Measure => {
            let c = gate.clbits[0];
            let _ = writeln!(out, "measure {qargs} -> {}[{}];", circuit.cregs[c.reg].name, c.index);
        }
        GateKind::Reset | GateKind::Barrier => {
            let _ = writeln!(out, "{} {qargs};", gate.opcode);
        }
        GateKind::Unitary => {
            out.push_str(&gate.opcode);
            if !gate.params.is_empty() {
                let params = gate.params.iter().map(|p| format!("{p:?}")).collect::<Vec<_>>().join(",");
                let _ = write!(out, "({params})");
            }
            let _ = writeln!(out, " {qargs};");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    #[test]
    fn single_gate_substitution() {
        let c = parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[1],q[0];").unwrap();
        let layout = LayoutMap::from_pairs([(1, 25), (0, 22)]).unwrap();
        let out = emit_qasm(&c, &layout, 27).unwrap();
        assert_eq!(out, "OPENQASM 2.0;\nqreg q[27];\ncx q[25],q[22];\n");
    }

    #[test]
    fn identity_keeps_the_gate_text() {
        let src = "OPENQASM 2.0;\nqreg q[16];\ncreg c[16];\ncx q[1],q[0];\ncx q[2],q[1];\n";
        let c = parse_qasm(src).unwrap();
        let out = emit_qasm(&c, &LayoutMap::identity(0..16), 16).unwrap();
        assert_eq!(out, src);
    }

    #[test]
    fn unmapped_and_non_injective() {
        let c = parse_qasm("OPENQASM 2.0; qreg q[3]; cx q[0],q[2];").unwrap();
        let partial = LayoutMap::from_pairs([(0, 1)]).unwrap();
        assert_eq!(emit_qasm(&c, &partial, 5), Err(EmitError::Unmapped(2)));
        let wide = LayoutMap::from_pairs([(0, 1), (2, 9)]).unwrap();
        assert!(matches!(emit_qasm(&c, &wide, 5), Err(EmitError::OutOfRange { physical: 9, .. })));
    }

    #[test]
    fn directives_conditions_and_params_survive() {
        let src = r#"OPENQASM 2.0;
include "qelib1.inc";
gate foo a, b { cx a,b; }
qreg q[2];
creg m[2];
rz(pi/4) q[1];
foo q[0],q[1];
barrier q;
if (m == 3) x q[0];
measure q[1] -> m[0];
"#;
        let c = parse_qasm(src).unwrap();
        let layout = LayoutMap::from_pairs([(0, 4), (1, 2)]).unwrap();
        let out = emit_qasm(&c, &layout, 5).unwrap();
        assert_eq!(
            out,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\ngate foo a, b { cx a,b; }\nqreg q[5];\ncreg m[2];\n\
             rz(0.7853981633974483) q[2];\nfoo q[4],q[2];\nbarrier q[4],q[2];\nif(m==3) x q[4];\nmeasure q[2] -> m[0];\n"
        );
        let back = parse_qasm(&out).unwrap();
        assert_eq!(back.gates.len(), c.gates.len());
        assert_eq!(back.gates[0].params, c.gates[0].params);
    }
}
