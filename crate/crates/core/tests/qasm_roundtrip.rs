use qlayout::layout::LayoutMap;
use qlayout::qasm::{emit_qasm, parse_named, parse_qasm};
use qlayout::synth;

#[test]
fn identity_emit_round_trips_random_circuits() {
    let mut rng = synth::rng(0xC0FFEE);
    for i in 0..50 {
        let n = 2 + i % 9;
        let c = synth::random_circuit(&mut rng, "r", n, 20 + 7 * i);
        let text = emit_qasm(&c, &LayoutMap::identity(0..n), n).unwrap();
        let back = parse_named(&text, "r").unwrap();
        assert_eq!(back, c, "circuit {i}");
        // a second trip is a fixed point on the text
        assert_eq!(emit_qasm(&back, &LayoutMap::identity(0..n), n).unwrap(), text);
    }
}

#[test]
fn permuted_emit_preserves_structure() {
    let mut rng = synth::rng(17);
    let c = synth::random_circuit(&mut rng, "r", 5, 300);
    let layout = LayoutMap::from_pairs([(0, 9), (1, 3), (2, 0), (3, 7), (4, 1)]).unwrap();
    let back = parse_qasm(&emit_qasm(&c, &layout, 10).unwrap()).unwrap();
    assert_eq!(back.num_qubits(), 10);
    assert_eq!(back.gates.len(), c.gates.len());
    for ((g, q), (h, r)) in c.gates.iter().zip(c.flat_gates()).zip(back.gates.iter().zip(back.flat_gates())) {
        assert_eq!((&g.opcode, &g.params, g.kind, g.condition), (&h.opcode, &h.params, h.kind, h.condition));
        let mapped: Vec<usize> = q.iter().map(|&l| layout.get(l).unwrap()).collect();
        assert_eq!(mapped, r);
    }
}

#[test]
fn multi_register_programs_flatten_in_declaration_order() {
    let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg a[2];\nqreg b[3];\ncreg c[1];\ncx a[1],b[2];\nmeasure b[0] -> c[0];\n";
    let c = parse_qasm(src).unwrap();
    assert_eq!(c.flat_gates(), vec![vec![1, 4], vec![2]]);
    let out = emit_qasm(&c, &LayoutMap::identity(0..5), 6).unwrap();
    assert!(out.contains("cx q[1],q[4];"));
    assert!(out.contains("measure q[2] -> c[0];"));
}
