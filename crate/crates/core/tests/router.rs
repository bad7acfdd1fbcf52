use std::collections::BTreeMap;

use qlayout::device::{Calibration, CouplingGraph};
use qlayout::layout::{LayoutMap, Method};
use qlayout::route::{compute_metrics, identity_layout, route, RoutedCircuit};
use qlayout::{map, synth, Circuit};
use rand::seq::SliceRandom;

/// Replays the routed program, undoing inserted swaps, and checks that the
/// original logical gate sequence comes back out.
fn audit(original: &Circuit, layout: &LayoutMap, routed: &RoutedCircuit, g: &CouplingGraph) {
    let mut at: BTreeMap<usize, usize> = layout.iter().map(|(l, p)| (p, l)).collect();
    let mut logical_gates = Vec::new();
    for ((gate, q), &ins) in routed.circuit.gates.iter().zip(routed.circuit.flat_gates()).zip(&routed.inserted) {
        if gate.is_two_qubit() {
            assert!(g.has_edge(q[0], q[1]), "{} on non-edge {:?}", gate.opcode, q);
        }
        if ins {
            assert_eq!(gate.opcode, "swap");
            let (a, b) = (at.remove(&q[0]), at.remove(&q[1]));
            if let Some(l) = a {
                at.insert(q[1], l);
            }
            if let Some(l) = b {
                at.insert(q[0], l);
            }
        } else {
            let qs: Vec<usize> = q.iter().map(|p| at[p]).collect();
            logical_gates.push((gate.opcode.clone(), qs));
        }
    }
    let expected: Vec<(String, Vec<usize>)> = original
        .gates
        .iter()
        .zip(original.flat_gates())
        .map(|(g, q)| (g.opcode.clone(), q))
        .collect();
    assert_eq!(logical_gates, expected);
    let final_at: BTreeMap<usize, usize> = routed.final_placement.iter().map(|(l, p)| (p, l)).collect();
    assert_eq!(final_at, at);
}

#[test]
fn random_layouts_pass_the_adjacency_audit() {
    let g = CouplingGraph::builtin("kolkata").unwrap();
    let mut rng = synth::rng(4242);
    for i in 0..50 {
        let n = 2 + i % 26;
        let c = synth::random_circuit(&mut rng, "r", n, 200);
        let mut phys: Vec<usize> = (0..g.width()).collect();
        phys.shuffle(&mut rng);
        let layout = LayoutMap::from_pairs((0..n).zip(phys)).unwrap();
        let r = route(&c, &layout, &g).unwrap();
        audit(&c, &layout, &r, &g);
        let (before, after) = (compute_metrics(&c, false), compute_metrics(&r.circuit, false));
        assert_eq!(after.gate_volume, before.gate_volume + r.swap_count);
        assert!(after.depth <= after.gate_volume);
    }
}

#[test]
fn mapped_layouts_pass_the_adjacency_audit() {
    let g = CouplingGraph::builtin("manhattan").unwrap();
    let cal = Calibration::neutral(&g);
    let mut rng = synth::rng(7);
    for i in 0..12 {
        let c = synth::repeated_block_circuit(&mut rng, "b", 5 + 5 * (i % 6), 12, 6);
        for m in Method::ALL {
            let l = map(&c, &g, &cal, m).unwrap();
            audit(&c, &l, &route(&c, &l, &g).unwrap(), &g);
        }
        let id = identity_layout(&c, &g).unwrap();
        audit(&c, &id, &route(&c, &id, &g).unwrap(), &g);
    }
}
