//! Seeded synthetic workloads for tests, benches and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Condition, Gate, GateKind, Operand, Register};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn distinct_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Random mix of one-, two- and three-qubit gates plus the occasional
/// barrier, measurement and conditional. Needs at least two qubits.
pub fn random_circuit(rng: &mut impl Rng, name: &str, num_qubits: usize, num_gates: usize) -> Circuit {
    assert!(num_qubits >= 2);
    let mut c = Circuit::with_qubits(name, num_qubits);
    c.cregs.push(Register {
        name: "c".into(),
        size: num_qubits,
    });
    let op = |q: usize| Operand::new(0, q);
    for _ in 0..num_gates {
        let roll = rng.gen_range(0..100);
        let gate = match roll {
            0..=44 => {
                let (a, b) = distinct_pair(rng, num_qubits);
                Gate::unitary("cx", vec![op(a), op(b)])
            }
            45..=49 => {
                let (a, b) = distinct_pair(rng, num_qubits);
                Gate::unitary(if roll % 2 == 0 { "cz" } else { "swap" }, vec![op(a), op(b)])
            }
            50..=79 => {
                let name = ["h", "x", "t", "s", "sdg"][rng.gen_range(0..5)];
                Gate::unitary(name, vec![op(rng.gen_range(0..num_qubits))])
            }
            80..=91 => Gate::unitary("rz", vec![op(rng.gen_range(0..num_qubits))])
                .with_params(vec![rng.gen_range(-3.2..3.2)]),
            92..=93 if num_qubits >= 3 => {
                let mut qs: Vec<usize> = (0..num_qubits).collect();
                qs.shuffle(rng);
                Gate::unitary("ccx", qs[..3].iter().map(|&q| op(q)).collect())
            }
            94..=95 => {
                let k = rng.gen_range(1..=num_qubits.min(4));
                let mut qs: Vec<usize> = (0..num_qubits).collect();
                qs.shuffle(rng);
                Gate {
                    kind: GateKind::Barrier,
                    ..Gate::unitary("barrier", qs[..k].iter().map(|&q| op(q)).collect())
                }
            }
            96..=97 => {
                let q = rng.gen_range(0..num_qubits);
                Gate {
                    kind: GateKind::Measure,
                    clbits: vec![Operand::new(0, q)],
                    ..Gate::unitary("measure", vec![op(q)])
                }
            }
            _ => {
                let mut g = Gate::unitary("x", vec![op(rng.gen_range(0..num_qubits))]);
                g.condition = Some(Condition {
                    creg: 0,
                    value: rng.gen_range(0..4),
                });
                g
            }
        };
        c.gates.push(gate);
    }
    c
}

/// A random block of `block_len` `cx` gates (with a sprinkling of one-qubit
/// gates) repeated `repeats` times back to back.
pub fn repeated_block_circuit(
    rng: &mut impl Rng,
    name: &str,
    num_qubits: usize,
    block_len: usize,
    repeats: usize,
) -> Circuit {
    assert!(num_qubits >= 2);
    let mut c = Circuit::with_qubits(name, num_qubits);
    let mut block = Vec::with_capacity(block_len);
    for _ in 0..block_len {
        let (a, b) = distinct_pair(rng, num_qubits);
        block.push(("cx", vec![a, b]));
        if rng.gen_bool(0.2) {
            block.push(("h", vec![rng.gen_range(0..num_qubits)]));
        }
    }
    for _ in 0..repeats {
        for (name, qs) in &block {
            c.push(name, qs);
        }
    }
    c
}

/// Deterministic corpus of `count` circuits whose gate counts grow
/// geometrically from `min_gates` to `max_gates`. Even entries are
/// unstructured, odd entries are built from repeated blocks (the last repeat
/// may be partial). Qubit counts
/// stay within `max_qubits`.
pub fn corpus(seed: u64, count: usize, min_gates: usize, max_gates: usize, max_qubits: usize) -> Vec<Circuit> {
    assert!(count >= 2 && min_gates >= 1 && max_gates >= min_gates && max_qubits >= 3);
    let mut r = rng(seed);
    let ratio = (max_gates as f64 / min_gates as f64).powf(1.0 / (count - 1) as f64);
    (0..count)
        .map(|i| {
            let gates = ((min_gates as f64) * ratio.powi(i as i32)).round() as usize;
            let gates = gates.clamp(min_gates, max_gates);
            let qubits = r.gen_range(3..=max_qubits);
            if i % 2 == 0 {
                random_circuit(&mut r, &format!("rand_{i:02}_{gates}"), qubits, gates)
            } else {
                let repeats = r.gen_range(2..=20).min(gates);
                let block = (gates / repeats).max(1);
                // roughly `gates` entries once the optional one-qubit gates are added
                let block = ((block as f64) / 1.2).ceil() as usize;
                // one spare repeat, then cut to the exact size
                let mut c = repeated_block_circuit(&mut r, &format!("block_{i:02}_{gates}"), qubits, block, repeats + 1);
                c.gates.truncate(gates);
                c
            }
        })
        .collect()
}
