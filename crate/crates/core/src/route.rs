//! Greedy swap-insertion router and circuit quality metrics.
//!
//! The router exists so layouts can be scored without an external compiler.
//! It has no lookahead: a non-adjacent two-qubit gate drags its first operand
//! along a shortest path until it touches the second.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, Operand, Register};
use crate::device::CouplingGraph;
use crate::exec::{map_items, Execution};
use crate::layout::{LayoutError, LayoutMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("logical qubit {0} has no physical assignment")]
    Unmapped(usize),
    #[error("physical qubits {a} and {b} are not connected on the device")]
    Disconnected { a: usize, b: usize },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// A routed program over physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Single register `q[width]`; classical registers copied from the input.
    pub circuit: Circuit,
    /// Marks the gates the router inserted.
    pub inserted: Vec<bool>,
    pub swap_count: usize,
    /// Logical to physical placement after the last gate.
    pub final_placement: LayoutMap,
}

/// All-pairs hop distances, filled by one BFS per qubit.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    dist: Vec<Vec<Option<usize>>>,
}

impl DistanceTable {
    pub fn new(graph: &CouplingGraph) -> Self {
        Self {
            dist: (0..graph.width()).map(|q| graph.bfs(q)).collect(),
        }
    }

    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.dist[a][b]
    }

    /// Lexicographically smallest shortest path from `a` to `b`, both ends
    /// included.
    pub fn path(&self, graph: &CouplingGraph, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut d = self.get(a, b)?;
        let mut path = vec![a];
        let mut cur = a;
        while d > 0 {
            cur = *graph
                .neighbors(cur)
                .iter()
                .find(|&&n| self.dist[n][b] == Some(d - 1))
                .expect("a neighbour one hop closer exists on a shortest path");
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }
}

/// Physical placement that moves as swaps are applied.
struct Placement {
    phys: BTreeMap<usize, usize>,
    logical: Vec<Option<usize>>,
}

impl Placement {
    fn new(layout: &LayoutMap, width: usize) -> Self {
        let mut logical = vec![None; width];
        for (l, p) in layout.iter() {
            logical[p] = Some(l);
        }
        Self {
            phys: layout.assignment().clone(),
            logical,
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.logical[a], self.logical[b]);
        self.logical[a] = lb;
        self.logical[b] = la;
        if let Some(l) = la {
            self.phys.insert(l, b);
        }
        if let Some(l) = lb {
            self.phys.insert(l, a);
        }
    }
}

fn physical_gate(gate: &Gate, physical: &[usize]) -> Gate {
    Gate {
        qubits: physical.iter().map(|&p| Operand::new(0, p)).collect(),
        ..gate.clone()
    }
}

fn swap_gate(a: usize, b: usize) -> Gate {
    Gate::unitary("swap", vec![Operand::new(0, a), Operand::new(0, b)])
}

/// Routes `circuit` under the initial `layout`.
///
/// Gates with one qubit, directives and gates with three or more qubits pass
/// through with their operands translated; only two-qubit gates trigger
/// swaps.
pub fn route(circuit: &Circuit, layout: &LayoutMap, graph: &CouplingGraph) -> Result<RoutedCircuit, RouteError> {
    route_with(circuit, layout, graph, &DistanceTable::new(graph))
}

/// [`route`] with a precomputed distance table.
pub fn route_with(
    circuit: &Circuit,
    layout: &LayoutMap,
    graph: &CouplingGraph,
    table: &DistanceTable,
) -> Result<RoutedCircuit, RouteError> {
    layout.validate(graph)?;
    let width = graph.width();
    let mut out = Circuit::new(circuit.source_name.clone());
    out.qregs.push(Register {
        name: "q".into(),
        size: width,
    });
    out.cregs = circuit.cregs.clone();
    out.includes = circuit.includes.clone();
    out.gate_defs = circuit.gate_defs.clone();

    let mut place = Placement::new(layout, width);
    let mut inserted = Vec::with_capacity(circuit.gates.len());
    let mut swap_count = 0;

    for (gate, qubits) in circuit.gates.iter().zip(circuit.flat_gates()) {
        let lookup = |place: &Placement, l: usize| place.phys.get(&l).copied().ok_or(RouteError::Unmapped(l));
        if gate.is_two_qubit() {
            let a = lookup(&place, qubits[0])?;
            let b = lookup(&place, qubits[1])?;
            if !graph.has_edge(a, b) {
                let path = table.path(graph, a, b).ok_or(RouteError::Disconnected { a, b })?;
                // walk a's state up to the qubit next to b
                for w in path[..path.len() - 1].windows(2) {
                    place.swap(w[0], w[1]);
                    out.gates.push(swap_gate(w[0], w[1]));
                    inserted.push(true);
                    swap_count += 1;
                }
            }
        }
        let physical = qubits
            .iter()
            .map(|&l| lookup(&place, l))
            .collect::<Result<Vec<_>, _>>()?;
        out.gates.push(physical_gate(gate, &physical));
        inserted.push(false);
    }

    let final_placement = LayoutMap::from_pairs(place.phys)?;
    Ok(RoutedCircuit {
        circuit: out,
        inserted,
        swap_count,
        final_placement,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub depth: usize,
    pub gate_volume: usize,
    pub swap_count: usize,
}

/// Depth, volume and swap count. Barriers and measurements are left out of
/// depth and volume; every other gate is one time unit. With
/// `decompose_swaps` each swap adds three to the volume instead of one.
pub fn compute_metrics(circuit: &Circuit, decompose_swaps: bool) -> Metrics {
    let mut frontier = vec![0usize; circuit.num_qubits()];
    let mut depth = 0;
    let mut volume = 0;
    let mut swaps = 0;
    for (gate, qubits) in circuit.gates.iter().zip(circuit.flat_gates()) {
        if matches!(gate.kind, GateKind::Barrier | GateKind::Measure) {
            continue;
        }
        let is_swap = gate.kind == GateKind::Unitary && gate.opcode == "swap";
        swaps += usize::from(is_swap);
        volume += if is_swap && decompose_swaps { 3 } else { 1 };
        let level = qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &qubits {
            frontier[q] = level;
        }
        depth = depth.max(level);
    }
    Metrics {
        depth,
        gate_volume: volume,
        swap_count: swaps,
    }
}

/// Identity placement over the referenced qubits. Indices past the device
/// width take the lowest free physical qubits in order.
pub fn identity_layout(circuit: &Circuit, graph: &CouplingGraph) -> Result<LayoutMap, LayoutError> {
    let referenced = circuit.referenced_qubits();
    let mut layout = LayoutMap::new(None);
    let (inside, outside): (Vec<usize>, Vec<usize>) = referenced.into_iter().partition(|&q| q < graph.width());
    for q in inside {
        layout.assign(q, q)?;
    }
    let mut free = (0..graph.width()).filter(|&p| !layout.is_used(p)).collect::<Vec<_>>().into_iter();
    for q in outside {
        let p = free.next().ok_or(LayoutError::OutOfRange {
            physical: q,
            width: graph.width(),
        })?;
        layout.assign(q, p)?;
    }
    Ok(layout)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub label: String,
    pub depth: usize,
    pub volume: usize,
    pub swaps: usize,
    /// Baseline depth over this depth; above 1 is better than the baseline.
    pub depth_ratio: f64,
    pub volume_ratio: f64,
    /// Baseline swaps minus these swaps; positive is better.
    pub swap_delta: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub circuit: String,
    pub baseline: String,
    pub rows: Vec<CompareRow>,
}

fn ratio(baseline: usize, value: usize) -> f64 {
    match (baseline, value) {
        (0, 0) => 1.0,
        (_, 0) => f64::INFINITY,
        (b, v) => b as f64 / v as f64,
    }
}

/// Routes the circuit under every layout and reports metrics relative to the
/// row labelled `baseline`. A missing baseline label adds the identity layout
/// under that name as the first row.
pub fn compare(
    circuit: &Circuit,
    layouts: &[(String, LayoutMap)],
    graph: &CouplingGraph,
    baseline: &str,
    decompose_swaps: bool,
    exec: Execution,
) -> Result<CompareReport, RouteError> {
    let mut all: Vec<(String, LayoutMap)> = Vec::with_capacity(layouts.len() + 1);
    if !layouts.iter().any(|(l, _)| l == baseline) {
        all.push((baseline.to_string(), identity_layout(circuit, graph)?));
    }
    all.extend(layouts.iter().cloned());

    let table = DistanceTable::new(graph);
    let metrics = map_items(exec, &all, |(_, layout)| {
        route_with(circuit, layout, graph, &table).map(|r| compute_metrics(&r.circuit, decompose_swaps))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let base_idx = all.iter().position(|(l, _)| l == baseline).expect("baseline row present");
    let base = metrics[base_idx];
    let rows = all
        .iter()
        .zip(&metrics)
        .map(|((label, _), m)| CompareRow {
            label: label.clone(),
            depth: m.depth,
            volume: m.gate_volume,
            swaps: m.swap_count,
            depth_ratio: ratio(base.depth, m.depth),
            volume_ratio: ratio(base.gate_volume, m.gate_volume),
            swap_delta: base.swap_count as i64 - m.swap_count as i64,
        })
        .collect();
    Ok(CompareReport {
        circuit: circuit.source_name.clone(),
        baseline: baseline.to_string(),
        rows,
    })
}

impl CompareReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} (baseline: {})\n", self.circuit, self.baseline);
        out.push_str(&format!(
            "{:<16} {:>8} {:>9} {:>7} {:>9} {:>9} {:>8}\n",
            "layout", "depth", "volume", "swaps", "depth×", "volume×", "Δswaps"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<16} {:>8} {:>9} {:>7} {:>9.3} {:>9.3} {:>+8}\n",
                r.label, r.depth, r.volume, r.swaps, r.depth_ratio, r.volume_ratio, r.swap_delta
            ));
        }
        out
    }
}
