//! Initial layout strategies.
//!
//! * **SS** works round by round on the longest repeating non-overlapping
//!   substring of the two-qubit trace. Each round ranks the qubits of that
//!   substring, places heavily used ones together with their partners around
//!   a well connected physical qubit, and when a round places nothing the
//!   substring's occurrences are cut out of the trace.
//! * **GF** does the same placement directly from global pair frequencies.
//! * **GSF** runs SS and hands its leftover state to GF.
//!
//! Whatever is still unplaced afterwards goes to the lowest-error free
//! physical qubits.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use log::debug;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::device::{Calibration, CouplingGraph};
use crate::layout::{LayoutError, LayoutMap, MappingStep, Method, Phase};
use crate::trace::{
    extract_pairs, find_lrnos_indexed, linearize_circuit, remove_occurrences, EdgeHistogram, LinearizedTrace, QubitPair,
    TraceError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("circuit references {required} logical qubits but the device has only {width}")]
    DeviceTooSmall { required: usize, width: usize },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Working sets shared by the placement loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapperState {
    /// Logical qubits still waiting for a physical home.
    pub pending: BTreeSet<usize>,
    /// Unused physical qubits, most free neighbours first.
    pub available: Vec<usize>,
    /// Working list of operand pairs.
    pub edges: Vec<QubitPair>,
    pub trace: LinearizedTrace,
    /// High-impact qubits of the current round, most frequent first.
    pub hiq: Vec<usize>,
}

impl MapperState {
    /// Pending = every qubit of a two-qubit gate; available = every physical
    /// qubit by descending degree, ties by index.
    pub fn new(circuit: &Circuit, graph: &CouplingGraph) -> Result<Self, MapError> {
        let edges = extract_pairs(circuit);
        let pending = edges.iter().flat_map(|p| [p.control, p.target]).collect();
        let mut available: Vec<usize> = (0..graph.width()).collect();
        available.sort_by_key(|&q| (std::cmp::Reverse(graph.degree(q)), q));
        // Logical indices may exceed the device width in wide registers; the
        // alphabet only needs to be injective.
        let trace = linearize_circuit(circuit, graph.width().max(circuit.num_qubits()))?;
        Ok(Self {
            pending,
            available,
            edges,
            trace,
            hiq: Vec::new(),
        })
    }

    pub fn is_available(&self, physical: usize) -> bool {
        self.available.contains(&physical)
    }

    /// Available neighbours of `physical`, ascending.
    pub fn available_neighbors(&self, graph: &CouplingGraph, physical: usize) -> Vec<usize> {
        graph
            .neighbors(physical)
            .iter()
            .copied()
            .filter(|&n| self.is_available(n))
            .collect()
    }

    /// Re-sorts `available` by free-neighbour count, descending, ties by index.
    pub fn sort_available(&mut self, graph: &CouplingGraph) {
        let mut keyed: Vec<_> = self
            .available
            .iter()
            .map(|&q| (std::cmp::Reverse(self.available_neighbors(graph, q).len()), q))
            .collect();
        keyed.sort_unstable();
        self.available = keyed.into_iter().map(|(_, q)| q).collect();
    }

    fn prune_edges(&mut self) {
        let pending = &self.pending;
        self.edges
            .retain(|p| pending.contains(&p.control) && pending.contains(&p.target));
    }
}

/// Pending qubits whose first-operand frequency is strictly above the mean
/// over all qubits in `histogram`; most frequent first, ties by index.
pub fn build_hiq_list(histogram: &EdgeHistogram, pending: &BTreeSet<usize>) -> Vec<usize> {
    let freq = histogram.qubit_freq();
    let n = freq.len();
    let total: usize = freq.values().sum();
    // freq > total / n, kept in integers
    let mut hiq: Vec<(usize, usize)> = freq
        .iter()
        .filter(|&(q, &f)| pending.contains(q) && f * n > total)
        .map(|(&q, &f)| (q, f))
        .collect();
    hiq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hiq.into_iter().map(|(q, _)| q).collect()
}

fn mean_edge_error(cal: &Calibration, q: usize, neighbors: &[usize]) -> f64 {
    if neighbors.is_empty() {
        return 0.0;
    }
    neighbors.iter().map(|&n| cal.edge_error(q, n)).sum::<f64>() / neighbors.len() as f64
}

/// The available physical qubit with the most available neighbours. Ties go
/// to the lower mean coupling error, then lower readout error, then lower
/// index. `None` when no available qubit has a free neighbour.
pub fn select_lead_physical(state: &MapperState, graph: &CouplingGraph, cal: &Calibration) -> Option<usize> {
    state
        .available
        .iter()
        .filter_map(|&q| {
            let free = state.available_neighbors(graph, q);
            (!free.is_empty()).then(|| (q, free.len(), mean_edge_error(cal, q, &free), cal.readout_error(q)))
        })
        .min_by(|a, b| {
            b.1.cmp(&a.1)
                .then(a.2.total_cmp(&b.2))
                .then(a.3.total_cmp(&b.3))
                .then(a.0.cmp(&b.0))
        })
        .map(|(q, ..)| q)
}

/// `lead` followed by up to `k - 1` pending partners `j`, ordered by
/// `count(lead, j)` descending, ties by index.
fn with_partners(lead: usize, hist: &EdgeHistogram, pending: &BTreeSet<usize>, k: usize) -> Vec<usize> {
    let mut out = vec![lead];
    out.extend(
        hist.partners(lead)
            .into_iter()
            .filter(|(j, _)| *j != lead && pending.contains(j))
            .map(|(j, _)| j)
            .take(k.saturating_sub(1)),
    );
    out
}

/// Lead = most frequent pending high-impact qubit, followed by its busiest
/// pending partners in `local_hist`. Fewer than two entries means nothing can
/// be placed this step.
pub fn select_logical_qubits(state: &MapperState, local_hist: &EdgeHistogram, k: usize) -> Vec<usize> {
    match state.hiq.iter().find(|q| state.pending.contains(q)) {
        Some(&lead) => with_partners(lead, local_hist, &state.pending, k),
        None => Vec::new(),
    }
}

/// Lead = pending qubit with the highest first-operand frequency in `hist`.
fn select_logical_by_frequency(pending: &BTreeSet<usize>, hist: &EdgeHistogram, k: usize) -> Vec<usize> {
    let lead = hist
        .qubit_freq()
        .iter()
        .filter(|(q, _)| pending.contains(q))
        .min_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)))
        .map(|(&q, _)| q);
    match lead {
        Some(lead) => with_partners(lead, hist, pending, k),
        None => Vec::new(),
    }
}

/// Places `logical[0]` on `lead` and the rest, in order, on `lead`'s free
/// neighbours sorted by coupling error to `lead`, then readout error, then
/// index. Logical qubits beyond the free neighbours stay pending. Returns the
/// number of qubits placed.
pub fn map_qubits(
    logical: &[usize],
    lead: usize,
    graph: &CouplingGraph,
    cal: &Calibration,
    layout: &mut LayoutMap,
    state: &mut MapperState,
    phase: Phase,
) -> Result<usize, MapError> {
    let mut neighbors = state.available_neighbors(graph, lead);
    neighbors.sort_by(|&a, &b| {
        cal.edge_error(lead, a)
            .total_cmp(&cal.edge_error(lead, b))
            .then(cal.readout_error(a).total_cmp(&cal.readout_error(b)))
            .then(a.cmp(&b))
    });
    let physical = std::iter::once(lead).chain(neighbors);
    let assigned: Vec<(usize, usize)> = logical.iter().copied().zip(physical).collect();
    for &(l, p) in &assigned {
        layout.assign(l, p)?;
        state.pending.remove(&l);
        state.available.retain(|&q| q != p);
    }
    debug!("  {phase:?} step: {}", fmt_pairs(&assigned));
    let placed = assigned.len();
    layout.record_step(MappingStep { phase, assigned });
    state.sort_available(graph);
    Ok(placed)
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(l, p)| format!("q{l}->Q{p}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Sub-string placement. Returns the partial layout and the final state so
/// GF can continue from it.
pub fn map_by_ss(
    circuit: &Circuit,
    graph: &CouplingGraph,
    cal: &Calibration,
) -> Result<(LayoutMap, MapperState), MapError> {
    let mut state = MapperState::new(circuit, graph)?;
    let mut layout = LayoutMap::new(Some(Method::Ss));
    let mut round = 0usize;

    loop {
        // Nothing can be placed any more once these hold; later rounds would
        // only shorten the trace.
        if state.pending.is_empty()
            || state.edges.is_empty()
            || select_lead_physical(&state, graph, cal).is_none()
        {
            break;
        }
        round += 1;
        let global = EdgeHistogram::from_pairs(state.edges.iter().copied());
        let lrnos = find_lrnos_indexed(&state.trace);
        let done = lrnos.length < 2;
        let local = global.restricted_to(&lrnos.pairs(&state.trace));
        state.hiq = build_hiq_list(&local, &state.pending);
        debug!(
            "SS round {round}: trace {} symbols, LRNOS length {} at {:?}, local mean {:.1}, HIQ {:?}",
            state.trace.len(),
            lrnos.length,
            lrnos.start_positions,
            local.mean_qubit_freq(),
            state.hiq
        );

        let mut placed = 0;
        while let Some(lead) = select_lead_physical(&state, graph, cal) {
            let k = 1 + state.available_neighbors(graph, lead).len();
            let logical = select_logical_qubits(&state, &local, k);
            if logical.len() < 2 {
                break;
            }
            placed += map_qubits(&logical, lead, graph, cal, &mut layout, &mut state, Phase::SubString)?;
        }

        if done {
            break;
        }
        if placed == 0 {
            let before = state.trace.len();
            state.trace = remove_occurrences(&state.trace, &lrnos)?;
            assert!(state.trace.len() < before, "SS round made no progress");
            state.sort_available(graph);
            state.prune_edges();
        }
    }
    state.prune_edges();
    Ok((layout, state))
}

/// Global-frequency placement, optionally continuing from an SS result.
pub fn map_by_gf(
    circuit: &Circuit,
    graph: &CouplingGraph,
    cal: &Calibration,
    seed_layout: LayoutMap,
    seed_state: Option<MapperState>,
) -> Result<(LayoutMap, MapperState), MapError> {
    let mut layout = seed_layout;
    let mut state = match seed_state {
        Some(s) => s,
        None => MapperState::new(circuit, graph)?,
    };
    state.pending.retain(|&q| !layout.contains_logical(q));
    state.available.retain(|&p| !layout.is_used(p));
    state.sort_available(graph);
    state.edges = extract_pairs(circuit);

    while !state.pending.is_empty() {
        state.prune_edges();
        let hist = EdgeHistogram::from_pairs(state.edges.iter().copied());
        if hist.is_empty() {
            break;
        }
        let Some(lead) = select_lead_physical(&state, graph, cal) else {
            break;
        };
        let k = 1 + state.available_neighbors(graph, lead).len();
        let logical = select_logical_by_frequency(&state.pending, &hist, k);
        if logical.len() < 2 {
            break;
        }
        map_qubits(&logical, lead, graph, cal, &mut layout, &mut state, Phase::GlobalFrequency)?;
    }
    Ok((layout, state))
}

/// Places every still-unmapped logical qubit referenced by the circuit: the
/// most used qubits go to the free physical qubits with the lowest
/// single-qubit plus readout error.
pub fn map_fallback_single_qubit(
    circuit: &Circuit,
    graph: &CouplingGraph,
    cal: &Calibration,
    mut layout: LayoutMap,
) -> Result<LayoutMap, MapError> {
    let referenced = circuit.referenced_qubits();
    if referenced.len() > graph.width() {
        return Err(MapError::DeviceTooSmall {
            required: referenced.len(),
            width: graph.width(),
        });
    }
    let usage = circuit.qubit_usage();
    let mut unmapped: Vec<usize> = referenced.into_iter().filter(|&q| !layout.contains_logical(q)).collect();
    unmapped.sort_by(|&a, &b| usage[b].cmp(&usage[a]).then(a.cmp(&b)));
    let mut free: Vec<usize> = (0..graph.width()).filter(|&p| !layout.is_used(p)).collect();
    free.sort_by(|&a, &b| {
        cal.single_qubit_score(a)
            .partial_cmp(&cal.single_qubit_score(b))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    if unmapped.len() > free.len() {
        return Err(MapError::DeviceTooSmall {
            required: layout.len() + unmapped.len(),
            width: graph.width(),
        });
    }
    for (l, p) in unmapped.into_iter().zip(free) {
        layout.assign(l, p)?;
        layout.record_step(MappingStep {
            phase: Phase::Fallback,
            assigned: vec![(l, p)],
        });
        layout.mark_fallback();
        debug!("  fallback: q{l}->Q{p}");
    }
    Ok(layout)
}

/// Full layout for `method`, always completed by the single-qubit fallback.
/// Identical inputs give identical layouts.
pub fn map(circuit: &Circuit, graph: &CouplingGraph, cal: &Calibration, method: Method) -> Result<LayoutMap, MapError> {
    let required = circuit.referenced_qubits().len();
    if required > graph.width() {
        return Err(MapError::DeviceTooSmall {
            required,
            width: graph.width(),
        });
    }
    let partial = match method {
        Method::Ss => map_by_ss(circuit, graph, cal)?.0,
        Method::Gf => map_by_gf(circuit, graph, cal, LayoutMap::new(Some(Method::Gf)), None)?.0,
        Method::Gsf => {
            let (mut layout, state) = map_by_ss(circuit, graph, cal)?;
            layout.set_method(Method::Gsf);
            map_by_gf(circuit, graph, cal, layout, Some(state))?.0
        }
    };
    let layout = map_fallback_single_qubit(circuit, graph, cal, partial)?;
    layout.validate(graph)?;
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::parse_qasm;

    fn set(qs: &[usize]) -> BTreeSet<usize> {
        qs.iter().copied().collect()
    }

    fn pairs(list: &[(usize, usize, usize)]) -> Vec<QubitPair> {
        list.iter()
            .flat_map(|&(a, b, n)| std::iter::repeat_n(QubitPair::new(a, b), n))
            .collect()
    }

    fn star_circuit() -> Circuit {
        let mut c = Circuit::with_qubits("star", 4);
        for &(a, b, n) in &[(0, 1, 5), (0, 2, 3), (0, 3, 1)] {
            for _ in 0..n {
                c.push("cx", &[a, b]);
            }
        }
        c
    }

    #[test]
    fn hiq_strictly_above_mean() {
        let h = EdgeHistogram::from_pairs(pairs(&[(0, 1, 10), (1, 0, 2)]));
        assert_eq!(build_hiq_list(&h, &set(&[0, 1])), vec![0]);
        let flat = EdgeHistogram::from_pairs(pairs(&[(0, 1, 3), (1, 2, 3), (2, 0, 3)]));
        assert!(build_hiq_list(&flat, &set(&[0, 1, 2])).is_empty());
        assert!(build_hiq_list(&h, &set(&[1])).is_empty());
    }

    #[test]
    fn hiq_ordering() {
        let h = EdgeHistogram::from_pairs(pairs(&[(3, 1, 9), (2, 1, 9), (5, 1, 12), (1, 2, 1)]));
        // mean 31 / 4 = 7.75
        assert_eq!(build_hiq_list(&h, &set(&[1, 2, 3, 5])), vec![5, 2, 3]);
    }

    #[test]
    fn lead_physical_on_line() {
        let g = CouplingGraph::line(3);
        let cal = Calibration::neutral(&g);
        let c = Circuit::with_qubits("e", 1);
        let mut st = MapperState::new(&c, &g).unwrap();
        assert_eq!(st.available, vec![1, 0, 2]);
        assert_eq!(select_lead_physical(&st, &g, &cal), Some(1));
        st.available = vec![2];
        assert_eq!(select_lead_physical(&st, &g, &cal), None);
    }

    #[test]
    fn lead_physical_on_kolkata_has_degree_three() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let st = MapperState::new(&Circuit::with_qubits("e", 1), &g).unwrap();
        let lead = select_lead_physical(&st, &g, &cal).unwrap();
        assert_eq!(g.degree(lead), 3);
        // with neutral calibration the index decides
        assert_eq!(lead, 1);
        let mut cal = Calibration::neutral(&g);
        for q in 0..27 {
            cal.set_readout_error(q, if q == 25 { 0.001 } else { 0.02 });
        }
        assert_eq!(select_lead_physical(&st, &g, &cal), Some(25));
    }

    #[test]
    fn lead_physical_prefers_low_edge_error() {
        let g = CouplingGraph::line(5);
        let mut cal = Calibration::neutral(&g);
        cal.set_edge_error(0, 1, 0.3);
        cal.set_edge_error(1, 2, 0.3);
        let st = MapperState::new(&Circuit::with_qubits("e", 1), &g).unwrap();
        // 1, 2 and 3 all have two free neighbours; 3 has the cleanest couplings
        assert_eq!(select_lead_physical(&st, &g, &cal), Some(3));
    }

    #[test]
    fn logical_selection() {
        let g = CouplingGraph::line(4);
        let mut st = MapperState::new(&star_circuit(), &g).unwrap();
        let hist = EdgeHistogram::from_pairs(st.edges.iter().copied());
        st.hiq = vec![];
        assert!(select_logical_qubits(&st, &hist, 4).is_empty());
        st.hiq = vec![0];
        assert_eq!(select_logical_qubits(&st, &hist, 4), vec![0, 1, 2, 3]);
        assert_eq!(select_logical_qubits(&st, &hist, 2), vec![0, 1]);
        st.pending = set(&[0]);
        assert_eq!(select_logical_qubits(&st, &hist, 4), vec![0]);
    }

    #[test]
    fn map_qubits_capacity_and_order() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let mut c = Circuit::with_qubits("t", 5);
        for q in 1..5 {
            c.push("cx", &[0, q]);
        }
        let mut st = MapperState::new(&c, &g).unwrap();
        let mut layout = LayoutMap::new(Some(Method::Ss));
        let placed = map_qubits(&[0, 1, 2, 3, 4], 25, &g, &cal, &mut layout, &mut st, Phase::SubString).unwrap();
        assert_eq!(placed, 4);
        assert_eq!(
            layout.iter().collect::<Vec<_>>(),
            vec![(0, 25), (1, 22), (2, 24), (3, 26)]
        );
        assert_eq!(st.pending, set(&[4]));
        assert!(!st.is_available(25) && !st.is_available(22));
        assert_eq!(st.available.len(), 27 - 4);
    }

    #[test]
    fn map_qubits_uses_edge_error_order() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let mut cal = Calibration::neutral(&g);
        cal.set_edge_error(25, 22, 0.03);
        cal.set_edge_error(25, 24, 0.01);
        cal.set_edge_error(25, 26, 0.02);
        let c = star_circuit();
        let mut st = MapperState::new(&c, &g).unwrap();
        let mut layout = LayoutMap::new(None);
        map_qubits(&[0, 1, 2, 3], 25, &g, &cal, &mut layout, &mut st, Phase::SubString).unwrap();
        assert_eq!(layout.get(1), Some(24));
        assert_eq!(layout.get(2), Some(26));
        assert_eq!(layout.get(3), Some(22));
    }

    #[test]
    fn map_qubits_single_neighbour() {
        let g = CouplingGraph::line(3);
        let cal = Calibration::neutral(&g);
        let mut c = Circuit::with_qubits("t", 2);
        c.push("cx", &[0, 1]);
        let mut st = MapperState::new(&c, &g).unwrap();
        st.available = vec![1, 2];
        let mut layout = LayoutMap::new(None);
        map_qubits(&[0, 1], 2, &g, &cal, &mut layout, &mut st, Phase::GlobalFrequency).unwrap();
        assert_eq!(layout.iter().collect::<Vec<_>>(), vec![(0, 2), (1, 1)]);
    }

    #[test]
    fn gf_star_on_kolkata() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let (layout, st) = map_by_gf(&star_circuit(), &g, &cal, LayoutMap::new(Some(Method::Gf)), None).unwrap();
        let lead = layout.get(0).unwrap();
        assert_eq!(g.degree(lead), 3);
        for q in 1..4 {
            assert!(g.has_edge(lead, layout.get(q).unwrap()));
        }
        // heaviest partner on the lowest-index neighbour under zero errors
        assert_eq!((lead, layout.get(1), layout.get(2), layout.get(3)), (1, Some(0), Some(2), Some(4)));
        assert!(st.pending.is_empty());
        assert_eq!(layout.steps().len(), 1);
    }

    #[test]
    fn gf_seeded_with_everything_mapped_is_a_no_op() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let c = star_circuit();
        let seed = LayoutMap::from_pairs([(0, 5), (1, 3), (2, 8), (3, 9)]).unwrap();
        let (out, _) = map_by_gf(&c, &g, &cal, seed.clone(), None).unwrap();
        assert_eq!(out, seed);
    }

    #[test]
    fn gf_leaves_partnerless_qubit_for_fallback() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let mut c = Circuit::with_qubits("t", 6);
        c.push("cx", &[0, 5]);
        c.push("cx", &[1, 2]);
        let seed = LayoutMap::from_pairs([(0, 0), (1, 1), (2, 2)]).unwrap();
        let (out, st) = map_by_gf(&c, &g, &cal, seed, None).unwrap();
        assert_eq!(st.pending, set(&[5]));
        assert!(!out.contains_logical(5));
        let full = map_fallback_single_qubit(&c, &g, &cal, out).unwrap();
        assert!(full.contains_logical(5));
        assert!(full.fallback_augmented());
    }

    #[test]
    fn ss_on_circuit_without_pairs_is_empty() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let c = parse_qasm("OPENQASM 2.0; qreg q[3]; x q[0]; h q[1]; t q[2];").unwrap();
        let (layout, _) = map_by_ss(&c, &g, &cal).unwrap();
        assert!(layout.is_empty());
        let full = map(&c, &g, &cal, Method::Ss).unwrap();
        assert_eq!(full.len(), 3);
    }

    #[test]
    fn fallback_picks_lowest_score() {
        let g = CouplingGraph::line(8);
        let mut cal = Calibration::neutral(&g);
        for q in 0..8 {
            cal.set_readout_error(q, 0.5);
        }
        cal.set_readout_error(3, 0.01);
        cal.set_single_qubit_error(3, 0.01);
        cal.set_readout_error(7, 0.005);
        cal.set_single_qubit_error(7, 0.005);
        let c = parse_qasm("OPENQASM 2.0; qreg q[1]; x q[0];").unwrap();
        let out = map_fallback_single_qubit(&c, &g, &cal, LayoutMap::new(None)).unwrap();
        assert_eq!(out.get(0), Some(7));
        let again = map_fallback_single_qubit(&c, &g, &cal, out.clone()).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn fallback_device_too_small() {
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let mut c = Circuit::with_qubits("wide", 28);
        for q in 0..28 {
            c.push("x", &[q]);
        }
        assert_eq!(
            map_fallback_single_qubit(&c, &g, &cal, LayoutMap::new(None)),
            Err(MapError::DeviceTooSmall { required: 28, width: 27 })
        );
        assert!(matches!(map(&c, &g, &cal, Method::Gsf), Err(MapError::DeviceTooSmall { .. })));
    }

    #[test]
    fn ss_maps_repeated_block() {
        // repeated block with a clear hub: q2 drives q0, q1, q3
        let mut c = Circuit::with_qubits("hub", 5);
        for _ in 0..4 {
            for &(a, b) in &[(2, 0), (2, 1), (2, 3), (2, 0), (4, 3), (2, 1)] {
                c.push("cx", &[a, b]);
            }
        }
        let g = CouplingGraph::builtin("kolkata").unwrap();
        let cal = Calibration::neutral(&g);
        let (layout, _) = map_by_ss(&c, &g, &cal).unwrap();
        let hub = layout.get(2).expect("hub placed by SS");
        for q in [0, 1, 3] {
            assert!(g.has_edge(hub, layout.get(q).unwrap()));
        }
        assert!(layout.steps().iter().all(|s| s.phase == Phase::SubString));
    }
}
