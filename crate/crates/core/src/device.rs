//! Target devices: an undirected coupling graph plus optional calibration.
//!
//! Topology JSON: `{"name": ..., "width": Q, "edges": [[a, b], ...]}`.
//! Calibration JSON:
//! `{"timestamp": ..., "qubits": [{"index", "readout_error", "single_qubit_gate_error"}],
//!   "edges": [{"pair": [a, b], "two_qubit_gate_error"}]}`.
//! Every calibration value is optional and defaults to `0.0`.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed device file: {0}")]
    Malformed(String),
    #[error("edge [{a}, {b}] has an endpoint outside a device of width {width}")]
    EdgeOutOfRange { a: usize, b: usize, width: usize },
    #[error("edge [{0}, {0}] is a self-loop")]
    SelfLoop(usize),
    #[error("edge [{a}, {b}] is listed twice")]
    DuplicateEdge { a: usize, b: usize },
    #[error("physical qubit {qubit} is outside a device of width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("calibration references [{a}, {b}], which is not a coupling edge")]
    UnknownEdge { a: usize, b: usize },
    #[error("{what} = {value} is not a probability in [0, 1]")]
    BadProbability { what: String, value: f64 },
    #[error("unknown built-in device `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct TopologyFile {
    name: String,
    width: usize,
    edges: Vec<[usize; 2]>,
}

/// Physical qubits `0..width` and their undirected couplings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    name: String,
    width: usize,
    /// Normalized `(min, max)`, sorted.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl CouplingGraph {
    pub fn new(name: impl Into<String>, width: usize, edges: &[(usize, usize)]) -> Result<Self, DeviceError> {
        let mut adjacency = vec![Vec::new(); width];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= width || b >= width {
                return Err(DeviceError::EdgeOutOfRange { a, b, width });
            }
            if a == b {
                return Err(DeviceError::SelfLoop(a));
            }
            normalized.push(norm(a, b));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(DeviceError::DuplicateEdge { a: w[0].0, b: w[0].1 });
        }
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let g = Self {
            name: name.into(),
            width,
            edges: normalized,
            adjacency,
        };
        if !g.is_connected() {
            log::warn!("coupling graph `{}` is not connected", g.name);
        }
        Ok(g)
    }

    /// A path `0 - 1 - ... - (width-1)`.
    pub fn line(width: usize) -> Self {
        let edges: Vec<_> = (1..width).map(|i| (i - 1, i)).collect();
        Self::new(format!("line{width}"), width, &edges).expect("line graph is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, DeviceError> {
        let f: TopologyFile = serde_json::from_str(text).map_err(|e| DeviceError::Malformed(e.to_string()))?;
        let edges: Vec<_> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(f.name, f.width, &edges)
    }

    pub fn to_json(&self) -> String {
        let f = TopologyFile {
            name: self.name.clone(),
            width: self.width,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string_pretty(&f).expect("topology serializes")
    }

    /// Built-in topologies: `kolkata` (27 qubits) and `manhattan` (65 qubits).
    pub fn builtin(name: &str) -> Result<Self, DeviceError> {
        let text = match name.to_ascii_lowercase().trim_start_matches("ibm_") {
            "kolkata" => include_str!("../data/devices/kolkata.json"),
            "manhattan" => include_str!("../data/devices/manhattan.json"),
            _ => return Err(DeviceError::UnknownBuiltin(name.to_string())),
        };
        Self::from_json(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbours of `q`.
    pub fn adjacent(&self, q: usize) -> Result<&[usize], DeviceError> {
        self.adjacency
            .get(q)
            .map(Vec::as_slice)
            .ok_or(DeviceError::QubitOutOfRange { qubit: q, width: self.width })
    }

    /// Neighbours of `q`; panics when `q` is out of range.
    pub(crate) fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.width && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.width == 0 {
            return true;
        }
        self.bfs(0).iter().all(|d| d.is_some())
    }

    /// Hop distances from `src`; `None` for unreachable qubits.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.width];
        let mut queue = VecDeque::from([src]);
        dist[src] = Some(0);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

pub fn load_topology(path: impl AsRef<Path>) -> Result<CouplingGraph, DeviceError> {
    CouplingGraph::from_json(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String, DeviceError> {
    std::fs::read_to_string(path).map_err(|source| DeviceError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CalibrationFile {
    #[serde(default)]
    timestamp: String,
    #[serde(default)]
    qubits: Vec<QubitEntry>,
    #[serde(default)]
    edges: Vec<EdgeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct QubitEntry {
    index: usize,
    #[serde(default)]
    readout_error: f64,
    #[serde(default)]
    single_qubit_gate_error: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeEntry {
    pair: [usize; 2],
    #[serde(default)]
    two_qubit_gate_error: f64,
}

/// Per-qubit and per-edge error rates. Missing entries read as `0.0`, which
/// turns every error-based tie-break into index order.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    readout: Vec<f64>,
    single_qubit: Vec<f64>,
    two_qubit: BTreeMap<(usize, usize), f64>,
    pub timestamp: String,
}

fn check_probability(what: impl FnOnce() -> String, value: f64) -> Result<f64, DeviceError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(DeviceError::BadProbability { what: what(), value })
    }
}

impl Calibration {
    /// All errors zero.
    pub fn neutral(graph: &CouplingGraph) -> Self {
        Self {
            readout: vec![0.0; graph.width()],
            single_qubit: vec![0.0; graph.width()],
            two_qubit: BTreeMap::new(),
            timestamp: String::new(),
        }
    }

    pub fn from_json(text: &str, graph: &CouplingGraph) -> Result<Self, DeviceError> {
        let f: CalibrationFile = serde_json::from_str(text).map_err(|e| DeviceError::Malformed(e.to_string()))?;
        let mut cal = Self::neutral(graph);
        cal.timestamp = f.timestamp;
        for q in f.qubits {
            if q.index >= graph.width() {
                return Err(DeviceError::QubitOutOfRange {
                    qubit: q.index,
                    width: graph.width(),
                });
            }
            cal.readout[q.index] = check_probability(|| format!("readout_error[{}]", q.index), q.readout_error)?;
            cal.single_qubit[q.index] = check_probability(
                || format!("single_qubit_gate_error[{}]", q.index),
                q.single_qubit_gate_error,
            )?;
        }
        for e in f.edges {
            let [a, b] = e.pair;
            if !graph.has_edge(a, b) {
                return Err(DeviceError::UnknownEdge { a, b });
            }
            let v = check_probability(|| format!("two_qubit_gate_error[{a}, {b}]"), e.two_qubit_gate_error)?;
            cal.two_qubit.insert(norm(a, b), v);
        }
        Ok(cal)
    }

    pub fn to_json(&self) -> String {
        let f = CalibrationFile {
            timestamp: self.timestamp.clone(),
            qubits: (0..self.readout.len())
                .map(|i| QubitEntry {
                    index: i,
                    readout_error: self.readout[i],
                    single_qubit_gate_error: self.single_qubit[i],
                })
                .collect(),
            edges: self
                .two_qubit
                .iter()
                .map(|(&(a, b), &v)| EdgeEntry {
                    pair: [a, b],
                    two_qubit_gate_error: v,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("calibration serializes")
    }

    pub fn set_readout_error(&mut self, q: usize, value: f64) {
        self.readout[q] = value;
    }

    pub fn set_single_qubit_error(&mut self, q: usize, value: f64) {
        self.single_qubit[q] = value;
    }

    pub fn set_edge_error(&mut self, a: usize, b: usize, value: f64) {
        self.two_qubit.insert(norm(a, b), value);
    }

    pub fn readout_error(&self, q: usize) -> f64 {
        self.readout.get(q).copied().unwrap_or(0.0)
    }

    pub fn single_qubit_error(&self, q: usize) -> f64 {
        self.single_qubit.get(q).copied().unwrap_or(0.0)
    }

    /// Symmetric: `edge_error(a, b) == edge_error(b, a)`.
    pub fn edge_error(&self, a: usize, b: usize) -> f64 {
        self.two_qubit.get(&norm(a, b)).copied().unwrap_or(0.0)
    }

    /// Fallback placement score: single-qubit gate error plus readout error.
    pub fn single_qubit_score(&self, q: usize) -> f64 {
        self.single_qubit_error(q) + self.readout_error(q)
    }
}

/// Reads a calibration file, or returns neutral calibration when `path` is
/// `None`.
pub fn load_calibration(path: Option<&Path>, graph: &CouplingGraph) -> Result<Calibration, DeviceError> {
    match path {
        None => Ok(Calibration::neutral(graph)),
        Some(p) => Calibration::from_json(&read(p)?, graph),
    }
}
