//! Logical-to-physical qubit assignment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::CouplingGraph;

/// Mapping strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Sub-string driven placement, then the single-qubit fallback.
    Ss,
    /// Global pair-frequency placement, then the single-qubit fallback.
    Gf,
    /// Sub-string placement, global-frequency placement on what is left,
    /// then the fallback.
    Gsf,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ss, Method::Gf, Method::Gsf];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ss => "ss",
            Method::Gf => "gf",
            Method::Gsf => "gsf",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ss" => Ok(Method::Ss),
            "gf" => Ok(Method::Gf),
            "gsf" => Ok(Method::Gsf),
            other => Err(format!("unknown mapping method `{other}`")),
        }
    }
}

/// Which part of the mapper produced an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    SubString,
    GlobalFrequency,
    Fallback,
}

/// One lead-plus-neighbours placement. Every `(logical, physical)` after the
/// first sits on a coupling edge with the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingStep {
    pub phase: Phase,
    pub assigned: Vec<(usize, usize)>,
}

impl MappingStep {
    pub fn lead(&self) -> (usize, usize) {
        self.assigned[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("physical qubit {physical} already holds logical qubit {holder}; cannot also place {logical}")]
    PhysicalTaken {
        physical: usize,
        holder: usize,
        logical: usize,
    },
    #[error("logical qubit {logical} is already mapped to physical qubit {physical}")]
    AlreadyMapped { logical: usize, physical: usize },
    #[error("physical qubit {physical} does not exist on a device of width {width}")]
    OutOfRange { physical: usize, width: usize },
    #[error("malformed layout file: {0}")]
    Malformed(String),
}

/// Partial injective map from logical to physical qubit indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayoutMap {
    assignment: BTreeMap<usize, usize>,
    occupant: BTreeMap<usize, usize>,
    method: Option<Method>,
    fallback_augmented: bool,
    steps: Vec<MappingStep>,
}

/// On-disk layout document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutFile {
    pub method: String,
    pub device: String,
    pub assignment: BTreeMap<usize, usize>,
}

impl LayoutMap {
    pub fn new(method: Option<Method>) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    /// `i ↦ i` for every listed logical qubit.
    pub fn identity(logical: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::new(None);
        for q in logical {
            m.assign(q, q).expect("identity is injective");
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, LayoutError> {
        let mut m = Self::new(None);
        for (l, p) in pairs {
            m.assign(l, p)?;
        }
        Ok(m)
    }

    pub fn assign(&mut self, logical: usize, physical: usize) -> Result<(), LayoutError> {
        if let Some(&holder) = self.occupant.get(&physical) {
            return Err(LayoutError::PhysicalTaken {
                physical,
                holder,
                logical,
            });
        }
        if let Some(&p) = self.assignment.get(&logical) {
            return Err(LayoutError::AlreadyMapped { logical, physical: p });
        }
        self.assignment.insert(logical, physical);
        self.occupant.insert(physical, logical);
        Ok(())
    }

    pub(crate) fn record_step(&mut self, step: MappingStep) {
        self.steps.push(step);
    }

    pub(crate) fn set_method(&mut self, method: Method) {
        self.method = Some(method);
    }

    pub(crate) fn mark_fallback(&mut self) {
        self.fallback_augmented = true;
    }

    pub fn get(&self, logical: usize) -> Option<usize> {
        self.assignment.get(&logical).copied()
    }

    pub fn logical_at(&self, physical: usize) -> Option<usize> {
        self.occupant.get(&physical).copied()
    }

    pub fn contains_logical(&self, logical: usize) -> bool {
        self.assignment.contains_key(&logical)
    }

    pub fn is_used(&self, physical: usize) -> bool {
        self.occupant.contains_key(&physical)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// `(logical, physical)` in ascending logical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().map(|(&l, &p)| (l, p))
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    pub fn method(&self) -> Option<Method> {
        self.method
    }

    /// True when the single-qubit fallback placed at least one qubit.
    pub fn fallback_augmented(&self) -> bool {
        self.fallback_augmented
    }

    pub fn steps(&self) -> &[MappingStep] {
        &self.steps
    }

    /// Short label: `ss`, `gsf+fallback`, `identity`, ...
    pub fn tag(&self) -> String {
        let base = self.method.map_or("identity", Method::as_str);
        if self.fallback_augmented {
            format!("{base}+fallback")
        } else {
            base.to_string()
        }
    }

    /// Checks that every physical index exists on `graph`. Injectivity holds
    /// by construction.
    pub fn validate(&self, graph: &CouplingGraph) -> Result<(), LayoutError> {
        match self.occupant.keys().next_back() {
            Some(&p) if p >= graph.width() => Err(LayoutError::OutOfRange {
                physical: p,
                width: graph.width(),
            }),
            _ => Ok(()),
        }
    }

    pub fn to_file(&self, device: &str) -> LayoutFile {
        LayoutFile {
            method: self.method.map_or_else(|| "identity".to_string(), |m| m.to_string()),
            device: device.to_string(),
            assignment: self.assignment.clone(),
        }
    }

    /// Layout JSON. Output is a pure function of the assignment, method and
    /// device name.
    pub fn to_json(&self, device: &str) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file(device)).expect("layout serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<(Self, String), LayoutError> {
        let file: LayoutFile = serde_json::from_str(text).map_err(|e| LayoutError::Malformed(e.to_string()))?;
        let method = match file.method.as_str() {
            "identity" => None,
            m => Some(m.parse::<Method>().map_err(LayoutError::Malformed)?),
        };
        let mut map = Self::from_pairs(file.assignment)?;
        map.method = method;
        Ok((map, file.device))
    }
}
