//! Hardware calibration snapshots and qubit configurations.
//!
//! A [`HardwareSnapshot`] is one device's calibration at a point in time:
//! per-qubit coherence and readout data, the two-qubit coupling graph with
//! error rates, and the native basis gate set. A [`Configuration`] is an
//! ordered choice of eight physical qubits on one snapshot; list order
//! defines the logical qubit order of circuits placed on it.
//!
//! Snapshots and configurations are immutable after load and safe to share
//! across threads.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of qubits in a configuration.
pub const CONFIG_QUBITS: usize = 8;

/// Version accepted for calibration documents.
pub const CALIBRATION_FORMAT: u32 = 1;

/// Fallback gate durations when neither the file nor the qubit entry sets one.
pub const DEFAULT_ONEQ_NS: f64 = 35.0;
pub const DEFAULT_TWOQ_NS: f64 = 300.0;
pub const DEFAULT_READOUT_NS: f64 = 700.0;

/// Native gate set of a device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisSet {
    /// {id, u1, u2, u3, cx}
    A,
    /// {id, rz, sx, x, cx, reset}
    B,
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSet::A => write!(f, "A"),
            BasisSet::B => write!(f, "B"),
        }
    }
}

/// Calibration data for a single qubit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitCalibration {
    /// Energy-relaxation time, microseconds.
    pub t1_us: f64,
    /// Dephasing time, microseconds. Must satisfy `t2 <= 2*t1`.
    pub t2_us: f64,
    /// P(read 1 | prepared 0).
    pub readout_p01: f64,
    /// P(read 0 | prepared 1).
    pub readout_p10: f64,
    /// Mean single-qubit gate error.
    pub err_1q: f64,
    /// Optional per-gate durations in nanoseconds, keyed by gate name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub durations_ns: BTreeMap<String, f64>,
}

impl QubitCalibration {
    fn validate(&self, index: usize) -> Result<()> {
        if !(self.t1_us > 0.0) {
            return Err(Error::validation(format!("qubit {index}: t1_us must be > 0")));
        }
        if !(self.t2_us > 0.0) {
            return Err(Error::validation(format!("qubit {index}: t2_us must be > 0")));
        }
        if self.t2_us > 2.0 * self.t1_us {
            return Err(Error::validation(format!(
                "qubit {index}: t2_us ({}) exceeds 2*t1_us ({})",
                self.t2_us,
                2.0 * self.t1_us
            )));
        }
        for (name, p) in [
            ("readout_p01", self.readout_p01),
            ("readout_p10", self.readout_p10),
            ("err_1q", self.err_1q),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!(
                    "qubit {index}: {name} = {p} outside [0,1]"
                )));
            }
        }
        for (gate, d) in &self.durations_ns {
            if !(*d >= 0.0) {
                return Err(Error::validation(format!(
                    "qubit {index}: duration for {gate} must be >= 0"
                )));
            }
        }
        Ok(())
    }

    /// Harmonic mean of T1 and T2, the per-qubit coherence figure.
    pub fn coherence_us(&self) -> f64 {
        2.0 * self.t1_us * self.t2_us / (self.t1_us + self.t2_us)
    }

    /// Mean of the two readout error directions.
    pub fn readout_err(&self) -> f64 {
        0.5 * (self.readout_p01 + self.readout_p10)
    }
}

/// Undirected coupling between two qubits with its two-qubit gate error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CouplingEdge {
    pub q0: usize,
    pub q1: usize,
    pub err_2q: f64,
}

impl CouplingEdge {
    /// Endpoints in canonical (low, high) order.
    pub fn key(&self) -> (usize, usize) {
        if self.q0 <= self.q1 {
            (self.q0, self.q1)
        } else {
            (self.q1, self.q0)
        }
    }
}

/// Per-file default durations, overridable in the calibration document.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DefaultDurations {
    #[serde(default = "default_oneq")]
    pub oneq_ns: f64,
    #[serde(default = "default_twoq")]
    pub twoq_ns: f64,
    #[serde(default = "default_readout")]
    pub readout_ns: f64,
}

fn default_oneq() -> f64 {
    DEFAULT_ONEQ_NS
}
fn default_twoq() -> f64 {
    DEFAULT_TWOQ_NS
}
fn default_readout() -> f64 {
    DEFAULT_READOUT_NS
}

impl Default for DefaultDurations {
    fn default() -> Self {
        DefaultDurations {
            oneq_ns: DEFAULT_ONEQ_NS,
            twoq_ns: DEFAULT_TWOQ_NS,
            readout_ns: DEFAULT_READOUT_NS,
        }
    }
}

/// One hardware's calibration snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardwareSnapshot {
    pub format: u32,
    pub name: String,
    pub num_qubits: usize,
    pub basis_set: BasisSet,
    #[serde(default)]
    pub default_durations: DefaultDurations,
    pub qubits: Vec<QubitCalibration>,
    pub edges: Vec<CouplingEdge>,
}

impl HardwareSnapshot {
    /// Load and validate a calibration document.
    pub fn load(path: impl AsRef<Path>) -> Result<Arc<HardwareSnapshot>> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let snapshot: HardwareSnapshot =
            serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        snapshot.validate()?;
        Ok(Arc::new(snapshot))
    }

    /// Check all snapshot invariants.
    pub fn validate(&self) -> Result<()> {
        if self.format != CALIBRATION_FORMAT {
            return Err(Error::validation(format!(
                "unsupported calibration format {} (expected {CALIBRATION_FORMAT})",
                self.format
            )));
        }
        if self.num_qubits == 0 {
            return Err(Error::validation("num_qubits must be > 0"));
        }
        if self.qubits.len() != self.num_qubits {
            return Err(Error::validation(format!(
                "qubits list has {} entries, expected num_qubits = {}",
                self.qubits.len(),
                self.num_qubits
            )));
        }
        for (i, q) in self.qubits.iter().enumerate() {
            q.validate(i)?;
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if e.q0 == e.q1 {
                return Err(Error::validation(format!(
                    "edge ({},{}) is a self-loop",
                    e.q0, e.q1
                )));
            }
            if e.q0 >= self.num_qubits || e.q1 >= self.num_qubits {
                return Err(Error::validation(format!(
                    "edge ({},{}) references a qubit >= num_qubits ({})",
                    e.q0, e.q1, self.num_qubits
                )));
            }
            if !(0.0..=1.0).contains(&e.err_2q) {
                return Err(Error::validation(format!(
                    "edge ({},{}): err_2q = {} outside [0,1]",
                    e.q0, e.q1, e.err_2q
                )));
            }
            if !seen.insert(e.key()) {
                return Err(Error::validation(format!(
                    "duplicate edge ({},{})",
                    e.q0, e.q1
                )));
            }
        }
        if !connected(self.num_qubits, self.edges.iter().map(|e| e.key())) {
            return Err(Error::validation(format!(
                "coupling graph of {} is not connected",
                self.name
            )));
        }
        Ok(())
    }

    /// Two-qubit error for a coupled pair, if present.
    pub fn edge_error(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.iter().find(|e| e.key() == key).map(|e| e.err_2q)
    }

    /// Duration in nanoseconds for `gate` on `qubit`, falling back to the
    /// file-level defaults by gate arity.
    pub fn gate_duration_ns(&self, qubit: usize, gate: &str, arity: usize) -> f64 {
        if let Some(d) = self.qubits[qubit].durations_ns.get(gate) {
            return *d;
        }
        match arity {
            1 => self.default_durations.oneq_ns,
            _ => self.default_durations.twoq_ns,
        }
    }

    /// Mean two-qubit error over all device edges.
    pub fn mean_err_2q(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        self.edges.iter().map(|e| e.err_2q).sum::<f64>() / self.edges.len() as f64
    }
}

fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// An ordered choice of eight physical qubits on one snapshot.
///
/// List order is the logical qubit order: logical qubit `i` of a circuit is
/// placed on `physical_qubits[i]`.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub hardware: Arc<HardwareSnapshot>,
    pub label: String,
    pub physical_qubits: [usize; CONFIG_QUBITS],
}

impl Configuration {
    /// `"<hardware>(<label>)"`, e.g. `fake27q(I)`.
    pub fn id(&self) -> String {
        format!("{}({})", self.hardware.name, self.label)
    }
}

/// Validate an ordered qubit list as a configuration on `snapshot`.
pub fn validate_configuration(
    snapshot: &Arc<HardwareSnapshot>,
    label: impl Into<String>,
    qubits: &[usize],
) -> Result<Configuration> {
    if qubits.len() != CONFIG_QUBITS {
        return Err(Error::validation(format!(
            "configuration must list exactly {CONFIG_QUBITS} qubits, got {}",
            qubits.len()
        )));
    }
    let mut seen = HashSet::new();
    for &q in qubits {
        if q >= snapshot.num_qubits {
            return Err(Error::validation(format!(
                "qubit index {q} out of range for {} ({} qubits)",
                snapshot.name, snapshot.num_qubits
            )));
        }
        if !seen.insert(q) {
            return Err(Error::validation(format!("duplicate qubit index {q}")));
        }
    }
    // Connectivity of the induced subgraph, over positions 0..8.
    let pos = |q: usize| qubits.iter().position(|&p| p == q);
    let induced = snapshot.edges.iter().filter_map(|e| {
        let (a, b) = e.key();
        Some((pos(a)?, pos(b)?))
    });
    if !connected(CONFIG_QUBITS, induced) {
        return Err(Error::validation(format!(
            "qubits {qubits:?} induce a disconnected subgraph on {}",
            snapshot.name
        )));
    }
    let mut physical_qubits = [0usize; CONFIG_QUBITS];
    physical_qubits.copy_from_slice(qubits);
    Ok(Configuration {
        hardware: Arc::clone(snapshot),
        label: label.into(),
        physical_qubits,
    })
}

/// Coupling map over logical indices, with two-qubit errors carried over.
#[derive(Debug, Clone)]
pub struct CouplingMap {
    pub n_qubits: usize,
    /// Edges as (low, high, err_2q), sorted.
    pub edges: Vec<(usize, usize, f64)>,
}

impl CouplingMap {
    pub fn new(n_qubits: usize, mut edges: Vec<(usize, usize, f64)>) -> CouplingMap {
        for e in &mut edges {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        CouplingMap { n_qubits, edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.iter().any(|e| (e.0, e.1) == key)
    }

    pub fn edge_error(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.iter().find(|e| (e.0, e.1) == key).map(|e| e.2)
    }

    /// Neighbors of `q` in ascending index order.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == q {
                    Some(b)
                } else if b == q {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        connected(self.n_qubits, self.edges.iter().map(|e| (e.0, e.1)))
    }

    pub fn mean_err_2q(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        self.edges.iter().map(|e| e.2).sum::<f64>() / self.edges.len() as f64
    }
}

/// Relabel the couplings among a configuration's qubits onto logical indices
/// 0..8, following the configuration's list order.
pub fn induced_coupling(config: &Configuration) -> CouplingMap {
    let pos: BTreeMap<usize, usize> = config
        .physical_qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| (q, i))
        .collect();
    let edges = config
        .hardware
        .edges
        .iter()
        .filter_map(|e| {
            let (a, b) = e.key();
            Some((*pos.get(&a)?, *pos.get(&b)?, e.err_2q))
        })
        .collect();
    CouplingMap::new(CONFIG_QUBITS, edges)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn uniform_qubit() -> QubitCalibration {
        QubitCalibration {
            t1_us: 100.0,
            t2_us: 100.0,
            readout_p01: 0.01,
            readout_p10: 0.03,
            err_1q: 0.001,
            durations_ns: BTreeMap::new(),
        }
    }

    /// Line-coupled snapshot used across the unit tests.
    pub(crate) fn line_snapshot(n: usize) -> Arc<HardwareSnapshot> {
        let edges = (0..n - 1)
            .map(|i| CouplingEdge {
                q0: i,
                q1: i + 1,
                err_2q: 0.01,
            })
            .collect();
        let snap = HardwareSnapshot {
            format: CALIBRATION_FORMAT,
            name: format!("line{n}"),
            num_qubits: n,
            basis_set: BasisSet::A,
            default_durations: DefaultDurations::default(),
            qubits: (0..n).map(|_| uniform_qubit()).collect(),
            edges,
        };
        snap.validate().unwrap();
        Arc::new(snap)
    }

    #[test]
    fn t2_bound_rejected() {
        let mut snap = (*line_snapshot(9)).clone();
        snap.qubits[3].t2_us = 201.0; // t1 = 100
        let err = snap.validate().unwrap_err();
        assert!(err.to_string().contains("t2_us"), "{err}");
    }

    #[test]
    fn duplicate_edge_rejected() {
        let mut snap = (*line_snapshot(9)).clone();
        snap.edges.push(CouplingEdge {
            q0: 1,
            q1: 0,
            err_2q: 0.02,
        });
        assert!(snap.validate().is_err());
    }

    #[test]
    fn disconnected_device_rejected() {
        let mut snap = (*line_snapshot(9)).clone();
        snap.edges.remove(4);
        assert!(snap
            .validate()
            .unwrap_err()
            .to_string()
            .contains("connected"));
    }

    #[test]
    fn duplicate_index_rejected() {
        let snap = line_snapshot(9);
        let err = validate_configuration(&snap, "x", &[0, 0, 1, 2, 3, 4, 5, 6]).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn wrong_length_rejected() {
        let snap = line_snapshot(9);
        assert!(validate_configuration(&snap, "x", &[0, 1, 2]).is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let snap = line_snapshot(9);
        let err = validate_configuration(&snap, "x", &[0, 1, 2, 3, 4, 5, 6, 42]).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn disconnected_subset_rejected() {
        let snap = line_snapshot(10);
        // 0..7 minus 4, plus 9 leaves {9} cut off from the rest.
        let err = validate_configuration(&snap, "x", &[0, 1, 2, 3, 5, 6, 7, 9]).unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
    }

    #[test]
    fn induced_line_is_path() {
        let snap = line_snapshot(12);
        let config = validate_configuration(&snap, "I", &[2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        let cm = induced_coupling(&config);
        let expect: Vec<(usize, usize)> = (0..7).map(|i| (i, i + 1)).collect();
        let got: Vec<(usize, usize)> = cm.edges.iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn induced_preserves_edge_count_and_errors() {
        let snap = line_snapshot(12);
        // Reversed order: logical i -> physical 9-i, still a path.
        let config = validate_configuration(&snap, "R", &[9, 8, 7, 6, 5, 4, 3, 2]).unwrap();
        let cm = induced_coupling(&config);
        assert_eq!(cm.edges.len(), 7);
        assert!(cm.edges.iter().all(|e| (e.2 - 0.01).abs() < 1e-12));
        // Physical edge (9,8) maps to logical (0,1).
        assert!(cm.has_edge(0, 1));
    }

    #[test]
    fn relabel_roundtrip_is_identity() {
        let snap = line_snapshot(16);
        let picks = [5, 4, 6, 3, 7, 2, 8, 1];
        let config = validate_configuration(&snap, "Z", &picks).unwrap();
        for (logical, &phys) in config.physical_qubits.iter().enumerate() {
            let back = config
                .physical_qubits
                .iter()
                .position(|&p| p == phys)
                .unwrap();
            assert_eq!(back, logical);
        }
    }

    #[test]
    fn coherence_harmonic_mean() {
        let q = QubitCalibration {
            t1_us: 100.0,
            t2_us: 50.0,
            ..uniform_qubit()
        };
        assert!((q.coherence_us() - 66.666_666_666_666_67).abs() < 1e-9);
    }
}
