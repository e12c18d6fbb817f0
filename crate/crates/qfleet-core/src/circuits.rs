//! Circuit intermediate representation and QNN constructors.
//!
//! Circuits are flat, ordered gate lists over logical qubits. The model
//! builders assemble a classifier circuit from a data-loading stage (angle
//! or amplitude embedding) followed by strongly entangling layers whose
//! CNOT ring is controlled by a range parameter: control `i` targets
//! `(i + r) mod n`.

use std::fmt;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate vocabulary of the IR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Sx,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Swap,
    Id,
    Reset,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Sx => "sx",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Id => "id",
            GateKind::Reset => "reset",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        Some(match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "sx" => GateKind::Sx,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "u1" => GateKind::U1,
            "u2" => GateKind::U2,
            "u3" => GateKind::U3,
            "cx" => GateKind::Cx,
            "swap" => GateKind::Swap,
            "id" => GateKind::Id,
            "reset" => GateKind::Reset,
            _ => return None,
        })
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cx | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Number of angle parameters.
    pub fn n_params(&self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Result<GateOp> {
        if qubits.len() != kind.arity() {
            return Err(Error::validation(format!(
                "{} takes {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                qubits.len()
            )));
        }
        if kind.arity() == 2 && qubits[0] == qubits[1] {
            return Err(Error::validation(format!(
                "{} endpoints must be distinct",
                kind.name()
            )));
        }
        if params.len() != kind.n_params() {
            return Err(Error::validation(format!(
                "{} takes {} parameter(s), got {}",
                kind.name(),
                kind.n_params(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::validation(format!(
                "{} has a non-finite angle",
                kind.name()
            )));
        }
        Ok(GateOp { kind, qubits, params })
    }

    pub fn ry(q: usize, theta: f64) -> GateOp {
        GateOp::new(GateKind::Ry, vec![q], vec![theta]).unwrap()
    }
    pub fn rz(q: usize, phi: f64) -> GateOp {
        GateOp::new(GateKind::Rz, vec![q], vec![phi]).unwrap()
    }
    pub fn rx(q: usize, theta: f64) -> GateOp {
        GateOp::new(GateKind::Rx, vec![q], vec![theta]).unwrap()
    }
    pub fn h(q: usize) -> GateOp {
        GateOp::new(GateKind::H, vec![q], vec![]).unwrap()
    }
    pub fn x(q: usize) -> GateOp {
        GateOp::new(GateKind::X, vec![q], vec![]).unwrap()
    }
    pub fn sx(q: usize) -> GateOp {
        GateOp::new(GateKind::Sx, vec![q], vec![]).unwrap()
    }
    pub fn u1(q: usize, lambda: f64) -> GateOp {
        GateOp::new(GateKind::U1, vec![q], vec![lambda]).unwrap()
    }
    pub fn u2(q: usize, phi: f64, lambda: f64) -> GateOp {
        GateOp::new(GateKind::U2, vec![q], vec![phi, lambda]).unwrap()
    }
    pub fn u3(q: usize, theta: f64, phi: f64, lambda: f64) -> GateOp {
        GateOp::new(GateKind::U3, vec![q], vec![theta, phi, lambda]).unwrap()
    }
    pub fn cx(control: usize, target: usize) -> GateOp {
        GateOp::new(GateKind::Cx, vec![control, target], vec![]).unwrap()
    }
    pub fn swap(a: usize, b: usize) -> GateOp {
        GateOp::new(GateKind::Swap, vec![a, b], vec![]).unwrap()
    }

    /// 2x2 unitary of a single-qubit gate, row-major.
    ///
    /// Panics for two-qubit gates and `reset` (not a unitary).
    pub fn matrix_1q(&self) -> [Complex64; 4] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self.kind {
            GateKind::H => {
                let s = 1.0 / 2f64.sqrt();
                [c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]
            }
            GateKind::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            GateKind::Sx => [
                c(0.5, 0.5),
                c(0.5, -0.5),
                c(0.5, -0.5),
                c(0.5, 0.5),
            ],
            GateKind::Id => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            GateKind::Rx => {
                let t = self.params[0] / 2.0;
                [
                    c(t.cos(), 0.0),
                    c(0.0, -t.sin()),
                    c(0.0, -t.sin()),
                    c(t.cos(), 0.0),
                ]
            }
            GateKind::Ry => {
                let t = self.params[0] / 2.0;
                [
                    c(t.cos(), 0.0),
                    c(-t.sin(), 0.0),
                    c(t.sin(), 0.0),
                    c(t.cos(), 0.0),
                ]
            }
            GateKind::Rz => {
                let t = self.params[0] / 2.0;
                [
                    Complex64::from_polar(1.0, -t),
                    c(0.0, 0.0),
                    c(0.0, 0.0),
                    Complex64::from_polar(1.0, t),
                ]
            }
            GateKind::U1 => [
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex64::from_polar(1.0, self.params[0]),
            ],
            GateKind::U2 => u3_matrix(PI / 2.0, self.params[0], self.params[1]),
            GateKind::U3 => u3_matrix(self.params[0], self.params[1], self.params[2]),
            GateKind::Cx | GateKind::Swap | GateKind::Reset => {
                panic!("{} has no 1-qubit matrix", self.kind)
            }
        }
    }
}

/// u3(theta, phi, lambda) = [[cos(t/2), -e^{i l} sin(t/2)],
///                           [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> [Complex64; 4] {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        Complex64::new(ct, 0.0),
        -Complex64::from_polar(st, lambda),
        Complex64::from_polar(st, phi),
        Complex64::from_polar(ct, phi + lambda),
    ]
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        for p in &self.params {
            write!(f, " {p:.12}")?;
        }
        Ok(())
    }
}

/// A flat gate-list circuit over `n_qubits` logical qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_qubits: usize,
    pub ops: Vec<GateOp>,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> CircuitIR {
        CircuitIR {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        if let Some(&q) = op.qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::validation(format!(
                "op {} touches qubit {q}, circuit has {} qubits",
                op, self.n_qubits
            )));
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, other: &CircuitIR) -> Result<()> {
        for op in &other.ops {
            self.push(op.clone())?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Line-oriented text form: one op per line (`name qubits... params...`).
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits);
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }

    /// Parse the line-oriented text form.
    pub fn from_text(text: &str) -> Result<CircuitIR> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::validation("empty circuit text"))?;
        let n_qubits = header
            .strip_prefix("qubits ")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::validation(format!("bad circuit header: {header}")))?;
        let mut circuit = CircuitIR::new(n_qubits);
        for line in lines {
            let mut tokens = line.split_whitespace();
            let name = tokens.next().unwrap();
            let kind = GateKind::from_name(name)
                .ok_or_else(|| Error::validation(format!("unknown gate name: {name}")))?;
            let rest: Vec<&str> = tokens.collect();
            if rest.len() != kind.arity() + kind.n_params() {
                return Err(Error::validation(format!("bad op line: {line}")));
            }
            let qubits = rest[..kind.arity()]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::validation(format!("bad qubit index in: {line}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let params = rest[kind.arity()..]
                .iter()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::validation(format!("bad angle in: {line}")))
                })
                .collect::<Result<Vec<_>>>()?;
            circuit.push(GateOp::new(kind, qubits, params)?)?;
        }
        Ok(circuit)
    }
}

/// Data-loading scheme of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    /// One Y-rotation per feature, feature `i` on qubit `i`.
    Angle { n_features: usize },
    /// `2^k` features as the amplitudes of a `k`-qubit state.
    Amplitude { n_features: usize },
}

impl Embedding {
    pub fn n_features(&self) -> usize {
        match self {
            Embedding::Angle { n_features } | Embedding::Amplitude { n_features } => *n_features,
        }
    }
}

/// Shape of a classifier model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub n_qubits: usize,
    pub embedding: Embedding,
    pub n_layers: usize,
    pub range_r: usize,
    pub n_classes: usize,
    pub measured_qubits: Vec<usize>,
}

impl ModelSpec {
    pub fn new(
        n_qubits: usize,
        embedding: Embedding,
        n_layers: usize,
        range_r: usize,
        n_classes: usize,
    ) -> Result<ModelSpec> {
        let spec = ModelSpec {
            n_qubits,
            embedding,
            n_layers,
            range_r,
            n_classes,
            measured_qubits: (0..n_classes).collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.embedding {
            Embedding::Angle { n_features } => {
                if n_features > self.n_qubits {
                    return Err(Error::validation(format!(
                        "angle embedding of {n_features} features needs {n_features} qubits, model has {}",
                        self.n_qubits
                    )));
                }
            }
            Embedding::Amplitude { n_features } => {
                if !n_features.is_power_of_two() {
                    return Err(Error::validation(format!(
                        "amplitude embedding needs a power-of-two feature count, got {n_features}"
                    )));
                }
                let k = n_features.trailing_zeros() as usize;
                if k > self.n_qubits {
                    return Err(Error::validation(format!(
                        "amplitude embedding of {n_features} features needs {k} qubits, model has {}",
                        self.n_qubits
                    )));
                }
            }
        }
        if self.range_r < 1 || self.range_r > self.n_qubits - 1 {
            return Err(Error::validation(format!(
                "range_r = {} outside [1, {}]",
                self.range_r,
                self.n_qubits - 1
            )));
        }
        if self.n_classes > self.n_qubits {
            return Err(Error::validation(format!(
                "{} classes need {} measured qubits, model has {}",
                self.n_classes, self.n_classes, self.n_qubits
            )));
        }
        if self.measured_qubits.len() != self.n_classes
            || self.measured_qubits.iter().any(|&q| q >= self.n_qubits)
        {
            return Err(Error::validation("measured_qubits must list one valid qubit per class"));
        }
        Ok(())
    }

    /// Iris classifier: angle embedding (4 features), 6 layers, 3 classes.
    pub fn iris(range_r: usize) -> ModelSpec {
        ModelSpec::new(8, Embedding::Angle { n_features: 4 }, 6, range_r, 3).unwrap()
    }

    /// Binary digits classifier: amplitude embedding (64 features), 3 layers.
    pub fn digits(range_r: usize) -> ModelSpec {
        ModelSpec::new(8, Embedding::Amplitude { n_features: 64 }, 3, range_r, 2).unwrap()
    }

    /// Trainable parameter count: layers x qubits x 3.
    pub fn n_params(&self) -> usize {
        self.n_layers * self.n_qubits * 3
    }
}

/// Trainable rotation angles shaped `[n_layers][n_qubits][3]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub n_layers: usize,
    pub n_qubits: usize,
    pub values: Vec<f64>,
}

impl ParameterSet {
    pub fn zeros(spec: &ModelSpec) -> ParameterSet {
        ParameterSet {
            n_layers: spec.n_layers,
            n_qubits: spec.n_qubits,
            values: vec![0.0; spec.n_params()],
        }
    }

    /// Seeded uniform initialization in [0, 2*pi).
    pub fn init_uniform(spec: &ModelSpec, seed: u64) -> ParameterSet {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(seed);
        let values = (0..spec.n_params())
            .map(|_| rng.gen_range(0.0..2.0 * PI))
            .collect();
        ParameterSet {
            n_layers: spec.n_layers,
            n_qubits: spec.n_qubits,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn index(&self, layer: usize, qubit: usize, k: usize) -> usize {
        (layer * self.n_qubits + qubit) * 3 + k
    }

    pub fn get(&self, layer: usize, qubit: usize, k: usize) -> f64 {
        self.values[self.index(layer, qubit, k)]
    }

    /// Rotation triple (a, b, c) for one qubit of one layer.
    pub fn triple(&self, layer: usize, qubit: usize) -> [f64; 3] {
        let i = self.index(layer, qubit, 0);
        [self.values[i], self.values[i + 1], self.values[i + 2]]
    }

    pub fn matches(&self, spec: &ModelSpec) -> bool {
        self.n_layers == spec.n_layers
            && self.n_qubits == spec.n_qubits
            && self.values.len() == spec.n_params()
            && self.values.iter().all(|v| v.is_finite())
    }
}

/// Y-rotation data loading: feature `i` becomes `RY(f_i)` on qubit `i`.
pub fn angle_embedding(n_qubits: usize, features: &[f64]) -> Result<CircuitIR> {
    if features.len() > n_qubits {
        return Err(Error::validation(format!(
            "angle embedding: {} features exceed {} qubits",
            features.len(),
            n_qubits
        )));
    }
    let mut circuit = CircuitIR::new(n_qubits);
    for (q, &f) in features.iter().enumerate() {
        circuit.push(GateOp::ry(q, f))?;
    }
    Ok(circuit)
}

/// Amplitude data loading via a cascade of uniformly controlled Y-rotations.
///
/// The input must be L2-normalized with non-negative entries; the prepared
/// state on the low `k` qubits has amplitudes equal to the input.
pub fn amplitude_embedding(n_qubits: usize, features: &[f64]) -> Result<CircuitIR> {
    let len = features.len();
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::validation(format!(
            "amplitude embedding: length {len} is not a power of two >= 2"
        )));
    }
    let k = len.trailing_zeros() as usize;
    if k > n_qubits {
        return Err(Error::validation(format!(
            "amplitude embedding: {len} amplitudes need {k} qubits, circuit has {n_qubits}"
        )));
    }
    let norm: f64 = features.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::validation(format!(
            "amplitude embedding: input norm {norm} differs from 1 by more than 1e-6"
        )));
    }

    let mut circuit = CircuitIR::new(n_qubits);
    // levels[d][j] = norm of the block of 2^d amplitudes starting at j * 2^d;
    // level 0 holds the leaf magnitudes, level k-1 the two half-norms.
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut current: Vec<f64> = features.iter().map(|x| x.abs()).collect();
    while current.len() > 1 {
        let half: Vec<f64> = current
            .chunks(2)
            .map(|pair| (pair[0] * pair[0] + pair[1] * pair[1]).sqrt())
            .collect();
        levels.push(current);
        current = half;
    }
    for d in 0..k {
        // Split qubit for this stage, from most significant down.
        let target = k - 1 - d;
        let parents = &levels[k - 1 - d]; // length 2^(d+1): children of this stage
        let n_angles = parents.len() / 2;
        let mut angles = Vec::with_capacity(n_angles);
        for j in 0..n_angles {
            let lo = parents[2 * j];
            let hi = parents[2 * j + 1];
            angles.push(2.0 * hi.atan2(lo));
        }
        let controls: Vec<usize> = ((target + 1)..k).rev().collect();
        multiplexed_ry(&mut circuit, &controls, target, &angles)?;
    }
    Ok(circuit)
}

/// Uniformly controlled RY: for each classical pattern of `controls`
/// (most significant control first), rotate `target` by the matching angle.
///
/// Recursive decomposition into 2^k RY and 2^k CX gates.
fn multiplexed_ry(
    circuit: &mut CircuitIR,
    controls: &[usize],
    target: usize,
    angles: &[f64],
) -> Result<()> {
    debug_assert_eq!(angles.len(), 1 << controls.len());
    if controls.is_empty() {
        circuit.push(GateOp::ry(target, angles[0]))?;
        return Ok(());
    }
    let half = angles.len() / 2;
    let (a0, a1) = angles.split_at(half);
    let sum: Vec<f64> = a0.iter().zip(a1).map(|(x, y)| (x + y) / 2.0).collect();
    let diff: Vec<f64> = a0.iter().zip(a1).map(|(x, y)| (x - y) / 2.0).collect();
    let rest = &controls[1..];
    multiplexed_ry(circuit, rest, target, &sum)?;
    circuit.push(GateOp::cx(controls[0], target))?;
    multiplexed_ry(circuit, rest, target, &diff)?;
    circuit.push(GateOp::cx(controls[0], target))?;
    Ok(())
}

/// One strongly entangling layer: a ZYZ rotation triple per qubit, then the
/// CNOT ring with range `r` (control `i`, target `(i + r) mod n`).
pub fn sel_layer(n_qubits: usize, range_r: usize, layer_params: &[[f64; 3]]) -> Result<CircuitIR> {
    if range_r < 1 || range_r > n_qubits - 1 {
        return Err(Error::validation(format!(
            "range_r = {range_r} outside [1, {}]",
            n_qubits - 1
        )));
    }
    if layer_params.len() != n_qubits {
        return Err(Error::validation(format!(
            "sel layer needs {n_qubits} rotation triples, got {}",
            layer_params.len()
        )));
    }
    let mut circuit = CircuitIR::new(n_qubits);
    for (q, p) in layer_params.iter().enumerate() {
        circuit.push(GateOp::rz(q, p[0]))?;
        circuit.push(GateOp::ry(q, p[1]))?;
        circuit.push(GateOp::rz(q, p[2]))?;
    }
    for i in 0..n_qubits {
        circuit.push(GateOp::cx(i, (i + range_r) % n_qubits))?;
    }
    Ok(circuit)
}

/// Full classifier circuit: embedding followed by `n_layers` SEL layers.
///
/// Measurement is not part of the IR; the simulator reads Z-expectations on
/// `spec.measured_qubits`.
pub fn build_qnn(spec: &ModelSpec, features: &[f64], params: &ParameterSet) -> Result<CircuitIR> {
    if features.len() != spec.embedding.n_features() {
        return Err(Error::validation(format!(
            "model expects {} features, got {}",
            spec.embedding.n_features(),
            features.len()
        )));
    }
    if !params.matches(spec) {
        return Err(Error::validation(
            "parameter set shape does not match the model spec",
        ));
    }
    let mut circuit = match spec.embedding {
        Embedding::Angle { .. } => angle_embedding(spec.n_qubits, features)?,
        Embedding::Amplitude { .. } => amplitude_embedding(spec.n_qubits, features)?,
    };
    for layer in 0..spec.n_layers {
        let triples: Vec<[f64; 3]> = (0..spec.n_qubits).map(|q| params.triple(layer, q)).collect();
        circuit.extend(&sel_layer(spec.n_qubits, spec.range_r, &triples)?)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sel_ring_r1() {
        let params = [[0.0; 3]; 8];
        let c = sel_layer(8, 1, &params).unwrap();
        let cnots: Vec<(usize, usize)> = c
            .ops
            .iter()
            .filter(|op| op.kind == GateKind::Cx)
            .map(|op| (op.qubits[0], op.qubits[1]))
            .collect();
        let expect: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        assert_eq!(cnots, expect);
    }

    #[test]
    fn sel_ring_r4() {
        let params = [[0.0; 3]; 8];
        let c = sel_layer(8, 4, &params).unwrap();
        let cnots: Vec<(usize, usize)> = c
            .ops
            .iter()
            .filter(|op| op.kind == GateKind::Cx)
            .map(|op| (op.qubits[0], op.qubits[1]))
            .collect();
        let expect = vec![
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
            (4, 0),
            (5, 1),
            (6, 2),
            (7, 3),
        ];
        assert_eq!(cnots, expect);
    }

    #[test]
    fn sel_ring_r3_wraps() {
        let params = [[0.0; 3]; 8];
        let c = sel_layer(8, 3, &params).unwrap();
        let cnots: Vec<(usize, usize)> = c
            .ops
            .iter()
            .filter(|op| op.kind == GateKind::Cx)
            .map(|op| (op.qubits[0], op.qubits[1]))
            .collect();
        assert_eq!(cnots[6], (6, 1)); // (6 + 3) mod 8
    }

    #[test]
    fn sel_ring_coprime_covers_all_qubits() {
        for r in [1usize, 3, 5, 7] {
            let params = [[0.0; 3]; 8];
            let c = sel_layer(8, r, &params).unwrap();
            let mut as_control = [0usize; 8];
            let mut as_target = [0usize; 8];
            for op in c.ops.iter().filter(|op| op.kind == GateKind::Cx) {
                as_control[op.qubits[0]] += 1;
                as_target[op.qubits[1]] += 1;
            }
            assert!(as_control.iter().all(|&n| n == 1), "r = {r}");
            assert!(as_target.iter().all(|&n| n == 1), "r = {r}");
        }
    }

    #[test]
    fn sel_range_bounds() {
        let params = [[0.0; 3]; 8];
        assert!(sel_layer(8, 0, &params).is_err());
        assert!(sel_layer(8, 8, &params).is_err());
    }

    #[test]
    fn angle_embedding_leaves_high_qubits_untouched() {
        let c = angle_embedding(8, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(c.ops.len(), 4);
        assert!(c.ops.iter().all(|op| op.qubits[0] < 4));
        assert!(c.ops.iter().all(|op| op.kind == GateKind::Ry));
    }

    #[test]
    fn angle_embedding_wrong_length() {
        assert!(angle_embedding(4, &[0.1; 5]).is_err());
    }

    #[test]
    fn amplitude_embedding_rejects_unnormalized() {
        let v = vec![0.5; 64];
        let err = amplitude_embedding(8, &v).unwrap_err();
        assert!(err.to_string().contains("norm"), "{err}");
    }

    #[test]
    fn amplitude_embedding_rejects_wrong_length() {
        let mut v = vec![0.0; 63];
        v[0] = 1.0;
        assert!(amplitude_embedding(8, &v).is_err());
    }

    #[test]
    fn iris_model_op_count() {
        // 4 RY + 6 layers x (24 rotations + 8 CNOTs)
        let spec = ModelSpec::iris(1);
        let params = ParameterSet::init_uniform(&spec, 1);
        let c = build_qnn(&spec, &[0.1, 0.2, 0.3, 0.4], &params).unwrap();
        assert_eq!(c.ops.len(), 4 + 6 * 32);
    }

    #[test]
    fn digits_model_op_count() {
        let spec = ModelSpec::digits(1);
        let params = ParameterSet::init_uniform(&spec, 1);
        let mut v = vec![0.0; 64];
        v[0] = 1.0;
        let c = build_qnn(&spec, &v, &params).unwrap();
        let sel_ops = 3 * 32;
        assert!(c.ops.len() >= sel_ops);
        // SEL part sits at the tail.
        let tail = &c.ops[c.ops.len() - sel_ops..];
        assert_eq!(tail.iter().filter(|op| op.kind == GateKind::Cx).count(), 24);
    }

    #[test]
    fn zero_layer_model_is_embedding_only() {
        let spec = ModelSpec::new(8, Embedding::Angle { n_features: 4 }, 0, 1, 3).unwrap();
        let params = ParameterSet::zeros(&spec);
        let c = build_qnn(&spec, &[0.0; 4], &params).unwrap();
        assert_eq!(c.ops.len(), 4);
    }

    #[test]
    fn build_qnn_deterministic() {
        let spec = ModelSpec::iris(2);
        let params = ParameterSet::init_uniform(&spec, 9);
        let a = build_qnn(&spec, &[1.0, 0.5, 0.25, 0.125], &params).unwrap();
        let b = build_qnn(&spec, &[1.0, 0.5, 0.25, 0.125], &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn circuit_text_roundtrip() {
        let spec = ModelSpec::iris(1);
        let params = ParameterSet::init_uniform(&spec, 3);
        let c = build_qnn(&spec, &[0.7, 0.1, 2.0, 3.0], &params).unwrap();
        let parsed = CircuitIR::from_text(&c.to_text()).unwrap();
        assert_eq!(parsed.n_qubits, c.n_qubits);
        assert_eq!(parsed.ops.len(), c.ops.len());
        for (a, b) in parsed.ops.iter().zip(&c.ops) {
            assert_eq!(a.kind, b.kind);
            assert_eq!(a.qubits, b.qubits);
            for (x, y) in a.params.iter().zip(&b.params) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
