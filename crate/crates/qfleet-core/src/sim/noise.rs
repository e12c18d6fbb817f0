//! Calibration-derived noise model.
//!
//! A [`NoiseModel`] is indexed by circuit qubit position: building it from a
//! [`Configuration`] resolves each position to its physical qubit's
//! calibration. Per gate, the model applies a depolarizing channel with the
//! gate's calibrated error rate and thermal relaxation for the gate's
//! duration on each touched qubit. Frame-change gates (`rz`, `u1`, `id`) are
//! treated as virtual: zero duration, zero error.
//!
//! Every channel's Kraus operators are checked for completeness
//! (sum K^dag K = I within 1e-9) at construction.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::calibration::{induced_coupling, Configuration};
use crate::circuits::{GateKind, GateOp};
use crate::error::{Error, Result};

use super::DensityState;

const KRAUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
struct PositionNoise {
    err_1q: f64,
    t1_us: f64,
    t2_us: f64,
    readout_p01: f64,
    readout_p10: f64,
    durations_ns: BTreeMap<String, f64>,
    oneq_ns: f64,
    twoq_ns: f64,
}

/// Per-gate noise parameters for a register of qubit positions.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    positions: Vec<PositionNoise>,
    /// Depolarizing probability per coupled position pair (low, high).
    twoq: BTreeMap<(usize, usize), f64>,
    label: String,
}

/// Uniform parameters for hand-built noise models.
#[derive(Debug, Clone, Copy)]
pub struct UniformNoise {
    pub err_1q: f64,
    pub err_2q: f64,
    pub t1_us: f64,
    pub t2_us: f64,
    pub readout_p01: f64,
    pub readout_p10: f64,
    pub oneq_ns: f64,
    pub twoq_ns: f64,
}

impl NoiseModel {
    /// Resolve a configuration's positions against its hardware calibration.
    pub fn from_configuration(config: &Configuration) -> Result<NoiseModel> {
        let hw = &config.hardware;
        let positions = config
            .physical_qubits
            .iter()
            .map(|&q| {
                let cal = &hw.qubits[q];
                PositionNoise {
                    err_1q: cal.err_1q,
                    t1_us: cal.t1_us,
                    t2_us: cal.t2_us,
                    readout_p01: cal.readout_p01,
                    readout_p10: cal.readout_p10,
                    durations_ns: cal.durations_ns.clone(),
                    oneq_ns: hw.default_durations.oneq_ns,
                    twoq_ns: hw.default_durations.twoq_ns,
                }
            })
            .collect();
        let twoq = induced_coupling(config)
            .edges
            .iter()
            .map(|&(a, b, p)| ((a, b), p))
            .collect();
        let model = NoiseModel {
            positions,
            twoq,
            label: config.id(),
        };
        model.verify_kraus_completeness()?;
        Ok(model)
    }

    /// All-to-all model with identical parameters on every position.
    pub fn uniform(n_qubits: usize, params: UniformNoise) -> Result<NoiseModel> {
        let positions = (0..n_qubits)
            .map(|_| PositionNoise {
                err_1q: params.err_1q,
                t1_us: params.t1_us,
                t2_us: params.t2_us,
                readout_p01: params.readout_p01,
                readout_p10: params.readout_p10,
                durations_ns: BTreeMap::new(),
                oneq_ns: params.oneq_ns,
                twoq_ns: params.twoq_ns,
            })
            .collect();
        let mut twoq = BTreeMap::new();
        for a in 0..n_qubits {
            for b in (a + 1)..n_qubits {
                twoq.insert((a, b), params.err_2q);
            }
        }
        let model = NoiseModel {
            positions,
            twoq,
            label: "uniform".into(),
        };
        model.verify_kraus_completeness()?;
        Ok(model)
    }

    pub fn n_qubits(&self) -> usize {
        self.positions.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// (p01, p10) readout confusion for a position.
    pub fn readout(&self, position: usize) -> (f64, f64) {
        let p = &self.positions[position];
        (p.readout_p01, p.readout_p10)
    }

    /// Depolarizing probability of the coupled pair, if coupled.
    pub fn two_qubit_error(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.twoq.get(&key).copied()
    }

    /// Fold the readout confusion of `position` into an exact Z-expectation:
    /// z -> (p10 - p01) + z * (1 - p01 - p10).
    pub fn readout_adjusted_z(&self, position: usize, z: f64) -> f64 {
        let (p01, p10) = self.readout(position);
        (p10 - p01) + z * (1.0 - p01 - p10)
    }

    fn duration_ns(&self, position: usize, gate: &str, arity: usize) -> f64 {
        let p = &self.positions[position];
        if let Some(d) = p.durations_ns.get(gate) {
            return *d;
        }
        if arity == 1 {
            p.oneq_ns
        } else {
            p.twoq_ns
        }
    }

    /// Amplitude-damping and dephasing factors for `duration_ns` on a qubit.
    fn thermal_factors(&self, position: usize, duration_ns: f64) -> (f64, f64) {
        let p = &self.positions[position];
        let t_us = duration_ns * 1e-3;
        let gamma = 1.0 - (-t_us / p.t1_us).exp();
        // Off-diagonal retention: sqrt(1-gamma) * g = exp(-t/T2).
        let g = (-t_us / p.t2_us + t_us / (2.0 * p.t1_us)).exp();
        (gamma, g)
    }

    /// Apply the channels following one gate.
    pub fn apply_gate_noise(&self, state: &mut DensityState, op: &GateOp) -> Result<()> {
        for &q in &op.qubits {
            if q >= self.positions.len() {
                return Err(Error::validation(format!(
                    "no calibration for circuit qubit {q} (model covers {})",
                    self.positions.len()
                )));
            }
        }
        match op.kind {
            // Virtual gates: frame changes carry no noise.
            GateKind::Rz | GateKind::U1 | GateKind::Id | GateKind::Reset => {}
            GateKind::Cx | GateKind::Swap => {
                let (a, b) = (op.qubits[0], op.qubits[1]);
                let p = self.two_qubit_error(a, b).ok_or_else(|| {
                    Error::validation(format!(
                        "two-qubit gate on uncoupled pair ({a},{b}); route the circuit first"
                    ))
                })?;
                state.depolarize_2q(a, b, p);
                for q in [a, b] {
                    let d = self.duration_ns(q, op.kind.name(), 2);
                    let (gamma, g) = self.thermal_factors(q, d);
                    state.thermal_relax(q, gamma, g);
                }
            }
            _ => {
                let q = op.qubits[0];
                state.depolarize_1q(q, self.positions[q].err_1q);
                let d = self.duration_ns(q, op.kind.name(), 1);
                let (gamma, g) = self.thermal_factors(q, d);
                state.thermal_relax(q, gamma, g);
            }
        }
        Ok(())
    }

    /// Check sum K^dag K = I for every channel the model can apply.
    fn verify_kraus_completeness(&self) -> Result<()> {
        for (i, p) in self.positions.iter().enumerate() {
            if !(0.0..=1.0).contains(&p.err_1q) {
                return Err(Error::validation(format!(
                    "position {i}: err_1q outside [0,1]"
                )));
            }
            check_completeness_2x2(&depolarizing_kraus_1q(p.err_1q), &format!("depolarizing(q{i})"))?;
            let mut durations: Vec<f64> = vec![p.oneq_ns, p.twoq_ns];
            durations.extend(p.durations_ns.values().copied());
            for d in durations {
                let (gamma, g) = self.thermal_factors(i, d);
                if !(0.0..=1.0).contains(&gamma) || g > 1.0 + KRAUS_TOL {
                    return Err(Error::validation(format!(
                        "position {i}: thermal factors out of range (t2 > 2*t1?)"
                    )));
                }
                check_completeness_2x2(
                    &thermal_kraus(gamma, g.min(1.0)),
                    &format!("thermal(q{i}, {d}ns)"),
                )?;
            }
            for (name, v) in [("p01", p.readout_p01), ("p10", p.readout_p10)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::validation(format!(
                        "position {i}: readout {name} outside [0,1]"
                    )));
                }
            }
        }
        for (&(a, b), &p) in &self.twoq {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!(
                    "pair ({a},{b}): err_2q outside [0,1]"
                )));
            }
            // Two-qubit depolarizing mixes unitary Paulis, so completeness
            // reduces to the weights summing to one.
            let weights_sum = (1.0 - 15.0 * p / 16.0) + 15.0 * (p / 16.0);
            if (weights_sum - 1.0).abs() > KRAUS_TOL {
                return Err(Error::numerical(format!(
                    "pair ({a},{b}): depolarizing weights sum to {weights_sum}"
                )));
            }
        }
        Ok(())
    }
}

/// Kraus set of the single-qubit depolarizing channel
/// rho -> (1-p) rho + p I/2.
pub fn depolarizing_kraus_1q(p: f64) -> Vec<[Complex64; 4]> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let ci = |x: f64| Complex64::new(0.0, x);
    let w0 = (1.0 - 0.75 * p).sqrt();
    let w = (0.25 * p).sqrt();
    vec![
        [c(w0), c(0.0), c(0.0), c(w0)],
        [c(0.0), c(w), c(w), c(0.0)],
        [c(0.0), ci(-w), ci(w), c(0.0)],
        [c(w), c(0.0), c(0.0), c(-w)],
    ]
}

/// Kraus set of thermal relaxation: amplitude damping `gamma` composed with
/// phase damping chosen so the off-diagonal retains `sqrt(1-gamma) * g`.
pub fn thermal_kraus(gamma: f64, g: f64) -> Vec<[Complex64; 4]> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let lambda = 1.0 - g * g;
    let ad = [
        [c(1.0), c(0.0), c(0.0), c((1.0 - gamma).sqrt())],
        [c(0.0), c(gamma.sqrt()), c(0.0), c(0.0)],
    ];
    let pd = [
        [c(1.0), c(0.0), c(0.0), c((1.0 - lambda).sqrt())],
        [c(0.0), c(0.0), c(0.0), c(lambda.sqrt())],
    ];
    let mut out = Vec::with_capacity(4);
    for p in &pd {
        for a in &ad {
            out.push(mat2_mul(p, a));
        }
    }
    out
}

fn mat2_mul(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn check_completeness_2x2(kraus: &[[Complex64; 4]], what: &str) -> Result<()> {
    let mut sum = [Complex64::new(0.0, 0.0); 4];
    for k in kraus {
        // K^dag K
        let kd = [k[0].conj(), k[2].conj(), k[1].conj(), k[3].conj()];
        let kk = mat2_mul(&kd, k);
        for (s, v) in sum.iter_mut().zip(kk) {
            *s += v;
        }
    }
    let defect = (sum[0] - 1.0).norm()
        + sum[1].norm()
        + sum[2].norm()
        + (sum[3] - 1.0).norm();
    if defect > KRAUS_TOL {
        return Err(Error::numerical(format!(
            "{what}: Kraus completeness defect {defect:.3e}"
        )));
    }
    Ok(())
}
