//! Quantum state simulation.
//!
//! Noiseless circuits evolve a pure [`Statevector`]; noisy circuits evolve a
//! [`DensityState`] where every gate unitary is followed by its noise
//! channels (depolarizing with the gate's calibrated error rate, thermal
//! relaxation for the gate's duration on each touched qubit). Measurement is
//! exact by default: Pauli-Z expectations are read from the state, and
//! [`sample_counts`] adds shot sampling with readout error on top.
//!
//! Basis index convention: bit `q` of a basis-state index holds qubit `q`
//! (little-endian). Rendered bitstrings put qubit 0 first.

mod noise;

pub use noise::NoiseModel;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng as _;

use crate::circuits::{CircuitIR, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Largest simulable register.
pub const MAX_QUBITS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pure state of up to [`MAX_QUBITS`] qubits.
#[derive(Debug, Clone)]
pub struct Statevector {
    pub n_qubits: usize,
    pub amps: Vec<Complex64>,
}

impl Statevector {
    /// |0...0>
    pub fn zero(n_qubits: usize) -> Result<Statevector> {
        check_width(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        match op.kind {
            GateKind::Cx => {
                let (c, t) = (op.qubits[0], op.qubits[1]);
                let (mc, mt) = (1usize << c, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            GateKind::Swap => {
                let (ma, mb) = (1usize << op.qubits[0], 1usize << op.qubits[1]);
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, (i & !ma) | mb);
                    }
                }
            }
            GateKind::Reset => {
                return Err(Error::validation(
                    "reset is not supported in pure-state simulation",
                ));
            }
            _ => {
                let u = op.matrix_1q();
                let m = 1usize << op.qubits[0];
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let j = i | m;
                        let a = self.amps[i];
                        let b = self.amps[j];
                        self.amps[i] = u[0] * a + u[1] * b;
                        self.amps[j] = u[2] * a + u[3] * b;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability of measuring basis state `i`.
    pub fn probability(&self, i: usize) -> f64 {
        self.amps[i].norm_sqr()
    }

    /// <Z_q> = P(bit q = 0) - P(bit q = 1).
    pub fn expectation_z(&self, qubit: usize) -> f64 {
        let m = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if i & m == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum()
    }

    /// Density matrix |psi><psi|.
    pub fn to_density(&self) -> DensityState {
        let dim = self.amps.len();
        let mut mat = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                mat[r * dim + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityState {
            n_qubits: self.n_qubits,
            mat,
        }
    }
}

/// Mixed state of up to [`MAX_QUBITS`] qubits, stored as a dense row-major
/// 2^n x 2^n matrix.
#[derive(Debug, Clone)]
pub struct DensityState {
    pub n_qubits: usize,
    mat: Vec<Complex64>,
}

impl DensityState {
    /// |0...0><0...0|
    pub fn zero(n_qubits: usize) -> Result<DensityState> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut mat = vec![ZERO; dim * dim];
        mat[0] = Complex64::new(1.0, 0.0);
        Ok(DensityState { n_qubits, mat })
    }

    /// Maximally mixed state I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Result<DensityState> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut mat = vec![ZERO; dim * dim];
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            mat[i * dim + i] = p;
        }
        Ok(DensityState { n_qubits, mat })
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.mat[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.mat[i * dim + i]).sum()
    }

    /// Diagonal as real probabilities (tiny negative values clamped to 0).
    pub fn probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim)
            .map(|i| self.mat[i * dim + i].re.max(0.0))
            .collect()
    }

    /// trace(Z_q rho).
    pub fn expectation_z(&self, qubit: usize) -> f64 {
        let dim = self.dim();
        let m = 1usize << qubit;
        (0..dim)
            .map(|i| {
                let p = self.mat[i * dim + i].re;
                if i & m == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum()
    }

    /// Largest absolute deviation from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                let d = (self.mat[r * dim + c] - self.mat[c * dim + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// rho -> U rho U^dag for a single-qubit unitary on `qubit`.
    pub fn apply_1q(&mut self, qubit: usize, u: &[Complex64; 4]) {
        let dim = self.dim();
        let m = 1usize << qubit;
        // Left multiply by U: mix row pairs.
        for r0 in 0..dim {
            if r0 & m != 0 {
                continue;
            }
            let r1 = r0 | m;
            let (head, tail) = self.mat.split_at_mut(r1 * dim);
            let row0 = &mut head[r0 * dim..r0 * dim + dim];
            let row1 = &mut tail[..dim];
            for c in 0..dim {
                let a = row0[c];
                let b = row1[c];
                row0[c] = u[0] * a + u[1] * b;
                row1[c] = u[2] * a + u[3] * b;
            }
        }
        // Right multiply by U^dag: mix column pairs within each row.
        let (c00, c01, c10, c11) = (u[0].conj(), u[1].conj(), u[2].conj(), u[3].conj());
        for row in self.mat.chunks_exact_mut(dim) {
            for c0 in 0..dim {
                if c0 & m != 0 {
                    continue;
                }
                let c1 = c0 | m;
                let a = row[c0];
                let b = row[c1];
                row[c0] = a * c00 + b * c01;
                row[c1] = a * c10 + b * c11;
            }
        }
    }

    /// rho -> CX rho CX.
    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let dim = self.dim();
        let (mc, mt) = (1usize << control, 1usize << target);
        for r in 0..dim {
            if r & mc != 0 && r & mt == 0 {
                let r2 = r | mt;
                for c in 0..dim {
                    self.mat.swap(r * dim + c, r2 * dim + c);
                }
            }
        }
        for row in self.mat.chunks_exact_mut(dim) {
            for c in 0..dim {
                if c & mc != 0 && c & mt == 0 {
                    row.swap(c, c | mt);
                }
            }
        }
    }

    /// rho -> SWAP rho SWAP.
    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let dim = self.dim();
        let (ma, mb) = (1usize << a, 1usize << b);
        let perm = |i: usize| {
            if (i & ma != 0) != (i & mb != 0) {
                i ^ ma ^ mb
            } else {
                i
            }
        };
        for r in 0..dim {
            let pr = perm(r);
            if pr > r {
                for c in 0..dim {
                    self.mat.swap(r * dim + c, pr * dim + c);
                }
            }
        }
        for row in self.mat.chunks_exact_mut(dim) {
            for c in 0..dim {
                let pc = perm(c);
                if pc > c {
                    row.swap(c, pc);
                }
            }
        }
    }

    /// Reset `qubit` to |0>: Kraus {|0><0|, |0><1|}.
    pub fn apply_reset(&mut self, qubit: usize) {
        let dim = self.dim();
        let m = 1usize << qubit;
        for r0 in 0..dim {
            if r0 & m != 0 {
                continue;
            }
            let r1 = r0 | m;
            for c0 in 0..dim {
                if c0 & m != 0 {
                    continue;
                }
                let c1 = c0 | m;
                let keep = self.mat[r0 * dim + c0] + self.mat[r1 * dim + c1];
                self.mat[r0 * dim + c0] = keep;
                self.mat[r0 * dim + c1] = ZERO;
                self.mat[r1 * dim + c0] = ZERO;
                self.mat[r1 * dim + c1] = ZERO;
            }
        }
    }

    /// Single-qubit depolarizing: rho -> (1-p) rho + p * Tr_q(rho) (x) I/2.
    pub fn depolarize_1q(&mut self, qubit: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim();
        let m = 1usize << qubit;
        let keep = 1.0 - p;
        let half = 0.5 * p;
        for r0 in 0..dim {
            if r0 & m != 0 {
                continue;
            }
            let r1 = r0 | m;
            for c0 in 0..dim {
                if c0 & m != 0 {
                    continue;
                }
                let c1 = c0 | m;
                let a = self.mat[r0 * dim + c0];
                let d = self.mat[r1 * dim + c1];
                let mix = (a + d) * half;
                self.mat[r0 * dim + c0] = a * keep + mix;
                self.mat[r1 * dim + c1] = d * keep + mix;
                self.mat[r0 * dim + c1] *= keep;
                self.mat[r1 * dim + c0] *= keep;
            }
        }
    }

    /// Two-qubit depolarizing: rho -> (1-p) rho + p * Tr_ab(rho) (x) I/4.
    pub fn depolarize_2q(&mut self, qa: usize, qb: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim();
        let (ma, mb) = (1usize << qa, 1usize << qb);
        let keep = 1.0 - p;
        let quarter = 0.25 * p;
        let offs = [0, ma, mb, ma | mb];
        for r0 in 0..dim {
            if r0 & (ma | mb) != 0 {
                continue;
            }
            for c0 in 0..dim {
                if c0 & (ma | mb) != 0 {
                    continue;
                }
                let mut tr = ZERO;
                for o in offs {
                    tr += self.mat[(r0 | o) * dim + (c0 | o)];
                }
                let mix = tr * quarter;
                for ox in offs {
                    for oy in offs {
                        let idx = (r0 | ox) * dim + (c0 | oy);
                        let v = self.mat[idx] * keep;
                        self.mat[idx] = if ox == oy { v + mix } else { v };
                    }
                }
            }
        }
    }

    /// Thermal relaxation on `qubit`: amplitude damping `gamma` composed with
    /// pure dephasing so the off-diagonal retains `sqrt(1-gamma) * g`.
    pub fn thermal_relax(&mut self, qubit: usize, gamma: f64, g: f64) {
        if gamma == 0.0 && g == 1.0 {
            return;
        }
        let dim = self.dim();
        let m = 1usize << qubit;
        let coh = (1.0 - gamma).sqrt() * g;
        for r0 in 0..dim {
            if r0 & m != 0 {
                continue;
            }
            let r1 = r0 | m;
            for c0 in 0..dim {
                if c0 & m != 0 {
                    continue;
                }
                let c1 = c0 | m;
                let d = self.mat[r1 * dim + c1];
                self.mat[r0 * dim + c0] += d * gamma;
                self.mat[r1 * dim + c1] = d * (1.0 - gamma);
                self.mat[r0 * dim + c1] *= coh;
                self.mat[r1 * dim + c0] *= coh;
            }
        }
    }

    fn apply_unitary_op(&mut self, op: &GateOp) -> Result<()> {
        match op.kind {
            GateKind::Cx => self.apply_cx(op.qubits[0], op.qubits[1]),
            GateKind::Swap => self.apply_swap(op.qubits[0], op.qubits[1]),
            GateKind::Reset => self.apply_reset(op.qubits[0]),
            _ => self.apply_1q(op.qubits[0], &op.matrix_1q()),
        }
        Ok(())
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::validation(format!(
            "simulator supports 1..={MAX_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

/// Evolve |0...0> through `circuit` without noise.
pub fn run_statevector(circuit: &CircuitIR) -> Result<Statevector> {
    let mut state = Statevector::zero(circuit.n_qubits)?;
    for op in &circuit.ops {
        state.apply(op)?;
    }
    Ok(state)
}

/// Evolve |0...0><0...0| through `circuit`.
///
/// Without a noise model this reduces to pure-state evolution and returns
/// the pure density matrix. With a noise model, each gate's unitary is
/// followed by its channels; the model is indexed by the circuit's qubit
/// positions, so noisy circuits are expected to be transpiled onto the
/// configuration the model was built from.
pub fn run(circuit: &CircuitIR, noise: Option<&NoiseModel>) -> Result<DensityState> {
    let Some(noise) = noise else {
        // Pure-state fast path; reset is non-unitary and needs the density form.
        if circuit.ops.iter().all(|op| op.kind != GateKind::Reset) {
            return Ok(run_statevector(circuit)?.to_density());
        }
        let mut state = DensityState::zero(circuit.n_qubits)?;
        for op in &circuit.ops {
            state.apply_unitary_op(op)?;
        }
        return Ok(state);
    };
    if circuit.n_qubits > noise.n_qubits() {
        return Err(Error::validation(format!(
            "circuit touches {} qubits but the noise model calibrates {}",
            circuit.n_qubits,
            noise.n_qubits()
        )));
    }
    let mut state = DensityState::zero(circuit.n_qubits)?;
    for op in &circuit.ops {
        state.apply_unitary_op(op)?;
        noise.apply_gate_noise(&mut state, op)?;
    }
    Ok(state)
}

/// trace(Z_q rho).
pub fn expectation_z(state: &DensityState, qubit: usize) -> Result<f64> {
    if qubit >= state.n_qubits {
        return Err(Error::validation(format!(
            "qubit {qubit} out of range for a {}-qubit state",
            state.n_qubits
        )));
    }
    Ok(state.expectation_z(qubit))
}

/// Sample `shots` bitstrings from the state's diagonal, flipping each bit
/// through the readout confusion matrix when a noise model is given.
///
/// Bitstring character `i` is qubit `i`'s measured bit.
pub fn sample_counts(
    state: &DensityState,
    shots: u64,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<BTreeMap<String, u64>> {
    if shots == 0 {
        return Err(Error::validation("shots must be >= 1"));
    }
    let probs = state.probabilities();
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::numerical("state has no probability mass"));
    }
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p / total;
        cumulative.push(acc);
    }
    let mut rng = rng_from_seed(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let x: f64 = rng.gen();
        let mut idx = cumulative.partition_point(|&c| c < x);
        if idx >= probs.len() {
            idx = probs.len() - 1;
        }
        let mut bits = idx;
        if let Some(noise) = noise {
            for q in 0..state.n_qubits {
                let (p01, p10) = noise.readout(q);
                let bit = (bits >> q) & 1;
                let flip_p = if bit == 0 { p01 } else { p10 };
                if flip_p > 0.0 && rng.gen::<f64>() < flip_p {
                    bits ^= 1 << q;
                }
            }
        }
        let key: String = (0..state.n_qubits)
            .map(|q| if (bits >> q) & 1 == 0 { '0' } else { '1' })
            .collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests;
