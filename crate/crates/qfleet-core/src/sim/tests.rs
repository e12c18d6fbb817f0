use std::f64::consts::PI;

use super::noise::{depolarizing_kraus_1q, thermal_kraus, UniformNoise};
use super::*;
use crate::circuits::{amplitude_embedding, build_qnn, GateOp, ModelSpec, ParameterSet};
use crate::rng::rng_from_seed;
use rand::Rng as _;

fn single(op: GateOp, n: usize) -> CircuitIR {
    let mut c = CircuitIR::new(n);
    c.push(op).unwrap();
    c
}

/// Noise with no thermal decay, for analytic channel checks.
fn depol_only(n: usize, p1: f64, p2: f64) -> NoiseModel {
    NoiseModel::uniform(
        n,
        UniformNoise {
            err_1q: p1,
            err_2q: p2,
            t1_us: 100.0,
            t2_us: 100.0,
            readout_p01: 0.0,
            readout_p10: 0.0,
            oneq_ns: 0.0,
            twoq_ns: 0.0,
        },
    )
    .unwrap()
}

#[test]
fn hadamard_gives_zero_expectation() {
    let state = run(&single(GateOp::h(0), 1), None).unwrap();
    assert!(expectation_z(&state, 0).unwrap().abs() < 1e-12);
}

#[test]
fn x_with_depolarizing_contracts_expectation() {
    for p in [0.0, 0.05, 0.2, 1.0] {
        let noise = depol_only(1, p, 0.0);
        let state = run(&single(GateOp::x(0), 1), Some(&noise)).unwrap();
        let z = expectation_z(&state, 0).unwrap();
        assert!((z + (1.0 - p)).abs() < 1e-12, "p = {p}, z = {z}");
    }
}

#[test]
fn amplitude_embedding_diagonal_matches_input() {
    let mut rng = rng_from_seed(11);
    let mut v: Vec<f64> = (0..64).map(|_| rng.gen::<f64>()).collect();
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let circuit = amplitude_embedding(6, &v).unwrap();
    let state = run(&circuit, None).unwrap();
    let probs = state.probabilities();
    for (i, &x) in v.iter().enumerate() {
        assert!((probs[i] - x * x).abs() < 1e-9, "index {i}");
    }
}

#[test]
fn amplitude_embedding_statevector_roundtrip() {
    // 100 seeded vectors: prepared amplitudes equal the input within 1e-9.
    let mut rng = rng_from_seed(23);
    for trial in 0..100 {
        let mut v: Vec<f64> = (0..64).map(|_| rng.gen::<f64>()).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let sv = run_statevector(&amplitude_embedding(6, &v).unwrap()).unwrap();
        for (i, &x) in v.iter().enumerate() {
            assert!(
                (sv.amps[i].re - x).abs() < 1e-9 && sv.amps[i].im.abs() < 1e-9,
                "trial {trial}, index {i}: {} vs {x}",
                sv.amps[i]
            );
        }
    }
}

#[test]
fn amplitude_embedding_basis_and_uniform_states() {
    let mut e0 = vec![0.0; 64];
    e0[0] = 1.0;
    let sv = run_statevector(&amplitude_embedding(6, &e0).unwrap()).unwrap();
    assert!((sv.amps[0].norm() - 1.0).abs() < 1e-12);

    let uniform = vec![1.0 / 8.0; 64];
    let sv = run_statevector(&amplitude_embedding(6, &uniform).unwrap()).unwrap();
    for a in &sv.amps {
        assert!((a.re - 0.125).abs() < 1e-9 && a.im.abs() < 1e-12);
    }
}

#[test]
fn expectation_on_zero_and_mixed_states() {
    let zero = DensityState::zero(3).unwrap();
    assert!((expectation_z(&zero, 0).unwrap() - 1.0).abs() < 1e-12);
    let mixed = DensityState::maximally_mixed(3).unwrap();
    assert!(expectation_z(&mixed, 2).unwrap().abs() < 1e-12);
}

#[test]
fn ry_expectation_is_cosine() {
    for theta in [0.3, 1.1, 2.5] {
        let state = run(&single(GateOp::ry(0, theta), 1), None).unwrap();
        assert!((expectation_z(&state, 0).unwrap() - theta.cos()).abs() < 1e-9);
    }
}

#[test]
fn expectation_index_checked() {
    let state = DensityState::zero(2).unwrap();
    assert!(expectation_z(&state, 2).is_err());
}

#[test]
fn sampling_without_readout_error_is_exact_on_basis_state() {
    let state = run(&single(GateOp::x(0), 2), None).unwrap();
    let counts = sample_counts(&state, 1000, None, 3).unwrap();
    assert_eq!(counts.len(), 1);
    assert_eq!(counts["10"], 1000);
}

#[test]
fn sampling_readout_error_rate_matches_p01() {
    let noise = NoiseModel::uniform(
        1,
        UniformNoise {
            err_1q: 0.0,
            err_2q: 0.0,
            t1_us: 100.0,
            t2_us: 100.0,
            readout_p01: 0.1,
            readout_p10: 0.0,
            oneq_ns: 0.0,
            twoq_ns: 0.0,
        },
    )
    .unwrap();
    let state = DensityState::zero(1).unwrap();
    let counts = sample_counts(&state, 100_000, Some(&noise), 7).unwrap();
    let ones = *counts.get("1").unwrap_or(&0) as f64 / 100_000.0;
    assert!((ones - 0.1).abs() < 0.005, "observed {ones}");
}

#[test]
fn sampling_plus_state_is_balanced() {
    let state = run(&single(GateOp::h(0), 1), None).unwrap();
    let counts = sample_counts(&state, 100_000, None, 5).unwrap();
    let zeros = counts["0"] as f64 / 100_000.0;
    assert!((zeros - 0.5).abs() < 0.005, "observed {zeros}");
    assert_eq!(counts.values().sum::<u64>(), 100_000);
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let state = run(&single(GateOp::h(0), 3), None).unwrap();
    let a = sample_counts(&state, 5000, None, 42).unwrap();
    let b = sample_counts(&state, 5000, None, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sampled_expectation_converges_to_exact() {
    // 3-sigma binomial bound on <Z> estimated from counts.
    let theta = 1.234;
    let state = run(&single(GateOp::ry(0, theta), 1), None).unwrap();
    let exact = expectation_z(&state, 0).unwrap();
    let shots = 100_000u64;
    let counts = sample_counts(&state, shots, None, 9).unwrap();
    let ones = *counts.get("1").unwrap_or(&0) as f64;
    let est = 1.0 - 2.0 * ones / shots as f64;
    let p1 = (1.0 - exact) / 2.0;
    let sigma_z = 2.0 * (p1 * (1.0 - p1) / shots as f64).sqrt();
    assert!((est - exact).abs() < 3.0 * sigma_z, "est {est}, exact {exact}");
}

#[test]
fn trace_preserved_through_noisy_circuit() {
    let spec = ModelSpec::iris(1);
    let params = ParameterSet::init_uniform(&spec, 4);
    let circuit = build_qnn(&spec, &[0.4, 1.0, 2.2, 0.9], &params).unwrap();
    let noise = depol_only(8, 0.002, 0.02);
    let mut state = DensityState::zero(8).unwrap();
    for op in &circuit.ops {
        state.apply_unitary_op(op).unwrap();
        noise.apply_gate_noise(&mut state, op).unwrap();
        let tr = state.trace();
        assert!((tr.re - 1.0).abs() < 1e-9 && tr.im.abs() < 1e-12);
    }
    assert!(state.hermiticity_defect() < 1e-9);
}

#[test]
fn thermal_relaxation_decays_toward_ground() {
    let noise = NoiseModel::uniform(
        1,
        UniformNoise {
            err_1q: 0.0,
            err_2q: 0.0,
            t1_us: 1.0,
            t2_us: 1.0,
            readout_p01: 0.0,
            readout_p10: 0.0,
            oneq_ns: 500.0, // half of T1 per gate
            twoq_ns: 0.0,
        },
    )
    .unwrap();
    let state = run(&single(GateOp::x(0), 1), Some(&noise)).unwrap();
    // After X, the excited population decays by exp(-0.5).
    let z = expectation_z(&state, 0).unwrap();
    let p1 = (-0.5f64).exp();
    assert!((z - (1.0 - 2.0 * p1)).abs() < 1e-12, "z = {z}");
}

#[test]
fn circuit_then_inverse_restores_ground_state() {
    let spec = ModelSpec::iris(3);
    let params = ParameterSet::init_uniform(&spec, 8);
    let circuit = build_qnn(&spec, &[0.2, 0.8, 1.5, 3.0], &params).unwrap();
    let mut full = circuit.clone();
    for op in circuit.ops.iter().rev() {
        full.push(inverse_op(op)).unwrap();
    }
    let sv = run_statevector(&full).unwrap();
    assert!((sv.amps[0].norm() - 1.0).abs() < 1e-9);
    assert!((sv.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn state_norm_after_built_circuits_is_one() {
    let spec = ModelSpec::digits(2);
    let params = ParameterSet::init_uniform(&spec, 5);
    let mut rng = rng_from_seed(6);
    let mut v: Vec<f64> = (0..64).map(|_| rng.gen::<f64>()).collect();
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let circuit = build_qnn(&spec, &v, &params).unwrap();
    let sv = run_statevector(&circuit).unwrap();
    assert!((sv.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn depolarizing_never_amplifies_expectation() {
    for theta in [0.3, 0.9, 1.7, 2.8] {
        let ideal = run(&single(GateOp::ry(0, theta), 1), None).unwrap();
        let zi = expectation_z(&ideal, 0).unwrap();
        for p in [0.01, 0.1, 0.4] {
            let noise = depol_only(1, p, 0.0);
            let noisy = run(&single(GateOp::ry(0, theta), 1), Some(&noise)).unwrap();
            let zn = expectation_z(&noisy, 0).unwrap();
            assert!(zn.abs() <= zi.abs() + 1e-12, "theta {theta} p {p}");
        }
    }
}

#[test]
fn kraus_sets_are_complete() {
    for p in [0.0, 0.1, 0.7, 1.0] {
        let ops = depolarizing_kraus_1q(p);
        assert_eq!(ops.len(), 4);
    }
    for (gamma, g) in [(0.0, 1.0), (0.3, 0.9), (0.8, 0.5)] {
        let ops = thermal_kraus(gamma, g);
        let mut sum = [num_complex::Complex64::new(0.0, 0.0); 4];
        for k in &ops {
            let kd = [k[0].conj(), k[2].conj(), k[1].conj(), k[3].conj()];
            sum[0] += kd[0] * k[0] + kd[1] * k[2];
            sum[1] += kd[0] * k[1] + kd[1] * k[3];
            sum[2] += kd[2] * k[0] + kd[3] * k[2];
            sum[3] += kd[2] * k[1] + kd[3] * k[3];
        }
        assert!((sum[0].re - 1.0).abs() < 1e-12);
        assert!((sum[3].re - 1.0).abs() < 1e-12);
        assert!(sum[1].norm() < 1e-12 && sum[2].norm() < 1e-12);
    }
}

#[test]
fn uncoupled_cx_is_rejected_under_noise() {
    let snap = crate::calibration::tests::line_snapshot(8);
    let config =
        crate::calibration::validate_configuration(&snap, "I", &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
    let noise = NoiseModel::from_configuration(&config).unwrap();
    // (0,7) is not an edge of the path coupling.
    let err = run(&single(GateOp::cx(0, 7), 8), Some(&noise)).unwrap_err();
    assert!(err.to_string().contains("uncoupled"), "{err}");
}

#[test]
fn missing_calibration_is_rejected() {
    let noise = depol_only(2, 0.0, 0.0);
    let err = run(&single(GateOp::h(2), 3), Some(&noise)).unwrap_err();
    assert!(err.to_string().contains("calibrat"), "{err}");
}

#[test]
fn reset_zeroes_a_qubit_in_density_simulation() {
    let mut c = CircuitIR::new(2);
    c.push(GateOp::x(0)).unwrap();
    c.push(GateOp::h(1)).unwrap();
    c.push(GateOp::new(crate::circuits::GateKind::Reset, vec![0], vec![]).unwrap())
        .unwrap();
    let state = run(&c, None).unwrap();
    assert!((expectation_z(&state, 0).unwrap() - 1.0).abs() < 1e-12);
    assert!(expectation_z(&state, 1).unwrap().abs() < 1e-12);
}

/// Exact matrix inverse of an op, used by the unitarity test.
fn inverse_op(op: &GateOp) -> GateOp {
    use crate::circuits::GateKind::*;
    match op.kind {
        H | X | Cx | Swap | Id => op.clone(),
        Rx => GateOp::rx(op.qubits[0], -op.params[0]),
        Ry => GateOp::ry(op.qubits[0], -op.params[0]),
        Rz => GateOp::rz(op.qubits[0], -op.params[0]),
        U1 => GateOp::u1(op.qubits[0], -op.params[0]),
        U2 => GateOp::u3(op.qubits[0], -PI / 2.0, -op.params[1], -op.params[0]),
        U3 => GateOp::u3(op.qubits[0], -op.params[0], -op.params[2], -op.params[1]),
        Sx => GateOp::u3(op.qubits[0], -PI / 2.0, -PI / 2.0, PI / 2.0),
        Reset => panic!("reset has no inverse"),
    }
}
