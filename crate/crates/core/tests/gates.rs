use std::f64::consts::PI;

use busqc::circuit::{GateCircuit, LogicalGate};
use busqc::evolution::{fidelity, run_schedule, Mode, PulseSchedule, QuantumState};
use busqc::ifs::{
    code_space_matrix, collective_sz, compile_circuit, compile_single_qubit_gate, encode, init_schedule,
    logical_process_fidelity, plan_cphase, spectator_trace_distance, ControlParams, LogicalRegister,
};
use busqc::linalg::ComplexMatrix;
use busqc::spin::{build_hamiltonian, bus_all_to_all, SpinHamiltonianSpec};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let nb = b.dim();
    ComplexMatrix::from_fn(a.dim() * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

fn pauli(which: char) -> ComplexMatrix<f64> {
    let m = match which {
        'x' => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        'z' => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
    };
    ComplexMatrix::from_fn(2, |i, j| m[i][j])
}

fn on_sites(n: usize, ops: &[(usize, char)]) -> ComplexMatrix<f64> {
    (0..n).fold(ComplexMatrix::identity(1), |acc, q| {
        let p = ops.iter().find(|(s, _)| *s == q).map_or('i', |o| o.1);
        kron(&acc, &pauli(p))
    })
}

#[test]
fn hamiltonian_matches_kronecker_oracle() {
    let mut spec = bus_all_to_all::<f64>(4, 25.0).unwrap();
    spec.coupling[0][3] = -40.0;
    spec.coupling[3][0] = -40.0;
    spec.delta = vec![2.6, 0.0, 1.1, 0.3];
    spec.epsilon = vec![0.2, -2.7, 0.0, 1.0];
    let mut oracle = ComplexMatrix::zeros(16);
    let mut add = |m: ComplexMatrix<f64>, w: f64| {
        for i in 0..16 {
            for j in 0..16 {
                oracle[(i, j)] += m[(i, j)] * w;
            }
        }
    };
    for q in 0..4 {
        add(on_sites(4, &[(q, 'x')]), -spec.delta[q] / 2.0);
        add(on_sites(4, &[(q, 'z')]), -spec.epsilon[q] / 2.0);
        for p in 0..q {
            add(on_sites(4, &[(p, 'z'), (q, 'z')]), spec.coupling[p][q] * 1e-3);
        }
    }
    let h = build_hamiltonian(&spec).unwrap();
    assert!(h.matrix.max_abs_diff(&oracle) < 1e-15);
    assert!(h.matrix.hermiticity_defect() == 0.0);
}

fn setup(n_logical: usize, mode: Mode) -> (LogicalRegister, SpinHamiltonianSpec<f64>, ControlParams<f64>) {
    (
        LogicalRegister::contiguous(n_logical),
        bus_all_to_all(2 * n_logical, 25.0).unwrap(),
        ControlParams::new(mode),
    )
}

fn circuit(n: usize, gates: Vec<LogicalGate<f64>>) -> GateCircuit<f64> {
    GateCircuit::new(n, gates).unwrap()
}

#[test]
fn ideal_two_qubit_gates_are_exact() {
    let (reg, base, p) = setup(2, Mode::Ideal);
    for g in [LogicalGate::CPhase { a: 0, b: 1 }, LogicalGate::Cnot { control: 0, target: 1 }, LogicalGate::Cnot { control: 1, target: 0 }] {
        let circ = circuit(2, vec![g]);
        let s = compile_circuit(&circ, &reg, &base, &p).unwrap();
        let f = logical_process_fidelity(&s, &circ.unitary().unwrap(), &reg).unwrap();
        assert!(f.average_fidelity >= 1.0 - 1e-9, "{g}: {f:?}");
        assert!(f.entanglement_fidelity >= 1.0 - 1e-9);
        assert!(f.leakage < 1e-9);
    }
}

#[test]
fn ideal_cphase_phases_and_wait() {
    let (reg, base, p) = setup(2, Mode::Ideal);
    let plan = plan_cphase(0, 1, &reg, &base, &p).unwrap();
    assert!((plan.wait_ns - 1.25).abs() < 1e-12);
    let (w, _) = code_space_matrix(&PulseSchedule::with_segments(base, plan.segments).unwrap(), &reg).unwrap();
    let g = w[(0, 0)];
    for (k, sign) in [(0, 1.0), (1, 1.0), (2, 1.0), (3, -1.0)] {
        assert!((w[(k, k)] - g * sign).norm() < 1e-9, "|{k}⟩");
        for j in 0..4 {
            if j != k {
                assert!(w[(j, k)].norm() < 1e-12);
            }
        }
    }
}

#[test]
fn cphase_commutes_with_logical_zz() {
    let (reg, base, p) = setup(2, Mode::Ideal);
    let s = compile_circuit(&circuit(2, vec![LogicalGate::CPhase { a: 0, b: 1 }]), &reg, &base, &p).unwrap();
    let (w, _) = code_space_matrix(&s, &reg).unwrap();
    let zz = on_sites(2, &[(0, 'z'), (1, 'z')]);
    assert!(w.matmul(&zz).max_abs_diff(&zz.matmul(&w)) < 1e-9);
}

#[test]
fn cnot_and_bell_preparation() {
    let (reg, base, p) = setup(2, Mode::Ideal);
    let cnot = compile_circuit(&circuit(2, vec![LogicalGate::Cnot { control: 0, target: 1 }]), &reg, &base, &p).unwrap();
    let out = run_schedule(&encode("10", &reg).unwrap(), &cnot).unwrap();
    assert!(fidelity(&out, &encode("11", &reg).unwrap()) >= 1.0 - 1e-6);

    let bell = compile_circuit(
        &circuit(2, vec![LogicalGate::H { qubit: 0 }, LogicalGate::Cnot { control: 0, target: 1 }]),
        &reg,
        &base,
        &p,
    )
    .unwrap();
    let out = run_schedule(&encode("00", &reg).unwrap(), &bell).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let target = reg.embed(&[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).unwrap();
    assert!(fidelity(&out, &target) >= 1.0 - 1e-6);
}

#[test]
fn single_qubit_examples() {
    let (reg, base, p) = setup(1, Mode::Ideal);
    let x = compile_single_qubit_gate(&LogicalGate::X { qubit: 0 }, &reg, &base, &p).unwrap();
    let out = run_schedule(&encode("0", &reg).unwrap(), &PulseSchedule::with_segments(base.clone(), x).unwrap()).unwrap();
    assert!(fidelity(&out, &encode("1", &reg).unwrap()) >= 1.0 - 1e-6);

    for mode in [Mode::Ideal, Mode::Physical] {
        let p = ControlParams::new(mode);
        let rz = compile_single_qubit_gate(&LogicalGate::Rz { qubit: 0, angle: PI / 2.0 }, &reg, &base, &p).unwrap();
        let (w, _) = code_space_matrix(&PulseSchedule::with_segments(base.clone(), rz).unwrap(), &reg).unwrap();
        let rel = w[(1, 1)] / w[(0, 0)];
        assert!((rel - c(0.0, 1.0)).norm() < 1e-12, "{mode}: {rel}");
    }
    assert!(compile_single_qubit_gate(&LogicalGate::CPhase { a: 0, b: 0 }, &reg, &base, &p).is_err());
}

#[test]
fn every_single_qubit_gate_in_both_modes() {
    for mode in [Mode::Ideal, Mode::Physical] {
        let (reg, base, p) = setup(1, mode);
        let (floor, leak) = match mode {
            Mode::Ideal => (1.0 - 1e-9, 1e-9),
            Mode::Physical => (0.99, 1e-3),
        };
        for g in [
            LogicalGate::X { qubit: 0 },
            LogicalGate::Z { qubit: 0 },
            LogicalGate::H { qubit: 0 },
            LogicalGate::Rx { qubit: 0, angle: 0.7 },
            LogicalGate::Rx { qubit: 0, angle: -2.1 },
            LogicalGate::Rz { qubit: 0, angle: 5.0 },
        ] {
            let circ = circuit(1, vec![g]);
            let s = compile_circuit(&circ, &reg, &base, &p).unwrap();
            let f = logical_process_fidelity(&s, &circ.unitary().unwrap(), &reg).unwrap();
            assert!(f.average_fidelity >= floor, "{mode} {g}: {f:?}");
            assert!(f.leakage < leak, "{mode} {g}: {f:?}");
        }
    }
}

fn spectator_input(reg: &LogicalRegister) -> QuantumState<f64> {
    let v: Vec<Complex64> = (0..8).map(|k| c(1.0 + k as f64, 0.3 * k as f64 - 1.0)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    reg.embed(&v.iter().map(|z| z / n).collect::<Vec<_>>()).unwrap()
}

#[test]
fn spectator_pair_untouched_ideal() {
    let (reg, base, p) = setup(3, Mode::Ideal);
    for gates in [vec![LogicalGate::CPhase { a: 0, b: 2 }], vec![LogicalGate::Cnot { control: 2, target: 0 }]] {
        let circ = circuit(3, gates);
        let s = compile_circuit(&circ, &reg, &base, &p).unwrap();
        let psi = spectator_input(&reg);
        let out = run_schedule(&psi, &s).unwrap();
        assert!(spectator_trace_distance(&psi, &out, &reg, 1).unwrap() <= 1e-10);
        let f = logical_process_fidelity(&s, &circ.unitary().unwrap(), &reg).unwrap();
        assert!(f.average_fidelity >= 1.0 - 1e-9);
    }
}

#[test]
fn physical_cphase_at_design_parameters() {
    let (reg, base, p) = setup(2, Mode::Physical);
    let circ = circuit(2, vec![LogicalGate::CPhase { a: 0, b: 1 }]);
    let s = compile_circuit(&circ, &reg, &base, &p).unwrap();
    let f = logical_process_fidelity(&s, &circ.unitary().unwrap(), &reg).unwrap();
    assert!(f.average_fidelity >= 0.99, "{f:?}");
    // flips at finite Δ under always-on J leak at the (2J/Δ)² level
    assert!(f.leakage < 1e-2, "{f:?}");

    let (reg3, base3, p3) = setup(3, Mode::Physical);
    let s3 = compile_circuit(&circuit(3, vec![LogicalGate::CPhase { a: 0, b: 2 }]), &reg3, &base3, &p3).unwrap();
    let psi = spectator_input(&reg3);
    let out = run_schedule(&psi, &s3).unwrap();
    assert!(spectator_trace_distance(&psi, &out, &reg3, 1).unwrap() <= 1e-3);
}

#[test]
fn pairing_choice_does_not_matter() {
    let circ = circuit(
        2,
        vec![
            LogicalGate::H { qubit: 0 },
            LogicalGate::Cnot { control: 0, target: 1 },
            LogicalGate::Rz { qubit: 1, angle: 0.4 },
        ],
    );
    let base = bus_all_to_all::<f64>(4, 25.0).unwrap();
    let p = ControlParams::new(Mode::Ideal);
    let mats: Vec<ComplexMatrix<f64>> = [vec![(0, 1), (2, 3)], vec![(3, 0), (1, 2)], vec![(2, 1), (0, 3)]]
        .into_iter()
        .map(|pairs| {
            let reg = LogicalRegister::new(pairs).unwrap();
            code_space_matrix(&compile_circuit(&circ, &reg, &base, &p).unwrap(), &reg).unwrap().0
        })
        .collect();
    for m in &mats[1..] {
        let tr = (0..4).fold(c(0.0, 0.0), |acc, k| acc + (0..4).fold(c(0.0, 0.0), |s, r| s + mats[0][(r, k)].conj() * m[(r, k)]));
        assert!(tr.norm_sqr() / 16.0 >= 1.0 - 1e-9);
    }
}

#[test]
fn initialization_prepares_all_zero() {
    for mode in [Mode::Ideal, Mode::Physical] {
        let (reg, base, p) = setup(3, mode);
        let s = init_schedule(&reg, &base, &p).unwrap();
        assert_eq!(s.segments.len(), 3);
        let out = run_schedule(&QuantumState::basis(6, 0), &s).unwrap();
        assert!(fidelity(&out, &encode("000", &reg).unwrap()) >= 0.999, "{mode}");
        assert!(collective_sz(&out).abs() < 1e-9);
    }
    let one = init_schedule::<f64>(&LogicalRegister::contiguous(1), &bus_all_to_all(2, 25.0).unwrap(), &ControlParams::new(Mode::Physical)).unwrap();
    assert_eq!(one.segments.len(), 1);
    assert!((one.segments[0].duration - 1.0 / 5.2).abs() < 1e-12);
}

#[test]
fn empty_circuit_compiles_to_empty_schedule() {
    let (reg, base, p) = setup(2, Mode::Physical);
    let s = compile_circuit(&GateCircuit::empty(2), &reg, &base, &p).unwrap();
    assert!(s.segments.is_empty());
    let f = logical_process_fidelity(&s, &ComplexMatrix::identity(4), &reg).unwrap();
    assert!((f.average_fidelity - 1.0).abs() < 1e-12);
}
