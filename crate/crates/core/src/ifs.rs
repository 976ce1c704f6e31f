//! Interaction-free-subspace encoding and the gate compiler.
//!
//! Each logical qubit is a pair (a, b) of physical qubits with
//! |0_L⟩ = |↑_a↓_b⟩ and |1_L⟩ = |↓_a↑_b⟩. On these states the collective σz
//! of the pair vanishes, so any coupling that is uniform across the pair's
//! two members drops out of the Hamiltonian.
//!
//! Gates are realized as follows (logical Z_L = σz_a, X_L = σx_a σx_b on the
//! code space):
//!
//! * Rz_L(θ): opposite ε on a and b for |θ|/(4πε).
//! * X_L: simultaneous π pulses on a and b.
//! * Rx_L(θ): Rx(-π/2) on a and b, free evolution under the intra-pair
//!   coupling, then Rx(π/2). The conjugated σzσz acts as σyσy, which is X_L on
//!   the code space.
//! * CPHASE(i, j): flip b_i and b_j, wait, flip back, then logical Rz
//!   corrections obtained from diagonal-phase bookkeeping.
//! * H = Rz(π/2) Rx(π/2) Rz(π/2); CNOT = H_t CPHASE H_t.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circuit::{GateCircuit, LogicalGate};
use crate::error::{Error, Result};
use crate::evolution::{run_schedule_batch, trace_distance, IdealOp, Mode, PulseSchedule, PulseSegment, QuantumState};
use crate::linalg::{unitary_from_hermitian, ComplexMatrix};
use crate::scalar::Real;
use crate::spin::{build_hamiltonian, qubit_mask, spin_sign, SpinHamiltonianSpec, Topology};
use crate::units;

/// Fixed pairing of physical qubits into logical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalRegister {
    pairs: Vec<(usize, usize)>,
}

impl LogicalRegister {
    /// `pairs[k] = (a, b)` for logical qubit k. The pairs must partition
    /// physical qubits `0..2·pairs.len()`.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = 2 * pairs.len();
        let mut seen = vec![false; n];
        for &(a, b) in &pairs {
            for q in [a, b] {
                if q >= n {
                    return Err(Error::InvalidRegister(format!("qubit {q} outside 0..{n}")));
                }
                if seen[q] {
                    return Err(Error::InvalidRegister(format!("qubit {q} appears twice")));
                }
                seen[q] = true;
            }
        }
        Ok(Self { pairs })
    }

    /// Pairs (0,1), (2,3), ...
    pub fn contiguous(n_logical: usize) -> Self {
        Self {
            pairs: (0..n_logical).map(|k| (2 * k, 2 * k + 1)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n_logical(&self) -> usize {
        self.pairs.len()
    }

    pub fn n_physical(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn pair_of(&self, q: usize) -> Option<usize> {
        self.pairs.iter().position(|&(a, b)| a == q || b == q)
    }

    fn check_logical(&self, k: usize) -> Result<()> {
        if k < self.n_logical() {
            Ok(())
        } else {
            Err(Error::InvalidRegister(format!("logical qubit {k} out of range")))
        }
    }

    /// Physical basis index of logical basis state `logical` (logical qubit 0
    /// is the most significant bit).
    pub fn code_index(&self, logical: usize) -> usize {
        let n = self.n_physical();
        let m = self.n_logical();
        let mut b = 0;
        for (k, &(a, bq)) in self.pairs.iter().enumerate() {
            let down = if (logical >> (m - 1 - k)) & 1 == 0 { bq } else { a };
            b |= qubit_mask(down, n);
        }
        b
    }

    pub fn code_indices(&self) -> Vec<usize> {
        (0..1 << self.n_logical()).map(|l| self.code_index(l)).collect()
    }

    /// Maps logical amplitudes into the physical register.
    pub fn embed<T: Real>(&self, logical: &[Complex<T>]) -> Result<QuantumState<T>> {
        if logical.len() != 1 << self.n_logical() {
            return Err(Error::InvalidParameter("logical amplitude count does not match register".into()));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << self.n_physical()];
        for (l, &z) in logical.iter().enumerate() {
            amps[self.code_index(l)] = z;
        }
        QuantumState::new(amps)
    }

    /// Code-space amplitudes (not renormalized).
    pub fn project<T: Real>(&self, state: &QuantumState<T>) -> Vec<Complex<T>> {
        self.code_indices().into_iter().map(|b| state.amplitudes()[b]).collect()
    }

    /// Probability outside the code space.
    pub fn leakage<T: Real>(&self, state: &QuantumState<T>) -> T {
        let inside: T = self.project(state).iter().map(|z| z.norm_sqr()).sum();
        (T::one() - inside).max(T::zero())
    }

    /// Reduced density matrix of the physical pair of logical qubit `k`.
    pub fn pair_density<T: Real>(&self, state: &QuantumState<T>, k: usize) -> ComplexMatrix<T> {
        let (a, b) = self.pairs[k];
        state.reduced_density(&[a, b])
    }
}

/// Encodes a bitstring such as `"01"` as a product of code states.
pub fn encode<T: Real>(bits: &str, reg: &LogicalRegister) -> Result<QuantumState<T>> {
    if bits.len() != reg.n_logical() || bits.chars().any(|c| c != '0' && c != '1') {
        return Err(Error::InvalidParameter(format!(
            "bitstring '{bits}' does not match {} logical qubits",
            reg.n_logical()
        )));
    }
    let l = if bits.is_empty() { 0 } else { usize::from_str_radix(bits, 2).expect("binary digits") };
    Ok(QuantumState::basis(reg.n_physical(), reg.code_index(l)))
}

/// ⟨Σ_q σz_q⟩, proportional to the net flux the register applies to the bus.
pub fn collective_sz<T: Real>(state: &QuantumState<T>) -> T {
    let n = state.n_qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, z)| z.norm_sqr() * (0..n).map(|q| spin_sign::<T>(b, q, n)).sum::<T>())
        .sum()
}

/// ‖H_inter ψ‖ / (J_max ‖ψ‖), where H_inter keeps only couplings between
/// different pairs and J_max is the largest such |J|. Zero when there is no
/// inter-pair coupling.
pub fn verify_ifs<T: Real>(state: &QuantumState<T>, spec: &SpinHamiltonianSpec<T>, reg: &LogicalRegister) -> Result<T> {
    spec.validate()?;
    if spec.n_qubits != reg.n_physical() || state.n_qubits() != spec.n_qubits {
        return Err(Error::InvalidRegister("state, Hamiltonian and register sizes differ".into()));
    }
    let inter = |i: usize, j: usize| reg.pair_of(i) != reg.pair_of(j);
    let mut j_max = T::zero();
    for i in 0..spec.n_qubits {
        for j in 0..i {
            if inter(i, j) {
                j_max = j_max.max(units::mhz_to_ghz(spec.coupling[i][j]).abs());
            }
        }
    }
    if j_max == T::zero() {
        return Ok(T::zero());
    }
    let diag = spec.diagonal_with(inter);
    let hpsi: T = state
        .amplitudes()
        .iter()
        .zip(&diag)
        .map(|(z, &d)| z.norm_sqr() * d * d)
        .sum::<T>()
        .sqrt();
    Ok(hpsi / (j_max * state.norm()))
}

/// Pulse amplitudes used by the physical compiler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams<T> {
    pub mode: Mode,
    /// Tunneling amplitude Δ applied during flips and x rotations, GHz.
    pub delta_ghz: T,
    /// Bias magnitude |ε| applied during z rotations, GHz.
    pub epsilon_ghz: T,
}

impl<T: Real> ControlParams<T> {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            delta_ghz: T::lit(2.6),
            epsilon_ghz: T::lit(2.7),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_ghz > T::zero() && self.delta_ghz.is_finite()) {
            return Err(Error::InvalidParameter("pulse Δ must be positive".into()));
        }
        if !(self.epsilon_ghz > T::zero() && self.epsilon_ghz.is_finite()) {
            return Err(Error::InvalidParameter("pulse ε must be positive".into()));
        }
        Ok(())
    }
}

/// π pulse on `qubit`: Δ on that qubit only, ε = 0, for 1/(2Δ).
pub fn pi_pulse<T: Real>(qubit: usize, delta_ghz: T, n_qubits: usize) -> Result<PulseSegment<T>> {
    if !(delta_ghz > T::zero()) {
        return Err(Error::InvalidParameter("π pulse needs Δ > 0".into()));
    }
    if qubit >= n_qubits {
        return Err(Error::InvalidParameter(format!("qubit {qubit} out of range")));
    }
    let mut delta = vec![T::zero(); n_qubits];
    delta[qubit] = delta_ghz;
    Ok(PulseSegment::drive(
        T::one() / (T::two() * delta_ghz),
        delta,
        vec![T::zero(); n_qubits],
        format!("pi q{qubit}"),
    ))
}

fn check_sizes<T: Real>(reg: &LogicalRegister, base: &SpinHamiltonianSpec<T>) -> Result<()> {
    base.validate()?;
    if base.n_qubits != reg.n_physical() {
        return Err(Error::InvalidRegister(format!(
            "register has {} physical qubits, Hamiltonian has {}",
            reg.n_physical(),
            base.n_qubits
        )));
    }
    if base.is_driven() || base.epsilon.iter().any(|&e| e != T::zero()) {
        return Err(Error::InvalidParameter("base Hamiltonian must be idle (Δ = ε = 0)".into()));
    }
    Ok(())
}

/// Prepares all-|0_L⟩ from all qubits in the left well (|↑…↑⟩) by flipping
/// each pair's b qubit in turn.
///
/// In physical mode every pulse carries a bias on the flipped qubit that
/// cancels the static field of its already-frozen neighbours, so each flip is
/// a resonant two-level rotation.
pub fn init_schedule<T: Real>(
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
) -> Result<PulseSchedule<T>> {
    check_sizes(reg, base)?;
    params.validate()?;
    let n = reg.n_physical();
    let mut schedule = PulseSchedule::new(base.clone());
    let mut spins = vec![T::one(); n];
    for (k, &(_, b)) in reg.pairs().iter().enumerate() {
        let seg = match params.mode {
            Mode::Ideal => PulseSegment::ideal(IdealOp::Flip { qubit: b }, format!("init L{k}")),
            Mode::Physical => {
                let field: T = (0..n)
                    .filter(|&j| j != b)
                    .map(|j| units::mhz_to_ghz(base.coupling[b][j]) * spins[j])
                    .sum();
                let mut seg = pi_pulse(b, params.delta_ghz, n)?;
                if let crate::evolution::SegmentKind::Drive { epsilon, .. } = &mut seg.kind {
                    epsilon[b] = T::two() * field;
                }
                seg.label = format!("init L{k}");
                seg
            }
        };
        schedule.segments.push(seg);
        spins[b] = -T::one();
    }
    Ok(schedule)
}

fn drive_on<T: Real>(n: usize, controls: &[(usize, T, T)], duration: T, label: String) -> PulseSegment<T> {
    let mut delta = vec![T::zero(); n];
    let mut epsilon = vec![T::zero(); n];
    for &(q, d, e) in controls {
        delta[q] = d;
        epsilon[q] = e;
    }
    PulseSegment::drive(duration, delta, epsilon, label)
}

/// Reduces an angle to (-π, π].
fn wrap_pi<T: Real>(theta: T) -> T {
    let tau = T::two_pi();
    let r = theta - tau * (theta / tau).round();
    if r <= -T::PI() {
        r + tau
    } else {
        r
    }
}

/// Physical x rotation exp(-iθσx/2) on `qubits` at once. A Δ drive gives
/// exp(iπΔtσx), so t = ((-θ) mod 2π)/(2πΔ).
fn rot_x<T: Real>(qubits: &[usize], theta: T, reg: &LogicalRegister, params: &ControlParams<T>, label: &str) -> Vec<PulseSegment<T>> {
    match params.mode {
        Mode::Ideal => qubits
            .iter()
            .map(|&q| PulseSegment::ideal(IdealOp::RotX { qubit: q, angle: theta }, label))
            .collect(),
        Mode::Physical => {
            let t = (-theta).modulo(T::two_pi()) / (T::two_pi() * params.delta_ghz);
            if t == T::zero() {
                return vec![];
            }
            let c: Vec<(usize, T, T)> = qubits.iter().map(|&q| (q, params.delta_ghz, T::zero())).collect();
            vec![drive_on(reg.n_physical(), &c, t, label.to_string())]
        }
    }
}

fn logical_rz<T: Real>(k: usize, theta: T, reg: &LogicalRegister, params: &ControlParams<T>, label: &str) -> Vec<PulseSegment<T>> {
    let (a, b) = reg.pairs()[k];
    match params.mode {
        Mode::Ideal => {
            if theta == T::zero() {
                vec![]
            } else {
                vec![PulseSegment::ideal(IdealOp::RotZ { qubit: a, angle: theta }, label)]
            }
        }
        Mode::Physical => {
            let th = wrap_pi(theta);
            if th == T::zero() {
                return vec![];
            }
            let e = params.epsilon_ghz;
            let s = th.signum();
            let t = th.abs() / (T::lit(4.0) * T::PI() * e);
            vec![drive_on(reg.n_physical(), &[(a, T::zero(), -s * e), (b, T::zero(), s * e)], t, label.to_string())]
        }
    }
}

fn logical_x<T: Real>(k: usize, reg: &LogicalRegister, params: &ControlParams<T>, label: &str) -> Vec<PulseSegment<T>> {
    let (a, b) = reg.pairs()[k];
    match params.mode {
        Mode::Ideal => vec![
            PulseSegment::ideal(IdealOp::Flip { qubit: a }, label),
            PulseSegment::ideal(IdealOp::Flip { qubit: b }, label),
        ],
        Mode::Physical => {
            let d = params.delta_ghz;
            vec![drive_on(
                reg.n_physical(),
                &[(a, d, T::zero()), (b, d, T::zero())],
                T::one() / (T::two() * d),
                label.to_string(),
            )]
        }
    }
}

fn logical_rx<T: Real>(
    k: usize,
    theta: T,
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
    label: &str,
) -> Result<Vec<PulseSegment<T>>> {
    if theta.modulo(T::two_pi()) == T::zero() {
        return Ok(vec![]);
    }
    let (a, b) = reg.pairs()[k];
    let j = units::mhz_to_ghz(base.coupling[a][b]);
    if j == T::zero() {
        return Err(Error::UnsupportedGate(format!("RX on logical {k}: pair has no intra-pair coupling")));
    }
    // exp(-2πi J t σzσz) must equal exp(-i(θ/2)σzσz) up to sign
    let t = (T::half() * theta / (T::two_pi() * j)).modulo(T::one() / (T::two() * j.abs()));
    let half_pi = T::FRAC_PI_2();
    let mut segs = rot_x(&[a, b], -half_pi, reg, params, label);
    if t > T::zero() {
        segs.push(PulseSegment::wait(t, reg.n_physical(), label));
    }
    segs.extend(rot_x(&[a, b], half_pi, reg, params, label));
    Ok(segs)
}

/// Pulse segments for one single-qubit logical gate.
pub fn compile_single_qubit_gate<T: Real>(
    gate: &LogicalGate<T>,
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
) -> Result<Vec<PulseSegment<T>>> {
    check_sizes(reg, base)?;
    params.validate()?;
    let label = gate.to_string();
    match *gate {
        LogicalGate::Rz { qubit, angle } => {
            reg.check_logical(qubit)?;
            Ok(logical_rz(qubit, angle, reg, params, &label))
        }
        LogicalGate::Z { qubit } => {
            reg.check_logical(qubit)?;
            Ok(logical_rz(qubit, T::PI(), reg, params, &label))
        }
        LogicalGate::X { qubit } => {
            reg.check_logical(qubit)?;
            Ok(logical_x(qubit, reg, params, &label))
        }
        LogicalGate::Rx { qubit, angle } => {
            reg.check_logical(qubit)?;
            logical_rx(qubit, angle, reg, base, params, &label)
        }
        LogicalGate::H { qubit } => {
            reg.check_logical(qubit)?;
            let half_pi = T::FRAC_PI_2();
            let mut segs = logical_rz(qubit, half_pi, reg, params, &label);
            segs.extend(logical_rx(qubit, half_pi, reg, base, params, &label)?);
            segs.extend(logical_rz(qubit, half_pi, reg, params, &label));
            Ok(segs)
        }
        LogicalGate::CPhase { .. } | LogicalGate::Cnot { .. } => Err(Error::UnsupportedGate(format!("{gate} is not a single-qubit gate"))),
    }
}

/// The CPHASE pulse sequence together with its bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CphasePlan<T> {
    /// Free-evolution time between the two flips, ns.
    pub wait_ns: T,
    /// Phase φ00 - φ01 - φ10 + φ11 picked up by the flips alone (0 when ideal).
    pub flip_phase: T,
    /// Logical Rz angles applied to i and j afterwards.
    pub corrections: (T, T),
    pub segments: Vec<PulseSegment<T>>,
}

impl<T: Real> CphasePlan<T> {
    pub fn duration(&self) -> T {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Plans CPHASE between logical qubits `i` and `j`.
///
/// The b qubits of both pairs are flipped, turning each pair's collective σz
/// into ±2 so the inter-pair coupling acts as a logical ZZ term. The wait is
/// chosen so the logical phases satisfy φ00 - φ01 - φ10 + φ11 = π, with the
/// phases (including those of the flip pulses) computed on the four-qubit
/// subsystem; local logical Rz gates then remove φ10 - φ00 and φ01 - φ00.
pub fn plan_cphase<T: Real>(
    i: usize,
    j: usize,
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
) -> Result<CphasePlan<T>> {
    check_sizes(reg, base)?;
    params.validate()?;
    reg.check_logical(i)?;
    reg.check_logical(j)?;
    if i == j {
        return Err(Error::InvalidParameter("CPHASE operands overlap".into()));
    }
    let n = reg.n_physical();
    let (ai, bi) = reg.pairs()[i];
    let (aj, bj) = reg.pairs()[j];
    let sub = [ai, bi, aj, bj];
    let coupling: Vec<Vec<T>> = sub.iter().map(|&p| sub.iter().map(|&q| base.coupling[p][q]).collect()).collect();
    let mut sub_spec = SpinHamiltonianSpec::idle(4, Topology::Custom);
    sub_spec.coupling = coupling;
    sub_spec.validate()?;

    // sub-register index of logical (x_i, x_j); bit set = ↓
    let code = |x: usize| {
        let (xi, xj) = (x >> 1, x & 1);
        (xi << 3) | ((1 - xi) << 2) | (xj << 1) | (1 - xj)
    };
    let flip_bits = 0b0101;

    let flip_phase: Vec<T> = match params.mode {
        Mode::Ideal => vec![T::zero(); 4],
        Mode::Physical => {
            let d = params.delta_ghz;
            let driven = sub_spec.with_controls(&[T::zero(), d, T::zero(), d], &[T::zero(); 4])?;
            let f = unitary_from_hermitian(&build_hamiltonian(&driven)?.matrix, T::two_pi() / (T::two() * d))?;
            (0..4)
                .map(|x| {
                    let (cx, cy) = (code(x), code(x) ^ flip_bits);
                    (f[(cy, cx)] * f[(cx, cy)]).arg()
                })
                .collect()
        }
    };
    let energy = sub_spec.coupling_diagonal();
    let e: Vec<T> = (0..4).map(|x| energy[code(x) ^ flip_bits]).collect();
    let rate = T::two_pi() * (e[0] - e[1] - e[2] + e[3]);
    if rate.abs() <= T::epsilon() {
        return Err(Error::UnsupportedGate(format!("CPHASE {i},{j}: pairs are not coupled")));
    }
    let theta_f = flip_phase[0] - flip_phase[1] - flip_phase[2] + flip_phase[3];
    let period = T::two_pi() / rate.abs();
    let wait = ((theta_f - T::PI()) / rate).modulo(period);
    let phi: Vec<T> = (0..4).map(|x| flip_phase[x] - T::two_pi() * e[x] * wait).collect();
    let corr_i = -(phi[2] - phi[0]);
    let corr_j = -(phi[1] - phi[0]);

    let label = format!("CPHASE {i},{j}");
    let flip = || match params.mode {
        Mode::Ideal => vec![
            PulseSegment::ideal(IdealOp::Flip { qubit: bi }, label.as_str()),
            PulseSegment::ideal(IdealOp::Flip { qubit: bj }, label.as_str()),
        ],
        Mode::Physical => {
            let d = params.delta_ghz;
            vec![drive_on(n, &[(bi, d, T::zero()), (bj, d, T::zero())], T::one() / (T::two() * d), label.clone())]
        }
    };
    let mut segments = flip();
    segments.push(PulseSegment::wait(wait, n, label.as_str()));
    segments.extend(flip());
    segments.extend(logical_rz(i, corr_i, reg, params, &label));
    segments.extend(logical_rz(j, corr_j, reg, params, &label));
    Ok(CphasePlan {
        wait_ns: wait,
        flip_phase: theta_f,
        corrections: (corr_i, corr_j),
        segments,
    })
}

pub fn compile_cphase<T: Real>(
    i: usize,
    j: usize,
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
) -> Result<Vec<PulseSegment<T>>> {
    Ok(plan_cphase(i, j, reg, base, params)?.segments)
}

/// Concatenates the compiled gates of `circuit`; gates run one at a time.
pub fn compile_circuit<T: Real>(
    circuit: &GateCircuit<T>,
    reg: &LogicalRegister,
    base: &SpinHamiltonianSpec<T>,
    params: &ControlParams<T>,
) -> Result<PulseSchedule<T>> {
    circuit.validate()?;
    check_sizes(reg, base)?;
    if circuit.n_logical != reg.n_logical() {
        return Err(Error::InvalidRegister(format!(
            "circuit has {} logical qubits, register has {}",
            circuit.n_logical,
            reg.n_logical()
        )));
    }
    let mut schedule = PulseSchedule::new(base.clone());
    for gate in &circuit.gates {
        match *gate {
            LogicalGate::CPhase { a, b } => schedule.extend(compile_cphase(a, b, reg, base, params)?),
            LogicalGate::Cnot { control, target } => {
                let h = LogicalGate::H { qubit: target };
                let hs = compile_single_qubit_gate(&h, reg, base, params)?;
                schedule.extend(hs.iter().cloned());
                schedule.extend(compile_cphase(control, target, reg, base, params)?);
                schedule.extend(hs);
            }
            _ => schedule.extend(compile_single_qubit_gate(gate, reg, base, params)?),
        }
    }
    Ok(schedule)
}

/// Process-level comparison of a schedule with a logical unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessFidelity<T> {
    /// Mean of |⟨Uψ|Wψ⟩|² over product inputs drawn from {0, 1, +, +i} per
    /// logical qubit, W being the schedule restricted to the code space.
    pub average_fidelity: T,
    /// |Tr(U†W)|²/d².
    pub entanglement_fidelity: T,
    /// Largest probability leaving the code space over logical basis inputs.
    pub leakage: T,
    pub method: String,
}

/// Code-space block W[r][c] = ⟨r_L| S |c_L⟩ of a schedule S.
pub fn code_space_matrix<T: Real>(schedule: &PulseSchedule<T>, reg: &LogicalRegister) -> Result<(ComplexMatrix<T>, Vec<T>)> {
    if schedule.base.n_qubits != reg.n_physical() {
        return Err(Error::InvalidRegister("schedule and register sizes differ".into()));
    }
    let d = 1 << reg.n_logical();
    let inputs: Vec<QuantumState<T>> = (0..d)
        .map(|l| QuantumState::basis(reg.n_physical(), reg.code_index(l)))
        .collect();
    let outputs = run_schedule_batch(&inputs, schedule)?;
    let cols: Vec<Vec<Complex<T>>> = outputs.iter().map(|s| reg.project(s)).collect();
    let leak = outputs.iter().map(|s| reg.leakage(s)).collect();
    Ok((ComplexMatrix::from_fn(d, |r, c| cols[c][r]), leak))
}

pub fn logical_process_fidelity<T: Real>(
    schedule: &PulseSchedule<T>,
    ideal: &ComplexMatrix<T>,
    reg: &LogicalRegister,
) -> Result<ProcessFidelity<T>> {
    let m = reg.n_logical();
    let d = 1usize << m;
    if ideal.dim() != d {
        return Err(Error::InvalidParameter("ideal unitary does not match register".into()));
    }
    let (w, leak) = code_space_matrix(schedule, reg)?;
    let zero = Complex::new(T::zero(), T::zero());
    let r = T::FRAC_1_SQRT_2();
    let single = [
        [Complex::new(T::one(), T::zero()), zero],
        [zero, Complex::new(T::one(), T::zero())],
        [Complex::new(r, T::zero()), Complex::new(r, T::zero())],
        [Complex::new(r, T::zero()), Complex::new(T::zero(), r)],
    ];
    let mut total = T::zero();
    let count = 1usize << (2 * m);
    for choice in 0..count {
        let mut v = vec![Complex::new(T::one(), T::zero()); d];
        for (l, amp) in v.iter_mut().enumerate() {
            for k in 0..m {
                let which = (choice >> (2 * (m - 1 - k))) & 3;
                *amp = *amp * single[which][(l >> (m - 1 - k)) & 1];
            }
        }
        let want = ideal.apply(&v);
        let got = w.apply(&v);
        let overlap = want.iter().zip(&got).fold(zero, |acc, (a, b)| acc + a.conj() * b);
        total += overlap.norm_sqr();
    }
    let trace = (0..d).fold(zero, |acc, k| {
        acc + (0..d).fold(zero, |s, r| s + ideal[(r, k)].conj() * w[(r, k)])
    });
    let dd = T::from_usize_lossy(d);
    Ok(ProcessFidelity {
        average_fidelity: total / T::from_usize_lossy(count),
        entanglement_fidelity: trace.norm_sqr() / (dd * dd),
        leakage: leak.into_iter().fold(T::zero(), T::max),
        method: format!("logical product inputs {{0,1,+,+i}}^{m} ({count} states)"),
    })
}

/// Trace distance between the pair density of logical qubit `k` in two states.
pub fn spectator_trace_distance<T: Real>(
    before: &QuantumState<T>,
    after: &QuantumState<T>,
    reg: &LogicalRegister,
    k: usize,
) -> Result<T> {
    reg.check_logical(k)?;
    trace_distance(&reg.pair_density(before, k), &reg.pair_density(after, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::bus_all_to_all;

    #[test]
    fn encoding_examples() {
        let reg = LogicalRegister::contiguous(1);
        assert_eq!(encode::<f64>("0", &reg).unwrap(), QuantumState::basis(2, 0b01));
        assert_eq!(encode::<f64>("1", &reg).unwrap(), QuantumState::basis(2, 0b10));
        let reg2 = LogicalRegister::contiguous(2);
        assert_eq!(encode::<f64>("01", &reg2).unwrap(), QuantumState::basis(4, 0b0110));
        assert!(encode::<f64>("012", &reg2).is_err());
    }

    #[test]
    fn register_validation() {
        assert!(LogicalRegister::new(vec![(0, 1), (1, 2)]).is_err());
        assert!(LogicalRegister::new(vec![(0, 5), (1, 2)]).is_err());
        let r = LogicalRegister::new(vec![(3, 0), (2, 1)]).unwrap();
        assert_eq!(r.pair_of(1), Some(1));
        assert_eq!(r.code_index(0), 0b1100);
    }

    #[test]
    fn pi_pulse_timing() {
        let p = pi_pulse(0, 2.6f64, 1).unwrap();
        assert!((p.duration - 0.1923).abs() < 1e-4);
        assert!(pi_pulse(0, 0.0f64, 1).is_err());
        assert!(pi_pulse(0, 1e12f64, 1).unwrap().duration < 1e-12);
    }

    #[test]
    fn ideal_cphase_wait() {
        let reg = LogicalRegister::contiguous(2);
        let base = bus_all_to_all::<f64>(4, 25.0).unwrap();
        let plan = plan_cphase(0, 1, &reg, &base, &ControlParams::new(Mode::Ideal)).unwrap();
        assert!((plan.wait_ns - 1.25).abs() < 1e-12);
        assert_eq!(plan.flip_phase, 0.0);
    }

    #[test]
    fn verify_ifs_values() {
        let reg = LogicalRegister::contiguous(2);
        let base = bus_all_to_all::<f64>(4, 25.0).unwrap();
        assert_eq!(verify_ifs(&encode::<f64>("10", &reg).unwrap(), &base, &reg).unwrap(), 0.0);
        // pair 0 in |↑↑⟩, pair 1 in code space
        assert_eq!(verify_ifs(&QuantumState::<f64>::basis(4, 0b0001), &base, &reg).unwrap(), 0.0);
        // both pairs |↑↑⟩
        assert!((verify_ifs(&QuantumState::<f64>::basis(4, 0), &base, &reg).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rz_zero_is_empty() {
        let reg = LogicalRegister::contiguous(1);
        let base = bus_all_to_all::<f64>(2, 25.0).unwrap();
        for mode in [Mode::Ideal, Mode::Physical] {
            let g = LogicalGate::Rz { qubit: 0, angle: 0.0 };
            assert!(compile_single_qubit_gate(&g, &reg, &base, &ControlParams::new(mode)).unwrap().is_empty());
        }
    }
}
