//! Exact unitary evolution under piecewise-constant controls.
//!
//! A [`PulseSchedule`] is a base [`SpinHamiltonianSpec`] (fixed couplings,
//! idle controls) plus an ordered list of segments. A drive segment replaces
//! the per-qubit Δ and ε for its duration and is propagated with
//! `exp(-2πi (H/h) t)`; an ideal segment applies a labelled single-qubit
//! unitary instantaneously with the coupling suspended.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, unitary_from_hermitian, ComplexMatrix};
use crate::scalar::Real;
use crate::spin::{build_hamiltonian, qubit_mask, SpinHamiltonianSpec};

/// Normalized amplitude vector over 2^N basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    amplitudes: Vec<Complex<T>>,
}

pub const NORM_TOLERANCE: f64 = 1e-10;

impl<T: Real> QuantumState<T> {
    /// Wraps `amplitudes`; the length must be a power of two and the norm 1.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_power_of_two() {
            return Err(Error::InvalidParameter("state length must be a power of two".into()));
        }
        let s = Self { amplitudes };
        let norm = s.norm();
        if (norm - T::one()).abs() > T::lit(NORM_TOLERANCE) {
            return Err(Error::InvalidParameter(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Normalizes `amplitudes` (which must not vanish).
    pub fn normalized(mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        for z in amplitudes.iter_mut() {
            *z = *z / norm;
        }
        Self::new(amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << n_qubits];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    /// ⟨ψ|D|ψ⟩ for a diagonal operator given by its entries.
    pub fn diagonal_expectation(&self, diag: &[T]) -> T {
        self.amplitudes.iter().zip(diag).map(|(z, &d)| z.norm_sqr() * d).sum()
    }

    /// ⟨ψ|H|ψ⟩ for a Hermitian operator.
    pub fn expectation(&self, h: &ComplexMatrix<T>) -> T {
        let hx = h.apply(&self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&hx)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
            .re
    }

    pub fn apply_matrix(&self, u: &ComplexMatrix<T>) -> Self {
        Self {
            amplitudes: u.apply(&self.amplitudes),
        }
    }

    /// Applies a single-qubit 2×2 matrix `[[u00, u01], [u10, u11]]` to qubit `q`.
    pub fn apply_single(&mut self, q: usize, u: [[Complex<T>; 2]; 2]) {
        let n = self.n_qubits();
        let mask = qubit_mask(q, n);
        for b in 0..self.amplitudes.len() {
            if b & mask != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[b], self.amplitudes[b | mask]);
            self.amplitudes[b] = u[0][0] * a0 + u[0][1] * a1;
            self.amplitudes[b | mask] = u[1][0] * a0 + u[1][1] * a1;
        }
    }

    /// Multiplies every amplitude by `exp(-i·angle·d_b)`.
    pub fn apply_diagonal_phase(&mut self, diag: &[T], angle: T) {
        for (z, &d) in self.amplitudes.iter_mut().zip(diag) {
            *z = *z * Complex::from_polar(T::one(), -angle * d);
        }
    }

    /// Reduced density matrix of `qubits` (in the listed order).
    pub fn reduced_density(&self, qubits: &[usize]) -> ComplexMatrix<T> {
        let n = self.n_qubits();
        let k = qubits.len();
        let masks: Vec<usize> = qubits.iter().map(|&q| qubit_mask(q, n)).collect();
        let keep: usize = masks.iter().fold(0, |m, &x| m | x);
        let sub_index = |b: usize| {
            masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(b & m != 0))
        };
        let mut rho = ComplexMatrix::zeros(1 << k);
        // group amplitudes by environment configuration
        let mut by_env: std::collections::BTreeMap<usize, Vec<(usize, Complex<T>)>> = Default::default();
        for (b, &z) in self.amplitudes.iter().enumerate() {
            if z.norm_sqr() == T::zero() {
                continue;
            }
            by_env.entry(b & !keep).or_default().push((sub_index(b), z));
        }
        for entries in by_env.values() {
            for &(i, zi) in entries {
                for &(j, zj) in entries {
                    rho[(i, j)] = rho[(i, j)] + zi * zj.conj();
                }
            }
        }
        rho
    }
}

/// ½‖ρ - σ‖₁ for Hermitian density matrices.
pub fn trace_distance<T: Real>(rho: &ComplexMatrix<T>, sigma: &ComplexMatrix<T>) -> Result<T> {
    let n = rho.dim();
    let diff = ComplexMatrix::from_fn(n, |i, j| rho[(i, j)] - sigma[(i, j)]);
    let ev = hermitian_eigenvalues(&diff)?;
    Ok(T::half() * ev.iter().map(|l| l.abs()).sum::<T>())
}

/// |⟨a|b⟩|².
pub fn fidelity<T: Real>(a: &QuantumState<T>, b: &QuantumState<T>) -> T {
    a.inner(b).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Finite square pulses with the coupling always on.
    Physical,
    /// Instantaneous ideal single-qubit pulses; free evolution stays exact.
    Ideal,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(Mode::Physical),
            "ideal" => Ok(Mode::Ideal),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Physical => "physical",
            Mode::Ideal => "ideal",
        })
    }
}

/// Labelled single-qubit unitary applied by an ideal segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum IdealOp<T> {
    /// σx.
    Flip { qubit: usize },
    /// exp(-iθσx/2).
    RotX { qubit: usize, angle: T },
    /// exp(-iθσz/2).
    RotZ { qubit: usize, angle: T },
}

impl<T: Real> IdealOp<T> {
    pub fn qubit(&self) -> usize {
        match *self {
            IdealOp::Flip { qubit } | IdealOp::RotX { qubit, .. } | IdealOp::RotZ { qubit, .. } => qubit,
        }
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        match *self {
            IdealOp::Flip { .. } => [[z, one], [one, z]],
            IdealOp::RotX { angle, .. } => {
                let (s, c) = (T::half() * angle).sin_cos();
                let c = Complex::new(c, T::zero());
                let mis = Complex::new(T::zero(), -s);
                [[c, mis], [mis, c]]
            }
            IdealOp::RotZ { angle, .. } => {
                let h = T::half() * angle;
                [[Complex::from_polar(T::one(), -h), z], [z, Complex::from_polar(T::one(), h)]]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind<T> {
    /// Per-qubit Δ_i and ε_i (GHz) held for the segment's duration.
    Drive { delta: Vec<T>, epsilon: Vec<T> },
    Ideal(IdealOp<T>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment<T> {
    /// Duration in ns; zero for ideal segments.
    pub duration: T,
    pub kind: SegmentKind<T>,
    pub label: String,
}

impl<T: Real> PulseSegment<T> {
    pub fn drive(duration: T, delta: Vec<T>, epsilon: Vec<T>, label: impl Into<String>) -> Self {
        Self {
            duration,
            kind: SegmentKind::Drive { delta, epsilon },
            label: label.into(),
        }
    }

    /// Free evolution under the coupling alone.
    pub fn wait(duration: T, n_qubits: usize, label: impl Into<String>) -> Self {
        Self::drive(duration, vec![T::zero(); n_qubits], vec![T::zero(); n_qubits], label)
    }

    pub fn ideal(op: IdealOp<T>, label: impl Into<String>) -> Self {
        Self {
            duration: T::zero(),
            kind: SegmentKind::Ideal(op),
            label: label.into(),
        }
    }

    pub fn mode(&self) -> Mode {
        match self.kind {
            SegmentKind::Drive { .. } => Mode::Physical,
            SegmentKind::Ideal(_) => Mode::Ideal,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if !(self.duration >= T::zero()) {
            return Err(Error::InvalidParameter(format!("segment '{}' has negative duration", self.label)));
        }
        match &self.kind {
            SegmentKind::Drive { delta, epsilon } => {
                if delta.len() != n_qubits || epsilon.len() != n_qubits {
                    return Err(Error::InvalidParameter(format!(
                        "segment '{}' overrides do not match {n_qubits} qubits",
                        self.label
                    )));
                }
            }
            SegmentKind::Ideal(op) => {
                if op.qubit() >= n_qubits {
                    return Err(Error::InvalidParameter(format!("segment '{}' addresses a missing qubit", self.label)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule<T> {
    pub base: SpinHamiltonianSpec<T>,
    pub segments: Vec<PulseSegment<T>>,
}

impl<T: Real> PulseSchedule<T> {
    pub fn new(base: SpinHamiltonianSpec<T>) -> Self {
        Self { base, segments: vec![] }
    }

    pub fn with_segments(base: SpinHamiltonianSpec<T>, segments: Vec<PulseSegment<T>>) -> Result<Self> {
        let s = Self { base, segments };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for seg in &self.segments {
            seg.validate(self.base.n_qubits)?;
        }
        Ok(())
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn extend(&mut self, segments: impl IntoIterator<Item = PulseSegment<T>>) {
        self.segments.extend(segments);
    }
}

/// Precomputed action of one segment.
#[derive(Debug, Clone)]
pub enum Propagator<T> {
    Identity,
    /// exp(-iφ_b) on each basis state.
    Diagonal(Vec<Complex<T>>),
    /// Block-diagonal over configurations of the undriven qubits: each block
    /// lists its basis indices and the unitary acting on them.
    Blocks(Vec<(Vec<usize>, ComplexMatrix<T>)>),
    Ideal(IdealOp<T>),
}

impl<T: Real> Propagator<T> {
    pub fn for_segment(base: &SpinHamiltonianSpec<T>, seg: &PulseSegment<T>) -> Result<Self> {
        seg.validate(base.n_qubits)?;
        match &seg.kind {
            SegmentKind::Ideal(op) => Ok(Propagator::Ideal(*op)),
            SegmentKind::Drive { delta, epsilon } => {
                let spec = base.with_controls(delta, epsilon)?;
                Self::for_hamiltonian(&spec, seg.duration)
            }
        }
    }

    /// exp(-2πi (H/h) t) for the Hamiltonian of `spec` and `t` in ns.
    pub fn for_hamiltonian(spec: &SpinHamiltonianSpec<T>, t: T) -> Result<Self> {
        spec.validate()?;
        if t == T::zero() {
            return Ok(Propagator::Identity);
        }
        let angle = T::two_pi() * t;
        if !spec.is_driven() {
            let phases = spec
                .diagonal_energies()
                .into_iter()
                .map(|e| Complex::from_polar(T::one(), -angle * e))
                .collect();
            return Ok(Propagator::Diagonal(phases));
        }
        // σx terms only connect states differing on driven qubits
        let n = spec.n_qubits;
        let driven: Vec<usize> = (0..n).filter(|&q| spec.delta[q] != T::zero()).collect();
        let driven_mask = driven.iter().fold(0, |m, &q| m | qubit_mask(q, n));
        let k = driven.len();
        let diag = spec.diagonal_energies();
        let mut blocks = Vec::with_capacity(1 << (n - k));
        for base in (0..spec.dim()).filter(|b| b & driven_mask == 0) {
            let members: Vec<usize> = (0..1usize << k)
                .map(|d| {
                    driven
                        .iter()
                        .enumerate()
                        .fold(base, |b, (m, &q)| if (d >> m) & 1 == 1 { b | qubit_mask(q, n) } else { b })
                })
                .collect();
            let mut h = ComplexMatrix::zeros(1 << k);
            for d in 0..1usize << k {
                h[(d, d)] = Complex::new(diag[members[d]], T::zero());
                for (m, &q) in driven.iter().enumerate() {
                    h[(d, d ^ (1 << m))] = Complex::new(-T::half() * spec.delta[q], T::zero());
                }
            }
            blocks.push((members, unitary_from_hermitian(&h, angle)?));
        }
        Ok(Propagator::Blocks(blocks))
    }

    /// Same propagator from one eigendecomposition of the full Hamiltonian.
    pub fn dense(spec: &SpinHamiltonianSpec<T>, t: T) -> Result<ComplexMatrix<T>> {
        let h = build_hamiltonian(spec)?;
        unitary_from_hermitian(&h.matrix, T::two_pi() * t)
    }

    pub fn apply(&self, state: &mut QuantumState<T>) {
        match self {
            Propagator::Identity => {}
            Propagator::Diagonal(ph) => {
                for (z, p) in state.amplitudes.iter_mut().zip(ph) {
                    *z = *z * p;
                }
            }
            Propagator::Blocks(blocks) => {
                for (members, u) in blocks {
                    let x: Vec<Complex<T>> = members.iter().map(|&b| state.amplitudes[b]).collect();
                    for (&b, y) in members.iter().zip(u.apply(&x)) {
                        state.amplitudes[b] = y;
                    }
                }
            }
            Propagator::Ideal(op) => state.apply_single(op.qubit(), op.matrix()),
        }
    }
}

/// Evolves `state` for `t` ns under the Hamiltonian of `spec`.
pub fn evolve_segment<T: Real>(state: &QuantumState<T>, spec: &SpinHamiltonianSpec<T>, t: T) -> Result<QuantumState<T>> {
    check_size(state, spec)?;
    if !(t >= T::zero()) {
        return Err(Error::InvalidParameter("evolution time must be non-negative".into()));
    }
    let mut out = state.clone();
    Propagator::for_hamiltonian(spec, t)?.apply(&mut out);
    Ok(out)
}

fn check_size<T: Real>(state: &QuantumState<T>, spec: &SpinHamiltonianSpec<T>) -> Result<()> {
    spec.validate()?;
    if state.n_qubits() != spec.n_qubits {
        return Err(Error::InvalidParameter(format!(
            "state has {} qubits, Hamiltonian has {}",
            state.n_qubits(),
            spec.n_qubits
        )));
    }
    Ok(())
}

/// Applies every segment of `schedule` in order.
pub fn run_schedule<T: Real>(state: &QuantumState<T>, schedule: &PulseSchedule<T>) -> Result<QuantumState<T>> {
    Ok(run_schedule_batch(std::slice::from_ref(state), schedule)?.remove(0))
}

/// Runs many input states through one schedule, building each segment's
/// propagator once.
pub fn run_schedule_batch<T: Real>(states: &[QuantumState<T>], schedule: &PulseSchedule<T>) -> Result<Vec<QuantumState<T>>> {
    schedule.validate()?;
    for s in states {
        check_size(s, &schedule.base)?;
    }
    let mut out = states.to_vec();
    for seg in &schedule.segments {
        let prop = Propagator::for_segment(&schedule.base, seg)?;
        for s in out.iter_mut() {
            prop.apply(s);
        }
    }
    Ok(out)
}

/// Full unitary of a schedule (columns are images of basis states).
pub fn schedule_unitary<T: Real>(schedule: &PulseSchedule<T>) -> Result<ComplexMatrix<T>> {
    let n = schedule.base.n_qubits;
    let inputs: Vec<QuantumState<T>> = (0..1 << n).map(|b| QuantumState::basis(n, b)).collect();
    let outputs = run_schedule_batch(&inputs, schedule)?;
    let dim = 1 << n;
    Ok(ComplexMatrix::from_fn(dim, |i, j| outputs[j].amplitudes[i]))
}
