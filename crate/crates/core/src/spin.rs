//! N-qubit Pauli-form Hamiltonian of the coupled flux qubits,
//!
//! ```text
//! H/h = Σ_i [ -(Δ_i/2) σx_i - (ε_i/2) σz_i ] + Σ_{i>j} J_ij σz_i σz_j
//! ```
//!
//! with Δ, ε in GHz and J in MHz (converted to GHz on assembly).
//!
//! Basis convention: qubit 0 is the most significant bit of the basis index
//! and bit value 0 is |↑⟩ (σz = +1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;
use crate::units;

use num_complex::Complex;

/// Largest register the dense simulator accepts by default.
pub const DEFAULT_QUBIT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Every qubit coupled to every other with the same J.
    BusAllToAll,
    /// Pairs (2k, 2k+1) coupled by J_Q; neighbouring pairs fully cross-linked by J'.
    LinearChainEncoded,
    Custom,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Topology::BusAllToAll => "bus_all_to_all",
            Topology::LinearChainEncoded => "linear_chain_encoded",
            Topology::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinHamiltonianSpec<T> {
    pub n_qubits: usize,
    /// Δ_i in GHz.
    pub delta: Vec<T>,
    /// ε_i in GHz.
    pub epsilon: Vec<T>,
    /// Symmetric J_ij in MHz with zero diagonal.
    pub coupling: Vec<Vec<T>>,
    pub topology: Topology,
    /// Size cap for dense operators.
    pub qubit_cap: usize,
}

impl<T: Real> SpinHamiltonianSpec<T> {
    /// Uncoupled, undriven register of `n` qubits.
    pub fn idle(n: usize, topology: Topology) -> Self {
        Self {
            n_qubits: n,
            delta: vec![T::zero(); n],
            epsilon: vec![T::zero(); n],
            coupling: vec![vec![T::zero(); n]; n],
            topology,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }

    pub fn custom(coupling: Vec<Vec<T>>) -> Result<Self> {
        let n = coupling.len();
        let mut spec = Self::idle(n, Topology::Custom);
        spec.coupling = coupling;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(Error::InvalidParameter("spin model needs at least one qubit".into()));
        }
        if n > self.qubit_cap {
            return Err(Error::SizeCap { n, cap: self.qubit_cap });
        }
        if self.delta.len() != n || self.epsilon.len() != n || self.coupling.len() != n {
            return Err(Error::InvalidParameter("per-qubit lists must have length n_qubits".into()));
        }
        for (i, row) in self.coupling.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("coupling matrix must be square".into()));
            }
            if row[i] != T::zero() {
                return Err(Error::InvalidParameter("coupling matrix must have zero diagonal".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != self.coupling[j][i] {
                    return Err(Error::InvalidParameter(format!("coupling not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Copy with per-qubit controls replaced.
    pub fn with_controls(&self, delta: &[T], epsilon: &[T]) -> Result<Self> {
        let mut s = self.clone();
        s.delta = delta.to_vec();
        s.epsilon = epsilon.to_vec();
        s.validate()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Number of nonzero couplings i < j.
    pub fn edge_count(&self) -> usize {
        (0..self.n_qubits)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .filter(|&(i, j)| self.coupling[i][j] != T::zero())
            .count()
    }

    pub fn is_driven(&self) -> bool {
        self.delta.iter().any(|&d| d != T::zero())
    }

    /// Diagonal of the coupling term, in GHz, indexed by basis state.
    pub fn coupling_diagonal(&self) -> Vec<T> {
        self.diagonal_with(|_, _| true)
    }

    /// Diagonal of the ε and coupling terms (everything but σx), in GHz.
    pub fn diagonal_energies(&self) -> Vec<T> {
        let n = self.n_qubits;
        let mut d = self.coupling_diagonal();
        for (b, e) in d.iter_mut().enumerate() {
            for q in 0..n {
                *e -= T::half() * self.epsilon[q] * spin_sign::<T>(b, q, n);
            }
        }
        d
    }

    /// Diagonal of the coupling terms for which `keep(i, j)` holds.
    pub fn diagonal_with(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<T> {
        let n = self.n_qubits;
        let mut edges = vec![];
        for i in 0..n {
            for j in 0..i {
                let jij = self.coupling[i][j];
                if jij != T::zero() && keep(i, j) {
                    edges.push((i, j, units::mhz_to_ghz(jij)));
                }
            }
        }
        (0..self.dim())
            .map(|b| {
                edges
                    .iter()
                    .map(|&(i, j, jij)| jij * spin_sign::<T>(b, i, n) * spin_sign::<T>(b, j, n))
                    .sum()
            })
            .collect()
    }
}

/// σz eigenvalue (+1 for |↑⟩) of qubit `q` in basis state `b`.
#[inline]
pub fn spin_sign<T: Real>(b: usize, q: usize, n: usize) -> T {
    if (b >> (n - 1 - q)) & 1 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Bit mask of qubit `q` in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

/// All-to-all coupling of `n` qubits with strength `j_mhz`.
pub fn bus_all_to_all<T: Real>(n: usize, j_mhz: T) -> Result<SpinHamiltonianSpec<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter("bus needs at least 2 qubits".into()));
    }
    let mut spec = SpinHamiltonianSpec::idle(n, Topology::BusAllToAll);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                spec.coupling[i][j] = j_mhz;
            }
        }
    }
    spec.validate()?;
    Ok(spec)
}

/// Chain of `n_logical` encoded pairs (2k, 2k+1): J_Q inside each pair and
/// J' between each of the four a/b combinations of neighbouring pairs.
pub fn linear_chain_encoded<T: Real>(n_logical: usize, j_q_mhz: T, j_prime_mhz: T) -> Result<SpinHamiltonianSpec<T>> {
    if n_logical == 0 {
        return Err(Error::InvalidParameter("chain needs at least one logical qubit".into()));
    }
    let n = 2 * n_logical;
    let mut spec = SpinHamiltonianSpec::idle(n, Topology::LinearChainEncoded);
    for k in 0..n_logical {
        let (a, b) = (2 * k, 2 * k + 1);
        spec.coupling[a][b] = j_q_mhz;
        spec.coupling[b][a] = j_q_mhz;
        if k + 1 < n_logical {
            for p in [a, b] {
                for q in [a + 2, b + 2] {
                    spec.coupling[p][q] = j_prime_mhz;
                    spec.coupling[q][p] = j_prime_mhz;
                }
            }
        }
    }
    spec.validate()?;
    Ok(spec)
}

/// Dense 2^N × 2^N operator in frequency units (GHz).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T> {
    pub matrix: ComplexMatrix<T>,
    pub hermitian: bool,
}

impl<T: Real> DenseOperator<T> {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.matrix.apply(x)
    }
}

/// Assembles the full Hamiltonian H/h of `spec`.
pub fn build_hamiltonian<T: Real>(spec: &SpinHamiltonianSpec<T>) -> Result<DenseOperator<T>> {
    spec.validate()?;
    let n = spec.n_qubits;
    let dim = spec.dim();
    let mut m = ComplexMatrix::zeros(dim);
    for (b, e) in spec.diagonal_energies().into_iter().enumerate() {
        m[(b, b)] = Complex::new(e, T::zero());
    }
    for q in 0..n {
        let d = spec.delta[q];
        if d == T::zero() {
            continue;
        }
        let mask = qubit_mask(q, n);
        for b in 0..dim {
            m[(b, b ^ mask)] = m[(b, b ^ mask)] - Complex::new(T::half() * d, T::zero());
        }
    }
    Ok(DenseOperator {
        matrix: m,
        hermitian: true,
    })
}

/// The coupling term alone (Δ = ε = 0).
pub fn interaction_only<T: Real>(spec: &SpinHamiltonianSpec<T>) -> Result<DenseOperator<T>> {
    spec.validate()?;
    let mut m = ComplexMatrix::zeros(spec.dim());
    for (b, e) in spec.coupling_diagonal().into_iter().enumerate() {
        m[(b, b)] = Complex::new(e, T::zero());
    }
    Ok(DenseOperator {
        matrix: m,
        hermitian: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;

    #[test]
    fn single_qubit_gap_equals_delta() {
        let mut spec = SpinHamiltonianSpec::<f64>::idle(1, Topology::Custom);
        spec.delta[0] = 1.0;
        let h = build_hamiltonian(&spec).unwrap();
        let ev = hermitian_eigenvalues(&h.matrix).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_ising_pattern() {
        let spec = bus_all_to_all::<f64>(2, 25.0).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let expect = [0.025, -0.025, -0.025, 0.025];
        for (b, &e) in expect.iter().enumerate() {
            assert!((h.matrix[(b, b)].re - e).abs() < 1e-15);
        }
    }

    #[test]
    fn topology_edge_counts() {
        assert_eq!(bus_all_to_all::<f64>(4, 25.0).unwrap().edge_count(), 6);
        let chain = linear_chain_encoded::<f64>(2, 100.0, 25.0).unwrap();
        assert_eq!(chain.edge_count(), 6);
        assert_eq!(chain.coupling[0][1], 100.0);
        assert_eq!(chain.coupling[2][3], 100.0);
        for (p, q) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(chain.coupling[p][q], 25.0);
        }
        let single = linear_chain_encoded::<f64>(1, 7.0, 3.0).unwrap();
        assert_eq!(single.coupling, bus_all_to_all::<f64>(2, 7.0).unwrap().coupling);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(bus_all_to_all::<f64>(1, 1.0).is_err());
        assert!(linear_chain_encoded::<f64>(0, 1.0, 1.0).is_err());
        assert!(matches!(bus_all_to_all::<f64>(15, 1.0), Err(Error::SizeCap { .. })));
        assert!(SpinHamiltonianSpec::<f64>::custom(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(SpinHamiltonianSpec::<f64>::custom(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn zero_coupling_gives_zero_operator() {
        let spec = bus_all_to_all::<f64>(3, 0.0).unwrap();
        let h = interaction_only(&spec).unwrap();
        assert!(h.matrix.as_slice().iter().all(|z| z.norm() == 0.0));
    }
}
