//! Bus loop circuit: the flux equations of N rf-SQUIDs sharing one
//! superconducting loop, the resulting inductive energy, effective coupling,
//! and the scaling limits of the architecture.
//!
//! Units: L in pH, L_b in nH, M in pH, currents in µA, flux in Φ0,
//! M_eff in fH, J in MHz, energies as E/h in GHz.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::scalar::Real;
use crate::squid::{SquidParams, TwoLevelParams};
use crate::units::{self, FLUX_QUANTUM, MICRO, NANO, PICO};

/// Constants of the bus loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BusParams<T> {
    /// Bus self-inductance L_b in nH.
    pub bus_inductance_nh: T,
    /// Mutual inductance M between each SQUID and the bus, in pH.
    pub mutual_ph: T,
    /// Number of attached SQUIDs (even).
    pub n_qubits: usize,
    /// External bus flux bias Φ_bx in Φ0.
    pub bus_flux_bias: T,
    /// Trapped fluxoid number n, Φ_b = nΦ0.
    pub flux_quanta: i64,
    /// Geometric coupling constant k in (0, 1].
    pub k_geom: T,
}

impl<T: Real> BusParams<T> {
    pub fn new(bus_inductance_nh: T, mutual_ph: T, n_qubits: usize) -> Result<Self> {
        let b = Self {
            bus_inductance_nh,
            mutual_ph,
            n_qubits,
            bus_flux_bias: T::zero(),
            flux_quanta: 0,
            k_geom: T::one(),
        };
        b.validate()?;
        Ok(b)
    }

    /// L_b = 2 nH, M = 2 pH.
    pub fn reference_design(n_qubits: usize) -> Self {
        Self {
            bus_inductance_nh: T::lit(2.0),
            mutual_ph: T::lit(2.0),
            n_qubits,
            bus_flux_bias: T::zero(),
            flux_quanta: 0,
            k_geom: T::one(),
        }
    }

    pub fn with_k_geom(mut self, k: T) -> Self {
        self.k_geom = k;
        self
    }

    pub fn with_bus_bias(mut self, flux_quanta: i64, bus_flux_bias: T) -> Self {
        self.flux_quanta = flux_quanta;
        self.bus_flux_bias = bus_flux_bias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.bus_inductance_nh > T::zero()) {
            return bad("bus inductance must be positive");
        }
        if !(self.mutual_ph >= T::zero()) {
            return bad("mutual inductance must be non-negative");
        }
        if self.n_qubits < 2 || !self.n_qubits.is_multiple_of(2) {
            return bad("qubit count must be even and at least 2");
        }
        if !(self.k_geom > T::zero() && self.k_geom <= T::one()) {
            return bad("geometric coupling constant must lie in (0, 1]");
        }
        Ok(())
    }

    /// M² ≤ L·L_b for a single attached SQUID.
    pub fn check_passivity(&self, squid: &SquidParams<T>) -> Result<()> {
        let m = self.mutual_ph * T::lit(PICO);
        if m * m > squid.inductance_ph * T::lit(PICO) * self.bus_inductance_nh * T::lit(NANO) {
            return Err(Error::InvalidParameter("M² exceeds L·L_b: coupling is not passive".into()));
        }
        Ok(())
    }

    fn lb(&self) -> T {
        self.bus_inductance_nh * T::lit(NANO)
    }

    fn m(&self) -> T {
        self.mutual_ph * T::lit(PICO)
    }
}

/// Currents solving the loop flux equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentSolution<T> {
    /// I_i in µA.
    pub squid_currents: Vec<T>,
    /// I_b in µA.
    pub bus_current: T,
}

impl<T: Real> CurrentSolution<T> {
    /// |L_b I_b + M ΣI_i - (nΦ0 - Φ_bx)| in Φ0.
    pub fn bus_residual(&self, bus: &BusParams<T>) -> T {
        let total: T = self.squid_currents.iter().copied().sum();
        let flux = (bus.lb() * self.bus_current + bus.m() * total) * T::lit(MICRO) / T::lit(FLUX_QUANTUM);
        let target = T::from_i64(bus.flux_quanta).expect("fluxoid count") - bus.bus_flux_bias;
        (flux - target).abs()
    }
}

/// Solves Φ_i = Φ_ix + M I_b + L I_i together with the bus fluxoid condition
/// L_b I_b + M ΣI_i = nΦ0 - Φ_bx, exactly, by eliminating the SQUID currents.
pub fn solve_currents<T: Real>(
    fluxes: &[T],
    biases: &[T],
    squid: &SquidParams<T>,
    bus: &BusParams<T>,
) -> Result<CurrentSolution<T>> {
    bus.validate()?;
    bus.check_passivity(squid)?;
    if fluxes.len() != bus.n_qubits || biases.len() != bus.n_qubits {
        return Err(Error::InvalidParameter(format!(
            "expected {} fluxes and biases, got {} and {}",
            bus.n_qubits,
            fluxes.len(),
            biases.len()
        )));
    }
    let phi0 = T::lit(FLUX_QUANTUM);
    let l = squid.inductance_ph * T::lit(PICO);
    let (lb, m) = (bus.lb(), bus.m());
    let n = T::from_usize_lossy(bus.n_qubits);
    // Schur complement of the SQUID block
    let schur = lb - n * m * m / l;
    if !(schur > T::epsilon() * lb) {
        return Err(Error::SingularSystem);
    }
    let offsets: Vec<T> = fluxes.iter().zip(biases).map(|(&f, &b)| (f - b) * phi0).collect();
    let sum: T = offsets.iter().copied().sum();
    let target = (T::from_i64(bus.flux_quanta).expect("fluxoid count") - bus.bus_flux_bias) * phi0;
    let ib = (target - m / l * sum) / schur;
    let to_ua = T::one() / T::lit(MICRO);
    Ok(CurrentSolution {
        squid_currents: offsets.iter().map(|&d| (d - m * ib) / l * to_ua).collect(),
        bus_current: ib * to_ua,
    })
}

/// ½ΣL I_i² + ½L_b I_b² + ΣM I_b I_i, as E/h in GHz.
pub fn inductive_energy<T: Real>(sol: &CurrentSolution<T>, squid: &SquidParams<T>, bus: &BusParams<T>) -> T {
    let l = squid.inductance_ph * T::lit(PICO);
    let ua = T::lit(MICRO);
    let ib = sol.bus_current * ua;
    let mut e = T::half() * bus.lb() * ib * ib;
    for &i in &sol.squid_currents {
        let i = i * ua;
        e += T::half() * l * i * i + bus.m() * ib * i;
    }
    units::joule_to_ghz(e)
}

/// The (N+1)×(N+1) inductance matrix in H, SQUIDs first and the bus last.
pub fn inductance_matrix<T: Real>(squid: &SquidParams<T>, bus: &BusParams<T>) -> RealMatrix<T> {
    let n = bus.n_qubits;
    let l = squid.inductance_ph * T::lit(PICO);
    RealMatrix::from_fn(n + 1, |i, j| match (i == n, j == n) {
        (true, true) => bus.lb(),
        (true, false) | (false, true) => bus.m(),
        (false, false) if i == j => l,
        _ => T::zero(),
    })
}

/// Weak-coupling approximation of the inductive energy for flux offsets
/// δ_i = Φ_i - Φ_ix: each SQUID with the renormalized L/(1 + M²/LL_b) plus
/// the pairwise term (M²/L_b) Σ_{i>j} (δ_i/L)(δ_j/L). E/h in GHz.
pub fn pairwise_energy<T: Real>(fluxes: &[T], biases: &[T], squid: &SquidParams<T>, bus: &BusParams<T>) -> T {
    let phi0 = T::lit(FLUX_QUANTUM);
    let l = squid.inductance_ph * T::lit(PICO);
    let renorm = renormalization_factor(squid, bus);
    let meff = bus.m() * bus.m() / bus.lb();
    let d: Vec<T> = fluxes.iter().zip(biases).map(|(&f, &b)| (f - b) * phi0).collect();
    let mut e = T::zero();
    for (i, &di) in d.iter().enumerate() {
        e += di * di * renorm / (T::two() * l);
        for &dj in &d[..i] {
            e += meff * (di / l) * (dj / l);
        }
    }
    units::joule_to_ghz(e)
}

/// 1 + M²/(L·L_b).
pub fn renormalization_factor<T: Real>(squid: &SquidParams<T>, bus: &BusParams<T>) -> T {
    T::one() + bus.m() * bus.m() / (squid.inductance_ph * T::lit(PICO) * bus.lb())
}

/// M²/L_b in fH.
pub fn effective_mutual<T: Real>(bus: &BusParams<T>) -> T {
    // pH²/nH = fH
    bus.mutual_ph * bus.mutual_ph / bus.bus_inductance_nh
}

/// σzσz coefficient J = M_eff·I_p²/h in MHz.
pub fn coupling_strength<T: Real>(two_level: &TwoLevelParams<T>, bus: &BusParams<T>) -> T {
    coupling_from_current(two_level.persistent_current, bus)
}

/// J in MHz for a persistent current in µA.
pub fn coupling_from_current<T: Real>(persistent_current_ua: T, bus: &BusParams<T>) -> T {
    let ip = persistent_current_ua * T::lit(MICRO);
    let meff = effective_mutual(bus) * T::lit(units::FEMTO);
    units::ghz_to_mhz(units::joule_to_ghz(meff * ip * ip))
}

/// N·M²/(L·L_b) with its warning flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakCoupling<T> {
    pub ratio: T,
    /// Set when the ratio reaches 0.1.
    pub warn: bool,
}

pub const WEAK_COUPLING_WARN: f64 = 0.1;

pub fn weak_coupling_ratio<T: Real>(squid: &SquidParams<T>, bus: &BusParams<T>) -> WeakCoupling<T> {
    weak_coupling_ratio_for(bus.n_qubits, squid.inductance_ph, bus.mutual_ph, bus.bus_inductance_nh)
}

/// The weak-coupling ratio for an arbitrary qubit count.
pub fn weak_coupling_ratio_for<T: Real>(n: usize, l_ph: T, m_ph: T, lb_nh: T) -> WeakCoupling<T> {
    // pH² / (pH·nH) = 1e-3
    let ratio = T::from_usize_lossy(n) * m_ph * m_ph / (l_ph * lb_nh * T::lit(1e3));
    WeakCoupling {
        ratio,
        warn: ratio >= T::lit(WEAK_COUPLING_WARN),
    }
}

/// k·L_b/M, the geometric limit on how many SQUIDs fit along the bus.
pub fn geometric_bound<T: Real>(bus: &BusParams<T>) -> T {
    if bus.mutual_ph == T::zero() {
        return T::infinity();
    }
    bus.k_geom * bus.bus_inductance_nh * T::lit(1e3) / bus.mutual_ph
}

/// floor(k·L_b/M).
pub fn max_qubits<T: Real>(bus: &BusParams<T>) -> usize {
    let b = geometric_bound(bus);
    if !b.is_finite() {
        return usize::MAX;
    }
    // absorb representation error in quotients like 2000/2
    let guarded = b * (T::one() + T::lit(8.0) * T::epsilon());
    guarded.floor().to_usize().unwrap_or(usize::MAX)
}

/// L_b/R in ms for L_b in nH and R in µΩ.
pub fn residual_decay_time<T: Real>(bus_inductance_nh: T, resistance_uohm: T) -> T {
    // nH/µΩ = ms
    bus_inductance_nh / resistance_uohm
}
