//! Single rf-SQUID: the flux Hamiltonian
//!
//! ```text
//! H = -(ħ²/2C) ∂²/∂Φ² + (Φ - Φx)² / (2 L_eff) - E_J cos(2πΦ/Φ0),   L_eff = L / r
//! ```
//!
//! discretized on a uniform flux grid, and its reduction to a two-level
//! qubit with tunneling splitting Δ, bias asymmetry ε and persistent current
//! I_p. Flux is measured in units of Φ0, energies as E/h in GHz.
//!
//! Two-level convention: `H_q/h = -(Δ/2)σx - (ε/2)σz`, so Δ is the gap at the
//! symmetry point and ε the well-energy difference. σz = +1 is the
//! larger-flux (right) well, which is lowered by a positive bias offset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::scalar::Real;
use crate::units::{self, FLUX_QUANTUM, HBAR, MICRO, PICO, FEMTO};

/// Circuit constants of one rf-SQUID.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquidParams<T> {
    /// Loop self-inductance L in pH.
    pub inductance_ph: T,
    /// Junction capacitance C in fF.
    pub capacitance_ff: T,
    /// Junction critical current Ic in µA.
    pub critical_current_ua: T,
    /// External flux bias Φx in units of Φ0, in [0, 1).
    pub flux_bias: T,
    /// Inductance renormalization factor 1 + M²/(L·L_b); the potential uses
    /// L / factor.
    pub renormalization: T,
}

impl<T: Real> SquidParams<T> {
    pub fn new(inductance_ph: T, capacitance_ff: T, critical_current_ua: T, flux_bias: T) -> Result<Self> {
        let p = Self {
            inductance_ph,
            capacitance_ff,
            critical_current_ua,
            flux_bias,
            renormalization: T::one(),
        };
        p.validate()?;
        Ok(p)
    }

    /// The 150 pH / 80 fF / 3 µA device biased at Φ0/2.
    pub fn reference_design() -> Self {
        Self {
            inductance_ph: T::lit(150.0),
            capacitance_ff: T::lit(80.0),
            critical_current_ua: T::lit(3.0),
            flux_bias: T::half(),
            renormalization: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if !(self.inductance_ph > T::zero()) {
            return bad("inductance must be positive");
        }
        if !(self.capacitance_ff > T::zero()) {
            return bad("capacitance must be positive");
        }
        if !(self.critical_current_ua >= T::zero()) {
            return bad("critical current must be non-negative");
        }
        if !(self.flux_bias >= T::zero() && self.flux_bias < T::one()) {
            return bad("flux bias must lie in [0, 1) flux quanta");
        }
        if !(self.renormalization >= T::one()) {
            return bad("renormalization factor must be >= 1");
        }
        Ok(())
    }

    pub fn with_flux_bias(mut self, flux_bias: T) -> Self {
        self.flux_bias = flux_bias;
        self
    }

    pub fn with_critical_current(mut self, critical_current_ua: T) -> Self {
        self.critical_current_ua = critical_current_ua;
        self
    }

    pub fn with_renormalization(mut self, factor: T) -> Self {
        self.renormalization = factor;
        self
    }

    /// Effective loop inductance L / r in H.
    pub fn effective_inductance(&self) -> T {
        self.inductance_ph * T::lit(PICO) / self.renormalization
    }

    /// Josephson energy E_J/h = Ic·Φ0/(2π h) in GHz.
    pub fn josephson_energy(&self) -> T {
        units::joule_to_ghz(self.critical_current_ua * T::lit(MICRO * FLUX_QUANTUM) / T::two_pi())
    }

    /// Φ0²/(2 L_eff h) in GHz: the potential is this times (φ - φx)².
    pub fn inductive_energy_scale(&self) -> T {
        units::joule_to_ghz(T::lit(FLUX_QUANTUM * FLUX_QUANTUM) / (T::two() * self.effective_inductance()))
    }

    /// ħ²/(2 C Φ0² h) in GHz: the kinetic operator is minus this times ∂²/∂φ².
    pub fn kinetic_scale(&self) -> T {
        let c = self.capacitance_ff * T::lit(FEMTO);
        units::joule_to_ghz(T::lit(HBAR * HBAR / (FLUX_QUANTUM * FLUX_QUANTUM)) / (T::two() * c))
    }

    /// Small-oscillation frequency 1/(2π√(L_eff C)) in GHz.
    pub fn plasma_frequency(&self) -> T {
        let c = self.capacitance_ff * T::lit(FEMTO);
        T::one() / (T::two_pi() * (self.effective_inductance() * c).sqrt()) * T::lit(1.0 / units::GIGA)
    }
}

/// Screening parameter β_L = 2π L Ic / Φ0. The potential has two wells when
/// β_L > 1.
pub fn beta_l<T: Real>(params: &SquidParams<T>) -> T {
    T::two_pi() * params.inductance_ph * T::lit(PICO) * params.critical_current_ua * T::lit(MICRO)
        / T::lit(FLUX_QUANTUM)
}

/// U(φ)/h in GHz at flux φ (units of Φ0).
pub fn potential<T: Real>(params: &SquidParams<T>, phi: T) -> T {
    let d = phi - params.flux_bias;
    params.inductive_energy_scale() * d * d - params.josephson_energy() * (T::two_pi() * phi).cos()
}

/// Uniform flux grid with Dirichlet walls just outside both end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxGrid<T> {
    pub phi_min: T,
    pub phi_max: T,
    pub n_points: usize,
}

impl<T: Real> Default for FluxGrid<T> {
    fn default() -> Self {
        Self {
            phi_min: T::lit(-0.25),
            phi_max: T::lit(1.25),
            n_points: 4097,
        }
    }
}

impl<T: Real> FluxGrid<T> {
    pub const MIN_POINTS: usize = 257;

    pub fn new(phi_min: T, phi_max: T, n_points: usize) -> Result<Self> {
        let g = Self {
            phi_min,
            phi_max,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi_min < self.phi_max) {
            return Err(Error::InvalidParameter("flux window must satisfy phi_min < phi_max".into()));
        }
        if self.n_points < Self::MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {} points, got {}",
                Self::MIN_POINTS,
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> T {
        (self.phi_max - self.phi_min) / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn point(&self, j: usize) -> T {
        self.phi_min + T::from_usize_lossy(j) * self.spacing()
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }

    /// Same window with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    fn symmetric_about(&self, center: T) -> bool {
        let tol = T::lit(64.0) * T::epsilon() * (self.phi_max.abs() + self.phi_min.abs() + T::one());
        self.n_points % 2 == 1 && (self.phi_min + self.phi_max - T::two() * center).abs() <= tol
    }
}

/// Lowest eigenpairs of the discretized flux Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution<T> {
    /// Ascending energies E/h in GHz.
    pub energies: Vec<T>,
    /// Real wavefunctions on the grid, normalized so that Σ ψ² dφ = 1.
    pub wavefunctions: Vec<Vec<T>>,
    pub grid: FluxGrid<T>,
    /// Estimated absolute accuracy of each energy (GHz), set by the scalar
    /// precision and the norm of the discretized operator.
    pub energy_floor: T,
}

impl<T: Real> EigenSolution<T> {
    /// (E1 - E0) in GHz.
    pub fn splitting(&self) -> T {
        self.energies[1] - self.energies[0]
    }

    /// ⟨ψa|ψb⟩ with the grid weight.
    pub fn overlap(&self, a: usize, b: usize) -> T {
        let dx = self.grid.spacing();
        self.wavefunctions[a]
            .iter()
            .zip(&self.wavefunctions[b])
            .map(|(&x, &y)| x * y)
            .sum::<T>()
            * dx
    }

    /// ⟨ψa| f(φ) |ψb⟩ for a function of flux.
    pub fn matrix_element(&self, a: usize, b: usize, f: impl Fn(T) -> T) -> T {
        let dx = self.grid.spacing();
        self.wavefunctions[a]
            .iter()
            .zip(&self.wavefunctions[b])
            .enumerate()
            .map(|(j, (&x, &y))| x * y * f(self.grid.point(j)))
            .sum::<T>()
            * dx
    }

    /// max over levels of ‖Hψ - Eψ‖ in the grid norm.
    pub fn max_residual(&self, params: &SquidParams<T>) -> T {
        let op = flux_operator(params, &self.grid);
        let dx = self.grid.spacing();
        let n = self.grid.n_points;
        let mut worst = T::zero();
        for (psi, &e) in self.wavefunctions.iter().zip(&self.energies) {
            let mut acc = T::zero();
            for i in 0..n {
                let mut hv = op.diag[i] * psi[i];
                if i > 0 {
                    hv += op.off[i - 1] * psi[i - 1];
                }
                if i + 1 < n {
                    hv += op.off[i] * psi[i + 1];
                }
                let r = hv - e * psi[i];
                acc += r * r;
            }
            worst = worst.max((acc * dx).sqrt());
        }
        worst
    }
}

/// The three-point finite-difference Hamiltonian on `grid`, in GHz.
pub fn flux_operator<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>) -> SymTridiagonal<T> {
    let h = grid.spacing();
    let t = params.kinetic_scale() / (h * h);
    let diag = grid.points().into_iter().map(|phi| T::two() * t + potential(params, phi)).collect();
    let off = vec![-t; grid.n_points - 1];
    SymTridiagonal::new(diag, off)
}

/// The `k` lowest levels of the flux Hamiltonian.
pub fn solve_levels<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>, k: usize) -> Result<EigenSolution<T>> {
    params.validate()?;
    grid.validate()?;
    if k < 2 || k > grid.n_points / 4 {
        return Err(Error::InvalidParameter(format!(
            "level count must be in [2, {}], got {k}",
            grid.n_points / 4
        )));
    }
    let center = T::half();
    let (energies, mut vectors, norm) = if params.flux_bias == center && grid.symmetric_about(center) {
        solve_by_parity(params, grid, k)?
    } else {
        solve_general(params, grid, k)?
    };

    let dx = grid.spacing();
    let scale = T::one() / dx.sqrt();
    let n = grid.n_points;
    let edge = (n / 20).max(1);
    for (level, v) in vectors.iter_mut().enumerate() {
        // unit Euclidean norm -> unit grid norm
        for x in v.iter_mut() {
            *x *= scale;
        }
        fix_sign(v, grid);
        let mass: T = v[..edge].iter().chain(&v[n - edge..]).map(|&x| x * x).sum::<T>() * dx;
        if mass > T::lit(1e-6) {
            return Err(Error::WindowTooSmall {
                level,
                mass: mass.as_f64(),
            });
        }
    }
    Ok(EigenSolution {
        energies,
        wavefunctions: vectors,
        grid: *grid,
        energy_floor: T::lit(4.0) * T::epsilon() * norm,
    })
}

// Positive overlap with the left half of the window (φ < Φ0/2).
fn fix_sign<T: Real>(v: &mut [T], grid: &FluxGrid<T>) {
    let mut left = T::zero();
    for (j, &x) in v.iter().enumerate() {
        if grid.point(j) < T::half() {
            left += x;
        }
    }
    let flip = if left != T::zero() {
        left < T::zero()
    } else {
        v.iter().find(|x| x.abs() > T::epsilon()).is_some_and(|&x| x < T::zero())
    };
    if flip {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

type RawLevels<T> = (Vec<T>, Vec<Vec<T>>, T);

fn solve_general<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>, k: usize) -> Result<RawLevels<T>> {
    let op = flux_operator(params, grid);
    let norm = op.norm();
    let cluster = T::lit(1e-3) * norm;
    let mut energies = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<T>> = Vec::with_capacity(k);
    for level in 0..k {
        let e = op.eigenvalue(level)?;
        let against: Vec<Vec<T>> = energies
            .iter()
            .zip(&vectors)
            .filter(|(&prev, _)| (e - prev).abs() < cluster)
            .map(|(_, v)| v.clone())
            .collect();
        vectors.push(op.eigenvector(e, &against));
        energies.push(e);
    }
    Ok((energies, vectors, norm))
}

// At φx = 1/2 on a grid symmetric about 1/2 the operator commutes with the
// reflection φ -> 1 - φ, so even and odd levels are computed in separate
// half-size problems. This keeps the near-degenerate tunnel pair apart.
fn solve_by_parity<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>, k: usize) -> Result<RawLevels<T>> {
    let n = grid.n_points;
    let m = (n - 1) / 2;
    let h = grid.spacing();
    let t = params.kinetic_scale() / (h * h);
    let center = T::half();
    let diag_at = |j: usize| T::two() * t + potential(params, center + T::from_usize_lossy(j) * h);

    // even: u_j = ψ(m + j), j = 0..=m, symmetrized by scaling u_0 with √2
    let even_diag: Vec<T> = (0..=m).map(diag_at).collect();
    let mut even_off = vec![-t; m];
    even_off[0] = -t * T::two().sqrt();
    let even = SymTridiagonal::new(even_diag, even_off);
    // odd: ψ(m) = 0, u_j = ψ(m + j), j = 1..=m
    let odd = SymTridiagonal::new((1..=m).map(diag_at).collect(), vec![-t; m - 1]);

    let per_sector = k.div_ceil(2) + 1;
    let mut levels: Vec<(T, Vec<T>)> = Vec::with_capacity(2 * per_sector);
    let mut found: Vec<Vec<T>> = vec![];
    for i in 0..per_sector {
        let e = even.eigenvalue(i)?;
        let u = even.eigenvector(e, &found);
        found.push(u.clone());
        let mut psi = vec![T::zero(); n];
        psi[m] = u[0] * T::two().sqrt();
        for j in 1..=m {
            psi[m + j] = u[j];
            psi[m - j] = u[j];
        }
        levels.push((e, psi));
    }
    found.clear();
    for i in 0..per_sector {
        let e = odd.eigenvalue(i)?;
        let u = odd.eigenvector(e, &found);
        found.push(u.clone());
        let mut psi = vec![T::zero(); n];
        for j in 1..=m {
            psi[m + j] = u[j - 1];
            psi[m - j] = -u[j - 1];
        }
        levels.push((e, psi));
    }
    levels.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite energies"));
    levels.truncate(k);

    let mut energies = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for (e, mut psi) in levels {
        let norm = psi.iter().map(|&x| x * x).sum::<T>().sqrt();
        for x in psi.iter_mut() {
            *x /= norm;
        }
        energies.push(e);
        vectors.push(psi);
    }
    let norm = even.norm().max(odd.norm());
    Ok((energies, vectors, norm))
}

/// Two-level reduction of one rf-SQUID.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams<T> {
    /// Tunneling splitting (E1 - E0)/h at Φx = Φ0/2, GHz. Clamped at 0.
    pub delta: T,
    /// Well asymmetry ε at the requested bias, GHz (σz coefficient is -ε/2).
    pub epsilon: T,
    /// Persistent current of a well-localized state, µA.
    pub persistent_current: T,
    /// Estimated absolute accuracy of `delta`, GHz.
    pub delta_floor: T,
    /// True when `delta` is within three decades of `delta_floor`, so fewer
    /// than three significant digits are trustworthy.
    pub at_solver_floor: bool,
}

/// Tunneling splitting at the symmetry point, with its precision floor.
pub fn tunneling_splitting<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>) -> Result<(T, T)> {
    let sol = solve_levels(&params.with_flux_bias(T::half()), grid, 2)?;
    Ok((sol.splitting().max(T::zero()), T::two() * sol.energy_floor))
}

/// Reduces `params` to (Δ, ε, I_p) on the default grid.
pub fn extract_two_level<T: Real>(params: &SquidParams<T>) -> Result<TwoLevelParams<T>> {
    extract_two_level_on(params, &FluxGrid::default())
}

pub fn extract_two_level_on<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>) -> Result<TwoLevelParams<T>> {
    params.validate()?;
    let beta = beta_l(params);
    if !(beta > T::one()) {
        return Err(Error::NoDoubleWell(beta.as_f64()));
    }
    let symmetric = params.with_flux_bias(T::half());
    let sol = solve_levels(&symmetric, grid, 2)?;
    let delta_floor = T::two() * sol.energy_floor;
    let delta = sol.splitting().max(T::zero());

    // left-localized state (ψ0 + ψ1)/√2; ⟨(Φ - Φx)/L_eff⟩ in µA
    let to_current = T::lit(FLUX_QUANTUM / MICRO) / symmetric.effective_inductance();
    let half = T::half();
    let offset = |phi: T| phi - half;
    let i00 = sol.matrix_element(0, 0, offset);
    let i11 = sol.matrix_element(1, 1, offset);
    let i01 = sol.matrix_element(0, 1, offset);
    let persistent_current = (half * (i00 + i11) + i01).abs() * to_current;

    // E_left - E_right = 2 I_p δΦ
    let bias_offset = (params.flux_bias - half) * T::lit(FLUX_QUANTUM);
    let epsilon = units::joule_to_ghz(T::two() * persistent_current * T::lit(MICRO) * bias_offset);

    Ok(TwoLevelParams {
        delta,
        epsilon,
        persistent_current,
        delta_floor,
        at_solver_floor: delta < T::lit(1e3) * delta_floor,
    })
}

/// ε from the spectrum alone: √((E1 - E0)² - Δ²) at the requested bias,
/// signed like the bias offset. Independent of the persistent-current route.
pub fn epsilon_from_spectrum<T: Real>(params: &SquidParams<T>, grid: &FluxGrid<T>) -> Result<T> {
    let (delta, _) = tunneling_splitting(params, grid)?;
    let biased = solve_levels(params, grid, 2)?;
    let split = biased.splitting();
    let eps = (split * split - delta * delta).max(T::zero()).sqrt();
    Ok(if params.flux_bias < T::half() { -eps } else { eps })
}

/// Result of an inverse Δ(Ic) calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration<T> {
    pub critical_current_ua: T,
    pub delta: T,
    pub iterations: usize,
}

/// Finds Ic in `bracket` (µA) such that Δ(Ic) matches `target_delta` (GHz)
/// to relative tolerance 1e-3. Δ decreases monotonically with Ic.
pub fn calibrate_critical_current<T: Real>(
    params: &SquidParams<T>,
    target_delta: T,
    bracket: (T, T),
    grid: &FluxGrid<T>,
) -> Result<Calibration<T>> {
    const REL_TOL: f64 = 1e-3;
    if !(target_delta > T::zero()) {
        return Err(Error::InvalidParameter("target splitting must be positive".into()));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo >= T::zero() && lo < hi) {
        return Err(Error::InvalidParameter("critical-current bracket must satisfy 0 <= lo < hi".into()));
    }
    let delta_at = |ic: T| tunneling_splitting(&params.with_critical_current(ic), grid).map(|(d, _)| d);
    let d_lo = delta_at(lo)?;
    let d_hi = delta_at(hi)?;
    if target_delta > d_lo || target_delta < d_hi {
        return Err(Error::BracketFailure {
            target: target_delta.as_f64(),
            low: d_hi.as_f64(),
            high: d_lo.as_f64(),
        });
    }
    let tol = T::lit(REL_TOL);
    for iterations in 1..=200 {
        let mid = T::half() * (lo + hi);
        let d = delta_at(mid)?;
        if ((d - target_delta) / target_delta).abs() < tol || hi - lo <= T::epsilon() * hi {
            return Ok(Calibration {
                critical_current_ua: mid,
                delta: d,
                iterations,
            });
        }
        if d > target_delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence("critical-current bisection exceeded 200 steps".into()))
}
