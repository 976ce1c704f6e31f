//! TOML run configuration. Every key carries its unit; every key is optional
//! and defaults to the reference bus design.

use std::path::Path;

use busqc::evolution::Mode;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seeds the random logical input of `simulate` (input = "random").
    pub seed: u64,
    pub squid: SquidSection,
    pub bus: BusSection,
    pub calibrate: CalibrateSection,
    pub control: ControlSection,
    pub simulate: SimulateSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SquidSection {
    #[serde(rename = "L_pH")]
    pub l_ph: f64,
    #[serde(rename = "C_fF")]
    pub c_ff: f64,
    #[serde(rename = "Ic_uA")]
    pub ic_ua: f64,
    /// Φx - Φ0/2 at which ε is evaluated.
    #[serde(rename = "flux_offset_mPhi0")]
    pub flux_offset_mphi0: f64,
    pub grid_points: usize,
    #[serde(rename = "grid_min_Phi0")]
    pub grid_min_phi0: f64,
    #[serde(rename = "grid_max_Phi0")]
    pub grid_max_phi0: f64,
}

impl Default for SquidSection {
    fn default() -> Self {
        Self {
            l_ph: 150.0,
            c_ff: 80.0,
            ic_ua: 3.0,
            flux_offset_mphi0: 0.15,
            grid_points: 4097,
            grid_min_phi0: -0.25,
            grid_max_phi0: 1.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BusSection {
    #[serde(rename = "Lb_nH")]
    pub lb_nh: f64,
    #[serde(rename = "M_pH")]
    pub m_ph: f64,
    /// Number of SQUIDs on the bus for the design checks.
    #[serde(rename = "N_qubits")]
    pub n_qubits: usize,
    pub k_geom: f64,
    /// Residual bus resistance for the persistent-current decay time.
    #[serde(rename = "R_uOhm")]
    pub r_uohm: Option<f64>,
}

impl Default for BusSection {
    fn default() -> Self {
        Self {
            lb_nh: 2.0,
            m_ph: 2.0,
            n_qubits: 1000,
            k_geom: 1.0,
            r_uohm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrateSection {
    #[serde(rename = "target_Delta_GHz")]
    pub target_delta_ghz: f64,
    #[serde(rename = "Ic_min_uA")]
    pub ic_min_ua: f64,
    #[serde(rename = "Ic_max_uA")]
    pub ic_max_ua: f64,
    /// Optional list of Ic values for a Δ(Ic) table.
    #[serde(rename = "sweep_Ic_uA")]
    pub sweep_ic_ua: Vec<f64>,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        Self {
            target_delta_ghz: 2.6,
            ic_min_ua: 1.5,
            ic_max_ua: 3.0,
            sweep_ic_ua: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlSection {
    #[serde(rename = "Delta_GHz")]
    pub delta_ghz: f64,
    #[serde(rename = "epsilon_GHz")]
    pub epsilon_ghz: f64,
    /// Qubit-qubit coupling used for dynamics.
    #[serde(rename = "J_MHz")]
    pub j_mhz: f64,
    pub mode: Mode,
}

impl Default for ControlSection {
    fn default() -> Self {
        Self {
            delta_ghz: 2.6,
            epsilon_ghz: 2.7,
            j_mhz: 25.0,
            mode: Mode::Ideal,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    /// Logical input: a bitstring, "random", or empty for all zeros.
    pub input: String,
    /// Physical pairing [[a, b], ...]; contiguous pairs when absent.
    pub pairs: Option<Vec<[usize; 2]>>,
    /// Logical register size when larger than the circuit needs.
    pub n_logical: Option<usize>,
    /// Prepend the initialization sequence from all qubits in the left well.
    pub init: bool,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let s = &self.squid;
        let positive = [
            ("squid.L_pH", s.l_ph),
            ("squid.C_fF", s.c_ff),
            ("bus.Lb_nH", self.bus.lb_nh),
            ("control.Delta_GHz", self.control.delta_ghz),
            ("control.epsilon_GHz", self.control.epsilon_ghz),
            ("calibrate.target_Delta_GHz", self.calibrate.target_delta_ghz),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::config(format!("{key} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("squid.Ic_uA", s.ic_ua),
            ("bus.M_pH", self.bus.m_ph),
            ("calibrate.Ic_min_uA", self.calibrate.ic_min_ua),
        ];
        for (key, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::config(format!("{key} must be non-negative, got {v}")));
            }
        }
        if !self.control.j_mhz.is_finite() {
            return Err(CliError::config("control.J_MHz must be finite".into()));
        }
        if !(self.calibrate.ic_max_ua > self.calibrate.ic_min_ua) {
            return Err(CliError::config("calibrate.Ic_max_uA must exceed calibrate.Ic_min_uA".into()));
        }
        if !(s.flux_offset_mphi0.abs() < 500.0) {
            return Err(CliError::config("squid.flux_offset_mPhi0 must lie within ±500".into()));
        }
        if self.calibrate.sweep_ic_ua.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(CliError::config("calibrate.sweep_Ic_uA entries must be non-negative".into()));
        }
        Ok(())
    }
}
