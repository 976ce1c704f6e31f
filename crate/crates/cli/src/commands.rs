use std::path::Path;

use busqc::bus::{
    coupling_from_current, effective_mutual, max_qubits, residual_decay_time, weak_coupling_ratio, BusParams,
};
use busqc::circuit::GateCircuit;
use busqc::evolution::{fidelity, run_schedule, IdealOp, Mode, PulseSchedule, PulseSegment, QuantumState, SegmentKind};
use busqc::ifs::{
    collective_sz, compile_circuit, init_schedule, logical_process_fidelity, pi_pulse, plan_cphase,
    spectator_trace_distance, verify_ifs, ControlParams, LogicalRegister,
};
use busqc::spin::{bus_all_to_all, DEFAULT_QUBIT_CAP};
use busqc::squid::{
    beta_l, calibrate_critical_current, epsilon_from_spectrum, extract_two_level_on, tunneling_splitting, FluxGrid,
    SquidParams,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::CliError;
use crate::report::{fmt_number, num, Report, Row, Status};

pub fn squid_params(cfg: &Config, ic_ua: f64) -> Result<SquidParams<f64>, CliError> {
    let s = &cfg.squid;
    Ok(SquidParams::new(s.l_ph, s.c_ff, ic_ua, 0.5 + s.flux_offset_mphi0 * 1e-3)?)
}

pub fn flux_grid(cfg: &Config) -> Result<FluxGrid<f64>, CliError> {
    let s = &cfg.squid;
    Ok(FluxGrid::new(s.grid_min_phi0, s.grid_max_phi0, s.grid_points)?)
}

pub fn bus_params(cfg: &Config) -> Result<BusParams<f64>, CliError> {
    let b = &cfg.bus;
    Ok(BusParams::new(b.lb_nh, b.m_ph, b.n_qubits)?.with_k_geom(b.k_geom))
}

/// Inputs and derived design quantities of one SQUID plus bus.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub inductance_ph: f64,
    pub capacitance_ff: f64,
    pub critical_current_ua: f64,
    pub flux_offset_mphi0: f64,
    pub bus_inductance_nh: f64,
    pub mutual_ph: f64,
    pub n_qubits: usize,
    pub beta_l: f64,
    pub plasma_frequency_ghz: f64,
    pub double_well: bool,
    pub delta_ghz: Option<f64>,
    pub delta_floor_ghz: Option<f64>,
    pub at_solver_floor: Option<bool>,
    pub epsilon_ghz: Option<f64>,
    pub epsilon_spectrum_ghz: Option<f64>,
    pub persistent_current_ua: Option<f64>,
    pub m_eff_fh: f64,
    pub j_mhz: Option<f64>,
    pub weak_coupling_ratio: f64,
    pub weak_coupling_warn: bool,
    /// None when M = 0 (no geometric limit).
    pub n_max: Option<usize>,
    pub n_over_limit: bool,
    pub decay_time_ms: Option<f64>,
    pub pi_pulse_ns: f64,
    pub cphase_wait_ns: Option<f64>,
}

impl DesignReport {
    pub fn compute(cfg: &Config) -> Result<Self, CliError> {
        let squid = squid_params(cfg, cfg.squid.ic_ua)?;
        let grid = flux_grid(cfg)?;
        let bus = bus_params(cfg)?;
        let beta = beta_l(&squid);
        let double_well = beta > 1.0;
        let (mut delta, mut floor, mut at_floor, mut eps, mut eps_spec, mut ip) = (None, None, None, None, None, None);
        if double_well {
            let tl = extract_two_level_on(&squid, &grid)?;
            delta = Some(tl.delta);
            floor = Some(tl.delta_floor);
            at_floor = Some(tl.at_solver_floor);
            eps = Some(tl.epsilon);
            eps_spec = Some(epsilon_from_spectrum(&squid, &grid)?);
            ip = Some(tl.persistent_current);
        }
        let j = ip.map(|i| coupling_from_current(i, &bus));
        let weak = weak_coupling_ratio(&squid, &bus);
        let n_max = match max_qubits(&bus) {
            usize::MAX => None,
            n => Some(n),
        };
        let dynamics_j = j.unwrap_or(cfg.control.j_mhz);
        let cphase_wait_ns = if dynamics_j != 0.0 {
            let reg = LogicalRegister::contiguous(2);
            let spec = bus_all_to_all(4, dynamics_j)?;
            Some(plan_cphase(0, 1, &reg, &spec, &ControlParams::new(Mode::Ideal))?.wait_ns)
        } else {
            None
        };
        Ok(Self {
            inductance_ph: squid.inductance_ph,
            capacitance_ff: squid.capacitance_ff,
            critical_current_ua: squid.critical_current_ua,
            flux_offset_mphi0: cfg.squid.flux_offset_mphi0,
            bus_inductance_nh: bus.bus_inductance_nh,
            mutual_ph: bus.mutual_ph,
            n_qubits: bus.n_qubits,
            beta_l: beta,
            plasma_frequency_ghz: squid.plasma_frequency(),
            double_well,
            delta_ghz: delta,
            delta_floor_ghz: floor,
            at_solver_floor: at_floor,
            epsilon_ghz: eps,
            epsilon_spectrum_ghz: eps_spec,
            persistent_current_ua: ip,
            m_eff_fh: effective_mutual(&bus),
            j_mhz: j,
            weak_coupling_ratio: weak.ratio,
            weak_coupling_warn: weak.warn,
            n_max,
            n_over_limit: n_max.is_some_and(|m| bus.n_qubits > m),
            decay_time_ms: cfg.bus.r_uohm.map(|r| residual_decay_time(bus.bus_inductance_nh, r)),
            pi_pulse_ns: pi_pulse(0, cfg.control.delta_ghz, 1)?.duration,
            cphase_wait_ns,
        })
    }

    fn opt(x: Option<f64>) -> Value {
        x.map_or(Value::Null, num)
    }

    pub fn squid_rows(&self, r: &mut Report) {
        r.add("input", "L", num(self.inductance_ph), "pH");
        r.add("input", "C", num(self.capacitance_ff), "fF");
        r.add("input", "Ic", num(self.critical_current_ua), "uA");
        r.add("input", "flux_offset", num(self.flux_offset_mphi0), "mPhi0");
        r.add("squid", "beta_L", num(self.beta_l), "");
        r.add("squid", "plasma_frequency", num(self.plasma_frequency_ghz), "GHz");
        r.add("squid", "double_well", self.double_well, "");
        let delta_note = match self.at_solver_floor {
            Some(true) => "at solver floor: order of magnitude only",
            _ => "",
        };
        r.push(Row::new("squid", "Delta", Self::opt(self.delta_ghz), "GHz").note(delta_note));
        r.add("squid", "Delta_Hz", Self::opt(self.delta_ghz.map(|d| d * 1e9)), "Hz");
        r.add("squid", "Delta_floor", Self::opt(self.delta_floor_ghz), "GHz");
        r.add("squid", "epsilon", Self::opt(self.epsilon_ghz), "GHz");
        r.add("squid", "epsilon_from_spectrum", Self::opt(self.epsilon_spectrum_ghz), "GHz");
        r.add("squid", "persistent_current", Self::opt(self.persistent_current_ua), "uA");
        if !self.double_well {
            r.push(Row::new("flags", "no_double_well", true, "").note("beta_L <= 1: single well, no qubit"));
        }
        if let Some(f) = self.at_solver_floor {
            r.add("flags", "at_solver_floor", f, "");
        }
    }

    pub fn bus_rows(&self, r: &mut Report) {
        r.add("input", "Lb", num(self.bus_inductance_nh), "nH");
        r.add("input", "M", num(self.mutual_ph), "pH");
        r.add("input", "N", self.n_qubits, "");
        r.add("bus", "M_eff", num(self.m_eff_fh), "fH");
        r.push(Row::new("bus", "J", Self::opt(self.j_mhz), "MHz").note("M_eff I_p^2 / h"));
        r.add("bus", "weak_coupling_ratio", num(self.weak_coupling_ratio), "");
        r.add("bus", "N_max", self.n_max.map_or(Value::Null, Value::from), "");
        r.add("bus", "decay_time", Self::opt(self.decay_time_ms), "ms");
        r.add("timing", "pi_pulse", num(self.pi_pulse_ns), "ns");
        r.add("timing", "cphase_wait", Self::opt(self.cphase_wait_ns), "ns");
        r.add("flags", "weak_coupling_warn", self.weak_coupling_warn, "");
        r.add("flags", "n_over_limit", self.n_over_limit, "");
        r.add("flags", "warn", self.weak_coupling_warn || self.n_over_limit, "");
    }
}

pub fn calibrate(cfg: &Config) -> Result<Report, CliError> {
    let design = DesignReport::compute(cfg)?;
    let mut r = Report::default();
    design.squid_rows(&mut r);
    let grid = flux_grid(cfg)?;
    let c = &cfg.calibrate;
    let base = squid_params(cfg, c.ic_min_ua)?;
    let cal = calibrate_critical_current(&base, c.target_delta_ghz, (c.ic_min_ua, c.ic_max_ua), &grid)?;
    r.add("calibration", "target_Delta", num(c.target_delta_ghz), "GHz");
    r.add("calibration", "Ic", num(cal.critical_current_ua), "uA");
    r.add("calibration", "Delta", num(cal.delta), "GHz");
    r.add("calibration", "iterations", cal.iterations, "");

    if !c.sweep_ic_ua.is_empty() {
        // independent solves; collect keeps input order
        let deltas: Vec<Result<(f64, f64), CliError>> = c
            .sweep_ic_ua
            .par_iter()
            .map(|&ic| {
                let p = squid_params(cfg, ic)?;
                Ok(tunneling_splitting(&p, &grid)?)
            })
            .collect();
        let mut prev: Option<f64> = None;
        let mut monotone = true;
        for (&ic, d) in c.sweep_ic_ua.iter().zip(deltas) {
            let (delta, floor) = d?;
            if let Some(p) = prev {
                monotone &= delta <= p;
            }
            prev = Some(delta);
            let mut row = Row::new("sweep", &format!("Ic={}", fmt_number(ic)), num(delta), "GHz");
            if delta < 1e3 * floor {
                row = row.note("at solver floor");
            }
            r.push(row);
        }
        r.add("flags", "sweep_monotone_decreasing", monotone, "");
    }
    Ok(r)
}

pub fn design(cfg: &Config) -> Result<Report, CliError> {
    let design = DesignReport::compute(cfg)?;
    let mut r = Report::default();
    design.bus_rows(&mut r);
    r.add("squid", "persistent_current", DesignReport::opt(design.persistent_current_ua), "uA");
    r.add("squid", "Delta", DesignReport::opt(design.delta_ghz), "GHz");
    r.add("squid", "epsilon", DesignReport::opt(design.epsilon_ghz), "GHz");
    if !design.double_well {
        r.push(Row::new("flags", "no_double_well", true, "").note("beta_L <= 1: single well, no qubit"));
    }
    // keep the flags block last
    r.rows.sort_by_key(|row| row.section == "flags");
    Ok(r)
}

struct Prepared {
    circuit: GateCircuit<f64>,
    reg: LogicalRegister,
    schedule: PulseSchedule<f64>,
    init: Option<PulseSchedule<f64>>,
}

fn prepare(cfg: &Config, circuit_text: &str, mode: Mode) -> Result<Prepared, CliError> {
    let mut circuit = GateCircuit::parse(circuit_text)?;
    let sim = &cfg.simulate;
    let from_input = if sim.input.is_empty() || sim.input == "random" { 0 } else { sim.input.len() };
    let from_pairs = sim.pairs.as_ref().map_or(0, |p| p.len());
    let n_logical = [circuit.n_logical, sim.n_logical.unwrap_or(0), from_input, from_pairs]
        .into_iter()
        .max()
        .unwrap_or(1);
    if 2 * n_logical > DEFAULT_QUBIT_CAP {
        return Err(CliError::config(format!(
            "{n_logical} logical qubits need {} physical qubits; the dense simulator is capped at {DEFAULT_QUBIT_CAP}",
            2 * n_logical
        )));
    }
    circuit.n_logical = n_logical;
    let reg = match &sim.pairs {
        Some(p) if p.len() == n_logical => LogicalRegister::new(p.iter().map(|&[a, b]| (a, b)).collect())?,
        Some(p) => {
            return Err(CliError::config(format!(
                "simulate.pairs lists {} pairs but the register has {n_logical} logical qubits",
                p.len()
            )))
        }
        None => LogicalRegister::contiguous(n_logical),
    };
    let base = bus_all_to_all(reg.n_physical(), cfg.control.j_mhz)?;
    let params = ControlParams {
        mode,
        delta_ghz: cfg.control.delta_ghz,
        epsilon_ghz: cfg.control.epsilon_ghz,
    };
    let schedule = compile_circuit(&circuit, &reg, &base, &params)?;
    let init = if sim.init { Some(init_schedule(&reg, &base, &params)?) } else { None };
    Ok(Prepared {
        circuit,
        reg,
        schedule,
        init,
    })
}

fn logical_input(cfg: &Config, n_logical: usize) -> Result<Vec<Complex64>, CliError> {
    let d = 1usize << n_logical;
    let input = cfg.simulate.input.as_str();
    if input == "random" {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        return Ok(v.into_iter().map(|z| z / norm).collect());
    }
    let bits = if input.is_empty() { "0".repeat(n_logical) } else { input.to_string() };
    if bits.len() != n_logical || bits.chars().any(|c| c != '0' && c != '1') {
        return Err(CliError::config(format!(
            "simulate.input '{input}' is not a {n_logical}-bit string or \"random\""
        )));
    }
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[usize::from_str_radix(&bits, 2).expect("binary digits")] = Complex64::new(1.0, 0.0);
    Ok(v)
}

fn basis_label(l: usize, n: usize) -> String {
    format!("|{:0w$b}>", l, w = n)
}

pub fn simulate(cfg: &Config, circuit_text: &str, mode: Mode) -> Result<Report, CliError> {
    let p = prepare(cfg, circuit_text, mode)?;
    let n = p.reg.n_logical();
    let input = logical_input(cfg, n)?;
    let mut r = Report::default();
    r.add("run", "mode", mode.to_string(), "");
    r.add("run", "n_logical", n, "");
    r.add("run", "n_physical", p.reg.n_physical(), "");
    r.add(
        "run",
        "pairs",
        p.reg.pairs().iter().map(|&(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(","),
        "",
    );
    r.add("run", "J", num(cfg.control.j_mhz), "MHz");
    r.add("run", "gates", p.circuit.gates.len(), "");
    r.add("run", "segments", p.schedule.segments.len(), "");
    r.add("run", "duration", num(p.schedule.total_duration()), "ns");

    let start = match &p.init {
        Some(init) => {
            if input.iter().enumerate().any(|(k, z)| (k == 0) != (z.norm() == 1.0)) {
                return Err(CliError::config("simulate.init requires the all-zero logical input".into()));
            }
            let prepared = run_schedule(&QuantumState::basis(p.reg.n_physical(), 0), init)?;
            let target = p.reg.embed(&input)?;
            r.add("init", "fidelity", num(fidelity(&prepared, &target)), "");
            r.add("init", "duration", num(init.total_duration()), "ns");
            r.add("init", "collective_sz", num(collective_sz(&prepared)), "");
            prepared
        }
        None => p.reg.embed(&input)?,
    };

    let out = run_schedule(&start, &p.schedule)?;
    let ideal_u = p.circuit.unitary()?;
    let ideal = p.reg.embed(&ideal_u.apply(&input))?;
    let base = &p.schedule.base;
    r.add("result", "state_fidelity", num(fidelity(&out, &ideal)), "");
    r.add("result", "leakage", num(p.reg.leakage(&out)), "");
    r.add("result", "ifs_residual", num(verify_ifs(&out, base, &p.reg)?), "");
    r.add("result", "collective_sz", num(collective_sz(&out)), "");
    let proc = logical_process_fidelity(&p.schedule, &ideal_u, &p.reg)?;
    r.add("process", "average_fidelity", num(proc.average_fidelity), "");
    r.add("process", "entanglement_fidelity", num(proc.entanglement_fidelity), "");
    r.add("process", "max_leakage", num(proc.leakage), "");
    r.add("process", "method", proc.method, "");

    let touched: Vec<usize> = p.circuit.gates.iter().flat_map(|g| g.qubits()).collect();
    for k in (0..n).filter(|k| !touched.contains(k)) {
        r.add("spectators", &format!("L{k}_trace_distance"), num(spectator_trace_distance(&start, &out, &p.reg, k)?), "");
    }
    for (l, z) in p.reg.project(&out).into_iter().enumerate() {
        r.add("state", &basis_label(l, n), json!([num(z.re), num(z.im)]), "");
    }
    Ok(r)
}

fn describe(seg: &PulseSegment<f64>) -> String {
    match &seg.kind {
        SegmentKind::Ideal(op) => match *op {
            IdealOp::Flip { qubit } => format!("ideal flip q{qubit}"),
            IdealOp::RotX { qubit, angle } => format!("ideal rx q{qubit} {}", fmt_number(angle)),
            IdealOp::RotZ { qubit, angle } => format!("ideal rz q{qubit} {}", fmt_number(angle)),
        },
        SegmentKind::Drive { delta, epsilon } => {
            let list = |v: &[f64]| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0.0)
                    .map(|(q, x)| format!("q{q}={}", fmt_number(*x)))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let (d, e) = (list(delta), list(epsilon));
            match (d.is_empty(), e.is_empty()) {
                (true, true) => "wait".into(),
                _ => format!("drive Delta[{d}] eps[{e}]"),
            }
        }
    }
}

pub fn compile(cfg: &Config, circuit_text: &str, mode: Mode) -> Result<Report, CliError> {
    let p = prepare(cfg, circuit_text, mode)?;
    let mut r = Report::default();
    r.add("summary", "mode", mode.to_string(), "");
    r.add("summary", "n_physical", p.reg.n_physical(), "");
    let mut k = 0;
    for (section, sched) in p.init.iter().map(|s| ("init", s)).chain(std::iter::once(("schedule", &p.schedule))) {
        for seg in &sched.segments {
            r.push(Row::new(section, &format!("{k:04} {}", seg.label), num(seg.duration), "ns").note(describe(seg)));
            k += 1;
        }
    }
    let total = p.schedule.total_duration() + p.init.as_ref().map_or(0.0, |s| s.total_duration());
    r.add("summary", "segments", k, "");
    r.add("summary", "duration", num(total), "ns");
    Ok(r)
}

/// Paper operating points used by `reproduce-paper`.
pub const PAPER_IC_DEEP_UA: f64 = 3.0;
pub const PAPER_IC_QUBIT_UA: f64 = 2.375;

fn ratio_row(name: &str, paper: f64, computed: f64, unit: &str, factor: f64) -> Row {
    let ok = computed > 0.0 && computed / paper <= factor && paper / computed <= factor;
    let mut row = Row::new("paper", name, num(computed), unit);
    row.paper = Some(num(paper));
    row.tolerance = Some(format!("factor {}", fmt_number(factor)));
    row.status = Some(if ok { Status::Pass } else { Status::Fail });
    row
}

fn rel_row(name: &str, paper: f64, computed: f64, unit: &str, rel: f64) -> Row {
    let ok = ((computed - paper) / paper).abs() <= rel;
    let mut row = Row::new("paper", name, num(computed), unit);
    row.paper = Some(num(paper));
    row.tolerance = Some(format!("+-{}%", fmt_number(rel * 100.0)));
    row.status = Some(if ok { Status::Pass } else { Status::Fail });
    row
}

fn exact_row(name: &str, paper: f64, computed: f64, unit: &str, ok: bool) -> Row {
    let mut row = Row::new("paper", name, num(computed), unit);
    row.paper = Some(num(paper));
    row.tolerance = Some("exact".into());
    row.status = Some(if ok { Status::Pass } else { Status::Fail });
    row
}

pub fn reproduce_paper(cfg: &Config) -> Result<Report, CliError> {
    let grid = flux_grid(cfg)?;
    let bus = bus_params(cfg)?;
    let deep = extract_two_level_on(&squid_params(cfg, PAPER_IC_DEEP_UA)?, &grid)?;
    let qubit_params = squid_params(cfg, PAPER_IC_QUBIT_UA)?;
    let qubit = extract_two_level_on(&qubit_params, &grid)?;
    let c = &cfg.calibrate;
    let cal = calibrate_critical_current(&qubit_params, 2.6, (c.ic_min_ua, c.ic_max_ua), &grid)?;

    let mut r = Report::default();
    let floor_note = format!(
        "solver floor {} Hz{}",
        fmt_number(deep.delta_floor * 1e9),
        if deep.at_solver_floor { "; at floor, order of magnitude only" } else { "" }
    );
    r.push(ratio_row("Delta(Ic=3uA)", 30.0, deep.delta * 1e9, "Hz", 3.0).note(floor_note));

    let mut row = rel_row("Delta(Ic=2.375uA)", 2.6, qubit.delta, "GHz", 0.2);
    let cal_ok = ((cal.critical_current_ua - PAPER_IC_QUBIT_UA) / PAPER_IC_QUBIT_UA).abs() <= 0.1;
    if !cal_ok {
        row.status = Some(Status::Fail);
    }
    r.push(row.note(format!(
        "inverse calibration to 2.6 GHz gives Ic = {} uA (+-10%: {})",
        fmt_number(cal.critical_current_ua),
        if cal_ok { "ok" } else { "out of range" }
    )));

    r.push(
        ratio_row("epsilon(0.15 mPhi0)", 2.7, deep.epsilon, "GHz", 2.0)
            .note("full well asymmetry at Ic = 3 uA; sigma_z coefficient is -epsilon/2"),
    );

    let m_eff = effective_mutual(&bus);
    r.push(exact_row("M_eff", 2.0, m_eff, "fH", (m_eff - 2.0).abs() <= 1e-12));

    let j = coupling_from_current(deep.persistent_current, &bus);
    r.push(ratio_row("J", 25.0, j, "MHz", 2.0).note(format!(
        "I_p = {} uA from the solver",
        fmt_number(deep.persistent_current)
    )));

    let n_max = max_qubits(&bus);
    let ratio = busqc::bus::weak_coupling_ratio_for(n_max, cfg.squid.l_ph, bus.mutual_ph, bus.bus_inductance_nh).ratio;
    let ok = n_max == 1000 && (ratio - 0.013).abs() < 5e-4;
    r.push(exact_row("N_max", 1000.0, n_max as f64, "", ok).note(format!(
        "N M^2/(L Lb) = {} at N_max",
        fmt_number(ratio)
    )));

    let t_pi = pi_pulse(0, qubit.delta, 1)?.duration;
    let mut row = Row::new("paper", "pi_pulse", num(t_pi), "ns");
    row.paper = Some(num(0.4));
    row.tolerance = Some("convention factor <= 2".into());
    row.status = Some(Status::Flag);
    r.push(row.note(format!(
        "1/(2 Delta) with Delta = {} GHz; quoted/computed = {}",
        fmt_number(qubit.delta),
        fmt_number(0.4 / t_pi)
    )));
    Ok(r)
}

pub fn read_circuit(path: Option<&Path>) -> Result<String, CliError> {
    let path = path.ok_or_else(|| CliError::config("--circuit PATH is required".into()))?;
    std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}
