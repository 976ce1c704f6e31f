//! Logical gate circuits: the text format and an exact logical-unitary oracle.
//!
//! Grammar, one statement per line:
//!
//! ```text
//! # comment (also allowed after a statement)
//! QUBITS 2           optional, fixes the logical register size
//! H 0
//! RX 1, pi/2
//! RZ 0 -3*pi/4
//! CNOT 0,1           control, target
//! CPHASE 0 1
//! ```
//!
//! Gate names are case-insensitive; operands are separated by commas and/or
//! whitespace. Angles are in radians and may be products/quotients of
//! numbers and `pi`, with an optional leading sign.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum LogicalGate<T> {
    /// exp(-iθX/2).
    Rx { qubit: usize, angle: T },
    /// exp(-iθZ/2).
    Rz { qubit: usize, angle: T },
    X { qubit: usize },
    Z { qubit: usize },
    H { qubit: usize },
    /// diag(1, 1, 1, -1).
    CPhase { a: usize, b: usize },
    Cnot { control: usize, target: usize },
}

impl<T: Real> LogicalGate<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            LogicalGate::Rx { qubit, .. }
            | LogicalGate::Rz { qubit, .. }
            | LogicalGate::X { qubit }
            | LogicalGate::Z { qubit }
            | LogicalGate::H { qubit } => vec![qubit],
            LogicalGate::CPhase { a, b } => vec![a, b],
            LogicalGate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LogicalGate::Rx { .. } => "RX",
            LogicalGate::Rz { .. } => "RZ",
            LogicalGate::X { .. } => "X",
            LogicalGate::Z { .. } => "Z",
            LogicalGate::H { .. } => "H",
            LogicalGate::CPhase { .. } => "CPHASE",
            LogicalGate::Cnot { .. } => "CNOT",
        }
    }
}

impl<T: Real> std::fmt::Display for LogicalGate<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            LogicalGate::Rx { qubit, angle } | LogicalGate::Rz { qubit, angle } => {
                write!(f, "{} {}, {}", self.name(), qubit, angle)
            }
            _ => {
                let q: Vec<String> = self.qubits().iter().map(|q| q.to_string()).collect();
                write!(f, "{} {}", self.name(), q.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCircuit<T> {
    pub n_logical: usize,
    pub gates: Vec<LogicalGate<T>>,
}

impl<T: Real> GateCircuit<T> {
    pub fn new(n_logical: usize, gates: Vec<LogicalGate<T>>) -> Result<Self> {
        let c = Self { n_logical, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(n_logical: usize) -> Self {
        Self { n_logical, gates: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_logical == 0 {
            return Err(Error::InvalidParameter("circuit needs at least one logical qubit".into()));
        }
        for g in &self.gates {
            let qs = g.qubits();
            if let Some(q) = qs.iter().find(|&&q| q >= self.n_logical) {
                return Err(Error::InvalidParameter(format!("{g}: qubit {q} out of range")));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidParameter(format!("{g}: operands overlap")));
            }
        }
        Ok(())
    }

    /// Parses the text format. The register size is the `QUBITS` value when
    /// given, otherwise one more than the largest operand (at least 1).
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut gates = vec![];
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line, msg };
            let (head, rest) = match body.find(|c: char| c.is_whitespace()) {
                Some(i) => (&body[..i], body[i..].trim()),
                None => (body, ""),
            };
            let args: Vec<&str> = rest
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let qubit = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("bad qubit index '{s}'")));
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(perr(format!("{} expects {n} operand(s), got {}", head.to_uppercase(), args.len())))
                }
            };
            let gate = match head.to_ascii_uppercase().as_str() {
                "QUBITS" => {
                    arity(1)?;
                    if declared.is_some() || !gates.is_empty() {
                        return Err(perr("QUBITS must come first and only once".into()));
                    }
                    declared = Some(qubit(args[0])?);
                    continue;
                }
                "RX" | "RZ" => {
                    arity(2)?;
                    let q = qubit(args[0])?;
                    let angle = T::lit(parse_angle(args[1]).map_err(perr)?);
                    if head.eq_ignore_ascii_case("RX") {
                        LogicalGate::Rx { qubit: q, angle }
                    } else {
                        LogicalGate::Rz { qubit: q, angle }
                    }
                }
                "X" | "Z" | "H" => {
                    arity(1)?;
                    let q = qubit(args[0])?;
                    match head.to_ascii_uppercase().as_str() {
                        "X" => LogicalGate::X { qubit: q },
                        "Z" => LogicalGate::Z { qubit: q },
                        _ => LogicalGate::H { qubit: q },
                    }
                }
                "CPHASE" | "CZ" => {
                    arity(2)?;
                    LogicalGate::CPhase {
                        a: qubit(args[0])?,
                        b: qubit(args[1])?,
                    }
                }
                "CNOT" | "CX" => {
                    arity(2)?;
                    LogicalGate::Cnot {
                        control: qubit(args[0])?,
                        target: qubit(args[1])?,
                    }
                }
                other => return Err(perr(format!("unknown gate '{other}'"))),
            };
            let qs = gate.qubits();
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(perr(format!("{gate}: operands overlap")));
            }
            if let Some(n) = declared {
                if let Some(q) = qs.iter().find(|&&q| q >= n) {
                    return Err(perr(format!("qubit {q} out of range for QUBITS {n}")));
                }
            }
            gates.push(gate);
        }
        let n_logical = declared.unwrap_or_else(|| {
            gates
                .iter()
                .flat_map(|g| g.qubits())
                .max()
                .map_or(1, |m| m + 1)
        });
        if n_logical == 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "QUBITS must be positive".into(),
            });
        }
        Ok(Self { n_logical, gates })
    }

    /// Serializes back to the text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("QUBITS {}\n", self.n_logical);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Exact 2^n × 2^n logical unitary; logical qubit 0 is the most
    /// significant bit.
    pub fn unitary(&self) -> Result<ComplexMatrix<T>> {
        self.validate()?;
        let mut u = ComplexMatrix::identity(1 << self.n_logical);
        for g in &self.gates {
            u = gate_matrix(g, self.n_logical).matmul(&u);
        }
        Ok(u)
    }
}

/// Evaluates `[+|-] atom ((*|/) atom)*` with atoms a float or `pi`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1.0, b),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut value = None;
    let mut op = '*';
    let mut start = 0;
    let bytes: Vec<char> = body.chars().collect();
    for i in 0..=bytes.len() {
        if i == bytes.len() || bytes[i] == '*' || bytes[i] == '/' {
            let tok: String = bytes[start..i].iter().collect();
            let tok = tok.trim();
            let atom = if tok.eq_ignore_ascii_case("pi") {
                std::f64::consts::PI
            } else {
                tok.parse::<f64>().map_err(|_| format!("bad angle '{s}'"))?
            };
            value = Some(match (value, op) {
                (None, _) => atom,
                (Some(v), '*') => v * atom,
                (Some(v), _) => v / atom,
            });
            if i < bytes.len() {
                op = bytes[i];
                start = i + 1;
            }
        }
    }
    let v = sign * value.ok_or_else(|| format!("bad angle '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle '{s}' is not finite"))
    }
}

fn single<T: Real>(g: &LogicalGate<T>) -> [[Complex<T>; 2]; 2] {
    let c = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
    match *g {
        LogicalGate::Rx { angle, .. } => {
            let (s, co) = (T::half() * angle).sin_cos();
            let co = Complex::new(co, T::zero());
            let mis = Complex::new(T::zero(), -s);
            [[co, mis], [mis, co]]
        }
        LogicalGate::Rz { angle, .. } => {
            let h = T::half() * angle;
            [
                [Complex::from_polar(T::one(), -h), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex::from_polar(T::one(), h)],
            ]
        }
        LogicalGate::X { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        LogicalGate::Z { .. } => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        LogicalGate::H { .. } => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]]
        }
        _ => unreachable!("two-qubit gate"),
    }
}

fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Full-register matrix of one gate, built from Kronecker products.
pub fn gate_matrix<T: Real>(g: &LogicalGate<T>, n: usize) -> ComplexMatrix<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let lift = |q: usize, m: &ComplexMatrix<T>| {
        let mut out = ComplexMatrix::identity(1);
        for k in 0..n {
            let f = if k == q { m.clone() } else { ComplexMatrix::identity(2) };
            out = kron(&out, &f);
        }
        out
    };
    let proj = |v: usize| ComplexMatrix::from_fn(2, |i, j| if i == v && j == v { one } else { zero });
    let add = |a: &ComplexMatrix<T>, b: &ComplexMatrix<T>| ComplexMatrix::from_fn(a.dim(), |i, j| a[(i, j)] + b[(i, j)]);
    match *g {
        LogicalGate::CPhase { a, b } => {
            let z = ComplexMatrix::from_fn(2, |i, j| if i != j { zero } else if i == 0 { one } else { -one });
            add(&lift(a, &proj(0)), &lift(a, &proj(1)).matmul(&lift(b, &z)))
        }
        LogicalGate::Cnot { control, target } => {
            let x = ComplexMatrix::from_fn(2, |i, j| if i != j { one } else { zero });
            add(&lift(control, &proj(0)), &lift(control, &proj(1)).matmul(&lift(target, &x)))
        }
        _ => {
            let m = single(g);
            lift(g.qubits()[0], &ComplexMatrix::from_fn(2, |i, j| m[i][j]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert!((parse_angle("3*pi/4").unwrap() - 0.75 * PI).abs() < 1e-15);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("+1e-3").unwrap(), 1e-3);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("1/0").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "# bell\nQUBITS 3\nh 0\nCNOT 0,1   # entangle\nRz 2, -pi/2\ncphase 1 2\n\n";
        let c = GateCircuit::<f64>::parse(text).unwrap();
        assert_eq!(c.n_logical, 3);
        assert_eq!(c.gates.len(), 4);
        assert_eq!(c.gates[1], LogicalGate::Cnot { control: 0, target: 1 });
        assert_eq!(GateCircuit::<f64>::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = GateCircuit::<f64>::parse("H 0\nFOO 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(GateCircuit::<f64>::parse("CNOT 1,1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(GateCircuit::<f64>::parse("QUBITS 1\nH 1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(GateCircuit::<f64>::parse("RX 0"), Err(Error::Parse { .. })));
        assert!(matches!(GateCircuit::<f64>::parse("H -1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_text_is_one_qubit_identity() {
        let c = GateCircuit::<f64>::parse("# nothing\n").unwrap();
        assert_eq!(c.n_logical, 1);
        assert!(c.unitary().unwrap().max_abs_diff(&ComplexMatrix::identity(2)) == 0.0);
    }

    #[test]
    fn cnot_truth_table() {
        let u = GateCircuit::new(2, vec![LogicalGate::<f64>::Cnot { control: 0, target: 1 }])
            .unwrap()
            .unitary()
            .unwrap();
        for (input, output) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            assert_eq!(u[(output, input)].re, 1.0);
        }
    }

    #[test]
    fn hadamard_euler_identity() {
        // H = i·Rz(π/2)Rx(π/2)Rz(π/2)
        let euler = GateCircuit::new(
            1,
            vec![
                LogicalGate::Rz { qubit: 0, angle: PI / 2.0 },
                LogicalGate::Rx { qubit: 0, angle: PI / 2.0 },
                LogicalGate::Rz { qubit: 0, angle: PI / 2.0 },
            ],
        )
        .unwrap()
        .unitary()
        .unwrap();
        let h = gate_matrix(&LogicalGate::<f64>::H { qubit: 0 }, 1);
        let scaled = ComplexMatrix::from_fn(2, |i, j| euler[(i, j)] * Complex::new(0.0, 1.0));
        assert!(scaled.max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn cnot_is_h_cphase_h() {
        let a = GateCircuit::new(3, vec![LogicalGate::<f64>::Cnot { control: 2, target: 0 }]).unwrap();
        let b = GateCircuit::new(
            3,
            vec![
                LogicalGate::H { qubit: 0 },
                LogicalGate::CPhase { a: 2, b: 0 },
                LogicalGate::H { qubit: 0 },
            ],
        )
        .unwrap();
        assert!(a.unitary().unwrap().max_abs_diff(&b.unitary().unwrap()) < 1e-15);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(GateCircuit::new(1, vec![LogicalGate::<f64>::X { qubit: 1 }]).is_err());
        assert!(GateCircuit::new(2, vec![LogicalGate::<f64>::CPhase { a: 0, b: 0 }]).is_err());
    }
}
