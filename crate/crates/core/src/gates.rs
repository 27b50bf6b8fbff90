//! Gate matrices, circuits and their application to states.
//!
//! The fast path acts on the amplitude array with bit-mask index arithmetic.
//! [`circuit_unitary`] instead builds each embedded `2^m × 2^m` matrix from its
//! definition and multiplies them; it exists so the two can be checked
//! against each other.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I, ONE, ZERO};
use crate::state::{DensityMatrix, StateVector};

/// Largest register for which [`circuit_unitary`] builds dense matrices.
pub const MAX_UNITARY_QUBITS: usize = 8;
/// Largest register for density-matrix evolution.
pub const MAX_DENSITY_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    /// `diag(1, e^{iλ})`.
    Phase(f64),
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// Control is the first target.
    Cnot,
    /// CNOT with control and target exchanged: control is the second target.
    Rcnot,
    Magic,
    MagicDagger,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Rcnot | GateKind::Magic | GateKind::MagicDagger => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PauliX => "X",
            GateKind::PauliY => "Y",
            GateKind::PauliZ => "Z",
            GateKind::Hadamard => "H",
            GateKind::Phase(_) => "P",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Cnot => "CNOT",
            GateKind::Rcnot => "RCNOT",
            GateKind::Magic => "MAGIC",
            GateKind::MagicDagger => "MAGICDG",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Phase(a) | GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_cnot_like(&self) -> bool {
        matches!(self, GateKind::Cnot | GateKind::Rcnot)
    }

    fn parse(name: &str, angle: Option<f64>) -> core::result::Result<Self, String> {
        let need_angle = |f: fn(f64) -> GateKind| match angle {
            Some(a) => Ok(f(a)),
            None => Err(format!("{name} needs an angle")),
        };
        let plain = |k: GateKind| match angle {
            None => Ok(k),
            Some(_) => Err(format!("{name} takes no angle")),
        };
        match name {
            "X" => plain(GateKind::PauliX),
            "Y" => plain(GateKind::PauliY),
            "Z" => plain(GateKind::PauliZ),
            "H" => plain(GateKind::Hadamard),
            "CNOT" => plain(GateKind::Cnot),
            "RCNOT" => plain(GateKind::Rcnot),
            "MAGIC" => plain(GateKind::Magic),
            "MAGICDG" => plain(GateKind::MagicDagger),
            "P" => need_angle(GateKind::Phase),
            "RX" => need_angle(GateKind::Rx),
            "RY" => need_angle(GateKind::Ry),
            "RZ" => need_angle(GateKind::Rz),
            other => Err(format!("unknown gate {other:?}")),
        }
    }
}

pub(crate) enum FixedMatrix {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl FixedMatrix {
    fn to_cmatrix(&self) -> CMatrix {
        match self {
            FixedMatrix::One(u) => CMatrix::from_fn(2, 2, |r, c| u[r][c]),
            FixedMatrix::Two(u) => CMatrix::from_fn(4, 4, |r, c| u[r][c]),
        }
    }

    fn conj(&self) -> FixedMatrix {
        match self {
            FixedMatrix::One(u) => FixedMatrix::One(u.map(|row| row.map(|z| z.conj()))),
            FixedMatrix::Two(u) => FixedMatrix::Two(u.map(|row| row.map(|z| z.conj()))),
        }
    }
}

const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn magic() -> [[Complex64; 4]; 4] {
    [
        [c(H, 0.0), c(0.0, H), ZERO, ZERO],
        [ZERO, ZERO, c(0.0, H), c(H, 0.0)],
        [ZERO, ZERO, c(0.0, H), c(-H, 0.0)],
        [c(H, 0.0), c(0.0, -H), ZERO, ZERO],
    ]
}

pub(crate) fn fixed_matrix(kind: GateKind) -> FixedMatrix {
    use FixedMatrix::*;
    match kind {
        GateKind::PauliX => One([[ZERO, ONE], [ONE, ZERO]]),
        GateKind::PauliY => One([[ZERO, -I], [I, ZERO]]),
        GateKind::PauliZ => One([[ONE, ZERO], [ZERO, -ONE]]),
        GateKind::Hadamard => One([[c(H, 0.0), c(H, 0.0)], [c(H, 0.0), c(-H, 0.0)]]),
        GateKind::Phase(l) => One([[ONE, ZERO], [ZERO, Complex64::cis(l)]]),
        GateKind::Rx(phi) => {
            let (s, co) = num_traits::Float::sin_cos(phi / 2.0);
            One([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
        }
        GateKind::Ry(phi) => {
            let (s, co) = num_traits::Float::sin_cos(phi / 2.0);
            One([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
        }
        GateKind::Rz(phi) => One([
            [Complex64::cis(-phi / 2.0), ZERO],
            [ZERO, Complex64::cis(phi / 2.0)],
        ]),
        GateKind::Cnot => Two([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, ZERO, ONE],
            [ZERO, ZERO, ONE, ZERO],
        ]),
        GateKind::Rcnot => Two([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ZERO, ZERO, ONE],
            [ZERO, ZERO, ONE, ZERO],
            [ZERO, ONE, ZERO, ZERO],
        ]),
        GateKind::Magic => Two(magic()),
        GateKind::MagicDagger => {
            let m = magic();
            let mut out = [[ZERO; 4]; 4];
            for (r, row) in out.iter_mut().enumerate() {
                for (col, z) in row.iter_mut().enumerate() {
                    *z = m[col][r].conj();
                }
            }
            Two(out)
        }
    }
}

/// The 2×2 or 4×4 unitary of a gate. Two-qubit matrices are written in the
/// basis `|q_first q_second⟩`, first target most significant.
pub fn gate_matrix(kind: GateKind) -> CMatrix {
    fixed_matrix(kind).to_cmatrix()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    targets: [usize; 2],
}

impl GateOp {
    /// Checks arity and distinctness; range is checked against a register by
    /// [`Circuit::push`] and [`apply_gate`].
    pub fn new(kind: GateKind, targets: &[usize]) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::ArityMismatch {
                kind: kind.name(),
                expected: kind.arity(),
                actual: targets.len(),
            });
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTarget);
        }
        let mut t = [0usize; 2];
        t[..targets.len()].copy_from_slice(targets);
        Ok(Self { kind, targets: t })
    }

    pub fn single(kind: GateKind, site: usize) -> Result<Self> {
        Self::new(kind, &[site])
    }

    pub fn pair(kind: GateKind, first: usize, second: usize) -> Result<Self> {
        Self::new(kind, &[first, second])
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    fn check_range(&self, num_qubits: usize) -> Result<()> {
        for &q in self.targets() {
            if q == 0 || q > num_qubits {
                return Err(Error::TargetOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(a) = self.kind.angle() {
            write!(f, "({a})")?;
        }
        for q in self.targets() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push_op(&mut self, op: GateOp) -> Result<&mut Self> {
        op.check_range(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn push(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        self.push_op(GateOp::new(kind, targets)?)
    }

    /// Appends every op of `other` (same register size required).
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(self)
    }

    pub fn cnot_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.is_cnot_like()).count()
    }

    /// Parses the textual dump produced by `Display`: one op per line,
    /// `KIND(angle) q_i [q_j]`. Blank lines and `#` comments are skipped.
    pub fn parse_dump(num_qubits: usize, text: &str) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::CircuitParse {
                line: lineno + 1,
                reason,
            };
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default();
            let (name, angle) = match head.find('(') {
                Some(open) => {
                    let inner = head[open + 1..]
                        .strip_suffix(')')
                        .ok_or_else(|| err("unterminated angle".to_string()))?;
                    let a: f64 = inner
                        .parse()
                        .map_err(|_| err(format!("bad angle {inner:?}")))?;
                    (&head[..open], Some(a))
                }
                None => (head, None),
            };
            let kind = GateKind::parse(name, angle).map_err(err)?;
            let targets = parts
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| err(format!("bad qubit {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            circuit.push(kind, &targets)?;
        }
        Ok(circuit)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

#[inline]
fn bit_position(num_qubits: usize, site: usize) -> usize {
    num_qubits - site
}

fn kernel_1q(buf: &mut [Complex64], pos: usize, u: &[[Complex64; 2]; 2]) {
    let stride = 1usize << pos;
    let mut base = 0;
    while base < buf.len() {
        for i in base..base + stride {
            let a0 = buf[i];
            let a1 = buf[i + stride];
            buf[i] = u[0][0] * a0 + u[0][1] * a1;
            buf[i + stride] = u[1][0] * a0 + u[1][1] * a1;
        }
        base += 2 * stride;
    }
}

fn kernel_2q(buf: &mut [Complex64], pos_hi: usize, pos_lo: usize, u: &[[Complex64; 4]; 4]) {
    let (mhi, mlo) = (1usize << pos_hi, 1usize << pos_lo);
    let offsets = [0, mlo, mhi, mhi | mlo];
    for i in 0..buf.len() {
        if i & (mhi | mlo) != 0 {
            continue;
        }
        let a = offsets.map(|o| buf[i + o]);
        for (r, o) in offsets.iter().enumerate() {
            buf[i + o] = u[r][0] * a[0] + u[r][1] * a[1] + u[r][2] * a[2] + u[r][3] * a[3];
        }
    }
}

/// Applies a matrix to a flat buffer of `total_bits` qubits, where `sites`
/// are given as bit positions.
fn apply_fixed(buf: &mut [Complex64], positions: &[usize], m: &FixedMatrix) {
    match m {
        FixedMatrix::One(u) => kernel_1q(buf, positions[0], u),
        FixedMatrix::Two(u) => kernel_2q(buf, positions[0], positions[1], u),
    }
}

pub(crate) fn apply_gate_in_place(state: &mut StateVector, op: &GateOp) -> Result<()> {
    let m = state.num_qubits();
    op.check_range(m)?;
    let pos: Vec<usize> = op.targets().iter().map(|&q| bit_position(m, q)).collect();
    apply_fixed(state.amplitudes_mut(), &pos, &fixed_matrix(op.kind));
    Ok(())
}

pub fn apply_gate(state: &StateVector, op: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, op)?;
    Ok(out)
}

fn check_register(circuit: &Circuit, num_qubits: usize) -> Result<()> {
    if circuit.num_qubits != num_qubits {
        return Err(Error::DimensionMismatch {
            left: circuit.num_qubits,
            right: num_qubits,
        });
    }
    Ok(())
}

pub(crate) fn apply_circuit_in_place(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    check_register(circuit, state.num_qubits())?;
    for op in &circuit.ops {
        apply_gate_in_place(state, op)?;
    }
    Ok(())
}

pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = state.clone();
    apply_circuit_in_place(&mut out, circuit)?;
    Ok(out)
}

/// `ρ → UρU†` for a single op, acting on the row register with `U` and on
/// the column register with `U*`.
pub(crate) fn apply_gate_density_in_place(rho: &mut DensityMatrix, op: &GateOp) -> Result<()> {
    let m = rho.num_qubits();
    op.check_range(m)?;
    let u = fixed_matrix(op.kind);
    let rows: Vec<usize> = op
        .targets()
        .iter()
        .map(|&q| m + bit_position(m, q))
        .collect();
    let cols: Vec<usize> = op.targets().iter().map(|&q| bit_position(m, q)).collect();
    apply_fixed(rho.data_mut(), &rows, &u);
    apply_fixed(rho.data_mut(), &cols, &u.conj());
    Ok(())
}

pub fn apply_circuit_density(rho: &DensityMatrix, circuit: &Circuit) -> Result<DensityMatrix> {
    let m = rho.num_qubits();
    if m > MAX_DENSITY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "density-matrix evolution",
            max: MAX_DENSITY_QUBITS,
            actual: m,
        });
    }
    check_register(circuit, m)?;
    let mut out = rho.clone();
    for op in &circuit.ops {
        apply_gate_density_in_place(&mut out, op)?;
    }
    Ok(out)
}

/// `2^m × 2^m` matrix of `op` acting on an `m`-qubit register, built entry by
/// entry: `E[i][j] = U[local(i)][local(j)]` when `i` and `j` agree on every
/// non-target bit, zero otherwise.
pub fn embed_gate(op: &GateOp, num_qubits: usize) -> Result<CMatrix> {
    op.check_range(num_qubits)?;
    let u = gate_matrix(op.kind);
    let masks: Vec<usize> = op
        .targets()
        .iter()
        .map(|&q| 1usize << bit_position(num_qubits, q))
        .collect();
    let target_mask = masks.iter().fold(0, |acc, m| acc | m);
    let local = |idx: usize| {
        masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
    };
    let d = 1usize << num_qubits;
    Ok(CMatrix::from_fn(d, d, |i, j| {
        if (i & !target_mask) == (j & !target_mask) {
            u[(local(i), local(j))]
        } else {
            ZERO
        }
    }))
}

/// Dense unitary of the whole circuit (product of embedded gates in
/// application order).
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let m = circuit.num_qubits;
    if m > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            what: "circuit_unitary",
            max: MAX_UNITARY_QUBITS,
            actual: m,
        });
    }
    let d = 1usize << m;
    let mut acc = CMatrix::identity(d, d);
    for op in &circuit.ops {
        acc = embed_gate(op, m)? * acc;
    }
    Ok(acc)
}

/// `|tr(U†V)| / d ≥ 1 − tol`.
pub fn unitaries_equal_up_to_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<bool> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: v.nrows(),
        });
    }
    let d = u.nrows() as f64;
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(tr.norm() / d >= 1.0 - tol)
}
