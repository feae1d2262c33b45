// Copyright 2026 The pauliflow Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Pauli strings and their conjugation rules.
//!
//! Conjugation is always taken in the Heisenberg direction `U† P U`, so an
//! observable is pulled backwards through a circuit one layer at a time. The
//! T gate is `diag(1, e^{iπ/4})`, which gives `T† X T = (X − Y)/√2`.
//!
//! Letters are stored as two bit masks per string with the encoding
//! `(x, z)`: `00 = I`, `10 = X`, `11 = Y`, `01 = Z`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use smallvec::{smallvec, SmallVec};

use crate::error::{invalid, Error, Result};

type Words = SmallVec<[u64; 2]>;

/// Coefficients below this magnitude are dropped when expanding a generic gate.
pub const COEFF_ZERO: f64 = 1e-12;
/// Maximum imaginary residue tolerated in a transition amplitude.
pub const IMAG_TOL: f64 = 1e-10;
/// Tolerance used when checking that a matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A single-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    /// Position in `[I, X, Y, Z]`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' | '_' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// The 2×2 matrix of this letter.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Letter::I => [[l, o], [o, l]],
            Letter::X => [[o, l], [l, o]],
            Letter::Y => [[o, -i], [i, o]],
            Letter::Z => [[l, o], [o, -l]],
        }
    }
}

/// An n-qubit tensor product of Pauli letters, bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Words,
    z: Words,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            x: smallvec![0; words],
            z: smallvec![0; words],
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    /// Builds a string from `(qubit, letter)` pairs; unlisted qubits are `I`.
    pub fn from_sparse(n: usize, sites: &[(usize, Letter)]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &(q, l) in sites {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            p.set(q, l);
        }
        Ok(p)
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self> {
        Self::from_sparse(n, &[(qubit, letter)])
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn letter(&self, q: usize) -> Letter {
        let (w, b) = (q / 64, q % 64);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    #[inline]
    pub fn set(&mut self, q: usize, letter: Letter) {
        let (w, b) = (q / 64, q % 64);
        let (x, z) = letter.bits();
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !mask) | ((z as u64) << b);
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Indices of the non-identity sites, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.letter(q) != Letter::I)
            .collect()
    }

    pub fn x_mask(&self) -> &[u64] {
        &self.x
    }

    pub fn z_mask(&self) -> &[u64] {
        &self.z
    }

    /// Local index `Σ letter(q_i)·4^i` of the letters on `qubits`.
    pub(crate) fn local_index(&self, qubits: &[usize]) -> usize {
        qubits
            .iter()
            .enumerate()
            .map(|(i, &q)| self.letter(q).index() << (2 * i))
            .sum()
    }

    pub(crate) fn set_local_index(&mut self, qubits: &[usize], index: usize) {
        for (i, &q) in qubits.iter().enumerate() {
            self.set(q, Letter::from_index(index >> (2 * i)));
        }
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Dense form: one letter per qubit, qubit 0 first (`"XIZ"`).
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Letter::from_char(c).ok_or_else(|| invalid(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&letters))
    }
}

pub fn weight(p: &PauliString) -> usize {
    p.weight()
}

/// A real multiple of a Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedPauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

impl SignedPauliTerm {
    pub fn new(coeff: f64, string: PauliString) -> Self {
        Self { coeff, string }
    }
}

/// The named Clifford gates understood by the conjugation rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    /// Qubit order is `[control, target]`.
    Cnot,
    Cz,
    Swap,
}

impl CliffordGate {
    pub const SINGLE_QUBIT: [CliffordGate; 6] = [
        CliffordGate::H,
        CliffordGate::S,
        CliffordGate::Sdg,
        CliffordGate::X,
        CliffordGate::Y,
        CliffordGate::Z,
    ];
    pub const TWO_QUBIT: [CliffordGate; 3] = [CliffordGate::Cnot, CliffordGate::Cz, CliffordGate::Swap];

    pub fn arity(self) -> usize {
        match self {
            CliffordGate::Cnot | CliffordGate::Cz | CliffordGate::Swap => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CliffordGate::H => "H",
            CliffordGate::S => "S",
            CliffordGate::Sdg => "Sdg",
            CliffordGate::X => "X",
            CliffordGate::Y => "Y",
            CliffordGate::Z => "Z",
            CliffordGate::Cnot => "CNOT",
            CliffordGate::Cz => "CZ",
            CliffordGate::Swap => "SWAP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "H" => CliffordGate::H,
            "S" => CliffordGate::S,
            "Sdg" | "S†" | "SDG" | "Sdag" => CliffordGate::Sdg,
            "X" => CliffordGate::X,
            "Y" => CliffordGate::Y,
            "Z" => CliffordGate::Z,
            "CNOT" | "CX" => CliffordGate::Cnot,
            "CZ" => CliffordGate::Cz,
            "SWAP" => CliffordGate::Swap,
            _ => return None,
        })
    }

    /// Explicit unitary, with support qubit `i` on bit `i` of the local basis index.
    pub fn unitary(self) -> UnitaryMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = match self {
            CliffordGate::H => DMatrix::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)]),
            CliffordGate::S => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]),
            CliffordGate::Sdg => DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., -1.)]),
            CliffordGate::X | CliffordGate::Y | CliffordGate::Z => {
                let l = match self {
                    CliffordGate::X => Letter::X,
                    CliffordGate::Y => Letter::Y,
                    _ => Letter::Z,
                }
                .matrix();
                DMatrix::from_row_slice(2, 2, &[l[0][0], l[0][1], l[1][0], l[1][1]])
            }
            CliffordGate::Cnot => DMatrix::from_fn(4, 4, |r, col| {
                // control = bit 0, target = bit 1
                let image = if col & 1 == 1 { col ^ 2 } else { col };
                c((r == image) as u8 as f64, 0.)
            }),
            CliffordGate::Cz => DMatrix::from_fn(4, 4, |r, col| {
                let v = if r != col { 0. } else if r == 3 { -1. } else { 1. };
                c(v, 0.)
            }),
            CliffordGate::Swap => DMatrix::from_fn(4, 4, |r, col| {
                let image = ((col & 1) << 1) | (col >> 1);
                c((r == image) as u8 as f64, 0.)
            }),
        };
        UnitaryMatrix { matrix: m, qubits: self.arity() }
    }
}

fn conj_single(gate: CliffordGate, l: Letter) -> (f64, Letter) {
    use Letter::*;
    match (gate, l) {
        (_, I) => (1.0, I),
        (CliffordGate::H, X) => (1.0, Z),
        (CliffordGate::H, Z) => (1.0, X),
        (CliffordGate::H, Y) => (-1.0, Y),
        (CliffordGate::S, X) => (-1.0, Y),
        (CliffordGate::S, Y) => (1.0, X),
        (CliffordGate::Sdg, X) => (1.0, Y),
        (CliffordGate::Sdg, Y) => (-1.0, X),
        (CliffordGate::S | CliffordGate::Sdg, Z) => (1.0, Z),
        (CliffordGate::X, X) | (CliffordGate::Y, Y) | (CliffordGate::Z, Z) => (1.0, l),
        (CliffordGate::X | CliffordGate::Y | CliffordGate::Z, _) => (-1.0, l),
        _ => unreachable!("two-qubit gate in single-qubit rule"),
    }
}

/// `U† p U` for a named Clifford gate acting on `qubits`.
pub fn conjugate_clifford(gate: CliffordGate, qubits: &[usize], p: &PauliString) -> Result<SignedPauliTerm> {
    if qubits.len() != gate.arity() {
        return Err(Error::Arity {
            gate: gate.name().into(),
            expected: gate.arity(),
            got: qubits.len(),
        });
    }
    p.check_qubits(qubits)?;
    let mut out = p.clone();
    let coeff = conjugate_clifford_in_place(gate, qubits, &mut out);
    Ok(SignedPauliTerm::new(coeff, out))
}

/// In-place version used by the path engine; qubits must already be validated.
pub(crate) fn conjugate_clifford_in_place(gate: CliffordGate, qubits: &[usize], p: &mut PauliString) -> f64 {
    if gate.arity() == 1 {
        let (s, l) = conj_single(gate, p.letter(qubits[0]));
        p.set(qubits[0], l);
        return s;
    }
    let (a, b) = (qubits[0], qubits[1]);
    let (xa, za) = p.letter(a).bits();
    let (xb, zb) = p.letter(b).bits();
    let (nxa, nza, nxb, nzb, flip) = match gate {
        // X_c -> X_c X_t, Z_t -> Z_c Z_t
        CliffordGate::Cnot => (xa, za ^ zb, xb ^ xa, zb, xa && zb && (xb == za)),
        // X_a -> X_a Z_b, X_b -> Z_a X_b
        CliffordGate::Cz => (xa, za ^ xb, xb, zb ^ xa, xa && xb && (za != zb)),
        CliffordGate::Swap => (xb, zb, xa, za, false),
        _ => unreachable!(),
    };
    p.set(a, Letter::from_bits(nxa, nza));
    p.set(b, Letter::from_bits(nxb, nzb));
    if flip {
        -1.0
    } else {
        1.0
    }
}

/// `T† p T` on one qubit: X and Y split into two terms, I and Z pass through.
pub fn branch_t(qubit: usize, p: &PauliString) -> Result<Vec<SignedPauliTerm>> {
    p.check_qubits(&[qubit])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let with = |l: Letter| {
        let mut s = p.clone();
        s.set(qubit, l);
        s
    };
    Ok(match p.letter(qubit) {
        Letter::I | Letter::Z => vec![SignedPauliTerm::new(1.0, p.clone())],
        Letter::X => vec![
            SignedPauliTerm::new(h, with(Letter::X)),
            SignedPauliTerm::new(-h, with(Letter::Y)),
        ],
        Letter::Y => vec![
            SignedPauliTerm::new(h, with(Letter::Y)),
            SignedPauliTerm::new(h, with(Letter::X)),
        ],
    })
}

/// `diag(1, e^{iπ/4})`.
pub fn t_matrix() -> UnitaryMatrix {
    let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(1., 0.), Complex64::new(0., 0.), Complex64::new(0., 0.), phase],
    );
    UnitaryMatrix { matrix: m, qubits: 1 }
}

/// A validated unitary on 1 to 3 qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: DMatrix<Complex64>,
    qubits: usize,
}

impl UnitaryMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !matches!(dim, 2 | 4 | 8) {
            return Err(Error::BadMatrixDimension(dim.max(matrix.ncols())));
        }
        let deviation = (matrix.adjoint() * &matrix - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self {
            matrix,
            qubits: dim.trailing_zeros() as usize,
        })
    }

    /// Builds from row-major entries.
    pub fn from_row_major(entries: &[Complex64]) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::BadMatrixDimension(entries.len()));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// `exp(-i θ/2 P)` for a single-qubit Pauli `P`.
    pub fn rotation(axis: Letter, theta: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let p = axis.matrix();
        let m = DMatrix::from_fn(2, 2, |r, col| {
            let id = if r == col { c } else { 0.0 };
            Complex64::new(id, 0.0) - Complex64::new(0.0, s) * p[r][col]
        });
        Self { matrix: m, qubits: 1 }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|i| self.matrix[(i / d, i % d)]).collect()
    }
}

/// Matrix of a local Pauli string given by its local index.
fn local_pauli_matrix(index: usize, qubits: usize) -> DMatrix<Complex64> {
    let dim = 1 << qubits;
    let letters: Vec<_> = (0..qubits).map(|i| Letter::from_index(index >> (2 * i)).matrix()).collect();
    DMatrix::from_fn(dim, dim, |r, c| {
        letters
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (i, m)| acc * m[(r >> i) & 1][(c >> i) & 1])
    })
}

/// Pauli transfer map of one gate: for every local input string, the
/// nonzero expansion coefficients of `U† s U`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTransfer {
    qubits: usize,
    rows: Vec<Vec<(f64, u16)>>,
}

impl PauliTransfer {
    pub fn from_unitary(u: &UnitaryMatrix) -> Result<Self> {
        let d = u.num_qubits();
        let size = 1usize << (2 * d);
        let dim = (1usize << d) as f64;
        let mats: Vec<_> = (0..size).map(|i| local_pauli_matrix(i, d)).collect();
        let adj = u.matrix.adjoint();
        let mut rows = Vec::with_capacity(size);
        for input in &mats {
            let image = &adj * input * &u.matrix;
            let mut row = Vec::new();
            for (j, out) in mats.iter().enumerate() {
                // tr(s' M) with s' Hermitian
                let c = (out * &image).trace() / dim;
                if c.im.abs() > IMAG_TOL {
                    return Err(Error::ImaginaryAmplitude(c.im.abs()));
                }
                if c.re.abs() >= COEFF_ZERO {
                    row.push((c.re, j as u16));
                }
            }
            rows.push(row);
        }
        Ok(Self { qubits: d, rows })
    }

    /// Builds the table of a named Clifford from its symbolic rule.
    pub fn from_clifford(gate: CliffordGate) -> Self {
        let d = gate.arity();
        let qubits: Vec<usize> = (0..d).collect();
        let rows = (0..1usize << (2 * d))
            .map(|i| {
                let mut p = PauliString::identity(d);
                p.set_local_index(&qubits, i);
                let s = conjugate_clifford_in_place(gate, &qubits, &mut p);
                vec![(s, p.local_index(&qubits) as u16)]
            })
            .collect();
        Self { qubits: d, rows }
    }

    /// Builds the T-gate table from `branch_t`.
    pub fn t_gate() -> Self {
        let rows = (0..4)
            .map(|i| {
                let p = PauliString::from_letters(&[Letter::from_index(i)]);
                branch_t(0, &p)
                    .expect("qubit 0 exists")
                    .into_iter()
                    .map(|t| (t.coeff, t.string.local_index(&[0]) as u16))
                    .collect()
            })
            .collect();
        Self { qubits: 1, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    /// Expansion of the local input string `index`.
    #[inline]
    pub fn row(&self, index: usize) -> &[(f64, u16)] {
        &self.rows[index]
    }

    /// True when every Pauli maps to a single Pauli (the gate is Clifford).
    pub fn is_clifford(&self) -> bool {
        self.rows.iter().all(|r| r.len() == 1)
    }

    pub fn max_branching(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(1)
    }
}

/// `U† p U` for an explicit unitary on `qubits`, expanded in the Pauli basis.
pub fn conjugate_generic(u: &UnitaryMatrix, qubits: &[usize], p: &PauliString) -> Result<Vec<SignedPauliTerm>> {
    if qubits.len() != u.num_qubits() {
        return Err(Error::Arity {
            gate: "U".into(),
            expected: u.num_qubits(),
            got: qubits.len(),
        });
    }
    p.check_qubits(qubits)?;
    let table = PauliTransfer::from_unitary(u)?;
    Ok(table
        .row(p.local_index(qubits))
        .iter()
        .map(|&(c, j)| {
            let mut s = p.clone();
            s.set_local_index(qubits, j as usize);
            SignedPauliTerm::new(c, s)
        })
        .collect())
}

/// A product of single-qubit states, each given by its Bloch vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    bloch: Vec<[f64; 3]>,
}

impl ProductState {
    pub fn new(bloch: Vec<[f64; 3]>) -> Result<Self> {
        for (q, r) in bloch.iter().enumerate() {
            let norm2: f64 = r.iter().map(|c| c * c).sum();
            if !norm2.is_finite() || norm2 > 1.0 + 1e-9 {
                return Err(invalid(format!("Bloch vector of qubit {q} has length² {norm2} > 1")));
            }
        }
        Ok(Self { bloch })
    }

    /// `|0…0⟩`.
    pub fn zeros(n: usize) -> Self {
        Self {
            bloch: vec![[0.0, 0.0, 1.0]; n],
        }
    }

    /// `|+…+⟩`.
    pub fn plus(n: usize) -> Self {
        Self {
            bloch: vec![[1.0, 0.0, 0.0]; n],
        }
    }

    /// Computational basis state; `bits[q]` set means qubit q is `|1⟩`.
    pub fn basis(bits: &[bool]) -> Self {
        Self {
            bloch: bits.iter().map(|&b| [0.0, 0.0, if b { -1.0 } else { 1.0 }]).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.bloch.len()
    }

    pub fn bloch(&self) -> &[[f64; 3]] {
        &self.bloch
    }

    /// `tr(p ρ)`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: p.num_qubits(),
            });
        }
        Ok(self.expectation_unchecked(p))
    }

    pub(crate) fn expectation_unchecked(&self, p: &PauliString) -> f64 {
        let mut v = 1.0;
        for (q, r) in self.bloch.iter().enumerate() {
            v *= match p.letter(q) {
                Letter::I => 1.0,
                Letter::X => r[0],
                Letter::Y => r[1],
                Letter::Z => r[2],
            };
            if v == 0.0 {
                break;
            }
        }
        v
    }
}

pub fn product_state_expectation(state: &ProductState, p: &PauliString) -> Result<f64> {
    state.expectation(p)
}

/// A real linear combination of distinct Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some(n) = terms.first().map(|(_, p)| p.num_qubits()) else {
            return Err(invalid("observable has no terms"));
        };
        for (i, (a, p)) in terms.iter().enumerate() {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.num_qubits(),
                });
            }
            if !a.is_finite() {
                return Err(invalid(format!("term {i} has non-finite coefficient")));
            }
            if terms[..i].iter().any(|(_, o)| o == p) {
                return Err(invalid(format!("duplicate term {p}")));
            }
        }
        Ok(Self { terms })
    }

    /// Like [`Observable::new`] with an upper bound on the term count.
    pub fn with_limit(terms: Vec<(f64, PauliString)>, max_terms: usize) -> Result<Self> {
        if terms.len() > max_terms {
            return Err(Error::TooLarge {
                what: "observable term count",
                size: terms.len(),
                limit: max_terms,
            });
        }
        Self::new(terms)
    }

    pub fn single(p: PauliString) -> Self {
        Self { terms: vec![(1.0, p)] }
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.terms[0].1.num_qubits()
    }

    /// `sqrt(Σ a_k²)`, a lower bound on the operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a * a).sum::<f64>().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.abs()).sum()
    }

    /// Parses `"1.0:Z0Z1, -0.5:X2"` (sparse, qubit indices) or `"ZZI"` (dense) forms.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for chunk in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let (coeff, body) = match chunk.split_once(':') {
                Some((c, b)) => (
                    c.trim().parse::<f64>().map_err(|_| invalid(format!("bad coefficient in {chunk:?}")))?,
                    b.trim(),
                ),
                None => (1.0, chunk),
            };
            terms.push((coeff, parse_pauli(n, body)?));
        }
        Self::new(terms)
    }
}

/// Parses either a dense string of length n or a sparse `Z0X3` form.
pub fn parse_pauli(n: usize, body: &str) -> Result<PauliString> {
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.chars().any(|c| c.is_ascii_digit()) {
        let mut sites = Vec::new();
        let mut chars = compact.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = Letter::from_char(c).ok_or_else(|| invalid(format!("bad Pauli letter {c:?}")))?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q = digits
                .parse::<usize>()
                .map_err(|_| invalid(format!("missing qubit index after {c}")))?;
            sites.push((q, letter));
        }
        PauliString::from_sparse(n, &sites)
    } else {
        let p: PauliString = compact.parse()?;
        if p.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.num_qubits(),
            });
        }
        Ok(p)
    }
}
