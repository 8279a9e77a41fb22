//! Pauli strings with a tracked global phase in {1, i, -1, -i}.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{c, kron, pauli_i, pauli_x, pauli_y, pauli_z, CMat, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn matrix(self) -> CMat {
        match self {
            PauliLetter::I => pauli_i(),
            PauliLetter::X => pauli_x(),
            PauliLetter::Y => pauli_y(),
            PauliLetter::Z => pauli_z(),
        }
    }

    /// Single-qubit product: self * other = i^k * letter.
    fn mul(self, other: PauliLetter) -> (PauliLetter, u8) {
        use PauliLetter::*;
        match (self, other) {
            (I, p) => (p, 0),
            (p, I) => (p, 0),
            (a, b) if a == b => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
            _ => unreachable!(),
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch {
            'I' => Ok(PauliLetter::I),
            'X' => Ok(PauliLetter::X),
            'Y' => Ok(PauliLetter::Y),
            'Z' => Ok(PauliLetter::Z),
            _ => Err(Error::Validation(format!("unknown Pauli letter '{ch}'"))),
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        };
        write!(f, "{ch}")
    }
}

/// A tensor product of Pauli letters times a phase i^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    phase_pow: u8,
}

impl PauliString {
    /// String with phase +1.
    pub fn new(letters: Vec<PauliLetter>) -> Self {
        PauliString {
            letters,
            phase_pow: 0,
        }
    }

    /// String with phase i^phase_pow.
    pub fn with_phase(letters: Vec<PauliLetter>, phase_pow: u8) -> Self {
        PauliString {
            letters,
            phase_pow: phase_pow % 4,
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString::new(vec![PauliLetter::I; n_qubits])
    }

    /// Parses strings like "XIZ".
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::new(letters))
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    /// Count of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters
            .iter()
            .filter(|&&p| p != PauliLetter::I)
            .count()
    }

    /// Phase exponent k in i^k.
    pub fn phase_pow(&self) -> u8 {
        self.phase_pow
    }

    pub fn phase(&self) -> C {
        match self.phase_pow {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }

    /// Letter-wise product with phase accumulation.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::Dimension(format!(
                "Pauli strings on {} and {} qubits",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        let mut phase_pow = self.phase_pow + other.phase_pow;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (p, k) = a.mul(b);
                phase_pow += k;
                p
            })
            .collect();
        Ok(PauliString {
            letters,
            phase_pow: phase_pow % 4,
        })
    }

    /// Dense 2^n x 2^n matrix including the phase.
    pub fn matrix(&self) -> CMat {
        let mut m = crate::matrix::identity(1);
        for p in &self.letters {
            m = kron(&m, &p.matrix());
        }
        m * self.phase()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_pow {
            0 => "",
            1 => "i*",
            2 => "-",
            _ => "-i*",
        };
        write!(f, "{prefix}")?;
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
