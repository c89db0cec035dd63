use std::fmt;

/// Single-qubit Pauli, phase dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Symplectic bits `(x, z)`: `Y` carries both.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl std::ops::Mul for Pauli {
    type Output = Pauli;

    /// Product up to phase.
    fn mul(self, other: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }
}

/// Pauli operator on the qubits of a chain, indexed by chain position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliString {
    pub fn identity(len: usize) -> Self {
        Self {
            x: vec![false; len],
            z: vec![false; len],
        }
    }

    /// Resets to the identity on `len` qubits, reusing the allocation.
    pub fn reset(&mut self, len: usize) {
        self.x.clear();
        self.x.resize(len, false);
        self.z.clear();
        self.z.resize(len, false);
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let (x, z) = letters.iter().map(|p| p.bits()).unzip();
        Self { x, z }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, pos: usize) -> Pauli {
        Pauli::from_bits(self.x[pos], self.z[pos])
    }

    pub fn set(&mut self, pos: usize, p: Pauli) {
        (self.x[pos], self.z[pos]) = p.bits();
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    /// `true` if any position carries `X` or `Y`, i.e. would flip a
    /// computational-basis measurement.
    pub fn has_bit_flip(&self) -> bool {
        self.x.iter().any(|&b| b)
    }

    /// Multiplies `p` onto positions `a` and `b` (phase dropped).
    pub fn apply_pair(&mut self, a: usize, pa: Pauli, b: usize, pb: Pauli) {
        let (ax, az) = pa.bits();
        let (bx, bz) = pb.bits();
        self.x[a] ^= ax;
        self.z[a] ^= az;
        self.x[b] ^= bx;
        self.z[b] ^= bz;
    }

    /// Conjugates by a CNOT in place: `X` on the control spreads to the
    /// target, `Z` on the target spreads to the control.
    pub fn conjugate_cnot(&mut self, control: usize, target: usize) {
        debug_assert_ne!(control, target);
        self.x[target] ^= self.x[control];
        self.z[control] ^= self.z[target];
    }
}

/// Image of `p` under conjugation by a CNOT between two chain positions.
pub fn pauli_conjugate_cnot(p: &PauliString, control_pos: usize, target_pos: usize) -> PauliString {
    assert!(control_pos != target_pos, "CNOT needs distinct positions");
    assert!(
        control_pos < p.len() && target_pos < p.len(),
        "CNOT position outside the string"
    );
    let mut out = p.clone();
    out.conjugate_cnot(control_pos, target_pos);
    out
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (0..self.len()).try_for_each(|i| write!(f, "{}", self.get(i).letter()))
    }
}
