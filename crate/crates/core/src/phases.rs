use std::fmt;
use std::path::PathBuf;

use crate::matrix::C64;
use crate::{Error, Result};

/// SplitMix64, used so seeded phase matrices are reproducible bit-for-bit in
/// any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Angle `2π·u/2^64` of the next output `u`.
    pub fn next_angle(&mut self) -> f64 {
        std::f64::consts::TAU * (self.next_u64() as f64 / 18_446_744_073_709_551_616.0)
    }
}

/// Where a phase parameter matrix came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseSource {
    Seed(u64),
    File(PathBuf),
    Ones,
    Explicit,
}

impl fmt::Display for PhaseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSource::Seed(s) => write!(f, "seed={s}"),
            PhaseSource::File(p) => write!(f, "file={}", p.display()),
            PhaseSource::Ones => f.write_str("ones"),
            PhaseSource::Explicit => f.write_str("explicit"),
        }
    }
}

/// An `M x N` matrix of unimodular numbers, stored through its angles.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseParameterMatrix {
    m: usize,
    n: usize,
    angles: Vec<f64>,
    phases: Vec<C64>,
    source: PhaseSource,
}

impl PhaseParameterMatrix {
    /// Builds from row-major angles in radians.
    pub fn from_angles(m: usize, n: usize, angles: Vec<f64>, source: PhaseSource) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("phase matrix dimensions must be positive".into()));
        }
        if angles.len() != m * n {
            return Err(Error::ShapeMismatch {
                expected: format!("{m}x{n} angles"),
                found: format!("{} angles", angles.len()),
            });
        }
        if let Some(k) = angles.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite { row: k / n, col: k % n });
        }
        let phases = angles.iter().map(|&t| C64::cis(t)).collect();
        Ok(PhaseParameterMatrix {
            m,
            n,
            angles,
            phases,
            source,
        })
    }

    /// All entries equal to 1.
    pub fn ones(m: usize, n: usize) -> Result<Self> {
        Self::from_angles(m, n, vec![0.0; m * n], PhaseSource::Ones)
    }

    /// Angles drawn row-major from SplitMix64 seeded with `seed`.
    pub fn seeded(m: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = SplitMix64::new(seed);
        let angles = (0..m * n).map(|_| rng.next_angle()).collect();
        Self::from_angles(m, n, angles, PhaseSource::Seed(seed))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &PhaseSource {
        &self.source
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `Q_{ib}`.
    #[inline]
    pub fn get(&self, i: usize, b: usize) -> C64 {
        self.phases[i * self.n + b]
    }

    pub fn angle(&self, i: usize, b: usize) -> f64 {
        self.angles[i * self.n + b]
    }

    /// `Q^t`, an `N x M` matrix.
    pub fn transpose(&self) -> Self {
        let angles = (0..self.n)
            .flat_map(|b| (0..self.m).map(move |i| (i, b)))
            .map(|(i, b)| self.angle(i, b))
            .collect();
        Self::from_angles(self.n, self.m, angles, PhaseSource::Explicit)
            .expect("transpose of a valid phase matrix is valid")
    }
}
