//! Real, complex and quaternionic scalars, and the real-block embedding that
//! turns a wave-function over ℂ or ℍ into an ordinary real wave-function.
//!
//! All three algebras share one concrete scalar type, [`Quaternion`]: ℝ ⊂ ℂ ⊂ ℍ
//! are nested subalgebras (ℂ is spanned by `1, i`), so arithmetic done in ℍ
//! never leaves the subalgebra its operands live in. A [`ScalarAlgebra`] tag
//! records which subalgebra a value is declared to belong to and how many
//! real coordinates each scalar occupies.
//!
//! Real representation convention: a quaternion `q = a + b·i + c·j + d·k` is
//! stored with coordinates in the order `(1, i, j, k)` and acts on ℝ⁴ by left
//! multiplication, see [`Quaternion::left_matrix`]. Complex numbers use the
//! leading 2×2 block of the same matrix.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{collapse, pure_density};
use crate::error::{Error, Result};
use crate::simplex::ProbDist;
use crate::sphere::WaveFunction;
use crate::TOLERANCE;

/// The three real associative division algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarAlgebra {
    Real,
    Complex,
    Quaternion,
}

impl ScalarAlgebra {
    /// Number of real coordinates per scalar: 1, 2 or 4.
    pub const fn block_dim(self) -> usize {
        match self {
            ScalarAlgebra::Real => 1,
            ScalarAlgebra::Complex => 2,
            ScalarAlgebra::Quaternion => 4,
        }
    }

    /// Smallest algebra containing both operands.
    pub fn join(self, other: ScalarAlgebra) -> ScalarAlgebra {
        self.max(other)
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarAlgebra::Real => "real",
            ScalarAlgebra::Complex => "complex",
            ScalarAlgebra::Quaternion => "quaternion",
        }
    }
}

impl fmt::Display for ScalarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `w + x·i + y·j + z·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    /// Builds a scalar from the first `block_dim` coordinates of `coords`.
    pub fn from_coords(coords: &[f64]) -> Self {
        let mut c = [0.0; 4];
        c[..coords.len()].copy_from_slice(coords);
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn coords(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(self) -> f64 {
        self.coords().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Smallest algebra this value belongs to (exact zero test).
    pub fn algebra(self) -> ScalarAlgebra {
        if self.y != 0.0 || self.z != 0.0 {
            ScalarAlgebra::Quaternion
        } else if self.x != 0.0 {
            ScalarAlgebra::Complex
        } else {
            ScalarAlgebra::Real
        }
    }

    pub fn lies_in(self, algebra: ScalarAlgebra) -> bool {
        self.algebra() <= algebra
    }

    /// `e^{u·angle}` for a unit pure-imaginary `u`.
    pub fn exp_imag(axis: Quaternion, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Quaternion::new(c, axis.x * s, axis.y * s, axis.z * s)
    }

    /// The 4×4 real matrix `L(q)` with `L(q)·coords(p) = coords(q·p)`.
    pub fn left_matrix(self) -> Matrix4<f64> {
        let Quaternion { w: a, x: b, y: c, z: d } = self;
        #[rustfmt::skip]
        let m = Matrix4::new(
            a, -b, -c, -d,
            b,  a, -d,  c,
            c,  d,  a, -b,
            d, -c,  b,  a,
        );
        m
    }

    /// Left-multiplication matrix restricted to `algebra` (1×1, 2×2 or 4×4).
    pub fn block_matrix(self, algebra: ScalarAlgebra) -> DMatrix<f64> {
        let b = algebra.block_dim();
        let full = self.left_matrix();
        DMatrix::from_fn(b, b, |r, c| full[(r, c)])
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Quaternion::complex(z.re, z.im)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product (non-commutative).
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

/// Maps an `N`-dimensional wave-function over ℂ or ℍ to the `N·block_dim`
/// dimensional real wave-function of its coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockEmbedding {
    pub algebra: ScalarAlgebra,
    pub source_dim: usize,
}

impl BlockEmbedding {
    pub fn new(algebra: ScalarAlgebra, source_dim: usize) -> Self {
        BlockEmbedding { algebra, source_dim }
    }

    pub fn block_dim(&self) -> usize {
        self.algebra.block_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.source_dim * self.block_dim()
    }

    pub fn embed(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        if psi.len() != self.source_dim {
            return Err(Error::Dimension { expected: self.source_dim, found: psi.len() });
        }
        if psi.algebra() != self.algebra {
            return Err(Error::Algebra(format!(
                "embedding expects {} amplitudes, got {}",
                self.algebra,
                psi.algebra()
            )));
        }
        WaveFunction::real(psi.coords().to_vec())
    }

    /// Real block acting on the coordinates of amplitude `n` when that
    /// amplitude is left-multiplied by `q`.
    pub fn scalar_block(&self, q: Quaternion) -> Result<DMatrix<f64>> {
        if !q.lies_in(self.algebra) {
            return Err(Error::Algebra(format!("{q:?} is not in the {} algebra", self.algebra)));
        }
        Ok(q.block_matrix(self.algebra))
    }
}

/// Real coordinates of every amplitude, concatenated. Norm preserving.
pub fn embed_real(psi: &WaveFunction) -> WaveFunction {
    BlockEmbedding::new(psi.algebra(), psi.len())
        .embed(psi)
        .expect("embedding built from the wave-function itself")
}

/// Born rule over the algebra modulus: `p_n = |ψ_n|²`.
pub fn marginal_born(psi: &WaveFunction) -> Result<ProbDist> {
    psi.check_normalized()?;
    ProbDist::new(psi.amplitudes().map(Quaternion::norm_sqr).collect())
}

/// Sums a joint distribution `P(n, m)` over the inner index `m`, where the
/// outcomes are grouped in consecutive blocks of `block_dim`.
pub fn marginalize_blocks(joint: &ProbDist, block_dim: usize) -> Result<ProbDist> {
    if block_dim == 0 || !joint.len().is_multiple_of(block_dim) {
        return Err(Error::Dimension { expected: block_dim.max(1), found: joint.len() });
    }
    ProbDist::new(joint.as_slice().chunks(block_dim).map(|b| b.iter().sum()).collect())
}

/// Collapses the pure density of `psi` and checks that its real
/// representation is a real diagonal matrix whose diagonal blocks carry the
/// marginal probabilities `|ψ_n|²` (each repeated `block_dim` times).
pub fn collapse_diagonalizes(psi: &WaveFunction) -> Result<bool> {
    let rho = collapse(&pure_density(psi)?);
    let real = rho.matrix().real_representation();
    let marginal = marginal_born(psi)?;
    let b = psi.algebra().block_dim();

    for r in 0..real.nrows() {
        for c in 0..real.ncols() {
            if r != c && real[(r, c)].abs() > TOLERANCE {
                return Ok(false);
            }
        }
    }
    for (n, p) in marginal.as_slice().iter().enumerate() {
        let block_trace: f64 = (0..b).map(|m| real[(n * b + m, n * b + m)]).sum();
        if (block_trace / b as f64 - p).abs() > TOLERANCE {
            return Ok(false);
        }
        // each diagonal entry of the block is the same real number
        if (0..b).any(|m| (real[(n * b + m, n * b + m)] - p).abs() > TOLERANCE) {
            return Ok(false);
        }
    }
    Ok(true)
}
