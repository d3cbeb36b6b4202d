//! Transformations of ensembles: rotations of the sphere, column-stochastic
//! maps of the simplex, and the deterministic/non-deterministic split.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Quaternion, ScalarAlgebra};
use crate::density::{matrix_from_json, matrix_to_json};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::simplex::{event_projection, Event, ProbDist};
use crate::sphere::{born_decode, WaveFunction};
use crate::TOLERANCE;

/// Tolerance on `U†U − I`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

/// Tolerance on commutators and off-diagonal residues of `U P U†`; looser
/// than construction tolerances because it accumulates three matrix products.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;

/// Orthogonal (real) or unitary (complex, quaternionic) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalTransform {
    matrix: ScalarMatrix,
}

impl OrthogonalTransform {
    pub fn new(matrix: ScalarMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let gram = matrix.adjoint().matmul(&matrix)?;
        let defect = gram.sub(&ScalarMatrix::identity(matrix.algebra(), matrix.nrows()))?.max_abs();
        if defect > ORTHOGONALITY_TOLERANCE {
            return Err(Error::Validity(format!("matrix is not orthogonal: |U†U − I| = {defect:e}")));
        }
        Ok(OrthogonalTransform { matrix })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        OrthogonalTransform::new(ScalarMatrix::from_real(m))
    }

    pub fn identity(dim: usize) -> Self {
        OrthogonalTransform { matrix: ScalarMatrix::identity(ScalarAlgebra::Real, dim) }
    }

    /// Sends basis vector `l_k` to `l_{perm[k]}` (0-based image list).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &k in perm {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::Validity(format!("{perm:?} is not a permutation")));
            }
        }
        let matrix = ScalarMatrix::from_fn(ScalarAlgebra::Real, n, n, |r, c| {
            if perm[c] == r {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        });
        Ok(OrthogonalTransform { matrix })
    }

    /// `(1/√2)·[[1, 1], [1, −1]]`.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        OrthogonalTransform::from_real(&DMatrix::from_row_slice(2, 2, &[h, h, h, -h])).expect("orthogonal")
    }

    /// Unitary discrete Fourier transform, `U_{jk} = e^{−2πi·jk/N}/√N`.
    pub fn fourier(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, found: 0 });
        }
        let scale = 1.0 / (dim as f64).sqrt();
        let matrix = ScalarMatrix::from_fn(ScalarAlgebra::Complex, dim, dim, |r, c| {
            let angle = -2.0 * PI * ((r * c) % dim) as f64 / dim as f64;
            Quaternion::exp_imag(Quaternion::I, angle).scale(scale)
        });
        OrthogonalTransform::new(matrix)
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn algebra(&self) -> ScalarAlgebra {
        self.matrix.algebra()
    }

    pub fn adjoint(&self) -> OrthogonalTransform {
        OrthogonalTransform { matrix: self.matrix.adjoint() }
    }

    pub fn compose(&self, other: &OrthogonalTransform) -> Result<OrthogonalTransform> {
        Ok(OrthogonalTransform { matrix: self.matrix.matmul(&other.matrix)? })
    }

    /// `U·A·U†`.
    pub fn conjugate(&self, a: &ScalarMatrix) -> Result<ScalarMatrix> {
        self.matrix.matmul(a)?.matmul(&self.matrix.adjoint())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    matrix: Vec<Vec<serde_json::Value>>,
}

impl Serialize for OrthogonalTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { matrix: matrix_to_json(&self.matrix) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OrthogonalTransform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(deserializer)?;
        let m = matrix_from_json(&json.matrix).map_err(D::Error::custom)?;
        OrthogonalTransform::new(m).map_err(D::Error::custom)
    }
}

/// Non-negative real matrix whose columns sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    matrix: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Validity("stochastic matrix entries must be non-negative".into()));
        }
        for (c, col) in matrix.column_iter().enumerate() {
            let sum = col.sum();
            if (sum - 1.0).abs() > TOLERANCE {
                return Err(Error::Validity(format!("column {} sums to {sum}", c + 1)));
            }
        }
        Ok(StochasticMatrix { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, dist: &ProbDist) -> Result<ProbDist> {
        if dist.len() != self.matrix.ncols() {
            return Err(Error::Dimension { expected: self.matrix.ncols(), found: dist.len() });
        }
        let v = &self.matrix * nalgebra::DVector::from_row_slice(dist.as_slice());
        ProbDist::new(v.iter().copied().collect())
    }
}

/// Outcome of [`is_deterministic`]; `witness` is the 1-based elementary event
/// whose image `U P_w U†` fails to commute with the event projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Determinism {
    pub deterministic: bool,
    pub witness: Option<usize>,
}

/// `U = exp(a·[[0, −1], [1, 0]])`, so that `U·(1, 0)ᵀ = (cos a, sin a)ᵀ`.
pub fn clock_rotation(a: f64) -> OrthogonalTransform {
    let (s, c) = a.sin_cos();
    OrthogonalTransform { matrix: ScalarMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[c, -s, s, c])) }
}

/// `M(a, b) = [[cos² a, cos² b], [sin² a, sin² b]]`.
pub fn classical_map(a: f64, b: f64) -> StochasticMatrix {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    StochasticMatrix::new(DMatrix::from_row_slice(2, 2, &[ca * ca, cb * cb, sa * sa, sb * sb]))
        .expect("squared sine and cosine columns sum to one")
}

/// The column-stochastic map sending `input` to the point mass on the
/// 1-based `target`.
///
/// Every column `j` with `input_j > 0` is forced to be `l_target`, so the map
/// is unique exactly when `input` has full support; otherwise a validity
/// error is returned. For `N ≥ 2` the result has rank one and is singular.
pub fn map_onto_certainty(input: &ProbDist, target: usize) -> Result<StochasticMatrix> {
    let n = input.len();
    if target == 0 || target > n {
        return Err(Error::Range { index: target, dim: n });
    }
    if let Some(j) = input.as_slice().iter().position(|&p| p == 0.0) {
        return Err(Error::Validity(format!("column {} is unconstrained: input has no mass there", j + 1)));
    }
    let mut m = DMatrix::zeros(n, n);
    m.row_mut(target - 1).fill(1.0);
    StochasticMatrix::new(m)
}

/// `U·ψ`.
pub fn apply_to_wavefunction(u: &OrthogonalTransform, psi: &WaveFunction) -> Result<WaveFunction> {
    if u.dim() != psi.len() {
        return Err(Error::Dimension { expected: u.dim(), found: psi.len() });
    }
    let amps: Vec<Quaternion> = psi.amplitudes().collect();
    let out = u.matrix.apply(&amps)?;
    WaveFunction::from_scalars(u.algebra().join(psi.algebra()), &out)
}

/// Decides whether `U` maps events to events, i.e. `[P_A, U P_A U†] = 0`
/// for every event `A`.
///
/// For each elementary event `m` the image `U P_m U†` must commute with every
/// elementary projection, which for a rank-one projector means it is
/// diagonal. Then `U P_A U† = Σ_{m∈A} U P_m U†` is diagonal for every `A` and
/// commutes with `P_A`. Testing only `[P_m, U P_m U†]` is not enough: cross
/// terms `[P_n, U P_m U†]` can survive (see the tests). The witness is the
/// first elementary event whose image is not an event.
pub fn is_deterministic(u: &OrthogonalTransform) -> Determinism {
    let n = u.dim();
    for m in 1..=n {
        let image = u.conjugate(&elementary_projection(m, n)).expect("square");
        if image.sub(&image.diagonal_part()).expect("same shape").max_abs() >= COMMUTATOR_TOLERANCE {
            return Determinism { deterministic: false, witness: Some(m) };
        }
    }
    Determinism { deterministic: true, witness: None }
}

fn elementary_projection(m: usize, n: usize) -> ScalarMatrix {
    ScalarMatrix::from_real(event_projection(&Event::elementary(m).expect("m ≥ 1"), n).expect("m ≤ n").matrix())
}

/// Largest entry of the commutator `[P_A, U P_A U†]`.
pub fn event_commutator(u: &OrthogonalTransform, event: &Event) -> Result<f64> {
    let p = ScalarMatrix::from_real(event_projection(event, u.dim())?.matrix());
    let image = u.conjugate(&p)?;
    Ok(p.matmul(&image)?.sub(&image.matmul(&p)?)?.max_abs())
}

/// True when `ψ` and `φ` decode to the same distribution and have the same
/// squared overlaps `|ψ†l_n|² = |φ†l_n|²` with every basis vector.
pub fn gauge_equivalent(psi: &WaveFunction, phi: &WaveFunction) -> Result<bool> {
    if psi.len() != phi.len() {
        return Err(Error::Dimension { expected: psi.len(), found: phi.len() });
    }
    let (p, q) = (born_decode(psi)?, born_decode(phi)?);
    if p.max_abs_diff(&q) > crate::GAUGE_TOLERANCE {
        return Ok(false);
    }
    for n in 1..=psi.len() {
        let l = WaveFunction::basis(psi.len(), n)?;
        let a = l.inner(psi)?.norm_sqr();
        let b = l.inner(phi)?.norm_sqr();
        if (a - b).abs() > crate::GAUGE_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}
