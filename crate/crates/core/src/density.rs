//! Density matrices, their Euler-formula decomposition, and collapse.
//!
//! For a real 2-dimensional wave-function `ψ = (cos t, sin t)`
//!
//! ```text
//! ψψ† = ½·I + diag(½, −½)·(cos 2t + J·sin 2t),    J = [[0, 1], [−1, 0]]
//! ```
//!
//! and collapse keeps only the diagonal, i.e. the `cos 2t` ("real") part.
//! For `N` outcomes the same identity holds one level at a time along the
//! recursion `v_n = c_n·l_n + s_n·v_{n+1}`:
//!
//! ```text
//! v_n v_n† = c_n² l_n l_n† + s_n² v_{n+1} v_{n+1}† + c_n s_n (l_n v_{n+1}† + v_{n+1} l_n†)
//!          = ½Π_n + ½(l_n l_n† − v_{n+1} v_{n+1}†)(cos 2θ_n + J_n sin 2θ_n)
//! ```
//!
//! where `Π_n = l_n l_n† + v_{n+1} v_{n+1}†` projects onto the plane spanned by
//! `l_n, v_{n+1}` and `J_n = l_n v_{n+1}† − v_{n+1} l_n†`. Only the cross term
//! of the current level is dropped at each step; the cross terms inside
//! `v_{n+1} v_{n+1}†` are dropped when the recursion reaches them.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Quaternion, ScalarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::simplex::ProbDist;
use crate::sphere::{scalar_from_json, scalar_to_json, WaveFunction};
use crate::TOLERANCE;

/// Largest dimension for which construction verifies positivity through an
/// eigen-decomposition.
pub const PSD_CHECK_MAX_DIM: usize = 32;

/// Smallest eigenvalue accepted as "non-negative".
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Self-adjoint, positive semi-definite, unit-trace matrix over an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ScalarMatrix,
}

impl DensityMatrix {
    /// Checks self-adjointness and unit trace within 1e-12, and positivity
    /// (eigenvalues ≥ −1e-10) when the dimension is at most 32.
    pub fn new(matrix: ScalarMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let defect = matrix.self_adjoint_defect();
        if defect > TOLERANCE {
            return Err(Error::Validity(format!("density matrix is not self-adjoint (defect {defect:e})")));
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TOLERANCE {
            return Err(Error::Validity(format!("density matrix has trace {trace}, not 1")));
        }
        let rho = DensityMatrix { matrix };
        if rho.dim() <= PSD_CHECK_MAX_DIM {
            let min = rho.min_eigenvalue();
            if min < -PSD_TOLERANCE {
                return Err(Error::Validity(format!("density matrix has negative eigenvalue {min:e}")));
            }
        }
        Ok(rho)
    }

    /// `diag(p)`: the collapsed state of an ensemble with distribution `p`.
    pub fn from_distribution(dist: &ProbDist) -> Self {
        DensityMatrix { matrix: ScalarMatrix::diagonal(dist.as_slice()) }
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

    /// Real diagonal entries `ρ_nn`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].w).collect()
    }

    /// The diagonal read as a probability distribution.
    pub fn probabilities(&self) -> Result<ProbDist> {
        ProbDist::new(self.diagonal().into_iter().map(|p| p.max(0.0)).collect())
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Largest entry of `ρ² − ρ`; zero for pure states.
    pub fn idempotency_defect(&self) -> f64 {
        let sq = self.matrix.matmul(&self.matrix).expect("square");
        sq.sub(&self.matrix).expect("same shape").max_abs()
    }

    /// Smallest eigenvalue, computed on the symmetric real representation
    /// (each eigenvalue of ρ appears `block_dim` times there).
    pub fn min_eigenvalue(&self) -> f64 {
        let real = self.matrix.real_representation();
        let sym = (&real + real.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }

    /// `Tr(ρ·op)` (real part).
    pub fn expectation(&self, op: &ScalarMatrix) -> Result<f64> {
        Ok(self.matrix.matmul(op)?.trace())
    }
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    matrix: Vec<Vec<serde_json::Value>>,
}

/// Encodes a square matrix as `[[row], …]` with each entry in the scalar
/// encoding of the matrix's algebra.
pub(crate) fn matrix_to_json(m: &ScalarMatrix) -> Vec<Vec<serde_json::Value>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().map(|&q| scalar_to_json(q, m.algebra())).collect())
        .collect()
}

/// Parses `[[row], …]`, inferring the algebra from the first entry: a number
/// is real, a pair complex, a 4-tuple quaternionic.
pub(crate) fn matrix_from_json(rows: &[Vec<serde_json::Value>]) -> std::result::Result<ScalarMatrix, String> {
    let n = rows.len();
    if n == 0 {
        return Err("matrix must have at least one row".into());
    }
    let algebra = match &rows[0].first() {
        Some(serde_json::Value::Number(_)) => ScalarAlgebra::Real,
        Some(serde_json::Value::Array(a)) if a.len() == 2 => ScalarAlgebra::Complex,
        Some(serde_json::Value::Array(a)) if a.len() == 4 => ScalarAlgebra::Quaternion,
        other => return Err(format!("matrix[0][0]: unrecognized scalar {other:?}")),
    };
    let mut data = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!("matrix[{r}] has {} entries, expected {n}", row.len()));
        }
        for (c, v) in row.iter().enumerate() {
            data.push(scalar_from_json(v, algebra).map_err(|e| format!("matrix[{r}][{c}]: {e}"))?);
        }
    }
    ScalarMatrix::from_entries(algebra, n, n, data).map_err(|e| e.to_string())
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DensityJson { matrix: matrix_to_json(&self.matrix) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = DensityJson::deserialize(deserializer)?;
        let m = matrix_from_json(&json.matrix).map_err(D::Error::custom)?;
        DensityMatrix::new(m).map_err(D::Error::custom)
    }
}

/// Real antisymmetric generator `J = l·φ† − φ·l†` of rotations in the plane
/// spanned by two orthonormal vectors; squares to minus the plane projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryUnitOperator {
    matrix: DMatrix<f64>,
    plane: (DVector<f64>, DVector<f64>),
}

impl ImaginaryUnitOperator {
    pub fn between(l: &DVector<f64>, phi: &DVector<f64>) -> Result<Self> {
        if l.len() != phi.len() {
            return Err(Error::Dimension { expected: l.len(), found: phi.len() });
        }
        let overlap = l.dot(phi);
        if (l.norm_squared() - 1.0).abs() > TOLERANCE
            || (phi.norm_squared() - 1.0).abs() > TOLERANCE
            || overlap.abs() > TOLERANCE
        {
            return Err(Error::Validity("plane vectors must be orthonormal".into()));
        }
        let matrix = l * phi.transpose() - phi * l.transpose();
        Ok(ImaginaryUnitOperator { matrix, plane: (l.clone(), phi.clone()) })
    }

    /// `[[0, 1], [−1, 0]]`.
    pub fn standard_2d() -> Self {
        let l = DVector::from_row_slice(&[1.0, 0.0]);
        let phi = DVector::from_row_slice(&[0.0, 1.0]);
        ImaginaryUnitOperator::between(&l, &phi).expect("orthonormal")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn plane_projector(&self) -> DMatrix<f64> {
        let (l, phi) = &self.plane;
        l * l.transpose() + phi * phi.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        (&self.matrix + self.matrix.transpose()).amax() <= TOLERANCE
    }

    /// Largest entry of `J² + Π`.
    pub fn square_defect(&self) -> f64 {
        (&self.matrix * &self.matrix + self.plane_projector()).amax()
    }
}

/// `ψψ† = mean + axis·(phase_cos·I + phase_sin·J)` for `ψ = (cos t, sin t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerDecomposition {
    pub mean: DMatrix<f64>,
    pub axis: DMatrix<f64>,
    pub phase_cos: f64,
    pub phase_sin: f64,
    pub j: ImaginaryUnitOperator,
}

impl EulerDecomposition {
    pub fn reassemble(&self) -> DMatrix<f64> {
        let phase = DMatrix::identity(2, 2) * self.phase_cos + self.j.matrix() * self.phase_sin;
        &self.mean + &self.axis * phase
    }

    /// Only the "real part" survives: `mean + axis·phase_cos`.
    pub fn collapsed(&self) -> DMatrix<f64> {
        &self.mean + &self.axis * self.phase_cos
    }
}

/// Rank-one projector `ψψ†`.
pub fn pure_density(psi: &WaveFunction) -> Result<DensityMatrix> {
    psi.check_normalized()?;
    let amps: Vec<Quaternion> = psi.amplitudes().collect();
    let n = amps.len();
    let matrix = ScalarMatrix::from_fn(psi.algebra(), n, n, |r, c| amps[r] * amps[c].conj());
    Ok(DensityMatrix { matrix })
}

/// Zeroes every off-diagonal entry in the measurement basis.
pub fn collapse(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix { matrix: rho.matrix.diagonal_part() }
}

pub fn euler_decompose_2d(psi: &WaveFunction) -> Result<EulerDecomposition> {
    if psi.len() != 2 {
        return Err(Error::Dimension { expected: 2, found: psi.len() });
    }
    if psi.algebra() != ScalarAlgebra::Real {
        return Err(Error::Algebra(format!("expected a real wave-function, got {}", psi.algebra())));
    }
    psi.check_normalized()?;
    let (c, s) = (psi.coords()[0], psi.coords()[1]);
    Ok(EulerDecomposition {
        mean: DMatrix::identity(2, 2) * 0.5,
        axis: DMatrix::from_diagonal(&DVector::from_row_slice(&[0.5, -0.5])),
        // cos 2t and sin 2t by the double-angle identities
        phase_cos: c * c - s * s,
        phase_sin: 2.0 * c * s,
        j: ImaginaryUnitOperator::standard_2d(),
    })
}

/// One step `v_n = c_n·l_n + s_n·v_{n+1}` of the recursion, with the vectors
/// written out in the full `N`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionLevel {
    /// 1-based level `n`.
    pub index: usize,
    pub cos: f64,
    pub sin: f64,
    /// `l_n`.
    pub head: DVector<f64>,
    /// `v_{n+1}`, a unit vector orthogonal to `l_1 … l_n`.
    pub tail: DVector<f64>,
}

impl RecursionLevel {
    /// `v_n = c_n l_n + s_n v_{n+1}`.
    pub fn vector(&self) -> DVector<f64> {
        &self.head * self.cos + &self.tail * self.sin
    }

    /// `v_n v_n†`.
    pub fn density(&self) -> DMatrix<f64> {
        let v = self.vector();
        &v * v.transpose()
    }

    /// Term-by-term expansion with the cross term `c s (l v† + v l†)`.
    pub fn expansion(&self) -> DMatrix<f64> {
        let (l, v) = (&self.head, &self.tail);
        let (c, s) = (self.cos, self.sin);
        l * l.transpose() * (c * c) + v * v.transpose() * (s * s) + (l * v.transpose() + v * l.transpose()) * (c * s)
    }

    pub fn imaginary_unit(&self) -> ImaginaryUnitOperator {
        ImaginaryUnitOperator::between(&self.head, &self.tail).expect("recursion vectors are orthonormal")
    }

    /// `½Π + ½(l l† − v v†)(cos 2θ + J sin 2θ)`.
    pub fn euler_form(&self) -> DMatrix<f64> {
        let (l, v) = (&self.head, &self.tail);
        let j = self.imaginary_unit();
        let n = l.len();
        let (c, s) = (self.cos, self.sin);
        let axis = l * l.transpose() - v * v.transpose();
        let phase = DMatrix::identity(n, n) * (c * c - s * s) + j.matrix() * (2.0 * c * s);
        j.plane_projector() * 0.5 + axis * phase * 0.5
    }

    /// `c_n² l_n l_n† + s_n² v_{n+1} v_{n+1}†`: this level's cross term removed.
    pub fn collapsed(&self) -> DMatrix<f64> {
        let (l, v) = (&self.head, &self.tail);
        l * l.transpose() * (self.cos * self.cos) + v * v.transpose() * (self.sin * self.sin)
    }
}

/// Tail norms `r_n = ‖(x_n, …, x_N)‖`, with a trailing zero.
fn tail_norms(x: &[f64]) -> Vec<f64> {
    let mut sq = vec![0.0; x.len() + 1];
    for k in (0..x.len()).rev() {
        sq[k] = sq[k + 1] + x[k] * x[k];
    }
    sq.into_iter().map(f64::sqrt).collect()
}

/// The `N − 1` levels of the recursion for a real unit vector. A vanishing
/// tail continues with `v_{n+1} = l_{n+1}` and `θ_n = 0`.
pub fn recursion_levels(psi: &WaveFunction) -> Result<Vec<RecursionLevel>> {
    if psi.algebra() != ScalarAlgebra::Real {
        return Err(Error::Algebra(format!("expected a real wave-function, got {}", psi.algebra())));
    }
    psi.check_normalized()?;
    let x = psi.coords();
    let n = x.len();
    let r = tail_norms(x);
    let unit = |k: usize| {
        let mut e = DVector::zeros(n);
        e[k] = 1.0;
        e
    };
    let levels = (0..n.saturating_sub(1))
        .map(|k| {
            let tail = if r[k + 1] > 0.0 {
                let mut v = DVector::zeros(n);
                for i in k + 1..n {
                    v[i] = x[i] / r[k + 1];
                }
                v
            } else {
                unit(k + 1)
            };
            let (cos, sin) = if r[k] > 0.0 { (x[k] / r[k], r[k + 1] / r[k]) } else { (1.0, 0.0) };
            RecursionLevel { index: k + 1, cos, sin, head: unit(k), tail }
        })
        .collect();
    Ok(levels)
}

/// Born probabilities obtained by collapsing one 2-dimensional real block
/// per level: level `n` splits the remaining mass into `c_n²` (outcome `n`)
/// and `s_n²` (outcomes above `n`).
///
/// Complex and quaternionic inputs are first replaced by the real vector of
/// amplitude moduli, which decodes to the same distribution.
pub fn recursive_collapse(psi: &WaveFunction) -> Result<ProbDist> {
    let real = match psi.algebra() {
        ScalarAlgebra::Real => psi.clone(),
        _ => WaveFunction::real(psi.amplitudes().map(Quaternion::norm).collect())?,
    };
    let levels = recursion_levels(&real)?;
    let mut probs = Vec::with_capacity(real.len());
    let mut remaining = 1.0;
    for level in &levels {
        let block = WaveFunction::real(vec![level.cos, level.sin])?;
        let split = collapse(&pure_density(&block)?).diagonal();
        probs.push(remaining * split[0]);
        remaining *= split[1];
    }
    probs.push(remaining);
    ProbDist::new(probs)
}
