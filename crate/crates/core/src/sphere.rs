//! Hyperspherical parametrization of the probability simplex.
//!
//! A distribution `p` over `N` outcomes is carried by a unit vector `ψ` with
//! `p_n = |ψ_n|²`. In Euler angles the vector is built by the recursion
//! `v_n = c_n·l_n + s_n·v_{n+1}` (with `c_n = cos θ_n`, `s_n = sin θ_n` and
//! `l_n` the n-th basis vector), which unrolls to
//!
//! ```text
//! ψ_n = c_n · s_1 ⋯ s_{n-1}     (n < N)
//! ψ_N = s_1 ⋯ s_{N-1}
//! ```
//!
//! The map from the sphere onto the simplex is many-to-one. [`encode`] picks
//! the canonical section: every `θ_n ∈ [0, π/2]`, hence every amplitude is
//! non-negative. When the tail mass `Σ_{k≥n} p_k` vanishes the conditional
//! `c_n² = P(n | n or above)` is undefined; `θ_n = 0` is used there.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Quaternion, ScalarAlgebra};
use crate::error::{Error, Result};
use crate::simplex::ProbDist;
use crate::{RENORMALIZE_TOLERANCE, TOLERANCE};

/// `N − 1` hyperspherical angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub theta: Vec<f64>,
}

impl EulerAngles {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Validity("angles must be finite".into()));
        }
        Ok(EulerAngles { theta })
    }

    /// Dimension of the wave-function these angles generate.
    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    /// Every angle in `[0, π/2]`.
    pub fn is_canonical(&self) -> bool {
        self.theta.iter().all(|t| (0.0..=std::f64::consts::FRAC_PI_2).contains(t))
    }
}

/// A unit vector whose amplitudes live in a [`ScalarAlgebra`].
///
/// Stored as the flat list of real coordinates, `block_dim` per amplitude,
/// which is exactly its real-block embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    algebra: ScalarAlgebra,
    coords: Vec<f64>,
}

impl WaveFunction {
    /// Accepts `coords` (`block_dim` real coordinates per amplitude) when the
    /// squared norm is within 1e-9 of one, rescaling if it is off by more
    /// than 1e-12.
    pub fn new(algebra: ScalarAlgebra, coords: Vec<f64>) -> Result<Self> {
        Self::check_shape(algebra, &coords)?;
        let norm_sqr: f64 = coords.iter().map(|c| c * c).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > RENORMALIZE_TOLERANCE {
            return Err(Error::Normalization { norm_sqr });
        }
        let coords = if deviation > TOLERANCE {
            let norm = norm_sqr.sqrt();
            coords.into_iter().map(|c| c / norm).collect()
        } else {
            coords
        };
        Ok(WaveFunction { algebra, coords })
    }

    /// Scales any non-zero vector onto the unit sphere.
    pub fn normalized(algebra: ScalarAlgebra, coords: Vec<f64>) -> Result<Self> {
        Self::check_shape(algebra, &coords)?;
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Normalization { norm_sqr: norm * norm });
        }
        Ok(WaveFunction { algebra, coords: coords.into_iter().map(|c| c / norm).collect() })
    }

    pub fn real(amplitudes: Vec<f64>) -> Result<Self> {
        WaveFunction::new(ScalarAlgebra::Real, amplitudes)
    }

    pub fn complex(amplitudes: &[Complex64]) -> Result<Self> {
        WaveFunction::new(ScalarAlgebra::Complex, amplitudes.iter().flat_map(|z| [z.re, z.im]).collect())
    }

    pub fn quaternion(amplitudes: &[Quaternion]) -> Result<Self> {
        WaveFunction::from_scalars(ScalarAlgebra::Quaternion, amplitudes)
    }

    pub fn from_scalars(algebra: ScalarAlgebra, amplitudes: &[Quaternion]) -> Result<Self> {
        if let Some(q) = amplitudes.iter().find(|q| !q.lies_in(algebra)) {
            return Err(Error::Algebra(format!("amplitude {q:?} is not {algebra}")));
        }
        let b = algebra.block_dim();
        WaveFunction::new(algebra, amplitudes.iter().flat_map(|q| q.coords()[..b].to_vec()).collect())
    }

    /// Real basis vector `l_n` for the 1-based outcome `n`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n == 0 || n > dim {
            return Err(Error::Range { index: n, dim });
        }
        let mut coords = vec![0.0; dim];
        coords[n - 1] = 1.0;
        Ok(WaveFunction { algebra: ScalarAlgebra::Real, coords })
    }

    fn check_shape(algebra: ScalarAlgebra, coords: &[f64]) -> Result<()> {
        let b = algebra.block_dim();
        if coords.is_empty() || !coords.len().is_multiple_of(b) {
            return Err(Error::Dimension { expected: b * (coords.len() / b).max(1), found: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validity("amplitudes must be finite".into()));
        }
        Ok(())
    }

    pub fn algebra(&self) -> ScalarAlgebra {
        self.algebra
    }

    /// Number of amplitudes `N`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.algebra.block_dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Flat real coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// 0-based amplitude.
    pub fn amplitude(&self, i: usize) -> Quaternion {
        let b = self.algebra.block_dim();
        Quaternion::from_coords(&self.coords[i * b..(i + 1) * b])
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = Quaternion> + '_ {
        self.coords.chunks(self.algebra.block_dim()).map(Quaternion::from_coords)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > RENORMALIZE_TOLERANCE {
            Err(Error::Normalization { norm_sqr })
        } else {
            Ok(())
        }
    }

    /// `ψ†φ = Σ conj(ψ_i)·φ_i`.
    pub fn inner(&self, other: &WaveFunction) -> Result<Quaternion> {
        if self.len() != other.len() {
            return Err(Error::Dimension { expected: self.len(), found: other.len() });
        }
        Ok(self.amplitudes().zip(other.amplitudes()).fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * b))
    }

    /// Largest coordinate difference; infinite if the shapes differ.
    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let (a, b) = (self.amplitudes(), other.amplitudes());
        a.zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).max_abs()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Real(f64),
    Coords(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
struct WaveFunctionJson {
    amplitudes: Vec<ScalarJson>,
    #[serde(default = "real_algebra")]
    algebra: ScalarAlgebra,
}

fn real_algebra() -> ScalarAlgebra {
    ScalarAlgebra::Real
}

/// Encodes one scalar for JSON: a bare number for ℝ, `[re, im]` for ℂ,
/// `[a, b, c, d]` for ℍ.
pub(crate) fn scalar_to_json(q: Quaternion, algebra: ScalarAlgebra) -> serde_json::Value {
    match algebra {
        ScalarAlgebra::Real => serde_json::json!(q.w),
        _ => serde_json::json!(q.coords()[..algebra.block_dim()].to_vec()),
    }
}

pub(crate) fn scalar_from_json(value: &serde_json::Value, algebra: ScalarAlgebra) -> std::result::Result<Quaternion, String> {
    match (algebra, value) {
        (ScalarAlgebra::Real, serde_json::Value::Number(n)) => Ok(Quaternion::real(n.as_f64().unwrap_or(f64::NAN))),
        (_, serde_json::Value::Array(items)) if items.len() == algebra.block_dim() && algebra != ScalarAlgebra::Real => {
            let coords: Option<Vec<f64>> = items.iter().map(serde_json::Value::as_f64).collect();
            coords.map(|c| Quaternion::from_coords(&c)).ok_or_else(|| "scalar coordinates must be numbers".to_string())
        }
        _ => Err(format!("expected a {algebra} scalar, found {value}")),
    }
}

impl Serialize for WaveFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let amplitudes = self
            .amplitudes()
            .map(|q| match self.algebra {
                ScalarAlgebra::Real => ScalarJson::Real(q.w),
                a => ScalarJson::Coords(q.coords()[..a.block_dim()].to_vec()),
            })
            .collect();
        WaveFunctionJson { amplitudes, algebra: self.algebra }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WaveFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = WaveFunctionJson::deserialize(deserializer)?;
        let b = json.algebra.block_dim();
        let mut coords = Vec::with_capacity(json.amplitudes.len() * b);
        for (i, amp) in json.amplitudes.into_iter().enumerate() {
            match (json.algebra, amp) {
                (ScalarAlgebra::Real, ScalarJson::Real(x)) => coords.push(x),
                (a, ScalarJson::Coords(c)) if a != ScalarAlgebra::Real && c.len() == b => coords.extend(c),
                _ => {
                    return Err(D::Error::custom(format!(
                        "amplitudes[{i}]: expected a {} scalar ({} coordinate{})",
                        json.algebra,
                        b,
                        if b == 1 { "" } else { "s" }
                    )))
                }
            }
        }
        WaveFunction::new(json.algebra, coords).map_err(D::Error::custom)
    }
}

/// Canonical Euler angles of `dist`.
///
/// Amplitudes are taken as `√p_n` and each angle is
/// `θ_n = atan2(‖(√p_{n+1}, …, √p_N)‖, √p_n)`, with tail norms accumulated from
/// the end. This avoids chaining divisions through long tails of tiny
/// probabilities; `atan2(0, 0) = 0` realizes the zero-tail convention.
pub fn encode(dist: &ProbDist) -> EulerAngles {
    let tails = dist.tails();
    let theta = (0..dist.len().saturating_sub(1))
        .map(|n| tails[n + 1].sqrt().atan2(dist[n].sqrt()))
        .collect();
    EulerAngles { theta }
}

/// Real wave-function `ψ_n = c_n·Π_{k<n} s_k`, `ψ_N = Π_{k<N} s_k`.
pub fn angles_to_wavefunction(angles: &EulerAngles) -> WaveFunction {
    let mut coords = Vec::with_capacity(angles.dim());
    let mut carry = 1.0;
    for &t in &angles.theta {
        let (s, c) = t.sin_cos();
        coords.push(carry * c);
        carry *= s;
    }
    coords.push(carry);
    WaveFunction { algebra: ScalarAlgebra::Real, coords }
}

/// Born rule, `p_n = |ψ_n|²` with the modulus of the amplitude's algebra.
pub fn born_decode(psi: &WaveFunction) -> Result<ProbDist> {
    psi.check_normalized()?;
    ProbDist::new(psi.amplitudes().map(Quaternion::norm_sqr).collect())
}

/// Componentwise square root, `ψ_n = √p_n`.
pub fn sqrt_encode(dist: &ProbDist) -> WaveFunction {
    WaveFunction { algebra: ScalarAlgebra::Real, coords: dist.as_slice().iter().map(|p| p.sqrt()).collect() }
}

/// Factors of `P(n) = Π_{k<n} P(k+1 or above | k or above) · P(n | n or above)`
/// for the 1-based outcome `n`.
///
/// Fails with [`Error::DegenerateConditional`] if a conditioning event
/// `(k or above)`, `k ≤ n`, has zero probability.
pub fn conditional_chain(dist: &ProbDist, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > dist.len() {
        return Err(Error::Range { index: n, dim: dist.len() });
    }
    let tails = dist.tails();
    if let Some(k) = (0..n).find(|&k| tails[k] == 0.0) {
        return Err(Error::DegenerateConditional { index: k + 1 });
    }
    let mut factors: Vec<f64> = (0..n - 1).map(|k| tails[k + 1] / tails[k]).collect();
    factors.push(dist[n - 1] / tails[n - 1]);
    Ok(factors)
}
