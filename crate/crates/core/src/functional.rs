//! Expectation functionals on the event algebra, the transformed ensemble
//! `E_U(D) = E(U D U†)`, `E_U(O) = 0`, and the two-dimensional comparison
//! between pure and mixed states under non-commuting projections.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::{pure_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::simplex::{event_projection, Event, ProbDist};
use crate::sphere::WaveFunction;
use crate::transform::OrthogonalTransform;

/// Smallest grid accepted by [`gleason_pure_search`].
pub const MIN_GLEASON_GRID: usize = 1_000;

/// State of an ensemble seen through an optional physical transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationFunctional {
    rho: DensityMatrix,
    transform: Option<OrthogonalTransform>,
}

impl ExpectationFunctional {
    pub fn new(rho: DensityMatrix) -> Self {
        ExpectationFunctional { rho, transform: None }
    }

    /// The diagonal ensemble with distribution `p`.
    pub fn from_distribution(p: &ProbDist) -> Self {
        ExpectationFunctional::new(DensityMatrix::from_distribution(p))
    }

    /// `E_U`, the same ensemble after the transformation `U`.
    pub fn with_transform(self, u: OrthogonalTransform) -> Result<Self> {
        if u.dim() != self.rho.dim() {
            return Err(Error::Dimension { expected: self.rho.dim(), found: u.dim() });
        }
        Ok(ExpectationFunctional { transform: Some(u), ..self })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn transform(&self) -> Option<&OrthogonalTransform> {
        self.transform.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Only the diagonal of `op` contributes; the off-diagonal part is
    /// collapsed away, so a null-diagonal operator evaluates to exactly 0.
    /// The diagonal part `D` gives `Tr(ρ·U D U†)`, or `Tr(ρ·D)` without `U`.
    pub fn evaluate(&self, op: &ScalarMatrix) -> Result<f64> {
        if !op.is_square() || op.nrows() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: op.nrows() });
        }
        let d = op.diagonal_part();
        if d.max_abs() == 0.0 {
            return Ok(0.0);
        }
        match &self.transform {
            Some(u) => self.rho.expectation(&u.conjugate(&d)?),
            None => self.rho.expectation(&d),
        }
    }

    pub fn evaluate_event(&self, event: &Event) -> Result<f64> {
        self.evaluate(&ScalarMatrix::from_real(event_projection(event, self.dim())?.matrix()))
    }
}

/// Best pure state found by [`gleason_pure_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GleasonReport {
    pub theta_best: f64,
    pub residual: f64,
}

/// `½·[[1, 1], [1, 1]]`.
pub fn plus_projection() -> ScalarMatrix {
    ScalarMatrix::from_real(&nalgebra::DMatrix::from_element(2, 2, 0.5))
}

/// `diag(1, 0)`.
pub fn first_projection() -> ScalarMatrix {
    ScalarMatrix::diagonal(&[1.0, 0.0])
}

/// `max(|Tr(ρ_ψ·diag(1,0)) − a|, |Tr(ρ_ψ·P₊) − b|)` for `ψ = (cos θ, sin θ)`.
pub fn pure_residual(theta: f64, target_a: f64, target_b: f64) -> f64 {
    let psi = WaveFunction::real(vec![theta.cos(), theta.sin()]).expect("unit vector");
    let rho = pure_density(&psi).expect("normalized");
    let a = rho.expectation(&first_projection()).expect("2x2");
    let b = rho.expectation(&plus_projection()).expect("2x2");
    (a - target_a).abs().max((b - target_b).abs())
}

/// Scans `θ_k = 2πk/grid` and returns the state minimizing
/// [`pure_residual`]. Ties keep the smallest `k`.
pub fn gleason_pure_search(target_a: f64, target_b: f64, grid: usize) -> Result<GleasonReport> {
    if grid < MIN_GLEASON_GRID {
        return Err(Error::Validity(format!("grid resolution {grid} is below {MIN_GLEASON_GRID}")));
    }
    let best = (0..grid)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / grid as f64;
            GleasonReport { theta_best: theta, residual: pure_residual(theta, target_a, target_b) }
        })
        .fold(None::<GleasonReport>, |best, r| match best {
            Some(b) if b.residual <= r.residual => Some(b),
            _ => Some(r),
        })
        .expect("grid is non-empty");
    Ok(best)
}

/// The maximally mixed state `½·I`, which assigns ½ to both `diag(1,0)` and
/// `P₊`.
pub fn gleason_mixed_witness() -> DensityMatrix {
    DensityMatrix::new(ScalarMatrix::diagonal(&[0.5, 0.5])).expect("valid mixed state")
}

/// Real `N×N` matrix with the given diagonal and zeros elsewhere.
pub fn diagonal_operator(values: &[f64]) -> ScalarMatrix {
    ScalarMatrix::diagonal(values)
}
