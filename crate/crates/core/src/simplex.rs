//! Probability distributions over `N` outcomes, events, and the diagonal
//! projections that represent events as operators.
//!
//! Outcomes are numbered `1..=N` in every public contract ([`Event`],
//! [`ProbDist::outcome`]). `Index<usize>` on [`ProbDist`] is the plain
//! 0-based slice index.

use std::collections::BTreeSet;
use std::ops::Index;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{RENORMALIZE_TOLERANCE, TOLERANCE};

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbDistJson", into = "ProbDistJson")]
pub struct ProbDist {
    p: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProbDistJson {
    p: Vec<f64>,
}

impl TryFrom<ProbDistJson> for ProbDist {
    type Error = Error;
    fn try_from(json: ProbDistJson) -> Result<Self> {
        ProbDist::new(json.p)
    }
}

impl From<ProbDist> for ProbDistJson {
    fn from(dist: ProbDist) -> Self {
        ProbDistJson { p: dist.p }
    }
}

impl ProbDist {
    /// Validates `p`. A total within 1e-12 of one is kept verbatim, a total
    /// within 1e-9 is rescaled, anything further off is rejected.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("at least one outcome is required".into()));
        }
        if let Some((i, &x)) = p.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!("p[{}] = {x} is not a non-negative number", i + 1)));
        }
        let total: f64 = p.iter().sum();
        let deviation = (total - 1.0).abs();
        if deviation <= TOLERANCE {
            Ok(ProbDist { p })
        } else if deviation <= RENORMALIZE_TOLERANCE {
            Ok(ProbDist { p: p.into_iter().map(|x| x / total).collect() })
        } else {
            Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")))
        }
    }

    /// Point mass on the 1-based `outcome`.
    pub fn deterministic(dim: usize, outcome: usize) -> Result<Self> {
        if outcome == 0 || outcome > dim {
            return Err(Error::Range { index: outcome, dim });
        }
        let mut p = vec![0.0; dim];
        p[outcome - 1] = 1.0;
        Ok(ProbDist { p })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDistribution("at least one outcome is required".into()));
        }
        Ok(ProbDist { p: vec![1.0 / dim as f64; dim] })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    /// Probability of the 1-based outcome `n`.
    pub fn outcome(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.len() {
            return Err(Error::Range { index: n, dim: self.len() });
        }
        Ok(self.p[n - 1])
    }

    /// `Σ_{k ≥ n} p_k` for every 1-based `n`, accumulated from the end.
    /// Entry `N` (0-based) is zero.
    pub fn tails(&self) -> Vec<f64> {
        let mut tails = vec![0.0; self.len() + 1];
        for k in (0..self.len()).rev() {
            tails[k] = tails[k + 1] + self.p[k];
        }
        tails
    }

    pub fn max_abs_diff(&self, other: &ProbDist) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.p.iter().zip(&other.p).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `diag(p)` as a real matrix.
    pub fn diagonal_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&self.p))
    }
}

impl Index<usize> for ProbDist {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.p[i]
    }
}

/// A subset of the outcomes `{1, …, N}`, stored sorted and de-duplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "EventJson", into = "EventJson")]
pub struct Event {
    indices: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct EventJson {
    indices: Vec<usize>,
}

impl TryFrom<EventJson> for Event {
    type Error = Error;
    fn try_from(json: EventJson) -> Result<Self> {
        Event::new(json.indices)
    }
}

impl From<Event> for EventJson {
    fn from(event: Event) -> Self {
        EventJson { indices: event.indices.into_iter().collect() }
    }
}

impl Event {
    /// Outcome indices are 1-based; `0` is rejected.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if indices.contains(&0) {
            return Err(Error::Range { index: 0, dim: 0 });
        }
        Ok(Event { indices })
    }

    pub fn empty() -> Self {
        Event::default()
    }

    pub fn elementary(n: usize) -> Result<Self> {
        Event::new([n])
    }

    /// The sure event `{1, …, dim}`.
    pub fn full(dim: usize) -> Self {
        Event { indices: (1..=dim).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, n: usize) -> bool {
        self.indices.contains(&n)
    }

    pub fn union(&self, other: &Event) -> Event {
        Event { indices: self.indices.union(&other.indices).copied().collect() }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        Event { indices: self.indices.intersection(&other.indices).copied().collect() }
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.indices.is_disjoint(&other.indices)
    }

    fn check_range(&self, dim: usize) -> Result<()> {
        match self.indices.last() {
            Some(&max) if max > dim => Err(Error::Range { index: max, dim }),
            _ => Ok(()),
        }
    }
}

/// A real symmetric idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: DMatrix<f64>,
}

impl Projection {
    /// Accepts `matrix` if it is square, symmetric and idempotent within 1e-12.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let projection = Projection { matrix };
        if !projection.is_symmetric() {
            return Err(Error::Validity("projection must be symmetric".into()));
        }
        if !projection.is_idempotent() {
            return Err(Error::Validity("projection must be idempotent".into()));
        }
        Ok(projection)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_idempotent(&self) -> bool {
        (&self.matrix * &self.matrix - &self.matrix).amax() <= TOLERANCE
    }

    pub fn is_symmetric(&self) -> bool {
        (&self.matrix - self.matrix.transpose()).amax() <= TOLERANCE
    }
}

/// Diagonal 0/1 matrix with ones at the (1-based) outcomes of `event`.
pub fn event_projection(event: &Event, dim: usize) -> Result<Projection> {
    event.check_range(dim)?;
    let mut matrix = DMatrix::zeros(dim, dim);
    for n in event.indices() {
        matrix[(n - 1, n - 1)] = 1.0;
    }
    Ok(Projection { matrix })
}

/// `Σ_{n ∈ event} p_n`.
pub fn prob_of_event(dist: &ProbDist, event: &Event) -> Result<f64> {
    event.check_range(dist.len())?;
    Ok(event.indices().map(|n| dist.p[n - 1]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn projection_examples() {
        let p = event_projection(&Event::new([1]).unwrap(), 2).unwrap();
        assert_eq!(p.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let p = event_projection(&Event::new([1, 2]).unwrap(), 2).unwrap();
        assert_eq!(p.matrix(), &DMatrix::identity(2, 2));
        let p = event_projection(&Event::empty(), 3).unwrap();
        assert_eq!(p.matrix(), &DMatrix::zeros(3, 3));
    }

    #[test]
    fn projection_out_of_range() {
        let err = event_projection(&Event::new([3]).unwrap(), 2).unwrap_err();
        assert_eq!(err, Error::Range { index: 3, dim: 2 });
        assert!(Event::new([0, 1]).is_err());
    }

    #[test]
    fn prob_of_event_examples() {
        let p = ProbDist::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(prob_of_event(&p, &Event::new([1]).unwrap()).unwrap(), 0.25);
        assert_eq!(prob_of_event(&p, &Event::new([1, 2]).unwrap()).unwrap(), 1.0);
        let p = ProbDist::new(vec![0.1, 0.2, 0.7]).unwrap();
        let got = prob_of_event(&p, &Event::new([2, 3]).unwrap()).unwrap();
        assert!((got - (0.2 + 0.7)).abs() < 1e-12);
        assert!(matches!(prob_of_event(&p, &Event::new([4]).unwrap()), Err(Error::Range { .. })));
    }

    #[test]
    fn constructor_tolerances() {
        assert!(ProbDist::new(vec![]).is_err());
        assert!(ProbDist::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        // within the renormalization window: rescaled onto the simplex
        let p = ProbDist::new(vec![0.5 + 1e-10, 0.5]).unwrap();
        assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-15);
        assert!(p[0] > p[1]);
        // zero-probability outcomes are fine
        assert!(ProbDist::new(vec![0.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn json_contract() {
        let p: ProbDist = serde_json::from_str(r#"{"p":[0.25,0.75]}"#).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"p":[0.25,0.75]}"#);
        assert!(serde_json::from_str::<ProbDist>(r#"{"p":[0.25,0.25]}"#).is_err());
        let e: Event = serde_json::from_str(r#"{"indices":[3,1,3]}"#).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"indices":[1,3]}"#);
    }

    #[test]
    fn trace_formula_matches_summation() {
        let p = ProbDist::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        for mask in 0u32..16 {
            let event = Event::new((1..=4).filter(|n| mask & (1 << (n - 1)) != 0)).unwrap();
            let proj = event_projection(&event, 4).unwrap();
            let trace = (p.diagonal_matrix() * proj.matrix()).trace();
            assert!((trace - prob_of_event(&p, &event).unwrap()).abs() < 1e-12);
        }
    }

    fn event_from_mask(mask: u32, dim: usize) -> Event {
        Event::new((1..=dim).filter(|n| mask & (1 << (n - 1)) != 0)).unwrap()
    }

    #[test]
    fn projections_form_an_algebra_homomorphism() {
        for dim in 1..=5usize {
            let count = 1u32 << dim;
            for a in 0..count {
                let ea = event_from_mask(a, dim);
                let pa = event_projection(&ea, dim).unwrap();
                assert!(pa.is_idempotent() && pa.is_symmetric());
                for b in 0..count {
                    let eb = event_from_mask(b, dim);
                    let pb = event_projection(&eb, dim).unwrap();
                    let meet = event_projection(&ea.intersection(&eb), dim).unwrap();
                    assert_eq!(meet.matrix(), &(pa.matrix() * pb.matrix()));
                    if ea.is_disjoint(&eb) {
                        let join = event_projection(&ea.union(&eb), dim).unwrap();
                        assert_eq!(join.matrix(), &(pa.matrix() + pb.matrix()));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn additivity_on_disjoint_events(
            weights in proptest::collection::vec(0.0..1.0f64, 1..12),
            a in any::<u32>(),
            b in any::<u32>(),
        ) {
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 1e-6);
            let dist = ProbDist::new(weights.iter().map(|w| w / total).collect()).unwrap();
            let dim = dist.len();
            let mask = (1u32 << dim) - 1;
            let ea = event_from_mask(a & mask, dim);
            let eb = event_from_mask(b & mask & !(a & mask), dim);
            let lhs = prob_of_event(&dist, &ea.union(&eb)).unwrap();
            let rhs = prob_of_event(&dist, &ea).unwrap() + prob_of_event(&dist, &eb).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
