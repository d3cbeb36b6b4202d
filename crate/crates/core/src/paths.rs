//! Wave-function parametrization of a finite random walk: the distribution
//! over complete paths is encoded as a single unit vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::ProbDist;
use crate::sphere::{born_decode, sqrt_encode, WaveFunction};
use crate::TOLERANCE;

pub const MAX_STEPS: usize = 20;

/// Ordering tag carried by serialized path distributions.
pub const PATH_ORDERING: &str = "lex-down0";

/// `steps` steps of ±1; step `t` goes up with probability `q[t]`.
///
/// JSON `{"steps": T, "q": [...]}`, where a single-element `q` applies to
/// every step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WalkSpecJson", into = "WalkSpecJson")]
pub struct WalkSpec {
    steps: usize,
    q: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WalkSpecJson {
    steps: usize,
    q: Vec<f64>,
}

impl TryFrom<WalkSpecJson> for WalkSpec {
    type Error = Error;
    fn try_from(json: WalkSpecJson) -> Result<Self> {
        WalkSpec::new(json.steps, json.q)
    }
}

impl From<WalkSpec> for WalkSpecJson {
    fn from(spec: WalkSpec) -> Self {
        WalkSpecJson { steps: spec.steps, q: spec.q }
    }
}

impl WalkSpec {
    pub fn new(steps: usize, q: Vec<f64>) -> Result<Self> {
        if !(1..=MAX_STEPS).contains(&steps) {
            return Err(Error::Range { index: steps, dim: MAX_STEPS });
        }
        let q = match q.len() {
            1 => vec![q[0]; steps],
            n if n == steps => q,
            n => return Err(Error::Dimension { expected: steps, found: n }),
        };
        if let Some(bad) = q.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidDistribution(format!("step probability {bad} is outside [0, 1]")));
        }
        Ok(WalkSpec { steps, q })
    }

    pub fn uniform(steps: usize, q: f64) -> Result<Self> {
        WalkSpec::new(steps, vec![q])
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Up-probability for every step.
    pub fn q(&self) -> &[f64] {
        &self.q
    }
}

/// Distribution over the `2^T` complete paths. Path index bits read from the
/// most significant end give the steps in order, `0` = down, `1` = up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDistribution {
    #[serde(flatten)]
    pub dist: ProbDist,
    pub ordering: String,
}

impl PathDistribution {
    pub fn steps(&self) -> usize {
        self.dist.len().trailing_zeros() as usize
    }
}

/// Step `t` (0-based) of path `index` in a walk of `steps` steps: true = up.
fn step_is_up(index: usize, steps: usize, t: usize) -> bool {
    index >> (steps - 1 - t) & 1 == 1
}

pub fn enumerate_paths(spec: &WalkSpec) -> Result<PathDistribution> {
    let t = spec.steps;
    let p = (0..1usize << t)
        .map(|path| {
            (0..t)
                .map(|s| if step_is_up(path, t, s) { spec.q[s] } else { 1.0 - spec.q[s] })
                .product()
        })
        .collect();
    Ok(PathDistribution { dist: ProbDist::new(p)?, ordering: PATH_ORDERING.to_string() })
}

/// `√p(path)` for every complete path.
pub fn path_wavefunction(spec: &WalkSpec) -> Result<WaveFunction> {
    Ok(sqrt_encode(&enumerate_paths(spec)?.dist))
}

/// Distribution of the walker's position after `t` steps, over positions
/// `−t, −t+2, …, t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionMarginal {
    pub positions: Vec<i64>,
    #[serde(flatten)]
    pub dist: ProbDist,
}

fn check_time(spec: &WalkSpec, t: usize) -> Result<()> {
    if t > spec.steps {
        return Err(Error::Range { index: t, dim: spec.steps });
    }
    Ok(())
}

fn positions(t: usize) -> Vec<i64> {
    (0..=t as i64).map(|ups| 2 * ups - t as i64).collect()
}

/// Groups the Born probabilities of complete paths by position at step `t`.
pub fn born_marginal(spec: &WalkSpec, t: usize) -> Result<PositionMarginal> {
    check_time(spec, t)?;
    let born = born_decode(&path_wavefunction(spec)?)?;
    let mut mass = vec![0.0; t + 1];
    for (path, p) in born.as_slice().iter().enumerate() {
        let ups = (0..t).filter(|&s| step_is_up(path, spec.steps, s)).count();
        mass[ups] += p;
    }
    Ok(PositionMarginal { positions: positions(t), dist: ProbDist::new(mass)? })
}

/// Forward recursion of the position chain, independent of path enumeration.
pub fn forward_marginal(spec: &WalkSpec, t: usize) -> Result<PositionMarginal> {
    check_time(spec, t)?;
    // mass[k] = probability of k up-steps so far
    let mut mass = vec![1.0];
    for &q in &spec.q[..t] {
        let mut next = vec![0.0; mass.len() + 1];
        for (k, m) in mass.iter().enumerate() {
            next[k] += m * (1.0 - q);
            next[k + 1] += m * q;
        }
        mass = next;
    }
    Ok(PositionMarginal { positions: positions(t), dist: ProbDist::new(mass)? })
}

/// Position distribution at step `t`, cross-checked between the Born route
/// and the forward recursion.
pub fn marginal_at(spec: &WalkSpec, t: usize) -> Result<PositionMarginal> {
    let born = born_marginal(spec, t)?;
    let forward = forward_marginal(spec, t)?;
    let deviation = born.dist.max_abs_diff(&forward.dist);
    if deviation > TOLERANCE {
        return Err(Error::Consistency { what: "path-grouped Born marginal vs forward recursion", deviation });
    }
    Ok(born)
}
