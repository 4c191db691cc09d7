//! Ask/tell optimization loop.
//!
//! Every trust-region method starts an epoch with a Latin-hypercube batch,
//! then proposes from a box around the epoch's incumbent. The methods differ
//! only in how arms are picked from the box:
//!
//! | method            | acquisition                                         |
//! |-------------------|-----------------------------------------------------|
//! | `random`          | uniform over the whole cube, no trust region        |
//! | `turbo-0`         | uniform inside the trust region                     |
//! | `turbo-enn-K`     | layered Pareto draw over ENN `(mu, sigma)`          |
//! | `turbo-enn-mu-K`  | largest ENN `mu`                                    |
//! | `turbo-enn-sigma-K` | largest ENN `sigma`                               |
//! | `turbo-enn-rand-K`| layered Pareto draw over `(mu, u)`, `u ~ U(0, 1)`   |

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::enn::{EnnSurrogate, DEFAULT_K};
use crate::error::{Error, Result};
use crate::lhs::latin_hypercube;
use crate::pareto::select_arm_indices;
use crate::rng::RngStream;
use crate::trust_region::TrustRegionState;
use crate::types::{Dataset, Design, Estimate, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodKind {
    Random,
    Turbo0,
    TurboEnn,
    TurboEnnMu,
    TurboEnnSigma,
    TurboEnnRand,
}

impl MethodKind {
    pub const ALL: [MethodKind; 6] = [
        MethodKind::Random,
        MethodKind::Turbo0,
        MethodKind::TurboEnn,
        MethodKind::TurboEnnMu,
        MethodKind::TurboEnnSigma,
        MethodKind::TurboEnnRand,
    ];

    fn prefix(self) -> &'static str {
        match self {
            MethodKind::Random => "random",
            MethodKind::Turbo0 => "turbo-0",
            MethodKind::TurboEnn => "turbo-enn",
            MethodKind::TurboEnnMu => "turbo-enn-mu",
            MethodKind::TurboEnnSigma => "turbo-enn-sigma",
            MethodKind::TurboEnnRand => "turbo-enn-rand",
        }
    }

    pub fn uses_surrogate(self) -> bool {
        !matches!(self, MethodKind::Random | MethodKind::Turbo0)
    }

    pub fn uses_trust_region(self) -> bool {
        self != MethodKind::Random
    }
}

/// Human-readable list of accepted method labels.
pub fn supported_methods() -> String {
    MethodKind::ALL
        .iter()
        .map(|k| {
            if k.uses_surrogate() {
                format!("{}-<K>", k.prefix())
            } else {
                k.prefix().to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// A method kind with its neighbor count, e.g. `turbo-enn-10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Method {
    pub kind: MethodKind,
    pub k: usize,
}

impl Method {
    pub fn new(kind: MethodKind, k: usize) -> Self {
        Method { kind, k }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.uses_surrogate() {
            write!(f, "{}-{}", self.kind.prefix(), self.k)
        } else {
            f.write_str(self.kind.prefix())
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        let unknown = || Error::UnknownMethod {
            name: label.to_string(),
            supported: supported_methods(),
        };
        let label = label.trim();
        match label {
            "random" => return Ok(Method::new(MethodKind::Random, DEFAULT_K)),
            "turbo-0" => return Ok(Method::new(MethodKind::Turbo0, DEFAULT_K)),
            _ => {}
        }
        // Longest prefixes first so `turbo-enn` does not swallow the ablations.
        for kind in [
            MethodKind::TurboEnnSigma,
            MethodKind::TurboEnnRand,
            MethodKind::TurboEnnMu,
            MethodKind::TurboEnn,
        ] {
            let Some(rest) = label.strip_prefix(kind.prefix()) else {
                continue;
            };
            if rest.is_empty() {
                return Ok(Method::new(kind, DEFAULT_K));
            }
            let Some(digits) = rest.strip_prefix('-') else {
                continue;
            };
            return match digits.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(Method::new(kind, k)),
                _ => Err(unknown()),
            };
        }
        Err(unknown())
    }
}

/// Full configuration of one optimizer instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSpec {
    pub kind: MethodKind,
    pub k: usize,
    pub arms_per_round: usize,
    pub init_count: usize,
}

impl MethodSpec {
    pub fn new(method: Method, arms_per_round: usize, init_count: usize) -> Result<Self> {
        if method.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if arms_per_round == 0 {
            return Err(Error::invalid("arms_per_round", "must be at least 1"));
        }
        if init_count < 2 {
            return Err(Error::invalid("init_count", "must be at least 2"));
        }
        Ok(MethodSpec {
            kind: method.kind,
            k: method.k,
            arms_per_round,
            init_count,
        })
    }

    /// Spec with the default initialization size `max(2, 2D)`.
    pub fn with_defaults(method: Method, dimension: usize, arms_per_round: usize) -> Result<Self> {
        MethodSpec::new(method, arms_per_round, default_init_count(dimension))
    }

    pub fn method(&self) -> Method {
        Method::new(self.kind, self.k)
    }
}

pub fn default_init_count(dimension: usize) -> usize {
    (2 * dimension).max(2)
}

/// Size of the candidate set scored per surrogate-driven proposal.
pub fn candidate_count(dimension: usize) -> usize {
    5000.max(2 * dimension)
}

/// Arms returned by one `ask`.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub arms: Vec<Design>,
    /// Wall-clock time spent inside `ask`.
    pub elapsed: Duration,
    /// Observations available to the proposer.
    pub dataset_size: usize,
    /// Whether the arms came from the initialization queue.
    pub initialization: bool,
}

#[derive(Debug, Clone)]
pub struct Optimizer {
    spec: MethodSpec,
    dimension: usize,
    dataset: Dataset,
    trust_region: Option<TrustRegionState>,
    init_queue: VecDeque<Design>,
    rng: RngStream,
    round: usize,
    restarts: usize,
}

impl Optimizer {
    pub fn new(spec: MethodSpec, dimension: usize, rng: RngStream) -> Result<Self> {
        let spec = MethodSpec::new(spec.method(), spec.arms_per_round, spec.init_count)?;
        let mut opt = Optimizer {
            spec,
            dimension,
            dataset: Dataset::new(dimension)?,
            trust_region: None,
            init_queue: VecDeque::new(),
            rng,
            round: 0,
            restarts: 0,
        };
        if spec.kind.uses_trust_region() {
            opt.refill_init_queue()?;
        }
        Ok(opt)
    }

    pub fn spec(&self) -> &MethodSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// `None` for `random` and during an epoch's initialization batch.
    pub fn trust_region(&self) -> Option<&TrustRegionState> {
        self.trust_region.as_ref()
    }

    pub fn pending_initialization(&self) -> usize {
        self.init_queue.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    /// The initialization batch is padded to whole rounds.
    fn refill_init_queue(&mut self) -> Result<()> {
        let arms = self.spec.arms_per_round;
        let n = self.spec.init_count.div_ceil(arms) * arms;
        self.init_queue = latin_hypercube(self.dimension, n, &mut self.rng)?.into();
        Ok(())
    }

    fn start_trust_region(&mut self) -> Result<()> {
        let best = self.dataset.best_index().ok_or(Error::NothingToPropose)?;
        self.trust_region = Some(TrustRegionState::new(
            self.dimension,
            self.spec.arms_per_round,
            self.dataset.observation(best),
        )?);
        Ok(())
    }

    /// Proposes the next batch of `arms_per_round` designs.
    pub fn ask(&mut self) -> Result<Proposal> {
        let started = Instant::now();
        let dataset_size = self.dataset.len();
        let arms_per_round = self.spec.arms_per_round;
        let (arms, initialization) = if self.spec.kind == MethodKind::Random {
            (self.uniform_arms(), false)
        } else if !self.init_queue.is_empty() {
            let take = arms_per_round.min(self.init_queue.len());
            (self.init_queue.drain(..take).collect(), true)
        } else {
            if self.trust_region.is_none() {
                self.start_trust_region()?;
            }
            (self.trust_region_arms()?, false)
        };
        Ok(Proposal {
            arms,
            elapsed: started.elapsed(),
            dataset_size,
            initialization,
        })
    }

    fn uniform_arms(&mut self) -> Vec<Design> {
        (0..self.spec.arms_per_round)
            .map(|_| {
                let coords = (0..self.dimension).map(|_| self.rng.random()).collect();
                Design::from_unchecked(coords)
            })
            .collect()
    }

    fn trust_region_arms(&mut self) -> Result<Vec<Design>> {
        let tr = self.trust_region.as_ref().ok_or(Error::NothingToPropose)?;
        let arms = self.spec.arms_per_round;
        if self.spec.kind == MethodKind::Turbo0 {
            return Ok(tr.sample_candidates(arms, &mut self.rng));
        }

        let dim = self.dimension;
        let pool = tr.sample_flat(candidate_count(dim), &mut self.rng);
        let estimates = EnnSurrogate::new(&self.dataset, self.spec.k)?.estimate_rows(&pool)?;
        let mus: Vec<f64> = estimates.iter().map(|e| e.mu).collect();
        let picked = match self.spec.kind {
            MethodKind::TurboEnn => {
                let sigmas: Vec<f64> = estimates.iter().map(Estimate::sigma).collect();
                select_arm_indices(&mus, &sigmas, arms, &mut self.rng)?
            }
            MethodKind::TurboEnnRand => {
                let noise: Vec<f64> = (0..mus.len()).map(|_| self.rng.random()).collect();
                select_arm_indices(&mus, &noise, arms, &mut self.rng)?
            }
            MethodKind::TurboEnnMu => {
                let sigmas: Vec<f64> = estimates.iter().map(Estimate::sigma).collect();
                top_by(&mus, &sigmas, arms)?
            }
            MethodKind::TurboEnnSigma => {
                let sigmas: Vec<f64> = estimates.iter().map(Estimate::sigma).collect();
                top_by(&sigmas, &mus, arms)?
            }
            MethodKind::Random | MethodKind::Turbo0 => unreachable!("handled above"),
        };
        Ok(picked
            .into_iter()
            .map(|i| Design::from_unchecked(pool[i * dim..(i + 1) * dim].to_vec()))
            .collect())
    }

    /// Records evaluated arms and advances the trust region.
    pub fn tell(&mut self, arms: &[Design], values: &[f64]) -> Result<()> {
        if arms.len() != values.len() {
            return Err(Error::LengthMismatch {
                what: "values",
                left: values.len(),
                right: arms.len(),
            });
        }
        for (arm, &value) in arms.iter().zip(values) {
            if arm.dim() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: arm.dim(),
                });
            }
            if !value.is_finite() {
                return Err(Error::NonFiniteValue(value));
            }
        }
        for (arm, &value) in arms.iter().zip(values) {
            self.dataset.push_parts(arm, value)?;
        }
        self.round += 1;

        if !self.spec.kind.uses_trust_region() || arms.is_empty() {
            return Ok(());
        }
        match self.trust_region.as_mut() {
            None => {
                if self.init_queue.is_empty() {
                    self.start_trust_region()?;
                }
            }
            Some(tr) => {
                let best = batch_best(values);
                tr.update(&Observation::new(arms[best].clone(), values[best])?)?;
                if tr.should_restart() {
                    self.dataset.clear();
                    self.trust_region = None;
                    self.restarts += 1;
                    self.refill_init_queue()?;
                }
            }
        }
        Ok(())
    }
}

fn batch_best(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Indices of the `n` largest `primary` values; ties go to larger `secondary`,
/// then to the lower index.
fn top_by(primary: &[f64], secondary: &[f64], n: usize) -> Result<Vec<usize>> {
    if n > primary.len() {
        return Err(Error::PoolTooSmall {
            requested: n,
            available: primary.len(),
        });
    }
    let mut order: Vec<usize> = (0..primary.len()).collect();
    order.sort_by(|&a, &b| {
        primary[b]
            .total_cmp(&primary[a])
            .then_with(|| secondary[b].total_cmp(&secondary[a]))
            .then(a.cmp(&b))
    });
    order.truncate(n);
    Ok(order)
}
