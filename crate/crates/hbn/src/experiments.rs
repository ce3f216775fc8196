//! Randomized verification harnesses for the bundle-level statements, with
//! reproducible seeding: every trial derives its own stream from the master
//! seed and its index, so parallel and serial runs produce byte-identical
//! reports and any counterexample can be replayed from (seed, trial).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::birkhoff_factorize;
use crate::classify::tangent_twist_set;
use crate::ext::{
    doubled, extension_transition, random_ext_class, surjective_at, ExtClass, ExtClassRepr,
};
use crate::field::Prime;
use crate::splitting::{BBType, SplittingType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("invalid pattern for this experiment: {0}")]
    InvalidPattern(String),
    #[error("{0} is not interior to a gap of the splitting type")]
    NotInGap(i64),
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub claims: Vec<ClaimReport>,
    pub seed: u64,
    pub prime: u32,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClaimReport {
    pub name: String,
    pub trials: u64,
    pub violations: u64,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: u64,
    pub gamma: ExtClassRepr,
    pub observed: String,
}

impl ExperimentReport {
    pub fn violation_count(&self) -> u64 {
        self.claims.iter().map(|c| c.violations).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Worker-count resolution: explicit request, then the HBN_THREADS
/// environment variable, then whatever the host offers.
pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var("HBN_THREADS").ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    rng
}

fn run_trials<T, F>(trials: u64, workers: usize, trial_fn: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");
    pool.install(|| (0..trials).into_par_iter().map(&trial_fn).collect())
}

fn merge_claims(
    experiment: &str,
    names: &[&str],
    trials: u64,
    seed: u64,
    prime: Prime,
    outcomes: Vec<(u64, Vec<Option<Counterexample>>)>,
) -> ExperimentReport {
    let mut claims: Vec<ClaimReport> = names
        .iter()
        .map(|name| ClaimReport {
            name: (*name).to_string(),
            trials,
            violations: 0,
            first_counterexample: None,
        })
        .collect();
    for (_, per_claim) in outcomes {
        for (claim, ce) in claims.iter_mut().zip(per_claim) {
            if let Some(ce) = ce {
                claim.violations += 1;
                if claim.first_counterexample.is_none() {
                    claim.first_counterexample = Some(ce);
                }
            }
        }
    }
    ExperimentReport {
        experiment: experiment.to_string(),
        claims,
        seed,
        prime: prime.get(),
    }
}

#[derive(Debug, Clone)]
pub struct Prop5Config {
    pub bb: BBType,
    pub trials: u64,
    pub prime: Prime,
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Random extensions of a bundle of pattern B(0, b, y, u, v) with b >= 2 and
/// v > 0 by itself. Checks the four splitting bounds on the middle term and
/// the dichotomy: surjective on twist-zero sections implies split.
pub fn run_prop5(cfg: &Prop5Config) -> Result<ExperimentReport, ExperimentError> {
    let bb = cfg.bb;
    if bb.a != 0 || bb.v == 0 || bb.b < 2 {
        return Err(ExperimentError::InvalidPattern(format!(
            "need a = 0, v > 0 and b >= 2, got {bb}"
        )));
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let base = bb.splitting_type();
    let split_type = doubled(&base);
    let b = bb.b;
    let x2 = 2 * bb.x as i64;
    let v2 = 2 * bb.v as i64;
    let workers = resolve_workers(cfg.workers);

    let outcomes = run_trials(cfg.trials, workers, |trial| {
        let mut rng = trial_rng(cfg.seed, trial);
        let gamma = random_ext_class(&base, cfg.prime, &mut rng);
        let middle = extension_transition(&gamma);
        let fact = birkhoff_factorize(&middle).expect("extension transitions are invertible");
        let e2 = &fact.splitting;
        let bottom_count = e2.entries().iter().filter(|&&e| e == -b - 1).count() as i64;
        let top_count = e2.entries().iter().filter(|&&e| e == 1).count() as i64;
        let surjective = surjective_at(&gamma, 0);
        let split = *e2 == split_type;
        let checks = [
            e2.min_entry() >= -b - 1,
            bottom_count <= x2,
            e2.max_entry() <= 1,
            top_count <= v2,
            !surjective || split,
        ];
        let per_claim: Vec<Option<Counterexample>> = checks
            .iter()
            .map(|&ok| {
                (!ok).then(|| Counterexample {
                    trial,
                    gamma: gamma.describe(),
                    observed: format!("middle term split as {e2}"),
                })
            })
            .collect();
        (trial, per_claim)
    });

    Ok(merge_claims(
        "prop5",
        &[
            "lower_bound",
            "bottom_multiplicity",
            "upper_bound",
            "top_multiplicity",
            "surjective_at_zero_implies_split",
        ],
        cfg.trials,
        cfg.seed,
        cfg.prime,
        outcomes,
    ))
}

#[derive(Debug, Clone)]
pub struct TwistReductionConfig {
    pub e: SplittingType,
    pub trials: u64,
    pub prime: Prime,
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Every nonzero extension class must fail section surjectivity at some
/// twist in the tangent twist set; the zero class passes everywhere.
pub fn run_twist_reduction(cfg: &TwistReductionConfig) -> Result<ExperimentReport, ExperimentError> {
    if cfg.e.u_invariant() == 0 {
        return Err(ExperimentError::InvalidPattern(format!(
            "{} has no nonsplit extensions (u = 0)",
            cfg.e
        )));
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let twists: Vec<i64> = tangent_twist_set(&cfg.e).into_iter().collect();
    let workers = resolve_workers(cfg.workers);
    let base = cfg.e.clone();

    let outcomes = run_trials(cfg.trials, workers, |trial| {
        let mut rng = trial_rng(cfg.seed, trial);
        let mut gamma = random_ext_class(&base, cfg.prime, &mut rng);
        while gamma.is_zero() {
            gamma = random_ext_class(&base, cfg.prime, &mut rng);
        }
        let detected = twists.iter().any(|&n| !surjective_at(&gamma, n));
        let ce = (!detected).then(|| Counterexample {
            trial,
            gamma: gamma.describe(),
            observed: format!("surjective at every twist in {twists:?}"),
        });
        (trial, vec![ce])
    });

    let mut report = merge_claims(
        "twist_reduction",
        &["nonzero_class_detected"],
        cfg.trials,
        cfg.seed,
        cfg.prime,
        outcomes,
    );

    // the zero class is the trivial extension and must pass every twist
    let zero = ExtClass::zero(base.clone(), cfg.prime);
    let zero_ok = twists.iter().all(|&n| surjective_at(&zero, n));
    report.claims.push(ClaimReport {
        name: "zero_class_passes_all_twists".to_string(),
        trials: 1,
        violations: u64::from(!zero_ok),
        first_counterexample: (!zero_ok).then(|| Counterexample {
            trial: 0,
            gamma: zero.describe(),
            observed: "zero class failed a tangent twist".to_string(),
        }),
    });
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct Prop6Config {
    pub e: SplittingType,
    pub e_prime: i64,
    pub trials: u64,
    pub prime: Prime,
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Exploratory: for a twist parameter strictly inside a gap of the type,
/// tabulates whether section surjectivity at -e' agrees with surjectivity
/// at -e_i for the entry bounding the gap above. No verdict is asserted;
/// the report only counts agreements and disagreements.
pub fn run_prop6(cfg: &Prop6Config) -> Result<ExperimentReport, ExperimentError> {
    let entries = cfg.e.entries();
    let upper = entries
        .iter()
        .position(|&ei| cfg.e_prime < ei)
        .filter(|&i| i > 0 && entries[i - 1] + 2 <= cfg.e_prime)
        .map(|i| entries[i]);
    let Some(e_i) = upper else {
        return Err(ExperimentError::NotInGap(cfg.e_prime));
    };
    if cfg.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    let workers = resolve_workers(cfg.workers);
    let base = cfg.e.clone();
    let e_prime = cfg.e_prime;

    let outcomes = run_trials(cfg.trials, workers, |trial| {
        let mut rng = trial_rng(cfg.seed, trial);
        let gamma = random_ext_class(&base, cfg.prime, &mut rng);
        let at_gap = surjective_at(&gamma, -e_prime);
        let at_entry = surjective_at(&gamma, -e_i);
        let ce = (at_gap != at_entry).then(|| Counterexample {
            trial,
            gamma: gamma.describe(),
            observed: format!(
                "surjective at {} = {at_gap}, surjective at {} = {at_entry}",
                -e_prime, -e_i
            ),
        });
        (trial, vec![ce])
    });

    Ok(merge_claims(
        "prop6",
        &["surjectivity_agreement"],
        cfg.trials,
        cfg.seed,
        cfg.prime,
        outcomes,
    ))
}
