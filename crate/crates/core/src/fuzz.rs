//! Seeded comparison of the closed-form 4×4 criterion against the oracle.
//!
//! Every trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so a report depends only on the seed and the trial count, not on
//! how rayon schedules the work.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{check_contraction_3x3, check_contraction_4x4};
use crate::error::{Error, Result};
use crate::oracle::is_contraction_oracle;
use crate::scalar::{ComplexScalar, ZERO};
use crate::tolerance::Tolerances;
use crate::tri::{TriMatrix3, TriMatrix4};
use crate::verdict::{Branch, Verdict};

/// Entry radius for 4×4 uniform-ball samples; about half are contractions.
pub const BALL_RADIUS_4: f64 = 0.555;
/// Entry radius for 3×3 uniform-ball samples; about half are contractions.
pub const BALL_RADIUS_3: f64 = 0.67;
/// Oracle norms this close to 1 are not adjudicated.
pub const BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    UniformBall,
    NearBoundary,
    UnimodularDiagonal,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::UniformBall,
        Distribution::NearBoundary,
        Distribution::UnimodularDiagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::UniformBall => "uniform-ball",
            Distribution::NearBoundary => "near-boundary",
            Distribution::UnimodularDiagonal => "unimodular-diagonal",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::parse("dist", format!("unknown distribution `{s}`")))
    }
}

/// Independent generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform point in the closed disk of radius `r`.
pub fn sample_disk<R: Rng + ?Sized>(rng: &mut R, r: f64) -> ComplexScalar {
    let rho = r * rng.gen::<f64>().sqrt();
    ComplexScalar::from_polar(rho, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub fn sample_phase<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    ComplexScalar::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub fn sample_ball_4<R: Rng + ?Sized>(rng: &mut R, r: f64) -> TriMatrix4 {
    let mut z = || sample_disk(rng, r);
    TriMatrix4 {
        omega: [z(), z(), z(), z()],
        alpha: [z(), z(), z()],
        beta: [z(), z()],
        gamma: z(),
    }
}

pub fn sample_ball_3<R: Rng + ?Sized>(rng: &mut R, r: f64) -> TriMatrix3 {
    let mut z = || sample_disk(rng, r);
    TriMatrix3 {
        omega: [z(), z(), z()],
        alpha: [z(), z()],
        beta: z(),
    }
}

/// Uniform-ball draw rescaled so its norm is uniform in `[0.95, 1.05]`.
pub fn sample_near_boundary<R: Rng + ?Sized>(rng: &mut R) -> Result<TriMatrix4> {
    loop {
        let t = sample_ball_4(rng, BALL_RADIUS_4);
        let norm = crate::oracle::operator_norm(&t.to_dense())?;
        if norm > 0.0 {
            let target = rng.gen_range(0.95..=1.05);
            return Ok(t.scaled(target / norm));
        }
    }
}

/// `|omega2| = 1`, `|omega3| = 1` or both, with the entries sharing a row or
/// column with a unimodular diagonal entry set to zero.
pub fn sample_unimodular<R: Rng + ?Sized>(rng: &mut R) -> TriMatrix4 {
    let mut t = sample_ball_4(rng, BALL_RADIUS_4);
    let which = rng.gen_range(0..3);
    if which != 1 {
        t.omega[1] = sample_phase(rng);
        t.alpha[0] = ZERO;
        t.alpha[1] = ZERO;
        t.beta[1] = ZERO;
    }
    if which != 0 {
        t.omega[2] = sample_phase(rng);
        t.alpha[1] = ZERO;
        t.alpha[2] = ZERO;
        t.beta[0] = ZERO;
    }
    t
}

pub fn sample_4x4<R: Rng + ?Sized>(rng: &mut R, dist: Distribution) -> Result<TriMatrix4> {
    match dist {
        Distribution::UniformBall => Ok(sample_ball_4(rng, BALL_RADIUS_4)),
        Distribution::NearBoundary => sample_near_boundary(rng),
        Distribution::UnimodularDiagonal => Ok(sample_unimodular(rng)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub trial: u64,
    pub input: TriMatrix4,
    pub criterion: Verdict,
    pub oracle: Verdict,
    /// `1 - ||T||` from the oracle.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzReport {
    pub distribution: Distribution,
    pub seed: u64,
    pub trials: u64,
    pub agreements: u64,
    pub skipped_in_band: u64,
    pub disagreements: Vec<Disagreement>,
    /// Wall-clock seconds; ignored by equality.
    pub elapsed: f64,
}

impl PartialEq for FuzzReport {
    fn eq(&self, other: &Self) -> bool {
        self.distribution == other.distribution
            && self.seed == other.seed
            && self.trials == other.trials
            && self.agreements == other.agreements
            && self.skipped_in_band == other.skipped_in_band
            && self.disagreements == other.disagreements
    }
}

/// Result of comparing one verdict against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Agree,
    InBand,
    Disagree { criterion: Verdict, oracle: Verdict, margin: f64 },
}

/// Compares a criterion verdict with the oracle on `dense`, skipping inputs
/// whose norm is within [`BAND`] of 1.
pub fn compare_with_oracle(
    criterion: Result<Verdict>,
    dense: &crate::dense::DenseMatrix,
    tol: &Tolerances,
) -> Result<Outcome> {
    let oracle = is_contraction_oracle(dense, tol)?;
    let margin = oracle.residual("norm_margin").unwrap_or(f64::NAN);
    if margin.abs() < BAND {
        return Ok(Outcome::InBand);
    }
    let criterion = match criterion {
        Ok(v) if v.is_contraction == oracle.is_contraction => return Ok(Outcome::Agree),
        Ok(v) => v,
        Err(e) => {
            // a criterion error on finite input is always a disagreement
            let mut v = Verdict::new(Branch::PreconditionFailed);
            v.notes.push(format!("criterion error: {e}"));
            v
        }
    };
    Ok(Outcome::Disagree {
        criterion,
        oracle,
        margin,
    })
}

pub fn outcome_4x4(t: &TriMatrix4, tol: &Tolerances) -> Result<Outcome> {
    compare_with_oracle(check_contraction_4x4(t, tol), &t.to_dense(), tol)
}

pub fn outcome_3x3(t: &TriMatrix3, tol: &Tolerances) -> Result<Outcome> {
    compare_with_oracle(check_contraction_3x3(t, tol), &t.to_dense(), tol)
}

/// Runs `trials` comparisons of [`check_contraction_4x4`] against the
/// oracle. Errors only if the oracle itself fails.
pub fn run_fuzz(trials: u64, seed: u64, dist: Distribution, tol: &Tolerances) -> Result<FuzzReport> {
    let start = Instant::now();
    let outcomes: Vec<(u64, TriMatrix4, Outcome)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let t = sample_4x4(&mut rng, dist)?;
            Ok((i, t, outcome_4x4(&t, tol)?))
        })
        .collect::<Result<_>>()?;

    let mut report = FuzzReport {
        distribution: dist,
        seed,
        trials,
        agreements: 0,
        skipped_in_band: 0,
        disagreements: Vec::new(),
        elapsed: 0.0,
    };
    for (trial, input, outcome) in outcomes {
        match outcome {
            Outcome::Agree => report.agreements += 1,
            Outcome::InBand => report.skipped_in_band += 1,
            Outcome::Disagree {
                criterion,
                oracle,
                margin,
            } => report.disagreements.push(Disagreement {
                trial,
                input,
                criterion,
                oracle,
                margin,
            }),
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}
