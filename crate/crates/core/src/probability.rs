//! Probability that a random subfamily is intersecting, when each member is
//! kept independently with probability `p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::family::SetFamily;
use crate::profile::{intersecting_profile, IntersectingProfile, ProfileError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbabilityError {
    #[error("p = {0} is outside [0, 1]")]
    POutOfRange(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("cannot parse `{0}` as a rational number")]
    BadRational(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ProbabilityResult {
    Exact {
        #[serde(serialize_with = "crate::report::rational")]
        p: BigRational,
        #[serde(serialize_with = "crate::report::rational")]
        exact: BigRational,
    },
    Estimate {
        p: f64,
        estimate: f64,
        stderr: f64,
        trials: u64,
        seed: u64,
    },
}

/// Parses `num/den` or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational, ProbabilityError> {
    let bad = || ProbabilityError::BadRational(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn check_p(p: &BigRational) -> Result<(), ProbabilityError> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(ProbabilityError::POutOfRange(p.to_string()));
    }
    Ok(())
}

/// `sum_s c_s p^s (1-p)^(N-s)` for a precomputed profile.
pub fn probability_from_profile(
    profile: &IntersectingProfile,
    p: &BigRational,
) -> Result<BigRational, ProbabilityError> {
    check_p(p)?;
    let q = BigRational::one() - p;
    let size = profile.size;
    let mut total = BigRational::zero();
    for (s, c) in profile.counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = pow(p, s) * pow(&q, size - s);
        total += term * BigRational::from_integer(BigInt::from(c.clone()));
    }
    Ok(total)
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Exact probability via the intersecting profile.
pub fn probability_eval(
    family: &SetFamily,
    p: &BigRational,
) -> Result<ProbabilityResult, ProbabilityError> {
    check_p(p)?;
    let profile = intersecting_profile(family)?;
    let exact = probability_from_profile(&profile, p)?;
    Ok(ProbabilityResult::Exact { p: p.clone(), exact })
}

/// Seeded Monte Carlo estimate. Identical arguments give identical output.
pub fn mc_estimate(
    family: &SetFamily,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<ProbabilityResult, ProbabilityError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ProbabilityError::POutOfRange(p.to_string()));
    }
    if trials == 0 {
        return Err(ProbabilityError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = family.members();
    let mut chosen = Vec::with_capacity(members.len());
    let mut hits = 0u64;
    for _ in 0..trials {
        chosen.clear();
        // draw every member so each trial consumes the same number of values
        for &m in members {
            if rng.random::<f64>() < p {
                chosen.push(m);
            }
        }
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen[i..].iter().all(|b| a.intersects(*b)));
        hits += u64::from(ok);
    }
    let estimate = hits as f64 / trials as f64;
    let stderr = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(ProbabilityResult::Estimate { p, estimate, stderr, trials, seed })
}
