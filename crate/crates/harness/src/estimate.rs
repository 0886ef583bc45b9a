//! Trial streams, parallel fan-out and confidence-interval verdicts.
//!
//! Trial `i` of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. Streams are
//! independent and addressable, so a trial can be replayed from `(s, i)`
//! alone and the thread schedule never changes a result.
//!
//! Intervals use the normal approximation: the half-width is `z · sd / √n`
//! with `sd` the sample standard deviation (utility mode) or
//! `√(f(1-f)/n)` for a frequency `f` (probability mode).

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use secretary_core::{Error, Result};

pub const DEFAULT_Z: f64 = 3.0;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Two-sided normal quantile for a confidence level in `(0, 1)`.
pub fn z_for_confidence(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Precondition(format!("confidence {confidence} must lie in (0, 1)")));
    }
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(n.inverse_cdf(0.5 + confidence / 2.0))
}

/// Runs `trials` trials in parallel; results come back in trial order.
pub fn run_trials<T, F>(trials: u64, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(seed, i)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Pass when the whole interval clears the bound, fail when it lies
/// entirely below.
pub fn verdict(mean: f64, half: f64, bound: f64) -> Verdict {
    if mean - half >= bound {
        Verdict::Pass
    } else if mean + half < bound {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Utility,
    Probability,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementFrequency {
    pub element: usize,
    pub frequency: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioEstimate {
    pub mode: Mode,
    pub trials: u64,
    /// Mean ratio (utility) or the smallest per-element frequency
    /// (probability).
    pub mean: f64,
    pub half_width: f64,
    pub bound: f64,
    pub per_element: Vec<ElementFrequency>,
    pub verdict: Verdict,
}

impl RatioEstimate {
    /// Acceptance reading: anything that is not a clear failure.
    pub fn within_tolerance(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

impl fmt::Display for RatioEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.mode {
            Mode::Utility => "mean ratio",
            Mode::Probability => "min frequency",
        };
        write!(
            f,
            "{what} {:.4} ± {:.4} vs bound {:.4} over {} trials: {}",
            self.mean, self.half_width, self.bound, self.trials, self.verdict
        )
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanCi {
    pub mean: f64,
    pub sd: f64,
    pub half_width: f64,
}

pub fn mean_ci(xs: &[f64], z: f64) -> MeanCi {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let sd = var.sqrt();
    MeanCi {
        mean,
        sd,
        half_width: z * sd / n.sqrt(),
    }
}

/// Utility mode over per-trial ratios `w(ALG)/w(OPT)`.
pub fn utility_estimate(ratios: &[f64], bound: f64, z: f64) -> RatioEstimate {
    let ci = mean_ci(ratios, z);
    RatioEstimate {
        mode: Mode::Utility,
        trials: ratios.len() as u64,
        mean: ci.mean,
        half_width: ci.half_width,
        bound,
        per_element: Vec::new(),
        verdict: verdict(ci.mean, ci.half_width, bound),
    }
}

/// Probability mode: `hits[i]` counts trials selecting `elements[i]`. Passes
/// when every element clears the bound; fails when any lies wholly below.
pub fn probability_estimate(elements: &[usize], hits: &[u64], trials: u64, bound: f64, z: f64) -> RatioEstimate {
    let n = trials as f64;
    let per_element: Vec<ElementFrequency> = elements
        .iter()
        .zip(hits)
        .map(|(&element, &h)| {
            let f = h as f64 / n;
            ElementFrequency {
                element,
                frequency: f,
                half_width: z * (f * (1.0 - f) / n).sqrt(),
            }
        })
        .collect();
    let verdicts: Vec<Verdict> = per_element
        .iter()
        .map(|x| verdict(x.frequency, x.half_width, bound))
        .collect();
    let overall = if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if verdicts.iter().all(|&v| v == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let worst = per_element
        .iter()
        .min_by(|a, b| a.frequency.total_cmp(&b.frequency))
        .cloned();
    RatioEstimate {
        mode: Mode::Probability,
        trials,
        mean: worst.as_ref().map_or(1.0, |w| w.frequency),
        half_width: worst.map_or(0.0, |w| w.half_width),
        bound,
        per_element,
        verdict: overall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn verdict_bands() {
        assert_eq!(verdict(0.5, 0.1, 0.3), Verdict::Pass);
        assert_eq!(verdict(0.1, 0.1, 0.3), Verdict::Fail);
        assert_eq!(verdict(0.25, 0.1, 0.3), Verdict::Inconclusive);
    }

    #[test]
    fn zero_trials_is_an_error() {
        assert!(run_trials(0, 1, |_, _| Ok(())).is_err());
    }

    #[test]
    fn streams_are_replayable_and_order_free() {
        let xs = run_trials(64, 11, |_, rng| Ok(rng.gen::<u64>())).unwrap();
        assert_eq!(xs[37], trial_rng(11, 37).gen::<u64>());
        let again = run_trials(64, 11, |_, rng| Ok(rng.gen::<u64>())).unwrap();
        assert_eq!(xs, again);
        assert_ne!(xs[0], xs[1]);
    }

    #[test]
    fn z_matches_three_sigma() {
        let z = z_for_confidence(0.9973).unwrap();
        assert!((z - 3.0).abs() < 0.01, "{z}");
        assert!(z_for_confidence(1.0).is_err());
    }

    #[test]
    fn probability_mode_uses_worst_element() {
        let est = probability_estimate(&[3, 5], &[600, 280], 1000, 0.25, 3.0);
        assert_eq!(est.mean, 0.28);
        assert_eq!(est.verdict, Verdict::Inconclusive);
        let est = probability_estimate(&[3], &[100], 1000, 0.25, 3.0);
        assert_eq!(est.verdict, Verdict::Fail);
    }
}
