//! Temporal calibration: lag estimation between two sampled signals by
//! normalized cross-correlation, refined to sub-sample precision.

use super::TransformError;

/// A uniformly sampled scalar signal.
#[derive(Debug, Clone)]
pub struct SampledSignal {
    pub rate_hz: f64,
    pub samples: Vec<f64>,
}

impl SampledSignal {
    pub fn new(rate_hz: f64, samples: Vec<f64>) -> Result<Self, TransformError> {
        if !(rate_hz.is_finite() && rate_hz > 0.0) {
            return Err(TransformError::InvalidInput(format!(
                "sample rate must be positive, got {rate_hz}"
            )));
        }
        Ok(SampledSignal { rate_hz, samples })
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.rate_hz
    }
}

/// Estimates the lag (seconds) of `b` relative to `a`.
///
/// Positive result: `b` is a delayed copy of `a`. The lag maximizing the
/// normalized cross-correlation of the mean-removed signals is found over
/// all integer lags inside `search_window`, then refined by parabolic
/// interpolation of the correlation peak.
pub fn estimate_latency(
    a: &SampledSignal,
    b: &SampledSignal,
    search_window: f64,
) -> Result<f64, TransformError> {
    if (a.rate_hz - b.rate_hz).abs() > 1e-9 * a.rate_hz {
        return Err(TransformError::InvalidInput(format!(
            "sample rates differ: {} vs {}",
            a.rate_hz, b.rate_hz
        )));
    }
    if search_window <= 0.0 {
        return Err(TransformError::InvalidInput(
            "search window must be positive".into(),
        ));
    }
    if a.duration() <= 2.0 * search_window || b.duration() <= 2.0 * search_window {
        return Err(TransformError::InvalidInput(
            "signal duration must exceed twice the search window".into(),
        ));
    }
    let xs = mean_removed(&a.samples);
    let ys = mean_removed(&b.samples);
    if variance(&xs) == 0.0 || variance(&ys) == 0.0 {
        return Err(TransformError::DegenerateSignal(
            "zero-variance signal has no correlation peak".into(),
        ));
    }

    let max_lag = (search_window * a.rate_hz).ceil() as i64;
    let mut best = (0i64, f64::NEG_INFINITY);
    let mut scores = std::collections::HashMap::new();
    for lag in -max_lag..=max_lag {
        let r = ncc_at_lag(&xs, &ys, lag);
        scores.insert(lag, r);
        // Periodic signals produce equal peaks one period apart; prefer
        // the smallest lag magnitude on exact ties.
        if r > best.1 || (r == best.1 && lag.abs() < best.0.abs()) {
            best = (lag, r);
        }
    }
    let (peak, peak_r) = best;
    // Parabolic refinement over the three samples around the peak.
    let refined = match (scores.get(&(peak - 1)), scores.get(&(peak + 1))) {
        (Some(&rl), Some(&rr)) => {
            let denom = rl - 2.0 * peak_r + rr;
            if denom.abs() > 1e-15 {
                let delta = 0.5 * (rl - rr) / denom;
                peak as f64 + delta.clamp(-0.5, 0.5)
            } else {
                peak as f64
            }
        }
        _ => peak as f64,
    };
    Ok(refined / a.rate_hz)
}

fn mean_removed(samples: &[f64]) -> Vec<f64> {
    let mean = samples.iter().sum::<f64>() / samples.len().max(1) as f64;
    samples.iter().map(|s| s - mean).collect()
}

fn variance(samples: &[f64]) -> f64 {
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len().max(1) as f64
}

/// Pearson correlation of `x[n]` against `y[n + lag]` over their overlap.
fn ncc_at_lag(xs: &[f64], ys: &[f64], lag: i64) -> f64 {
    let n = xs.len() as i64;
    let m = ys.len() as i64;
    let start = 0.max(-lag);
    let end = n.min(m - lag);
    if end - start < 2 {
        return f64::NEG_INFINITY;
    }
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in start..end {
        let x = xs[i as usize];
        let y = ys[(i + lag) as usize];
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    if sxx == 0.0 || syy == 0.0 {
        return f64::NEG_INFINITY;
    }
    sxy / (sxx * syy).sqrt()
}
