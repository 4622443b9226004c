use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub error: f64,
}

/// Samples `(t, error)` of a convergence run with the fitted exponential
/// decay rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub samples: Vec<TracePoint>,
    /// `−slope` of `ln error` against `t` on the tail; `None` when fewer than
    /// two samples are above the noise floor.
    pub fitted_rate: Option<f64>,
    /// Rate predicted from the weight data, when known.
    pub predicted_rate: Option<f64>,
    pub limit: Vec<f64>,
    /// Grid points dropped by the overflow guard.
    #[serde(default)]
    pub dropped: usize,
}

impl ConvergenceTrace {
    /// Fits the rate on the last half of the samples whose error exceeds
    /// `floor`.
    pub fn new(samples: Vec<TracePoint>, floor: f64, predicted_rate: Option<f64>, limit: Vec<f64>) -> Self {
        let usable: Vec<&TracePoint> = samples
            .iter()
            .filter(|p| p.error > floor && p.error.is_finite())
            .collect();
        let tail = &usable[usable.len() / 2..];
        let fitted_rate = if tail.len() >= 2 {
            let k = tail.len() as f64;
            let mt = tail.iter().map(|p| p.t).sum::<f64>() / k;
            let my = tail.iter().map(|p| p.error.ln()).sum::<f64>() / k;
            let sxy: f64 = tail.iter().map(|p| (p.t - mt) * (p.error.ln() - my)).sum();
            let sxx: f64 = tail.iter().map(|p| (p.t - mt).powi(2)).sum();
            (sxx > 0.0).then(|| -sxy / sxx)
        } else {
            None
        };
        Self {
            samples,
            fitted_rate,
            predicted_rate,
            limit,
            dropped: 0,
        }
    }

    pub fn error_at(&self, t: f64) -> Option<f64> {
        self.samples.iter().find(|p| (p.t - t).abs() < 1e-12).map(|p| p.error)
    }

    /// `|fitted − predicted| ≤ rel · predicted`.
    pub fn rate_matches(&self, rel: f64) -> bool {
        match (self.fitted_rate, self.predicted_rate) {
            (Some(f), Some(p)) => (f - p).abs() <= rel * p,
            _ => false,
        }
    }

    /// Columns `t,error,log_error`, natural logarithm.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,error,log_error\n");
        for p in &self.samples {
            writeln!(s, "{},{:e},{}", p.t, p.error, p.error.ln()).unwrap();
        }
        s
    }
}
