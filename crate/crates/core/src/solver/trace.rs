use std::fmt::Write;

use super::state::SolverState;
use super::Algorithm;

pub const TRACE_HEADER: &str = "iter,residual_msq,obj_gap,grad_norm,u_track_err,s_track_err";

/// Diagnostics of one iterate; residual and objective gap are NaN when no
/// reference solution was supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub k: usize,
    /// `(1/N) sum_i ||x_i - x_i*||^2`.
    pub residual_msq: f64,
    pub obj_gap: f64,
    pub grad_norm: f64,
    pub u_track_err: f64,
    pub s_track_err: f64,
}

#[derive(Debug, Clone)]
pub struct IterTrace {
    pub algorithm: Algorithm,
    pub records: Vec<IterRecord>,
    /// Whether the run stopped on the gradient tolerance.
    pub converged: bool,
    pub final_state: SolverState,
}

impl IterTrace {
    /// Number of rounds executed.
    pub fn iterations(&self) -> usize {
        self.final_state.k
    }

    pub fn last(&self) -> &IterRecord {
        self.records.last().expect("trace holds the initial record")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(
                out,
                "{},{:e},{:e},{:e},{:e},{:e}",
                r.k, r.residual_msq, r.obj_gap, r.grad_norm, r.u_track_err, r.s_track_err
            )
            .unwrap();
        }
        out
    }

    /// Per-iteration linear rate of `||x_k - x*||` over the trace tail,
    /// see [`tail_rate`].
    pub fn measured_rate(&self) -> Option<f64> {
        let dist: Vec<f64> = self.records.iter().map(|r| r.residual_msq.sqrt()).collect();
        tail_rate(&dist)
    }
}

/// `10^slope` of the least-squares line through `log10(values)` over the
/// final 20% of the sequence (at least 30 points). Nonpositive or
/// non-finite values end the usable prefix.
pub fn tail_rate(values: &[f64]) -> Option<f64> {
    const MIN_POINTS: usize = 30;
    let usable = values.iter().take_while(|v| **v > 0.0 && v.is_finite()).count();
    if usable < MIN_POINTS {
        return None;
    }
    let count = (usable / 5).max(MIN_POINTS);
    let start = usable - count;
    let pts: Vec<(f64, f64)> = (start..usable).map(|k| (k as f64, values[k].log10())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(10f64.powf(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_rate_of_geometric_sequence() {
        let v: Vec<f64> = (0..200).map(|k| 3.0 * 0.9f64.powi(k)).collect();
        assert!((tail_rate(&v).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn tail_rate_needs_enough_points() {
        let v: Vec<f64> = (0..29).map(|k| 0.5f64.powi(k)).collect();
        assert!(tail_rate(&v).is_none());
        let mut w: Vec<f64> = (0..100).map(|k| 0.5f64.powi(k)).collect();
        w[20] = 0.0;
        assert!(tail_rate(&w).is_none());
    }
}
