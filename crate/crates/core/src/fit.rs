//! Least-squares fits of power laws.

#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares `y ≈ slope·x + intercept`; needs two distinct `x`.
pub fn ols(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - slope * a - intercept).collect();
    Some(LineFit {
        slope,
        intercept,
        residuals,
    })
}

/// Slope of `log value` against `log param`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Whether the first point was discarded as a transient (see [`loglog_fit`]).
    pub dropped_first: bool,
}

/// Fits `log y` against `log x`, ignoring non-positive or non-finite pairs.
///
/// `params` are ordered from the least to the most asymptotic. With four or
/// more points, the first is dropped when its distance from the line fitted
/// through the others exceeds three times their largest residual, which
/// removes a pre-asymptotic transient. Returns `None` when
/// fewer than three usable points remain.
pub fn loglog_fit(params: &[f64], values: &[f64]) -> Option<LogLogFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = params
        .iter()
        .zip(values)
        .filter(|(p, v)| **p > 0.0 && **v > 0.0 && p.is_finite() && v.is_finite())
        .map(|(p, v)| (p.ln(), v.ln()))
        .unzip();
    if lx.len() < 3 {
        return None;
    }
    let full = ols(&lx, &ly)?;
    if lx.len() >= 4 {
        // Judge the first point against the line through the others.
        let rest = ols(&lx[1..], &ly[1..])?;
        let first = (ly[0] - rest.slope * lx[0] - rest.intercept).abs();
        let others = rest.residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        if first > 3.0 * others && first > 1e-9 {
            return Some(LogLogFit {
                slope: rest.slope,
                intercept: rest.intercept,
                dropped_first: true,
            });
        }
    }
    Some(LogLogFit {
        slope: full.slope,
        intercept: full.intercept,
        dropped_first: false,
    })
}

/// `count` points spaced evenly in `log` between `lo` and `hi`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
