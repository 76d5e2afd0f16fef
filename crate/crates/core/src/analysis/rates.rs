use crate::{Error, Result};

/// Observed orders `ln(e_{k−1}/e_k) / ln(h_{k−1}/h_k)` for `k ≥ 1`.
pub fn convergence_rates(h: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    if h.len() != e.len() {
        return Err(Error::DimensionMismatch {
            context: "mesh sizes vs errors",
            expected: h.len(),
            found: e.len(),
        });
    }
    if h.len() < 2 {
        return Err(Error::NotEnoughLevels { needed: 2, got: h.len() });
    }
    if let Some(level) = e.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveError { level, value: e[level] });
    }
    if let Some(k) = h.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(Error::NonDecreasingMeshSize { level: k + 1 });
    }
    Ok(h.windows(2)
        .zip(e.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect())
}
