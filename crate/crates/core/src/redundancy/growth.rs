use serde::Serialize;

use crate::derivation::Derivation;

use super::RedundancyError;

/// Power-law fit `size ≈ constant * m^exponent`. Finite data cannot show a
/// family is super-polynomial; this is a diagnostic only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Sorted by `m`.
    pub points: Vec<(u64, usize)>,
    pub exponent: f64,
    pub constant: f64,
    /// Exponents fitted on each run of three consecutive points.
    pub window_exponents: Vec<f64>,
    /// Window exponents strictly increase.
    pub increasing: bool,
    pub diagnostic: bool,
}

fn least_squares(points: &[(u64, usize)]) -> (f64, f64) {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.1 as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, (my - slope * mx).exp())
}

pub fn growth_fit(points: &[(u64, usize)]) -> Result<GrowthFit, RedundancyError> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    let mut ms: Vec<u64> = pts.iter().map(|p| p.0).collect();
    ms.dedup();
    if ms.len() < 3 || pts.iter().any(|p| p.0 == 0 || p.1 == 0) {
        return Err(RedundancyError::TooFewPoints(ms.len()));
    }
    let (exponent, constant) = least_squares(&pts);
    let window_exponents: Vec<f64> = pts.windows(3).map(|w| least_squares(w).0).collect();
    let increasing = window_exponents.len() > 1 && window_exponents.windows(2).all(|w| w[1] > w[0]);
    Ok(GrowthFit {
        points: pts,
        exponent,
        constant,
        window_exponents,
        increasing,
        diagnostic: true,
    })
}

/// Fit over node counts of a family of proofs.
pub fn growth_fit_proofs(family: &[(u64, Derivation)]) -> Result<GrowthFit, RedundancyError> {
    let pts: Vec<(u64, usize)> = family.iter().map(|(m, d)| (*m, d.size())).collect();
    growth_fit(&pts)
}
