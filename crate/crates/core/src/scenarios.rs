//! Wind-availability scenario construction.
//!
//! The wind load factor (output over rated capacity) is modeled as a Beta
//! random variable whose mean is the forecast `mu` and whose standard
//! deviation follows the empirical linear law `sigma = mu/5 + 1/50`. The
//! unit interval is split into `n` segments of equal probability and each
//! scenario takes the conditional mean of the load factor on its segment,
//! so the probability-weighted scenario values reproduce `mu` exactly.
//!
//! Everything here is deterministic: no sampling is involved anywhere.

use crate::numerics::{inv_reg_inc_beta, reg_inc_beta, NumericsError};
use thiserror::Error;

/// Slope of the empirical sigma(mu) law.
pub const SIGMA_SLOPE: f64 = 0.2;
/// Intercept of the empirical sigma(mu) law.
pub const SIGMA_INTERCEPT: f64 = 0.02;
/// Default number of equal-probability scenarios.
pub const DEFAULT_SCENARIO_COUNT: usize = 12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScenarioError {
    #[error("mean load factor must lie strictly inside (0,1), got {0}")]
    MeanOutOfRange(f64),
    #[error("variance {sigma_sq} is infeasible for a Beta fit with mean {mu} (needs sigma^2 < mu(1-mu))")]
    InfeasibleVariance { mu: f64, sigma_sq: f64 },
    #[error("scenario count must be at least 1")]
    EmptyPartition,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Fitted Beta-distribution parameters for the wind load factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    /// Mean load factor (p.u.).
    pub mu: f64,
    /// Standard deviation (p.u.).
    pub sigma: f64,
    /// First shape parameter.
    pub alpha: f64,
    /// Second shape parameter.
    pub beta: f64,
}

/// Equal-probability wind scenario set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    /// Conditional-mean load factor of each segment (p.u., strictly increasing).
    pub values: Vec<f64>,
    /// Scenario probabilities (each 1/n).
    pub probabilities: Vec<f64>,
    /// Segment breakpoints, 0 = z_1 < z_2 < ... < z_{n+1} = 1.
    pub breakpoints: Vec<f64>,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Probability-weighted mean of the scenario values.
    pub fn expected_value(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.probabilities)
            .map(|(v, p)| v * p)
            .sum()
    }
}

/// Empirical standard deviation of the load factor: sigma = mu/5 + 1/50.
pub fn sigma_of_mu(mu: f64) -> Result<f64, ScenarioError> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(ScenarioError::MeanOutOfRange(mu));
    }
    Ok(SIGMA_SLOPE * mu + SIGMA_INTERCEPT)
}

/// Moment-match Beta shape parameters to (mu, sigma).
pub fn beta_params(mu: f64, sigma: f64) -> Result<BetaParams, ScenarioError> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(ScenarioError::MeanOutOfRange(mu));
    }
    let sigma_sq = sigma * sigma;
    if !(sigma_sq > 0.0 && sigma_sq < mu * (1.0 - mu)) {
        return Err(ScenarioError::InfeasibleVariance { mu, sigma_sq });
    }
    let alpha = mu * mu * (1.0 - mu) / sigma_sq - mu;
    let beta = alpha * (1.0 / mu - 1.0);
    Ok(BetaParams {
        mu,
        sigma,
        alpha,
        beta,
    })
}

/// Breakpoints z_1..z_{n+1} such that each segment carries probability 1/n.
pub fn equal_prob_breakpoints(params: &BetaParams, n: usize) -> Result<Vec<f64>, ScenarioError> {
    if n == 0 {
        return Err(ScenarioError::EmptyPartition);
    }
    let mut z = Vec::with_capacity(n + 1);
    z.push(0.0);
    for k in 1..n {
        let p = k as f64 / n as f64;
        z.push(inv_reg_inc_beta(p, params.alpha, params.beta)?);
    }
    z.push(1.0);
    Ok(z)
}

/// Conditional mean of the load factor on each segment.
///
/// Uses the partial-expectation identity
/// `int_0^z x f_{a,b}(x) dx = mean * I_z(a+1, b)` evaluated at the segment
/// ends; the result is divided by the segment probability 1/n so the
/// probability-weighted values average back to the distribution mean.
pub fn segment_conditional_means(
    params: &BetaParams,
    breakpoints: &[f64],
) -> Result<Vec<f64>, ScenarioError> {
    let n = breakpoints.len().saturating_sub(1);
    if n == 0 {
        return Err(ScenarioError::EmptyPartition);
    }
    let mean = params.alpha / (params.alpha + params.beta);
    let mut upper_cdf = Vec::with_capacity(n + 1);
    for &z in breakpoints {
        upper_cdf.push(reg_inc_beta(z, params.alpha + 1.0, params.beta)?);
    }
    let seg_prob = 1.0 / n as f64;
    let values = (0..n)
        .map(|k| mean * (upper_cdf[k + 1] - upper_cdf[k]) / seg_prob)
        .collect();
    Ok(values)
}

/// Build the full scenario set for a mean load factor `mu`.
pub fn build_scenarios(mu: f64, n: usize) -> Result<ScenarioSet, ScenarioError> {
    let sigma = sigma_of_mu(mu)?;
    let params = beta_params(mu, sigma)?;
    let breakpoints = equal_prob_breakpoints(&params, n)?;
    let values = segment_conditional_means(&params, &breakpoints)?;
    let probabilities = vec![1.0 / n as f64; n];
    Ok(ScenarioSet {
        values,
        probabilities,
        breakpoints,
    })
}

/// Convenience wrapper with the default 12-scenario partition.
pub fn build_default_scenarios(mu: f64) -> Result<ScenarioSet, ScenarioError> {
    build_scenarios(mu, DEFAULT_SCENARIO_COUNT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sigma_law() {
        assert!((sigma_of_mu(0.2383).unwrap() - 0.06766).abs() < 1e-12);
        assert!((sigma_of_mu(0.65).unwrap() - 0.15).abs() < 1e-12);
        assert!(sigma_of_mu(0.0).is_err());
        assert!(sigma_of_mu(1.0).is_err());
        assert!(sigma_of_mu(-0.2).is_err());
    }

    #[test]
    fn beta_params_symmetric() {
        let p = beta_params(0.5, 0.05f64.sqrt()).unwrap();
        assert!((p.alpha - 2.0).abs() < 1e-12);
        assert!((p.beta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn beta_params_wind_shapes() {
        let p = beta_params(0.2383, 0.06766).unwrap();
        assert!((p.alpha - 9.211).abs() < 0.01);
        assert!((p.beta - 29.44).abs() < 0.01);
        // full-precision closed forms
        assert!((p.alpha - 9.210312826656976).abs() < 1e-12);
        assert!((p.beta - 29.439761980967766).abs() < 1e-12);

        let p = beta_params(0.0401, 0.02802).unwrap();
        assert!((p.alpha - 1.926).abs() < 0.01);
        assert!((p.beta - 46.10).abs() < 0.01);
    }

    #[test]
    fn beta_params_mean_matches() {
        for &(mu, sigma) in &[(0.2383, 0.06766), (0.0401, 0.02802), (0.65, 0.15)] {
            let p = beta_params(mu, sigma).unwrap();
            let mean = p.alpha / (p.alpha + p.beta);
            assert!((mean - mu).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_params_infeasible_variance() {
        match beta_params(0.97, 0.214) {
            Err(ScenarioError::InfeasibleVariance { .. }) => {}
            other => panic!("expected infeasible variance, got {other:?}"),
        }
    }

    #[test]
    fn breakpoints_uniform() {
        let params = beta_params(0.5, (1.0f64 / 12.0).sqrt() - 1e-9).unwrap();
        // alpha = beta = 1 corresponds to the uniform distribution; build it directly
        let uniform = BetaParams {
            mu: 0.5,
            sigma: (1.0f64 / 12.0).sqrt(),
            alpha: 1.0,
            beta: 1.0,
        };
        let z = equal_prob_breakpoints(&uniform, 12).unwrap();
        for (k, zk) in z.iter().enumerate() {
            assert!((zk - k as f64 / 12.0).abs() < 1e-12, "z_{k} = {zk}");
        }
        drop(params);
    }

    #[test]
    fn breakpoints_single_segment() {
        let p = beta_params(0.2383, 0.06766).unwrap();
        let z = equal_prob_breakpoints(&p, 1).unwrap();
        assert_eq!(z, vec![0.0, 1.0]);
    }

    #[test]
    fn breakpoints_cdf_residual() {
        let p = beta_params(0.2383, 0.06766).unwrap();
        let z = equal_prob_breakpoints(&p, 12).unwrap();
        assert_eq!(z.len(), 13);
        for k in 1..12 {
            assert!(z[k] > z[k - 1]);
            let cdf = reg_inc_beta(z[k], p.alpha, p.beta).unwrap();
            assert!((cdf - k as f64 / 12.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn conditional_means_uniform() {
        let uniform = BetaParams {
            mu: 0.5,
            sigma: (1.0f64 / 12.0).sqrt(),
            alpha: 1.0,
            beta: 1.0,
        };
        let z = equal_prob_breakpoints(&uniform, 12).unwrap();
        let vals = segment_conditional_means(&uniform, &z).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let want = (2 * k + 1) as f64 / 24.0;
            assert!((v - want).abs() < 1e-12, "zeta_{k} = {v}, want {want}");
        }
    }

    #[test]
    fn symmetric_mu_gives_symmetric_values() {
        // symmetric sigma choice => alpha = beta => values mirror around 0.5
        let p = beta_params(0.5, 0.12).unwrap();
        assert!((p.alpha - p.beta).abs() < 1e-12);
        let z = equal_prob_breakpoints(&p, 12).unwrap();
        let vals = segment_conditional_means(&p, &z).unwrap();
        for k in 0..12 {
            let mirror = 1.0 - vals[11 - k];
            assert!((vals[k] - mirror).abs() < 1e-8);
        }
    }

    #[test]
    fn scenario_set_shape_and_interleaving() {
        let s = build_default_scenarios(0.2383).unwrap();
        assert_eq!(s.len(), 12);
        let sum_p: f64 = s.probabilities.iter().sum();
        assert!((sum_p - 1.0).abs() < 1e-9);
        for p in &s.probabilities {
            assert!((p - 1.0 / 12.0).abs() < 1e-9);
        }
        for k in 0..12 {
            assert!(
                s.breakpoints[k] < s.values[k] && s.values[k] < s.breakpoints[k + 1],
                "scenario {k}: value {} outside ({}, {})",
                s.values[k],
                s.breakpoints[k],
                s.breakpoints[k + 1]
            );
            if k > 0 {
                assert!(s.values[k] > s.values[k - 1]);
            }
        }
    }

    #[test]
    fn law_of_total_expectation() {
        for &mu in &[0.0401, 0.2383, 0.65] {
            let s = build_default_scenarios(mu).unwrap();
            let rel = (s.expected_value() - mu).abs() / mu;
            assert!(rel < 1e-6, "mu={mu}: relative error {rel}");
        }
    }

    proptest! {
        #[test]
        fn total_expectation_random_mu(mu in 0.02f64..0.9) {
            let s = build_default_scenarios(mu).unwrap();
            let rel = (s.expected_value() - mu).abs() / mu;
            prop_assert!(rel < 1e-6);
        }
    }
}
