//! Conditional value at risk over a discrete profit distribution.
//!
//! `CVaR_theta` is the expected profit over the worst `1 - theta`
//! probability tail, computed here in closed form: sort scenarios by
//! profit and fill the risk envelope `0 <= q_k <= p_k / (1 - theta)`,
//! `sum q = 1` greedily from the worst profit upward. Ties are broken by
//! scenario index so results are identical across platforms.

/// CVaR value with the extremal weights that attain it.
#[derive(Debug, Clone, PartialEq)]
pub struct CvarResult {
    /// The tail expectation (same unit as the profits).
    pub value: f64,
    /// Weights attaining the minimum over the risk envelope, in the
    /// original scenario order.
    pub weights: Vec<f64>,
    /// The value-at-risk level: the profit of the marginal scenario where
    /// the tail budget runs out.
    pub var_level: f64,
}

/// Compute CVaR at confidence `theta` for scenario `profits` with
/// probabilities `probs`.
///
/// Panics on malformed inputs (mismatched lengths, probabilities not
/// summing to one); callers hold validated probability vectors.
pub fn cvar(profits: &[f64], probs: &[f64], theta: f64) -> CvarResult {
    assert_eq!(profits.len(), probs.len(), "profits/probs length mismatch");
    assert!(!profits.is_empty(), "empty scenario set");
    assert!(theta > 0.0 && theta < 1.0, "theta must lie in (0,1)");
    let total: f64 = probs.iter().sum();
    assert!(
        (total - 1.0).abs() <= 1e-9,
        "probabilities must sum to 1, got {total}"
    );

    let cap = 1.0 / (1.0 - theta);
    let mut order: Vec<usize> = (0..profits.len()).collect();
    // worst profit first; ties by scenario index (sort_by is stable)
    order.sort_by(|&a, &b| profits[a].partial_cmp(&profits[b]).unwrap());

    let mut weights = vec![0.0; profits.len()];
    let mut remaining = 1.0f64;
    let mut value = 0.0f64;
    let mut var_level = profits[order[0]];
    for &k in &order {
        if remaining <= 0.0 {
            break;
        }
        let take = (probs[k] * cap).min(remaining);
        weights[k] = take;
        value += take * profits[k];
        var_level = profits[k];
        remaining -= take;
    }
    debug_assert!(remaining.abs() <= 1e-9, "envelope fill left {remaining}");
    CvarResult {
        value,
        weights,
        var_level,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_smaller_than_one_atom() {
        // 1 - theta = 0.05 < 1/3: all tail mass on the worst scenario
        let r = cvar(&[10.0, 20.0, 30.0], &[1.0 / 3.0; 3], 0.95);
        assert!((r.value - 10.0).abs() < 1e-12);
        assert_eq!(r.weights, vec![1.0, 0.0, 0.0]);
        assert_eq!(r.var_level, 10.0);
    }

    #[test]
    fn half_tail() {
        // cap = 2/3 per scenario: q = (2/3, 1/3, 0), value 40/3
        let r = cvar(&[10.0, 20.0, 30.0], &[1.0 / 3.0; 3], 0.5);
        assert!((r.value - 40.0 / 3.0).abs() < 1e-12);
        assert!((r.weights[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.weights[1] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.weights[2], 0.0);
        assert_eq!(r.var_level, 20.0);
    }

    #[test]
    fn constant_profits() {
        for theta in [0.1, 0.5, 0.95] {
            let r = cvar(&[7.5; 4], &[0.25; 4], theta);
            assert!((r.value - 7.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_broken_by_index() {
        let r = cvar(&[5.0, 5.0, 9.0], &[1.0 / 3.0; 3], 0.5);
        // scenario 0 fills first
        assert!((r.weights[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.weights[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn never_exceeds_expectation() {
        let profits = [3.0, -2.0, 8.0, 1.0];
        let probs = [0.1, 0.2, 0.3, 0.4];
        let expectation: f64 = profits.iter().zip(&probs).map(|(x, p)| x * p).sum();
        for theta in [0.05, 0.3, 0.6, 0.9, 0.99] {
            let r = cvar(&profits, &probs, theta);
            assert!(r.value <= expectation + 1e-12);
            // weights stay inside the envelope
            let cap = 1.0 / (1.0 - theta);
            for (q, p) in r.weights.iter().zip(&probs) {
                assert!(*q >= -1e-15 && *q <= p * cap + 1e-12);
            }
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
