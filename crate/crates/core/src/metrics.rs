//! The six reported market quantities and their percent-of-base
//! normalization: day-ahead demand, equilibrium price, gross and net
//! welfare, consumer payment, and the reserve capacity payment.

use crate::market::{DemandCurve, MarketConfig, MarketSolution, ModelKind, SystemConfig};
use crate::presets::base;
use crate::scenarios::ScenarioSet;
use crate::solvers::cvar;

/// Base values used for percent normalization. The two payment metrics
/// share one base so their percentages can be added into a global payment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseValues {
    pub demand: f64,
    pub price: f64,
    pub welfare: f64,
    pub payment: f64,
}

impl Default for BaseValues {
    fn default() -> Self {
        BaseValues {
            demand: base::DEMAND,
            price: base::PRICE,
            welfare: base::WELFARE,
            payment: base::PAYMENT,
        }
    }
}

/// The six reported quantities, raw and as percent of base.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub model: ModelKind,
    pub system_tag: String,
    pub market_tag: String,
    pub demand_da: f64,
    pub equil_price: f64,
    pub gross_welfare: f64,
    pub net_welfare: f64,
    pub consumer_payment: f64,
    pub reserve_capacity_payment: f64,
    pub pct_demand: f64,
    pub pct_price: f64,
    pub pct_gross: f64,
    pub pct_net: f64,
    pub pct_consumer: f64,
    pub pct_reserve: f64,
}

/// Inverse-demand price at the day-ahead quantity.
pub fn equilibrium_price(d: f64, curve: &DemandCurve) -> f64 {
    curve.price_at(d)
}

/// Consumer payment for energy: price times quantity.
pub fn consumer_payment(d: f64, curve: &DemandCurve) -> f64 {
    curve.price_at(d) * d
}

/// Payment for committed reserve capacities,
/// `sum_g ru_g (kappa_up - gamma_up) + rd_g (kappa_down - gamma_down)`.
/// Negative values are penalties rebated to the consumer.
pub fn reserve_capacity_payment(sol: &MarketSolution) -> f64 {
    let up = sol.total_reserve_up() * (sol.kappa_up - sol.gamma_up);
    let down = sol.total_reserve_down() * (sol.kappa_down - sol.gamma_down);
    up + down
}

/// Gross welfare: the co-optimized objective evaluated at the given primal
/// point, with the CVaR term recomputed exactly from the realized scenario
/// profits (not read off the solution's auxiliaries). Both market designs
/// are scored with this same function.
pub fn gross_welfare(
    sol: &MarketSolution,
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
) -> f64 {
    let d = sol.demand;
    let deterministic =
        sys.demand.gamma0 * d - 0.5 * sys.demand.phi0 * d * d + mkt.fip * sol.wind_schedule;
    let expected: f64 = sol
        .scenario_profits
        .iter()
        .zip(&scen.probabilities)
        .map(|(delta, p)| delta * p)
        .sum();
    let risk = if mkt.psi > 0.0 {
        cvar(&sol.scenario_profits, &scen.probabilities, mkt.theta).value
    } else {
        0.0
    };
    deterministic + (1.0 - mkt.psi) * expected + mkt.psi * risk
}

/// Net welfare: gross welfare minus the feed-in-premium payment.
pub fn net_welfare(gross: f64, wind_schedule: f64, fip: f64) -> f64 {
    gross - fip * wind_schedule
}

/// Evaluate all six metrics for a solution.
pub fn compute_metrics(
    sol: &MarketSolution,
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    bases: &BaseValues,
    system_tag: &str,
    market_tag: &str,
) -> MetricsReport {
    let gross = gross_welfare(sol, sys, mkt, scen);
    let net = net_welfare(gross, sol.wind_schedule, mkt.fip);
    let price = equilibrium_price(sol.demand, &sys.demand);
    let consumer = consumer_payment(sol.demand, &sys.demand);
    let reserve = reserve_capacity_payment(sol);
    MetricsReport {
        model: sol.model,
        system_tag: system_tag.to_string(),
        market_tag: market_tag.to_string(),
        demand_da: sol.demand,
        equil_price: price,
        gross_welfare: gross,
        net_welfare: net,
        consumer_payment: consumer,
        reserve_capacity_payment: reserve,
        pct_demand: 100.0 * sol.demand / bases.demand,
        pct_price: 100.0 * price / bases.price,
        pct_gross: 100.0 * gross / bases.welfare,
        pct_net: 100.0 * net / bases.welfare,
        pct_consumer: 100.0 * consumer / bases.payment,
        pct_reserve: 100.0 * reserve / bases.payment,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> DemandCurve {
        DemandCurve {
            gamma0: 209.78,
            phi0: 0.0056,
        }
    }

    #[test]
    fn price_examples() {
        let c = curve();
        assert!((equilibrium_price(0.0, &c) - 209.78).abs() < 1e-12);
        assert!((equilibrium_price(30120.39, &c) - 41.11).abs() < 0.01);
        let flat = DemandCurve {
            gamma0: 209.78,
            phi0: 0.0,
        };
        assert_eq!(equilibrium_price(12345.0, &flat), 209.78);
    }

    #[test]
    fn consumer_payment_examples() {
        let c = curve();
        assert_eq!(consumer_payment(0.0, &c), 0.0);
        let pay = consumer_payment(30120.39, &c);
        assert!((pay - 1.238e6).abs() < 1e3, "payment {pay}");
        let choke = c.gamma0 / c.phi0;
        assert!(consumer_payment(choke, &c).abs() < 1e-6);
    }

    #[test]
    fn net_welfare_arithmetic() {
        assert_eq!(net_welfare(100.0, 2.0, 0.0), 100.0);
        assert_eq!(net_welfare(100.0, 2.0, 30.0), 40.0);
    }

    #[test]
    fn normalization_constants() {
        let b = BaseValues::default();
        assert_eq!(b.demand, 30120.39);
        assert_eq!(b.price, 78.15);
        assert_eq!(b.welfare, 3_552_878.90);
        assert_eq!(b.payment, 1_837_531.10);
    }
}
