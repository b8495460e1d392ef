//! Built-in system and market configurations.
//!
//! The generation fleet, demand calibration, and the eight market parameter
//! columns mirror the Spanish-system case the models were calibrated on.
//! Base values used for percent normalization live here too.

use crate::market::{DemandCurve, DispatchableGen, MarketConfig, ReservePolicy, SystemConfig};

/// Demand intercept (EUR/MWh).
pub const GAMMA0: f64 = 209.78;
/// Demand slope (EUR/MWh per MWh).
pub const PHI0: f64 = 0.0056;
/// CVaR confidence level.
pub const THETA: f64 = 0.95;
/// Rated wind capacity (MW).
pub const WIND_CAPACITY: f64 = 22573.0;

/// Base values for percent-of-base normalization.
pub mod base {
    /// Day-ahead demand (MWh).
    pub const DEMAND: f64 = 30120.39;
    /// Equilibrium price (EUR/MWh).
    pub const PRICE: f64 = 78.15;
    /// Gross welfare (EUR); net welfare shares this base.
    pub const WELFARE: f64 = 3_552_878.90;
    /// Consumer payment (EUR); the reserve capacity payment shares this
    /// base so the two percentages can be added.
    pub const PAYMENT: f64 = 1_837_531.10;
}

/// Generation capacity tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CapacityTier {
    High,
    Low,
    VeryLow,
}

/// (tech, high MW, low MW, very low MW, cost EUR/MWh, ramp % of capacity)
const FLEET: [(&str, f64, f64, f64, f64, f64); 9] = [
    ("CCGT", 0.0, 3274.98, 1274.98, 44.31, 53.33),
    ("CCGT", 0.0, 2056.58, 2056.58, 43.88, 53.33),
    ("CCGT", 10632.7, 2153.5, 2153.5, 43.45, 53.33),
    ("Nuclear", 1519.23, 1519.23, 1519.23, 10.91, 2.08),
    ("Nuclear", 6053.35, 6053.35, 6053.35, 10.29, 2.08),
    ("Coal", 2035.89, 2035.89, 2035.89, 37.5, 20.0),
    ("Coal", 5119.13, 5119.13, 5119.13, 38.44, 25.0),
    ("Coal", 1198.12, 1198.12, 1198.12, 19.77, 25.0),
    ("Coal", 1945.51, 1945.51, 1945.51, 20.24, 25.0),
];

fn fleet(tier: CapacityTier) -> Vec<DispatchableGen> {
    FLEET
        .iter()
        .enumerate()
        .map(|(i, &(tech, hi, lo, vlo, cost, ramp_pct))| {
            let capacity = match tier {
                CapacityTier::High => hi,
                CapacityTier::Low => lo,
                CapacityTier::VeryLow => vlo,
            };
            DispatchableGen {
                id: i + 1,
                technology: tech.to_string(),
                capacity,
                cost,
                ramp_up: ramp_pct / 100.0,
                ramp_down: ramp_pct / 100.0,
            }
        })
        .collect()
}

/// The five generation/ramping configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemPreset {
    /// High generation, high ramping (lambda = 0).
    HH,
    /// High generation, low ramping (lambda = 1).
    HL,
    /// Low generation, low ramping (lambda = 1); the reference situation.
    LL,
    /// Very low generation, low ramping (lambda = 1).
    VLL,
    /// Very low generation, high ramping (lambda = 0).
    VLH,
}

impl SystemPreset {
    pub const ALL: [SystemPreset; 5] = [
        SystemPreset::HH,
        SystemPreset::HL,
        SystemPreset::LL,
        SystemPreset::VLL,
        SystemPreset::VLH,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SystemPreset::HH => "HH",
            SystemPreset::HL => "HL",
            SystemPreset::LL => "LL",
            SystemPreset::VLL => "VLL",
            SystemPreset::VLH => "VLH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

/// The eight market parameter columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarketPreset {
    WindL,
    WindH,
    FiPL,
    FiPH,
    RiskL,
    RiskH,
    ResL,
    ResH,
}

impl MarketPreset {
    pub const ALL: [MarketPreset; 8] = [
        MarketPreset::WindL,
        MarketPreset::WindH,
        MarketPreset::FiPL,
        MarketPreset::FiPH,
        MarketPreset::RiskL,
        MarketPreset::RiskH,
        MarketPreset::ResL,
        MarketPreset::ResH,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MarketPreset::WindL => "WindL",
            MarketPreset::WindH => "WindH",
            MarketPreset::FiPL => "FiPL",
            MarketPreset::FiPH => "FiPH",
            MarketPreset::RiskL => "RiskL",
            MarketPreset::RiskH => "RiskH",
            MarketPreset::ResL => "ResL",
            MarketPreset::ResH => "ResH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
    }
}

/// Build a system configuration from a preset.
pub fn system_preset(preset: SystemPreset) -> SystemConfig {
    let (tier, lambda) = match preset {
        SystemPreset::HH => (CapacityTier::High, 0.0),
        SystemPreset::HL => (CapacityTier::High, 1.0),
        SystemPreset::LL => (CapacityTier::Low, 1.0),
        SystemPreset::VLL => (CapacityTier::VeryLow, 1.0),
        SystemPreset::VLH => (CapacityTier::VeryLow, 0.0),
    };
    SystemConfig {
        generators: fleet(tier),
        wind_capacity: WIND_CAPACITY,
        demand: DemandCurve {
            gamma0: GAMMA0,
            phi0: PHI0,
        },
        lambda,
        voll: GAMMA0,
        reserve: ReservePolicy::default(),
    }
}

/// Build a market configuration from a preset.
pub fn market_preset(preset: MarketPreset) -> MarketConfig {
    let (mu, fip, psi, my) = match preset {
        MarketPreset::WindL => (0.0401, 30.0, 0.40, 0.15),
        MarketPreset::WindH => (0.65, 30.0, 0.40, 0.15),
        MarketPreset::FiPL => (0.2383, 0.0, 0.40, 0.15),
        MarketPreset::FiPH => (0.2383, 80.0, 0.40, 0.15),
        MarketPreset::RiskL => (0.2383, 30.0, 0.00, 0.15),
        MarketPreset::RiskH => (0.2383, 30.0, 1.00, 0.15),
        MarketPreset::ResL => (0.2383, 0.0, 0.40, 0.60),
        MarketPreset::ResH => (0.2383, 80.0, 0.40, 0.60),
    };
    MarketConfig {
        mu,
        fip,
        psi,
        my,
        theta: THETA,
    }
}

/// All built-in presets: (systems, markets).
pub fn builtin_presets() -> (Vec<(SystemPreset, SystemConfig)>, Vec<(MarketPreset, MarketConfig)>) {
    (
        SystemPreset::ALL
            .iter()
            .map(|&p| (p, system_preset(p)))
            .collect(),
        MarketPreset::ALL
            .iter()
            .map(|&p| (p, market_preset(p)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_totals() {
        let hh = system_preset(SystemPreset::HH);
        assert!((hh.total_dispatchable_capacity() - 28503.93).abs() < 1e-9);
        assert_eq!(hh.lambda, 0.0);

        let ll = system_preset(SystemPreset::LL);
        assert!((ll.total_dispatchable_capacity() - 25356.29).abs() < 1e-9);
        assert_eq!(ll.lambda, 1.0);

        let vll = system_preset(SystemPreset::VLL);
        assert!((vll.total_dispatchable_capacity() - 23356.29).abs() < 1e-9);

        for p in SystemPreset::ALL {
            let sys = system_preset(p);
            assert_eq!(sys.wind_capacity, 22573.0);
            sys.validate().unwrap();
        }
    }

    #[test]
    fn market_columns() {
        let risk_h = market_preset(MarketPreset::RiskH);
        assert_eq!(risk_h.psi, 1.0);
        assert_eq!(risk_h.mu, 0.2383);
        assert_eq!(risk_h.fip, 30.0);
        assert_eq!(risk_h.my, 0.15);

        let res_h = market_preset(MarketPreset::ResH);
        assert_eq!(res_h.fip, 80.0);
        assert_eq!(res_h.my, 0.60);

        let res_l = market_preset(MarketPreset::ResL);
        assert_eq!(res_l.fip, 0.0);
        assert_eq!(res_l.my, 0.60);

        for p in MarketPreset::ALL {
            market_preset(p).validate().unwrap();
        }
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(SystemPreset::parse("ll"), Some(SystemPreset::LL));
        assert_eq!(SystemPreset::parse("nope"), None);
        assert_eq!(MarketPreset::parse("windh"), Some(MarketPreset::WindH));
        assert_eq!(MarketPreset::parse("RESL"), Some(MarketPreset::ResL));
    }
}
