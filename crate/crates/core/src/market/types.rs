//! Market data model: fleets, demand curve, reserve policy, and the
//! configuration bundles swept by the harness.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("scenario weights must sum to 1 within 1e-9 (got {0})")]
    BadWeights(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A dispatchable generating unit.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchableGen {
    pub id: usize,
    pub technology: String,
    /// Capacity (MW).
    pub capacity: f64,
    /// Marginal cost (EUR/MWh).
    pub cost: f64,
    /// Upward ramping slope as a fraction of capacity (p.u.).
    pub ramp_up: f64,
    /// Downward ramping slope as a fraction of capacity (p.u.).
    pub ramp_down: f64,
}

impl DispatchableGen {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.capacity < 0.0 || self.cost < 0.0 {
            return Err(ModelError::InvalidConfig(format!(
                "generator {}: capacity and cost must be nonnegative",
                self.id
            )));
        }
        for (label, r) in [("ramp_up", self.ramp_up), ("ramp_down", self.ramp_down)] {
            if !(0.0..=1.0).contains(&r) {
                return Err(ModelError::InvalidConfig(format!(
                    "generator {}: {label} must lie in [0,1], got {r}",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

/// Linear inverse demand: price = gamma0 - phi0 * quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandCurve {
    /// Intercept (EUR/MWh).
    pub gamma0: f64,
    /// Slope (EUR/MWh per MWh).
    pub phi0: f64,
}

impl DemandCurve {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.gamma0 > 0.0) || !(self.phi0 > 0.0) {
            return Err(ModelError::InvalidConfig(
                "demand curve needs gamma0 > 0 and phi0 > 0".into(),
            ));
        }
        Ok(())
    }

    /// Inverse-demand price at quantity `d`.
    pub fn price_at(&self, d: f64) -> f64 {
        self.gamma0 - self.phi0 * d
    }
}

/// TSO reserve requirement policy.
///
/// The requirement is `mx * sum(x) + my * y`; committed upward reserve must
/// stay within `[a_lo, a_up]` of it, and committed downward reserve within
/// `[b, 1] * (upward reserve)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservePolicy {
    /// Balancing reserve factor for dispatchable generation (p.u.).
    pub mx: f64,
    /// Balancing reserve factor for wind (p.u.).
    pub my: f64,
    /// Upper factor on the upward-reserve band (p.u.).
    pub a_up: f64,
    /// Lower factor on the upward-reserve band (p.u.).
    pub a_lo: f64,
    /// Lower factor tying downward to upward reserve (p.u.).
    pub b: f64,
}

impl ReservePolicy {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..=1.0).contains(&self.mx) || !(0.0..=1.0).contains(&self.my) {
            return Err(ModelError::InvalidConfig(
                "reserve factors mx, my must lie in [0,1]".into(),
            ));
        }
        if self.a_lo > self.a_up {
            return Err(ModelError::InvalidConfig(
                "reserve band needs a_lo <= a_up".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(ModelError::InvalidConfig("b must lie in [0,1]".into()));
        }
        Ok(())
    }

    /// Policy with the wind balancing factor replaced.
    pub fn with_my(self, my: f64) -> Self {
        ReservePolicy { my, ..self }
    }
}

impl Default for ReservePolicy {
    fn default() -> Self {
        ReservePolicy {
            mx: 0.02,
            my: 0.15,
            a_up: 1.1,
            a_lo: 0.9,
            b: 0.4,
        }
    }
}

/// Reserve required by the TSO for a given schedule.
pub fn reserve_requirement(x: &[f64], y: f64, policy: &ReservePolicy) -> f64 {
    policy.mx * x.iter().sum::<f64>() + policy.my * y
}

/// Full physical system: fleet, wind, demand, and ramping availability.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub generators: Vec<DispatchableGen>,
    /// Rated wind capacity (MW).
    pub wind_capacity: f64,
    pub demand: DemandCurve,
    /// Fraction of ramp capability already committed by the schedule
    /// and thus unavailable for reserve (p.u.).
    pub lambda: f64,
    /// Value of lost load (EUR/MWh); defaults to the demand intercept.
    pub voll: f64,
    /// Reserve policy constants (my is overridden per market config).
    pub reserve: ReservePolicy,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.generators.is_empty() {
            return Err(ModelError::InvalidConfig(
                "need at least one dispatchable generator".into(),
            ));
        }
        for g in &self.generators {
            g.validate()?;
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(ModelError::InvalidConfig(format!(
                "lambda must lie in [0,1], got {}",
                self.lambda
            )));
        }
        if self.wind_capacity < 0.0 {
            return Err(ModelError::InvalidConfig(
                "wind capacity must be nonnegative".into(),
            ));
        }
        self.demand.validate()?;
        self.reserve.validate()?;
        Ok(())
    }

    pub fn total_dispatchable_capacity(&self) -> f64 {
        self.generators.iter().map(|g| g.capacity).sum()
    }
}

/// Swept market parameters plus fixed risk constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketConfig {
    /// Mean wind load factor (p.u.).
    pub mu: f64,
    /// Feed-in premium on scheduled wind (EUR/MWh).
    pub fip: f64,
    /// Risk aversion weight in [0,1]; 0 is risk neutral.
    pub psi: f64,
    /// Wind balancing reserve factor override (p.u.).
    pub my: f64,
    /// CVaR confidence level in (0,1).
    pub theta: f64,
}

impl MarketConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(ModelError::InvalidConfig(format!(
                "mu must lie in (0,1), got {}",
                self.mu
            )));
        }
        if !(0.0..=1.0).contains(&self.psi) {
            return Err(ModelError::InvalidConfig(format!(
                "psi must lie in [0,1], got {}",
                self.psi
            )));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(ModelError::InvalidConfig(format!(
                "theta must lie in (0,1), got {}",
                self.theta
            )));
        }
        if self.fip < 0.0 {
            return Err(ModelError::InvalidConfig("fip must be nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.my) {
            return Err(ModelError::InvalidConfig(format!(
                "my must lie in [0,1], got {}",
                self.my
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requirement_arithmetic() {
        let pol = ReservePolicy {
            mx: 0.02,
            my: 0.15,
            ..ReservePolicy::default()
        };
        let x = vec![4000.0, 6000.0];
        assert!((reserve_requirement(&x, 5000.0, &pol) - 950.0).abs() < 1e-12);
        assert_eq!(reserve_requirement(&[0.0], 0.0, &pol), 0.0);
        let pol = pol.with_my(0.60);
        let x = vec![20000.0];
        assert!((reserve_requirement(&x, 10000.0, &pol) - 6400.0).abs() < 1e-12);
    }

    #[test]
    fn validation_catches_bad_ranges() {
        let mut g = DispatchableGen {
            id: 1,
            technology: "CCGT".into(),
            capacity: 100.0,
            cost: 40.0,
            ramp_up: 0.5,
            ramp_down: 0.5,
        };
        assert!(g.validate().is_ok());
        g.ramp_up = 1.5;
        assert!(g.validate().is_err());

        let curve = DemandCurve {
            gamma0: 0.0,
            phi0: 0.01,
        };
        assert!(curve.validate().is_err());

        let mkt = MarketConfig {
            mu: 0.2,
            fip: 30.0,
            psi: 1.2,
            my: 0.15,
            theta: 0.95,
        };
        assert!(mkt.validate().is_err());
    }

    #[test]
    fn price_at_quantity() {
        let curve = DemandCurve {
            gamma0: 209.78,
            phi0: 0.0056,
        };
        assert!((curve.price_at(0.0) - 209.78).abs() < 1e-12);
    }
}
