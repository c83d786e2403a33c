//! Perturb-and-observe maximum-power-point tracking.
//!
//! The tracker perturbs the boost duty cycle directly: if the measured power
//! rose since the previous update the perturbation direction is kept,
//! otherwise it flips. Updates run once per `update_period`, well below the
//! simulation rate, so the plant settles between observations.

use super::ControlError;
use crate::plant::boost::MAX_DUTY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbObserve {
    pub step_size: f64,
    pub update_period: f64,
    last_power: f64,
    last_duty: f64,
    direction: f64,
}

impl PerturbObserve {
    pub fn new(step_size: f64, update_period: f64, initial_duty: f64) -> Result<Self, ControlError> {
        if !(step_size > 0.0 && step_size <= 0.02) {
            return Err(ControlError::InvalidParameter {
                name: "mppt step_size",
                message: format!("must be in (0, 0.02], got {step_size}"),
            });
        }
        if !(update_period > 0.0) {
            return Err(ControlError::InvalidParameter {
                name: "mppt update_period",
                message: "must be > 0 s".into(),
            });
        }
        if !(0.0..=MAX_DUTY).contains(&initial_duty) {
            return Err(ControlError::InvalidParameter {
                name: "mppt initial duty",
                message: format!("must be within [0, {MAX_DUTY}], got {initial_duty}"),
            });
        }
        Ok(Self {
            step_size,
            update_period,
            last_power: 0.0,
            last_duty: initial_duty,
            direction: 1.0,
        })
    }

    pub fn duty(&self) -> f64 {
        self.last_duty
    }

    /// One tracking update with the freshly measured array power. Call once
    /// per `update_period`, not per simulation step. The measured array
    /// voltage is accepted alongside the power for instrumentation symmetry;
    /// the duty-perturbing rule itself only compares powers.
    pub fn step(&mut self, p_now: f64, _v_now: f64) -> f64 {
        if p_now <= self.last_power {
            self.direction = -self.direction;
        }
        self.last_duty = (self.last_duty + self.direction * self.step_size).clamp(0.0, MAX_DUTY);
        self.last_power = p_now;
        self.last_duty
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rising_power_keeps_direction() {
        let mut t = PerturbObserve::new(0.005, 0.01, 0.5).unwrap();
        t.step(100.0, 300.0);
        let duty = t.step(110.0, 301.0);
        assert!((duty - 0.51).abs() < 1e-12);
    }

    #[test]
    fn falling_power_reverses() {
        let mut t = PerturbObserve::new(0.005, 0.01, 0.5).unwrap();
        t.step(100.0, 300.0);
        let duty = t.step(90.0, 299.0);
        assert!((duty - 0.5).abs() < 1e-12, "one step up then one back down");
        let duty = t.step(95.0, 299.5);
        assert!((duty - 0.495).abs() < 1e-12, "keeps going down while power rises");
    }

    #[test]
    fn duty_respects_clamp() {
        let mut t = PerturbObserve::new(0.02, 0.01, 0.94).unwrap();
        for _ in 0..10 {
            let duty = t.step(1.0 + t.duty(), 0.0);
            assert!((0.0..=MAX_DUTY).contains(&duty));
        }
    }

    #[test]
    fn converges_on_a_static_power_curve() {
        // Quadratic power hill in duty with the peak at 0.62; after settling
        // the tracker must oscillate within 3 perturbation steps of it.
        let p = |d: f64| 4000.0 - 60_000.0 * (d - 0.62) * (d - 0.62);
        let mut t = PerturbObserve::new(0.005, 0.01, 0.4).unwrap();
        let mut duty = t.duty();
        let mut history = Vec::new();
        for k in 0..400 {
            duty = t.step(p(duty), 0.0);
            if k >= 300 {
                history.push(duty);
            }
        }
        let lo = history.iter().cloned().fold(f64::MAX, f64::min);
        let hi = history.iter().cloned().fold(f64::MIN, f64::max);
        assert!(hi - lo <= 3.0 * 0.005 + 1e-12, "window {lo}..{hi}");
        assert!(lo <= 0.62 && 0.62 <= hi, "window {lo}..{hi} must straddle the peak");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PerturbObserve::new(0.0, 0.01, 0.5).is_err());
        assert!(PerturbObserve::new(0.05, 0.01, 0.5).is_err());
        assert!(PerturbObserve::new(0.005, 0.0, 0.5).is_err());
        assert!(PerturbObserve::new(0.005, 0.01, 0.97).is_err());
    }
}
