//! PI regulator with clamping anti-windup.

use super::ControlError;

/// Proportional-integral controller whose integral only accumulates while the
/// output is unsaturated, so the output never leaves [out_min, out_max] and
/// never winds up against the clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiController {
    pub kp: f64,
    pub ki: f64,
    integral: f64,
    out_min: f64,
    out_max: f64,
}

impl PiController {
    pub fn new(kp: f64, ki: f64, out_min: f64, out_max: f64) -> Result<Self, ControlError> {
        if !(out_min < out_max) {
            return Err(ControlError::InvalidParameter {
                name: "pi output limits",
                message: format!("out_min ({out_min}) must be below out_max ({out_max})"),
            });
        }
        Ok(Self { kp, ki, integral: 0.0, out_min, out_max })
    }

    /// Symmetric limits ±limit.
    pub fn symmetric(kp: f64, ki: f64, limit: f64) -> Result<Self, ControlError> {
        Self::new(kp, ki, -limit, limit)
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// One update: out = clamp(kp·e + ki·∫e); the integral keeps its new
    /// value only when the unclamped output stayed inside the limits.
    pub fn step(&mut self, error: f64, dt: f64) -> f64 {
        debug_assert!(dt > 0.0);
        let candidate = self.integral + error * dt;
        let raw = self.kp * error + self.ki * candidate;
        if raw >= self.out_min && raw <= self.out_max {
            self.integral = candidate;
            raw
        } else {
            raw.clamp(self.out_min, self.out_max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_error_keeps_integral_and_output() {
        let mut pi = PiController::new(0.5, 20.0, -50.0, 50.0).unwrap();
        pi.step(1.0, 0.1); // accumulate something
        let integral = pi.integral();
        let out = pi.step(0.0, 0.1);
        assert_eq!(pi.integral(), integral);
        assert!((out - 20.0 * integral).abs() < 1e-12);
    }

    #[test]
    fn constant_error_accumulates_closed_form() {
        let (kp, ki, e, dt, n) = (0.5, 20.0, 0.3, 1e-3, 200);
        let mut pi = PiController::new(kp, ki, -50.0, 50.0).unwrap();
        let mut out = 0.0;
        for _ in 0..n {
            out = pi.step(e, dt);
        }
        let expected = kp * e + ki * e * (n as f64) * dt;
        assert!((out - expected).abs() < 1e-9);
    }

    #[test]
    fn saturation_freezes_the_integral() {
        let mut pi = PiController::new(1.0, 10.0, -1.0, 1.0).unwrap();
        for _ in 0..100 {
            let out = pi.step(5.0, 0.1);
            assert_eq!(out, 1.0);
        }
        // The integral froze on the first saturated step, so a small
        // negative error recovers immediately instead of fighting windup.
        assert!(pi.integral() <= 0.5);
        let out = pi.step(-1.5, 0.1);
        assert!(out < 1.0);
    }

    #[test]
    fn output_always_inside_limits() {
        let mut pi = PiController::new(2.0, 100.0, -3.0, 7.0).unwrap();
        for k in 0..10_000 {
            let error = (k as f64 * 0.37).sin() * 50.0;
            let out = pi.step(error, 1e-3);
            assert!((-3.0..=7.0).contains(&out));
        }
    }

    #[test]
    fn rejects_inverted_limits() {
        assert!(PiController::new(1.0, 1.0, 2.0, -2.0).is_err());
        assert!(PiController::new(1.0, 1.0, 1.0, 1.0).is_err());
    }
}
