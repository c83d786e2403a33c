//! Single-diode photovoltaic array model.
//!
//! Per module: I = I_ph − I_0·(exp((V + I·r_s)/(n·N_cell·V_t)) − 1)
//!             − (V + I·r_s)/r_sh,
//! with the photo current proportional to irradiance and V_t = kT/q. The
//! array scales voltage by the series count and current by the parallel
//! count. I_ph and I_0 are calibrated once from the module's short-circuit
//! current and open-circuit voltage at standard conditions (1000 W/m²,
//! 298.15 K).

use super::{check_param, PlantError};

const BOLTZMANN: f64 = 1.380_649e-23;
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const STC_TEMPERATURE_K: f64 = 298.15;
const STC_IRRADIANCE: f64 = 1000.0;

const MAX_NEWTON_ITERATIONS: usize = 100;
const CURRENT_RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvArray {
    pub n_series: u32,
    pub n_parallel: u32,
    pub i_sc_module: f64,
    pub v_oc_module: f64,
    pub cells_per_module: u32,
    pub ideality: f64,
    pub r_s: f64,
    pub r_sh: f64,
    pub irradiance: f64,
    pub temperature_k: f64,
    i_ph_stc: f64,
    i_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvArrayParams {
    pub n_series: u32,
    pub n_parallel: u32,
    pub i_sc_module: f64,
    pub v_oc_module: f64,
    pub cells_per_module: u32,
    pub ideality: f64,
    pub r_s: f64,
    pub r_sh: f64,
    pub irradiance: f64,
    pub temperature_k: f64,
}

impl Default for PvArrayParams {
    fn default() -> Self {
        Self {
            n_series: 18,
            n_parallel: 10,
            i_sc_module: 8.0,
            v_oc_module: 22.0,
            cells_per_module: 36,
            ideality: 1.3,
            r_s: 0.25,
            r_sh: 600.0,
            irradiance: 1000.0,
            temperature_k: STC_TEMPERATURE_K,
        }
    }
}

fn thermal_voltage(temperature_k: f64) -> f64 {
    BOLTZMANN * temperature_k / ELEMENTARY_CHARGE
}

impl PvArray {
    pub fn new(p: PvArrayParams) -> Result<Self, PlantError> {
        check_param("pv", "n_series", p.n_series >= 1, "must be >= 1")?;
        check_param("pv", "n_parallel", p.n_parallel >= 1, "must be >= 1")?;
        check_param("pv", "i_sc_module", p.i_sc_module > 0.0, "must be > 0 A")?;
        check_param("pv", "v_oc_module", p.v_oc_module > 0.0, "must be > 0 V")?;
        check_param("pv", "cells_per_module", p.cells_per_module >= 1, "must be >= 1")?;
        check_param(
            "pv",
            "ideality",
            (1.0..=2.0).contains(&p.ideality),
            "must be within [1, 2]",
        )?;
        check_param("pv", "r_s", p.r_s >= 0.0, "must be >= 0 ohm")?;
        check_param("pv", "r_sh", p.r_sh > 0.0, "must be > 0 ohm")?;
        check_param("pv", "irradiance", p.irradiance >= 0.0, "must be >= 0 W/m^2")?;
        check_param("pv", "temperature_k", p.temperature_k > 0.0, "must be > 0 K")?;

        // Calibrate the photo and saturation currents so the module meets
        // (i_sc, 0) and (0, v_oc) exactly at standard conditions.
        let a = p.ideality * p.cells_per_module as f64 * thermal_voltage(STC_TEMPERATURE_K);
        let e_sc = (p.i_sc_module * p.r_s / a).exp_m1();
        let e_oc = (p.v_oc_module / a).exp_m1();
        let k = e_sc / e_oc;
        let i_ph_stc =
            (p.i_sc_module * (1.0 + p.r_s / p.r_sh) - k * p.v_oc_module / p.r_sh) / (1.0 - k);
        let i_0 = (i_ph_stc - p.v_oc_module / p.r_sh) / e_oc;
        check_param("pv", "i_sc/v_oc", i_0 > 0.0 && i_ph_stc > 0.0, "inconsistent calibration pair")?;

        Ok(Self {
            n_series: p.n_series,
            n_parallel: p.n_parallel,
            i_sc_module: p.i_sc_module,
            v_oc_module: p.v_oc_module,
            cells_per_module: p.cells_per_module,
            ideality: p.ideality,
            r_s: p.r_s,
            r_sh: p.r_sh,
            irradiance: p.irradiance,
            temperature_k: p.temperature_k,
            i_ph_stc,
            i_0,
        })
    }

    fn gamma(&self) -> f64 {
        self.ideality * self.cells_per_module as f64 * thermal_voltage(self.temperature_k)
    }

    fn i_ph(&self) -> f64 {
        self.i_ph_stc * self.irradiance / STC_IRRADIANCE
    }

    /// Open-circuit voltage of the whole string at standard conditions.
    pub fn v_oc_array(&self) -> f64 {
        self.n_series as f64 * self.v_oc_module
    }

    /// Array current at a given array voltage, solved by damped Newton on the
    /// implicit module equation to |residual| < 1e-9 A.
    pub fn current(&self, v_array: f64) -> Result<f64, PlantError> {
        debug_assert!(v_array >= 0.0);
        let v_m = v_array / self.n_series as f64;
        let i_m = self.solve_module_current(v_m)?;
        Ok(self.n_parallel as f64 * i_m)
    }

    fn module_residual(&self, v_m: f64, i_m: f64) -> (f64, f64) {
        let a = self.gamma();
        let u = v_m + i_m * self.r_s;
        let arg = (u / a).min(60.0);
        let residual = self.i_ph() - self.i_0 * arg.exp_m1() - u / self.r_sh - i_m;
        let derivative = -self.i_0 * arg.exp() * self.r_s / a - self.r_s / self.r_sh - 1.0;
        (residual, derivative)
    }

    fn solve_module_current(&self, v_m: f64) -> Result<f64, PlantError> {
        let mut i = self.i_ph();
        let (mut f, mut df) = self.module_residual(v_m, i);
        for _ in 0..MAX_NEWTON_ITERATIONS {
            if f.abs() < CURRENT_RESIDUAL_TOLERANCE {
                return Ok(i);
            }
            let mut step = -f / df;
            // Damp until the residual shrinks; the residual is strictly
            // monotone in the current, so this always terminates.
            for _ in 0..60 {
                let candidate = i + step;
                let (f_new, df_new) = self.module_residual(v_m, candidate);
                if f_new.abs() < f.abs() {
                    i = candidate;
                    f = f_new;
                    df = df_new;
                    break;
                }
                step *= 0.5;
            }
        }
        if f.abs() < CURRENT_RESIDUAL_TOLERANCE {
            Ok(i)
        } else {
            Err(PlantError::PvSolveFailed {
                iterations: MAX_NEWTON_ITERATIONS,
                context: "module current",
            })
        }
    }

    /// Array voltage that makes the array carry `i_array`, clamped at zero
    /// when the demanded current exceeds what the array can source.
    pub fn voltage_for_current(&self, i_array: f64) -> Result<f64, PlantError> {
        let i_m = i_array / self.n_parallel as f64;
        let a = self.gamma();
        let rhs = self.i_ph() - i_m;
        // Solve i_0·expm1(u/a) + u/r_sh = rhs for u = v + i·r_s (strictly
        // increasing, convex).
        let mut u = if rhs > 0.0 {
            a * (rhs / self.i_0).ln_1p()
        } else {
            rhs * self.r_sh
        };
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let arg = (u / a).min(60.0);
            let h = self.i_0 * arg.exp_m1() + u / self.r_sh - rhs;
            if h.abs() < CURRENT_RESIDUAL_TOLERANCE {
                let v_m = u - i_m * self.r_s;
                return Ok((self.n_series as f64 * v_m).max(0.0));
            }
            let dh = self.i_0 * arg.exp() / a + 1.0 / self.r_sh;
            u -= h / dh;
        }
        Err(PlantError::PvSolveFailed {
            iterations: MAX_NEWTON_ITERATIONS,
            context: "module voltage",
        })
    }

    /// Brute-force maximum-power scan: 10⁴ uniform voltage steps from zero to
    /// the array open-circuit voltage. Used as ground truth for tracker
    /// tests.
    pub fn mpp_scan(&self) -> Result<(f64, f64), PlantError> {
        const STEPS: usize = 10_000;
        let v_max = self.v_oc_array();
        let mut best_v = 0.0;
        let mut best_p = 0.0;
        for k in 0..=STEPS {
            let v = v_max * (k as f64) / (STEPS as f64);
            let p = v * self.current(v)?;
            if p > best_p {
                best_p = p;
                best_v = v;
            }
        }
        Ok((best_v, best_p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn array() -> PvArray {
        PvArray::new(PvArrayParams::default()).unwrap()
    }

    /// Independent bisection on the same implicit module equation; used to
    /// cross-check the Newton path.
    fn bisect_module_current(pv: &PvArray, v_m: f64) -> f64 {
        let mut lo = -2.0 * pv.i_sc_module;
        let mut hi = 2.0 * pv.i_sc_module;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let (f, _) = pv.module_residual(v_m, mid);
            if f > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn short_circuit_without_series_resistance_gives_photo_current() {
        let pv = PvArray::new(PvArrayParams { r_s: 0.0, ..PvArrayParams::default() }).unwrap();
        let i = pv.current(0.0).unwrap();
        let expected = pv.n_parallel as f64 * pv.i_ph();
        assert!((i - expected).abs() < 1e-6);
    }

    #[test]
    fn short_circuit_at_stc_matches_datasheet() {
        let pv = array();
        let i = pv.current(0.0).unwrap();
        let expected = pv.n_parallel as f64 * pv.i_sc_module;
        assert!((i - expected).abs() < 1e-6, "i_sc {i} vs {expected}");
    }

    #[test]
    fn open_circuit_current_is_zero() {
        let pv = array();
        let i = pv.current(pv.v_oc_array()).unwrap();
        assert!(i.abs() < 1e-6, "current at v_oc: {i}");
        // Cross-check against the bisection oracle at the same voltage.
        let oracle = pv.n_parallel as f64 * bisect_module_current(&pv, pv.v_oc_module);
        assert!((i - oracle).abs() < 1e-6);
    }

    #[test]
    fn newton_matches_bisection_oracle_across_curve() {
        let pv = array();
        for k in 0..=20 {
            let v = pv.v_oc_array() * (k as f64) / 20.0;
            let newton = pv.current(v).unwrap();
            let oracle = pv.n_parallel as f64 * bisect_module_current(&pv, v / pv.n_series as f64);
            assert!(
                (newton - oracle).abs() < 1e-6,
                "v={v}: newton {newton} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn halved_irradiance_halves_short_circuit_current() {
        let mut pv = array();
        let full = pv.current(0.0).unwrap();
        pv.irradiance = 500.0;
        let half = pv.current(0.0).unwrap();
        assert!((half - 0.5 * full).abs() < 0.005 * full, "half {half} vs {}", 0.5 * full);
    }

    #[test]
    fn current_stays_below_scaled_short_circuit_rating() {
        for irradiance in [1000.0, 800.0, 600.0, 250.0] {
            let pv =
                PvArray::new(PvArrayParams { irradiance, ..PvArrayParams::default() }).unwrap();
            let bound = pv.n_parallel as f64 * pv.i_sc_module * irradiance / 1000.0;
            for k in 0..=50 {
                let v = pv.v_oc_array() * (k as f64) / 50.0;
                let i = pv.current(v).unwrap();
                assert!(i <= bound + 1e-6 * bound.max(1.0), "i {i} above bound {bound}");
            }
        }
    }

    #[test]
    fn mpp_scan_is_the_argmax_and_sits_in_the_knee() {
        let pv = array();
        let (v_mpp, p_mpp) = pv.mpp_scan().unwrap();
        for k in 0..100 {
            let v = pv.v_oc_array() * (k as f64) / 100.0;
            let p = v * pv.current(v).unwrap();
            assert!(p <= p_mpp + 1e-9);
        }
        let ratio = v_mpp / pv.v_oc_array();
        assert!((0.7..0.9).contains(&ratio), "v_mpp ratio {ratio}");
    }

    #[test]
    fn mpp_power_grows_with_irradiance() {
        let brighter = array().mpp_scan().unwrap().1;
        let dimmer = PvArray::new(PvArrayParams { irradiance: 600.0, ..PvArrayParams::default() })
            .unwrap()
            .mpp_scan()
            .unwrap()
            .1;
        assert!(brighter > dimmer);
    }

    #[test]
    fn power_curve_is_unimodal() {
        // No more than one sign change of the discrete derivative beyond
        // noise, for r_sh >> r_s.
        let pv = array();
        let mut previous_power = 0.0;
        let mut falling = false;
        for k in 1..=2000 {
            let v = pv.v_oc_array() * (k as f64) / 2000.0;
            let p = v * pv.current(v).unwrap();
            let dp = p - previous_power;
            if falling {
                assert!(dp <= 1e-9, "power rose again after the peak at v={v}");
            } else if dp < -1e-9 {
                falling = true;
            }
            previous_power = p;
        }
        assert!(falling, "never reached a maximum");
    }

    #[test]
    fn voltage_for_current_inverts_the_curve() {
        let pv = array();
        for k in 0..=20 {
            let v = pv.v_oc_array() * (k as f64) / 20.0 * 0.98;
            let i = pv.current(v).unwrap();
            let v_back = pv.voltage_for_current(i).unwrap();
            assert!((v_back - v).abs() < 1e-5 * (1.0 + v), "v {v} vs {v_back}");
        }
    }

    #[test]
    fn excess_current_demand_clamps_voltage_to_zero() {
        let pv = array();
        let i_max = pv.current(0.0).unwrap();
        let v = pv.voltage_for_current(1.5 * i_max).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PvArray::new(PvArrayParams { ideality: 2.5, ..PvArrayParams::default() }).is_err());
        assert!(PvArray::new(PvArrayParams { r_sh: 0.0, ..PvArrayParams::default() }).is_err());
        assert!(PvArray::new(PvArrayParams { n_series: 0, ..PvArrayParams::default() }).is_err());
    }
}
