//! Power metrics over paired voltage/current windows.

use super::spectrum::{dft_spectrum, rms, thd};
use super::{AnalysisError, DEFAULT_HARMONIC_CEILING};

/// Window-averaged power quantities for one voltage/current pair.
///
/// `p_active` is the true mean of v·i. The fundamental phasors supply the
/// displacement terms: `p_fundamental` and `q_reactive_var` are the active
/// and reactive power carried at the fundamental, and `dpf` is the cosine of
/// the angle between the fundamental phasors. `p_harmonic_va` is the residual
/// distortion volt-amperes √(S² − P₁² − Q₁²).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub f1: f64,
    pub v_rms: f64,
    pub i_rms: f64,
    pub p_active: f64,
    pub p_fundamental: f64,
    pub q_reactive_var: f64,
    pub p_harmonic_va: f64,
    pub s_apparent: f64,
    pub pf: f64,
    pub dpf: f64,
    pub thd_v: f64,
    pub thd_i: f64,
}

/// Compute the power metrics of synchronized `v` and `i` windows.
pub fn power_metrics(
    v: &[f64],
    i: &[f64],
    f1: f64,
    fs: f64,
) -> Result<PowerReport, AnalysisError> {
    if v.len() != i.len() {
        return Err(AnalysisError::LengthMismatch { left: v.len(), right: i.len() });
    }
    let v_spec = dft_spectrum(v, f1, fs, DEFAULT_HARMONIC_CEILING)?;
    let i_spec = dft_spectrum(i, f1, fs, DEFAULT_HARMONIC_CEILING)?;

    let v_rms = rms(v);
    let i_rms = rms(i);
    let s_apparent = v_rms * i_rms;
    if !(s_apparent > 0.0) {
        return Err(AnalysisError::NoFundamental);
    }

    let p_active = v.iter().zip(i).map(|(v, i)| v * i).sum::<f64>() / v.len() as f64;

    let v1 = v_spec.magnitude(1);
    let i1 = i_spec.magnitude(1);
    if !(v1 > 0.0 && i1 > 0.0) {
        return Err(AnalysisError::NoFundamental);
    }
    // Phases follow the cos(ωt − φ) convention, so a current peaking after
    // the voltage (a lag) has the larger φ; positive angle = lag.
    let angle = i_spec.phases[1] - v_spec.phases[1];
    let p_fundamental = 0.5 * v1 * i1 * angle.cos();
    let q_reactive_var = 0.5 * v1 * i1 * angle.sin();
    let p_harmonic_va =
        (s_apparent * s_apparent - p_fundamental * p_fundamental - q_reactive_var * q_reactive_var)
            .max(0.0)
            .sqrt();

    Ok(PowerReport {
        f1,
        v_rms,
        i_rms,
        p_active,
        p_fundamental,
        q_reactive_var,
        p_harmonic_va,
        s_apparent,
        pf: p_active / s_apparent,
        dpf: angle.cos(),
        thd_v: thd(&v_spec)?,
        thd_i: thd(&i_spec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn wave(spc: usize, cycles: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..spc * cycles)
            .map(|k| f(2.0 * PI * (k as f64) / (spc as f64)))
            .collect()
    }

    #[test]
    fn in_phase_sines_have_unity_factors() {
        let v = wave(400, 5, |wt| 325.0 * wt.sin());
        let i = wave(400, 5, |wt| 10.0 * wt.sin());
        let r = power_metrics(&v, &i, 50.0, 20_000.0).unwrap();
        assert!((r.pf - 1.0).abs() < 1e-9);
        assert!((r.dpf - 1.0).abs() < 1e-9);
        assert!(r.q_reactive_var.abs() < 1e-6);
        assert!((r.p_active - 0.5 * 325.0 * 10.0).abs() < 1e-6);
    }

    #[test]
    fn sixty_degree_lag_halves_displacement_factor() {
        let v = wave(600, 4, |wt| wt.sin());
        let i = wave(600, 4, |wt| (wt - PI / 3.0).sin());
        let r = power_metrics(&v, &i, 50.0, 30_000.0).unwrap();
        assert!((r.dpf - 0.5).abs() < 1e-9);
        assert!((r.p_active - 0.5 * 0.5).abs() < 1e-9);
        assert!(r.q_reactive_var > 0.0, "lagging current must read positive vars");
    }

    #[test]
    fn flat_topped_bridge_current_yields_three_over_pi() {
        // 120°-conduction quasi-square current against a clean sine: DPF ≈ 1,
        // PF = 3/π.
        let spc = 3600;
        let v = wave(spc, 5, |wt| wt.sin());
        let i = wave(spc, 5, |wt| {
            // +1 when the phase voltage is the largest of the balanced set,
            // −1 when it is the smallest; matches an ideal bridge with flat
            // DC current.
            let a = wt.sin();
            let b = (wt - 2.0 * PI / 3.0).sin();
            let c = (wt + 2.0 * PI / 3.0).sin();
            if a >= b && a >= c {
                1.0
            } else if a <= b && a <= c {
                -1.0
            } else {
                0.0
            }
        });
        let r = power_metrics(&v, &i, 50.0, 50.0 * spc as f64).unwrap();
        assert!((r.pf - 3.0 / PI).abs() < 0.01, "pf = {}", r.pf);
        assert!(r.dpf > 0.999, "dpf = {}", r.dpf);
        assert!(r.pf <= r.dpf);
    }

    #[test]
    fn distortion_volt_amperes_pick_up_harmonic_content() {
        let v = wave(400, 5, |wt| wt.sin());
        let i = wave(400, 5, |wt| wt.sin() + 0.3 * (5.0 * wt).sin());
        let r = power_metrics(&v, &i, 50.0, 20_000.0).unwrap();
        assert!(r.p_harmonic_va > 0.0);
        assert!(r.pf < r.dpf);
        assert!(r.s_apparent * r.s_apparent >= r.p_active * r.p_active);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let v = vec![0.0; 400];
        let i = vec![0.0; 800];
        assert!(matches!(
            power_metrics(&v, &i, 50.0, 20_000.0),
            Err(AnalysisError::LengthMismatch { .. })
        ));
    }
}
