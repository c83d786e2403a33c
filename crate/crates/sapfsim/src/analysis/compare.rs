//! Before/after comparison of power-quality reports.

use super::power::PowerReport;
use super::spectrum::HarmonicSpectrum;
use super::AnalysisError;

/// Per-harmonic before/after current magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDelta {
    pub harmonic: usize,
    pub before: f64,
    pub after: f64,
}

/// Side-by-side power-quality comparison. `thd_limit_pass` applies the common
/// 5% current-THD planning limit to the after-state; `degraded` flags a
/// comparison where compensation made distortion worse (reported, not an
/// error).
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub f1: f64,
    pub thd_before: f64,
    pub thd_after: f64,
    /// THD reduction factor (before/after); `None` when the after-THD is zero.
    pub reduction_factor: Option<f64>,
    pub pf_before: f64,
    pub pf_after: f64,
    pub dpf_before: f64,
    pub dpf_after: f64,
    pub thd_limit_pass: bool,
    pub degraded: bool,
    pub harmonic_deltas: Vec<HarmonicDelta>,
}

/// THD threshold used for the pass flag (5%, the usual planning limit).
pub const THD_PASS_LIMIT: f64 = 0.05;

/// Build a before/after comparison from two reports and the matching current
/// spectra. Errors when the fundamentals differ.
pub fn compare_report(
    before: &PowerReport,
    before_current: &HarmonicSpectrum,
    after: &PowerReport,
    after_current: &HarmonicSpectrum,
) -> Result<Comparison, AnalysisError> {
    if before.f1 != after.f1 {
        return Err(AnalysisError::MismatchedFundamental {
            before: before.f1,
            after: after.f1,
        });
    }

    let n = before_current
        .magnitudes
        .len()
        .min(after_current.magnitudes.len());
    let harmonic_deltas = (1..n)
        .map(|h| HarmonicDelta {
            harmonic: h,
            before: before_current.magnitude(h),
            after: after_current.magnitude(h),
        })
        .collect();

    let thd_before = before.thd_i;
    let thd_after = after.thd_i;
    Ok(Comparison {
        f1: before.f1,
        thd_before,
        thd_after,
        reduction_factor: (thd_after > 0.0).then(|| thd_before / thd_after),
        pf_before: before.pf,
        pf_after: after.pf,
        dpf_before: before.dpf,
        dpf_after: after.dpf,
        thd_limit_pass: thd_after <= THD_PASS_LIMIT,
        degraded: thd_after > thd_before,
        harmonic_deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{dft_spectrum, power_metrics};
    use std::f64::consts::PI;

    fn wave(spc: usize, cycles: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..spc * cycles)
            .map(|k| f(2.0 * PI * (k as f64) / (spc as f64)))
            .collect()
    }

    fn report(distortion: f64) -> (PowerReport, HarmonicSpectrum) {
        let v = wave(400, 5, |wt| wt.sin());
        let i = wave(400, 5, |wt| wt.sin() + distortion * (5.0 * wt).sin());
        (
            power_metrics(&v, &i, 50.0, 20_000.0).unwrap(),
            dft_spectrum(&i, 50.0, 20_000.0, 50).unwrap(),
        )
    }

    #[test]
    fn identical_inputs_produce_zero_deltas() {
        let (r, s) = report(0.25);
        let c = compare_report(&r, &s, &r, &s).unwrap();
        assert_eq!(c.thd_before, c.thd_after);
        assert!(!c.degraded);
        for d in &c.harmonic_deltas {
            assert_eq!(d.before, d.after);
        }
    }

    #[test]
    fn strong_reduction_reports_factor() {
        let (rb, sb) = report(0.25);
        let (ra, sa) = report(0.015);
        let c = compare_report(&rb, &sb, &ra, &sa).unwrap();
        let factor = c.reduction_factor.unwrap();
        assert!((factor - 0.25 / 0.015).abs() < 0.05 * factor, "factor {factor}");
        assert!(c.thd_limit_pass);
        assert!(!c.degraded);
    }

    #[test]
    fn degradation_is_flagged_not_rejected() {
        let (rb, sb) = report(0.01);
        let (ra, sa) = report(0.2);
        let c = compare_report(&rb, &sb, &ra, &sa).unwrap();
        assert!(c.degraded);
        assert!(!c.thd_limit_pass);
    }

    #[test]
    fn mismatched_fundamental_is_an_error() {
        let (rb, sb) = report(0.1);
        let (mut ra, sa) = report(0.1);
        ra.f1 = 60.0;
        assert!(matches!(
            compare_report(&rb, &sb, &ra, &sa),
            Err(AnalysisError::MismatchedFundamental { .. })
        ));
    }
}
