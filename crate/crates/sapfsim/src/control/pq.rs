//! Instantaneous-power reference generation (the cross-check method).
//!
//! Real power p = v_α·i_α + v_β·i_β and imaginary power q = v_β·i_α − v_α·i_β
//! are formed in the stationary frame; the oscillating part of p (everything
//! the low-pass filter rejects) and all of q are compensated. Both powers are
//! two-phase dot products — callers converting a physical three-phase loss
//! power multiply by 2/3 first.

use crate::phasemath::{
    clarke, inverse_clarke, FirstOrderFilter, FrameError, StationarySample, ThreePhaseSample,
};

/// Compensating reference from instantaneous powers. `p_filter` carries the
/// running mean-power estimate between calls; `p_loss` is an extra active
/// power to draw from the grid (same sign convention as the d–q loss
/// current: positive recharges the DC link).
pub fn pq_reference(
    i_load: ThreePhaseSample,
    v_pcc: ThreePhaseSample,
    p_filter: &mut FirstOrderFilter,
    p_loss: f64,
    dt: f64,
) -> Result<ThreePhaseSample, FrameError> {
    let v = clarke(v_pcc);
    let i = clarke(i_load);
    let det = v.norm_sq();
    if det == 0.0 {
        return Err(FrameError::ZeroMainsVector);
    }

    let p = v.alpha * i.alpha + v.beta * i.beta;
    let q = v.beta * i.alpha - v.alpha * i.beta;
    let p_mean = p_filter.step(p, dt);
    let p_compensate = (p - p_mean) - p_loss;

    let i_ref_alpha = (v.alpha * p_compensate + v.beta * q) / det;
    let i_ref_beta = (v.beta * p_compensate - v.alpha * q) / det;
    Ok(inverse_clarke(StationarySample::new(i_ref_alpha, i_ref_beta, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn balanced(peak: f64, wt: f64, phase: f64) -> ThreePhaseSample {
        ThreePhaseSample::new(
            peak * (wt - phase).sin(),
            peak * (wt - phase - 2.0 * PI / 3.0).sin(),
            peak * (wt - phase + 2.0 * PI / 3.0).sin(),
        )
    }

    #[test]
    fn settled_in_phase_load_needs_no_compensation() {
        let mut filter = FirstOrderFilter::new(15.0, 0.0).unwrap();
        let dt = 1e-4;
        let mut last = ThreePhaseSample::ZERO;
        for k in 0..5000 {
            let wt = 2.0 * PI * 50.0 * (k as f64) * dt;
            last = pq_reference(
                balanced(20.0, wt, 0.0),
                balanced(339.0, wt, 0.0),
                &mut filter,
                0.0,
                dt,
            )
            .unwrap();
        }
        assert!(last.max_abs() < 0.2, "residual reference {last:?}");
    }

    #[test]
    fn purely_reactive_load_routes_entirely_to_the_reference() {
        // With a quadrature load p ≡ 0 so the filter stays at zero and the
        // whole current shows up in the reference from the first step.
        let mut filter = FirstOrderFilter::new(15.0, 0.0).unwrap();
        let dt = 1e-4;
        for k in 0..2000 {
            let wt = 2.0 * PI * 50.0 * (k as f64) * dt;
            let i = balanced(8.0, wt, PI / 2.0);
            let reference =
                pq_reference(i, balanced(339.0, wt, 0.0), &mut filter, 0.0, dt).unwrap();
            assert!((reference.a - i.a).abs() < 1e-9);
            assert!((reference.b - i.b).abs() < 1e-9);
            assert!((reference.c - i.c).abs() < 1e-9);
            assert!(filter.output().abs() < 1e-9);
        }
    }

    #[test]
    fn dead_mains_is_an_error() {
        let mut filter = FirstOrderFilter::new(15.0, 0.0).unwrap();
        let err = pq_reference(
            ThreePhaseSample::new(1.0, 0.0, -1.0),
            ThreePhaseSample::new(2.0, 2.0, 2.0),
            &mut filter,
            0.0,
            1e-4,
        );
        assert_eq!(err.unwrap_err(), FrameError::ZeroMainsVector);
    }
}
