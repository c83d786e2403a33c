//! Split a current channel into conductance-shaped, reactive-fundamental and
//! harmonic components.

use super::spectrum::dft_spectrum;
use super::AnalysisError;
use std::f64::consts::PI;

/// Pointwise decomposition of a current into active, reactive and harmonic
/// parts; the three channels sum back to the input exactly (to rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentDecomposition {
    /// Conductance-scaled copy of the voltage shape: (P̄/V²rms)·v(t).
    pub i_active: Vec<f64>,
    /// Fundamental component of the residual in quadrature with the
    /// fundamental voltage.
    pub i_reactive: Vec<f64>,
    /// Everything else.
    pub i_harmonic: Vec<f64>,
}

/// Decompose `i` against `v` over a synchronized exact-cycle window.
pub fn decompose_current(
    v: &[f64],
    i: &[f64],
    f1: f64,
    fs: f64,
) -> Result<CurrentDecomposition, AnalysisError> {
    if v.len() != i.len() {
        return Err(AnalysisError::LengthMismatch { left: v.len(), right: i.len() });
    }
    let n = v.len();
    let v_sq_mean = v.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if !(v_sq_mean > 0.0) {
        return Err(AnalysisError::ZeroVoltage);
    }
    let p_mean = v.iter().zip(i).map(|(v, i)| v * i).sum::<f64>() / n as f64;
    let conductance = p_mean / v_sq_mean;

    let i_active: Vec<f64> = v.iter().map(|v| conductance * v).collect();
    let residual: Vec<f64> = i.iter().zip(&i_active).map(|(i, a)| i - a).collect();

    // Fundamental phasor of the residual, projected onto the direction in
    // quadrature with the fundamental voltage.
    let v_spec = dft_spectrum(v, f1, fs, 1)?;
    let r_spec = dft_spectrum(&residual, f1, fs, 1)?;
    if !(v_spec.magnitude(1) > 0.0) {
        return Err(AnalysisError::NoFundamental);
    }
    let quad_phase = v_spec.phases[1] + PI / 2.0;
    let amplitude = r_spec.magnitude(1) * (r_spec.phases[1] - quad_phase).cos();

    let spc = (fs / f1).round() as usize;
    let i_reactive: Vec<f64> = (0..n)
        .map(|k| {
            let wt = 2.0 * PI * ((k % spc) as f64) / (spc as f64);
            amplitude * (wt - quad_phase).cos()
        })
        .collect();
    let i_harmonic: Vec<f64> =
        residual.iter().zip(&i_reactive).map(|(r, q)| r - q).collect();

    Ok(CurrentDecomposition { i_active, i_reactive, i_harmonic })
}

impl CurrentDecomposition {
    /// Reconstruct the input current pointwise.
    pub fn reconstruct(&self) -> Vec<f64> {
        self.i_active
            .iter()
            .zip(&self.i_reactive)
            .zip(&self.i_harmonic)
            .map(|((a, r), h)| a + r + h)
            .collect()
    }
}
