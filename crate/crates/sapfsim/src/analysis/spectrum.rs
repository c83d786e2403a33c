//! Synchronous DFT over exact-cycle windows.

use super::AnalysisError;

/// Fundamental plus harmonic content of one periodic channel.
///
/// `magnitudes[h]` is the peak amplitude of harmonic `h` (index 0 is the DC
/// term, index 1 the fundamental). `phases[h]` is defined so that harmonic
/// `h` contributes `magnitudes[h] · cos(2π·h·f1·t − phases[h])`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    pub f1: f64,
    pub magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl HarmonicSpectrum {
    /// Highest harmonic order held by this spectrum.
    pub fn max_harmonic(&self) -> usize {
        self.magnitudes.len().saturating_sub(1)
    }

    /// Peak amplitude of harmonic `h`, or 0 beyond the analyzed ceiling.
    pub fn magnitude(&self, h: usize) -> f64 {
        self.magnitudes.get(h).copied().unwrap_or(0.0)
    }

    /// RMS of harmonics 2..=ceiling (the distortion content).
    pub fn harmonic_rms(&self) -> f64 {
        let sum_sq: f64 = self.magnitudes.iter().skip(2).map(|m| m * m).sum();
        (sum_sq / 2.0).sqrt()
    }
}

/// Exact samples-per-cycle ratio, or an error naming the asynchronous window.
fn samples_per_cycle(len: usize, f1: f64, fs: f64) -> Result<usize, AnalysisError> {
    let ratio = fs / f1;
    let spc = ratio.round();
    let err = AnalysisError::AsynchronousWindow { samples: len, rate_ratio: ratio };
    if !(ratio.is_finite() && spc >= 2.0) || (ratio - spc).abs() > 1e-6 * spc {
        return Err(err);
    }
    let spc = spc as usize;
    if len == 0 || len % spc != 0 {
        return Err(err);
    }
    Ok(spc)
}

/// Harmonic magnitudes and phases by direct correlation with sine/cosine at
/// multiples of `f1` over the window.
///
/// The window must span an exact integer number of fundamental cycles and
/// `fs/f1` must be an integer; under those conditions the correlation sums are
/// orthogonal and leakage-free. Sine/cosine values are table lookups on one
/// fundamental period, so the result is bit-deterministic.
pub fn dft_spectrum(
    channel: &[f64],
    f1: f64,
    fs: f64,
    n_harmonics: usize,
) -> Result<HarmonicSpectrum, AnalysisError> {
    let spc = samples_per_cycle(channel.len(), f1, fs)?;
    if 2 * n_harmonics >= spc {
        return Err(AnalysisError::HarmonicAboveNyquist {
            harmonic: n_harmonics,
            samples_per_cycle: spc,
        });
    }

    // One fundamental period of sine/cosine; sample k of harmonic h needs
    // angle 2π·h·k/spc, i.e. table index (h·k) mod spc.
    let mut cos_t = vec![0.0; spc];
    let mut sin_t = vec![0.0; spc];
    for (k, (c, s)) in cos_t.iter_mut().zip(sin_t.iter_mut()).enumerate() {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) / (spc as f64);
        *c = angle.cos();
        *s = angle.sin();
    }

    let n = channel.len();
    let mut magnitudes = Vec::with_capacity(n_harmonics + 1);
    let mut phases = Vec::with_capacity(n_harmonics + 1);

    let mean = channel.iter().sum::<f64>() / n as f64;
    magnitudes.push(mean.abs());
    phases.push(if mean >= 0.0 { 0.0 } else { std::f64::consts::PI });

    for h in 1..=n_harmonics {
        let mut acc_c = 0.0;
        let mut acc_s = 0.0;
        let mut idx = 0usize;
        for &x in channel {
            acc_c += x * cos_t[idx];
            acc_s += x * sin_t[idx];
            idx += h;
            if idx >= spc {
                idx -= spc;
            }
        }
        let c = 2.0 * acc_c / n as f64;
        let s = 2.0 * acc_s / n as f64;
        magnitudes.push(c.hypot(s));
        phases.push(s.atan2(c));
    }

    Ok(HarmonicSpectrum { f1, magnitudes, phases })
}

/// Total harmonic distortion: √(Σ_{h=2..} M_h²) / M_1.
///
/// Errors when the fundamental is zero — in floating point, when it is
/// negligible against the largest bin (correlation residue of a signal with
/// no actual fundamental).
pub fn thd(spectrum: &HarmonicSpectrum) -> Result<f64, AnalysisError> {
    let m1 = spectrum.magnitude(1);
    let peak = spectrum.magnitudes.iter().cloned().fold(0.0, f64::max);
    if !(m1 > 0.0) || m1 < 1e-12 * peak {
        return Err(AnalysisError::NoFundamental);
    }
    let sum_sq: f64 = spectrum.magnitudes.iter().skip(2).map(|m| m * m).sum();
    Ok(sum_sq.sqrt() / m1)
}

/// Root-mean-square of a channel.
pub fn rms(channel: &[f64]) -> f64 {
    if channel.is_empty() {
        return 0.0;
    }
    (channel.iter().map(|x| x * x).sum::<f64>() / channel.len() as f64).sqrt()
}

/// Steady-state check: the fundamental magnitude of the last two cycles must
/// agree within 1%.
pub fn fundamental_is_settled(channel: &[f64], f1: f64, fs: f64) -> Result<bool, AnalysisError> {
    let spc = samples_per_cycle(channel.len(), f1, fs)?;
    if channel.len() < 2 * spc {
        return Err(AnalysisError::AsynchronousWindow {
            samples: channel.len(),
            rate_ratio: fs / f1,
        });
    }
    let last = &channel[channel.len() - spc..];
    let prev = &channel[channel.len() - 2 * spc..channel.len() - spc];
    let m_last = dft_spectrum(last, f1, fs, 1)?.magnitude(1);
    let m_prev = dft_spectrum(prev, f1, fs, 1)?.magnitude(1);
    let scale = m_last.abs().max(m_prev.abs());
    if scale == 0.0 {
        return Ok(true);
    }
    Ok((m_last - m_prev).abs() <= 0.01 * scale)
}
