//! Energy-detector missed-detection probability and threshold selection.
//!
//! Both duplex variants share one evaluation path: the test statistic under
//! an active primary user follows the Rayleigh-faded mixture in
//! [`crate::specfun`], and the missed-detection probability is that
//! mixture's CDF at the decision threshold. The perfect full-duplex detector
//! feeds the mean SNR in directly; the imperfect one replaces it with half
//! the interference-inflated noncentrality mean. Under the null hypothesis
//! the normalised statistic is central chi-square in both modes, so one CFAR
//! threshold rule serves both.

use crate::error::InvalidConfig;
use crate::interference::{self, LinkBudget, SelfInterferenceParams};
use crate::specfun::{self, RayleighMixture};

/// Parameters of one energy-detector operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Number of integrated samples (time-bandwidth product).
    m: u32,
    /// Decision threshold on the test statistic.
    threshold: f64,
    /// Mean of the exponentially distributed half-noncentrality: the mean
    /// linear SNR in perfect full duplex, or half the noncentrality mean
    /// from the interference chain in imperfect full duplex.
    mean_snr_linear: f64,
}

impl DetectorConfig {
    /// The closed forms divide by Γ(m−1), so m = 1 is rejected.
    pub fn new(m: u32, threshold: f64, mean_snr_linear: f64) -> Result<Self, InvalidConfig> {
        if m < 2 {
            return Err(InvalidConfig::new("m", "sample count must be >= 2"));
        }
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(InvalidConfig::new("threshold", "must be finite and > 0"));
        }
        if !(mean_snr_linear > 0.0) || !mean_snr_linear.is_finite() {
            return Err(InvalidConfig::new(
                "mean_snr_linear",
                "must be finite and > 0",
            ));
        }
        Ok(Self {
            m,
            threshold,
            mean_snr_linear,
        })
    }

    /// Operating point of the imperfect full-duplex detector: derives the
    /// residual-interference PSD from the antenna/gain-chain parameters and
    /// seeds the mean parameter with half the resulting noncentrality mean.
    pub fn imperfect(
        m: u32,
        threshold: f64,
        si: &SelfInterferenceParams,
        lb: &LinkBudget,
    ) -> Result<Self, InvalidConfig> {
        let n_i = interference::residual_noise_psd(si, lb);
        let mean = interference::noncentrality_mean(lb, n_i) / 2.0;
        Self::new(m, threshold, mean)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn mean_snr_linear(&self) -> f64 {
        self.mean_snr_linear
    }
}

/// Missed-detection probability of the perfect full-duplex detector:
/// the mixture CDF (numerical oracle route) at the decision threshold,
/// clamped to [0, 1].
pub fn pmd_perfect(cfg: &DetectorConfig) -> f64 {
    let mix = RayleighMixture::new(cfg.m, cfg.mean_snr_linear)
        .expect("DetectorConfig validation implies a valid mixture");
    let raw = mix.cdf_oracle(cfg.threshold);
    debug_assert!(
        (-1e-12..=1.0 + 1e-12).contains(&raw),
        "probability escaped tolerance band: {raw}"
    );
    raw.clamp(0.0, 1.0)
}

/// Missed-detection probability of the imperfect full-duplex detector.
///
/// Identical code path to [`pmd_perfect`] by construction — the entire
/// difference between the modes lives in how the config's mean parameter is
/// derived (see [`DetectorConfig::imperfect`]), so at zero residual
/// interference and matched parameters the two agree bit for bit.
pub fn pmd_imperfect(cfg: &DetectorConfig) -> f64 {
    pmd_perfect(cfg)
}

/// Constant-false-alarm-rate threshold: the β with Pr(Y > β | idle) = p_fa,
/// where the idle-channel statistic is central chi-square with 2m degrees of
/// freedom. Solved by bisection to 1e-10.
pub fn threshold_for_false_alarm(m: u32, p_fa: f64) -> Result<f64, InvalidConfig> {
    if m < 1 {
        return Err(InvalidConfig::new("m", "sample count must be >= 1"));
    }
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(InvalidConfig::new("p_fa", "must lie in (0, 1)"));
    }
    let survival = |beta: f64| specfun::survival_central_chi_square(m, beta);

    // bracket: survival decreases from 1 at β = 0
    let mut lo = 0.0;
    let mut hi = 2.0 * m as f64 + 10.0;
    let mut grow = 0;
    while survival(hi) > p_fa {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(InvalidConfig::new(
                "p_fa",
                "bisection bracket not found (unreachable for valid inputs)",
            ));
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if survival(mid) > p_fa {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
