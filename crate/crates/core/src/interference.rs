//! Residual self-interference model for the full-duplex node.
//!
//! Two transmit antennas offset by half a wavelength null each other at the
//! receive antenna; what survives is set by the amplitude mismatch between
//! the two paths and the receive-antenna placement error. The antenna-
//! cancellation residual is then attenuated by the RF-domain (RIC) and
//! digital-domain (DIC) cancellation stages, modelled as fixed dB gains.
//!
//! Units: amplitudes are in sqrt(mW) so that `amplitude²` is directly the
//! dBm→mW conversion of the corresponding power; all powers are linear mW.

use crate::error::InvalidConfig;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Convert a dBm power level to linear milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Antenna-cancellation and gain-chain parameters of one full-duplex node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfInterferenceParams {
    /// Amplitude at the receive antenna from a single transmit antenna,
    /// sqrt(mW).
    pub a_ant: f64,
    /// Amplitude mismatch between the two transmit paths, sqrt(mW).
    pub eps_amp: f64,
    /// Receive-antenna placement error, meters.
    pub eps_place: f64,
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Signal bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// RF interference cancellation gain, dB.
    pub ric_gain_db: f64,
    /// Digital interference cancellation gain, dB.
    pub dic_gain_db: f64,
}

impl SelfInterferenceParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a_ant: f64,
        eps_amp: f64,
        eps_place: f64,
        carrier_hz: f64,
        bandwidth_hz: f64,
        ric_gain_db: f64,
        dic_gain_db: f64,
    ) -> Result<Self, InvalidConfig> {
        if !(a_ant >= 0.0) {
            return Err(InvalidConfig::new("a_ant", "must be >= 0"));
        }
        if !(eps_amp >= 0.0) {
            return Err(InvalidConfig::new("eps_amp", "must be >= 0"));
        }
        if !(eps_place >= 0.0) {
            return Err(InvalidConfig::new("eps_place", "must be >= 0"));
        }
        if !(bandwidth_hz > 0.0) {
            return Err(InvalidConfig::new("bandwidth_hz", "must be > 0"));
        }
        if !(carrier_hz > bandwidth_hz / 2.0) {
            return Err(InvalidConfig::new(
                "carrier_hz",
                "must exceed half the bandwidth",
            ));
        }
        if !(ric_gain_db >= 0.0) {
            return Err(InvalidConfig::new("ric_gain_db", "must be >= 0"));
        }
        if !(dic_gain_db >= 0.0) {
            return Err(InvalidConfig::new("dic_gain_db", "must be >= 0"));
        }
        Ok(Self {
            a_ant,
            eps_amp,
            eps_place,
            carrier_hz,
            bandwidth_hz,
            ric_gain_db,
            dic_gain_db,
        })
    }

    /// Build parameters whose antenna amplitude matches the link budget's
    /// local transmit power, with the mismatch given as a fraction of that
    /// amplitude.
    pub fn for_link_budget(
        lb: &LinkBudget,
        eps_amp_ratio: f64,
        eps_place: f64,
        carrier_hz: f64,
        bandwidth_hz: f64,
        ric_gain_db: f64,
        dic_gain_db: f64,
    ) -> Result<Self, InvalidConfig> {
        if !(eps_amp_ratio >= 0.0) {
            return Err(InvalidConfig::new("eps_amp_ratio", "must be >= 0"));
        }
        let a_ant = dbm_to_mw(lb.local_tx_rx_dbm).sqrt();
        Self::new(
            a_ant,
            eps_amp_ratio * a_ant,
            eps_place,
            carrier_hz,
            bandwidth_hz,
            ric_gain_db,
            dic_gain_db,
        )
    }

    /// Carrier wavelength, meters.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }
}

/// Received-power operating points of the sensing link, dBm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Power of the local transmit signal at the receive antenna.
    pub local_tx_rx_dbm: f64,
    /// Power of the primary user's signal at the receive antenna.
    pub remote_rx_dbm: f64,
    /// Average noise-floor power.
    pub noise_floor_dbm: f64,
}

impl LinkBudget {
    /// The local signal must dominate the remote one, which in turn must not
    /// fall below the noise floor (equality marks a 0 dB operating point).
    pub fn new(
        local_tx_rx_dbm: f64,
        remote_rx_dbm: f64,
        noise_floor_dbm: f64,
    ) -> Result<Self, InvalidConfig> {
        for (field, v) in [
            ("local_tx_rx_dbm", local_tx_rx_dbm),
            ("remote_rx_dbm", remote_rx_dbm),
            ("noise_floor_dbm", noise_floor_dbm),
        ] {
            if !v.is_finite() {
                return Err(InvalidConfig::new(field, "must be finite"));
            }
        }
        if !(local_tx_rx_dbm > remote_rx_dbm) {
            return Err(InvalidConfig::new(
                "remote_rx_dbm",
                "local transmit power must exceed the remote received power",
            ));
        }
        if !(remote_rx_dbm >= noise_floor_dbm) {
            return Err(InvalidConfig::new(
                "noise_floor_dbm",
                "remote received power must not fall below the noise floor",
            ));
        }
        Ok(Self {
            local_tx_rx_dbm,
            remote_rx_dbm,
            noise_floor_dbm,
        })
    }
}

/// Self-interference power surviving antenna cancellation, linear (same
/// reference as `a_ant²`):
///
/// 2·A·(A + ε_amp)·(1 − cos(2π·ε_place/λ)) + ε_amp²
///
/// Zero iff the mismatch is zero and the placement error is a whole number
/// of wavelengths.
pub fn residual_si_power(p: &SelfInterferenceParams) -> f64 {
    let phase = 2.0 * std::f64::consts::PI * p.eps_place / p.wavelength();
    2.0 * p.a_ant * (p.a_ant + p.eps_amp) * (1.0 - phase.cos()) + p.eps_amp * p.eps_amp
}

/// Placement error equivalent to the wavelength spread across the signal
/// band: the edge-of-band wavelength difference divided by four.
pub fn placement_error_from_bandwidth(
    carrier_hz: f64,
    bandwidth_hz: f64,
) -> Result<f64, InvalidConfig> {
    if !(carrier_hz > 0.0) {
        return Err(InvalidConfig::new("carrier_hz", "must be > 0"));
    }
    if !(bandwidth_hz >= 0.0) || bandwidth_hz >= 2.0 * carrier_hz {
        return Err(InvalidConfig::new(
            "bandwidth_hz",
            "must lie in [0, 2 * carrier_hz)",
        ));
    }
    let lo = carrier_hz - bandwidth_hz / 2.0;
    let hi = carrier_hz + bandwidth_hz / 2.0;
    Ok((SPEED_OF_LIGHT / lo - SPEED_OF_LIGHT / hi) / 4.0)
}

/// Residual interference power spectral density after the RIC and DIC
/// stages, linear mW: the antenna-cancellation residual divided by the
/// combined linear gain.
///
/// `p.a_ant` is expected to be derived from `lb.local_tx_rx_dbm` (see
/// [`SelfInterferenceParams::for_link_budget`]).
pub fn residual_noise_psd(p: &SelfInterferenceParams, lb: &LinkBudget) -> f64 {
    debug_assert!(
        (p.a_ant * p.a_ant - dbm_to_mw(lb.local_tx_rx_dbm)).abs()
            <= 1e-9 * dbm_to_mw(lb.local_tx_rx_dbm),
        "a_ant must match the link budget's local transmit power"
    );
    residual_si_power(p) / 10f64.powf((p.ric_gain_db + p.dic_gain_db) / 10.0)
}

/// Mean noncentrality of the imperfect detector's test statistic:
/// (S + N_i) / (N_t + N_i) with all powers in linear mW.
///
/// At zero residual interference this is the plain linear SNR; as the
/// interference grows it decays monotonically toward one.
pub fn noncentrality_mean(lb: &LinkBudget, n_i: f64) -> f64 {
    debug_assert!(n_i >= 0.0);
    let signal = dbm_to_mw(lb.remote_rx_dbm);
    let noise = dbm_to_mw(lb.noise_floor_dbm);
    (signal + n_i) / (noise + n_i)
}
