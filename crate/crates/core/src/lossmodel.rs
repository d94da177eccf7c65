//! Closed-form primary-user packet loss rates for the three duplex modes.
//!
//! A secondary-user burst carries `n_packets` packets and occupies the
//! channel for `n_packets * packet_len_bits / rate_bps` seconds. A primary
//! user arriving less than the vulnerable window before the burst's end
//! would wait longer than its delay bound, so its session is lost; in half
//! duplex this window loss compounds with one missed-detection event per
//! session. Full duplex removes the window entirely and leaves only the
//! missed-detection term.

use crate::error::InvalidConfig;

/// Session-level traffic and channel parameters of the single-channel
/// network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficConfig {
    /// Primary-user session arrival rate, 1/s.
    pub lambda_p: f64,
    /// Secondary-user session arrival rate, 1/s.
    pub lambda_s: f64,
    /// Packets per session.
    pub n_packets: u32,
    /// Packet length, bits.
    pub packet_len_bits: f64,
    /// Channel rate, bits/s.
    pub rate_bps: f64,
    /// Primary-user delay bound, s.
    pub delay_bound_s: f64,
    /// Observation window, s.
    pub horizon_s: f64,
}

impl TrafficConfig {
    pub fn new(
        lambda_p: f64,
        lambda_s: f64,
        n_packets: u32,
        packet_len_bits: f64,
        rate_bps: f64,
        delay_bound_s: f64,
        horizon_s: f64,
    ) -> Result<Self, InvalidConfig> {
        for (field, v) in [
            ("lambda_p", lambda_p),
            ("lambda_s", lambda_s),
            ("packet_len_bits", packet_len_bits),
            ("rate_bps", rate_bps),
            ("delay_bound_s", delay_bound_s),
            ("horizon_s", horizon_s),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(InvalidConfig::new(field, "must be finite and >= 0"));
            }
        }
        for (field, v) in [
            ("packet_len_bits", packet_len_bits),
            ("rate_bps", rate_bps),
            ("delay_bound_s", delay_bound_s),
            ("horizon_s", horizon_s),
        ] {
            if v == 0.0 {
                return Err(InvalidConfig::new(field, "must be > 0"));
            }
        }
        if n_packets == 0 {
            return Err(InvalidConfig::new("n_packets", "must be >= 1"));
        }
        Ok(Self {
            lambda_p,
            lambda_s,
            n_packets,
            packet_len_bits,
            rate_bps,
            delay_bound_s,
            horizon_s,
        })
    }

    /// Channel time occupied by one full session, s.
    pub fn burst_duration(&self) -> f64 {
        self.n_packets as f64 * self.packet_len_bits / self.rate_bps
    }

    /// Transmission time of a single packet, s.
    pub fn packet_duration(&self) -> f64 {
        self.packet_len_bits / self.rate_bps
    }
}

/// Leading portion of a secondary burst during which a newly arrived
/// primary user's wait would exceed its delay bound:
/// max(0, burst duration − delay bound).
pub fn vulnerable_window(t: &TrafficConfig) -> f64 {
    (t.burst_duration() - t.delay_bound_s).max(0.0)
}

/// Half-duplex primary-user loss: the window loss rate
/// min(1, λ_s · δ_t), compounded with one missed-detection event,
/// 1 − (1 − L)(1 − p_md).
///
/// The unclamped window rate exceeds one once secondary sessions fill the
/// channel; the clamp is logged because analytic and simulated losses
/// diverge in that regime.
pub fn loss_half_duplex(t: &TrafficConfig, p_md: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p_md));
    let raw = t.lambda_s * vulnerable_window(t);
    let window_loss = if raw > 1.0 {
        log::warn!(
            "half-duplex window loss saturated: lambda_s * delta_t = {raw:.3} > 1 \
             (channel at full utilisation; closed form clamped)"
        );
        1.0
    } else {
        raw
    };
    1.0 - (1.0 - window_loss) * (1.0 - p_md)
}

/// Full-duplex primary-user loss is the missed-detection probability
/// itself; perfect and imperfect modes differ only in which detector
/// produced `p_md`.
pub fn loss_full_duplex(p_md: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p_md));
    p_md
}
