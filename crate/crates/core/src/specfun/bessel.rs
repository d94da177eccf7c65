//! Modified Bessel function of the first kind, integer order.
//!
//! Ascending power series with term-ratio stopping at 1e-16. Arguments in
//! this crate stay moderate (the detector keeps sqrt(λy) in the hundreds),
//! but SNR sweeps can push the pdf kernel past f64 range, so a log-domain
//! evaluation is provided alongside the plain series.

use super::gamma::ln_gamma;
use super::SpecialError;

const TERM_RATIO_STOP: f64 = 1e-16;
const MAX_TERMS: usize = 200_000;

/// I_n(x) for integer order n >= 0 and x >= 0.
///
/// Overflows to +inf for x beyond ~713 (where I_0 exceeds f64 range); use
/// [`ln_bessel_i`] there.
pub fn bessel_i(order: u32, x: f64) -> Result<f64, SpecialError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecialError::DomainError);
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let n = order as f64;
    let half = 0.5 * x;
    // t_0 = (x/2)^n / n!
    let mut term = (n * half.ln() - ln_gamma(n + 1.0)).exp();
    let q = half * half;
    let mut sum = term;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (n + kf + 1.0));
        sum += term;
        if term < sum * TERM_RATIO_STOP {
            return Ok(sum);
        }
    }
    Err(SpecialError::ConvergenceFailure)
}

/// ln I_n(x) for integer order n >= 0 and x > 0.
///
/// Online log-sum-exp over the series terms, stable for arbitrarily large x.
pub fn ln_bessel_i(order: u32, x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_bessel_i requires x > 0, got {x}");
    let n = order as f64;
    let half_ln = (0.5 * x).ln();
    // running sum represented as m + ln(s)
    let mut lt = n * half_ln - ln_gamma(n + 1.0);
    let mut m = lt;
    let mut s = 1.0f64;
    let two_half_ln = 2.0 * half_ln;
    let mut k = 0.0f64;
    loop {
        lt += two_half_ln - ((k + 1.0) * (n + k + 1.0)).ln();
        if lt > m {
            s = s * (m - lt).exp() + 1.0;
            m = lt;
        } else {
            let e = (lt - m).exp();
            s += e;
            // past the modal term the ratio decays monotonically
            if e < TERM_RATIO_STOP && k + 1.0 > 0.5 * x {
                break;
            }
        }
        k += 1.0;
        if k as usize > MAX_TERMS {
            break;
        }
    }
    m + s.ln()
}
