//! Experiment orchestration: SNR sweeps across the three duplex scenarios,
//! CSV result tables, and gnuplot script emission.
//!
//! Configuration lives in a flat `key = value` text file (see
//! [`parse_config`]); command-line flags override file values. A sweep row
//! couples the analytic loss from the closed forms with a seeded Monte Carlo
//! estimate, so re-running an identical spec reproduces the output byte for
//! byte.

use fdcrn_core::detector::{self, DetectorConfig};
use fdcrn_core::interference::{self, LinkBudget, SelfInterferenceParams};
use fdcrn_core::lossmodel::{self, TrafficConfig};
use fdcrn_core::sim::{self, DuplexMode, DuplexScenario};
use fdcrn_core::InvalidConfig;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Duplex scenarios selectable on a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Half,
    Full,
    FullImperfect,
}

impl Mode {
    pub fn duplex_mode(&self) -> DuplexMode {
        match self {
            Mode::Half => DuplexMode::HalfDuplex,
            Mode::Full => DuplexMode::FullDuplexPerfect,
            Mode::FullImperfect => DuplexMode::FullDuplexImperfect,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Half => "half",
            Mode::Full => "full",
            Mode::FullImperfect => "full-imperfect",
        };
        f.write_str(s)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "half" => Ok(Mode::Half),
            "full" => Ok(Mode::Full),
            "full-imperfect" => Ok(Mode::FullImperfect),
            other => Err(format!(
                "unknown mode `{other}` (expected half, full or full-imperfect)"
            )),
        }
    }
}

/// One imperfect-full-duplex parameter variant.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceVariant {
    pub name: String,
    /// Receive-antenna placement error, meters.
    pub eps_place_m: f64,
    /// Amplitude mismatch as a fraction of the per-antenna amplitude.
    pub eps_amp_ratio: f64,
}

/// Everything a sweep needs, validated before any computation starts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub traffic: TrafficConfig,
    pub snr_grid_db: Vec<f64>,
    pub modes: Vec<Mode>,
    pub m: u32,
    pub p_fa: f64,
    pub local_tx_rx_dbm: f64,
    pub noise_floor_dbm: f64,
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub ric_gain_db: f64,
    pub dic_gain_db: f64,
    pub variants: Vec<InterferenceVariant>,
    pub replications: u32,
    pub base_seed: u64,
}

impl ExperimentSpec {
    /// The crate's reference experiment: burst-normalised traffic (one
    /// session occupies the channel for exactly one second), the standard
    /// received-power operating points, and the published antenna-error
    /// variants. The delay bound is half a burst.
    pub fn baseline() -> Self {
        let traffic =
            TrafficConfig::new(2.0, 5.0, 100, 8192.0, 819_200.0, 0.5, 200.0).expect("valid");
        let bw20 = interference::placement_error_from_bandwidth(2.48e9, 20e6).expect("valid");
        let bw85 = interference::placement_error_from_bandwidth(2.48e9, 85e6).expect("valid");
        ExperimentSpec {
            traffic,
            snr_grid_db: (0..=15).map(|i| 2.0 * i as f64).collect(),
            modes: vec![Mode::Half, Mode::Full, Mode::FullImperfect],
            m: 5,
            p_fa: 0.1,
            local_tx_rx_dbm: -40.0,
            noise_floor_dbm: -100.0,
            carrier_hz: 2.48e9,
            bandwidth_hz: 20e6,
            ric_gain_db: 10.0,
            dic_gain_db: 20.0,
            variants: vec![
                InterferenceVariant {
                    name: "d1mm-a01".into(),
                    eps_place_m: 1e-3,
                    eps_amp_ratio: 0.1,
                },
                InterferenceVariant {
                    name: "d1mm-a02".into(),
                    eps_place_m: 1e-3,
                    eps_amp_ratio: 0.2,
                },
                InterferenceVariant {
                    name: "d2mm-a01".into(),
                    eps_place_m: 2e-3,
                    eps_amp_ratio: 0.1,
                },
                InterferenceVariant {
                    name: "d2mm-a02".into(),
                    eps_place_m: 2e-3,
                    eps_amp_ratio: 0.2,
                },
                InterferenceVariant {
                    name: "bw20".into(),
                    eps_place_m: bw20,
                    eps_amp_ratio: 0.0,
                },
                InterferenceVariant {
                    name: "bw85".into(),
                    eps_place_m: bw85,
                    eps_amp_ratio: 0.0,
                },
            ],
            replications: 40,
            base_seed: 42,
        }
    }

    /// Field-level validation; nothing is computed before this passes.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.snr_grid_db.is_empty() {
            return Err(config_err("snr_grid_db", "must not be empty"));
        }
        if !self.snr_grid_db.windows(2).all(|w| w[0] < w[1]) {
            return Err(config_err("snr_grid_db", "must be strictly increasing"));
        }
        if self.modes.is_empty() {
            return Err(config_err("modes", "must select at least one mode"));
        }
        if self.replications < 1 {
            return Err(config_err("replications", "must be >= 1"));
        }
        if self.m < 2 {
            return Err(config_err("m", "sample count must be >= 2"));
        }
        if !(self.p_fa > 0.0 && self.p_fa < 1.0) {
            return Err(config_err("p_fa", "must lie in (0, 1)"));
        }
        if self.modes.contains(&Mode::FullImperfect) {
            if self.variants.is_empty() {
                return Err(config_err(
                    "variant",
                    "full-imperfect mode needs at least one interference variant",
                ));
            }
            let lowest = self.snr_grid_db[0];
            if lowest < 0.0 {
                return Err(config_err(
                    "snr_grid_db",
                    "imperfect sweeps need SNR >= 0 dB (received power cannot \
                     drop below the noise floor)",
                ));
            }
            let highest = self.noise_floor_dbm + self.snr_grid_db.last().unwrap();
            if highest >= self.local_tx_rx_dbm {
                return Err(config_err(
                    "snr_grid_db",
                    "highest sweep point pushes the received power above the \
                     local transmit power",
                ));
            }
        }
        for v in &self.variants {
            if v.name.is_empty() || v.name.contains(',') || v.name.contains(char::is_whitespace) {
                return Err(config_err(
                    "variant",
                    format!("variant name `{}` must be nonempty without commas or spaces", v.name),
                ));
            }
            if !(v.eps_place_m >= 0.0) || !(v.eps_amp_ratio >= 0.0) {
                return Err(config_err(
                    "variant",
                    format!("variant `{}` has negative parameters", v.name),
                ));
            }
        }
        let names: Vec<&str> = self.variants.iter().map(|v| v.name.as_str()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(config_err("variant", format!("duplicate variant name `{n}`")));
            }
        }
        Ok(())
    }
}

/// Sweep and plot failures, mapped onto process exit codes by the binary.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or malformed input data (exit code 2).
    Config { field: String, reason: String },
    /// Filesystem failure (exit code 3).
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn config_err(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            CliError::Io { path, source } => {
                write!(f, "i/o failure on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<InvalidConfig> for CliError {
    fn from(e: InvalidConfig) -> Self {
        CliError::Config {
            field: e.field.to_string(),
            reason: e.reason,
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Parse a flat `key = value` config file on top of the baseline defaults.
///
/// `#` starts a comment; blank lines are ignored. The first `variant` key
/// replaces the default variant list, later ones append. Grid syntax is
/// either a comma list (`0,5,10`) or `start:stop:step` inclusive.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, CliError> {
    let mut spec = ExperimentSpec::baseline();
    let mut traffic = spec.traffic;
    let mut variants_replaced = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(
                "config",
                format!("line {}: expected `key = value`, got `{line}`", lineno + 1),
            )
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |reason: String| CliError::Config {
            field: key.to_string(),
            reason: format!("line {}: {reason}", lineno + 1),
        };
        let num = |v: &str| -> Result<f64, CliError> {
            v.parse::<f64>()
                .map_err(|_| bad(format!("`{v}` is not a number")))
        };

        match key {
            "lambda_p" => traffic.lambda_p = num(value)?,
            "lambda_s" => traffic.lambda_s = num(value)?,
            "n_packets" => {
                traffic.n_packets = value
                    .parse::<u32>()
                    .map_err(|_| bad(format!("`{value}` is not a positive integer")))?
            }
            "packet_len_bits" => traffic.packet_len_bits = num(value)?,
            "rate_bps" => traffic.rate_bps = num(value)?,
            "delay_bound_s" => traffic.delay_bound_s = num(value)?,
            "horizon_s" => traffic.horizon_s = num(value)?,
            "m" => {
                spec.m = value
                    .parse::<u32>()
                    .map_err(|_| bad(format!("`{value}` is not a positive integer")))?
            }
            "p_fa" => spec.p_fa = num(value)?,
            "local_tx_rx_dbm" => spec.local_tx_rx_dbm = num(value)?,
            "noise_floor_dbm" => spec.noise_floor_dbm = num(value)?,
            "carrier_hz" => spec.carrier_hz = num(value)?,
            "bandwidth_hz" => spec.bandwidth_hz = num(value)?,
            "ric_gain_db" => spec.ric_gain_db = num(value)?,
            "dic_gain_db" => spec.dic_gain_db = num(value)?,
            "snr_grid_db" => spec.snr_grid_db = parse_grid(value).map_err(bad)?,
            "modes" => {
                spec.modes = value
                    .split(',')
                    .map(|s| Mode::from_str(s).map_err(|e| bad(e)))
                    .collect::<Result<Vec<_>, _>>()?
            }
            "replications" => {
                spec.replications = value
                    .parse::<u32>()
                    .map_err(|_| bad(format!("`{value}` is not a positive integer")))?
            }
            "base_seed" => {
                spec.base_seed = value
                    .parse::<u64>()
                    .map_err(|_| bad(format!("`{value}` is not a 64-bit unsigned integer")))?
            }
            "variant" => {
                if !variants_replaced {
                    spec.variants.clear();
                    variants_replaced = true;
                }
                spec.variants
                    .push(parse_variant(value, spec.carrier_hz).map_err(bad)?);
            }
            other => {
                return Err(CliError::Config {
                    field: other.to_string(),
                    reason: format!("line {}: unknown key", lineno + 1),
                })
            }
        }
    }

    spec.traffic = TrafficConfig::new(
        traffic.lambda_p,
        traffic.lambda_s,
        traffic.n_packets,
        traffic.packet_len_bits,
        traffic.rate_bps,
        traffic.delay_bound_s,
        traffic.horizon_s,
    )?;
    Ok(spec)
}

fn parse_grid(value: &str) -> Result<Vec<f64>, String> {
    if let Some((start, rest)) = value.split_once(':') {
        let (stop, step) = rest
            .split_once(':')
            .ok_or_else(|| format!("`{value}` is not `start:stop:step` or a comma list"))?;
        let (start, stop, step) = (
            start.trim().parse::<f64>().map_err(|_| "bad start".to_string())?,
            stop.trim().parse::<f64>().map_err(|_| "bad stop".to_string())?,
            step.trim().parse::<f64>().map_err(|_| "bad step".to_string())?,
        );
        if !(step > 0.0) || stop < start {
            return Err("need step > 0 and stop >= start".into());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| start + step * i as f64).collect())
    } else {
        value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{s}` is not a number"))
            })
            .collect()
    }
}

/// `variant = <name> eps_place=<m>|bandwidth=<Hz> [eps_amp_ratio=<r>]`
fn parse_variant(value: &str, carrier_hz: f64) -> Result<InterferenceVariant, String> {
    let mut parts = value.split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| "variant needs a name".to_string())?
        .to_string();
    let mut eps_place: Option<f64> = None;
    let mut ratio = 0.0;
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("`{part}` is not `key=value`"))?;
        let v: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
        match k {
            "eps_place" => {
                if eps_place.is_some() {
                    return Err("give either eps_place or bandwidth, once".into());
                }
                eps_place = Some(v);
            }
            "bandwidth" => {
                if eps_place.is_some() {
                    return Err("give either eps_place or bandwidth, once".into());
                }
                eps_place = Some(
                    interference::placement_error_from_bandwidth(carrier_hz, v)
                        .map_err(|e| e.to_string())?,
                );
            }
            "eps_amp_ratio" => ratio = v,
            other => return Err(format!("unknown variant key `{other}`")),
        }
    }
    Ok(InterferenceVariant {
        name,
        eps_place_m: eps_place.ok_or_else(|| "variant needs eps_place or bandwidth".to_string())?,
        eps_amp_ratio: ratio,
    })
}

/// One (SNR, mode, variant) result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub mode: Mode,
    pub variant: String,
    pub p_md: f64,
    pub loss_analytic: f64,
    pub loss_sim_mean: f64,
    pub loss_sim_ci95: f64,
    pub replications: u32,
    pub seed: u64,
}

/// Run the sweep: for every (SNR, mode, variant) combination compute the
/// missed-detection probability, the analytic loss, and a seeded Monte Carlo
/// estimate. Rows are emitted in grid order; each row's simulation seed is
/// derived from the base seed and the row index.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let beta = detector::threshold_for_false_alarm(spec.m, spec.p_fa)?;
    let mut rows = Vec::new();
    let mut row_index: u64 = 0;

    for &snr_db in &spec.snr_grid_db {
        let mean_snr = 10f64.powf(snr_db / 10.0);
        for &mode in &spec.modes {
            let variants: Vec<Option<&InterferenceVariant>> = match mode {
                Mode::FullImperfect => spec.variants.iter().map(Some).collect(),
                _ => vec![None],
            };
            for variant in variants {
                let (p_md, loss_analytic) = match mode {
                    Mode::Half => {
                        let cfg = DetectorConfig::new(spec.m, beta, mean_snr)?;
                        let p = detector::pmd_perfect(&cfg);
                        (p, lossmodel::loss_half_duplex(&spec.traffic, p))
                    }
                    Mode::Full => {
                        let cfg = DetectorConfig::new(spec.m, beta, mean_snr)?;
                        let p = detector::pmd_perfect(&cfg);
                        (p, lossmodel::loss_full_duplex(p))
                    }
                    Mode::FullImperfect => {
                        let v = variant.expect("imperfect rows carry a variant");
                        let lb = LinkBudget::new(
                            spec.local_tx_rx_dbm,
                            spec.noise_floor_dbm + snr_db,
                            spec.noise_floor_dbm,
                        )?;
                        let si = SelfInterferenceParams::for_link_budget(
                            &lb,
                            v.eps_amp_ratio,
                            v.eps_place_m,
                            spec.carrier_hz,
                            spec.bandwidth_hz,
                            spec.ric_gain_db,
                            spec.dic_gain_db,
                        )?;
                        let cfg = DetectorConfig::imperfect(spec.m, beta, &si, &lb)?;
                        let p = detector::pmd_imperfect(&cfg);
                        (p, lossmodel::loss_full_duplex(p))
                    }
                };

                let seed = sim::derive_seed(spec.base_seed, row_index);
                let scenario = DuplexScenario::new(mode.duplex_mode(), p_md)?;
                let result =
                    sim::run_experiment(&spec.traffic, scenario, spec.replications, seed);

                rows.push(SweepRow {
                    snr_db,
                    mode,
                    variant: variant.map_or_else(|| "-".to_string(), |v| v.name.clone()),
                    p_md,
                    loss_analytic,
                    loss_sim_mean: result.pu_loss_rate,
                    loss_sim_ci95: result.ci_halfwidth_95,
                    replications: spec.replications,
                    seed,
                });
                row_index += 1;
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str =
    "snr_db,mode,variant,p_md,loss_analytic,loss_sim_mean,loss_sim_ci95,replications,seed";

/// Serialise rows to CSV ('.' decimals, LF line endings, shortest
/// round-trip float formatting, header mandatory).
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.snr_db,
            r.mode,
            r.variant,
            r.p_md,
            r.loss_analytic,
            r.loss_sim_mean,
            r.loss_sim_ci95,
            r.replications,
            r.seed
        ));
    }
    out
}

/// Parse a CSV produced by [`rows_to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(config_err("csv", "missing or unexpected header row")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 9 {
            return Err(config_err(
                "csv",
                format!("row {}: expected 9 columns, got {}", i + 1, cols.len()),
            ));
        }
        let field = |j: usize| -> Result<f64, CliError> {
            cols[j]
                .parse::<f64>()
                .map_err(|_| config_err("csv", format!("row {}: bad number `{}`", i + 1, cols[j])))
        };
        rows.push(SweepRow {
            snr_db: field(0)?,
            mode: Mode::from_str(cols[1]).map_err(|e| config_err("csv", e))?,
            variant: cols[2].to_string(),
            p_md: field(3)?,
            loss_analytic: field(4)?,
            loss_sim_mean: field(5)?,
            loss_sim_ci95: field(6)?,
            replications: cols[7]
                .parse::<u32>()
                .map_err(|_| config_err("csv", format!("row {}: bad count", i + 1)))?,
            seed: cols[8]
                .parse::<u64>()
                .map_err(|_| config_err("csv", format!("row {}: bad seed", i + 1)))?,
        });
    }
    Ok(rows)
}

/// Render the result table as a self-contained gnuplot script: the data is
/// embedded in datablocks, one analytic loss-vs-SNR series per
/// (mode, variant) pair, log-scale loss axis.
pub fn plot_script(rows: &[SweepRow]) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(config_err("table", "result table is empty, nothing to plot"));
    }
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let label = if r.variant == "-" {
            r.mode.to_string()
        } else {
            format!("{} {}", r.mode, r.variant)
        };
        match series.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push((r.snr_db, r.loss_analytic)),
            None => series.push((label, vec![(r.snr_db, r.loss_analytic)])),
        }
    }

    let mut s = String::new();
    s.push_str("# loss-rate-vs-SNR curves; render with: gnuplot <this file>\n");
    s.push_str("set terminal pngcairo size 960,640\n");
    s.push_str("set output 'loss_vs_snr.png'\n");
    s.push_str("set xlabel 'mean SNR (dB)'\n");
    s.push_str("set ylabel 'PU packet loss rate'\n");
    s.push_str("set logscale y\n");
    s.push_str("set key outside right\n");
    s.push_str("set grid\n\n");
    for (i, (_, pts)) in series.iter().enumerate() {
        s.push_str(&format!("$series_{i} << EOD\n"));
        for (x, y) in pts {
            s.push_str(&format!("{x} {y}\n"));
        }
        s.push_str("EOD\n");
    }
    s.push('\n');
    let items: Vec<String> = series
        .iter()
        .enumerate()
        .map(|(i, (label, _))| {
            format!("$series_{i} using 1:2 with linespoints title '{label}'")
        })
        .collect();
    s.push_str(&format!("plot {}\n", items.join(", \\\n     ")));
    Ok(s)
}

/// Write `content` to `path`, mapping failures to [`CliError::Io`].
pub fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_spec_validates() {
        let spec = ExperimentSpec::baseline();
        spec.validate().unwrap();
        assert_eq!(spec.snr_grid_db.len(), 16);
        assert_eq!(spec.variants.len(), 6);
        assert!((spec.traffic.burst_duration() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_overrides_baseline() {
        let text = "
            # comment
            lambda_s = 0.3            # trailing comment
            replications = 4
            snr_grid_db = 0:10:5
            modes = half,full
            base_seed = 7
            variant = v1 eps_place=1e-3 eps_amp_ratio=0.1
            variant = v2 bandwidth=20e6
        ";
        let spec = parse_config(text).unwrap();
        assert_eq!(spec.traffic.lambda_s, 0.3);
        assert_eq!(spec.replications, 4);
        assert_eq!(spec.snr_grid_db, vec![0.0, 5.0, 10.0]);
        assert_eq!(spec.modes, vec![Mode::Half, Mode::Full]);
        assert_eq!(spec.base_seed, 7);
        assert_eq!(spec.variants.len(), 2);
        assert_eq!(spec.variants[0].name, "v1");
        let bw = interference::placement_error_from_bandwidth(2.48e9, 20e6).unwrap();
        assert!((spec.variants[1].eps_place_m - bw).abs() < 1e-15);
        spec.validate().unwrap();
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        let err = parse_config("bogus_key = 3").unwrap_err();
        match err {
            CliError::Config { field, .. } => assert_eq!(field, "bogus_key"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_config("lambda_p = fast").is_err());
        assert!(parse_config("modes = half,duplex").is_err());
        assert!(parse_config("variant = broken").is_err());
        // invalid traffic caught at the end of parsing
        assert!(parse_config("rate_bps = 0").is_err());
    }

    #[test]
    fn validation_rejects_empty_modes_and_bad_grid() {
        let mut spec = ExperimentSpec::baseline();
        spec.modes.clear();
        assert_eq!(spec.validate().unwrap_err().exit_code(), 2);

        let mut spec = ExperimentSpec::baseline();
        spec.snr_grid_db = vec![0.0, 2.0, 2.0];
        assert!(spec.validate().is_err());

        let mut spec = ExperimentSpec::baseline();
        spec.snr_grid_db = vec![50.0, 55.0, 70.0]; // pushes past local power
        assert!(spec.validate().is_err());

        let mut spec = ExperimentSpec::baseline();
        spec.variants.clear();
        assert!(spec.validate().is_err());
        spec.modes = vec![Mode::Half, Mode::Full];
        spec.validate().unwrap();
    }

    #[test]
    fn csv_round_trip_preserves_bits() {
        let rows = vec![SweepRow {
            snr_db: 12.0,
            mode: Mode::FullImperfect,
            variant: "d1mm-a01".into(),
            p_md: 0.123456789012345,
            loss_analytic: 0.1e-9,
            loss_sim_mean: 0.25,
            loss_sim_ci95: 0.0125,
            replications: 40,
            seed: 0xDEADBEEF,
        }];
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
        let parsed = parse_csv(&csv).unwrap();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn plot_script_declares_one_series_per_mode_variant() {
        let mk = |snr: f64, mode: Mode, variant: &str| SweepRow {
            snr_db: snr,
            mode,
            variant: variant.into(),
            p_md: 0.1,
            loss_analytic: 0.2,
            loss_sim_mean: 0.21,
            loss_sim_ci95: 0.01,
            replications: 4,
            seed: 1,
        };
        let rows = vec![
            mk(0.0, Mode::Half, "-"),
            mk(2.0, Mode::Half, "-"),
            mk(0.0, Mode::FullImperfect, "v1"),
            mk(2.0, Mode::FullImperfect, "v1"),
        ];
        let script = plot_script(&rows).unwrap();
        assert_eq!(script.matches("<< EOD").count(), 2);
        assert!(script.contains("set logscale y"));
        assert!(script.contains("title 'half'"));
        assert!(script.contains("title 'full-imperfect v1'"));
    }

    #[test]
    fn plot_script_rejects_empty_table() {
        assert!(matches!(
            plot_script(&[]),
            Err(CliError::Config { field, .. }) if field == "table"
        ));
    }

    #[test]
    fn sweep_rows_cover_grid_and_pass_through_analytics() {
        let mut spec = ExperimentSpec::baseline();
        spec.snr_grid_db = vec![30.0];
        spec.modes = vec![Mode::Full];
        spec.replications = 2;
        spec.traffic.horizon_s = 20.0;
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        // analytic full-duplex loss is the missed-detection probability itself
        assert_eq!(row.loss_analytic, row.p_md);
        let beta = detector::threshold_for_false_alarm(5, 0.1).unwrap();
        let cfg = DetectorConfig::new(5, beta, 1000.0).unwrap();
        assert_eq!(row.p_md, detector::pmd_perfect(&cfg));
        assert!((0.0..=1.0).contains(&row.loss_sim_mean));
        assert!(row.loss_sim_ci95 >= 0.0);
    }
}
