//! Discrete-event Monte Carlo simulation of the single-channel network.
//!
//! Two independent Poisson session flows share one channel. Primary-user
//! sessions have preemptive priority; each session carries `n_packets`
//! packets and is dropped whole once its head-of-line wait exceeds the delay
//! bound (the bound applies uniformly, including waits behind other primary
//! sessions). Secondary packets queue in an infinite FIFO buffer and are
//! served in bursts of up to one session's worth of packets.
//!
//! Mode semantics:
//!
//! * Half duplex — a secondary burst is opaque. The secondary senses only
//!   when it is about to start a burst; against any already-waiting primary
//!   the sensing succeeds with probability 1 − p_md (on a miss the burst
//!   starts anyway and the primary keeps waiting). A primary arriving
//!   mid-burst waits for the burst to end and is dropped iff its wait
//!   exceeds the bound.
//! * Full duplex (perfect or imperfect) — each primary arrival during a
//!   secondary burst triggers one Bernoulli detection trial. On success the
//!   secondary yields immediately and requeues its unsent packets; on
//!   failure the primary session is lost.
//!
//! Replications are bit-reproducible: one seeded RNG stream per replication,
//! a deterministically tie-broken event queue, and per-replication seeds
//! derived from the base seed by a splittable counter scheme.

mod queue;

pub use queue::{Completion, Event, EventKind, EventQueue};

use crate::error::InvalidConfig;
use crate::lossmodel::TrafficConfig;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use std::collections::VecDeque;

/// Which sensing regime the secondary user operates under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuplexMode {
    HalfDuplex,
    FullDuplexPerfect,
    FullDuplexImperfect,
}

/// A duplex mode together with the missed-detection probability of its
/// detector operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplexScenario {
    pub mode: DuplexMode,
    pub p_md: f64,
}

impl DuplexScenario {
    pub fn new(mode: DuplexMode, p_md: f64) -> Result<Self, InvalidConfig> {
        if !(0.0..=1.0).contains(&p_md) || !p_md.is_finite() {
            return Err(InvalidConfig::new("p_md", "must lie in [0, 1]"));
        }
        Ok(Self { mode, p_md })
    }
}

/// Per-replication or aggregated simulation outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub pu_packets_offered: u64,
    pub pu_packets_lost: u64,
    pub su_packets_sent: u64,
    /// Lost/offered packet fraction (mean of per-replication fractions when
    /// aggregated); zero when nothing was offered.
    pub pu_loss_rate: f64,
    /// Fraction of the observation window spent on secondary transmissions.
    pub su_channel_share: f64,
    pub replication_count: u32,
    /// 95% normal-approximation half-width of `pu_loss_rate` across
    /// replications (zero for a single replication).
    pub ci_halfwidth_95: f64,
}

/// Derive a decorrelated per-replication seed from `base` (splitmix64 over
/// a golden-ratio counter).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy)]
struct PuSession {
    id: u64,
    arrival: f64,
}

#[derive(Debug, Clone, Copy)]
enum Channel {
    Idle,
    Pu,
    Su {
        burst: u64,
        start: f64,
        end: f64,
        packets: u64,
    },
}

struct Engine<'a> {
    traffic: &'a TrafficConfig,
    scenario: DuplexScenario,
    rng: ChaCha8Rng,
    queue: EventQueue,
    now: f64,
    channel: Channel,
    pu_queue: VecDeque<PuSession>,
    su_backlog: u64,
    next_pu_id: u64,
    next_burst_id: u64,
    pu_gap: Option<Exp<f64>>,
    su_gap: Option<Exp<f64>>,
    // session counters
    pu_offered: u64,
    pu_lost: u64,
    pu_delivered: u64,
    // secondary stats, clipped to the observation window
    su_sent_packets: u64,
    su_busy: f64,
}

impl<'a> Engine<'a> {
    fn new(traffic: &'a TrafficConfig, scenario: DuplexScenario, seed: u64) -> Self {
        let mut engine = Engine {
            traffic,
            scenario,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queue: EventQueue::new(),
            now: 0.0,
            channel: Channel::Idle,
            pu_queue: VecDeque::new(),
            su_backlog: 0,
            next_pu_id: 0,
            next_burst_id: 0,
            pu_gap: (traffic.lambda_p > 0.0)
                .then(|| Exp::new(traffic.lambda_p).expect("rate > 0")),
            su_gap: (traffic.lambda_s > 0.0)
                .then(|| Exp::new(traffic.lambda_s).expect("rate > 0")),
            pu_offered: 0,
            pu_lost: 0,
            pu_delivered: 0,
            su_sent_packets: 0,
            su_busy: 0.0,
        };
        engine.schedule_next_pu_arrival(0.0);
        engine.schedule_next_su_arrival(0.0);
        engine
    }

    fn schedule_next_pu_arrival(&mut self, from: f64) {
        if let Some(gap) = self.pu_gap {
            let t = from + gap.sample(&mut self.rng);
            if t < self.traffic.horizon_s {
                self.queue.push(t, EventKind::PuArrival);
            }
        }
    }

    fn schedule_next_su_arrival(&mut self, from: f64) {
        if let Some(gap) = self.su_gap {
            let t = from + gap.sample(&mut self.rng);
            if t < self.traffic.horizon_s {
                self.queue.push(t, EventKind::SuArrival);
            }
        }
    }

    fn pu_pending(&self) -> u64 {
        self.pu_offered - self.pu_lost - self.pu_delivered
    }

    /// Busy-time contribution of the interval [start, end] to [0, horizon].
    fn clip_to_window(&self, start: f64, end: f64) -> f64 {
        (end.min(self.traffic.horizon_s) - start.min(self.traffic.horizon_s)).max(0.0)
    }

    /// Packets of a burst begun at `start` whose transmission completes by
    /// both `upto` and the horizon.
    fn packets_done_for_stats(&self, start: f64, upto: f64, size: u64) -> u64 {
        let window = upto.min(self.traffic.horizon_s) - start;
        if window <= 0.0 {
            return 0;
        }
        let pt = self.traffic.packet_duration();
        ((window / pt + 1e-9).floor() as u64).min(size)
    }

    fn run(&mut self) {
        while let Some(event) = self.queue.pop() {
            assert!(
                event.time >= self.now,
                "event at {} precedes clock {}",
                event.time,
                self.now
            );
            self.now = event.time;
            match event.kind {
                EventKind::PuArrival => self.on_pu_arrival(),
                EventKind::SuArrival => self.on_su_arrival(),
                EventKind::SenseOutcome { session } => self.on_sense_outcome(session),
                EventKind::BurstEnd(done) => self.on_burst_end(done),
            }
            // past the horizon, stop as soon as every offered primary
            // session has resolved; secondary backlog may simply remain
            if self.now >= self.traffic.horizon_s && self.pu_pending() == 0 {
                break;
            }
        }
        // account the tail of a still-running secondary burst
        if let Channel::Su {
            start,
            end,
            packets,
            ..
        } = self.channel
        {
            self.su_busy += self.clip_to_window(start, end);
            self.su_sent_packets += self.packets_done_for_stats(start, end, packets);
        }
        debug_assert!(
            self.now < self.traffic.horizon_s || self.pu_pending() == 0,
            "drain left unresolved primary sessions"
        );
    }

    fn on_pu_arrival(&mut self) {
        let session = PuSession {
            id: self.next_pu_id,
            arrival: self.now,
        };
        self.next_pu_id += 1;
        self.pu_offered += 1;
        self.pu_queue.push_back(session);
        self.schedule_next_pu_arrival(self.now);

        match (self.channel, self.scenario.mode) {
            (Channel::Idle, _) => self.try_start_service(),
            (Channel::Pu { .. }, _) => {} // waits FIFO behind the session in service
            (Channel::Su { .. }, DuplexMode::HalfDuplex) => {} // opaque burst
            (Channel::Su { .. }, _) => {
                // full duplex: resolve detection at the arrival instant
                self.queue
                    .push(self.now, EventKind::SenseOutcome { session: session.id });
            }
        }
    }

    fn on_su_arrival(&mut self) {
        self.su_backlog += self.traffic.n_packets as u64;
        self.schedule_next_su_arrival(self.now);
        if matches!(self.channel, Channel::Idle) {
            self.try_start_service();
        }
    }

    fn on_sense_outcome(&mut self, session: u64) {
        if !matches!(self.channel, Channel::Su { .. }) {
            // a simultaneous earlier outcome already preempted the burst;
            // the session waits under ordinary priority instead
            return;
        }
        let missed = self.rng.random::<f64>() < self.scenario.p_md;
        if missed {
            let pos = self
                .pu_queue
                .iter()
                .position(|s| s.id == session)
                .expect("undetected session must still be queued");
            self.pu_queue.remove(pos);
            self.pu_lost += 1;
        } else {
            self.preempt_su();
            self.try_start_service();
        }
    }

    fn on_burst_end(&mut self, done: Completion) {
        match (done, self.channel) {
            (Completion::Pu, Channel::Pu) => {
                self.pu_delivered += 1;
                self.channel = Channel::Idle;
                self.try_start_service();
            }
            (Completion::Pu, _) => unreachable!("primary service is never preempted"),
            (
                Completion::Su { burst },
                Channel::Su {
                    burst: current,
                    start,
                    end,
                    packets,
                },
            ) if burst == current => {
                self.su_busy += self.clip_to_window(start, end);
                self.su_sent_packets += self.packets_done_for_stats(start, end, packets);
                self.channel = Channel::Idle;
                self.try_start_service();
            }
            (Completion::Su { .. }, _) => {} // stale end of a preempted burst
        }
    }

    /// Preempt the running secondary burst: completed packets are counted,
    /// unsent ones (including a partially sent packet) return to the front
    /// of the backlog.
    fn preempt_su(&mut self) {
        let Channel::Su {
            start, packets, ..
        } = self.channel
        else {
            unreachable!("preempt_su requires a running secondary burst");
        };
        let pt = self.traffic.packet_duration();
        let completed = (((self.now - start) / pt + 1e-9).floor() as u64).min(packets);
        self.su_sent_packets += self.packets_done_for_stats(start, self.now, packets);
        self.su_busy += self.clip_to_window(start, self.now);
        self.su_backlog += packets - completed;
        self.channel = Channel::Idle;
    }

    /// Give the idle channel to the next unit of work: expired primary
    /// sessions are dropped, the surviving head (if any) is served, and
    /// otherwise a secondary burst starts. In half duplex a burst start with
    /// primaries still waiting goes through one sensing trial; a miss lets
    /// the burst start over their heads.
    fn try_start_service(&mut self) {
        debug_assert!(matches!(self.channel, Channel::Idle));
        self.drop_expired_sessions();
        match self.scenario.mode {
            DuplexMode::HalfDuplex => {
                if !self.pu_queue.is_empty() && self.su_backlog > 0 {
                    let missed = self.rng.random::<f64>() < self.scenario.p_md;
                    if missed {
                        self.start_su_burst();
                        return;
                    }
                }
                if let Some(session) = self.pu_queue.pop_front() {
                    self.start_pu_service(session);
                } else if self.su_backlog > 0 {
                    self.start_su_burst();
                }
            }
            DuplexMode::FullDuplexPerfect | DuplexMode::FullDuplexImperfect => {
                if let Some(session) = self.pu_queue.pop_front() {
                    self.start_pu_service(session);
                } else if self.su_backlog > 0 {
                    self.start_su_burst();
                }
            }
        }
    }

    /// Drop every waiting session whose head-of-line wait already exceeds
    /// the delay bound. Waits decrease along the FIFO, so expired sessions
    /// form a prefix.
    fn drop_expired_sessions(&mut self) {
        while let Some(front) = self.pu_queue.front() {
            if self.now - front.arrival > self.traffic.delay_bound_s {
                self.pu_queue.pop_front();
                self.pu_lost += 1;
            } else {
                break;
            }
        }
    }

    fn start_pu_service(&mut self, session: PuSession) {
        debug_assert!(self.now - session.arrival <= self.traffic.delay_bound_s);
        let end = self.now + self.traffic.burst_duration();
        self.channel = Channel::Pu;
        self.queue.push(end, EventKind::BurstEnd(Completion::Pu));
    }

    fn start_su_burst(&mut self) {
        debug_assert!(self.su_backlog > 0);
        let packets = self.su_backlog.min(self.traffic.n_packets as u64);
        self.su_backlog -= packets;
        let end = self.now + packets as f64 * self.traffic.packet_duration();
        let burst = self.next_burst_id;
        self.next_burst_id += 1;
        self.channel = Channel::Su {
            burst,
            start: self.now,
            end,
            packets,
        };
        self.queue
            .push(end, EventKind::BurstEnd(Completion::Su { burst }));
    }
}

/// Simulate one replication of the scenario over `[0, horizon_s]`.
///
/// Arrivals stop at the horizon; the replication then drains until every
/// offered primary session has been delivered or dropped, so packet counts
/// always balance. Identical `(traffic, scenario, seed)` produce identical
/// results bit for bit.
pub fn run_replication(
    traffic: &TrafficConfig,
    scenario: DuplexScenario,
    seed: u64,
) -> SimResult {
    let mut engine = Engine::new(traffic, scenario, seed);
    engine.run();

    let n = traffic.n_packets as u64;
    let offered = engine.pu_offered * n;
    let lost = engine.pu_lost * n;
    debug_assert!(engine.pu_offered == engine.pu_lost + engine.pu_delivered);
    SimResult {
        pu_packets_offered: offered,
        pu_packets_lost: lost,
        su_packets_sent: engine.su_sent_packets,
        pu_loss_rate: if offered == 0 {
            0.0
        } else {
            lost as f64 / offered as f64
        },
        su_channel_share: (engine.su_busy / traffic.horizon_s).clamp(0.0, 1.0),
        replication_count: 1,
        ci_halfwidth_95: 0.0,
    }
}

/// Run independent replications with decorrelated seeds and aggregate.
///
/// Replications execute in parallel; the reduction runs in replication-index
/// order, so the aggregate is deterministic for a given `base_seed`.
pub fn run_experiment(
    traffic: &TrafficConfig,
    scenario: DuplexScenario,
    replications: u32,
    base_seed: u64,
) -> SimResult {
    assert!(replications >= 1, "at least one replication required");
    let results: Vec<SimResult> = (0..replications)
        .into_par_iter()
        .map(|i| run_replication(traffic, scenario, derive_seed(base_seed, i as u64)))
        .collect();

    let n = replications as f64;
    let mean_loss = results.iter().map(|r| r.pu_loss_rate).sum::<f64>() / n;
    let ci = if replications > 1 {
        let var = results
            .iter()
            .map(|r| (r.pu_loss_rate - mean_loss).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        1.96 * (var / n).sqrt()
    } else {
        0.0
    };

    SimResult {
        pu_packets_offered: results.iter().map(|r| r.pu_packets_offered).sum(),
        pu_packets_lost: results.iter().map(|r| r.pu_packets_lost).sum(),
        su_packets_sent: results.iter().map(|r| r.su_packets_sent).sum(),
        pu_loss_rate: mean_loss,
        su_channel_share: results.iter().map(|r| r.su_channel_share).sum::<f64>() / n,
        replication_count: replications,
        ci_halfwidth_95: ci,
    }
}
