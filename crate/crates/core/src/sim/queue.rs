//! Time-ordered event queue with deterministic tie-breaking.
//!
//! Events at equal timestamps are ordered by kind (primary-user arrivals
//! first, then sensing outcomes, then service completions, then secondary
//! arrivals) and finally by insertion sequence, so replications are
//! bit-reproducible regardless of heap internals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// What finished when a `BurstEnd` fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    /// A primary-user session finished service.
    Pu,
    /// The secondary burst with this id finished (stale ids are ignored by
    /// the engine after preemption).
    Su { burst: u64 },
}

/// Simulation event kinds, in tie-break priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    PuArrival,
    /// Detection outcome for the primary session with this id (full-duplex
    /// modes schedule it at the arrival instant).
    SenseOutcome { session: u64 },
    BurstEnd(Completion),
    SuArrival,
}

impl EventKind {
    fn rank(&self) -> u8 {
        match self {
            EventKind::PuArrival => 0,
            EventKind::SenseOutcome { .. } => 1,
            EventKind::BurstEnd(_) => 2,
            EventKind::SuArrival => 3,
        }
    }
}

/// A scheduled event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Debug)]
struct Entry {
    time: f64,
    rank: u8,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the earliest event
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.rank.cmp(&self.rank))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic discrete-event queue.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Entry>,
    seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: f64, kind: EventKind) {
        assert!(
            time.is_finite() && time >= 0.0,
            "event timestamps must be finite and nonnegative, got {time}"
        );
        let entry = Entry {
            time,
            rank: kind.rank(),
            seq: self.seq,
            kind,
        };
        self.seq += 1;
        self.heap.push(entry);
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop().map(|e| Event {
            time: e.time,
            kind: e.kind,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
