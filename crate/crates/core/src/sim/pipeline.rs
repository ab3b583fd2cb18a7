use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

/// One pipeline stage: a single resource that accepts a new wave every
/// `interval_ns` and releases it downstream after `latency_ns`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Stage {
    pub latency_ns: f64,
    pub interval_ns: f64,
    /// When set, the stage only costs time on the schedule's reload waves.
    pub reload_only: bool,
}

impl Stage {
    pub fn new(latency_ns: f64) -> Self {
        Self {
            latency_ns,
            interval_ns: latency_ns,
            reload_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Done { wave: u64 },
    Free,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    stage: usize,
    kind: Kind,
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    // Min-heap on (time, seq).
    fn cmp(&self, o: &Self) -> Ordering {
        o.time.total_cmp(&self.time).then(o.seq.cmp(&self.seq))
    }
}

struct Run<'a, F> {
    stages: &'a [Stage],
    reload: F,
    heap: BinaryHeap<Event>,
    seq: u64,
    busy: Vec<bool>,
    queues: Vec<VecDeque<u64>>,
    next_wave: u64,
    waves: u64,
    makespan: f64,
}

impl<F: Fn(u64) -> bool> Run<'_, F> {
    fn push(&mut self, time: f64, stage: usize, kind: Kind) {
        self.seq += 1;
        self.heap.push(Event {
            time,
            seq: self.seq,
            stage,
            kind,
        });
    }

    fn try_start(&mut self, s: usize, now: f64) {
        if self.busy[s] {
            return;
        }
        let wave = match self.queues[s].pop_front() {
            Some(w) => w,
            None if s == 0 && self.next_wave < self.waves => {
                self.next_wave += 1;
                self.next_wave - 1
            }
            None => return,
        };
        let st = self.stages[s];
        let active = !st.reload_only || (self.reload)(wave);
        let (lat, ii) = if active { (st.latency_ns, st.interval_ns) } else { (0.0, 0.0) };
        self.busy[s] = true;
        self.push(now + ii, s, Kind::Free);
        self.push(now + lat, s, Kind::Done { wave });
    }
}

/// Completion time of `waves` waves flowing through `stages` in order, each
/// stage serving one wave at a time in arrival order.
pub(crate) fn makespan(stages: &[Stage], waves: u64, reload: impl Fn(u64) -> bool) -> f64 {
    if waves == 0 || stages.is_empty() {
        return 0.0;
    }
    let mut run = Run {
        stages,
        reload,
        heap: BinaryHeap::new(),
        seq: 0,
        busy: vec![false; stages.len()],
        queues: vec![VecDeque::new(); stages.len()],
        next_wave: 0,
        waves,
        makespan: 0.0,
    };
    run.try_start(0, 0.0);
    while let Some(ev) = run.heap.pop() {
        match ev.kind {
            Kind::Free => {
                run.busy[ev.stage] = false;
                run.try_start(ev.stage, ev.time);
            }
            Kind::Done { wave } => {
                if ev.stage + 1 < stages.len() {
                    run.queues[ev.stage + 1].push_back(wave);
                    run.try_start(ev.stage + 1, ev.time);
                } else {
                    run.makespan = run.makespan.max(ev.time);
                }
            }
        }
    }
    run.makespan
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form recurrence for in-order pipelines.
    fn recurrence(stages: &[Stage], waves: u64, reload: impl Fn(u64) -> bool) -> f64 {
        let mut free = vec![0.0f64; stages.len()];
        let mut end = 0.0f64;
        for w in 0..waves {
            let mut t = 0.0f64;
            for (s, st) in stages.iter().enumerate() {
                let active = !st.reload_only || reload(w);
                let (lat, ii) = if active { (st.latency_ns, st.interval_ns) } else { (0.0, 0.0) };
                let start = t.max(free[s]);
                free[s] = start + ii;
                t = start + lat;
            }
            end = end.max(t);
        }
        end
    }

    #[test]
    fn single_wave_is_latency_sum() {
        let st = [Stage::new(2.0), Stage::new(8.5), Stage::new(0.78)];
        assert!((makespan(&st, 1, |_| false) - 11.28).abs() < 1e-12);
        assert_eq!(makespan(&st, 0, |_| false), 0.0);
    }

    #[test]
    fn steady_state_set_by_slowest_stage() {
        let st = [Stage::new(2.0), Stage::new(8.0), Stage::new(1.0)];
        assert!((makespan(&st, 100, |_| false) - (11.0 + 99.0 * 8.0)).abs() < 1e-9);
    }

    #[test]
    fn matches_recurrence() {
        let tree = Stage {
            latency_ns: 4.0 * 3.125,
            interval_ns: 3.125,
            reload_only: false,
        };
        let reload = Stage {
            latency_ns: 1.56,
            interval_ns: 1.56,
            reload_only: true,
        };
        let st = [Stage::new(2.0), Stage::new(0.78), reload, Stage::new(0.2), Stage::new(0.78), tree];
        for waves in [1, 2, 7, 300] {
            let f = |w: u64| w % 5 == 0;
            let a = makespan(&st, waves, f);
            let b = recurrence(&st, waves, f);
            assert!((a - b).abs() < 1e-9, "{a} {b}");
        }
    }
}
