//! Run ledger and the statistics derived from it.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossCounts {
    pub queue_overflow: u64,
    pub mac_loss: u64,
    pub ttl_expired: u64,
    pub no_route: u64,
    /// Still queued or in flight when the horizon was reached.
    pub horizon_cut: u64,
}

impl LossCounts {
    pub fn total(&self) -> u64 {
        self.queue_overflow + self.mac_loss + self.ttl_expired + self.no_route + self.horizon_cut
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossCause {
    QueueOverflow,
    MacLoss,
    TtlExpired,
    NoRoute,
}

impl LossCause {
    pub fn label(self) -> &'static str {
        match self {
            LossCause::QueueOverflow => "queue-overflow",
            LossCause::MacLoss => "mac-loss",
            LossCause::TtlExpired => "ttl-expired",
            LossCause::NoRoute => "no-route",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlCounts {
    pub fsa: u64,
    pub bsa: u64,
    pub hsa: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntCounters {
    pub launched: u64,
    pub arrived: u64,
    pub died: u64,
    pub completed: u64,
    pub lost_in_mac: u64,
    pub stale_estimates: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaySample {
    pub delivered_at_us: u64,
    pub delay_us: u64,
    pub bits: u64,
    pub flow: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsLedger {
    pub horizon_us: u64,
    pub warmup_us: u64,
    pub data_sent: u64,
    pub data_delivered: u64,
    pub data_tx_hops: u64,
    /// Per-hop control transmissions: every ant hop and every hello broadcast.
    pub control_tx_hops: u64,
    pub control: ControlCounts,
    pub loss: LossCounts,
    pub ants: AntCounters,
    pub delay_samples: Vec<DelaySample>,
    pub change_points_us: Vec<u64>,
}

impl MetricsLedger {
    pub fn new(horizon_us: u64, warmup_us: u64) -> Self {
        MetricsLedger { horizon_us, warmup_us, ..Default::default() }
    }

    pub fn record_loss(&mut self, cause: LossCause) {
        let l = &mut self.loss;
        match cause {
            LossCause::QueueOverflow => l.queue_overflow += 1,
            LossCause::MacLoss => l.mac_loss += 1,
            LossCause::TtlExpired => l.ttl_expired += 1,
            LossCause::NoRoute => l.no_route += 1,
        }
    }

    pub fn record_delivery(&mut self, delivered_at_us: u64, delay_us: u64, bits: u64, flow: u32) {
        self.data_delivered += 1;
        self.delay_samples.push(DelaySample { delivered_at_us, delay_us, bits, flow });
    }

    /// Close the books: whatever was sent but neither delivered nor lost is
    /// attributed to the horizon.
    pub fn finish(&mut self) {
        let accounted = self.data_delivered
            + self.loss.queue_overflow
            + self.loss.mac_loss
            + self.loss.ttl_expired
            + self.loss.no_route;
        self.loss.horizon_cut = self.data_sent.saturating_sub(accounted);
    }

    fn measured(&self) -> impl Iterator<Item = &DelaySample> {
        let w = self.warmup_us;
        self.delay_samples.iter().filter(move |s| s.delivered_at_us >= w)
    }
}

/// Delivered payload bits per second after the warm-up period.
pub fn throughput(l: &MetricsLedger) -> f64 {
    let span = l.horizon_us.saturating_sub(l.warmup_us);
    if span == 0 {
        return 0.0;
    }
    let bits: u64 = l.measured().map(|s| s.bits).sum();
    bits as f64 / (span as f64 / 1e6)
}

/// Per-flow throughput after warm-up, indexed by flow id.
pub fn flow_throughput(l: &MetricsLedger, flow: u32) -> f64 {
    let span = l.horizon_us.saturating_sub(l.warmup_us);
    if span == 0 {
        return 0.0;
    }
    let bits: u64 = l.measured().filter(|s| s.flow == flow).map(|s| s.bits).sum();
    bits as f64 / (span as f64 / 1e6)
}

/// Control transmissions per delivered data packet.
pub fn nrl(l: &MetricsLedger) -> f64 {
    l.control_tx_hops as f64 / l.data_delivered.max(1) as f64
}

/// Control transmissions per sent data packet (alternative denominator).
pub fn nrl_sent(l: &MetricsLedger) -> f64 {
    l.control_tx_hops as f64 / l.data_sent.max(1) as f64
}

pub fn delivery_fraction(l: &MetricsLedger) -> f64 {
    if l.data_sent == 0 {
        return 0.0;
    }
    l.data_delivered as f64 / l.data_sent as f64
}

pub fn loss_ratio(l: &MetricsLedger) -> f64 {
    if l.data_sent == 0 {
        return 0.0;
    }
    1.0 - delivery_fraction(l)
}

/// Mean end-to-end delay after warm-up; zero when nothing was delivered.
pub fn mean_delay(l: &MetricsLedger) -> f64 {
    let (n, sum) = l.measured().fold((0u64, 0u128), |(n, s), x| (n + 1, s + x.delay_us as u128));
    if n == 0 {
        0.0
    } else {
        sum as f64 / n as f64
    }
}

/// Mean delay of packets delivered in each `window_us` bucket of `[start, end)`;
/// `None` marks a bucket with no deliveries.
pub fn windowed_delay(l: &MetricsLedger, start_us: u64, end_us: u64, window_us: u64) -> Vec<Option<f64>> {
    if end_us <= start_us || window_us == 0 {
        return Vec::new();
    }
    let n = ((end_us - start_us) / window_us) as usize;
    let mut sums = vec![(0u64, 0u128); n];
    for s in &l.delay_samples {
        if s.delivered_at_us < start_us || s.delivered_at_us >= start_us + n as u64 * window_us {
            continue;
        }
        let k = ((s.delivered_at_us - start_us) / window_us) as usize;
        sums[k].0 += 1;
        sums[k].1 += s.delay_us as u128;
    }
    sums.into_iter().map(|(c, s)| if c == 0 { None } else { Some(s as f64 / c as f64) }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearningTimeProbe {
    pub change_point_us: u64,
    /// End of the post-change interval (next change point or horizon).
    pub end_us: u64,
    pub window_us: u64,
    pub epsilon: f64,
    pub settle_windows: usize,
}

impl LearningTimeProbe {
    pub fn new(change_point_us: u64, end_us: u64) -> Self {
        LearningTimeProbe { change_point_us, end_us, window_us: 500_000, epsilon: 0.10, settle_windows: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Learning {
    Settled(u64),
    NotSettled,
}

impl Learning {
    pub fn micros(self) -> Option<u64> {
        match self {
            Learning::Settled(t) => Some(t),
            Learning::NotSettled => None,
        }
    }
}

/// Time from the change point until `settle_windows` consecutive windowed
/// delay means stay within `epsilon` (relative) of the steady state, the
/// steady state being the mean delay over the last quarter of the interval.
/// `series` holds `(delivered_at_us, delay_us)` pairs.
pub fn learning_time(probe: &LearningTimeProbe, series: &[(u64, f64)]) -> Learning {
    let LearningTimeProbe { change_point_us: cp, end_us: end, window_us: w, epsilon, settle_windows } = *probe;
    if end <= cp || w == 0 {
        return Learning::NotSettled;
    }
    let tail_start = cp + (end - cp) * 3 / 4;
    let tail: Vec<f64> = series.iter().filter(|(t, _)| *t >= tail_start && *t < end).map(|(_, d)| *d).collect();
    if tail.is_empty() {
        return Learning::NotSettled;
    }
    let steady = tail.iter().sum::<f64>() / tail.len() as f64;
    let n = ((end - cp) / w) as usize;
    let mut windows = vec![(0usize, 0.0f64); n];
    for &(t, d) in series {
        if t < cp || t >= cp + n as u64 * w {
            continue;
        }
        let k = ((t - cp) / w) as usize;
        windows[k].0 += 1;
        windows[k].1 += d;
    }
    let settled = |k: usize| {
        let (c, s) = windows[k];
        c > 0 && ((s / c as f64) - steady).abs() <= epsilon * steady.abs()
    };
    let need = settle_windows.max(1);
    (0..n.saturating_sub(need - 1))
        .find(|&k| (k..k + need).all(settled))
        .map_or(Learning::NotSettled, |k| Learning::Settled(k as u64 * w))
}

/// Learning time after the ledger's first change point past t = 0.
pub fn ledger_learning_time(l: &MetricsLedger, window_us: u64, epsilon: f64, settle_windows: usize) -> Option<Learning> {
    let cps: Vec<u64> = l.change_points_us.iter().copied().filter(|&c| c > 0 && c < l.horizon_us).collect();
    let cp = *cps.first()?;
    let end = cps.get(1).copied().unwrap_or(l.horizon_us);
    let probe = LearningTimeProbe { change_point_us: cp, end_us: end, window_us, epsilon, settle_windows };
    let series: Vec<(u64, f64)> = l.delay_samples.iter().map(|s| (s.delivered_at_us, s.delay_us as f64)).collect();
    Some(learning_time(&probe, &series))
}

pub mod stats {
    use statrs::distribution::{ContinuousCDF, StudentsT};

    pub fn mean(xs: &[f64]) -> f64 {
        if xs.is_empty() {
            return f64::NAN;
        }
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    pub fn sample_sd(xs: &[f64]) -> f64 {
        if xs.len() < 2 {
            return 0.0;
        }
        let m = mean(xs);
        (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    }

    fn t_quantile(p: f64, df: f64) -> f64 {
        StudentsT::new(0.0, 1.0, df).map(|t| t.inverse_cdf(p)).unwrap_or(f64::INFINITY)
    }

    /// Mean and half-width of the two-sided 95% t interval.
    pub fn mean_ci95(xs: &[f64]) -> (f64, f64) {
        let m = mean(xs);
        if xs.len() < 2 {
            return (m, 0.0);
        }
        let se = sample_sd(xs) / (xs.len() as f64).sqrt();
        (m, t_quantile(0.975, (xs.len() - 1) as f64) * se)
    }

    /// One-sided paired t test of `mean(a - b) > 0` at 95%: returns the
    /// lower confidence bound of the mean difference and whether it is positive.
    /// Identical samples (zero variance) pass only with a positive mean.
    pub fn paired_greater(a: &[f64], b: &[f64]) -> (f64, bool) {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let m = mean(&d);
        if d.len() < 2 {
            return (m, m > 0.0);
        }
        let se = sample_sd(&d) / (d.len() as f64).sqrt();
        let lower = m - t_quantile(0.95, (d.len() - 1) as f64) * se;
        (lower, lower > 0.0 || (se == 0.0 && m > 0.0))
    }
}
