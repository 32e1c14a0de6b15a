//! Link and path cost arithmetic. All delays are microseconds.

use crate::topology::Channel;

/// Time for a newly queued packet to clear the link: the `queue_len`
/// packets ahead of it plus itself, each costing `e_tx_us`.
pub fn link_quality(e_tx_us: f64, queue_len: u32) -> f64 {
    e_tx_us * queue_len as f64 + e_tx_us
}

/// Link delay scaled by the largest queue among the far end and its
/// neighbours. The factor is floored at one so idle neighbourhoods leave the
/// link cost unchanged instead of zeroing it.
pub fn inter_flow_delay(lq_us: f64, interferer_queues: &[u32]) -> f64 {
    let worst = interferer_queues.iter().copied().max().unwrap_or(0).max(1);
    lq_us * worst as f64
}

/// Additive penalty when the two most recent hops share a channel: the next
/// hop's backlog takes twice as long to drain at half the effective
/// bandwidth, `2 * q_next * L / B`. Zero when channels differ or there is no
/// downstream hop.
pub fn intra_flow_cost(prev_channel: Option<Channel>, cur_channel: Channel, q_next: u32, pkt_bits: u64, link_bps: u64) -> f64 {
    if prev_channel != Some(cur_channel) || link_bps == 0 {
        return 0.0;
    }
    2.0 * q_next as f64 * pkt_bits as f64 / link_bps as f64 * 1e6
}

/// Pheromone reinforcement `min(cap, mean / (2 * trip))`.
pub fn reinforcement(mean_trip_us: f64, trip_us: f64, cap: f64) -> f64 {
    if trip_us <= 0.0 {
        return cap;
    }
    (0.5 * mean_trip_us / trip_us).min(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lq_examples() {
        assert_eq!(link_quality(3088.0, 0), 3088.0);
        assert_eq!(link_quality(3088.0, 5), 18_528.0);
        assert_eq!(link_quality(3088.0, 19), 20.0 * 3088.0);
    }

    #[test]
    fn ifld_examples() {
        assert_eq!(inter_flow_delay(3088.0, &[]), 3088.0);
        assert_eq!(inter_flow_delay(3088.0, &[0, 0]), 3088.0);
        assert_eq!(inter_flow_delay(1000.0, &[0, 3, 5]), 5000.0);
        assert_eq!(inter_flow_delay(1200.0, &[1]), 1200.0);
    }

    #[test]
    fn ifld_monotone_in_queues() {
        let base = [2u32, 4, 1];
        let mut prev = inter_flow_delay(700.0, &base);
        for bump in 0..10u32 {
            let q = [2, 4 + bump, 1];
            let v = inter_flow_delay(700.0, &q);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn intra_flow_examples() {
        assert_eq!(intra_flow_cost(Some(4), 2, 7, 4096, 2_000_000), 0.0);
        assert_eq!(intra_flow_cost(None, 2, 7, 4096, 2_000_000), 0.0);
        assert_eq!(intra_flow_cost(Some(2), 2, 4, 4096, 2_000_000), 16_384.0);
        assert_eq!(intra_flow_cost(Some(2), 2, 0, 4096, 2_000_000), 0.0);
    }

    #[test]
    fn reinforcement_examples() {
        assert_eq!(reinforcement(1000.0, 1000.0, 1.0), 0.5);
        assert_eq!(reinforcement(1000.0, 250.0, 1.0), 1.0);
        assert_eq!(reinforcement(1000.0, 250.0, 5.0), 2.0);
        assert_eq!(reinforcement(1000.0, 2000.0, 1.0), 0.25);
    }
}
