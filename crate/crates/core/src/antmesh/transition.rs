use crate::error::NoRoute;
use crate::topology::NodeId;

/// Pseudo-random transition rule. With `u <= p0` the eligible neighbour with
/// the largest pheromone wins (lowest id on ties); otherwise a neighbour is
/// drawn in proportion to pheromone renormalised over the eligible set, using
/// `(u - p0) / (1 - p0)` as the second uniform draw.
pub fn select_next_hop<F>(entries: &[(NodeId, f64)], excluded: F, p0: f64, u: f64) -> Result<NodeId, NoRoute>
where
    F: Fn(NodeId) -> bool,
{
    let eligible: Vec<(NodeId, f64)> = entries.iter().copied().filter(|(n, _)| !excluded(*n)).collect();
    if eligible.is_empty() {
        return Err(NoRoute);
    }
    if u <= p0 {
        let mut best = eligible[0];
        for &(n, p) in &eligible[1..] {
            if p > best.1 || (p == best.1 && n < best.0) {
                best = (n, p);
            }
        }
        return Ok(best.0);
    }
    let v = ((u - p0) / (1.0 - p0)).clamp(0.0, 1.0);
    let total: f64 = eligible.iter().map(|(_, p)| p.max(0.0)).sum();
    if total <= 0.0 {
        let i = ((v * eligible.len() as f64) as usize).min(eligible.len() - 1);
        return Ok(eligible[i].0);
    }
    let target = v * total;
    let mut acc = 0.0;
    for &(n, p) in &eligible {
        acc += p.max(0.0);
        if target < acc {
            return Ok(n);
        }
    }
    Ok(eligible.iter().rev().find(|(_, p)| *p > 0.0).map(|(n, _)| *n).unwrap_or(eligible[0].0))
}
