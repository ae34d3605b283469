use serde::Serialize;

use super::OrbitError;
use crate::maps::{GenBeta, Side};

const MAX_ITERATIONS: usize = 10_000;
const MAX_COMPONENTS: usize = 10_000;
pub const DEFAULT_SEED_WIDTH: f64 = 1e-6;

/// Finite union of closed intervals invariant under a β-transformation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalCycle {
    pub components: Vec<(f64, f64)>,
    pub alpha: f64,
    pub beta: f64,
    /// Iterations until the union stopped growing.
    pub stabilization: usize,
    pub tol: f64,
}

impl IntervalCycle {
    pub fn total_length(&self) -> f64 {
        self.components.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components
            .iter()
            .any(|&(a, b)| a - self.tol <= x && x <= b + self.tol)
    }

    /// Hausdorff distance from the image of the union to the union.
    pub fn invariance_defect(&self) -> f64 {
        let img = merge(image(&self.components, self.alpha, self.beta), self.tol);
        excess(&img, &self.components)
    }
}

fn image(u: &[(f64, f64)], alpha: f64, beta: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a, b) in u {
        let lo = beta * a + alpha;
        let hi = beta * b + alpha;
        let mut k = lo.floor();
        while k < hi {
            let s = lo.max(k) - k;
            let e = hi.min(k + 1.0) - k;
            if e > s {
                out.push((s, e));
            }
            k += 1.0;
        }
    }
    out
}

fn merge(mut v: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 + tol => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// One-sided Hausdorff distance `sup_{x ∈ a} dist(x, b)` for interval unions.
fn excess(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let dist = |x: f64| {
        b.iter()
            .map(|&(s, e)| {
                if x < s {
                    s - x
                } else if x > e {
                    x - e
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst = 0.0f64;
    for &(s, e) in a {
        worst = worst.max(dist(s)).max(dist(e));
        // an interior gap of b inside [s, e]
        for &(_, gap_lo) in b {
            if let Some(&(gap_hi, _)) = b.iter().find(|&&(s2, _)| s2 > gap_lo) {
                let mid = (gap_lo + gap_hi) / 2.0;
                if s < mid && mid < e {
                    worst = worst.max(dist(mid));
                }
            }
        }
    }
    worst
}

pub fn attractor(m: &GenBeta<f64>, tol: f64) -> Result<IntervalCycle, OrbitError> {
    attractor_with_seed(m, tol, DEFAULT_SEED_WIDTH)
}

/// Grows `[0, δ] ∪ [1 − δ, 1]` under the map until the union is invariant,
/// then checks that every interior endpoint lies on the forward orbit of
/// `G(0⁺)` or `G(1⁻)`.
pub fn attractor_with_seed(m: &GenBeta<f64>, tol: f64, delta: f64) -> Result<IntervalCycle, OrbitError> {
    if !(tol > 0.0) || !(delta > 0.0) || delta >= 0.5 {
        return Err(OrbitError::InvalidArgument(format!(
            "bad tolerance {tol} or seed width {delta}"
        )));
    }
    let (alpha, beta) = (*m.alpha(), *m.beta());
    let mut u = vec![(0.0, delta), (1.0 - delta, 1.0)];
    let mut iterations = 0;
    loop {
        if iterations >= MAX_ITERATIONS {
            return Err(OrbitError::NotConverged(iterations));
        }
        iterations += 1;
        let mut next = u.clone();
        next.extend(image(&u, alpha, beta));
        let next = merge(next, tol);
        if next.len() > MAX_COMPONENTS {
            return Err(OrbitError::Fragmentation { cap: MAX_COMPONENTS });
        }
        let grown = excess(&next, &u);
        u = next;
        if grown < tol {
            break;
        }
    }
    let cycle = IntervalCycle {
        components: u,
        alpha,
        beta,
        stabilization: iterations,
        tol,
    };
    check_endpoints(m, &cycle)?;
    Ok(cycle)
}

fn check_endpoints(m: &GenBeta<f64>, cycle: &IntervalCycle) -> Result<(), OrbitError> {
    let len = cycle.stabilization + 16;
    let mut orbit = Vec::with_capacity(2 * len);
    let mut x = *m.alpha();
    let mut y = m.step(&1.0, Side::Left)?.point;
    for _ in 0..len {
        orbit.push(x);
        orbit.push(y);
        x = m.step(&x, Side::Right)?.point;
        y = m.step(&y, Side::Left)?.point;
    }
    let slack = 10.0 * cycle.tol + 1e-12;
    for &(a, b) in &cycle.components {
        for e in [a, b] {
            if e <= slack || e >= 1.0 - slack {
                continue;
            }
            let d = orbit.iter().map(|o| (o - e).abs()).fold(f64::INFINITY, f64::min);
            if d > slack {
                return Err(OrbitError::EndpointMismatch {
                    endpoint: e,
                    distance: d,
                });
            }
        }
    }
    Ok(())
}
