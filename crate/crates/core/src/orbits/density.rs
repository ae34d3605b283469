use serde::Serialize;

use super::{attractor, OrbitError};
use crate::maps::MapParams;

const ATTRACTOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub fraction: f64,
    pub total_cells: usize,
    pub visited_cells: usize,
    /// Left edge of cell 0.
    pub origin: f64,
    pub eps: f64,
    /// Indices of the cells meeting the attractor, in increasing order.
    pub cells: Vec<usize>,
    /// First orbit index landing in each of `cells`.
    pub first_visits: Vec<Option<usize>>,
}

impl DensityProfile {
    /// `q`-quantile of the first-visit times of visited cells.
    pub fn first_visit_quantile(&self, q: f64) -> Option<usize> {
        let mut v: Vec<usize> = self.first_visits.iter().flatten().copied().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_unstable();
        let i = ((v.len() - 1) as f64 * q.clamp(0.0, 1.0)).round() as usize;
        Some(v[i])
    }
}

/// Fraction of `eps`-cells of the attractor visited by `x_0, …, x_n`.
///
/// Cells are `[a + iε, a + (i+1)ε)` with `a` the leftmost attractor point.
/// For skew tents the attractor is the core `[T²(α), T(α)]`.
pub fn density_profile(m: &MapParams<f64>, x0: f64, n: usize, eps: f64) -> Result<DensityProfile, OrbitError> {
    if !(eps > 0.0) {
        return Err(OrbitError::InvalidArgument(format!(
            "cell width {eps} must be positive"
        )));
    }
    let components = match m {
        MapParams::SkewTent(t) => {
            let c1 = *t.beta();
            vec![(t.step(&c1)?.point, c1)]
        }
        MapParams::GenBeta(g) => attractor(g, ATTRACTOR_TOL)?.components,
    };
    let origin = components[0].0;
    let cell_of = |x: f64| ((x - origin) / eps).floor();
    let mut cells: Vec<usize> = Vec::new();
    for &(a, b) in &components {
        if b <= a {
            continue;
        }
        let first = cell_of(a).max(0.0) as usize;
        // half-open cells: one ending exactly at a does not meet (a, b)
        let last = ((b - origin) / eps).ceil() as usize;
        for i in first..last.max(first + 1) {
            if cells.last().map_or(true, |&l| l < i) {
                cells.push(i);
            }
        }
    }
    let mut first_visits = vec![None; cells.len()];
    let mut x = x0;
    for j in 0..=n {
        let c = cell_of(x);
        if c >= 0.0 {
            if let Ok(pos) = cells.binary_search(&(c as usize)) {
                first_visits[pos].get_or_insert(j);
            }
        }
        if j < n {
            x = m.step(&x, crate::maps::Side::Right)?.point;
        }
    }
    let visited = first_visits.iter().filter(|v| v.is_some()).count();
    Ok(DensityProfile {
        fraction: visited as f64 / cells.len() as f64,
        total_cells: cells.len(),
        visited_cells: visited,
        origin,
        eps,
        cells,
        first_visits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{GenBeta, SkewTent};

    #[test]
    fn fixed_point_visits_one_cell() {
        let m = MapParams::SkewTent(SkewTent::new(0.5, 1.0).unwrap());
        let d = density_profile(&m, 2.0 / 3.0, 20, 0.1).unwrap();
        assert_eq!(d.total_cells, 10);
        assert_eq!(d.visited_cells, 1);
        let d0 = density_profile(&m, 0.3, 0, 0.1).unwrap();
        assert_eq!(d0.visited_cells, 1);
    }

    #[test]
    fn generic_orbit_is_dense() {
        let m = MapParams::GenBeta(GenBeta::new(0.4, 1.839286755214161).unwrap());
        let d = density_profile(&m, 0.0, 100_000, 0.01).unwrap();
        assert!(d.fraction > 0.95, "{}", d.fraction);
        assert!(d.first_visit_quantile(0.5).is_some());
    }
}
