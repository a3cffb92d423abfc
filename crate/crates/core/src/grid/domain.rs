use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible node count per axis.
pub const MIN_NODES: usize = 5;

/// Axis-aligned box sampled on a uniform tensor grid.
///
/// Nodes are numbered x-fastest: `idx = i + n1 * (j + n2 * k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDomain {
    origin: [f64; 3],
    extent: [f64; 3],
    res: [usize; 3],
}

impl GridDomain {
    pub fn new(origin: [f64; 3], extent: [f64; 3], res: [usize; 3]) -> Result<Self> {
        for k in 0..3 {
            if !origin[k].is_finite() || !extent[k].is_finite() || extent[k] <= 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: origin {} extent {} (extent must be finite and positive)",
                    origin[k], extent[k]
                )));
            }
            if res[k] < MIN_NODES {
                return Err(Error::InvalidGrid(format!(
                    "axis {k}: {} nodes, at least {MIN_NODES} required",
                    res[k]
                )));
            }
        }
        Ok(GridDomain { origin, extent, res })
    }

    /// `[lo, hi]` box with `n` nodes per axis.
    pub fn cube(lo: f64, hi: f64, n: usize) -> Result<Self> {
        GridDomain::new([lo; 3], [hi - lo; 3], [n; 3])
    }

    /// Box `[lo[k], hi[k]]` per axis with `n` nodes per axis.
    pub fn from_bounds(lo: [f64; 3], hi: [f64; 3], n: usize) -> Result<Self> {
        GridDomain::new(lo, [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]], [n; 3])
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn extent(&self) -> [f64; 3] {
        self.extent
    }

    pub fn res(&self) -> [usize; 3] {
        self.res
    }

    pub fn spacing(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.extent[k] / (self.res[k] - 1) as f64)
    }

    /// Largest grid spacing, the `h` of refinement studies.
    pub fn h(&self) -> f64 {
        self.spacing().into_iter().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.res.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> [usize; 3] {
        [1, self.res[0], self.res[0] * self.res[1]]
    }

    pub fn index(&self, ijk: [usize; 3]) -> usize {
        ijk[0] + self.res[0] * (ijk[1] + self.res[1] * ijk[2])
    }

    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.res[0];
        let rest = idx / self.res[0];
        [i, rest % self.res[1], rest / self.res[1]]
    }

    pub fn coords(&self, ijk: [usize; 3]) -> [f64; 3] {
        let h = self.spacing();
        [0, 1, 2].map(|k| self.origin[k] + ijk[k] as f64 * h[k])
    }

    pub fn node_coords(&self, idx: usize) -> [f64; 3] {
        self.coords(self.ijk(idx))
    }

    pub fn upper(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.origin[k] + self.extent[k])
    }

    /// True when every index lies at least `layer` nodes away from the boundary.
    pub fn is_interior(&self, ijk: [usize; 3], layer: usize) -> bool {
        (0..3).all(|k| ijk[k] >= layer && ijk[k] + layer < self.res[k])
    }

    /// Grid node at `p`, if `p` coincides with one (to a small fraction of the spacing).
    pub fn node_at(&self, p: [f64; 3]) -> Result<[usize; 3]> {
        let h = self.spacing();
        let mut ijk = [0usize; 3];
        for k in 0..3 {
            let t = (p[k] - self.origin[k]) / h[k];
            let r = t.round();
            if (t - r).abs() > 1e-6 || r < 0.0 || r as usize >= self.res[k] {
                return Err(Error::InvalidGrid(format!(
                    "point {p:?} is not a node of the grid (axis {k})"
                )));
            }
            ijk[k] = r as usize;
        }
        Ok(ijk)
    }

    /// Same grid shifted by `shift`.
    pub fn translated(&self, shift: [f64; 3]) -> Self {
        GridDomain {
            origin: [0, 1, 2].map(|k| self.origin[k] + shift[k]),
            ..*self
        }
    }

    /// Same box with a different node count per axis.
    pub fn with_res(&self, n: usize) -> Result<Self> {
        GridDomain::new(self.origin, self.extent, [n; 3])
    }

    /// Node closest to the box centre.
    pub fn center_node(&self) -> [usize; 3] {
        self.res.map(|n| n / 2)
    }

    pub fn same_grid(&self, other: &GridDomain) -> bool {
        self.res == other.res
            && (0..3).all(|k| {
                let tol = 1e-12 * (1.0 + self.extent[k].abs());
                (self.origin[k] - other.origin[k]).abs() <= tol
                    && (self.extent[k] - other.extent[k]).abs() <= tol
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let d = GridDomain::new([0.0; 3], [1.0, 2.0, 3.0], [5, 6, 7]).unwrap();
        for idx in 0..d.len() {
            assert_eq!(d.index(d.ijk(idx)), idx);
        }
        assert_eq!(d.spacing(), [0.25, 0.4, 0.5]);
    }

    #[test]
    fn rejects_small_or_degenerate() {
        assert!(GridDomain::new([0.0; 3], [1.0; 3], [4, 5, 5]).is_err());
        assert!(GridDomain::new([0.0; 3], [1.0, 0.0, 1.0], [5; 3]).is_err());
        assert!(GridDomain::new([f64::NAN, 0.0, 0.0], [1.0; 3], [5; 3]).is_err());
    }

    #[test]
    fn node_lookup() {
        let d = GridDomain::cube(1.0, 2.0, 5).unwrap();
        assert_eq!(d.node_at([1.25, 1.5, 2.0]).unwrap(), [1, 2, 4]);
        assert!(d.node_at([1.1, 1.0, 1.0]).is_err());
        assert!(d.node_at([3.0, 1.0, 1.0]).is_err());
    }
}
