//! Strictly increasing point sequences over finite integer index windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive integer index window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWindow {
    pub lo: i64,
    pub hi: i64,
}

impl IndexWindow {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "index window [{lo}, {hi}] is empty");
        IndexWindow { lo, hi }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: i64) -> bool {
        j >= self.lo && j <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
enum SeqRule {
    Uniform { offset: f64, step: f64 },
    Explicit { first_index: i64, points: Vec<f64> },
}

/// A strictly increasing real sequence `x_j` realized over a finite index
/// window, either a uniform grid `offset + step·j` or an explicit table.
/// Carries its separation `q = inf gaps` and mesh `Q = sup gaps`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSequence {
    rule: SeqRule,
    window: IndexWindow,
}

impl PointSequence {
    /// Uniform grid `x_j = offset + step·j` over `window`.
    pub fn uniform(offset: f64, step: f64, window: IndexWindow) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::NonIncreasingSequence { index: window.lo });
        }
        if !offset.is_finite() {
            return Err(Error::NonFiniteParam(offset));
        }
        Ok(PointSequence {
            rule: SeqRule::Uniform { offset, step },
            window,
        })
    }

    /// Explicit table; `points[i]` is `x_{first_index + i}`. Must be
    /// strictly increasing and finite.
    pub fn from_points(first_index: i64, points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyWindow("explicit sequence needs points".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !w[0].is_finite() {
                return Err(Error::NonFiniteParam(w[0]));
            }
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::NonIncreasingSequence {
                    index: first_index + i as i64 + 1,
                });
            }
        }
        if !points.last().unwrap().is_finite() {
            return Err(Error::NonFiniteParam(*points.last().unwrap()));
        }
        let window = IndexWindow::new(first_index, first_index + points.len() as i64 - 1);
        Ok(PointSequence {
            rule: SeqRule::Explicit {
                first_index,
                points,
            },
            window,
        })
    }

    pub fn window(&self) -> IndexWindow {
        self.window
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.rule, SeqRule::Uniform { .. })
    }

    /// Position `x_j`; `j` must lie in the window.
    pub fn position(&self, j: i64) -> f64 {
        self.try_position(j)
            .unwrap_or_else(|| panic!("index {j} outside window [{}, {}]", self.window.lo, self.window.hi))
    }

    pub fn try_position(&self, j: i64) -> Option<f64> {
        if !self.window.contains(j) {
            return None;
        }
        Some(match &self.rule {
            SeqRule::Uniform { offset, step } => offset + step * j as f64,
            SeqRule::Explicit {
                first_index,
                points,
            } => points[(j - first_index) as usize],
        })
    }

    pub fn first_position(&self) -> f64 {
        self.position(self.window.lo)
    }

    pub fn last_position(&self) -> f64 {
        self.position(self.window.hi)
    }

    /// `(q, Q)`: infimum and supremum of consecutive gaps over the window.
    /// A one-point window reports `(inf, 0)`-free defaults of the uniform
    /// step where available.
    pub fn separation_mesh(&self) -> (f64, f64) {
        match &self.rule {
            SeqRule::Uniform { step, .. } => (*step, *step),
            SeqRule::Explicit { points, .. } => {
                let mut q = f64::INFINITY;
                let mut mesh = 0.0f64;
                for w in points.windows(2) {
                    let gap = w[1] - w[0];
                    q = q.min(gap);
                    mesh = mesh.max(gap);
                }
                if points.len() == 1 {
                    (f64::INFINITY, 0.0)
                } else {
                    (q, mesh)
                }
            }
        }
    }

    /// Smallest window index `j` with `x_j > t` (or `x_j >= t` when
    /// `inclusive`). `None` when every window point is below.
    pub fn min_above(&self, t: f64, inclusive: bool) -> Option<i64> {
        let ok = |x: f64| if inclusive { x >= t } else { x > t };
        match &self.rule {
            SeqRule::Uniform { offset, step } => {
                let mut j = ((t - offset) / step).floor() as i64;
                // Float fixups around exact hits.
                while j >= self.window.lo && ok(offset + step * (j - 1) as f64) {
                    j -= 1;
                }
                while !ok(offset + step * j as f64) {
                    j += 1;
                }
                let j = j.max(self.window.lo);
                if j > self.window.hi {
                    None
                } else {
                    Some(j)
                }
            }
            SeqRule::Explicit {
                first_index,
                points,
            } => {
                let idx = points.partition_point(|&x| !ok(x));
                if idx == points.len() {
                    None
                } else {
                    Some(first_index + idx as i64)
                }
            }
        }
    }

    /// Largest window index `j` with `x_j < t` (or `x_j <= t` when
    /// `inclusive`).
    pub fn max_below(&self, t: f64, inclusive: bool) -> Option<i64> {
        let ok = |x: f64| if inclusive { x <= t } else { x < t };
        match &self.rule {
            SeqRule::Uniform { offset, step } => {
                let mut j = ((t - offset) / step).ceil() as i64;
                while j <= self.window.hi && ok(offset + step * (j + 1) as f64) {
                    j += 1;
                }
                while !ok(offset + step * j as f64) {
                    j -= 1;
                }
                let j = j.min(self.window.hi);
                if j < self.window.lo {
                    None
                } else {
                    Some(j)
                }
            }
            SeqRule::Explicit {
                first_index,
                points,
            } => {
                let idx = points.partition_point(|&x| ok(x));
                if idx == 0 {
                    None
                } else {
                    Some(first_index + idx as i64 - 1)
                }
            }
        }
    }

    /// Window indices whose positions lie strictly inside `(a, b)`.
    pub fn indices_in_open(&self, a: f64, b: f64) -> Vec<i64> {
        let Some(lo) = self.min_above(a, false) else {
            return Vec::new();
        };
        let Some(hi) = self.max_below(b, false) else {
            return Vec::new();
        };
        if lo > hi {
            Vec::new()
        } else {
            (lo..=hi).collect()
        }
    }

    pub fn count_in_open(&self, a: f64, b: f64) -> usize {
        match (self.min_above(a, false), self.max_below(b, false)) {
            (Some(lo), Some(hi)) if hi >= lo => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    /// The reflected sequence `x'_j = −x_{−j}` (strictly increasing again),
    /// over the negated window.
    pub fn reflect(&self) -> PointSequence {
        match &self.rule {
            SeqRule::Uniform { offset, step } => PointSequence {
                rule: SeqRule::Uniform {
                    offset: -offset,
                    step: *step,
                },
                window: IndexWindow::new(-self.window.hi, -self.window.lo),
            },
            SeqRule::Explicit {
                first_index,
                points,
            } => {
                let mut rev: Vec<f64> = points.iter().rev().map(|x| -x).collect();
                let first = -(first_index + points.len() as i64 - 1);
                // Reflection of a strictly increasing table stays valid.
                PointSequence::from_points(first, std::mem::take(&mut rev)).unwrap()
            }
        }
    }

    /// Positions over the whole window, ascending.
    pub fn positions(&self) -> Vec<f64> {
        self.window.iter().map(|j| self.position(j)).collect()
    }
}
