// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! One-dimensional search over a noisy, smoothed objective.

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchResult {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

struct Tracker<F> {
    f: F,
    best: Option<(f64, f64)>,
    evaluations: usize,
}

impl<F: FnMut(f64) -> Result<f64>> Tracker<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        let v = (self.f)(x)?;
        self.evaluations += 1;
        let better = match self.best {
            None => true,
            Some((bx, bv)) => v < bv || (v == bv && x < bx),
        };
        if better {
            self.best = Some((x, v));
        }
        Ok(v)
    }
}

/// Minimizes `f` by evaluating every point of the ascending `grid`, then
/// refining with golden-section search between the grid neighbours of the best
/// point until `budget` evaluations are spent. Ties go to the smaller `x`.
pub fn grid_then_golden<F>(grid: &[f64], budget: usize, f: F) -> Result<SearchResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(!grid.is_empty());
    let mut t = Tracker {
        f,
        best: None,
        evaluations: 0,
    };
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        values.push(t.eval(x)?);
    }
    let mut best_idx = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best_idx] {
            best_idx = i;
        }
    }
    let mut lo = grid[best_idx.saturating_sub(1)];
    let mut hi = grid[(best_idx + 1).min(grid.len() - 1)];
    if hi > lo && t.evaluations < budget {
        let mut a = hi - INV_PHI * (hi - lo);
        let mut b = lo + INV_PHI * (hi - lo);
        let mut fa = t.eval(a)?;
        let mut fb = if t.evaluations < budget {
            t.eval(b)?
        } else {
            f64::INFINITY
        };
        while t.evaluations < budget {
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - INV_PHI * (hi - lo);
                fa = t.eval(a)?;
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + INV_PHI * (hi - lo);
                fb = t.eval(b)?;
            }
        }
    }
    let (x, value) = t.best.expect("grid is non-empty");
    Ok(SearchResult {
        x,
        value,
        evaluations: t.evaluations,
    })
}

/// `count` points spaced evenly in log10 between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}
