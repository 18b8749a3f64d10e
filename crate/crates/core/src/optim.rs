//! Deterministic derivative-free maximization over box-constrained real
//! parameters, and exhaustive enumeration of rational-grid probability
//! simplices. Shared by the AWGN and discrete strategy evaluators.
//!
//! Grid-plus-refinement is used instead of gradient methods: the rate
//! objectives have min{·} and [·]⁺ kinks, and reruns must be bit-identical.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use rayon::prelude::*;
use std::sync::Arc;

/// One search axis with inclusive bounds.
#[derive(Debug, Clone)]
pub struct BoxAxis<T> {
    pub name: String,
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> BoxAxis<T> {
    pub fn new(name: impl Into<String>, lo: T, hi: T) -> Self {
        Self { name: name.into(), lo, hi }
    }
}

type Predicate<T> = Arc<dyn Fn(&[T]) -> bool + Send + Sync>;

/// Box search domain with an optional coupled-constraint predicate.
#[derive(Clone)]
pub struct BoxSpec<T> {
    axes: Vec<BoxAxis<T>>,
    constraint: Option<Predicate<T>>,
}

impl<T: Scalar> BoxSpec<T> {
    pub fn new(axes: Vec<BoxAxis<T>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Validation("box needs at least one axis".into()));
        }
        for ax in &axes {
            if !(ax.lo <= ax.hi) || !ax.lo.is_finite() || !ax.hi.is_finite() {
                return Err(Error::Validation(format!(
                    "axis {}: invalid bounds [{}, {}]",
                    ax.name, ax.lo, ax.hi
                )));
            }
        }
        Ok(Self { axes, constraint: None })
    }

    /// Attaches a coupled constraint; corner/center probing must find at
    /// least one feasible point.
    pub fn with_constraint(
        mut self,
        pred: impl Fn(&[T]) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        let pred: Predicate<T> = Arc::new(pred);
        let n = self.axes.len();
        let half = T::from_f64_lossy(0.5);
        let mut any = false;
        for mask in 0..(1usize << n) {
            let pt: Vec<T> = self
                .axes
                .iter()
                .enumerate()
                .map(|(i, ax)| if mask >> i & 1 == 1 { ax.hi } else { ax.lo })
                .collect();
            if pred(&pt) {
                any = true;
                break;
            }
        }
        if !any {
            let center: Vec<T> = self.axes.iter().map(|ax| (ax.lo + ax.hi) * half).collect();
            any = pred(&center);
        }
        if !any {
            return Err(Error::Infeasible(
                "no feasible corner or center point in the constrained box".into(),
            ));
        }
        self.constraint = Some(pred);
        Ok(self)
    }

    pub fn axes(&self) -> &[BoxAxis<T>] {
        &self.axes
    }

    pub fn is_feasible(&self, point: &[T]) -> bool {
        match &self.constraint {
            Some(pred) => pred(point),
            None => true,
        }
    }
}

/// Outcome of a grid-refinement search.
#[derive(Debug, Clone)]
pub struct SearchReport<T> {
    pub best_point: Vec<T>,
    pub best_value: T,
    pub evaluations: usize,
    pub converged: bool,
    pub levels_completed: usize,
}

/// Resolution / refinement / budget knobs for [`grid_refine`].
#[derive(Debug, Clone)]
pub struct GridSearchSettings {
    /// Points per axis; a single entry is broadcast to every axis.
    pub resolutions: Vec<usize>,
    pub levels: usize,
    pub budget: usize,
}

impl GridSearchSettings {
    pub fn uniform(resolution: usize, levels: usize) -> Self {
        Self { resolutions: vec![resolution], levels, budget: 1_000_000 }
    }

    fn resolution_for(&self, axis: usize) -> usize {
        if self.resolutions.len() == 1 {
            self.resolutions[0]
        } else {
            self.resolutions[axis]
        }
    }
}

fn axis_values<T: Scalar>(lo: T, hi: T, res: usize) -> Vec<T> {
    if lo == hi || res <= 1 {
        return vec![lo];
    }
    let denom = T::from_usize(res - 1).unwrap();
    (0..res)
        .map(|j| {
            let f = T::from_usize(j).unwrap() / denom;
            // endpoint-exact interpolation
            if j == res - 1 {
                hi
            } else {
                lo + (hi - lo) * f
            }
        })
        .collect()
}

/// Level-0 scans the full grid; each later level re-grids a box spanning
/// one coarse grid cell on each side of the incumbent (clipped to the
/// original bounds), so an optimum in a neighboring cell stays reachable.
/// Ties break toward the lexicographically smallest grid index. Infeasible
/// points (constraint false or objective `None`) are skipped.
pub fn grid_refine<T, F>(
    objective: F,
    spec: &BoxSpec<T>,
    settings: &GridSearchSettings,
) -> Result<SearchReport<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> Option<T> + Sync,
{
    if settings.levels == 0 {
        return Err(Error::Validation("levels must be >= 1".into()));
    }
    if settings.resolutions.len() != 1 && settings.resolutions.len() != spec.axes.len() {
        return Err(Error::Validation(
            "resolutions must be scalar or one per axis".into(),
        ));
    }
    for (i, _) in spec.axes.iter().enumerate() {
        if settings.resolution_for(i) < 2 {
            return Err(Error::Validation("resolution must be >= 2".into()));
        }
    }

    let n = spec.axes.len();
    let mut lo: Vec<T> = spec.axes.iter().map(|a| a.lo).collect();
    let mut hi: Vec<T> = spec.axes.iter().map(|a| a.hi).collect();

    let mut best: Option<(T, Vec<T>)> = None;
    let mut evaluations = 0usize;
    let mut levels_completed = 0usize;
    let mut converged = true;

    for _level in 0..settings.levels {
        let values: Vec<Vec<T>> = (0..n)
            .map(|i| axis_values(lo[i], hi[i], settings.resolution_for(i)))
            .collect();
        let counts: Vec<usize> = values.iter().map(|v| v.len()).collect();
        let total: usize = counts.iter().product();

        if evaluations + total > settings.budget {
            if best.is_none() {
                return Err(Error::Budget(format!(
                    "level grid of {total} points exceeds the {}-evaluation budget",
                    settings.budget
                )));
            }
            converged = false;
            break;
        }

        let evals: Vec<Option<T>> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut rem = flat;
                let mut pt = vec![T::zero(); n];
                for i in (0..n).rev() {
                    pt[i] = values[i][rem % counts[i]];
                    rem /= counts[i];
                }
                if !spec.is_feasible(&pt) {
                    return None;
                }
                objective(&pt).filter(|v| v.is_finite())
            })
            .collect();
        evaluations += total;

        // index-ordered reduction: strict improvement keeps the smallest index
        for (flat, val) in evals.iter().enumerate() {
            if let Some(v) = val {
                if best.as_ref().map_or(true, |(bv, _)| *v > *bv) {
                    let mut rem = flat;
                    let mut pt = vec![T::zero(); n];
                    for i in (0..n).rev() {
                        pt[i] = values[i][rem % counts[i]];
                        rem /= counts[i];
                    }
                    best = Some((*v, pt));
                }
            }
        }
        levels_completed += 1;

        let incumbent = match &best {
            Some((_, pt)) => pt.clone(),
            None => {
                return Err(Error::Infeasible(
                    "no feasible grid point at the coarsest level".into(),
                ))
            }
        };
        for i in 0..n {
            let width = hi[i] - lo[i];
            if width == T::zero() {
                continue;
            }
            let spacing = width / T::from_usize(settings.resolution_for(i) - 1).unwrap();
            lo[i] = (incumbent[i] - spacing).max(spec.axes[i].lo);
            hi[i] = (incumbent[i] + spacing).min(spec.axes[i].hi);
        }
    }

    let (best_value, best_point) = best.unwrap();
    Ok(SearchReport { best_point, best_value, evaluations, converged, levels_completed })
}

/// Number of compositions of `k` into `dim` nonnegative parts.
pub fn simplex_grid_len(dim: usize, k: usize) -> Result<usize> {
    // C(k + dim - 1, dim - 1) with overflow checking
    let mut num: u128 = 1;
    for i in 0..(dim - 1) {
        num = num
            .checked_mul((k + i + 1) as u128)
            .ok_or_else(|| Error::Budget("simplex grid size overflows".into()))?;
        num /= (i + 1) as u128;
    }
    usize::try_from(num).map_err(|_| Error::Budget("simplex grid size overflows usize".into()))
}

/// Iterator over all compositions of `k` into `dim` nonnegative integer
/// parts, lexicographically ascending.
pub struct Compositions {
    current: Option<Vec<usize>>,
    dim: usize,
}

impl Compositions {
    fn new(dim: usize, k: usize) -> Self {
        let mut first = vec![0usize; dim];
        first[dim - 1] = k;
        Self { current: Some(first), dim }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        // advance: bump the rightmost position (below the last) that has
        // mass anywhere to its right, dump the remainder into the last cell
        let mut advanced = false;
        for j in (0..self.dim.saturating_sub(1)).rev() {
            let right: usize = c[j + 1..].iter().sum();
            if right > 0 {
                c[j] += 1;
                for cell in &mut c[j + 1..] {
                    *cell = 0;
                }
                c[self.dim - 1] = right - 1;
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// All pmfs with entries that are multiples of 1/k over `dim` symbols, in
/// lexicographic order. Errors before iteration when the count exceeds
/// `budget`.
pub fn simplex_grid<T: Scalar>(
    dim: usize,
    k: usize,
    budget: usize,
) -> Result<impl Iterator<Item = Vec<T>>> {
    if dim == 0 || k == 0 {
        return Err(Error::Validation("simplex grid needs dim >= 1 and k >= 1".into()));
    }
    let count = simplex_grid_len(dim, k)?;
    if count > budget {
        return Err(Error::Budget(format!(
            "simplex grid over {dim} symbols at denominator {k} has {count} points, budget {budget}"
        )));
    }
    let kk = T::from_usize(k).unwrap();
    Ok(Compositions::new(dim, k).map(move |counts| {
        counts
            .iter()
            .map(|&c| T::from_usize(c).unwrap() / kk)
            .collect()
    }))
}
