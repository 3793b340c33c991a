//! Oscillation of a function on intervals and at points, and grid-based
//! upper estimates of the discontinuity-set measure.
//!
//! Sampled oscillation numbers are lower estimates of the true sup; cells
//! that cannot be certified nearly-constant contribute to an upper estimate
//! of the discontinuity measure. For the bump-series construction the module
//! bypasses sampling entirely and classifies intervals exactly by level,
//! which is the only regime the acceptance checks treat as exact.

use crate::error::{Error, Result};
use crate::exec;
use crate::gallery::CantorLevels;
use crate::integration::{HintRole, VectorFn};
use crate::rat::{self, Rat};
use crate::spaces::Vector;
use num::{One, Zero};

/// Point oscillation estimates next to the discontinuity-measure estimate
/// they support.
#[derive(Debug, Clone)]
pub struct OscProfile {
    pub points: Vec<(Rat, f64)>,
    pub beta: f64,
    pub measure_upper: f64,
}

impl OscProfile {
    pub fn new(points: Vec<(Rat, f64)>, beta: f64, measure_upper: f64, span: f64) -> Result<Self> {
        if points.iter().any(|(_, w)| *w < 0.0) {
            return Err(Error::InvalidInput(
                "oscillation estimates must be ≥ 0".into(),
            ));
        }
        if !(0.0..=span).contains(&measure_upper) {
            return Err(Error::InvalidInput(format!(
                "measure estimate {measure_upper} outside [0, {span}]"
            )));
        }
        Ok(OscProfile {
            points,
            beta,
            measure_upper,
        })
    }
}

fn eval_points(f: &VectorFn, points: &[Rat]) -> Result<Vec<Vector>> {
    exec::map_indexed(points, |t| f.eval(t))
        .into_iter()
        .collect()
}

fn max_pairwise(values: &[Vector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max(a.sub(b)?.norm());
        }
    }
    Ok(worst)
}

/// Max pairwise distance `‖f(x) − f(y)‖` over an equispaced grid plus every
/// hint in `[c,d]` — a lower estimate of `ω(f,[c,d])`.
pub fn osc_interval(f: &VectorFn, c: &Rat, d: &Rat, samples: usize) -> Result<f64> {
    if c >= d {
        return Err(Error::InvalidInput(format!("need c < d, got [{c}, {d}]")));
    }
    let (a, b) = f.domain();
    if c < a || d > b {
        return Err(Error::InvalidInput(
            "interval leaves the function domain".into(),
        ));
    }
    let n = samples.max(2);
    let width = d - c;
    let mut pts: Vec<Rat> = (0..n)
        .map(|i| c + &width * rat::rat(i as i64, (n - 1) as i64))
        .collect();
    pts.extend(f.hints_in(c, d, HintRole::Tag));
    pts.extend(f.hints_in(c, d, HintRole::Breakpoint));
    pts.sort();
    pts.dedup();
    max_pairwise(&eval_points(f, &pts)?)
}

/// Point-oscillation estimates down a shrink schedule.
#[derive(Debug, Clone)]
pub struct OscPointEstimate {
    /// `(radius, estimate)` in schedule order; nonincreasing by construction.
    pub by_radius: Vec<(Rat, f64)>,
    /// The estimate at the smallest radius.
    pub value: f64,
}

/// Shrink schedule radii `2^{-k}`, `k = 3..=20`.
pub fn default_shrink_schedule() -> Vec<Rat> {
    (3..=20).map(|k| rat::inv_pow(2, k)).collect()
}

/// Oscillation at a point: `osc_interval` over windows `[t−r, t+r]` down the
/// schedule, clipped to the domain.
///
/// All windows draw from one shared point set (each radius contributes its
/// own equispaced grid, plus every hint), so smaller windows see subsets of
/// larger ones and the estimates are monotone nonincreasing.
pub fn osc_point(
    f: &VectorFn,
    t: &Rat,
    shrink_schedule: &[Rat],
    samples_per_radius: usize,
) -> Result<OscPointEstimate> {
    if shrink_schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if shrink_schedule.windows(2).any(|w| w[0] <= w[1])
        || shrink_schedule.iter().any(|r| *r <= Rat::zero())
    {
        return Err(Error::InvalidInput(
            "shrink schedule must be positive and strictly decreasing".into(),
        ));
    }
    let (a, b) = f.domain();
    if t < a || t > b {
        return Err(Error::InvalidInput(format!("point {t} outside the domain")));
    }
    let clip = |x: Rat| -> Rat { x.max(a.clone()).min(b.clone()) };
    let n = samples_per_radius.max(2);
    let mut base: Vec<Rat> = vec![t.clone()];
    for r in shrink_schedule {
        let (lo, hi) = (clip(t - r), clip(t + r));
        let width = &hi - &lo;
        if width.is_zero() {
            continue;
        }
        base.extend((0..n).map(|i| &lo + &width * rat::rat(i as i64, (n - 1) as i64)));
    }
    let r0 = &shrink_schedule[0];
    let (lo0, hi0) = (clip(t - r0), clip(t + r0));
    base.extend(f.hints_in(&lo0, &hi0, HintRole::Tag));
    base.extend(f.hints_in(&lo0, &hi0, HintRole::Breakpoint));
    base.sort();
    base.dedup();
    let values = eval_points(f, &base)?;

    let mut by_radius = Vec::with_capacity(shrink_schedule.len());
    for r in shrink_schedule {
        let (lo, hi) = (clip(t - r), clip(t + r));
        let from = base.partition_point(|x| *x < lo);
        let to = base.partition_point(|x| *x <= hi);
        let osc = max_pairwise(&values[from..to])?;
        by_radius.push((r.clone(), osc));
    }
    let value = by_radius.last().unwrap().1;
    Ok(OscPointEstimate { by_radius, value })
}

/// How `discontinuity_measure_upper` classifies cells.
#[derive(Debug, Clone)]
pub enum MeasureParams {
    /// Uniform cells (aligned at breakpoint hints); a cell is certified
    /// continuous when the sampled oscillation stays within `β/2`.
    SampledGrid {
        cells: usize,
        samples_per_cell: usize,
    },
    /// Exact level classification of the bump-series construction: through
    /// level `K`, the set not yet certified continuous is the complement of
    /// the removed intervals, of measure `1 − Σ_{k≤K} 3^{-k}` exactly.
    CantorExact { levels: CantorLevels },
}

/// Upper estimate of `µ{t : ω(f,t) ≥ β}`.
#[derive(Debug, Clone)]
pub struct MeasureUpper {
    pub upper: f64,
    /// Present on the exact classification path.
    pub exact: Option<Rat>,
    pub exact_path: bool,
}

pub fn discontinuity_measure_upper(
    f: &VectorFn,
    beta: f64,
    params: &MeasureParams,
) -> Result<MeasureUpper> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "threshold must be > 0, got {beta}"
        )));
    }
    match params {
        MeasureParams::CantorExact { levels } => {
            // ω is 2 on the residual set and 0 inside every removed interval,
            // so any threshold up to 2 leaves exactly the residual set.
            let exact = if beta > 2.0 {
                Rat::zero()
            } else {
                Rat::one() - levels.removed_measure_through(levels.depth())
            };
            Ok(MeasureUpper {
                upper: rat::to_f64(&exact),
                exact: Some(exact),
                exact_path: true,
            })
        }
        MeasureParams::SampledGrid {
            cells,
            samples_per_cell,
        } => {
            let (a, b) = f.domain();
            let n = (*cells).max(1);
            let width = b - a;
            let mut cuts: Vec<Rat> = (0..=n)
                .map(|i| a + &width * rat::rat(i as i64, n as i64))
                .collect();
            cuts.extend(f.hints_in(a, b, HintRole::Breakpoint));
            cuts.sort();
            cuts.dedup();
            let cells: Vec<(Rat, Rat)> = cuts
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect();
            let samples = (*samples_per_cell).max(2);
            let verdicts = exec::map_indexed(&cells, |(l, r)| -> Result<bool> {
                let cell_width = r - l;
                let mut pts: Vec<Rat> = (0..samples)
                    .map(|i| l + &cell_width * rat::rat(i as i64, (samples - 1) as i64))
                    .collect();
                pts.extend(f.hints_in(l, r, HintRole::Tag));
                pts.sort();
                pts.dedup();
                let values: Vec<Vector> = pts.iter().map(|t| f.eval(t)).collect::<Result<_>>()?;
                Ok(max_pairwise(&values)? <= beta / 2.0)
            });
            let mut bad = Rat::zero();
            for ((l, r), certified) in cells.iter().zip(verdicts) {
                if !certified? {
                    bad += r - l;
                }
            }
            Ok(MeasureUpper {
                upper: rat::to_f64(&bad),
                exact: None,
                exact_path: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{fat_cantor, kadets_vector_fn};
    use crate::integration::SamplingHint;
    use crate::rat::{rat, rat_int};

    fn jump_fn() -> VectorFn {
        VectorFn::scalar_fn(
            Rat::zero(),
            Rat::one(),
            |t| if t >= 0.5 { 1.0 } else { 0.0 },
        )
        .unwrap()
        .with_hints(vec![SamplingHint {
            point: rat(1, 2),
            role: HintRole::Breakpoint,
        }])
    }

    #[test]
    fn jump_oscillation_on_straddling_interval() {
        let f = jump_fn();
        let osc = osc_interval(&f, &rat(2, 5), &rat(3, 5), 3).unwrap();
        assert_eq!(osc, 1.0);
    }

    #[test]
    fn constant_oscillation_is_zero() {
        let f = VectorFn::scalar_fn(Rat::zero(), Rat::one(), |_| 7.0).unwrap();
        assert_eq!(osc_interval(&f, &rat(1, 10), &rat(9, 10), 9).unwrap(), 0.0);
        assert!(osc_interval(&f, &rat(1, 2), &rat(1, 2), 3).is_err());
    }

    #[test]
    fn bump_function_oscillates_fully_on_removed_intervals() {
        let levels = fat_cantor(6).unwrap();
        let f = kadets_vector_fn(&levels, 6).unwrap();
        let iv = levels.removed_interval(2, 0);
        // Peak norm 1 at the hinted midpoint against 0 at the endpoints.
        assert_eq!(osc_interval(&f, &iv.left, &iv.right, 3).unwrap(), 1.0);
        let iv4 = levels.removed_interval(4, 3);
        assert_eq!(osc_interval(&f, &iv4.left, &iv4.right, 2).unwrap(), 1.0);
    }

    #[test]
    fn point_oscillation_of_jump() {
        let f = jump_fn();
        let radii: Vec<Rat> = (2..=6).map(|k| rat::inv_pow(2, k)).collect();
        let at_jump = osc_point(&f, &rat(1, 2), &radii, 8).unwrap();
        assert_eq!(at_jump.value, 1.0);
        // Away from the jump the estimate drops to 0 once the radius is
        // below the distance 0.2.
        let away = osc_point(&f, &rat(3, 10), &radii, 8).unwrap();
        assert_eq!(away.value, 0.0);
        for w in away.by_radius.windows(2) {
            assert!(w[0].1 >= w[1].1, "estimates must be nonincreasing");
        }
        let wide = away
            .by_radius
            .iter()
            .find(|(r, _)| *r >= rat(1, 4))
            .unwrap();
        assert_eq!(wide.1, 1.0);
    }

    #[test]
    fn point_oscillation_at_construction_endpoint() {
        // t = 1/3 is a construction point with f(1/3) = 0, and bumps of norm
        // 1 accumulate on the kept side, so the estimate is at least 1. The
        // pairwise sup is in fact 2: every window contains peaks of two
        // different levels, and ‖e_j − e_k‖₁ = 2.
        let levels = fat_cantor(12).unwrap();
        let f = kadets_vector_fn(&levels, 12).unwrap();
        let radii: Vec<Rat> = (3..=8).map(|k| rat::inv_pow(2, k)).collect();
        let est = osc_point(&f, &rat(1, 3), &radii, 8).unwrap();
        assert!(est.value >= 1.0);
        assert_eq!(est.value, 2.0);
    }

    #[test]
    fn measure_upper_of_jump_is_at_most_two_cells() {
        let f = jump_fn();
        let m = discontinuity_measure_upper(
            &f,
            0.5,
            &MeasureParams::SampledGrid {
                cells: 16,
                samples_per_cell: 5,
            },
        )
        .unwrap();
        assert!(m.upper <= 2.0 / 16.0 + 1e-15, "upper = {}", m.upper);
        assert!(!m.exact_path);
    }

    #[test]
    fn measure_upper_of_constant_is_zero() {
        let f = VectorFn::scalar_fn(Rat::zero(), Rat::one(), |_| 1.0).unwrap();
        let m = discontinuity_measure_upper(
            &f,
            0.5,
            &MeasureParams::SampledGrid {
                cells: 8,
                samples_per_cell: 4,
            },
        )
        .unwrap();
        assert_eq!(m.upper, 0.0);
    }

    #[test]
    fn exact_level_classification() {
        let levels = fat_cantor(10).unwrap();
        let f = kadets_vector_fn(&levels, 0).unwrap();
        let m = discontinuity_measure_upper(
            &f,
            1.0,
            &MeasureParams::CantorExact {
                levels: levels.clone(),
            },
        )
        .unwrap();
        let expected = Rat::one() - (Rat::one() - rat::inv_pow(3, 10)) / rat_int(2);
        assert_eq!(m.exact.unwrap(), expected);
        assert!(m.exact_path);
    }

    #[test]
    fn osc_profile_invariants() {
        assert!(OscProfile::new(vec![(rat(1, 2), -0.1)], 1.0, 0.0, 1.0).is_err());
        assert!(OscProfile::new(vec![(rat(1, 2), 0.5)], 1.0, 1.5, 1.0).is_err());
        assert!(OscProfile::new(vec![(rat(1, 2), 0.5)], 1.0, 0.75, 1.0).is_ok());
    }
}
