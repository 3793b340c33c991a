//! Executable constructions: fat Cantor set, bump series, divergence
//! witness partitions, the `χ_[0,t]` curve in `L_p` (`p < 1`), `ℓ₁` block
//! separation, and a weak-null probe.
//!
//! All interval endpoints are exact rationals. [`CantorLevels`] stores the
//! construction as closed-form level data and answers interval queries in
//! `O(level)` time, so deep levels cost nothing to build; per-level interval
//! lists are enumerated on demand.

use crate::error::{Error, Result};
use crate::integration::{DivergenceCert, HintRole, SamplingHint, VectorFn};
use crate::partitions::TaggedPartition;
use crate::rat::{self, Rat};
use crate::spaces::{pair, SeqVec, SpaceSpec, StepFn, Vector};
use num::{One, Signed, Zero};
use std::io::{self, Write};

/// One removed interval `A_k^(i)` with its midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovedInterval {
    pub left: Rat,
    pub right: Rat,
    pub mid: Rat,
}

/// Where a point sits relative to a depth-`K` construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    /// Inside (or on the boundary of) the removed interval of some level ≤ K.
    Removed {
        level: usize,
        index: usize,
        interval: RemovedInterval,
    },
    /// Inside the kept-after-level-K interval with the given index.
    Kept {
        level: usize,
        index: usize,
        left: Rat,
        right: Rat,
    },
}

/// Fat Cantor construction on `[0,1]`: at level `k` the centered interval of
/// length `1/(2^{k−1}·3^k)` is removed from each of the `2^{k−1}` intervals
/// kept after level `k−1`. Total removed measure converges to 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorLevels {
    depth: usize,
    /// `removed_len[k]` for k = 1..=depth (index 0 unused).
    removed_len: Vec<Rat>,
    /// `kept_len[k]` for k = 0..=depth.
    kept_len: Vec<Rat>,
    /// Right-child offset `kept_len[k] + removed_len[k]` per level.
    offsets: Vec<Rat>,
    /// `Σ_{j≤k} 3^{-j}` for k = 0..=depth.
    removed_measure: Vec<Rat>,
}

/// Build the construction data down to level `K ≥ 1`.
pub fn fat_cantor(depth: usize) -> Result<CantorLevels> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be ≥ 1".into()));
    }
    let mut removed_len = vec![Rat::zero()];
    let mut kept_len = vec![Rat::one()];
    let mut offsets = vec![Rat::zero()];
    let mut removed_measure = vec![Rat::zero()];
    for k in 1..=depth {
        // d(A_k) = 1/(2^{k−1}·3^k); each level removes 2^{k−1} of them, so the
        // level contributes exactly 3^{-k} of measure.
        let rl = rat::inv_pow(2, (k - 1) as u32) * rat::inv_pow(3, k as u32);
        let kl = (&kept_len[k - 1] - &rl) / rat::rat_int(2);
        offsets.push(&kl + &rl);
        removed_measure.push(&removed_measure[k - 1] + rat::inv_pow(3, k as u32));
        removed_len.push(rl);
        kept_len.push(kl);
    }
    Ok(CantorLevels {
        depth,
        removed_len,
        kept_len,
        offsets,
        removed_measure,
    })
}

impl CantorLevels {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `d(A_k^{(i)})`, the removed length at level `k ∈ 1..=depth`.
    pub fn removed_len(&self, k: usize) -> &Rat {
        &self.removed_len[k]
    }

    /// Length of each interval kept after level `k ∈ 0..=depth`.
    pub fn kept_len(&self, k: usize) -> &Rat {
        &self.kept_len[k]
    }

    pub fn removed_count(&self, k: usize) -> usize {
        1usize << (k - 1)
    }

    pub fn kept_count(&self, k: usize) -> usize {
        1usize << k
    }

    /// `Σ_{j≤k} 3^{-j}` — total measure removed through level `k ∈ 0..=depth`.
    pub fn removed_measure_through(&self, k: usize) -> Rat {
        self.removed_measure[k].clone()
    }

    /// The `i`-th (0-based, left to right) interval kept after level `k`.
    pub fn kept_interval(&self, k: usize, i: usize) -> (Rat, Rat) {
        assert!(k <= self.depth && i < self.kept_count(k));
        let mut left = Rat::zero();
        for j in 1..=k {
            if (i >> (k - j)) & 1 == 1 {
                left += &self.offsets[j];
            }
        }
        let right = &left + &self.kept_len[k];
        (left, right)
    }

    /// The `i`-th removed interval of level `k`, centered in the `i`-th
    /// interval kept after level `k−1`.
    pub fn removed_interval(&self, k: usize, i: usize) -> RemovedInterval {
        assert!(k >= 1 && k <= self.depth && i < self.removed_count(k));
        let (parent_left, _) = self.kept_interval(k - 1, i);
        let left = &parent_left + &self.kept_len[k];
        let right = &left + &self.removed_len[k];
        let mid = rat::midpoint(&left, &right);
        RemovedInterval { left, right, mid }
    }

    /// All removed intervals of one level, left to right.
    pub fn removed_intervals(&self, k: usize) -> impl Iterator<Item = RemovedInterval> + '_ {
        (0..self.removed_count(k)).map(move |i| self.removed_interval(k, i))
    }

    /// All intervals kept after one level, left to right.
    pub fn kept_intervals(&self, k: usize) -> impl Iterator<Item = (Rat, Rat)> + '_ {
        (0..self.kept_count(k)).map(move |i| self.kept_interval(k, i))
    }

    /// Classify `t ∈ [0,1]` by descending the construction tree.
    pub fn locate(&self, t: &Rat) -> Result<Location> {
        if *t < Rat::zero() || *t > Rat::one() {
            return Err(Error::InvalidInput(format!("point {t} outside [0, 1]")));
        }
        let mut left = Rat::zero();
        let mut index = 0usize;
        for k in 1..=self.depth {
            let a_left = &left + &self.kept_len[k];
            let a_right = &a_left + &self.removed_len[k];
            if *t >= a_left && *t <= a_right {
                let mid = rat::midpoint(&a_left, &a_right);
                return Ok(Location::Removed {
                    level: k,
                    index,
                    interval: RemovedInterval {
                        left: a_left,
                        right: a_right,
                        mid,
                    },
                });
            }
            if *t > a_right {
                left += &self.offsets[k];
                index = index * 2 + 1;
            } else {
                index *= 2;
            }
        }
        let right = &left + &self.kept_len[self.depth];
        Ok(Location::Kept {
            level: self.depth,
            index,
            left,
            right,
        })
    }

    /// CSV rows `level,kind,left_num,left_den,right_num,right_den`: removed
    /// intervals per level, then the intervals kept after the final level.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "level,kind,left_num,left_den,right_num,right_den")?;
        for k in 1..=self.depth {
            for iv in self.removed_intervals(k) {
                writeln!(
                    w,
                    "{},removed,{},{},{},{}",
                    k,
                    iv.left.numer(),
                    iv.left.denom(),
                    iv.right.numer(),
                    iv.right.denom()
                )?;
            }
        }
        for (l, r) in self.kept_intervals(self.depth) {
            writeln!(
                w,
                "{},kept,{},{},{},{}",
                self.depth,
                l.numer(),
                l.denom(),
                r.numer(),
                r.denom()
            )?;
        }
        Ok(())
    }
}

/// Tent bump on `A_k^{(i)}`: 0 at both endpoints, 1 at the midpoint, linear
/// between, 0 outside.
pub fn bump(levels: &CantorLevels, k: usize, i: usize, t: &Rat) -> f64 {
    let iv = levels.removed_interval(k, i);
    bump_on(&iv, t)
}

fn bump_on(iv: &RemovedInterval, t: &Rat) -> f64 {
    if *t < iv.left || *t > iv.right {
        return 0.0;
    }
    let half = (&iv.right - &iv.left) / rat::rat_int(2);
    let v = Rat::one() - (t - &iv.mid).abs() / half;
    rat::to_f64(&v)
}

/// The bump-series function truncated at the construction depth, valued in
/// `ℓ₁`: `f(t) = φ_k^{(i)}(t)·e_k` when `t` lies in `A_k^{(i)}`, else 0.
/// The coefficient sequence `e_k` is the concrete weak*-null-but-not-
/// strong*-null witness: it pairs to zero against every fixed `c₀` vector
/// while keeping norm 1.
pub fn kadets_f(levels: &CantorLevels, t: &Rat) -> Result<SeqVec> {
    match levels.locate(t)? {
        Location::Removed {
            level, interval, ..
        } => SeqVec::from_pairs(SpaceSpec::l1(), &[(level, bump_on(&interval, t))]),
        Location::Kept { .. } => SeqVec::zero(SpaceSpec::l1()),
    }
}

/// Stage-`m` witness pair: both partitions share breakpoints and contain the
/// `2^{m−1}` kept-after-level-`(m−1)` intervals whole; the gaps between them
/// are filled with subintervals shorter than `2^{-(m-1)}` carrying identical
/// tags. On each kept interval the first partition is tagged at the midpoint
/// of its central removed interval (where `f = e_m`), the second at the left
/// endpoint (a construction point, where `f = 0`).
pub fn kadets_partitions(
    levels: &CantorLevels,
    m: usize,
) -> Result<(TaggedPartition, TaggedPartition)> {
    if m < 1 {
        return Err(Error::InvalidInput("stage must be ≥ 1".into()));
    }
    if m > levels.depth() {
        return Err(Error::InvalidInput(format!(
            "stage {m} exceeds construction depth {}",
            levels.depth()
        )));
    }
    let target = rat::inv_pow(2, (m - 1) as u32);
    let mut breakpoints = vec![Rat::zero()];
    let mut tags1 = Vec::new();
    let mut tags2 = Vec::new();
    let mut pos = Rat::zero();
    for i in 0..levels.kept_count(m - 1) {
        let (l, r) = levels.kept_interval(m - 1, i);
        if pos < l {
            push_filler(&pos, &l, &target, &mut breakpoints, &mut tags1, &mut tags2);
        }
        breakpoints.push(r.clone());
        tags1.push(levels.removed_interval(m, i).mid);
        tags2.push(l);
        pos = r;
    }
    debug_assert_eq!(pos, Rat::one());
    let p1 = TaggedPartition::new(breakpoints.clone(), tags1)?;
    let p2 = TaggedPartition::new(breakpoints, tags2)?;
    Ok((p1, p2))
}

fn push_filler(
    from: &Rat,
    to: &Rat,
    target: &Rat,
    breakpoints: &mut Vec<Rat>,
    tags1: &mut Vec<Rat>,
    tags2: &mut Vec<Rat>,
) {
    let len = to - from;
    let n = 1 + rat::to_f64(&(&len / target).floor()) as i64;
    for j in 1..=n {
        let right = from + &len * rat::rat(j, n);
        let left = breakpoints.last().unwrap().clone();
        let tag = rat::midpoint(&left, &right);
        breakpoints.push(right);
        tags1.push(tag.clone());
        tags2.push(tag);
    }
}

/// Riemann-sum gap of the stage-`m` witness pair: the exact closed form
/// `1 − Σ_{j≤m−1} 3^{-j}` (the total kept-after-level-`(m−1)` length) next
/// to the `ℓ₁` norm of the actual Riemann-sum difference.
pub fn kadets_gap(levels: &CantorLevels, m: usize) -> Result<(Rat, f64)> {
    let closed = Rat::one() - levels.removed_measure_through(m - 1);
    let f = kadets_vector_fn(levels, 0)?;
    let (p1, p2) = kadets_partitions(levels, m)?;
    let s1 = crate::integration::riemann_sum(&f, &p1)?;
    let s2 = crate::integration::riemann_sum(&f, &p2)?;
    Ok((closed, s1.sub(&s2)?.norm()))
}

/// The bump-series function as an integrand, carrying tag hints (bump peaks
/// and kept-interval endpoints down to `hint_depth`) and the partition-pair
/// divergence certificate with bound 1/2.
///
/// Peaks are tag hints, not breakpoint hints: cutting the grid at every peak
/// would isolate each bump in a subinterval of its own tiny length and cap
/// the reachable gap below 1/2, hiding exactly the behaviour the witness
/// tags expose.
pub fn kadets_vector_fn(levels: &CantorLevels, hint_depth: usize) -> Result<VectorFn> {
    let depth = hint_depth.min(levels.depth());
    let eval_levels = levels.clone();
    let mut f = VectorFn::new(SpaceSpec::l1(), Rat::zero(), Rat::one(), move |t: &Rat| {
        Ok(Vector::Seq(kadets_f(&eval_levels, t)?))
    })?;
    if depth > 0 {
        let mut hints = Vec::new();
        for k in 1..=depth {
            for iv in levels.removed_intervals(k) {
                hints.push(SamplingHint {
                    point: iv.mid,
                    role: HintRole::Tag,
                });
            }
        }
        for (l, r) in levels.kept_intervals(depth) {
            hints.push(SamplingHint {
                point: l,
                role: HintRole::Tag,
            });
            hints.push(SamplingHint {
                point: r,
                role: HintRole::Tag,
            });
        }
        f = f.with_hints(hints);
    }
    let cert_levels = levels.clone();
    let cert = DivergenceCert::new(0.5, move |mesh: &Rat| {
        let mut m = 1usize;
        while rat::inv_pow(2, (m - 1) as u32) > *mesh {
            m += 1;
            if m > cert_levels.depth() {
                return Err(Error::InvalidInput(format!(
                    "witness for mesh {mesh} needs construction depth > {}",
                    cert_levels.depth()
                )));
            }
        }
        kadets_partitions(&cert_levels, m)
    });
    Ok(f.with_certificate(cert))
}

/// `f(t) = χ_[0,t]` as a step function.
pub fn rolewicz_f(t: &Rat) -> Result<StepFn> {
    StepFn::chi(&Rat::zero(), t)
}

/// `χ_[0,t]` as an `L_p[0,1]`-valued integrand, `0 < p ≤ 1`.
pub fn rolewicz_vector_fn(p: f64) -> Result<VectorFn> {
    SpaceSpec::StepLp(p).validate()?;
    VectorFn::new(
        SpaceSpec::StepLp(p),
        Rat::zero(),
        Rat::one(),
        move |t: &Rat| {
            Ok(Vector::Step {
                f: rolewicz_f(t)?,
                p,
            })
        },
    )
}

/// `‖f(t+h) − f(t)‖` in `L_p`: the quasi-norm of an indicator over an
/// interval of length `|h|`, which is `|h|^{1/p}`. Computed through the
/// step-function arithmetic, not the closed form.
pub fn rolewicz_increment(t: &Rat, h: &Rat, p: f64) -> Result<f64> {
    let u = t + h;
    let a = rolewicz_f(&u)?;
    let b = rolewicz_f(t)?;
    Ok(a.add(&b.scale(-1.0)?).norm_lp(p))
}

/// `‖(f(t+h) − f(t))/h‖ = |h|^{1/p − 1}`, the difference-quotient norm.
pub fn rolewicz_quotient(t: &Rat, h: &Rat, p: f64) -> Result<f64> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "difference quotient needs h ≠ 0".into(),
        ));
    }
    let u = t + h;
    let a = rolewicz_f(&u)?;
    let b = rolewicz_f(t)?;
    let quotient = a.add(&b.scale(-1.0)?).scale(1.0 / rat::to_f64(&h.abs()))?;
    Ok(quotient.norm_lp(p))
}

/// Successive blocks `z^{(i)}` of `ℓ₁` with window cuts `0 = n₀ ≤ … ≤ n_p`
/// and the parameters their separation bound depends on.
#[derive(Debug, Clone)]
pub struct BlockSeq {
    pub blocks: Vec<SeqVec>,
    pub cuts: Vec<usize>,
    pub beta: f64,
    pub eps: f64,
}

/// Which block condition failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCondition {
    /// (a) `‖z^{(i)}‖ ≥ β/2`
    NormFloor,
    /// (b) `Σ_{j≥n_i} ‖z_j^{(i)}‖ < ε·2^{-i}`
    TrailingTail,
    /// (c) `Σ_{j≤n_{i−1}} ‖z_j^{(i)}‖ < ε·2^{-i}`
    LeadingTail,
}

impl std::fmt::Display for BlockCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BlockCondition::NormFloor => "(a)",
            BlockCondition::TrailingTail => "(b)",
            BlockCondition::LeadingTail => "(c)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlocksReport {
    pub ok: bool,
    /// 1-based block index and condition of the first failure.
    pub first_violation: Option<(usize, BlockCondition)>,
    /// `pβ/2 − 4ε`.
    pub lower_bound: f64,
    /// `‖Σ_i z^{(i)}‖₁`.
    pub actual: f64,
}

/// Synthesize `p` blocks meeting the window conditions: mass `β/2` at one
/// index strictly inside window `(n_{i−1}, n_i]`, plus `tail_mass/2` at the
/// window boundaries (outside for (c), at the trailing cut for (b)).
pub fn blocks_build(p: usize, beta: f64, eps: f64, tail_mass: f64) -> Result<BlockSeq> {
    if p == 0 || beta.is_nan() || beta <= 0.0 || eps.is_nan() || eps <= 0.0 || tail_mass < 0.0 {
        return Err(Error::InvalidInput(
            "need p ≥ 1, β > 0, ε > 0, tail_mass ≥ 0".into(),
        ));
    }
    if tail_mass >= eps * (2f64).powi(-(p as i32)) {
        return Err(Error::InvalidInput(format!(
            "tail mass {tail_mass} must stay below ε·2^{{-p}} = {}",
            eps * (2f64).powi(-(p as i32))
        )));
    }
    let cuts: Vec<usize> = (0..=p).map(|i| 3 * i).collect();
    let mut blocks = Vec::with_capacity(p);
    for i in 1..=p {
        let mut pairs = vec![(cuts[i - 1] + 2, beta / 2.0)];
        if tail_mass > 0.0 {
            if i >= 2 {
                pairs.push((cuts[i - 1], tail_mass / 2.0));
            }
            pairs.push((cuts[i], tail_mass / 2.0));
        }
        blocks.push(SeqVec::from_pairs(SpaceSpec::l1(), &pairs)?);
    }
    Ok(BlockSeq {
        blocks,
        cuts,
        beta,
        eps,
    })
}

fn magnitude_sum(v: &SeqVec, pred: impl Fn(usize) -> bool) -> f64 {
    v.entries()
        .iter()
        .filter(|(i, _)| pred(*i))
        .map(|(_, c)| c.magnitude())
        .sum()
}

/// Check conditions (a)(b)(c) for every block and the separation chain
/// `‖Σ z^{(i)}‖ ≥ pβ/2 − 4ε`, reporting the bound and the exact sum norm.
pub fn blocks_verify(bs: &BlockSeq) -> Result<BlocksReport> {
    let p = bs.blocks.len();
    if bs.cuts.len() != p + 1 || bs.cuts[0] != 0 || bs.cuts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput(
            "cuts must satisfy 0 = n₀ ≤ n₁ ≤ … ≤ n_p".into(),
        ));
    }
    let mut first_violation = None;
    for (idx, z) in bs.blocks.iter().enumerate() {
        let i = idx + 1;
        let budget = bs.eps * (2f64).powi(-(i as i32));
        let violated = if z.norm() < bs.beta / 2.0 {
            Some(BlockCondition::NormFloor)
        } else if magnitude_sum(z, |j| j >= bs.cuts[i]) >= budget {
            Some(BlockCondition::TrailingTail)
        } else if magnitude_sum(z, |j| j <= bs.cuts[i - 1]) >= budget {
            Some(BlockCondition::LeadingTail)
        } else {
            None
        };
        if let Some(cond) = violated {
            first_violation = Some((i, cond));
            break;
        }
    }
    let mut sum = SeqVec::zero(SpaceSpec::l1())?;
    for z in &bs.blocks {
        sum = sum.add(z)?;
    }
    let actual = sum.norm();
    let lower_bound = p as f64 * bs.beta / 2.0 - 4.0 * bs.eps;
    Ok(BlocksReport {
        ok: first_violation.is_none() && actual >= lower_bound,
        first_violation,
        lower_bound,
        actual,
    })
}

/// Decay of duality pairings against a battery of `ℓ₁` functionals, plus the
/// smallest sup-norm among the probed vectors. A sequence that pairs to zero
/// against every battery element while the norm floor stays at 1 is the
/// weak-null (respectively weak*-null) failure witness at desk scale.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakNullReport {
    pub pairing_decay: Vec<f64>,
    pub norm_floor: f64,
}

pub fn weak_null_probe(vectors: &[SeqVec], battery: &[SeqVec]) -> Result<WeakNullReport> {
    if vectors.is_empty() || battery.is_empty() {
        return Err(Error::InvalidInput("probe needs nonempty inputs".into()));
    }
    let mut pairing_decay = Vec::with_capacity(vectors.len());
    for x in vectors {
        let mut worst = 0.0f64;
        for y in battery {
            worst = worst.max(pair(y, x)?.abs());
        }
        pairing_decay.push(worst);
    }
    let norm_floor = vectors
        .iter()
        .map(|x| x.norm())
        .fold(f64::INFINITY, f64::min);
    Ok(WeakNullReport {
        pairing_decay,
        norm_floor,
    })
}

/// `y_k = 2^{-k}` for `k = 1..=depth`, in the requested space; the standard
/// decaying battery/predual vector for the probes.
pub fn dyadic_decay_vector(space: SpaceSpec, depth: usize) -> Result<SeqVec> {
    let pairs: Vec<(usize, f64)> = (1..=depth).map(|k| (k, (2f64).powi(-(k as i32)))).collect();
    SeqVec::from_pairs(space, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{is_gauge_fine, Gauge};
    use crate::rat::{rat, rat_int};
    use approx::assert_relative_eq;

    #[test]
    fn level_one_removes_the_middle_third_interval() {
        let levels = fat_cantor(1).unwrap();
        let iv = levels.removed_interval(1, 0);
        assert_eq!(iv.left, rat(1, 3));
        assert_eq!(iv.right, rat(2, 3));
        let kept: Vec<_> = levels.kept_intervals(1).collect();
        assert_eq!(kept, vec![(rat(0, 1), rat(1, 3)), (rat(2, 3), rat(1, 1))]);
    }

    #[test]
    fn level_two_intervals_match_hand_computation() {
        let levels = fat_cantor(2).unwrap();
        let removed: Vec<_> = levels.removed_intervals(2).collect();
        assert_eq!(removed[0].left, rat(5, 36));
        assert_eq!(removed[0].right, rat(7, 36));
        assert_eq!(removed[1].left, rat(29, 36));
        assert_eq!(removed[1].right, rat(31, 36));
        assert_eq!(*levels.removed_len(2), rat(1, 18));
        // 2^{-2}(1 − 1/3 − 1/9) = 5/36 per kept interval.
        assert_eq!(*levels.kept_len(2), rat(5, 36));
        assert_eq!(levels.kept_count(2), 4);
    }

    #[test]
    fn removed_measure_reaches_half() {
        let levels = fat_cantor(20).unwrap();
        let total = levels.removed_measure_through(20);
        let expected = (Rat::one() - rat::inv_pow(3, 20)) / rat_int(2);
        assert_eq!(total, expected);
        assert!((rat::to_f64(&total) - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn levels_tile_the_unit_interval_exactly() {
        let levels = fat_cantor(6).unwrap();
        let mut tiles: Vec<(Rat, Rat)> = Vec::new();
        for k in 1..=6 {
            tiles.extend(levels.removed_intervals(k).map(|iv| (iv.left, iv.right)));
        }
        tiles.extend(levels.kept_intervals(6));
        tiles.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(tiles.first().unwrap().0, Rat::zero());
        assert_eq!(tiles.last().unwrap().1, Rat::one());
        for w in tiles.windows(2) {
            assert_eq!(w[0].1, w[1].0, "gap or overlap between tiles");
        }
        let total: Rat = tiles.iter().map(|(l, r)| r - l).sum();
        assert_eq!(total, Rat::one());
    }

    #[test]
    fn removed_lengths_follow_the_level_formula() {
        let levels = fat_cantor(8).unwrap();
        for k in 1..=8usize {
            let expected = rat::inv_pow(2, (k - 1) as u32) * rat::inv_pow(3, k as u32);
            assert_eq!(*levels.removed_len(k), expected);
            for iv in levels.removed_intervals(k) {
                assert_eq!(&iv.right - &iv.left, expected.clone());
            }
        }
    }

    #[test]
    fn bump_examples() {
        let levels = fat_cantor(3).unwrap();
        assert_eq!(bump(&levels, 1, 0, &rat(1, 2)), 1.0);
        assert_eq!(bump(&levels, 1, 0, &rat(1, 3)), 0.0);
        // Halfway up the left slope of the tent on [1/3, 2/3].
        assert_eq!(bump(&levels, 1, 0, &rat(5, 12)), 0.5);
        assert_eq!(bump(&levels, 1, 0, &rat(1, 10)), 0.0);
    }

    #[test]
    fn bump_function_values() {
        let levels = fat_cantor(4).unwrap();
        let e1 = SeqVec::unit(SpaceSpec::l1(), 1).unwrap();
        assert_eq!(kadets_f(&levels, &rat(1, 2)).unwrap(), e1);
        assert!(kadets_f(&levels, &Rat::zero()).unwrap().is_zero());
        let e2 = SeqVec::unit(SpaceSpec::l1(), 2).unwrap();
        assert_eq!(kadets_f(&levels, &rat(1, 6)).unwrap(), e2);
    }

    #[test]
    fn witness_partition_stage_one() {
        let levels = fat_cantor(3).unwrap();
        let (p1, p2) = kadets_partitions(&levels, 1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1.tags(), &[rat(1, 2)]);
        assert_eq!(p2.tags(), &[rat(0, 1)]);
    }

    #[test]
    fn witness_partition_stage_two() {
        let levels = fat_cantor(3).unwrap();
        let (p1, p2) = kadets_partitions(&levels, 2).unwrap();
        assert_eq!(p1.breakpoints(), p2.breakpoints());
        // Kept intervals [0,1/3] and [2/3,1] appear whole; the filler covers
        // [1/3, 2/3] in one piece of length 1/3 < 1/2.
        let kept_tags1: Vec<&Rat> = p1
            .pieces()
            .filter(|(l, r, _)| {
                (*l, *r) == (&rat(0, 1), &rat(1, 3)) || (*l, *r) == (&rat(2, 3), &rat(1, 1))
            })
            .map(|(_, _, s)| s)
            .collect();
        assert_eq!(kept_tags1, vec![&rat(1, 6), &rat(5, 6)]);
        let kept_tags2: Vec<&Rat> = p2
            .pieces()
            .filter(|(l, r, _)| {
                (*l, *r) == (&rat(0, 1), &rat(1, 3)) || (*l, *r) == (&rat(2, 3), &rat(1, 1))
            })
            .map(|(_, _, s)| s)
            .collect();
        assert_eq!(kept_tags2, vec![&rat(0, 1), &rat(2, 3)]);
        assert_eq!(p1.mesh(), rat(1, 3));
        assert!(p1.mesh() < rat(1, 2));
    }

    #[test]
    fn witness_partitions_are_fine_at_their_stage() {
        let levels = fat_cantor(10).unwrap();
        for m in 1..=8usize {
            let (p1, p2) = kadets_partitions(&levels, m).unwrap();
            let margin = rat::inv_pow(2, (m - 1) as u32) + rat(1, 1_000_000);
            let gauge = Gauge::Constant(margin);
            assert!(is_gauge_fine(&p1, &gauge).unwrap());
            assert!(is_gauge_fine(&p2, &gauge).unwrap());
        }
    }

    #[test]
    fn witness_gap_closed_forms() {
        let levels = fat_cantor(8).unwrap();
        let (c1, n1) = kadets_gap(&levels, 1).unwrap();
        assert_eq!(c1, rat_int(1));
        assert_relative_eq!(n1, 1.0, max_relative = 1e-12);
        let (c2, _) = kadets_gap(&levels, 2).unwrap();
        assert_eq!(c2, rat(2, 3));
        let (c5, n5) = kadets_gap(&levels, 5).unwrap();
        assert_eq!(c5, rat(41, 81));
        assert!((n5 - rat::to_f64(&rat(41, 81))).abs() <= 1e-12);
        assert!(n5 > 0.5);
    }

    #[test]
    fn rolewicz_increments() {
        // p = 1/2, h = 0.01: increment h² = 1e-4, quotient h = 0.01.
        let t = rat(1, 5);
        assert_relative_eq!(
            rolewicz_increment(&t, &rat(1, 100), 0.5).unwrap(),
            1e-4,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rolewicz_quotient(&t, &rat(1, 100), 0.5).unwrap(),
            1e-2,
            max_relative = 1e-12
        );
        // p = 1/4, h = 0.1: increment h⁴ = 1e-4, quotient h³ = 1e-3.
        assert_relative_eq!(
            rolewicz_increment(&t, &rat(1, 10), 0.25).unwrap(),
            1e-4,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rolewicz_quotient(&t, &rat(1, 10), 0.25).unwrap(),
            1e-3,
            max_relative = 1e-12
        );
        assert_eq!(rolewicz_increment(&t, &Rat::zero(), 0.5).unwrap(), 0.0);
        assert!(rolewicz_quotient(&t, &Rat::zero(), 0.5).is_err());
        assert!(rolewicz_f(&rat(3, 2)).is_err());
    }

    #[test]
    fn blocks_disjoint_instance_is_exact() {
        let bs = blocks_build(3, 1.0, 0.01, 0.0).unwrap();
        let report = blocks_verify(&bs).unwrap();
        assert!(report.ok);
        assert_eq!(report.actual, 1.5);
        assert_relative_eq!(report.lower_bound, 1.46, max_relative = 1e-12);
    }

    #[test]
    fn blocks_with_tails_stay_above_the_bound() {
        let bs = blocks_build(3, 1.0, 0.01, 1e-4).unwrap();
        let report = blocks_verify(&bs).unwrap();
        assert!(report.ok, "violation: {:?}", report.first_violation);
        assert!(report.actual >= 1.46);
    }

    #[test]
    fn blocks_norm_floor_violation_detected() {
        let mut bs = blocks_build(3, 1.0, 0.01, 0.0).unwrap();
        bs.blocks[1] = SeqVec::from_pairs(SpaceSpec::l1(), &[(5, 0.25)]).unwrap();
        let report = blocks_verify(&bs).unwrap();
        assert!(!report.ok);
        assert_eq!(report.first_violation, Some((2, BlockCondition::NormFloor)));
    }

    #[test]
    fn blocks_build_rejects_oversized_tails() {
        assert!(blocks_build(8, 0.5, 0.001, 0.001).is_err());
    }

    #[test]
    fn weak_null_probe_on_unit_vectors() {
        let vectors: Vec<SeqVec> = (1..=50)
            .map(|n| SeqVec::unit(SpaceSpec::SeqSup, n).unwrap())
            .collect();
        let battery = vec![dyadic_decay_vector(SpaceSpec::l1(), 64).unwrap()];
        let report = weak_null_probe(&vectors, &battery).unwrap();
        for (n, d) in report.pairing_decay.iter().enumerate() {
            assert_eq!(*d, (2f64).powi(-(n as i32 + 1)));
        }
        assert_eq!(report.norm_floor, 1.0);
    }

    #[test]
    fn weak_null_probe_edge_cases() {
        let zeros = vec![SeqVec::zero(SpaceSpec::SeqSup).unwrap(); 3];
        let battery = vec![SeqVec::unit(SpaceSpec::l1(), 1).unwrap()];
        let report = weak_null_probe(&zeros, &battery).unwrap();
        assert!(report.pairing_decay.iter().all(|d| *d == 0.0));
        assert_eq!(report.norm_floor, 0.0);

        let vectors: Vec<SeqVec> = (1..=4)
            .map(|n| SeqVec::unit(SpaceSpec::SeqSup, n).unwrap())
            .collect();
        let report = weak_null_probe(&vectors, &battery).unwrap();
        assert_eq!(report.pairing_decay, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(report.norm_floor, 1.0);
        assert!(weak_null_probe(&[], &battery).is_err());
    }

    #[test]
    fn csv_rows_for_small_construction() {
        let levels = fat_cantor(2).unwrap();
        let mut out = Vec::new();
        levels.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "level,kind,left_num,left_den,right_num,right_den");
        assert!(lines.contains(&"1,removed,1,3,2,3"));
        assert!(lines.contains(&"2,removed,5,36,7,36"));
        // 1 + 2 removed rows, 4 kept rows.
        assert_eq!(lines.len(), 1 + 3 + 4);
    }
}
