//! Tagged partitions of `[a,b]`, mesh computation, and fine-partition search.
//!
//! A tagged partition is a finite subdivision `a = t₀ < … < t_j = b` with one
//! tag `s_i ∈ [t_{i−1}, t_i]` per subinterval. Fineness is measured either by
//! a constant `δ` (mesh condition) or by a positive gauge function
//! `t_i − t_{i−1} ≤ δ(s_i)`. [`cousin_fine`] constructs a gauge-fine
//! partition by recursive bisection; gauges are restricted to three
//! representable forms so the fineness test and the tag search stay
//! decidable.

use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use num::{Signed, Zero};

/// Ordered breakpoints plus one tag per subinterval.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedPartition {
    breakpoints: Vec<Rat>,
    tags: Vec<Rat>,
}

impl TaggedPartition {
    pub fn new(breakpoints: Vec<Rat>, tags: Vec<Rat>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidInput(
                "partition needs at least one subinterval".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if tags.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidInput(
                "tag count must equal subinterval count".into(),
            ));
        }
        for (i, tag) in tags.iter().enumerate() {
            if *tag < breakpoints[i] || *tag > breakpoints[i + 1] {
                return Err(Error::InvalidInput(format!(
                    "tag {tag} lies outside subinterval [{}, {}]",
                    breakpoints[i],
                    breakpoints[i + 1]
                )));
            }
        }
        Ok(TaggedPartition { breakpoints, tags })
    }

    pub fn a(&self) -> &Rat {
        self.breakpoints.first().unwrap()
    }

    pub fn b(&self) -> &Rat {
        self.breakpoints.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn tags(&self) -> &[Rat] {
        &self.tags
    }

    /// Subintervals with their tags, in order: `(left, right, tag)`.
    pub fn pieces(&self) -> impl Iterator<Item = (&Rat, &Rat, &Rat)> {
        self.breakpoints
            .windows(2)
            .zip(&self.tags)
            .map(|(w, s)| (&w[0], &w[1], s))
    }

    /// `‖P‖`: the largest subinterval length, exact.
    pub fn mesh(&self) -> Rat {
        self.breakpoints
            .windows(2)
            .map(|w| &w[1] - &w[0])
            .max()
            .unwrap()
    }

    /// Replace every tag by the given rule, keeping the breakpoints.
    pub fn retagged(&self, rule: TagRule) -> TaggedPartition {
        let tags = self
            .breakpoints
            .windows(2)
            .map(|w| match rule {
                TagRule::Left => w[0].clone(),
                TagRule::Right => w[1].clone(),
                TagRule::Mid => rat::midpoint(&w[0], &w[1]),
            })
            .collect();
        TaggedPartition {
            breakpoints: self.breakpoints.clone(),
            tags,
        }
    }
}

/// Where `uniform_partition` places each tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagRule {
    Left,
    Right,
    Mid,
}

/// `n` equal subintervals of `[a,b]` with tags by rule; mesh `(b−a)/n`.
pub fn uniform_partition(a: &Rat, b: &Rat, n: usize, rule: TagRule) -> Result<TaggedPartition> {
    if a >= b {
        return Err(Error::InvalidInput(format!("need a < b, got [{a}, {b}]")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("need n ≥ 1 subintervals".into()));
    }
    let width = b - a;
    let breakpoints: Vec<Rat> = (0..=n)
        .map(|i| a + &width * rat::rat(i as i64, n as i64))
        .collect();
    let p = TaggedPartition {
        tags: vec![Rat::zero(); n],
        breakpoints,
    };
    Ok(p.retagged(rule))
}

/// Analytic gauge families: a closed-form width profile around an anchor
/// point (the left endpoint of the domain in every current use), with a
/// designated positive value at the anchor itself.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticGauge {
    /// `δ(t) = min(cap, |t − anchor|/2)`, `δ(anchor) = at_anchor`.
    HalfDistance {
        anchor: Rat,
        cap: Rat,
        at_anchor: Rat,
    },
    /// `δ(t) = min(cap, cap·(t − anchor)²)`, `δ(anchor) = at_anchor`.
    /// The profile that lets derivatives blowing up near the anchor be
    /// gauge-integrated.
    ScaledSquare {
        anchor: Rat,
        cap: Rat,
        at_anchor: Rat,
    },
}

impl AnalyticGauge {
    fn eval(&self, t: &Rat) -> Rat {
        match self {
            AnalyticGauge::HalfDistance {
                anchor,
                cap,
                at_anchor,
            } => {
                if t == anchor {
                    at_anchor.clone()
                } else {
                    let half = Rat::new((t - anchor).numer().abs(), (t - anchor).denom() * 2);
                    half.min(cap.clone())
                }
            }
            AnalyticGauge::ScaledSquare {
                anchor,
                cap,
                at_anchor,
            } => {
                if t == anchor {
                    at_anchor.clone()
                } else {
                    let d = t - anchor;
                    (cap * &d * &d).min(cap.clone())
                }
            }
        }
    }

    fn anchor(&self) -> &Rat {
        match self {
            AnalyticGauge::HalfDistance { anchor, .. } => anchor,
            AnalyticGauge::ScaledSquare { anchor, .. } => anchor,
        }
    }
}

/// A positive width function on `[a,b]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge {
    /// Constant width; gauge-fineness degenerates to the mesh condition.
    Constant(Rat),
    /// Piecewise-constant widths: `widths[i]` on `[cuts[i], cuts[i+1])`,
    /// last piece closed.
    Piecewise {
        cuts: Vec<Rat>,
        widths: Vec<Rat>,
    },
    Analytic(AnalyticGauge),
}

impl Gauge {
    /// Width at `t`; errors if the stored profile is not positive there.
    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        let w = match self {
            Gauge::Constant(d) => d.clone(),
            Gauge::Piecewise { cuts, widths } => {
                if cuts.len() != widths.len() + 1 || t < &cuts[0] || t > cuts.last().unwrap() {
                    return Err(Error::InvalidGauge(t.to_string()));
                }
                let idx = match cuts.binary_search(t) {
                    Ok(i) => i.min(widths.len() - 1),
                    Err(i) => i - 1,
                };
                widths[idx].clone()
            }
            Gauge::Analytic(a) => a.eval(t),
        };
        if w <= Rat::zero() {
            return Err(Error::InvalidGauge(t.to_string()));
        }
        Ok(w)
    }

    /// Points the bisection must try as tags besides interval endpoints and
    /// midpoints — the anchor of an analytic profile.
    pub fn special_points(&self) -> Vec<Rat> {
        match self {
            Gauge::Analytic(a) => vec![a.anchor().clone()],
            _ => Vec::new(),
        }
    }
}

/// `true` iff every subinterval satisfies `t_i − t_{i−1} ≤ δ(s_i)`.
/// With a constant gauge this is exactly the `‖P‖ < δ`-style mesh test.
pub fn is_gauge_fine(p: &TaggedPartition, gauge: &Gauge) -> Result<bool> {
    for (l, r, s) in p.pieces() {
        if r - l > gauge.eval(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether tag `s` covers `[l, r]`: the interval sits inside
/// `(s − δ(s), s + δ(s))` and its length is at most `δ(s)`.
fn covers(gauge: &Gauge, s: &Rat, l: &Rat, r: &Rat) -> Result<bool> {
    let w = gauge.eval(s)?;
    Ok(r - l <= w && &(s - &w) < l && r < &(s + &w))
}

/// Constructive fine-partition search by recursive bisection.
///
/// An interval is emitted once one candidate tag covers it; candidates are
/// tried in a fixed order — left endpoint, right endpoint, midpoint, then any
/// special points of the gauge inside the interval — so the output is
/// deterministic. Exceeding `depth_cap` reports the subinterval that could
/// not be covered.
pub fn cousin_fine(a: &Rat, b: &Rat, gauge: &Gauge, depth_cap: u32) -> Result<TaggedPartition> {
    if a >= b {
        return Err(Error::InvalidInput(format!("need a < b, got [{a}, {b}]")));
    }
    let specials = gauge.special_points();
    let mut breakpoints = vec![a.clone()];
    let mut tags = Vec::new();
    bisect(
        a,
        b,
        gauge,
        &specials,
        depth_cap,
        &mut breakpoints,
        &mut tags,
    )?;
    TaggedPartition::new(breakpoints, tags)
}

fn bisect(
    l: &Rat,
    r: &Rat,
    gauge: &Gauge,
    specials: &[Rat],
    depth_left: u32,
    breakpoints: &mut Vec<Rat>,
    tags: &mut Vec<Rat>,
) -> Result<()> {
    let mid = rat::midpoint(l, r);
    let mut candidates = vec![l.clone(), r.clone(), mid.clone()];
    candidates.extend(specials.iter().filter(|s| *s >= l && *s <= r).cloned());
    for s in candidates {
        if covers(gauge, &s, l, r)? {
            breakpoints.push(r.clone());
            tags.push(s);
            return Ok(());
        }
    }
    if depth_left == 0 {
        return Err(Error::NoFinePartition {
            depth: 0,
            left: l.to_string(),
            right: r.to_string(),
        });
    }
    bisect(l, &mid, gauge, specials, depth_left - 1, breakpoints, tags).map_err(bump_depth)?;
    bisect(&mid, r, gauge, specials, depth_left - 1, breakpoints, tags).map_err(bump_depth)
}

fn bump_depth(e: Error) -> Error {
    match e {
        Error::NoFinePartition { depth, left, right } => Error::NoFinePartition {
            depth: depth + 1,
            left,
            right,
        },
        other => other,
    }
}

/// Default bisection depth cap.
pub const DEFAULT_DEPTH_CAP: u32 = 60;
