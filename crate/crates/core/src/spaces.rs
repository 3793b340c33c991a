//! Computable vector models and their norms and quasi-norms.
//!
//! Two concrete carriers cover every space used by the gallery and the
//! integration engine:
//!
//! * [`SeqVec`] — a finitely supported sequence tagged with its [`SpaceSpec`].
//!   Entries are scalars, or whole inner vectors when the space is a nested
//!   `ℓ₁(X)`.
//! * [`StepFn`] — a piecewise-constant function on `[0,1]` with exact
//!   rational breakpoints; the model for `L_p[0,1]` with `p ≤ 1`.
//!
//! Everything is immutable after construction and every operation is pure,
//! so values can be shared freely between concurrent workers.

use crate::error::{Error, Result};
use crate::rat::Rat;
use num::traits::ToPrimitive;
use num::{One, Zero};

/// Which norm (or quasi-norm) a vector carries.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// `ℝ^n` under the sup norm.
    FiniteDim(usize),
    /// Scalar sequences under `(Σ|x_i|^p)^{1/p}`; `p = ∞` means the sup norm.
    /// A genuine norm for `p ≥ 1`, a quasi-norm for `0 < p < 1`.
    SeqLp(f64),
    /// Scalar sequences under the sup norm (the `c₀` model).
    SeqSup,
    /// `ℓ₁(X)`: entries are vectors of the inner space, norm is the sum of
    /// inner norms.
    NestedL1(Box<SpaceSpec>),
    /// Step functions on `[0,1]` under `(Σ|v_i|^p · len_i)^{1/p}`, `0 < p ≤ 1`.
    StepLp(f64),
}

impl SpaceSpec {
    /// `ℓ₁` over scalars.
    pub fn l1() -> Self {
        SpaceSpec::SeqLp(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::FiniteDim(n) => {
                if *n == 0 {
                    return Err(Error::InvalidInput(
                        "FiniteDim dimension must be ≥ 1".into(),
                    ));
                }
            }
            SpaceSpec::SeqLp(p) => {
                if p.is_nan() || *p <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "SeqLp exponent must be > 0, got {p}"
                    )));
                }
            }
            SpaceSpec::SeqSup => {}
            SpaceSpec::NestedL1(inner) => inner.validate()?,
            SpaceSpec::StepLp(p) => {
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "StepLp exponent must be in (0, 1], got {p}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Modulus `k` in the quasi-triangle inequality
    /// `‖x+y‖ ≤ k(‖x‖+‖y‖)`: 1 for genuine norms, the sharp `2^{1/p−1}`
    /// for `p < 1`, and the inner modulus for nested `ℓ₁(X)`.
    pub fn quasi_constant(&self) -> f64 {
        match self {
            SpaceSpec::FiniteDim(_) | SpaceSpec::SeqSup => 1.0,
            SpaceSpec::SeqLp(p) | SpaceSpec::StepLp(p) => {
                if *p < 1.0 {
                    (2f64).powf(1.0 / p - 1.0)
                } else {
                    1.0
                }
            }
            SpaceSpec::NestedL1(inner) => inner.quasi_constant(),
        }
    }
}

/// One stored entry of a [`SeqVec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Coord {
    Scalar(f64),
    Nested(SeqVec),
}

impl Coord {
    fn is_zero(&self) -> bool {
        match self {
            Coord::Scalar(x) => *x == 0.0,
            Coord::Nested(v) => v.entries.is_empty(),
        }
    }

    /// `|x|` for scalars, the inner norm for nested entries.
    pub fn magnitude(&self) -> f64 {
        match self {
            Coord::Scalar(x) => x.abs(),
            Coord::Nested(v) => v.norm(),
        }
    }
}

/// Finitely supported sequence in canonical sparse form: indices are
/// 1-based, strictly increasing, and no zero entry is stored, so structural
/// equality is semantic equality.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqVec {
    space: SpaceSpec,
    entries: Vec<(usize, Coord)>,
}

impl SeqVec {
    /// Canonicalising constructor: sorts by index, rejects duplicates,
    /// non-positive indices, non-finite scalars, entries outside a
    /// `FiniteDim` dimension, and entry kinds that do not match the space.
    pub fn new(space: SpaceSpec, mut entries: Vec<(usize, Coord)>) -> Result<Self> {
        space.validate()?;
        if matches!(space, SpaceSpec::StepLp(_)) {
            return Err(Error::InvalidInput(
                "sequence values cannot live in a step-function space".into(),
            ));
        }
        entries.sort_by_key(|(i, _)| *i);
        for win in entries.windows(2) {
            if win[0].0 == win[1].0 {
                return Err(Error::InvalidInput(format!("duplicate index {}", win[0].0)));
            }
        }
        for (i, coord) in &entries {
            if *i == 0 {
                return Err(Error::InvalidInput("indices are 1-based".into()));
            }
            if let SpaceSpec::FiniteDim(n) = &space {
                if *i > *n {
                    return Err(Error::InvalidInput(format!(
                        "index {i} exceeds dimension {n}"
                    )));
                }
            }
            match (&space, coord) {
                (SpaceSpec::NestedL1(inner), Coord::Nested(v)) => {
                    if v.space != **inner {
                        return Err(Error::SpaceMismatch(
                            "nested entry does not live in the inner space".into(),
                        ));
                    }
                }
                (SpaceSpec::NestedL1(_), Coord::Scalar(_)) => {
                    return Err(Error::InvalidInput(
                        "entries of a nested ℓ₁ vector must be inner vectors".into(),
                    ));
                }
                (_, Coord::Nested(_)) => {
                    return Err(Error::InvalidInput(
                        "nested entries require a NestedL1 space".into(),
                    ));
                }
                (_, Coord::Scalar(x)) => {
                    if !x.is_finite() {
                        return Err(Error::InvalidInput(format!("non-finite entry {x}")));
                    }
                }
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        Ok(SeqVec { space, entries })
    }

    /// Scalar-entry vector from `(index, value)` pairs.
    pub fn from_pairs(space: SpaceSpec, pairs: &[(usize, f64)]) -> Result<Self> {
        SeqVec::new(
            space,
            pairs.iter().map(|&(i, x)| (i, Coord::Scalar(x))).collect(),
        )
    }

    /// The zero vector of a space.
    pub fn zero(space: SpaceSpec) -> Result<Self> {
        SeqVec::new(space, Vec::new())
    }

    /// The `k`-th unit vector `e_k`.
    pub fn unit(space: SpaceSpec, k: usize) -> Result<Self> {
        SeqVec::from_pairs(space, &[(k, 1.0)])
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn entries(&self) -> &[(usize, Coord)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Scalar value at `index` (0 when unset); nested entries report their norm.
    pub fn coord(&self, index: usize) -> f64 {
        self.entries
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, c)| match c {
                Coord::Scalar(x) => *x,
                Coord::Nested(v) => v.norm(),
            })
            .unwrap_or(0.0)
    }

    /// Norm of the vector in its own space; the zero vector maps to 0.
    pub fn norm(&self) -> f64 {
        match &self.space {
            SpaceSpec::FiniteDim(_) | SpaceSpec::SeqSup => self
                .entries
                .iter()
                .fold(0.0, |m, (_, c)| m.max(c.magnitude())),
            SpaceSpec::NestedL1(_) => self.entries.iter().map(|(_, c)| c.magnitude()).sum(),
            SpaceSpec::SeqLp(p) => {
                if p.is_infinite() {
                    self.entries
                        .iter()
                        .fold(0.0, |m, (_, c)| m.max(c.magnitude()))
                } else if *p == 1.0 {
                    self.entries.iter().map(|(_, c)| c.magnitude()).sum()
                } else {
                    let s: f64 = self
                        .entries
                        .iter()
                        .map(|(_, c)| c.magnitude().powf(*p))
                        .sum();
                    s.powf(1.0 / p)
                }
            }
            // Constructors forbid sequence values in a step-function space.
            SpaceSpec::StepLp(_) => unreachable!("SeqVec cannot carry a StepLp space"),
        }
    }

    /// Entrywise sum in canonical form. The operands must share a space.
    pub fn add(&self, other: &SeqVec) -> Result<SeqVec> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!(
                "{:?} vs {:?}",
                self.space, other.space
            )));
        }
        let mut out: Vec<(usize, Coord)> =
            Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, ca)), Some((ib, cb))) => {
                    if ia < ib {
                        out.push((*ia, ca.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, cb.clone()));
                        b.next();
                    } else {
                        let merged = match (ca, cb) {
                            (Coord::Scalar(x), Coord::Scalar(y)) => Coord::Scalar(x + y),
                            (Coord::Nested(u), Coord::Nested(v)) => Coord::Nested(u.add(v)?),
                            _ => {
                                return Err(Error::InvalidInput(
                                    "mixed scalar/nested entries at one index".into(),
                                ))
                            }
                        };
                        out.push((*ia, merged));
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, ca)), None) => {
                    out.push((*ia, ca.clone()));
                    a.next();
                }
                (None, Some((ib, cb))) => {
                    out.push((*ib, cb.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Ok(SeqVec {
            space: self.space.clone(),
            entries: out,
        })
    }

    /// Scalar multiple in canonical form.
    pub fn scale(&self, c: f64) -> Result<SeqVec> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite scale factor {c}")));
        }
        if c == 0.0 {
            return Ok(SeqVec {
                space: self.space.clone(),
                entries: Vec::new(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, coord) in &self.entries {
            let scaled = match coord {
                Coord::Scalar(x) => Coord::Scalar(x * c),
                Coord::Nested(v) => Coord::Nested(v.scale(c)?),
            };
            if !scaled.is_zero() {
                entries.push((*i, scaled));
            }
        }
        Ok(SeqVec {
            space: self.space.clone(),
            entries,
        })
    }

    /// Flatten a nested `ℓ₁(ℓ₁)`-style vector into plain scalar pairs,
    /// enumerated in entry order. Cross-check helper for the nested norm.
    pub fn flatten_magnitudes(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (_, coord) in &self.entries {
            match coord {
                Coord::Scalar(x) => out.push(x.abs()),
                Coord::Nested(v) => out.extend(v.flatten_magnitudes()),
            }
        }
        out
    }
}

/// Dual pairing `⟨functional, x⟩ = Σ functional_i · x_i` between the `ℓ₁`
/// model and the sup-norm (`c₀`) model, over the common support.
pub fn pair(functional: &SeqVec, x: &SeqVec) -> Result<f64> {
    if functional.space != SpaceSpec::SeqLp(1.0) {
        return Err(Error::SpaceMismatch(
            "pairing functional must live in ℓ₁".into(),
        ));
    }
    if x.space != SpaceSpec::SeqSup {
        return Err(Error::SpaceMismatch(
            "paired vector must live in the sup-norm space".into(),
        ));
    }
    let mut total = 0.0;
    let (mut a, mut b) = (
        functional.entries.iter().peekable(),
        x.entries.iter().peekable(),
    );
    while let (Some((ia, ca)), Some((ib, cb))) = (a.peek(), b.peek()) {
        if ia < ib {
            a.next();
        } else if ib < ia {
            b.next();
        } else {
            if let (Coord::Scalar(u), Coord::Scalar(v)) = (ca, cb) {
                total += u * v;
            }
            a.next();
            b.next();
        }
    }
    Ok(total)
}

/// Piecewise-constant function on `[0,1]`: value `values[i]` on
/// `[breakpoints[i], breakpoints[i+1])`, with exact rational breakpoints
/// `0 = b₀ < … < b_m = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn {
    breakpoints: Vec<Rat>,
    values: Vec<f64>,
}

impl StepFn {
    pub fn new(breakpoints: Vec<Rat>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidInput("need at least two breakpoints".into()));
        }
        if breakpoints[0] != Rat::zero() || *breakpoints.last().unwrap() != Rat::one() {
            return Err(Error::InvalidInput(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidInput(
                "values length must be breakpoint count − 1".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite step value".into()));
        }
        Ok(StepFn {
            breakpoints,
            values,
        })
    }

    /// The zero function.
    pub fn zero() -> Self {
        StepFn {
            breakpoints: vec![Rat::zero(), Rat::one()],
            values: vec![0.0],
        }
    }

    /// Indicator of `[c, d)` as a step function, `0 ≤ c ≤ d ≤ 1`.
    /// `c = d` gives the zero function.
    pub fn chi(c: &Rat, d: &Rat) -> Result<Self> {
        if c > d || *c < Rat::zero() || *d > Rat::one() {
            return Err(Error::InvalidInput(format!(
                "indicator interval [{c}, {d}] is not inside [0, 1]"
            )));
        }
        if c == d {
            return Ok(StepFn::zero());
        }
        let mut breakpoints = vec![Rat::zero()];
        let mut values = Vec::new();
        if *c > Rat::zero() {
            breakpoints.push(c.clone());
            values.push(0.0);
        }
        values.push(1.0);
        if *d < Rat::one() {
            breakpoints.push(d.clone());
            values.push(0.0);
        }
        breakpoints.push(Rat::one());
        StepFn::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `t ∈ [0,1]`; pieces are right-open, `t = 1` reads the last piece.
    pub fn eval(&self, t: &Rat) -> f64 {
        let idx = match self.breakpoints.binary_search(t) {
            Ok(i) => i.min(self.values.len() - 1),
            Err(i) => i - 1,
        };
        self.values[idx]
    }

    fn refine_with(&self, other: &StepFn) -> (Vec<Rat>, Vec<f64>, Vec<f64>) {
        let mut merged = Vec::with_capacity(self.breakpoints.len() + other.breakpoints.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breakpoints.len() || j < other.breakpoints.len() {
            let next = match (self.breakpoints.get(i), other.breakpoints.get(j)) {
                (Some(a), Some(b)) => {
                    if a < b {
                        i += 1;
                        a.clone()
                    } else if b < a {
                        j += 1;
                        b.clone()
                    } else {
                        i += 1;
                        j += 1;
                        a.clone()
                    }
                }
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        let mut va = Vec::with_capacity(merged.len() - 1);
        let mut vb = Vec::with_capacity(merged.len() - 1);
        let (mut ia, mut ib) = (0usize, 0usize);
        for w in merged.windows(2) {
            while ia + 1 < self.breakpoints.len() && self.breakpoints[ia + 1] <= w[0] {
                ia += 1;
            }
            while ib + 1 < other.breakpoints.len() && other.breakpoints[ib + 1] <= w[0] {
                ib += 1;
            }
            va.push(self.values[ia.min(self.values.len() - 1)]);
            vb.push(other.values[ib.min(other.values.len() - 1)]);
        }
        (merged, va, vb)
    }

    /// Pointwise sum on the common refinement of the two breakpoint sets.
    pub fn add(&self, other: &StepFn) -> StepFn {
        let (breakpoints, va, vb) = self.refine_with(other);
        let values = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        StepFn {
            breakpoints,
            values,
        }
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, c: f64) -> Result<StepFn> {
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite scale factor {c}")));
        }
        Ok(StepFn {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        })
    }

    /// `(Σ |v_i|^p · len_i)^{1/p}` — the `L_p[0,1]` quasi-norm for `p ≤ 1`.
    pub fn norm_lp(&self, p: f64) -> f64 {
        let mut total = 0.0;
        for (i, w) in self.breakpoints.windows(2).enumerate() {
            let v = self.values[i];
            if v != 0.0 {
                let len = (&w[1] - &w[0]).to_f64().unwrap_or(f64::NAN);
                if p == 1.0 {
                    total += v.abs() * len;
                } else {
                    total += v.abs().powf(p) * len;
                }
            }
        }
        if p == 1.0 {
            total
        } else {
            total.powf(1.0 / p)
        }
    }

    /// Pointwise equality as functions (values compared on the common
    /// refinement), ignoring redundant breakpoints.
    pub fn eq_as_fn(&self, other: &StepFn) -> bool {
        let (_, va, vb) = self.refine_with(other);
        va == vb
    }
}

/// A value of any supported space: sequence-like or step-function-like.
/// Step values carry their `L_p` exponent so norms are self-contained.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Seq(SeqVec),
    Step { f: StepFn, p: f64 },
}

impl Vector {
    /// A scalar wrapped as a 1-dimensional vector.
    pub fn scalar(x: f64) -> Result<Vector> {
        Ok(Vector::Seq(SeqVec::from_pairs(
            SpaceSpec::FiniteDim(1),
            &[(1, x)],
        )?))
    }

    pub fn zero(space: &SpaceSpec) -> Result<Vector> {
        match space {
            SpaceSpec::StepLp(p) => Ok(Vector::Step {
                f: StepFn::zero(),
                p: *p,
            }),
            other => Ok(Vector::Seq(SeqVec::zero(other.clone())?)),
        }
    }

    pub fn space(&self) -> SpaceSpec {
        match self {
            Vector::Seq(v) => v.space().clone(),
            Vector::Step { p, .. } => SpaceSpec::StepLp(*p),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Vector::Seq(v) => v.norm(),
            Vector::Step { f, p } => f.norm_lp(*p),
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        match (self, other) {
            (Vector::Seq(a), Vector::Seq(b)) => Ok(Vector::Seq(a.add(b)?)),
            (Vector::Step { f: a, p: pa }, Vector::Step { f: b, p: pb }) => {
                if pa != pb {
                    return Err(Error::SpaceMismatch(format!(
                        "step exponents differ: {pa} vs {pb}"
                    )));
                }
                Ok(Vector::Step {
                    f: a.add(b),
                    p: *pa,
                })
            }
            _ => Err(Error::SpaceMismatch(
                "cannot add a sequence value to a step value".into(),
            )),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Vector> {
        match self {
            Vector::Seq(v) => Ok(Vector::Seq(v.scale(c)?)),
            Vector::Step { f, p } => Ok(Vector::Step {
                f: f.scale(c)?,
                p: *p,
            }),
        }
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.add(&other.scale(-1.0)?)
    }

    /// Scalar content of a 1-dimensional vector.
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Vector::Seq(v) if matches!(v.space(), SpaceSpec::FiniteDim(1)) => Some(v.coord(1)),
            _ => None,
        }
    }
}

/// Free-function form of the norm, mirroring `norm(v: SeqVec | StepFn)`.
pub fn norm(v: &Vector) -> f64 {
    v.norm()
}

/// Quasi-norm modulus of a space; see [`SpaceSpec::quasi_constant`].
pub fn quasi_constant(space: &SpaceSpec) -> f64 {
    space.quasi_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use approx::assert_relative_eq;

    #[test]
    fn l1_norm_is_absolute_sum() {
        let v = SeqVec::from_pairs(SpaceSpec::l1(), &[(1, 1.0), (2, -2.0), (3, 3.0)]).unwrap();
        assert_eq!(v.norm(), 6.0);
    }

    #[test]
    fn half_exponent_norm_squares_the_root_sum() {
        // (Σ |x|^{1/2})² computed directly: the formula is its own oracle.
        let v = SeqVec::from_pairs(SpaceSpec::SeqLp(0.5), &[(1, 1.0), (2, 1.0)]).unwrap();
        assert_relative_eq!(v.norm(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn step_half_norm_on_short_indicator() {
        // ‖χ‖ over an interval of length h is h^{1/p}; p = 1/2, h = 0.01.
        let chi = StepFn::chi(&rat(0, 1), &rat(1, 100)).unwrap();
        assert_relative_eq!(chi.norm_lp(0.5), 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn quasi_constants() {
        assert_eq!(quasi_constant(&SpaceSpec::SeqLp(1.0)), 1.0);
        assert_eq!(quasi_constant(&SpaceSpec::SeqLp(0.5)), 2.0);
        assert_eq!(quasi_constant(&SpaceSpec::SeqLp(2.0)), 1.0);
        assert_eq!(
            quasi_constant(&SpaceSpec::NestedL1(Box::new(SpaceSpec::l1()))),
            1.0
        );
    }

    #[test]
    fn quasi_constant_attained_by_disjoint_units() {
        let x = SeqVec::unit(SpaceSpec::SeqLp(0.5), 1).unwrap();
        let y = SeqVec::unit(SpaceSpec::SeqLp(0.5), 2).unwrap();
        let lhs = x.add(&y).unwrap().norm();
        assert_relative_eq!(lhs / (x.norm() + y.norm()), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn add_merges_disjoint_support() {
        let x = SeqVec::unit(SpaceSpec::l1(), 1).unwrap();
        let y = SeqVec::unit(SpaceSpec::l1(), 2).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(
            s,
            SeqVec::from_pairs(SpaceSpec::l1(), &[(1, 1.0), (2, 1.0)]).unwrap()
        );
    }

    #[test]
    fn scale_by_zero_is_canonical_empty() {
        let v = SeqVec::from_pairs(SpaceSpec::l1(), &[(3, 2.5)]).unwrap();
        let z = v.scale(0.0).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.entries().len(), 0);
    }

    #[test]
    fn add_cancels_to_canonical_form() {
        let v = SeqVec::from_pairs(SpaceSpec::l1(), &[(1, 1.0), (2, 2.0)]).unwrap();
        let w = SeqVec::from_pairs(SpaceSpec::l1(), &[(1, -1.0)]).unwrap();
        let s = v.add(&w).unwrap();
        assert_eq!(s.entries().len(), 1);
        assert_eq!(s.coord(2), 2.0);
    }

    #[test]
    fn step_add_produces_expected_refinement() {
        // χ_[0,0.3] − χ_[0,0.2] = χ_[0.2,0.3] with breakpoints {0, 0.2, 0.3, 1}.
        let a = StepFn::chi(&rat(0, 1), &rat(3, 10)).unwrap();
        let b = StepFn::chi(&rat(0, 1), &rat(1, 5))
            .unwrap()
            .scale(-1.0)
            .unwrap();
        let s = a.add(&b);
        let expected = StepFn::chi(&rat(1, 5), &rat(3, 10)).unwrap();
        assert!(s.eq_as_fn(&expected));
        assert_eq!(
            s.breakpoints(),
            &[rat(0, 1), rat(1, 5), rat(3, 10), rat(1, 1)]
        );
        // Pointwise oracle on a fine grid.
        for k in 0..=100 {
            let t = rat(k, 100);
            let want = if t >= rat(1, 5) && t < rat(3, 10) {
                1.0
            } else {
                0.0
            };
            assert_eq!(s.eval(&t), want, "at t = {t}");
        }
    }

    #[test]
    fn pair_reads_coordinates() {
        let e3 = SeqVec::unit(SpaceSpec::l1(), 3).unwrap();
        let x = SeqVec::from_pairs(SpaceSpec::SeqSup, &[(1, 5.0), (3, 7.0)]).unwrap();
        assert_eq!(pair(&e3, &x).unwrap(), 7.0);

        // y_k = 2^{-k}: pairing with e_n reads off 2^{-n}.
        let y = SeqVec::from_pairs(
            SpaceSpec::SeqSup,
            &(1..=20)
                .map(|k| (k, (2f64).powi(-(k as i32))))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let e7 = SeqVec::unit(SpaceSpec::l1(), 7).unwrap();
        assert_eq!(pair(&e7, &y).unwrap(), (2f64).powi(-7));

        let zero = SeqVec::zero(SpaceSpec::l1()).unwrap();
        assert_eq!(pair(&zero, &x).unwrap(), 0.0);
    }

    #[test]
    fn nested_l1_norm_sums_inner_norms() {
        let inner = SpaceSpec::l1();
        let a = SeqVec::from_pairs(inner.clone(), &[(1, 1.0), (2, -2.0)]).unwrap();
        let b = SeqVec::from_pairs(inner.clone(), &[(5, 4.0)]).unwrap();
        let nested = SeqVec::new(
            SpaceSpec::NestedL1(Box::new(inner)),
            vec![(1, Coord::Nested(a)), (4, Coord::Nested(b))],
        )
        .unwrap();
        assert_eq!(nested.norm(), 7.0);
        let flat: f64 = nested.flatten_magnitudes().iter().sum();
        assert_eq!(nested.norm(), flat);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(SeqVec::from_pairs(SpaceSpec::l1(), &[(1, f64::NAN)]).is_err());
        assert!(SeqVec::from_pairs(SpaceSpec::l1(), &[(0, 1.0)]).is_err());
        assert!(SeqVec::from_pairs(SpaceSpec::l1(), &[(2, 1.0), (2, 3.0)]).is_err());
        assert!(SeqVec::from_pairs(SpaceSpec::FiniteDim(2), &[(3, 1.0)]).is_err());
        assert!(SpaceSpec::SeqLp(0.0).validate().is_err());
        assert!(SpaceSpec::StepLp(1.5).validate().is_err());
        let x = SeqVec::unit(SpaceSpec::l1(), 1).unwrap();
        let y = SeqVec::unit(SpaceSpec::SeqSup, 1).unwrap();
        assert!(x.add(&y).is_err());
    }

    #[test]
    fn step_norm_invariant_under_redundant_breakpoints() {
        let a = StepFn::chi(&rat(1, 4), &rat(3, 4)).unwrap();
        let refined = a.add(
            &StepFn::new(
                vec![rat(0, 1), rat(1, 3), rat(2, 3), rat(1, 1)],
                vec![0.0, 0.0, 0.0],
            )
            .unwrap(),
        );
        assert!((a.norm_lp(0.5) - refined.norm_lp(0.5)).abs() <= 1e-12);
        assert!((a.norm_lp(1.0) - refined.norm_lp(1.0)).abs() <= 1e-12);
    }
}
