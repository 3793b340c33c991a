//! Shared independent oracles for integration tests.

use vecquad_core::rat;
use vecquad_core::spaces::StepFn;

/// `‖F − (x − s)⁺‖_{1/2}` via the closed-form antiderivative of
/// `√|c − (x − s)|` on each constant piece of `F`, split at the sign
/// crossing. Independent of the engine's norm path.
pub fn quasi_norm_step_minus_ramp(step: &StepFn, x: f64) -> f64 {
    let mut total = 0.0;
    let bps = step.breakpoints();
    for (i, w) in bps.windows(2).enumerate() {
        let (u, v) = (rat::to_f64(&w[0]), rat::to_f64(&w[1]));
        total += integral_sqrt_abs_linear(step.values()[i], x, u, v);
    }
    total * total
}

/// `∫_u^v √|c − max(x − s, 0)| ds` for constants `c, x`.
pub fn integral_sqrt_abs_linear(c: f64, x: f64, u: f64, v: f64) -> f64 {
    let mut total = 0.0;
    let lo = u.min(x);
    let hi = v.min(x);
    if hi > lo {
        // c − x + s is linear in s with slope 1, zero at s = x − c.
        let anti = |s: f64| {
            let w = c - x + s;
            (2.0 / 3.0) * w.abs().powf(1.5) * w.signum()
        };
        let cross = x - c;
        if cross > lo && cross < hi {
            total += (anti(hi) - anti(cross)).abs() + (anti(cross) - anti(lo)).abs();
        } else {
            total += (anti(hi) - anti(lo)).abs();
        }
    }
    if v > x {
        total += c.abs().sqrt() * (v - x.max(u));
    }
    total
}
