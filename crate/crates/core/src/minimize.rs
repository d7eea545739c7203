//! One-dimensional Nelder-Mead over a positive variable, searched in log space.

/// Lower bound of the searched domain.
pub const DOMAIN_MIN: f64 = 1e-30;
/// Upper bound of the searched domain.
pub const DOMAIN_MAX: f64 = 1e10;

const INITIAL_LOG_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerOptions {
    pub max_iters: usize,
    /// Convergence threshold on the simplex width in `ln x`.
    pub tolerance: f64,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMinimum {
    pub x: f64,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` over `x > 0` starting from `x0`.
///
/// The simplex lives in `u = ln x`, clamped to `[ln DOMAIN_MIN, ln DOMAIN_MAX]`.
/// The returned point is the best one ever evaluated, so it is never worse
/// than `x0`. NaN objective values count as `+∞`. Running out of iterations
/// returns the best point found with `converged = false`.
pub fn minimize_scalar<F>(mut f: F, x0: f64, opts: &MinimizerOptions) -> ScalarMinimum
where
    F: FnMut(f64) -> f64,
{
    let (u_lo, u_hi) = (DOMAIN_MIN.ln(), DOMAIN_MAX.ln());
    let x0 = if x0.is_finite() && x0 > 0.0 { x0 } else { 1.0 };

    let mut evaluations = 0usize;
    let mut best = (f64::NAN, f64::INFINITY);
    let mut eval = |u: f64| -> (f64, f64) {
        let u = u.clamp(u_lo, u_hi);
        let x = u.exp();
        let mut fx = f(x);
        if fx.is_nan() {
            fx = f64::INFINITY;
        }
        evaluations += 1;
        if fx < best.1 || best.0.is_nan() {
            best = (x, fx);
        }
        (u, fx)
    };

    let u0 = x0.ln().clamp(u_lo, u_hi);
    let mut b = eval(u0);
    let mut w = eval(if u0 + INITIAL_LOG_STEP <= u_hi {
        u0 + INITIAL_LOG_STEP
    } else {
        u0 - INITIAL_LOG_STEP
    });

    let mut converged = false;
    for _ in 0..opts.max_iters {
        if w.1 < b.1 {
            std::mem::swap(&mut b, &mut w);
        }
        if (w.0 - b.0).abs() <= opts.tolerance {
            converged = true;
            break;
        }
        let r = eval(2.0 * b.0 - w.0);
        if r.1 < b.1 {
            let e = eval(3.0 * b.0 - 2.0 * w.0);
            w = if e.1 < r.1 { e } else { r };
        } else if r.1 < w.1 {
            let c = eval(b.0 + 0.5 * (r.0 - b.0));
            // outside contraction, or shrink toward the best point
            w = if c.1 <= r.1 { c } else { eval(b.0 + 0.5 * (w.0 - b.0)) };
        } else {
            // inside contraction; in one dimension it coincides with a shrink
            w = eval(b.0 + 0.5 * (w.0 - b.0));
        }
    }

    ScalarMinimum {
        x: best.0,
        f: best.1,
        evaluations,
        converged,
    }
}
