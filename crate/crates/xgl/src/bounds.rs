//! Closed-form communication lower-bound calculators, all in bits.
//!
//! Each bound converts a game bias into a floor on communication. The
//! baseline is `log2(rho / beta)`; trading the halving base for the CHSH
//! bias `delta` of the boxes that power the compiled strategies gives
//! `log(rho / beta) / log(1 / delta)`, which doubles the baseline exactly at
//! the quantum value `delta = 1 / sqrt(2)`. On top sit the two equality-game
//! constants obtained from the worst-distribution limits, the spectral-l1
//! bound for XOR functions, and the entropy maximization behind the
//! information-cost view of the equality game.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::approxnorm;
use crate::boolfn::{norms, BoolFn};
use crate::error::{Error, Result};
use crate::xorgame;

/// A named bound evaluation, ready for serialization.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: &'static str,
    pub inputs: Vec<(&'static str, f64)>,
    pub value: f64,
}

/// The shared-randomness floor `log2(rho / beta)`. A vanishing bias yields
/// the infinite-bound sentinel.
pub fn discrepancy_bound(rho: f64, beta: f64) -> Result<f64> {
    if !(0.0 < rho && rho <= 1.0) || !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain(format!(
            "need rho in (0, 1] and beta in [0, 1], got rho={rho}, beta={beta}"
        )));
    }
    if beta == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((rho / beta).log2())
}

/// The box-powered floor `log2(rho / beta) / log2(1 / delta)`, defined for
/// `delta` in `[1/2, 1)`. At `delta = 1/2` it coincides with
/// [`discrepancy_bound`]; at `delta = 1/sqrt(2)` it is exactly twice it.
pub fn nlbox_bound(rho: f64, delta: f64, beta_nl: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "delta must lie in [1/2, 1), got {delta}"
        )));
    }
    if !(0.0 < rho && rho <= 1.0) || !(0.0..=1.0).contains(&beta_nl) {
        return Err(Error::domain(format!(
            "need rho in (0, 1] and beta in [0, 1], got rho={rho}, beta={beta_nl}"
        )));
    }
    if beta_nl == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((rho / beta_nl).log2() / (1.0 / delta).log2())
}

/// The two amortized-equality constants `(general, product)`:
/// the bound at the quantum box value against the worst distribution
/// (bias limit 1/3) and against the worst product distribution (bias limit
/// `2 sqrt(3) - 3`). The product constant is also `2 log2(1 + 2/sqrt(3))`;
/// the reciprocal identity behind that rewriting is asserted numerically.
pub fn equality_bound_constants() -> (f64, f64) {
    // worst-distribution limit via the mixture protocol, constant in lambda
    let general_beta = xorgame::eq_mixture_protocol_bias(0.0).expect("0 is a probability");
    let product_beta = 2.0 * 3.0f64.sqrt() - 3.0;
    let identity_gap = (1.0 / product_beta - (1.0 + 2.0 / 3.0f64.sqrt())).abs();
    assert!(
        identity_gap <= 1e-12,
        "reciprocal identity drifted: {identity_gap}"
    );
    let general = nlbox_bound(1.0, FRAC_1_SQRT_2, general_beta).expect("valid arguments");
    let product = nlbox_bound(1.0, FRAC_1_SQRT_2, product_beta).expect("valid arguments");
    (general, product)
}

/// Randomized-communication floor for the XOR function of `g` from its
/// (approximate) spectral l1 norm: `2 log2 ||g^||_1` at `epsilon = 0`, and
/// `2 log2[(1 - e) approx_l1(g, e / (1 - e))]` for `epsilon` in `(0, 1/2)`.
/// A non-positive logarithm argument degenerates to the vacuous sentinel
/// negative infinity.
pub fn xor_l1_bound(g: &BoolFn, epsilon: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, 1/2), got {epsilon}"
        )));
    }
    let arg = if epsilon == 0.0 {
        norms(&g.spectrum()).l1
    } else {
        let inner = epsilon / (1.0 - epsilon);
        (1.0 - epsilon) * approxnorm::approx_l1(g, inner)?.value
    };
    if arg <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(2.0 * arg.log2())
}

fn binary_entropy(lambda: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(lambda) + term(1.0 - lambda)
}

/// Maximize `h(lambda) + extra (1 - lambda)` over probabilities, where `h`
/// is the binary entropy: the closed form is `lambda* = 1 / (1 + 2^extra)`
/// with maximum `log2(1 + 2^extra)`. A golden-section search over the same
/// objective, polished by bisecting its finite-difference slope (value
/// comparisons alone cannot place a flat maximum better than ~1e-8), must
/// agree to 1e-10 before the closed form is returned. `extra` is capped at
/// 20: beyond that the maximizer drops under 1e-6 and the numeric
/// cross-check loses its footing.
pub fn ic_bound_maximize(extra_bits_per_direction: f64) -> Result<(f64, f64)> {
    let extra = extra_bits_per_direction;
    if !extra.is_finite() || !(0.0..=20.0).contains(&extra) {
        return Err(Error::domain(format!(
            "extra bits must lie in [0, 20], got {extra}"
        )));
    }
    let lambda_star = 1.0 / (1.0 + 2f64.powf(extra));
    let value = (1.0 + 2f64.powf(extra)).log2();

    // independent numeric route
    let objective = |l: f64| binary_entropy(l) + extra * (1.0 - l);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while hi - lo > 1e-9 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1);
        }
    }
    let rough = 0.5 * (lo + hi);
    let step = (rough / 8.0).clamp(1e-9, 1e-6);
    let slope = |l: f64| (objective(l + step) - objective(l - step)) / (2.0 * step);
    let mut slo = (rough - 1e-4).max(2.0 * step);
    let mut shi = (rough + 1e-4).min(1.0 - 2.0 * step);
    let numeric_lambda = if slope(slo) <= 0.0 || slope(shi) >= 0.0 {
        rough // maximum not bracketed; fall back to the raw search point
    } else {
        for _ in 0..100 {
            if shi - slo <= 1e-13 {
                break;
            }
            let mid = 0.5 * (slo + shi);
            if slope(mid) >= 0.0 {
                slo = mid;
            } else {
                shi = mid;
            }
        }
        0.5 * (slo + shi)
    };
    let numeric_value = objective(numeric_lambda);
    if (numeric_lambda - lambda_star).abs() > 1e-10 || (numeric_value - value).abs() > 1e-10 {
        return Err(Error::Inconsistency(format!(
            "entropy maximization disagrees: closed form ({lambda_star}, {value}) vs \
             numeric ({numeric_lambda}, {numeric_value})"
        )));
    }
    Ok((lambda_star, value))
}
