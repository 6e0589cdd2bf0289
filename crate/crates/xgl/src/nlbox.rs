//! Nonlocal boxes: bipartite no-signaling devices with a tunable CHSH bias.
//!
//! A box takes one input bit from each party and hands one output bit back
//! to each. The only statistic an isotropic box has is how often the outputs
//! satisfy `a XOR b = x AND y`; the bias `delta` ranges from 0 (pure noise)
//! through 1/2 (best classical), 1/sqrt(2) (quantum) up to 1 (perfect box).
//! The simulator places no ceiling at the quantum value: superquantum boxes
//! are legitimate abstract devices here.

use crate::error::{Error, Result};
use crate::rng::Stream;

const PROB_TOL: f64 = 1e-12;

/// Conditional distribution `p(a, b | x, y)` over single-bit ports.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDistribution {
    /// indexed by `a | b<<1 | x<<2 | y<<3`
    p: [f64; 16],
}

impl BoxDistribution {
    /// Validates non-negativity and that each input pair gets a probability
    /// distribution over outputs.
    pub fn new(p: [f64; 16]) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(
                "box probabilities must be finite and non-negative",
            ));
        }
        for x in 0..2 {
            for y in 0..2 {
                let total: f64 = (0..4).map(|ab| p[ab | x << 2 | y << 3]).sum();
                if (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::domain(format!(
                        "outputs for inputs ({x},{y}) sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(BoxDistribution { p })
    }

    /// Build from a closure over `(a, b, x, y)`.
    pub fn from_fn(f: impl Fn(bool, bool, bool, bool) -> f64) -> Result<Self> {
        let mut p = [0.0; 16];
        for (i, slot) in p.iter_mut().enumerate() {
            *slot = f(
                i & 1 == 1,
                i >> 1 & 1 == 1,
                i >> 2 & 1 == 1,
                i >> 3 & 1 == 1,
            );
        }
        Self::new(p)
    }

    #[inline]
    pub fn prob(&self, a: bool, b: bool, x: bool, y: bool) -> f64 {
        self.p[a as usize | (b as usize) << 1 | (x as usize) << 2 | (y as usize) << 3]
    }
}

/// An isotropic box, fully described by its CHSH bias.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicBox {
    delta: f64,
}

impl IsotropicBox {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!(
                "CHSH bias must lie in [0, 1], got {delta}"
            )));
        }
        Ok(IsotropicBox { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The induced conditional distribution: `(1 + delta)/4` on winning
    /// output pairs, `(1 - delta)/4` otherwise.
    pub fn distribution(&self) -> BoxDistribution {
        let win = (1.0 + self.delta) / 4.0;
        let lose = (1.0 - self.delta) / 4.0;
        BoxDistribution::from_fn(|a, b, x, y| if (a ^ b) == (x && y) { win } else { lose })
            .expect("isotropic distribution is always valid")
    }

    /// Draw one use of the box. `a` is a fair coin and
    /// `b = a XOR (x AND y) XOR e` with `e ~ Bernoulli((1-delta)/2)`, which
    /// realizes the isotropic law with manifestly uniform marginals.
    pub fn sample(&self, x: bool, y: bool, rng: &mut Stream) -> (bool, bool) {
        let a = rng.coin();
        let e = rng.bernoulli((1.0 - self.delta) / 2.0);
        let b = a ^ (x && y) ^ e;
        (a, b)
    }
}

/// Both marginal conditions: Alice's output distribution must not depend on
/// `y`, and Bob's must not depend on `x`.
pub fn no_signaling_check(bx: &BoxDistribution) -> bool {
    for a in [false, true] {
        for x in [false, true] {
            let m0: f64 = bx.prob(a, false, x, false) + bx.prob(a, true, x, false);
            let m1: f64 = bx.prob(a, false, x, true) + bx.prob(a, true, x, true);
            if (m0 - m1).abs() > PROB_TOL {
                return false;
            }
        }
    }
    for b in [false, true] {
        for y in [false, true] {
            let m0: f64 = bx.prob(false, b, false, y) + bx.prob(true, b, false, y);
            let m1: f64 = bx.prob(false, b, true, y) + bx.prob(true, b, true, y);
            if (m0 - m1).abs() > PROB_TOL {
                return false;
            }
        }
    }
    true
}

/// Probability of `a XOR b = x AND y` under uniform inputs: the average of
/// the eight winning entries.
pub fn chsh_probability(bx: &BoxDistribution) -> f64 {
    let mut total = 0.0;
    for i in 0..16 {
        let (a, b, x, y) = (
            i & 1 == 1,
            i >> 1 & 1 == 1,
            i >> 2 & 1 == 1,
            i >> 3 & 1 == 1,
        );
        if (a ^ b) == (x && y) {
            total += bx.prob(a, b, x, y);
        }
    }
    total / 4.0
}
