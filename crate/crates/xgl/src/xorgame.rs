//! XOR games: exact biases, optimal strategies, and worst distributions.
//!
//! In an XOR game the players receive `(x, y)` from a known distribution and
//! win iff the XOR of their output bits equals `f(x, y)`; the bias is twice
//! the winning probability minus one. For an XOR function `g(x XOR y)` under
//! an XOR-shaped distribution the optimal bias is the largest Fourier
//! amplitude of the product table `g q`, and the optimal strategies are the
//! characters attaining it. That identity powers everything here; a
//! brute-force search over all deterministic strategies serves as the
//! independent oracle at small arity.

use crate::boolfn::{chi, fwht, pointwise_product, BoolFn, Density};
use crate::error::{Error, Result};
use crate::linprog::{self, LinearProgram, Relation};
use crate::rng::Stream;

/// Tolerance on a joint distribution summing to one.
const MU_SUM_TOL: f64 = 1e-9;

/// A probability distribution over input pairs `(x, y)`, each side `n` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// `probs` is indexed by `x | y << n` and must sum to 1.
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if 2 * n > crate::boolfn::MAX_ARITY {
            return Err(Error::Capacity {
                what: "pair arity",
                got: 2 * n,
                max: crate::boolfn::MAX_ARITY,
            });
        }
        let len = 1usize << (2 * n);
        if probs.len() != len {
            return Err(Error::domain(format!(
                "expected {len} probabilities for side arity {n}, got {}",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::domain(
                "probabilities must be finite and non-negative",
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > MU_SUM_TOL {
            return Err(Error::domain(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(JointDistribution { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let len = 1usize << (2 * n);
        Self::new(n, vec![1.0 / len as f64; len])
    }

    /// The XOR-shaped distribution `mu(x, y) = 2^{-2n} q(x XOR y)`.
    pub fn from_xor_density(q: &Density) -> Result<Self> {
        let n = q.arity();
        let scale = 1.0 / (1u64 << (2 * n)) as f64;
        let len = 1usize << (2 * n);
        let mut probs = vec![0.0; len];
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                probs[x | y << n] = q.weight(x ^ y) * scale;
            }
        }
        Self::new(n, probs)
    }

    /// Side arity `n`; pairs live on `2n` bits.
    pub fn side_arity(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x | y << self.n]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Density of `z = x XOR y`: `q(z) = 2^n sum_x mu(x, x XOR z)`. This is
    /// the distribution the players can always reach by jointly shifting
    /// their inputs with shared randomness.
    pub fn xor_average(&self) -> Result<Density> {
        let side = 1usize << self.n;
        let mut weights = vec![0.0; side];
        for (zw, w) in weights.iter_mut().enumerate() {
            for x in 0..side {
                *w += self.prob(x, x ^ zw);
            }
        }
        Density::from_weights(self.n, weights)
    }

    /// Cumulative table for inverse-CDF sampling.
    pub fn sampler(&self) -> JointSampler {
        let mut cumulative = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for p in &self.probs {
            acc += p;
            cumulative.push(acc);
        }
        JointSampler {
            n: self.n,
            cumulative,
        }
    }
}

/// Inverse-CDF sampler over input pairs.
#[derive(Clone, Debug)]
pub struct JointSampler {
    n: usize,
    cumulative: Vec<f64>,
}

impl JointSampler {
    pub fn sample(&self, rng: &mut Stream) -> (usize, usize) {
        let u = rng.next_f64() * self.cumulative.last().copied().unwrap_or(1.0);
        let idx = self.cumulative.partition_point(|&c| c <= u);
        let idx = idx.min(self.cumulative.len() - 1);
        let mask = (1usize << self.n) - 1;
        (idx & mask, idx >> self.n)
    }
}

/// An XOR game, either in XOR form `(g, q)` or with an explicit pair
/// function and input distribution.
#[derive(Clone, Debug)]
pub enum XorGameInstance {
    XorForm { g: BoolFn, q: Density },
    Explicit { f: BoolFn, mu: JointDistribution },
}

impl XorGameInstance {
    pub fn xor_form(g: BoolFn, q: Density) -> Result<Self> {
        if g.arity() != q.arity() {
            return Err(Error::ArityMismatch {
                left: g.arity(),
                right: q.arity(),
            });
        }
        Ok(XorGameInstance::XorForm { g, q })
    }

    /// `f` lives on pairs (`2n` bits, low half Alice), `mu` on side arity `n`.
    pub fn explicit(f: BoolFn, mu: JointDistribution) -> Result<Self> {
        if f.arity() != 2 * mu.side_arity() {
            return Err(Error::ArityMismatch {
                left: f.arity(),
                right: 2 * mu.side_arity(),
            });
        }
        Ok(XorGameInstance::Explicit { f, mu })
    }

    pub fn side_arity(&self) -> usize {
        match self {
            XorGameInstance::XorForm { g, .. } => g.arity(),
            XorGameInstance::Explicit { mu, .. } => mu.side_arity(),
        }
    }

    fn weight(&self, x: usize, y: usize) -> f64 {
        match self {
            XorGameInstance::XorForm { g, q } => q.weight(x ^ y) / (1u64 << (2 * g.arity())) as f64,
            XorGameInstance::Explicit { mu, .. } => mu.prob(x, y),
        }
    }

    fn game_value(&self, x: usize, y: usize) -> f64 {
        match self {
            XorGameInstance::XorForm { g, .. } => g.value(x ^ y),
            XorGameInstance::Explicit { f, .. } => f.value(x | y << self.side_arity()),
        }
    }
}

/// A deterministic strategy pair; Bob's effective output is `b(y)` with
/// `sign_shift` XORed on top.
#[derive(Clone, Debug)]
pub struct Strategy {
    pub a: BoolFn,
    pub b: BoolFn,
    pub sign_shift: bool,
}

impl Strategy {
    /// Correlation `E[f . a . b . shift]` under the instance's distribution,
    /// summed directly over all input pairs.
    pub fn correlation(&self, instance: &XorGameInstance) -> f64 {
        let n = instance.side_arity();
        let shift = if self.sign_shift { -1.0 } else { 1.0 };
        let mut total = 0.0;
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                let w = instance.weight(x, y);
                if w != 0.0 {
                    total += w * instance.game_value(x, y) * self.a.value(x) * self.b.value(y);
                }
            }
        }
        total * shift
    }
}

/// Optimal bias of the XOR game `(g(x XOR y), 2^{-2n} q(x XOR y))`: the
/// largest Fourier amplitude of `g q`, with the lexicographically smallest
/// maximizing subset.
pub fn bias_xor_form(g: &BoolFn, q: &Density) -> Result<(f64, usize)> {
    let spec = fwht(&pointwise_product(g, q)?);
    Ok(spec.linf_argmax())
}

/// The character strategy attaining [`bias_xor_form`]: both players output
/// the parity over the maximizing subset, Bob flipped when the coefficient
/// is negative (a zero coefficient counts as positive).
pub fn optimal_strategy(g: &BoolFn, q: &Density) -> Result<Strategy> {
    let n = g.arity();
    let spec = fwht(&pointwise_product(g, q)?);
    let (_, s_star) = spec.linf_argmax();
    let parity = BoolFn::from_fn(n, |z| chi(s_star, z) < 0.0)?;
    Ok(Strategy {
        a: parity.clone(),
        b: parity,
        sign_shift: spec.coeff(s_star) < 0.0,
    })
}

/// Side arity cap for the brute-force search (`2^{2^n}` Alice functions).
pub const BRUTEFORCE_MAX_ARITY: usize = 4;

/// Exact optimal bias by exhausting every deterministic strategy: for each
/// of the `2^{2^n}` Alice functions, Bob's best response per `y` is the sign
/// of the accumulated column, so the bias is a sum of absolute values.
pub fn bias_bruteforce(instance: &XorGameInstance) -> Result<f64> {
    use rayon::prelude::*;

    let n = instance.side_arity();
    if n > BRUTEFORCE_MAX_ARITY {
        return Err(Error::Capacity {
            what: "brute-force side arity",
            got: n,
            max: BRUTEFORCE_MAX_ARITY,
        });
    }
    let side = 1usize << n;
    // m[x][y] = mu(x,y) f(x,y)
    let mut m = vec![0.0f64; side * side];
    for x in 0..side {
        for y in 0..side {
            m[x * side + y] = instance.weight(x, y) * instance.game_value(x, y);
        }
    }
    let num_alice_fns: u64 = 1u64 << side;
    let best = (0..num_alice_fns)
        .into_par_iter()
        .map(|a_mask| {
            let mut bias = 0.0;
            for y in 0..side {
                let mut inner = 0.0;
                for x in 0..side {
                    let a = if a_mask >> x & 1 == 1 { -1.0 } else { 1.0 };
                    inner += m[x * side + y] * a;
                }
                bias += inner.abs();
            }
            bias
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Arity cap for the worst-distribution linear program.
pub const WORST_DIST_MAX_ARITY: usize = 10;

/// Agreement tolerance between the program value and the recomputed bias.
const CUT_TOL: f64 = 5e-7;

/// The distribution an adversary would pick: minimizes the optimal bias
/// `||fwht(g q)||_inf` over densities `q`.
///
/// One linear program with a `+/-` constraint pair per subset: variables
/// `q(z) >= 0` and the bound `t`, the normalization row `sum q = 2^n`, and
/// `+/- fwht(g q)(S) <= t` for every `S`; minimize `t`. The returned bias is
/// recomputed from the returned density by a fresh transform and must agree
/// with the program value, so the answer certifies itself.
///
/// The cut rows all share the right-hand side 0, which makes the program
/// degenerate enough to stall the simplex at the larger arities; beyond
/// arity 6 each cut row gets a deterministic per-subset right-hand-side
/// perturbation below 1e-7. The dual weights on the cut rows sum to one, so
/// the optimum moves by at most the perturbation itself, well inside the
/// certificate tolerance.
pub fn worst_distribution(g: &BoolFn) -> Result<(Density, f64)> {
    let n = g.arity();
    if n > WORST_DIST_MAX_ARITY {
        return Err(Error::Capacity {
            what: "worst-distribution arity",
            got: n,
            max: WORST_DIST_MAX_ARITY,
        });
    }
    let len = 1usize << n;

    // a game that only sees Hamming weight collapses to one variable per
    // weight class, which keeps the top arities instant
    if let Some(by_weight) = symmetric_profile(g) {
        return worst_distribution_symmetric(g, &by_weight);
    }

    let t_var = len; // index of the bound variable
    const PERTURBATION: f64 = 1e-7;
    let perturb = n > 6;
    let pert_seed = 0x9E1D_0000 ^ n as u64;

    let mut lp = LinearProgram::new(len + 1);
    lp.objective[t_var] = 1.0;
    for z in 0..len {
        lp.set_bounds(z, 0.0, f64::INFINITY);
    }
    lp.set_bounds(t_var, 0.0, f64::INFINITY);
    let mut ones = vec![1.0; len + 1];
    ones[t_var] = 0.0;
    lp.add_constraint(ones, Relation::Eq, len as f64);
    let scale = 1.0 / len as f64;
    for s in 0..len {
        let mut row = vec![0.0; len + 1];
        for (z, r) in row.iter_mut().enumerate().take(len) {
            *r = g.value(z) * chi(s, z) * scale;
        }
        row[t_var] = -1.0;
        let mut neg: Vec<f64> = row.iter().map(|r| -r).collect();
        neg[t_var] = -1.0;
        let (eps_pos, eps_neg) = if perturb {
            let mut st = Stream::new(pert_seed).split(s as u64);
            (st.next_f64() * PERTURBATION, st.next_f64() * PERTURBATION)
        } else {
            (0.0, 0.0)
        };
        lp.add_constraint(row, Relation::Le, eps_pos);
        lp.add_constraint(neg, Relation::Le, eps_neg);
    }

    let sol = linprog::solve(&lp)?;
    if sol.status != linprog::LPStatus::Optimal {
        return Err(Error::Solver(format!(
            "worst-distribution program reported {:?}",
            sol.status
        )));
    }
    let weights: Vec<f64> = sol.x[..len].iter().map(|&w| w.max(0.0)).collect();
    certify_worst(g, weights, sol.value)
}

/// `Some(values by Hamming weight)` when `g(z)` depends only on the weight
/// of `z`.
fn symmetric_profile(g: &BoolFn) -> Option<Vec<f64>> {
    let n = g.arity();
    let mut by_weight = vec![None::<bool>; n + 1];
    for z in 0..g.len() {
        let k = z.count_ones() as usize;
        match by_weight[k] {
            None => by_weight[k] = Some(g.bit(z)),
            Some(b) if b == g.bit(z) => {}
            Some(_) => return None,
        }
    }
    Some(
        by_weight
            .into_iter()
            .map(|b| {
                if b.expect("every weight occurs") {
                    -1.0
                } else {
                    1.0
                }
            })
            .collect(),
    )
}

/// Worst distribution for a weight-symmetric game. Averaging a feasible
/// density over coordinate permutations preserves the normalization and can
/// only shrink the max-coefficient objective (it is convex and permutation
/// invariant for symmetric `g`), so an optimizer constant on weight classes
/// exists and one variable per class suffices. The coefficient of a subset
/// then depends only on its size through the Krawtchouk sums
/// `sum_{|z| = k} chi_S(z)`.
fn worst_distribution_symmetric(g: &BoolFn, by_weight: &[f64]) -> Result<(Density, f64)> {
    let n = g.arity();
    let len = 1usize << n;
    let binom: Vec<f64> = {
        let mut row = vec![1.0f64];
        for _ in 0..n {
            let mut next = vec![1.0];
            for w in row.windows(2) {
                next.push(w[0] + w[1]);
            }
            next.push(1.0);
            row = next;
        }
        row
    };
    // kraw[j][k] = sum over |z| = k of chi_S(z) for any |S| = j
    let mut kraw = vec![vec![0.0f64; n + 1]; n + 1];
    for (j, row) in kraw.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let mut total = 0.0;
            for i in 0..=j.min(k) {
                if k - i <= n - j {
                    let term = choose(j, i) * choose(n - j, k - i);
                    total += if i % 2 == 0 { term } else { -term };
                }
            }
            *cell = total;
        }
    }

    // variables: class weights Q_0..Q_n, then t
    let t_var = n + 1;
    let mut lp = LinearProgram::new(n + 2);
    lp.objective[t_var] = 1.0;
    for k in 0..=n {
        lp.set_bounds(k, 0.0, f64::INFINITY);
    }
    lp.set_bounds(t_var, 0.0, f64::INFINITY);
    let mut ones = vec![1.0; n + 2];
    ones[t_var] = 0.0;
    lp.add_constraint(ones, Relation::Eq, len as f64);
    let scale = 1.0 / len as f64;
    for krow in &kraw {
        let mut row = vec![0.0; n + 2];
        for k in 0..=n {
            row[k] = by_weight[k] * krow[k] / binom[k] * scale;
        }
        row[t_var] = -1.0;
        let neg: Vec<f64> = row
            .iter()
            .enumerate()
            .map(|(i, r)| if i == t_var { -1.0 } else { -r })
            .collect();
        lp.add_constraint(row, Relation::Le, 0.0);
        lp.add_constraint(neg, Relation::Le, 0.0);
    }

    let sol = linprog::solve(&lp)?;
    if sol.status != linprog::LPStatus::Optimal {
        return Err(Error::Solver(format!(
            "symmetric worst-distribution program reported {:?}",
            sol.status
        )));
    }
    let weights: Vec<f64> = (0..len)
        .map(|z| {
            let k = z.count_ones() as usize;
            (sol.x[k] / binom[k]).max(0.0)
        })
        .collect();
    certify_worst(g, weights, sol.value)
}

fn choose(n: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Normalize the solver's weights into a density and require that its true
/// transform attains the program value.
fn certify_worst(g: &BoolFn, weights: Vec<f64>, program_value: f64) -> Result<(Density, f64)> {
    let q = Density::from_weights(g.arity(), weights)?;
    let spec = fwht(&pointwise_product(g, &q)?);
    let (linf, _) = spec.linf_argmax();
    if (linf - program_value).abs() > CUT_TOL {
        return Err(Error::Solver(format!(
            "worst-distribution certificate failed: program {program_value} vs recomputed {linf}"
        )));
    }
    Ok((q, linf))
}

fn pow_n(x: f64, n: u32) -> f64 {
    match i32::try_from(n) {
        Ok(i) => x.powi(i),
        Err(_) => x.powf(n as f64),
    }
}

/// Worst i.i.d. (product) input distribution for the n-bit equality game.
///
/// Returns `(lambda_star, beta)` where `lambda_star` is the per-bit
/// agreement probability minimizing the bias: the unique root in `[1/2, 1]`
/// of `4 l^n - (2l - 1)^n - 1`, found by bisection, and
/// `beta = 1 - 2 lambda_star^n`.
pub fn eq_worst_product_lambda(n: u32) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::domain(format!(
            "the product analysis needs n >= 2, got {n}"
        )));
    }
    let p = |lam: f64| 4.0 * pow_n(lam, n) - pow_n(2.0 * lam - 1.0, n) - 1.0;
    let mut lo = 0.5;
    let mut hi = 1.0;
    // p is increasing on [1/2, 1]; p(1/2) = 2^{2-n} - 1 <= 0, p(1) = 2
    let lambda_star = if p(lo) >= 0.0 {
        lo
    } else {
        for _ in 0..200 {
            if hi - lo <= 1e-12 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if p(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    Ok((lambda_star, 1.0 - 2.0 * pow_n(lambda_star, n)))
}

/// Bias of the two-protocol mixture for the equality game: the constant
/// answer with weight 1/3 and the random-inner-product protocol with weight
/// 2/3. `lambda` is the probability that the inputs agree; the mixture value
/// `(1/3)(1 - 2 lambda) + (2/3) lambda` is 1/3 for every `lambda`, which is
/// the whole point of the mixture.
pub fn eq_mixture_protocol_bias(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain(format!(
            "lambda must be a probability, got {lambda}"
        )));
    }
    Ok((1.0 - 2.0 * lambda) / 3.0 + 2.0 * lambda / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::norms;

    fn uniform_q(n: usize) -> Density {
        Density::uniform(n).unwrap()
    }

    fn random_density(n: usize, rng: &mut Stream) -> Density {
        let weights: Vec<f64> = (0..1usize << n).map(|_| rng.next_f64() + 1e-3).collect();
        Density::from_weights(n, weights).unwrap()
    }

    fn random_boolfn(n: usize, rng: &mut Stream) -> BoolFn {
        BoolFn::from_fn(n, |_| rng.coin()).unwrap()
    }

    /// The XOR function g(x XOR y) as an explicit pair function.
    fn xor_pair_fn(g: &BoolFn) -> BoolFn {
        let n = g.arity();
        let mask = (1usize << n) - 1;
        BoolFn::from_fn(2 * n, |zw| g.bit((zw ^ (zw >> n)) & mask)).unwrap()
    }

    #[test]
    fn parity_game_has_perfect_bias() {
        let g = BoolFn::parity(3).unwrap();
        let (beta, s) = bias_xor_form(&g, &uniform_q(3)).unwrap();
        assert!((beta - 1.0).abs() < 1e-15);
        assert_eq!(s, 0b111);
    }

    #[test]
    fn or2_game_bias_is_one_half() {
        let g = BoolFn::or(2).unwrap();
        let (beta, s) = bias_xor_form(&g, &uniform_q(2)).unwrap();
        assert!((beta - 0.5).abs() < 1e-15);
        assert_eq!(s, 0); // smallest of the tied maximizers
    }

    #[test]
    fn bent_game_saturates_the_minimum() {
        let g = BoolFn::bent2();
        let (beta, _) = bias_xor_form(&g, &uniform_q(2)).unwrap();
        assert!((beta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parity_strategy_is_parity() {
        let g = BoolFn::parity(2).unwrap();
        let strat = optimal_strategy(&g, &uniform_q(2)).unwrap();
        assert_eq!(strat.a, g);
        assert!(!strat.sign_shift);
        let inst = XorGameInstance::xor_form(g, uniform_q(2)).unwrap();
        assert!((strat.correlation(&inst) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn or2_strategy_plays_constants() {
        let g = BoolFn::or(2).unwrap();
        let strat = optimal_strategy(&g, &uniform_q(2)).unwrap();
        // maximizer is the empty set with coefficient -1/2
        assert_eq!(strat.a, BoolFn::constant(2, false).unwrap());
        assert!(strat.sign_shift);
        let inst = XorGameInstance::xor_form(g, uniform_q(2)).unwrap();
        assert!((strat.correlation(&inst) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn negated_parity_flips_the_shift() {
        let g = BoolFn::parity(2).unwrap().negate();
        let strat = optimal_strategy(&g, &uniform_q(2)).unwrap();
        assert!(strat.sign_shift);
        let inst = XorGameInstance::xor_form(g, uniform_q(2)).unwrap();
        assert!((strat.correlation(&inst) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strategy_matches_bias_on_random_instances() {
        let mut rng = Stream::new(31);
        for _ in 0..50 {
            let n = 1 + (rng.below(3) as usize);
            let g = random_boolfn(n, &mut rng);
            let q = random_density(n, &mut rng);
            let (beta, _) = bias_xor_form(&g, &q).unwrap();
            let strat = optimal_strategy(&g, &q).unwrap();
            let inst = XorGameInstance::xor_form(g, q).unwrap();
            assert!((strat.correlation(&inst) - beta).abs() < 1e-9);
        }
    }

    #[test]
    fn chsh_game_brute_force_bias() {
        // AND on one bit per side under the uniform distribution
        let inst = XorGameInstance::explicit(
            BoolFn::and(2).unwrap(),
            JointDistribution::uniform(1).unwrap(),
        )
        .unwrap();
        let beta = bias_bruteforce(&inst).unwrap();
        assert!((beta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parity_brute_force_is_perfect() {
        let g = BoolFn::parity(2).unwrap();
        let inst = XorGameInstance::xor_form(g, uniform_q(2)).unwrap();
        assert!((bias_bruteforce(&inst).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_agrees_with_spectral_bias() {
        let mut rng = Stream::new(5);
        for _ in 0..25 {
            let n = 1 + (rng.below(3) as usize);
            let g = random_boolfn(n, &mut rng);
            let q = random_density(n, &mut rng);
            let (beta, _) = bias_xor_form(&g, &q).unwrap();
            let inst = XorGameInstance::xor_form(g, q).unwrap();
            let brute = bias_bruteforce(&inst).unwrap();
            assert!(
                (beta - brute).abs() <= 1e-9,
                "spectral {beta} vs brute {brute}"
            );
        }
    }

    #[test]
    fn brute_force_respects_capacity() {
        let g = BoolFn::parity(5).unwrap();
        let inst = XorGameInstance::xor_form(g, uniform_q(5)).unwrap();
        assert!(matches!(
            bias_bruteforce(&inst),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn worst_distribution_of_parity_is_stuck_at_one() {
        // the top coefficient of g q is the mean of q, which is pinned at 1
        let (_, beta) = worst_distribution(&BoolFn::parity(3).unwrap()).unwrap();
        assert!((beta - 1.0).abs() < 1e-7);
    }

    /// Minimize max(|v0|, |v1|, |v2|) over symmetric densities on two bits
    /// by a grid over the weight simplex, refined locally. Independent of
    /// the LP path.
    fn or2_symmetric_grid_oracle() -> f64 {
        let value = |w0: f64, w1: f64, w2: f64| {
            let v0 = (w0 - 2.0 * w1 - w2) / 4.0;
            let v1 = (w0 + w2) / 4.0;
            let v2 = (w0 + 2.0 * w1 - w2) / 4.0;
            v0.abs().max(v1.abs()).max(v2.abs())
        };
        // probabilities (p0, p1, p2) of the three weight classes; w0 = 4 p0,
        // w1 = 2 p1, w2 = 4 p2
        let mut best = f64::INFINITY;
        let mut center = (1.0f64 / 3.0, 1.0f64 / 3.0);
        let mut radius = 0.5f64;
        let mut step = 1e-3f64;
        for _ in 0..3 {
            let (c0, c1) = center;
            let lo0 = (c0 - radius).max(0.0);
            let hi0 = (c0 + radius).min(1.0);
            let mut p0 = lo0;
            while p0 <= hi0 {
                let lo1 = (c1 - radius).max(0.0);
                let hi1 = (c1 + radius).min(1.0 - p0);
                let mut p1 = lo1;
                while p1 <= hi1 {
                    let p2 = 1.0 - p0 - p1;
                    let v = value(4.0 * p0, 2.0 * p1, 4.0 * p2);
                    if v < best {
                        best = v;
                        center = (p0, p1);
                    }
                    p1 += step;
                }
                p0 += step;
            }
            radius = step * 2.0;
            step *= 1e-2;
        }
        best
    }

    #[test]
    fn worst_distribution_of_or2_matches_grid_search() {
        let (q, beta) = worst_distribution(&BoolFn::or(2).unwrap()).unwrap();
        let oracle = or2_symmetric_grid_oracle();
        assert!((beta - oracle).abs() < 1e-6, "lp {beta} vs grid {oracle}");
        // returned density really achieves the reported value
        let spec = fwht(&pointwise_product(&BoolFn::or(2).unwrap(), &q).unwrap());
        assert!((norms(&spec).linf - beta).abs() < 1e-12);
    }

    /// Full-simplex grid refinement for an arbitrary two-variable game;
    /// covers the dense solver path, which weight-symmetric games bypass.
    fn asymmetric_grid_oracle(g: &BoolFn) -> f64 {
        let value = |w: [f64; 4]| {
            let prod: Vec<f64> = (0..4).map(|z| g.value(z) * w[z]).collect();
            (0..4usize)
                .map(|s| {
                    (0..4)
                        .map(|z| prod[z] * chi(s, z))
                        .sum::<f64>()
                        .abs()
                        / 4.0
                })
                .fold(0.0f64, f64::max)
        };
        let mut best = f64::INFINITY;
        let mut center = [0.25f64; 3];
        let mut radius = 0.5f64;
        let mut step = 1e-2f64;
        for _ in 0..4 {
            let mut p = [0.0f64; 3];
            let mut p0 = (center[0] - radius).max(0.0);
            while p0 <= (center[0] + radius).min(1.0) {
                let mut p1 = (center[1] - radius).max(0.0);
                while p1 <= (center[1] + radius).min(1.0 - p0) {
                    let mut p2 = (center[2] - radius).max(0.0);
                    while p2 <= (center[2] + radius).min(1.0 - p0 - p1) {
                        let w = [4.0 * p0, 4.0 * p1, 4.0 * p2, 4.0 * (1.0 - p0 - p1 - p2)];
                        let v = value(w);
                        if v < best {
                            best = v;
                            p = [p0, p1, p2];
                        }
                        p2 += step;
                    }
                    p1 += step;
                }
                p0 += step;
            }
            center = p;
            radius = step * 2.0;
            step *= 1e-1;
        }
        best
    }

    #[test]
    fn dense_path_matches_grid_search_on_an_asymmetric_game() {
        // g is -1 only at z = 1, so the two weight-1 points disagree and
        // the weight-class shortcut does not apply
        let g = BoolFn::from_table_bits(2, 0b0010).unwrap();
        let (q, beta) = worst_distribution(&g).unwrap();
        let oracle = asymmetric_grid_oracle(&g);
        assert!((beta - oracle).abs() < 1e-4, "lp {beta} vs grid {oracle}");
        let spec = fwht(&pointwise_product(&g, &q).unwrap());
        assert!((norms(&spec).linf - beta).abs() < 1e-12);
    }

    #[test]
    fn worst_distribution_of_or_shrinks_with_arity() {
        let mut last = f64::INFINITY;
        for n in 2..=5 {
            let (_, beta) = worst_distribution(&BoolFn::or(n).unwrap()).unwrap();
            assert!(beta >= 1.0 / 3.0 - 1e-7, "n={n}: {beta}");
            assert!(beta <= last + 1e-9, "n={n}: {beta} after {last}");
            last = beta;
        }
    }

    #[test]
    fn worst_distribution_arity_cap() {
        assert!(matches!(
            worst_distribution(&BoolFn::or(11).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn eq_product_lambda_small_cases() {
        // n = 2: the polynomial collapses to 4l - 2
        let (l2, b2) = eq_worst_product_lambda(2).unwrap();
        assert!((l2 - 0.5).abs() < 1e-12);
        assert!((b2 - 0.5).abs() < 1e-12);
        // n = 3: quadratic factor 2l^2 - 6l + 3
        let (l3, b3) = eq_worst_product_lambda(3).unwrap();
        let exact = (3.0 - 3.0f64.sqrt()) / 2.0;
        assert!((l3 - exact).abs() < 1e-10, "{l3} vs {exact}");
        assert!((b3 - (1.0 - 2.0 * exact.powi(3))).abs() < 1e-10);
    }

    #[test]
    fn eq_product_bias_approaches_its_limit() {
        let limit = 2.0 * 3.0f64.sqrt() - 3.0;
        let (_, beta) = eq_worst_product_lambda(1_000_000).unwrap();
        assert!((beta - limit).abs() < 1e-3, "{beta} vs {limit}");
    }

    #[test]
    fn product_adversary_is_weaker_than_the_general_one() {
        // the product-distribution bias stays above the 1/3 limit the
        // unrestricted adversary reaches
        for n in 2..=60 {
            let (_, beta) = eq_worst_product_lambda(n).unwrap();
            assert!(beta > 1.0 / 3.0, "n={n}: {beta}");
        }
        let limit = 2.0 * 3.0f64.sqrt() - 3.0;
        assert!(limit > 1.0 / 3.0);
    }

    #[test]
    fn eq_product_lambda_rejects_small_n() {
        assert!(eq_worst_product_lambda(1).is_err());
    }

    #[test]
    fn mixture_bias_is_constant_one_third() {
        for lambda in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            let b = eq_mixture_protocol_bias(lambda).unwrap();
            assert!((b - 1.0 / 3.0).abs() < 1e-15, "lambda {lambda}: {b}");
        }
        assert!(eq_mixture_protocol_bias(1.5).is_err());
    }

    #[test]
    fn xor_shaped_explicit_instances_match_their_xor_form() {
        let mut rng = Stream::new(17);
        for _ in 0..10 {
            let n = 1 + (rng.below(3) as usize);
            let g = random_boolfn(n, &mut rng);
            let q = random_density(n, &mut rng);
            let mu = JointDistribution::from_xor_density(&q).unwrap();
            let recovered = mu.xor_average().unwrap();
            for (a, b) in recovered.weights().iter().zip(q.weights()) {
                assert!((a - b).abs() < 1e-9);
            }
            let explicit = XorGameInstance::explicit(xor_pair_fn(&g), mu).unwrap();
            let (beta, _) = bias_xor_form(&g, &q).unwrap();
            let brute = bias_bruteforce(&explicit).unwrap();
            assert!((beta - brute).abs() < 1e-9, "{beta} vs {brute}");
        }
    }

    #[test]
    fn xor_averaging_never_helps_the_players() {
        // for arbitrary mu the explicit game is at least as easy as its
        // XOR-average; equality is specific to XOR-shaped mu
        let mut rng = Stream::new(23);
        for _ in 0..10 {
            let n = 1 + (rng.below(2) as usize);
            let g = random_boolfn(n, &mut rng);
            let len = 1usize << (2 * n);
            let raw: Vec<f64> = (0..len).map(|_| rng.next_f64()).collect();
            let sum: f64 = raw.iter().sum();
            let mu = JointDistribution::new(n, raw.into_iter().map(|p| p / sum).collect()).unwrap();
            let q = mu.xor_average().unwrap();
            let explicit = XorGameInstance::explicit(xor_pair_fn(&g), mu).unwrap();
            let brute = bias_bruteforce(&explicit).unwrap();
            let (avg_beta, _) = bias_xor_form(&g, &q).unwrap();
            assert!(brute >= avg_beta - 1e-9, "brute {brute} < avg {avg_beta}");
        }
    }

    /// Value of `min_mu max_strategy` for an explicit pair function, by an
    /// LP over distributions with one row per deterministic strategy pair.
    fn min_over_mu_bias(f: &BoolFn, n: usize) -> f64 {
        let side = 1usize << n;
        let pairs = 1usize << (2 * n);
        let t_var = pairs;
        let mut lp = LinearProgram::new(pairs + 1);
        lp.objective[t_var] = 1.0;
        for v in 0..pairs {
            lp.set_bounds(v, 0.0, f64::INFINITY);
        }
        lp.set_bounds(t_var, 0.0, f64::INFINITY);
        let mut ones = vec![1.0; pairs + 1];
        ones[t_var] = 0.0;
        lp.add_constraint(ones, Relation::Eq, 1.0);
        for a_mask in 0..1u64 << side {
            for b_mask in 0..1u64 << side {
                let mut row = vec![0.0; pairs + 1];
                for x in 0..side {
                    for y in 0..side {
                        let a = if a_mask >> x & 1 == 1 { -1.0 } else { 1.0 };
                        let b = if b_mask >> y & 1 == 1 { -1.0 } else { 1.0 };
                        row[x | y << n] = f.value(x | y << n) * a * b;
                    }
                }
                row[t_var] = -1.0;
                lp.add_constraint(row, Relation::Le, 0.0);
            }
        }
        linprog::solve(&lp).unwrap().value
    }

    #[test]
    fn inner_product_worst_distribution_is_uniform_at_small_arity() {
        // verified classically for one and two bits per side only
        for n in 1..=2usize {
            let f = BoolFn::inner_product(2 * n).unwrap();
            let min_bias = min_over_mu_bias(&f, n);
            let uniform_bias = bias_bruteforce(
                &XorGameInstance::explicit(f, JointDistribution::uniform(n).unwrap()).unwrap(),
            )
            .unwrap();
            assert!(
                (min_bias - uniform_bias).abs() < 1e-6,
                "n={n}: min {min_bias} vs uniform {uniform_bias}"
            );
        }
    }

    #[test]
    fn sampler_reproduces_the_distribution() {
        let mu = JointDistribution::new(1, vec![0.5, 0.25, 0.25, 0.0]).unwrap();
        let sampler = mu.sampler();
        let mut rng = Stream::new(3);
        let mut counts = [0u32; 4];
        let n = 200_000;
        for _ in 0..n {
            let (x, y) = sampler.sample(&mut rng);
            counts[x | y << 1] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let expect = mu.probs()[i];
            assert!((c as f64 / n as f64 - expect).abs() < 0.01, "cell {i}");
        }
    }
}
