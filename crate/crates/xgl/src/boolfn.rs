//! Boolean functions on the hypercube, densities, and Fourier spectra.
//!
//! Conventions used throughout the crate:
//!
//! * A point `z` of `{+1,-1}^n` is stored as a bitmask index: bit `i` of the
//!   index is set iff `z_i = -1`, i.e. iff the classical bit `i` is 1.
//! * Boolean outputs use the same encoding, `0 -> +1` and `1 -> -1`.
//! * A subset `S` of `[n]` is a bitmask, and the character
//!   `chi_S(z) = prod_{i in S} z_i` equals `(-1)^{popcount(S & z)}`, so the
//!   transform kernels are branch-free.

use crate::error::{Error, Result};

/// Largest supported arity; a truth table at this size is 16M entries.
pub const MAX_ARITY: usize = 24;

fn check_arity(n: usize) -> Result<()> {
    if n > MAX_ARITY {
        return Err(Error::Capacity {
            what: "arity",
            got: n,
            max: MAX_ARITY,
        });
    }
    Ok(())
}

fn check_same_arity(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::ArityMismatch { left, right });
    }
    Ok(())
}

/// `chi_S(z)` as `+1.0` or `-1.0`.
#[inline]
pub fn chi(subset: usize, z: usize) -> f64 {
    if ((subset & z).count_ones() & 1) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A `{+1,-1}`-valued function on `{+1,-1}^n`, stored as a packed truth table.
///
/// Bit `z` of the table is set iff `f(z) = -1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolFn {
    n: usize,
    table: Vec<u64>,
}

impl std::fmt::Debug for BoolFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BoolFn(n={}, table=", self.n)?;
        if self.n <= 4 {
            for z in 0..self.len() {
                write!(f, "{}", self.bit(z) as u8)?;
            }
        } else {
            write!(f, "{} bits", self.len())?;
        }
        write!(f, ")")
    }
}

impl BoolFn {
    /// Build from a predicate `output(z) == true` meaning `f(z) = -1`.
    pub fn from_fn(n: usize, mut output: impl FnMut(usize) -> bool) -> Result<Self> {
        check_arity(n)?;
        let len = 1usize << n;
        let mut table = vec![0u64; len.div_ceil(64)];
        for z in 0..len {
            if output(z) {
                table[z >> 6] |= 1 << (z & 63);
            }
        }
        Ok(BoolFn { n, table })
    }

    /// Build from the low `2^n` bits of `bits`; bit `z` set means `f(z) = -1`.
    /// Only defined for `n <= 6`.
    pub fn from_table_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::domain(format!(
                "from_table_bits supports n <= 6, got {n}"
            )));
        }
        Self::from_fn(n, |z| bits >> z & 1 == 1)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Number of table entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Raw output bit: `true` iff `f(z) = -1`.
    #[inline]
    pub fn bit(&self, z: usize) -> bool {
        debug_assert!(z < self.len());
        self.table[z >> 6] >> (z & 63) & 1 == 1
    }

    /// Evaluation in the `{+1,-1}` encoding.
    #[inline]
    pub fn value(&self, z: usize) -> f64 {
        if self.bit(z) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negate(&self) -> BoolFn {
        let mut table = self.table.clone();
        for w in &mut table {
            *w = !*w;
        }
        // mask tail bits beyond 2^n
        let tail = self.len() & 63;
        if tail != 0 {
            *table.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        BoolFn { n: self.n, table }
    }

    pub fn to_real(&self) -> RealFn {
        RealFn {
            n: self.n,
            values: (0..self.len()).map(|z| self.value(z)).collect(),
        }
    }

    /// Fourier spectrum of the `{+1,-1}` table.
    pub fn spectrum(&self) -> Spectrum {
        fwht(&self.to_real())
    }

    // ----- named function library ---------------------------------------

    /// Constant function; `negative` selects the constant `-1`.
    pub fn constant(n: usize, negative: bool) -> Result<Self> {
        Self::from_fn(n, |_| negative)
    }

    /// OR of the classical bits: `+1` at `z = 0`, `-1` elsewhere.
    pub fn or(n: usize) -> Result<Self> {
        Self::from_fn(n, |z| z != 0)
    }

    /// AND of the classical bits: `-1` only at the all-ones point.
    pub fn and(n: usize) -> Result<Self> {
        let full = (1usize << n) - 1;
        Self::from_fn(n, move |z| z == full)
    }

    /// XOR of the classical bits, i.e. the top Fourier character.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_fn(n, |z| z.count_ones() & 1 == 1)
    }

    /// Inner product of the two halves of the input; `n` must be even.
    /// This is the standard bent function on each even arity.
    pub fn inner_product(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "inner_product needs an even arity, got {n}"
            )));
        }
        let half = n / 2;
        let mask = (1usize << half) - 1;
        Self::from_fn(n, move |z| {
            let x = z & mask;
            let y = z >> half;
            (x & y).count_ones() & 1 == 1
        })
    }

    /// Equality of the two halves of the input; `n` must be even.
    /// Output 1 (encoded `-1`) iff the halves agree.
    pub fn equality(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "equality needs an even arity, got {n}"
            )));
        }
        let half = n / 2;
        let mask = (1usize << half) - 1;
        Self::from_fn(n, move |z| (z & mask) == (z >> half))
    }

    /// The 2-variable bent function (inner product on one bit pair).
    pub fn bent2() -> Self {
        Self::inner_product(2).expect("arity 2 is valid")
    }

    // ----- text format ----------------------------------------------------

    /// Parse the truth-table text format: a line `n=<k>` followed by either
    /// `2^k` characters of `0`/`1` in index order (`0 -> +1`) or a hex string
    /// of `2^k / 4` digits encoding the same bits (bit `z` of the integer is
    /// table entry `z`).
    pub fn from_table_text(text: &str) -> Result<Self> {
        let (n, body) = parse_header(text)?;
        check_arity(n)?;
        let len = 1usize << n;
        let body: String = body.split_whitespace().collect();
        if body.len() == len && body.bytes().all(|b| b == b'0' || b == b'1') {
            let bytes = body.as_bytes();
            return Self::from_fn(n, |z| bytes[z] == b'1');
        }
        // hex: most significant digit first, bit z of the value is entry z
        if len >= 4 && body.len() == len / 4 && body.bytes().all(|b| b.is_ascii_hexdigit()) {
            let digits: Vec<u32> = body
                .bytes()
                .map(|b| (b as char).to_digit(16).unwrap())
                .collect();
            let num_digits = digits.len();
            return Self::from_fn(n, |z| {
                let digit = digits[num_digits - 1 - z / 4];
                digit >> (z % 4) & 1 == 1
            });
        }
        Err(Error::parse(format!(
            "expected {len} binary characters or {} hex digits after n={n}",
            len / 4
        )))
    }

    pub fn to_table_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for z in 0..self.len() {
            out.push(if self.bit(z) { '1' } else { '0' });
        }
        out.push('\n');
        out
    }
}

fn parse_header(text: &str) -> Result<(usize, &str)> {
    let text = text.trim_start();
    let (first, rest) = match text.split_once('\n') {
        Some(pair) => pair,
        None => (text, ""),
    };
    let first = first.trim();
    let n = first
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(format!("expected header `n=<k>`, got `{first}`")))?
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::parse(format!("bad arity in header: {e}")))?;
    Ok((n, rest))
}

/// A real-valued function on `{+1,-1}^n` as a dense table.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFn {
    n: usize,
    values: Vec<f64>,
}

impl RealFn {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if values.len() != 1 << n {
            return Err(Error::domain(format!(
                "expected {} values for arity {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite value in table".to_string()));
        }
        Ok(RealFn { n, values })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, z: usize) -> f64 {
        self.values[z]
    }
}

/// A non-negative weight function `q` on `{+1,-1}^n` with `sum_z q(z) = 2^n`,
/// i.e. `2^{-n} q` is a probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    n: usize,
    weights: Vec<f64>,
}

/// Tolerance on the normalization `sum q = 2^n`.
pub const DENSITY_SUM_TOL: f64 = 1e-9;

impl Density {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        let len = 1usize << n;
        if weights.len() != len {
            return Err(Error::domain(format!(
                "expected {len} weights for arity {n}, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::domain(
                "density weights must be finite and non-negative".to_string(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - len as f64).abs() > DENSITY_SUM_TOL * len as f64 {
            return Err(Error::domain(format!(
                "density weights sum to {sum}, expected {len}"
            )));
        }
        Ok(Density { n, weights })
    }

    /// Uniform density, all weights 1.
    pub fn uniform(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(Density {
            n,
            weights: vec![1.0; 1 << n],
        })
    }

    /// Normalize arbitrary non-negative weights to sum `2^n`.
    pub fn from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::domain(
                "density weights must be finite and non-negative".to_string(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::domain("density weights sum to zero".to_string()));
        }
        let scale = (1u64 << n) as f64 / sum;
        Self::new(n, weights.into_iter().map(|w| w * scale).collect())
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, z: usize) -> f64 {
        self.weights[z]
    }

    /// Parse the density text format: `n=<k>` then `2^k` whitespace-separated
    /// decimal weights.
    pub fn from_text(text: &str) -> Result<Self> {
        let (n, body) = parse_header(text)?;
        check_arity(n)?;
        let weights: Vec<f64> = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| Error::parse(format!("bad density weight `{tok}`: {e}")))
            })
            .collect::<Result<_>>()?;
        Self::new(n, weights)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{w}"));
        }
        out.push('\n');
        out
    }
}

/// The `2^n` Fourier coefficients of a real function, indexed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

/// Coefficients at most this large in magnitude count as zero for the
/// support size and for sign decisions. FWHT of an integer table is accurate
/// to well below 1e-12, so this leaves a wide margin.
pub const ZERO_TOL: f64 = 1e-9;

/// Spectral norms of a [`Spectrum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralNorms {
    /// `sum_S |coeff(S)|`
    pub l1: f64,
    /// `max_S |coeff(S)|`
    pub linf: f64,
    /// number of coefficients with `|coeff(S)| > ZERO_TOL`
    pub l0: usize,
}

impl Spectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::domain(format!(
                "expected {} coefficients for arity {n}, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(Spectrum { n, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, subset: usize) -> f64 {
        self.coeffs[subset]
    }

    pub fn norms(&self) -> SpectralNorms {
        norms(self)
    }

    /// `(max_S |coeff|, lexicographically smallest maximizing S)`.
    pub fn linf_argmax(&self) -> (f64, usize) {
        let mut best = 0.0f64;
        let mut arg = 0usize;
        for (s, c) in self.coeffs.iter().enumerate() {
            if c.abs() > best {
                best = c.abs();
                arg = s;
            }
        }
        (best, arg)
    }
}

/// Walsh-Hadamard butterfly, unnormalized: `out(S) = sum_z v(z) chi_S(z)`.
fn wht_in_place(values: &mut [f64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        let mut i = 0;
        while i < len {
            for j in i..i + h {
                let x = values[j];
                let y = values[j + h];
                values[j] = x + y;
                values[j + h] = x - y;
            }
            i += 2 * h;
        }
        h *= 2;
    }
}

/// Forward transform: `coeff(S) = 2^{-n} sum_z f(z) chi_S(z)`.
pub fn fwht(f: &RealFn) -> Spectrum {
    let mut coeffs = f.values.clone();
    wht_in_place(&mut coeffs);
    let scale = 1.0 / (1u64 << f.n) as f64;
    for c in &mut coeffs {
        *c *= scale;
    }
    Spectrum { n: f.n, coeffs }
}

/// Inverse transform: `f(z) = sum_S coeff(S) chi_S(z)`. Exact (up to float
/// rounding) inverse of [`fwht`]; the normalization all sits in the forward
/// direction.
pub fn inverse_fwht(s: &Spectrum) -> RealFn {
    let mut values = s.coeffs.clone();
    wht_in_place(&mut values);
    RealFn { n: s.n, values }
}

/// `(l1, linf, l0)` of a spectrum, with [`ZERO_TOL`] deciding support.
pub fn norms(s: &Spectrum) -> SpectralNorms {
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    let mut l0 = 0usize;
    for c in &s.coeffs {
        let a = c.abs();
        l1 += a;
        linf = linf.max(a);
        if a > ZERO_TOL {
            l0 += 1;
        }
    }
    SpectralNorms { l1, linf, l0 }
}

/// The product table `(gq)(z) = g(z) q(z)`.
pub fn pointwise_product(g: &BoolFn, q: &Density) -> Result<RealFn> {
    check_same_arity(g.arity(), q.arity())?;
    let values = (0..g.len()).map(|z| g.value(z) * q.weight(z)).collect();
    Ok(RealFn {
        n: g.arity(),
        values,
    })
}

/// Tensor of two spectra on the disjoint union of their variables:
/// `coeff(S1 | S2 << n1) = s1(S1) * s2(S2)`.
pub fn tensor(s1: &Spectrum, s2: &Spectrum) -> Result<Spectrum> {
    let n = s1.n + s2.n;
    check_arity(n)?;
    let mut coeffs = vec![0.0; 1 << n];
    for (hi, c2) in s2.coeffs.iter().enumerate() {
        let base = hi << s1.n;
        for (lo, c1) in s1.coeffs.iter().enumerate() {
            coeffs[base | lo] = c1 * c2;
        }
    }
    Ok(Spectrum { n, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    /// Quadratic-time transform straight from the definition; the oracle the
    /// butterfly is checked against.
    fn naive_spectrum(f: &RealFn) -> Vec<f64> {
        let len = f.values().len();
        (0..len)
            .map(|s| {
                let sum: f64 = (0..len).map(|z| f.value(z) * chi(s, z)).sum();
                sum / len as f64
            })
            .collect()
    }

    fn random_boolfn(n: usize, rng: &mut Stream) -> BoolFn {
        BoolFn::from_fn(n, |_| rng.coin()).unwrap()
    }

    #[test]
    fn parity_spectrum_is_a_single_character() {
        let s = BoolFn::parity(2).unwrap().spectrum();
        assert_eq!(s.coeffs(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn or2_spectrum_matches_hand_computation() {
        // four-point sums: mean -1/2, each character +1/2
        let s = BoolFn::or(2).unwrap().spectrum();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (c, e) in s.coeffs().iter().zip(expect) {
            assert!((c - e).abs() < 1e-15, "{:?}", s.coeffs());
        }
        let naive = naive_spectrum(&BoolFn::or(2).unwrap().to_real());
        for (c, e) in s.coeffs().iter().zip(naive) {
            assert!((c - e).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_plus_one_spectrum() {
        let s = BoolFn::constant(3, false).unwrap().spectrum();
        assert_eq!(s.coeff(0), 1.0);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn fwht_matches_naive_on_random_tables() {
        let mut rng = Stream::new(11);
        for n in 0..=8 {
            let f = random_boolfn(n, &mut rng).to_real();
            let fast = fwht(&f);
            for (a, b) in fast.coeffs().iter().zip(naive_spectrum(&f)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_recovers_integer_tables_exactly() {
        let mut rng = Stream::new(22);
        for n in 0..=10 {
            let f = random_boolfn(n, &mut rng).to_real();
            let back = inverse_fwht(&fwht(&f));
            for (a, b) in back.values().iter().zip(f.values()) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn or_l1_norm_closed_form() {
        for n in 1..=5 {
            let got = BoolFn::or(n).unwrap().spectrum().norms().l1;
            let expect = 3.0 - 2f64.powi(2 - n as i32);
            assert!((got - expect).abs() < 1e-12, "n={n}: {got} vs {expect}");
        }
    }

    #[test]
    fn parity_norms() {
        let norms = BoolFn::parity(2).unwrap().spectrum().norms();
        assert_eq!(norms.l1, 1.0);
        assert_eq!(norms.linf, 1.0);
        assert_eq!(norms.l0, 1);
    }

    #[test]
    fn and2_is_bent() {
        let norms = BoolFn::and(2).unwrap().spectrum().norms();
        assert!((norms.linf - 0.5).abs() < 1e-15);
        assert_eq!(norms.l0, 4);
    }

    #[test]
    fn bent2_equals_and_up_to_sign_structure() {
        // same |coefficients|: every coefficient of a 2-variable bent
        // function has magnitude 1/2
        let s = BoolFn::bent2().spectrum();
        for c in s.coeffs() {
            assert!((c.abs() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn pointwise_product_examples() {
        let ones = pointwise_product(
            &BoolFn::constant(2, false).unwrap(),
            &Density::uniform(2).unwrap(),
        )
        .unwrap();
        assert_eq!(ones.values(), &[1.0, 1.0, 1.0, 1.0]);

        let or2 = BoolFn::or(2).unwrap();
        let with_uniform = pointwise_product(&or2, &Density::uniform(2).unwrap()).unwrap();
        assert_eq!(with_uniform.values(), or2.to_real().values());

        let point = Density::new(2, vec![4.0, 0.0, 0.0, 0.0]).unwrap();
        let restricted = pointwise_product(&or2, &point).unwrap();
        assert_eq!(restricted.values(), &[4.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn pointwise_product_rejects_arity_mismatch() {
        let err = pointwise_product(&BoolFn::or(2).unwrap(), &Density::uniform(3).unwrap());
        assert!(matches!(err, Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn tensor_of_parities_is_bigger_parity() {
        let p2 = BoolFn::parity(2).unwrap().spectrum();
        let t = tensor(&p2, &p2).unwrap();
        let p4 = BoolFn::parity(4).unwrap().spectrum();
        assert_eq!(t.coeffs(), p4.coeffs());
    }

    #[test]
    fn tensor_linf_is_multiplicative() {
        let s = BoolFn::or(2).unwrap().spectrum();
        let t = tensor(&s, &s).unwrap();
        assert!((t.norms().linf - 0.25).abs() < 1e-15);

        let mut rng = Stream::new(9);
        for _ in 0..20 {
            let a = random_boolfn(3, &mut rng).spectrum();
            let b = random_boolfn(2, &mut rng).spectrum();
            let prod = tensor(&a, &b).unwrap();
            assert!((prod.norms().linf - a.norms().linf * b.norms().linf).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_respects_capacity() {
        let s = BoolFn::or(13).unwrap().spectrum();
        assert!(matches!(tensor(&s, &s), Err(Error::Capacity { .. })));
    }

    #[test]
    fn arity_cap_enforced() {
        assert!(matches!(
            BoolFn::from_fn(25, |_| false),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn table_text_round_trip() {
        let f = BoolFn::from_table_bits(2, 0b1110).unwrap();
        let text = f.to_table_text();
        assert_eq!(text, "n=2\n0111\n");
        assert_eq!(BoolFn::from_table_text(&text).unwrap(), f);
    }

    #[test]
    fn table_text_hex_form() {
        // 16 bits as 4 hex digits, bit z of the value is entry z
        let f = BoolFn::from_table_bits(4, 0x8001).unwrap();
        let parsed = BoolFn::from_table_text("n=4\n8001\n").unwrap();
        assert_eq!(parsed, f);
        assert!(parsed.bit(0));
        assert!(parsed.bit(15));
        assert!(!parsed.bit(7));
    }

    #[test]
    fn table_text_rejects_garbage() {
        assert!(BoolFn::from_table_text("n=2\n01").is_err());
        assert!(BoolFn::from_table_text("m=2\n0101").is_err());
        assert!(BoolFn::from_table_text("n=2\n01015").is_err());
    }

    #[test]
    fn density_text_round_trip() {
        let q = Density::new(2, vec![2.0, 0.5, 1.0, 0.5]).unwrap();
        let parsed = Density::from_text(&q.to_text()).unwrap();
        assert_eq!(parsed, q);
    }

    #[test]
    fn density_validation() {
        assert!(Density::new(2, vec![1.0, 1.0, 1.0, 2.0]).is_err()); // sum 5
        assert!(Density::new(2, vec![-1.0, 3.0, 1.0, 1.0]).is_err()); // negative
        let q = Density::from_weights(2, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(q.weights(), &[2.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn equality_matches_or_of_xor() {
        // not-equal(x, y) == or(x XOR y), the link the equality game runs on
        let eq = BoolFn::equality(4).unwrap();
        let or2 = BoolFn::or(2).unwrap();
        for x in 0..4usize {
            for y in 0..4usize {
                let not_equal = !eq.bit(x | y << 2);
                assert_eq!(not_equal, or2.bit(x ^ y));
            }
        }
    }

    #[test]
    fn inner_product_is_bent_on_four_variables() {
        let norms = BoolFn::inner_product(4).unwrap().spectrum().norms();
        assert!((norms.linf - 0.25).abs() < 1e-15);
        assert_eq!(norms.l0, 16);
    }
}
