//! Approximate Fourier l1 norms, dual sign classes, and the exhaustive
//! classification of which functions attain the approximation limit.
//!
//! `approx_l1(f, e)` is the smallest spectral l1 norm among real functions
//! within `e` of `f` pointwise, computed as a linear program over the
//! function values and split transform variables. It never exceeds
//! `(1 - e) ||f^||_1`, and equality holds exactly when `f` belongs to its
//! own double dual sign class: the family built by taking signs of spectra
//! of functions that agree with `sign(f^)` wherever the coefficient is
//! nonzero. Membership is decided here twice, by direct LP feasibility and
//! through the tightness of the approximate norm, and the two verdicts are
//! required to agree.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::boolfn::{chi, fwht, norms, BoolFn, RealFn, ZERO_TOL};
use crate::error::{Error, Result};
use crate::linprog::{self, LinearProgram, Relation};
use crate::rng::Stream;

/// Largest arity the LP formulations accept (3 * 2^n variables).
pub const APPROX_MAX_ARITY: usize = 5;

/// Relative tolerance for the tightness verdict.
const TIGHT_TOL: f64 = 1e-6;

fn check_arity(n: usize) -> Result<()> {
    if n > APPROX_MAX_ARITY {
        return Err(Error::Capacity {
            what: "approximate-norm arity",
            got: n,
            max: APPROX_MAX_ARITY,
        });
    }
    Ok(())
}

/// Sign pattern of a spectrum read back through the position map
/// `x -> S_x`: `+1`/`-1` where the coefficient is decisively nonzero, free
/// where it vanishes. Under the bitmask encoding `S_x` is `x` itself, so
/// position `x` looks at coefficient `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSignClass {
    n: usize,
    signs: Vec<i8>,
}

impl DualSignClass {
    pub fn of(f: &BoolFn) -> Self {
        let spec = f.spectrum();
        let signs = spec
            .coeffs()
            .iter()
            .map(|&c| {
                if c > ZERO_TOL {
                    1
                } else if c < -ZERO_TOL {
                    -1
                } else {
                    0
                }
            })
            .collect();
        DualSignClass {
            n: f.arity(),
            signs,
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// `(position, fixed value)` pairs.
    pub fn fixed_positions(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(x, &s)| (x, s as f64))
    }

    pub fn free_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(x, _)| x)
    }

    pub fn num_free(&self) -> usize {
        self.signs.iter().filter(|&&s| s == 0).count()
    }

    /// The sign table itself, with free positions at 0.
    pub fn table(&self) -> RealFn {
        RealFn::new(self.n, self.signs.iter().map(|&s| s as f64).collect())
            .expect("sign table is well-formed")
    }
}

/// Outcome of [`approx_l1`].
#[derive(Clone, Debug)]
pub struct ApproxNormResult {
    pub epsilon: f64,
    pub value: f64,
    /// The minimizing function, validated to satisfy its pointwise box.
    pub witness: RealFn,
    /// Whether the optimum hit the ceiling `(1 - epsilon) ||f^||_1`.
    pub tight: bool,
}

/// Layout shared by the norm LPs: `count` function-value variables followed
/// by `2^n` positive and `2^n` negative transform parts, tied together by
/// one equality per subset.
fn transform_rows(
    lp: &mut LinearProgram,
    n: usize,
    value_cols: &[usize],
    value_positions: &[usize],
    rhs_fixed: impl Fn(usize) -> f64,
    pos0: usize,
    neg0: usize,
) {
    let len = 1usize << n;
    let scale = 1.0 / len as f64;
    for s in 0..len {
        let mut row = vec![0.0; lp.num_vars()];
        row[pos0 + s] = 1.0;
        row[neg0 + s] = -1.0;
        for (&col, &x) in value_cols.iter().zip(value_positions) {
            row[col] = -chi(s, x) * scale;
        }
        lp.add_constraint(row, Relation::Eq, rhs_fixed(s));
    }
}

/// The approximate Fourier l1 norm: minimize `||h^||_1` over all real `h`
/// with `|h(x) - f(x)| <= epsilon` everywhere. Exact LP formulation with
/// split transform variables; the witness's box constraints and spectrum are
/// re-checked after the solve instead of being trusted.
pub fn approx_l1(f: &BoolFn, epsilon: f64) -> Result<ApproxNormResult> {
    let n = f.arity();
    check_arity(n)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    let len = 1usize << n;
    let pos0 = len;
    let neg0 = 2 * len;
    let mut lp = LinearProgram::new(3 * len);
    for x in 0..len {
        let fx = f.value(x);
        lp.set_bounds(x, fx - epsilon, fx + epsilon);
        lp.objective[pos0 + x] = 1.0;
        lp.objective[neg0 + x] = 1.0;
        lp.set_bounds(pos0 + x, 0.0, f64::INFINITY);
        lp.set_bounds(neg0 + x, 0.0, f64::INFINITY);
    }
    let cols: Vec<usize> = (0..len).collect();
    transform_rows(&mut lp, n, &cols, &cols, |_| 0.0, pos0, neg0);

    let sol = linprog::solve(&lp)?;
    if sol.status != linprog::LPStatus::Optimal {
        return Err(Error::Solver(format!(
            "approximate-norm program reported {:?}",
            sol.status
        )));
    }
    let witness = RealFn::new(n, sol.x[..len].to_vec())?;
    for x in 0..len {
        if (witness.value(x) - f.value(x)).abs() > epsilon + 1e-7 {
            return Err(Error::Solver(format!(
                "witness leaves its box at position {x}"
            )));
        }
    }
    let check = norms(&fwht(&witness)).l1;
    if (check - sol.value).abs() > 1e-6 * (1.0 + sol.value.abs()) {
        return Err(Error::Solver(format!(
            "witness spectrum norm {check} disagrees with LP value {}",
            sol.value
        )));
    }
    let ceiling = (1.0 - epsilon) * norms(&f.spectrum()).l1;
    let tight = (sol.value - ceiling).abs() <= TIGHT_TOL * ceiling.max(1.0);
    Ok(ApproxNormResult {
        epsilon,
        value: sol.value,
        witness,
        tight,
    })
}

/// Minimum spectral l1 norm over the dual sign class of `f`: values pinned
/// to `sign(f^(S_x))` where that coefficient is nonzero, free in `[-1, 1]`
/// elsewhere.
pub fn dual_sign_min_l1(f: &BoolFn) -> Result<f64> {
    let n = f.arity();
    check_arity(n)?;
    let len = 1usize << n;
    let class = DualSignClass::of(f);
    let free: Vec<usize> = class.free_positions().collect();
    let fixed: Vec<(usize, f64)> = class.fixed_positions().collect();

    let pos0 = free.len();
    let neg0 = free.len() + len;
    let mut lp = LinearProgram::new(free.len() + 2 * len);
    for (col, _) in free.iter().enumerate() {
        lp.set_bounds(col, -1.0, 1.0);
    }
    for s in 0..len {
        lp.objective[pos0 + s] = 1.0;
        lp.objective[neg0 + s] = 1.0;
        lp.set_bounds(pos0 + s, 0.0, f64::INFINITY);
        lp.set_bounds(neg0 + s, 0.0, f64::INFINITY);
    }
    let cols: Vec<usize> = (0..free.len()).collect();
    let scale = 1.0 / len as f64;
    transform_rows(
        &mut lp,
        n,
        &cols,
        &free,
        |s| {
            fixed
                .iter()
                .map(|&(x, v)| v * chi(s, x) * scale)
                .sum::<f64>()
        },
        pos0,
        neg0,
    );

    let sol = linprog::solve(&lp)?;
    if sol.status != linprog::LPStatus::Optimal {
        return Err(Error::Solver(format!(
            "dual-sign-norm program reported {:?}",
            sol.status
        )));
    }
    Ok(sol.value)
}

/// Decide whether `f` lies in its double dual sign class, twice over:
///
/// * directly, as LP feasibility of a `g` that matches `sign(f^(S_x))` on
///   fixed positions, stays in `[-1, 1]` on free ones, and has
///   `f(x) g^(S_x) >= 0` everywhere (the `>= 0` encoding is exact because
///   positions with a vanishing coefficient are unconstrained);
/// * independently, through the tightness of [`approx_l1`] at
///   `epsilon = 0.25` (the verdict does not depend on which epsilon is
///   used).
///
/// The two routes must agree; disagreement surfaces as
/// [`Error::Inconsistency`] rather than being resolved silently. On a yes,
/// the certificate `g` is returned after its constraints are re-checked.
pub fn in_double_dual(f: &BoolFn) -> Result<(bool, Option<RealFn>)> {
    let n = f.arity();
    check_arity(n)?;
    let len = 1usize << n;
    let class = DualSignClass::of(f);
    let free: Vec<usize> = class.free_positions().collect();

    let (member, certificate) = if free.is_empty() {
        // the class has a single element: check its spectrum directly
        let g = class.table();
        let spec = fwht(&g);
        let ok = (0..len).all(|x| f.value(x) * spec.coeff(x) >= -ZERO_TOL);
        (ok, ok.then_some(g))
    } else {
        let mut lp = LinearProgram::new(free.len());
        for col in 0..free.len() {
            lp.set_bounds(col, -1.0, 1.0);
        }
        let fixed: Vec<(usize, f64)> = class.fixed_positions().collect();
        for x in 0..len {
            let fx = f.value(x);
            let row: Vec<f64> = free.iter().map(|&z| fx * chi(x, z)).collect();
            let rhs: f64 = -fx * fixed.iter().map(|&(z, v)| v * chi(x, z)).sum::<f64>();
            lp.add_constraint(row, Relation::Ge, rhs);
        }
        match linprog::feasible(&lp)? {
            Some(witness) => {
                let mut values = class.table().values().to_vec();
                for (col, &z) in free.iter().enumerate() {
                    values[z] = witness[col].clamp(-1.0, 1.0);
                }
                let g = RealFn::new(n, values)?;
                let spec = fwht(&g);
                for x in 0..len {
                    if f.value(x) * spec.coeff(x) < -1e-7 {
                        return Err(Error::Solver(format!(
                            "feasibility witness violates the sign system at {x}"
                        )));
                    }
                }
                (true, Some(g))
            }
            None => (false, None),
        }
    };

    let tight_route = approx_l1(f, 0.25)?.tight;
    if member != tight_route {
        return Err(Error::Inconsistency(format!(
            "double-dual membership disagrees: feasibility says {member}, \
             tightness says {tight_route}"
        )));
    }
    Ok((member, certificate))
}

/// How [`classify_all`] walks the function space.
#[derive(Clone, Debug)]
pub enum ClassifyMode {
    /// Every function index in order, up to the budget if one is set.
    Full,
    /// `count` indices drawn uniformly with the given seed.
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub mode: ClassifyMode,
    /// Cap on examined functions in [`ClassifyMode::Full`]; mandatory at
    /// arity 5, where the full space has 2^32 members.
    pub budget: Option<u64>,
    /// Directory for per-range progress files; completed ranges are skipped
    /// on resume, so partial counts only ever grow.
    pub checkpoint_dir: Option<PathBuf>,
    /// Range granularity for parallelism and checkpointing.
    pub checkpoint_interval: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            mode: ClassifyMode::Full,
            budget: None,
            checkpoint_dir: None,
            checkpoint_interval: 1 << 24,
        }
    }
}

/// Classification outcome. `exact` is set only when every function of the
/// space was examined; otherwise `members` is a lower bound over the
/// `examined` prefix or sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyCounts {
    pub members: u64,
    pub examined: u64,
    pub total: u64,
    pub exact: bool,
}

fn checkpoint_path(dir: &std::path::Path, n: usize, start: u64, end: u64) -> PathBuf {
    dir.join(format!("ckpt_{n}_{start}_{end}.txt"))
}

fn read_checkpoint(path: &std::path::Path) -> Result<Option<u64>> {
    match std::fs::read_to_string(path) {
        Ok(text) => {
            let members = text
                .trim()
                .strip_prefix("members=")
                .ok_or_else(|| Error::parse(format!("bad checkpoint file {}", path.display())))?
                .parse::<u64>()
                .map_err(|e| Error::parse(format!("bad checkpoint count: {e}")))?;
            Ok(Some(members))
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn write_checkpoint(path: &std::path::Path, members: u64) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, format!("members={members}\n"))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Count double-dual members across the space of all `2^{2^n}` functions.
/// Ranges of `checkpoint_interval` indices are processed independently (and
/// in parallel); with a checkpoint directory, finished ranges persist and a
/// rerun resumes after them.
pub fn classify_all(n: usize, opts: &ClassifyOptions) -> Result<ClassifyCounts> {
    check_arity(n)?;
    let table_bits = 1u32 << n;
    let total: u64 = if table_bits >= 64 {
        u64::MAX
    } else {
        1u64 << table_bits
    };

    match &opts.mode {
        ClassifyMode::Sample { count, seed } => {
            let members = (0..*count)
                .into_par_iter()
                .map(|i| -> Result<u64> {
                    let mut rng = Stream::new(*seed).split(i);
                    let idx = rng.below(total);
                    in_double_dual(&BoolFn::from_table_bits(n, idx)?).map(|(m, _)| m as u64)
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(ClassifyCounts {
                members,
                examined: *count,
                total,
                exact: false,
            })
        }
        ClassifyMode::Full => {
            if n >= 5 && opts.budget.is_none() {
                return Err(Error::domain(
                    "full classification at arity 5 scans 2^32 functions; \
                     set an explicit budget to opt in",
                ));
            }
            let span = opts.budget.map_or(total, |b| b.min(total));
            let interval = opts.checkpoint_interval.max(1);
            let num_ranges = span.div_ceil(interval);
            let members = (0..num_ranges)
                .into_par_iter()
                .map(|k| -> Result<u64> {
                    let start = k * interval;
                    let end = (start + interval).min(span);
                    if let Some(dir) = &opts.checkpoint_dir {
                        if let Some(done) = read_checkpoint(&checkpoint_path(dir, n, start, end))? {
                            return Ok(done);
                        }
                    }
                    let mut count = 0u64;
                    for idx in start..end {
                        let (member, _) = in_double_dual(&BoolFn::from_table_bits(n, idx)?)?;
                        count += member as u64;
                    }
                    if let Some(dir) = &opts.checkpoint_dir {
                        write_checkpoint(&checkpoint_path(dir, n, start, end), count)?;
                    }
                    Ok(count)
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(ClassifyCounts {
                members,
                examined: span,
                total,
                exact: span == total,
            })
        }
    }
}

/// Per-function record used for tabular output.
#[derive(Clone, Copy, Debug)]
pub struct FnReport {
    pub index: u64,
    pub member: bool,
    pub l1: f64,
    pub approx_l1: f64,
    pub tight: bool,
}

pub fn function_report(n: usize, index: u64, epsilon: f64) -> Result<FnReport> {
    let f = BoolFn::from_table_bits(n, index)?;
    let (member, _) = in_double_dual(&f)?;
    let approx = approx_l1(&f, epsilon)?;
    Ok(FnReport {
        index,
        member,
        l1: norms(&f.spectrum()).l1,
        approx_l1: approx.value,
        tight: approx.tight,
    })
}
