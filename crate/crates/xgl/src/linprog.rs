//! Dense linear programming by the two-phase simplex method.
//!
//! Self-contained solver sized for the spectral problems in this crate:
//! dense tableaus, a few thousand variables at most. General-form programs
//! (free variables, two-sided bounds, mixed relations) are reduced to
//! standard form internally; one artificial column per row doubles as a
//! reader for the dual values, since the artificial block of the final
//! tableau is exactly the basis inverse.
//!
//! Pivoting uses Dantzig's rule and switches to Bland's rule after
//! [`DANTZIG_LIMIT`] iterations so degenerate programs cannot cycle. Every
//! optimal answer is certified before it is returned: primal residuals,
//! duality gap, and complementary slackness are all checked, and a failed
//! certificate surfaces as [`Error::Solver`] rather than a wrong answer.

use crate::error::{Error, Result};

/// Constraint sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One dense constraint row `coeffs . x  (rel)  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A dense linear program: minimize `objective . x` subject to the
/// constraint rows and per-variable bounds (infinities allowed).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

/// Hard cap on problem size; the dense tableau is quadratic in this.
pub const MAX_VARIABLES: usize = 20_000;

/// Consecutive degenerate pivots tolerated under Dantzig pricing before
/// Bland's rule takes over (until the objective moves again).
pub const DANTZIG_LIMIT: usize = 5_000;

const MAX_ITERATIONS: usize = 200_000;
const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const SLACK_COMPL_TOL: f64 = 1e-6;

impl LinearProgram {
    /// Program over `num_vars` free variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n > MAX_VARIABLES {
            return Err(Error::Capacity {
                what: "LP variables",
                got: n,
                max: MAX_VARIABLES,
            });
        }
        if self.bounds.len() != n {
            return Err(Error::domain("bounds length does not match objective"));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("non-finite objective coefficient"));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::domain(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::domain(format!(
                    "constraint {i} has a non-finite coefficient"
                )));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() {
                return Err(Error::domain(format!("variable {j} has NaN bound")));
            }
        }
        Ok(())
    }

    /// Largest violation of the constraint rows and bounds at `x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.constraints {
            let v: f64 = row.coeffs.iter().zip(x).map(|(a, xj)| a * xj).sum();
            let viol = match row.relation {
                Relation::Le => v - row.rhs,
                Relation::Ge => row.rhs - v,
                Relation::Eq => (v - row.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for (&(lo, hi), &xj) in self.bounds.iter().zip(x) {
            worst = worst.max(lo - xj).max(xj - hi);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver answer. `x`, `value` and `duals` are meaningful only when
/// `status == Optimal`; `duals[i]` multiplies constraint row `i`.
#[derive(Clone, Debug)]
pub struct LPSolution {
    pub status: LPStatus,
    pub x: Vec<f64>,
    pub value: f64,
    pub duals: Vec<f64>,
}

impl LPSolution {
    fn non_optimal(status: LPStatus) -> Self {
        LPSolution {
            status,
            x: Vec::new(),
            value: f64::NAN,
            duals: Vec::new(),
        }
    }
}

/// How each original variable maps into the standard-form column space.
enum VarMap {
    /// `x = shift + col`
    Shift { col: usize, shift: f64 },
    /// `x = shift - col`
    Negated { col: usize, shift: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
    /// pinned by equal bounds
    Fixed { value: f64 },
}

struct Tableau {
    /// flat row-major tableau; constraint rows, then the phase-2 objective
    /// row, then the phase-1 objective row
    t: Vec<f64>,
    width: usize,
    rows: usize,
    /// enterable columns are `0..art0`; artificial columns sit above
    art0: usize,
    basis: Vec<usize>,
    dead: Vec<bool>,
    scratch: Vec<f64>,
}

/// Entry count above which the pivot row-reduction runs on the rayon pool.
const PARALLEL_PIVOT_ENTRIES: usize = 1 << 20;

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn pivot(&mut self, r: usize, q: usize) {
        use rayon::prelude::*;

        let w = self.width;
        let piv = self.t[r * w + q];
        let row = &mut self.t[r * w..(r + 1) * w];
        for v in row.iter_mut() {
            *v /= piv;
        }
        row[q] = 1.0;
        self.scratch.copy_from_slice(&self.t[r * w..(r + 1) * w]);
        let total = self.rows + 2;
        let scratch = &self.scratch;
        let reduce = |(i, row): (usize, &mut [f64])| {
            if i == r {
                return;
            }
            let factor = row[q];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(scratch) {
                    *v -= factor * p;
                }
                row[q] = 0.0;
            }
        };
        if total * w >= PARALLEL_PIVOT_ENTRIES {
            self.t[..total * w]
                .par_chunks_mut(w)
                .enumerate()
                .for_each(reduce);
        } else {
            self.t[..total * w]
                .chunks_mut(w)
                .enumerate()
                .for_each(reduce);
        }
        // keep rounding drift from driving basic values negative, which
        // would let the ratio test run backwards
        let rhs_col = w - 1;
        for i in 0..self.rows {
            let v = self.t[i * w + rhs_col];
            if v < 0.0 && v > -1e-11 {
                self.t[i * w + rhs_col] = 0.0;
            }
        }
        self.basis[r] = q;
    }

    /// One simplex phase on the given objective row. Returns `None` when the
    /// phase reached optimality, `Some(q)` when column `q` proved the
    /// objective unbounded below.
    ///
    /// Pricing is Dantzig's rule while the objective moves; after
    /// [`DANTZIG_LIMIT`] consecutive degenerate pivots it falls back to
    /// Bland's rule (which cannot cycle) until progress resumes.
    fn run_phase(&mut self, obj_row: usize, iterations: &mut usize) -> Result<Option<usize>> {
        let rhs_col = self.width - 1;
        let mut stalled = 0usize;
        loop {
            *iterations += 1;
            if *iterations > MAX_ITERATIONS {
                return Err(Error::Solver(format!(
                    "iteration limit {MAX_ITERATIONS} exceeded"
                )));
            }
            let bland = stalled >= DANTZIG_LIMIT;

            // entering column
            let mut entering = None;
            let mut best = -PIVOT_TOL;
            for q in 0..self.art0 {
                let d = self.at(obj_row, q);
                if d < best {
                    entering = Some(q);
                    if bland {
                        break;
                    }
                    best = d;
                }
                if bland && entering.is_some() {
                    break;
                }
            }
            let q = match entering {
                Some(q) => q,
                None => return Ok(None),
            };

            // leaving row by minimum ratio; slightly negative basic values
            // count as zero so the objective can never move backwards
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                if self.dead[r] {
                    continue;
                }
                let a = self.at(r, q);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.at(r, rhs_col).max(0.0) / a;
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - 1e-12
                            || ((ratio - lratio).abs() <= 1e-12 && self.basis[r] < self.basis[lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
            match leave {
                Some((r, _)) => {
                    let before = self.at(obj_row, rhs_col);
                    if std::env::var_os("XGL_LP_TRACE").is_some() && iterations.is_multiple_of(5000)
                    {
                        eprintln!(
                            "lp trace: iter={} obj_row={} obj={:.12e} stalled={} q={} r={} piv={:.3e} d={:.3e}",
                            *iterations,
                            obj_row,
                            -before,
                            stalled,
                            q,
                            r,
                            self.at(r, q),
                            self.at(obj_row, q),
                        );
                    }
                    self.pivot(r, q);
                    let after = self.at(obj_row, rhs_col);
                    if (after - before).abs() > 1e-12 * (1.0 + before.abs()) {
                        stalled = 0;
                    } else {
                        stalled += 1;
                    }
                }
                None => return Ok(Some(q)),
            }
        }
    }
}

/// Solve the program. Infeasibility and unboundedness are reported through
/// [`LPSolution::status`]; numerical breakdown (cycling past the iteration
/// cap, or a failed optimality certificate) is an [`Error::Solver`].
pub fn solve(lp: &LinearProgram) -> Result<LPSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    // ---- variable transformation to x' >= 0 ------------------------------
    let mut maps = Vec::with_capacity(n);
    let mut cols = 0usize;
    // (col, upper) rows to add for two-sided bounds
    let mut ub_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &lp.bounds {
        if lo > hi {
            return Ok(LPSolution::non_optimal(LPStatus::Infeasible));
        }
        let map = match (lo.is_finite(), hi.is_finite()) {
            (true, true) if lo == hi => VarMap::Fixed { value: lo },
            (true, true) => {
                let col = cols;
                cols += 1;
                ub_rows.push((col, hi - lo));
                VarMap::Shift { col, shift: lo }
            }
            (true, false) => {
                let col = cols;
                cols += 1;
                VarMap::Shift { col, shift: lo }
            }
            (false, true) => {
                let col = cols;
                cols += 1;
                VarMap::Negated { col, shift: hi }
            }
            (false, false) => {
                let pos = cols;
                let neg = cols + 1;
                cols += 2;
                VarMap::Split { pos, neg }
            }
        };
        maps.push(map);
    }

    // transformed objective and its constant part
    let mut cost = vec![0.0; cols];
    let mut obj_shift = 0.0;
    for (j, map) in maps.iter().enumerate() {
        let c = lp.objective[j];
        match *map {
            VarMap::Shift { col, shift } => {
                cost[col] += c;
                obj_shift += c * shift;
            }
            VarMap::Negated { col, shift } => {
                cost[col] -= c;
                obj_shift += c * shift;
            }
            VarMap::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
            VarMap::Fixed { value } => obj_shift += c * value,
        }
    }

    // transformed rows: original constraints then upper-bound rows
    let m = lp.constraints.len() + ub_rows.len();
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
    for con in &lp.constraints {
        let mut coeffs = vec![0.0; cols];
        let mut rhs = con.rhs;
        for (j, map) in maps.iter().enumerate() {
            let a = con.coeffs[j];
            if a == 0.0 {
                continue;
            }
            match *map {
                VarMap::Shift { col, shift } => {
                    coeffs[col] += a;
                    rhs -= a * shift;
                }
                VarMap::Negated { col, shift } => {
                    coeffs[col] -= a;
                    rhs -= a * shift;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
                VarMap::Fixed { value } => rhs -= a * value,
            }
        }
        rows.push((coeffs, con.relation, rhs));
    }
    for &(col, ub) in &ub_rows {
        let mut coeffs = vec![0.0; cols];
        coeffs[col] = 1.0;
        rows.push((coeffs, Relation::Le, ub));
    }

    // ---- standard form: slacks, b >= 0, artificials only where needed -----
    //
    // A row whose slack lands with coefficient +1 after normalization
    // starts with that slack basic. Equality rows, and inequalities whose
    // slack is negated, start on an artificial instead. Either way the
    // starting basic column of each row reads that row's dual off the
    // objective row at the end.
    let num_slacks = rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let slack0 = cols;
    let art0 = cols + num_slacks;
    let mut flipped = vec![false; m];
    let mut slack_col = vec![usize::MAX; m];
    let mut needs_art = vec![false; m];
    {
        let mut slack_idx = 0usize;
        for (i, (_, rel, rhs)) in rows.iter().enumerate() {
            flipped[i] = *rhs < 0.0;
            let slack_sign = match rel {
                Relation::Eq => 0.0,
                Relation::Le => 1.0,
                Relation::Ge => -1.0,
            } * if flipped[i] { -1.0 } else { 1.0 };
            if *rel != Relation::Eq {
                slack_col[i] = slack0 + slack_idx;
                slack_idx += 1;
            }
            needs_art[i] = slack_sign <= 0.0;
        }
    }
    let num_arts = needs_art.iter().filter(|&&a| a).count();
    let width = art0 + num_arts + 1;
    let rhs_col = width - 1;

    let mut tab = Tableau {
        t: vec![0.0; width * (m + 2)],
        width,
        rows: m,
        art0,
        basis: vec![0; m],
        dead: vec![false; m],
        scratch: vec![0.0; width],
    };
    // dual reader column per row: its artificial, or its +1 slack
    let mut reader = vec![0usize; m];
    let mut b_scale = 1.0f64;
    {
        let mut art_idx = 0usize;
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let sign = if flipped[i] { -1.0 } else { 1.0 };
            let row = &mut tab.t[i * width..(i + 1) * width];
            for (c, v) in coeffs.iter().enumerate() {
                row[c] = sign * v;
            }
            if *rel != Relation::Eq {
                let s = if *rel == Relation::Le { 1.0 } else { -1.0 };
                row[slack_col[i]] = sign * s;
            }
            if needs_art[i] {
                let art = art0 + art_idx;
                art_idx += 1;
                row[art] = 1.0;
                tab.basis[i] = art;
                reader[i] = art;
            } else {
                tab.basis[i] = slack_col[i];
                reader[i] = slack_col[i];
            }
            row[rhs_col] = sign * rhs;
            b_scale = b_scale.max(sign * rhs);
        }
    }

    let zrow = m;
    let wrow = m + 1;
    for (c, v) in cost.iter().enumerate() {
        tab.t[zrow * width + c] = *v;
    }
    // phase-1 reduced costs: only artificial-started rows carry cost, so
    // every column is priced at minus its sum over those rows
    for c in (0..art0).chain([rhs_col]) {
        let mut sum = 0.0;
        for (i, needs) in needs_art.iter().enumerate() {
            if *needs {
                sum += tab.at(i, c);
            }
        }
        tab.t[wrow * width + c] = -sum;
    }

    // ---- phase 1 -----------------------------------------------------------
    let mut iterations = 0usize;
    if tab.run_phase(wrow, &mut iterations)?.is_some() {
        return Err(Error::Solver(
            "phase-1 objective unbounded; tableau corrupt".to_string(),
        ));
    }
    let infeasibility = -tab.at(wrow, rhs_col);
    if infeasibility > FEAS_TOL * b_scale {
        return Ok(LPSolution::non_optimal(LPStatus::Infeasible));
    }

    // drive basic artificials out, or mark their rows redundant
    for r in 0..m {
        if tab.basis[r] < art0 {
            continue;
        }
        let mut pivot_col = None;
        for q in 0..art0 {
            if tab.at(r, q).abs() > FEAS_TOL {
                pivot_col = Some(q);
                break;
            }
        }
        match pivot_col {
            Some(q) => tab.pivot(r, q),
            None => tab.dead[r] = true,
        }
    }

    // ---- phase 2 -----------------------------------------------------------
    if tab.run_phase(zrow, &mut iterations)?.is_some() {
        return Ok(LPSolution::non_optimal(LPStatus::Unbounded));
    }

    // ---- extraction --------------------------------------------------------
    let mut x_std = vec![0.0; art0];
    for r in 0..m {
        if tab.basis[r] < art0 {
            x_std[tab.basis[r]] = tab.at(r, rhs_col);
        }
    }
    let value_std = -tab.at(zrow, rhs_col);
    let value = value_std + obj_shift;

    let mut x = vec![0.0; n];
    for (j, map) in maps.iter().enumerate() {
        x[j] = match *map {
            VarMap::Shift { col, shift } => shift + x_std[col],
            VarMap::Negated { col, shift } => shift - x_std[col],
            VarMap::Split { pos, neg } => x_std[pos] - x_std[neg],
            VarMap::Fixed { value } => value,
        };
    }

    // duals: the reader column of each row (its artificial, or its +1
    // slack, both with zero cost) carries -y in the objective row
    let mut duals_std = vec![0.0; m];
    for i in 0..m {
        duals_std[i] = -tab.at(zrow, reader[i]);
    }

    // ---- certificates ------------------------------------------------------
    let residual = lp.residual(&x);
    if residual > FEAS_TOL * (1.0 + b_scale) {
        return Err(Error::Solver(format!(
            "optimal basis violates primal feasibility by {residual:.3e}"
        )));
    }
    // duality gap in standard-form space: value_std must equal y . b_std
    let mut dual_obj = 0.0;
    for i in 0..m {
        dual_obj += duals_std[i] * tab_rhs_initial(&rows, flipped[i], i);
    }
    let gap = (value_std - dual_obj).abs();
    if gap > FEAS_TOL * (1.0 + value_std.abs()) {
        return Err(Error::Solver(format!(
            "duality gap {gap:.3e} exceeds tolerance"
        )));
    }
    // complementary slackness on the original rows
    let mut duals = vec![0.0; lp.constraints.len()];
    for i in 0..lp.constraints.len() {
        duals[i] = if flipped[i] {
            -duals_std[i]
        } else {
            duals_std[i]
        };
    }
    let mut compl = 0.0f64;
    for (i, con) in lp.constraints.iter().enumerate() {
        if con.relation == Relation::Eq {
            continue;
        }
        let v: f64 = con.coeffs.iter().zip(&x).map(|(a, xj)| a * xj).sum();
        compl = compl.max((duals[i] * (v - con.rhs)).abs());
    }
    if compl > SLACK_COMPL_TOL * (1.0 + value.abs()) {
        return Err(Error::Solver(format!(
            "complementary slackness residual {compl:.3e} exceeds tolerance"
        )));
    }

    Ok(LPSolution {
        status: LPStatus::Optimal,
        x,
        value,
        duals,
    })
}

fn tab_rhs_initial(rows: &[(Vec<f64>, Relation, f64)], flipped: bool, i: usize) -> f64 {
    let rhs = rows[i].2;
    if flipped {
        -rhs
    } else {
        rhs
    }
}

/// Phase-1 feasibility: `Some(witness)` satisfying every constraint and
/// bound, or `None`. Strict inequalities have no direct encoding; callers
/// that need them write rows with an explicit positive margin, which makes
/// this test sound but possibly incomplete for the open system.
pub fn feasible(lp: &LinearProgram) -> Result<Option<Vec<f64>>> {
    let mut probe = lp.clone();
    probe.objective = vec![0.0; lp.num_vars()];
    let sol = solve(&probe)?;
    match sol.status {
        LPStatus::Optimal => {
            // never report a witness that does not check out
            if lp.residual(&sol.x) > FEAS_TOL * 10.0 {
                return Err(Error::Solver(
                    "feasibility witness failed validation".to_string(),
                ));
            }
            Ok(Some(sol.x))
        }
        LPStatus::Infeasible => Ok(None),
        LPStatus::Unbounded => Err(Error::Solver(
            "zero objective reported unbounded".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    fn lp_min_x_ge_3() -> LinearProgram {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.add_constraint(vec![1.0], Relation::Ge, 3.0);
        lp
    }

    #[test]
    fn minimize_single_lower_bounded_variable() {
        let sol = solve(&lp_min_x_ge_3()).unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
        assert!((sol.value - 3.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![1.0], Relation::Le, -1.0);
        lp.add_constraint(vec![1.0], Relation::Ge, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LPStatus::Infeasible);
    }

    #[test]
    fn free_minimization_is_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![1.0, 0.0];
        lp.add_constraint(vec![0.0, 1.0], Relation::Eq, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LPStatus::Unbounded);
    }

    #[test]
    fn unit_box_analytic_optimum_is_exact() {
        // min -x - 2y over the unit box: optimum at the (1, 1) corner
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, -2.0];
        lp.set_bounds(0, 0.0, 1.0);
        lp.set_bounds(1, 0.0, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
        assert_eq!(sol.value, -3.0);
        assert_eq!(sol.x, vec![1.0, 1.0]);
    }

    #[test]
    fn equality_row_with_fixed_variable() {
        // x fixed at 2, minimize y with x + y = 5
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![0.0, 1.0];
        lp.set_bounds(0, 2.0, 2.0);
        lp.set_bounds(1, 0.0, f64::INFINITY);
        lp.add_constraint(vec![1.0, 1.0], Relation::Eq, 5.0);
        let sol = solve(&lp).unwrap();
        assert!((sol.x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn duals_satisfy_strong_duality_on_a_textbook_lp() {
        // min -x1 - 2x2, x1 + x2 <= 4, x1 <= 3, x >= 0
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, -2.0];
        lp.set_bounds(0, 0.0, f64::INFINITY);
        lp.set_bounds(1, 0.0, f64::INFINITY);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 4.0);
        lp.add_constraint(vec![1.0, 0.0], Relation::Le, 3.0);
        let sol = solve(&lp).unwrap();
        assert!((sol.value + 8.0).abs() < 1e-10);
        // y1 * 4 + y2 * 3 == value, y1 <= 0 for a Le row in a minimization
        let dual_value = sol.duals[0] * 4.0 + sol.duals[1] * 3.0;
        assert!((dual_value - sol.value).abs() < 1e-8);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![-0.75, 150.0, -0.02, 6.0];
        for j in 0..4 {
            lp.set_bounds(j, 0.0, f64::INFINITY);
        }
        lp.add_constraint(vec![0.25, -60.0, -1.0 / 25.0, 9.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.5, -90.0, -1.0 / 50.0, 3.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
        assert!((sol.value + 0.05).abs() < 1e-9, "value {}", sol.value);
    }

    #[test]
    fn feasible_interval_witness() {
        let mut lp = LinearProgram::new(1);
        lp.set_bounds(0, -1.0, 1.0);
        lp.add_constraint(vec![1.0], Relation::Ge, 0.5);
        let w = feasible(&lp).unwrap().expect("feasible");
        assert!(w[0] >= 0.5 - 1e-9 && w[0] <= 1.0 + 1e-9);
    }

    #[test]
    fn feasible_rejects_empty_system() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![1.0], Relation::Ge, 1.0);
        lp.add_constraint(vec![1.0], Relation::Le, 0.0);
        assert!(feasible(&lp).unwrap().is_none());
    }

    // ----- randomized cross-check against brute-force vertex enumeration ---

    fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
        let n = b.len();
        for col in 0..n {
            let piv =
                (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
            if a[piv][col].abs() < 1e-10 {
                return None;
            }
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    let pivot_row = a[col].clone();
                    for (v, p) in a[r][col..n].iter_mut().zip(&pivot_row[col..n]) {
                        *v -= f * p;
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        Some((0..n).map(|i| b[i] / a[i][i]).collect())
    }

    /// Optimum by enumerating all candidate vertices (every choice of
    /// `num_vars` active constraints among rows and bounds).
    fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<f64> {
        let n = lp.num_vars();
        // active set candidates: rows (a, rhs) plus each bound as a row
        let mut cands: Vec<(Vec<f64>, f64)> = Vec::new();
        for con in &lp.constraints {
            cands.push((con.coeffs.clone(), con.rhs));
        }
        for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            if lo.is_finite() {
                cands.push((e.clone(), lo));
            }
            if hi.is_finite() {
                cands.push((e, hi));
            }
        }
        let k = cands.len();
        let mut best: Option<f64> = None;
        let mut choose = vec![0usize; n];
        fn rec(
            depth: usize,
            start: usize,
            choose: &mut Vec<usize>,
            k: usize,
            lp: &LinearProgram,
            cands: &[(Vec<f64>, f64)],
            best: &mut Option<f64>,
        ) {
            let n = lp.num_vars();
            if depth == n {
                let a: Vec<Vec<f64>> = choose.iter().map(|&i| cands[i].0.clone()).collect();
                let b: Vec<f64> = choose.iter().map(|&i| cands[i].1).collect();
                if let Some(x) = gauss_solve(a, b) {
                    if lp.residual(&x) < 1e-7 {
                        let v: f64 = lp.objective.iter().zip(&x).map(|(c, xj)| c * xj).sum();
                        *best = Some(best.map_or(v, |b: f64| b.min(v)));
                    }
                }
                return;
            }
            for i in start..k {
                choose[depth] = i;
                rec(depth + 1, i + 1, choose, k, lp, cands, best);
            }
        }
        rec(0, 0, &mut choose, k, lp, &cands, &mut best);
        best
    }

    #[test]
    fn random_boxed_lps_match_vertex_enumeration() {
        let mut rng = Stream::new(2024);
        for trial in 0..60 {
            let n = 2 + (trial % 2); // 2 or 3 variables
            let mut lp = LinearProgram::new(n);
            for j in 0..n {
                lp.set_bounds(j, -1.0, 1.0);
                lp.objective[j] = rng.next_f64() * 4.0 - 2.0;
            }
            // rows chosen feasible at a random interior point
            let x0: Vec<f64> = (0..n).map(|_| rng.next_f64() * 1.6 - 0.8).collect();
            for _ in 0..3 {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
                let v: f64 = coeffs.iter().zip(&x0).map(|(a, x)| a * x).sum();
                lp.add_constraint(coeffs, Relation::Le, v + rng.next_f64());
            }
            let sol = solve(&lp).unwrap();
            assert_eq!(sol.status, LPStatus::Optimal, "trial {trial}");
            let oracle = vertex_enumeration_optimum(&lp).expect("oracle found a vertex");
            assert!(
                (sol.value - oracle).abs() < 1e-8,
                "trial {trial}: simplex {} vs oracle {}",
                sol.value,
                oracle
            );
        }
    }

    #[test]
    fn row_permutation_leaves_value_unchanged() {
        let mut rng = Stream::new(77);
        for _ in 0..20 {
            let n = 3;
            let mut lp = LinearProgram::new(n);
            for j in 0..n {
                lp.set_bounds(j, 0.0, 2.0);
                lp.objective[j] = rng.next_f64() - 0.5;
            }
            for _ in 0..4 {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
                lp.add_constraint(coeffs, Relation::Le, rng.next_f64() + 0.5);
            }
            let v1 = solve(&lp).unwrap();
            lp.constraints.reverse();
            let v2 = solve(&lp).unwrap();
            assert_eq!(v1.status, v2.status);
            if v1.status == LPStatus::Optimal {
                assert!((v1.value - v2.value).abs() < 1e-9);
            }
        }
    }
}
