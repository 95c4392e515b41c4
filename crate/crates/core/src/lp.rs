//! Dense linear programming: a two-phase simplex (revised for small row
//! counts, tableau otherwise) and a brute-force vertex enumerator used as
//! its test oracle.
//!
//! Problems are stated as
//!
//! ```text
//! maximize   c·x
//! subject to A x = b,  l <= x <= u
//! ```
//!
//! with `l` allowed to be `-inf` and `u` allowed to be `+inf`. Complex
//! constraints are split by callers into real and imaginary rows.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const DEFAULT_FEAS_TOL: f64 = 1e-9;
pub const DEFAULT_OPT_TOL: f64 = 1e-9;
pub const PIVOT_TOL: f64 = 1e-9;
/// A row whose non-artificial entries all fall below this after phase one
/// is a linear combination of the others.
const REDUNDANT_ROW_TOL: f64 = 1e-9;
/// Pivots between reinversions; at least the row count, since a reinversion
/// costs about as much as that many pivots.
const REINVERSION_INTERVAL: usize = 100;
/// Row count up to which the revised simplex is used.
pub const REVISED_MAX_ROWS: usize = 120;
/// Consecutive degenerate pivots before pricing switches to Bland's rule.
const BLAND_AFTER: usize = 30;

/// Largest variable count accepted by [`enumerate_vertices`].
pub const VERTEX_ENUMERATION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<f64>,
        eq_matrix: Vec<Vec<f64>>,
        eq_rhs: Vec<f64>,
        lower_bounds: Vec<f64>,
        upper_bounds: Vec<f64>,
    ) -> Result<Self> {
        let problem = LpProblem {
            objective,
            eq_matrix,
            eq_rhs,
            lower_bounds,
            upper_bounds,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// All variables in `[0, +inf)`.
    pub fn nonnegative(objective: Vec<f64>, eq_matrix: Vec<Vec<f64>>, eq_rhs: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        Self::new(objective, eq_matrix, eq_rhs, vec![0.0; n], vec![f64::INFINITY; n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(Error::input(format!(
                "equality matrix has {} rows but rhs has {} entries",
                self.eq_matrix.len(),
                self.eq_rhs.len()
            )));
        }
        if let Some((i, row)) = self.eq_matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::input(format!(
                "equality row {i} has {} columns, expected {n}",
                row.len()
            )));
        }
        if self.lower_bounds.len() != n || self.upper_bounds.len() != n {
            return Err(Error::input("bound vectors must match the objective length"));
        }
        for j in 0..n {
            let (l, u) = (self.lower_bounds[j], self.upper_bounds[j]);
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY || l > u {
                return Err(Error::input(format!("variable {j} has invalid bounds [{l}, {u}]")));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.eq_rhs.iter())
            .chain(self.eq_matrix.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::input("objective, matrix and rhs entries must be finite"));
        }
        Ok(())
    }

    /// Largest equality residual or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let eq = self
            .eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .map(|(row, b)| (dot(row, x) - b).abs())
            .fold(0.0, f64::max);
        let bounds = x
            .iter()
            .zip(self.lower_bounds.iter().zip(&self.upper_bounds))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(0.0))
            .fold(0.0, f64::max);
        eq.max(bounds)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub solution: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
}

impl LpResult {
    fn without_solution(status: LpStatus) -> Self {
        LpResult {
            status,
            solution: None,
            objective_value: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// How an original variable is expressed through nonnegative standard columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + s
    Shifted { col: usize, offset: f64 },
    /// x = offset - s
    Reflected { col: usize, offset: f64 },
    /// x = s+ - s-
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    /// Row-major `rows x cols`.
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    maps: Vec<VarMap>,
}

fn to_standard_form(p: &LpProblem) -> StandardForm {
    let n = p.num_vars();
    let mut maps = Vec::with_capacity(n);
    let mut cols = 0usize;
    let mut bounded_rows = Vec::new();
    for j in 0..n {
        let (l, u) = (p.lower_bounds[j], p.upper_bounds[j]);
        if l.is_finite() {
            maps.push(VarMap::Shifted { col: cols, offset: l });
            if u.is_finite() {
                bounded_rows.push((cols, u - l));
            }
            cols += 1;
        } else if u.is_finite() {
            maps.push(VarMap::Reflected { col: cols, offset: u });
            cols += 1;
        } else {
            maps.push(VarMap::Split { pos: cols, neg: cols + 1 });
            cols += 2;
        }
    }
    let n_slack = bounded_rows.len();
    let total = cols + n_slack;
    let mut a = Vec::with_capacity(p.num_rows() + n_slack);
    let mut b = Vec::with_capacity(p.num_rows() + n_slack);
    let mut c = vec![0.0; total];
    for (j, map) in maps.iter().enumerate() {
        match *map {
            VarMap::Shifted { col, .. } => c[col] = p.objective[j],
            VarMap::Reflected { col, .. } => c[col] = -p.objective[j],
            VarMap::Split { pos, neg } => {
                c[pos] = p.objective[j];
                c[neg] = -p.objective[j];
            }
        }
    }
    for (row, &rhs) in p.eq_matrix.iter().zip(&p.eq_rhs) {
        let mut out = vec![0.0; total];
        let mut shift = 0.0;
        for (j, map) in maps.iter().enumerate() {
            let v = row[j];
            if v == 0.0 {
                continue;
            }
            match *map {
                VarMap::Shifted { col, offset } => {
                    out[col] = v;
                    shift += v * offset;
                }
                VarMap::Reflected { col, offset } => {
                    out[col] = -v;
                    shift += v * offset;
                }
                VarMap::Split { pos, neg } => {
                    out[pos] = v;
                    out[neg] = -v;
                }
            }
        }
        a.push(out);
        b.push(rhs - shift);
    }
    for (k, (col, width)) in bounded_rows.into_iter().enumerate() {
        let mut out = vec![0.0; total];
        out[col] = 1.0;
        out[cols + k] = 1.0;
        a.push(out);
        b.push(width);
    }
    StandardForm { a, b, c, maps }
}

fn recover(maps: &[VarMap], xs: &[f64]) -> Vec<f64> {
    maps.iter()
        .map(|m| match *m {
            VarMap::Shifted { col, offset } => offset + xs[col],
            VarMap::Reflected { col, offset } => offset - xs[col],
            VarMap::Split { pos, neg } => xs[pos] - xs[neg],
        })
        .collect()
}

struct Tableau {
    /// `m` rows of `width + 1` entries; the last entry is the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    /// The original rows `[A | I_art | b]`, used to rebuild the tableau.
    origin: Vec<Vec<f64>>,
    since_reinversion: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = 1.0 / self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rows[r][col] = 1.0;
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f == 0.0 {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            row[col] = 0.0;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    /// Recomputes the tableau as `B⁺ [A | b]` for the current basis to shed
    /// accumulated rounding. Skipped when the basis looks singular.
    fn reinvert(&mut self) {
        self.since_reinversion = 0;
        let m = self.origin.len();
        let r = self.basis.len();
        let bmat = DMatrix::from_fn(m, r, |i, k| self.origin[i][self.basis[k]]);
        let qr = bmat.qr();
        let rfac = qr.r();
        let diag: Vec<f64> = (0..r).map(|k| rfac[(k, k)].abs()).collect();
        let dmax = diag.iter().copied().fold(0.0, f64::max);
        if r == 0 || diag.iter().any(|&d| d <= 1e-10 * dmax) {
            return;
        }
        let mut qt = DMatrix::from_fn(m, self.width + 1, |i, j| self.origin[i][j]);
        qr.q_tr_mul(&mut qt);
        let Some(sol) = rfac.solve_upper_triangular(&qt.rows(0, r).into_owned()) else {
            return;
        };
        if sol.iter().any(|v| !v.is_finite()) {
            return;
        }
        for (k, row) in self.rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = sol[(k, j)];
            }
        }
        for k in 0..r {
            let bk = self.basis[k];
            for (i, row) in self.rows.iter_mut().enumerate() {
                row[bk] = if i == k { 1.0 } else { 0.0 };
            }
        }
    }

    /// Reduced costs `c_j - c_B^T T_j` and objective value `c_B^T rhs`.
    fn reduced_costs(&self, c: &[f64]) -> (Vec<f64>, f64) {
        let mut d = c.to_vec();
        let mut value = 0.0;
        for (row, &bi) in self.rows.iter().zip(&self.basis) {
            let cb = c[bi];
            if cb == 0.0 {
                continue;
            }
            for (dj, tj) in d.iter_mut().zip(row.iter()) {
                *dj -= cb * tj;
            }
            value += cb * row[self.width];
        }
        (d, value)
    }

    /// Simplex on the columns `0..allowed`, maximizing `c`. Dantzig pricing,
    /// switching to Bland's rule after a run of degenerate pivots.
    /// Returns `Ok(false)` when unbounded. With `bounded` set the objective
    /// is known to be bounded, so a column without a pivot row is rounding
    /// noise and is passed over until the next pivot.
    fn optimize(&mut self, c: &[f64], allowed: usize, opt_tol: f64, bounded: bool, budget: &mut usize) -> Result<bool> {
        let interval = REINVERSION_INTERVAL.max(self.rows.len());
        let mut skip = vec![false; allowed];
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > BLAND_AFTER;
            let (d, _) = self.reduced_costs(c);
            let mut entering: Option<usize> = None;
            for j in (0..allowed).filter(|&j| d[j] > opt_tol && !skip[j]) {
                if bland {
                    entering = Some(j);
                    break;
                }
                if entering.is_none_or(|e| d[j] > d[e]) {
                    entering = Some(j);
                }
            }
            let Some(entering) = entering else {
                return Ok(true);
            };
            let mut best: Option<(f64, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[entering];
                if a > PIVOT_TOL {
                    let ratio = row[self.width].max(0.0) / a;
                    best = match best {
                        None => Some((ratio, i)),
                        Some((r, _)) if ratio < r => Some((ratio, i)),
                        keep => keep,
                    };
                }
            }
            let Some((min_ratio, _)) = best else {
                if bounded {
                    skip[entering] = true;
                    continue;
                }
                return Ok(false);
            };
            // Among (near-)minimal ratios leave the lowest-index basic variable
            // under Bland's rule, otherwise the largest pivot.
            let band = min_ratio + 1e-12 * min_ratio.max(1.0);
            let leaving = (0..self.rows.len())
                .filter(|&i| {
                    let a = self.rows[i][entering];
                    a > PIVOT_TOL && self.rows[i][self.width].max(0.0) / a <= band
                })
                .reduce(|l, i| {
                    let better = if bland {
                        self.basis[i] < self.basis[l]
                    } else {
                        self.rows[i][entering] > self.rows[l][entering]
                    };
                    if better { i } else { l }
                })
                .expect("a minimal ratio row exists");
            if *budget == 0 {
                return Err(Error::Solver("pivot budget exhausted (possible cycling)".into()));
            }
            *budget -= 1;
            degenerate_run = if min_ratio <= PIVOT_TOL { degenerate_run + 1 } else { 0 };
            self.pivot(leaving, entering);
            skip.iter_mut().for_each(|s| *s = false);
            self.since_reinversion += 1;
            if self.since_reinversion >= interval {
                self.reinvert();
            }
        }
    }
}

enum Basic {
    Optimal { xs: Vec<f64>, basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

/// Maximizes the objective of `problem` over its feasible polytope.
///
/// Problems with at most [`REVISED_MAX_ROWS`] equality rows (after bounds
/// become rows) use a revised simplex that refactors the basis at every
/// step; larger ones use the tableau with periodic reinversion.
///
/// Deterministic: the pivot sequence depends only on the input values.
pub fn solve_lp(problem: &LpProblem, feas_tol: f64, opt_tol: f64) -> Result<LpResult> {
    problem.validate()?;
    let sf = to_standard_form(problem);
    let m = sf.a.len();
    let n = sf.c.len();
    if m == 0 {
        // Only bounds: optimal iff every improving direction is bounded.
        if sf.c.iter().any(|&cj| cj > opt_tol) {
            return Ok(LpResult::without_solution(LpStatus::Unbounded));
        }
        let x = recover(&sf.maps, &vec![0.0; n]);
        let value = problem.objective_at(&x);
        return Ok(LpResult {
            status: LpStatus::Optimal,
            solution: Some(x),
            objective_value: Some(value),
        });
    }

    let mut a = sf.a.clone();
    let mut b = sf.b.clone();
    for i in 0..m {
        if b[i] < 0.0 {
            b[i] = -b[i];
            for v in a[i].iter_mut() {
                *v = -*v;
            }
        }
    }
    let crash = crash_basis(&a);
    let scale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let outcome = if m <= REVISED_MAX_ROWS {
        revised_solve(&a, &b, &sf.c, &crash, feas_tol, opt_tol, scale)?
    } else {
        tableau_solve(&a, &b, &sf.c, &crash, feas_tol, opt_tol, scale)?
    };
    let (mut xs, basis) = match outcome {
        Basic::Optimal { xs, basis } => (xs, basis),
        Basic::Infeasible => return Ok(LpResult::without_solution(LpStatus::Infeasible)),
        Basic::Unbounded => return Ok(LpResult::without_solution(LpStatus::Unbounded)),
    };
    refine_basic_solution(&a, &b, &basis, n, &mut xs);
    let mut x = recover(&sf.maps, &xs);
    for (v, (&l, &u)) in x.iter_mut().zip(problem.lower_bounds.iter().zip(&problem.upper_bounds)) {
        if *v < l && l - *v <= feas_tol {
            *v = l;
        }
        if *v > u && *v - u <= feas_tol {
            *v = u;
        }
    }
    let violation = problem.max_violation(&x);
    if violation > feas_tol * scale {
        return Err(Error::Solver(format!(
            "final point violates constraints by {violation:e}"
        )));
    }
    let value = problem.objective_at(&x);
    Ok(LpResult {
        status: LpStatus::Optimal,
        solution: Some(x),
        objective_value: Some(value),
    })
}

/// For each row, a column that is nonzero only there with a positive entry.
fn crash_basis(a: &[Vec<f64>]) -> Vec<Option<usize>> {
    let m = a.len();
    let n = a[0].len();
    let mut crash: Vec<Option<usize>> = vec![None; m];
    let mut used = vec![false; n];
    for j in 0..n {
        let mut nz = (0..m).filter(|&i| a[i][j] != 0.0);
        if let (Some(i), None) = (nz.next(), nz.next()) {
            if a[i][j] > 0.0 && crash[i].is_none() && !used[j] {
                crash[i] = Some(j);
                used[j] = true;
            }
        }
    }
    crash
}

/// Columns `[A | I]`, stored column-major.
struct Columns {
    cols: Vec<DVector<f64>>,
}

struct Revised<'a> {
    cols: &'a Columns,
    b: DVector<f64>,
    basis: Vec<usize>,
    feas_tol: f64,
    budget: usize,
}

struct Factored {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_t: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    xb: DVector<f64>,
}

impl Revised<'_> {
    fn factor(&self) -> Result<Factored> {
        let m = self.basis.len();
        let bm = DMatrix::from_fn(m, m, |i, k| self.cols.cols[self.basis[k]][i]);
        let lu_t = bm.transpose().lu();
        let lu = bm.lu();
        let xb = lu
            .solve(&self.b)
            .filter(|v| v.iter().all(|x| x.is_finite()))
            .ok_or_else(|| Error::Solver("basis matrix became singular".into()))?;
        Ok(Factored { lu, lu_t, xb })
    }

    /// Primal simplex on columns `0..allowed` maximizing `c`. Dantzig pricing,
    /// switching to Bland's rule after a run of degenerate pivots; Harris'
    /// two-pass ratio test. Returns `Ok(false)` when unbounded.
    fn optimize(&mut self, c: &[f64], allowed: usize, opt_tol: f64) -> Result<bool> {
        let m = self.basis.len();
        let mut degenerate_run = 0usize;
        loop {
            let f = self.factor()?;
            let cb = DVector::from_iterator(m, self.basis.iter().map(|&j| c[j]));
            let y = f
                .lu_t
                .solve(&cb)
                .ok_or_else(|| Error::Solver("basis matrix became singular".into()))?;
            let mut in_basis = vec![false; self.cols.cols.len()];
            for &j in &self.basis {
                in_basis[j] = true;
            }
            let bland = degenerate_run > BLAND_AFTER;
            let mut entering: Option<(usize, f64)> = None;
            for j in (0..allowed).filter(|&j| !in_basis[j]) {
                let d = c[j] - y.dot(&self.cols.cols[j]);
                if d > opt_tol {
                    if bland {
                        entering = Some((j, d));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| d > best) {
                        entering = Some((j, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(true);
            };
            let u = f
                .lu
                .solve(&self.cols.cols[q])
                .ok_or_else(|| Error::Solver("basis matrix became singular".into()))?;
            let delta = self.feas_tol;
            let mut theta_max = f64::INFINITY;
            for i in 0..m {
                if u[i] > PIVOT_TOL {
                    theta_max = theta_max.min((f.xb[i].max(0.0) + delta) / u[i]);
                }
            }
            if !theta_max.is_finite() {
                return Ok(false);
            }
            let mut leaving: Option<usize> = None;
            for i in 0..m {
                if u[i] > PIVOT_TOL && f.xb[i].max(0.0) / u[i] <= theta_max {
                    leaving = match leaving {
                        None => Some(i),
                        Some(l) if bland && self.basis[i] < self.basis[l] => Some(i),
                        Some(l) if !bland && u[i] > u[l] => Some(i),
                        keep => keep,
                    };
                }
            }
            let r = leaving.expect("a row attains the Harris bound");
            let step = f.xb[r].max(0.0) / u[r];
            degenerate_run = if step <= delta { degenerate_run + 1 } else { 0 };
            if self.budget == 0 {
                return Err(Error::Solver("pivot budget exhausted (possible cycling)".into()));
            }
            self.budget -= 1;
            self.basis[r] = q;
        }
    }
}

fn revised_solve(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
    crash: &[Option<usize>],
    feas_tol: f64,
    opt_tol: f64,
    scale: f64,
) -> Result<Basic> {
    let m = a.len();
    let n = c.len();
    let mut cols: Vec<DVector<f64>> = (0..n).map(|j| DVector::from_fn(m, |i, _| a[i][j])).collect();
    for i in 0..m {
        cols.push(DVector::from_fn(m, |k, _| if k == i { 1.0 } else { 0.0 }));
    }
    let cols = Columns { cols };
    let basis: Vec<usize> = (0..m).map(|i| crash[i].unwrap_or(n + i)).collect();
    let mut rs = Revised {
        cols: &cols,
        b: DVector::from_column_slice(b),
        basis,
        feas_tol,
        budget: 20_000 + 50 * (m + n),
    };
    if rs.basis.iter().any(|&j| j >= n) {
        let mut c1 = vec![0.0; n + m];
        for v in c1[n..].iter_mut() {
            *v = -1.0;
        }
        rs.optimize(&c1, n + m, opt_tol)?;
        let f = rs.factor()?;
        let infeas: f64 = rs.basis.iter().zip(f.xb.iter()).filter(|(&j, _)| j >= n).map(|(_, &v)| v.max(0.0)).sum();
        if infeas > feas_tol * scale {
            return Ok(Basic::Infeasible);
        }
        // Swap zero-level artificials for structural columns where the row allows it.
        for r in 0..m {
            if rs.basis[r] < n {
                continue;
            }
            let f = rs.factor()?;
            let mut e = DVector::zeros(m);
            e[r] = 1.0;
            let Some(row) = f.lu_t.solve(&e) else { continue };
            let mut in_basis = vec![false; n];
            for &j in rs.basis.iter().filter(|&&j| j < n) {
                in_basis[j] = true;
            }
            let best = (0..n)
                .filter(|&j| !in_basis[j])
                .map(|j| (row.dot(&cols.cols[j]).abs(), j))
                .fold(None, |best: Option<(f64, usize)>, (v, j)| match best {
                    Some((bv, _)) if bv >= v => best,
                    _ => Some((v, j)),
                });
            if let Some((v, j)) = best {
                if v > REDUNDANT_ROW_TOL {
                    rs.basis[r] = j;
                }
            }
        }
    }
    let mut c2 = c.to_vec();
    c2.resize(n + m, 0.0);
    if !rs.optimize(&c2, n, opt_tol)? {
        return Ok(Basic::Unbounded);
    }
    let f = rs.factor()?;
    let mut xs = vec![0.0; n];
    for (&j, &v) in rs.basis.iter().zip(f.xb.iter()) {
        if j < n {
            xs[j] = v.max(0.0);
        }
    }
    Ok(Basic::Optimal { xs, basis: rs.basis })
}

fn tableau_solve(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
    crash: &[Option<usize>],
    feas_tol: f64,
    opt_tol: f64,
    scale: f64,
) -> Result<Basic> {
    let m = a.len();
    let n = c.len();
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| crash[i].is_none()).collect();
    let n_art = artificial_rows.len();
    let width = n + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut origin = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; width + 1];
        row[..n].copy_from_slice(&a[i]);
        row[width] = b[i];
        if let Ok(k) = artificial_rows.binary_search(&i) {
            row[n + k] = 1.0;
        }
        origin.push(row.clone());
        match crash[i] {
            Some(j) => {
                let s = 1.0 / row[j];
                for v in row.iter_mut() {
                    *v *= s;
                }
                row[j] = 1.0;
                basis.push(j);
            }
            None => {
                let k = artificial_rows.binary_search(&i).expect("artificial row");
                row[n + k] = 1.0;
                basis.push(n + k);
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        basis,
        width,
        origin,
        since_reinversion: 0,
    };
    let mut budget = 20_000 + 50 * (m + width);

    if n_art > 0 {
        let mut c1 = vec![0.0; width];
        for v in c1[n..].iter_mut() {
            *v = -1.0;
        }
        tab.optimize(&c1, width, opt_tol, true, &mut budget)?;
        tab.reinvert();
        let (_, value) = tab.reduced_costs(&c1);
        if value < -feas_tol * scale {
            return Ok(Basic::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= n {
                let col = (0..n)
                    .map(|j| (tab.rows[i][j].abs(), j))
                    .fold(None, |best: Option<(f64, usize)>, (v, j)| match best {
                        Some((bv, _)) if bv >= v => best,
                        _ => Some((v, j)),
                    })
                    .filter(|&(v, _)| v > REDUNDANT_ROW_TOL);
                match col {
                    Some((_, j)) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut c2 = c.to_vec();
    c2.resize(width, 0.0);
    if !tab.optimize(&c2, n, opt_tol, false, &mut budget)? {
        return Ok(Basic::Unbounded);
    }
    tab.reinvert();
    let mut xs = vec![0.0; n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            xs[bi] = tab.rhs(i).max(0.0);
        }
    }
    Ok(Basic::Optimal { xs, basis: tab.basis })
}

/// Re-solves the basic system against the original standard-form data to
/// remove drift accumulated over many pivots. Keeps the tableau values if
/// the refined point is not cleanly nonnegative.
fn refine_basic_solution(a: &[Vec<f64>], b: &[f64], basis: &[usize], n: usize, xs: &mut [f64]) {
    let cols: Vec<usize> = basis.iter().copied().filter(|&j| j < n).collect();
    if cols.is_empty() || cols.len() > 400 {
        return;
    }
    let m = a.len();
    let mat = DMatrix::from_fn(m, cols.len(), |i, k| a[i][cols[k]]);
    let rhs = DVector::from_column_slice(b);
    let svd = mat.svd(true, true);
    let Ok(sol) = svd.solve(&rhs, 1e-13) else {
        return;
    };
    if sol.iter().any(|v| !v.is_finite() || *v < -1e-9) {
        return;
    }
    let mut refined = vec![0.0; n];
    for (k, &j) in cols.iter().enumerate() {
        refined[j] = sol[k].max(0.0);
    }
    let residual = |x: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(row, bi)| (dot(&row[..n], x) - bi).abs())
            .fold(0.0, f64::max)
    };
    if residual(&refined) <= residual(xs) {
        xs.copy_from_slice(&refined);
    }
}

/// A basic feasible solution and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub point: Vec<f64>,
    pub objective: f64,
}

/// Every vertex of the feasible polytope, by exhausting column subsets.
///
/// Exponential in the variable count; intended only as an oracle for
/// [`solve_lp`]. Vertices are returned sorted lexicographically.
pub fn enumerate_vertices(problem: &LpProblem) -> Result<Vec<Vertex>> {
    problem.validate()?;
    let n = problem.num_vars();
    if n > VERTEX_ENUMERATION_LIMIT {
        return Err(Error::input(format!(
            "vertex enumeration limited to {VERTEX_ENUMERATION_LIMIT} variables, got {n}"
        )));
    }
    const TOL: f64 = 1e-9;
    let m = problem.num_rows();
    let full = DMatrix::from_fn(m, n, |i, j| problem.eq_matrix[i][j]);
    let rank = if m == 0 { 0 } else { full.clone().svd(false, false).rank(1e-10) };

    let mut found: Vec<Vec<f64>> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != rank {
            continue;
        }
        let basic: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let nonbasic: Vec<usize> = (0..n).filter(|j| mask & (1 << j) == 0).collect();
        if rank > 0 {
            let sub = DMatrix::from_fn(m, rank, |i, k| problem.eq_matrix[i][basic[k]]);
            if sub.svd(false, false).rank(1e-10) != rank {
                continue;
            }
        }
        let choices: Vec<Vec<f64>> = nonbasic
            .iter()
            .map(|&j| {
                [problem.lower_bounds[j], problem.upper_bounds[j]]
                    .into_iter()
                    .filter(|v| v.is_finite())
                    .collect::<Vec<_>>()
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let combos: usize = choices.iter().map(|c| c.len()).product();
        for code in 0..combos {
            let mut x = vec![0.0; n];
            let mut rem = code;
            for (k, &j) in nonbasic.iter().enumerate() {
                let len = choices[k].len();
                x[j] = choices[k][rem % len];
                rem /= len;
            }
            if rank > 0 {
                let sub = DMatrix::from_fn(m, rank, |i, k| problem.eq_matrix[i][basic[k]]);
                let rhs = DVector::from_fn(m, |i, _| {
                    problem.eq_rhs[i] - nonbasic.iter().map(|&j| problem.eq_matrix[i][j] * x[j]).sum::<f64>()
                });
                let Ok(sol) = sub.svd(true, true).solve(&rhs, 1e-12) else {
                    continue;
                };
                for (k, &j) in basic.iter().enumerate() {
                    x[j] = sol[k];
                }
            }
            if problem.max_violation(&x) <= TOL && !found.iter().any(|v| max_abs_diff(v, &x) <= TOL) {
                found.push(x);
            }
        }
    }
    found.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(found
        .into_iter()
        .map(|point| {
            let objective = problem.objective_at(&point);
            Vertex { point, objective }
        })
        .collect())
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
