//! Dense two-phase primal simplex with dual values.
//!
//! Problems are stated as `maximize c^T x` subject to rows `a_i x (<=|=|>=) b_i`
//! and bounds `l <= x <= u` (infinite bounds allowed). The solver uses
//! Dantzig pricing and switches permanently to Bland's rule after a run of
//! degenerate pivots, so results are deterministic for identical input.
//!
//! [`Simplex`] keeps its tableau between calls, which lets column generation
//! append columns and re-optimize from the previous basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Primal, dual and gap tolerance promised for optimal solutions.
pub const KKT_TOL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-8;
const DEGENERATE_STREAK: usize = 50;
/// Ratio slack of the two-pass (Harris) ratio test.
const HARRIS_TOL: f64 = 1e-9;
/// Pivots between rebuilds of the tableau from the original rows.
const REFACTOR_EVERY: usize = 100;
const SINGULAR_TOL: f64 = 1e-12;
/// Pivot candidates below this fraction of the column's largest entry are
/// skipped.
const REL_PIVOT_TOL: f64 = 1e-7;
/// Pivots smaller than this trigger an immediate refactorization.
const SMALL_PIVOT: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A dense LP in maximization form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// New problem with the given objective and bounds `[0, +inf)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { objective, rows: Vec::new(), lower: vec![0.0; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) -> usize {
        self.rows.push(Row { coeffs, sense, rhs });
        self.rows.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Appends a variable with coefficient `column[i]` in row `i`.
    pub fn push_column(&mut self, objective: f64, column: &[f64], lower: f64, upper: f64) -> Result<usize> {
        if column.len() != self.rows.len() {
            return Err(Error::Dimension(format!("column of length {} for {} rows", column.len(), self.rows.len())));
        }
        self.objective.push(objective);
        self.lower.push(lower);
        self.upper.push(upper);
        for (row, &a) in self.rows.iter_mut().zip(column) {
            row.coeffs.push(a);
        }
        Ok(self.objective.len() - 1)
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{n} objective coefficients but {} lower / {} upper bounds",
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::Dimension(format!("row {i} has {} coefficients, expected {n}", row.coeffs.len())));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidInput(format!("row {i} has a non-finite coefficient")));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite objective coefficient".into()));
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::InvalidInput(format!("variable {j} has bounds [{l}, {u}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// The final basis failed the residual checks even after a cold re-solve.
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// One multiplier per row; `>= 0` on `<=` rows and `<= 0` on `>=` rows.
    pub duals: Vec<f64>,
    /// `c_j - y^T A_j` per variable.
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn empty(status: LpStatus, lp: &LinearProgram, iterations: usize) -> Self {
        LpSolution {
            status,
            x: vec![0.0; lp.num_vars()],
            duals: vec![0.0; lp.num_rows()],
            reduced_costs: vec![0.0; lp.num_vars()],
            objective: f64::NAN,
            iterations,
        }
    }
}

/// Optimality residuals of a primal/dual pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResiduals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub complementarity: f64,
}

/// Measures primal feasibility, dual feasibility, the duality gap and
/// complementary slackness of `sol` against `lp`.
pub fn kkt_residuals(lp: &LinearProgram, sol: &LpSolution) -> KktResiduals {
    let mut primal: f64 = 0.0;
    let mut dual: f64 = 0.0;
    let mut comp: f64 = 0.0;
    let mut dual_obj = 0.0;
    for (i, row) in lp.rows.iter().enumerate() {
        let ax: f64 = row.coeffs.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
        let slack = ax - row.rhs;
        let y = sol.duals[i];
        let (pv, dv) = match row.sense {
            Sense::Le => (slack.max(0.0), (-y).max(0.0)),
            Sense::Ge => ((-slack).max(0.0), y.max(0.0)),
            Sense::Eq => (slack.abs(), 0.0),
        };
        primal = primal.max(pv);
        dual = dual.max(dv);
        comp = comp.max((y * slack).abs());
        dual_obj += row.rhs * y;
    }
    for j in 0..lp.num_vars() {
        let (l, u, x) = (lp.lower[j], lp.upper[j], sol.x[j]);
        primal = primal.max(l - x).max(x - u);
        let rc = sol.reduced_costs[j];
        if rc > 0.0 {
            if u.is_finite() {
                dual_obj += rc * u;
                comp = comp.max((rc * (u - x)).abs());
            } else {
                dual = dual.max(rc);
            }
        } else if rc < 0.0 {
            if l.is_finite() {
                dual_obj += rc * l;
                comp = comp.max((rc * (x - l)).abs());
            } else {
                dual = dual.max(-rc);
            }
        }
    }
    let primal_obj: f64 = lp.objective.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
    KktResiduals { primal, dual, gap: (primal_obj - dual_obj).abs(), complementarity: comp }
}

/// Solves `lp` from scratch.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let mut s = Simplex::new(lp.clone())?;
    Ok(s.solve())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarMap {
    /// `x = offset + y[col]`
    Shift { col: usize, offset: f64 },
    /// `x = offset - y[col]`
    Flip { col: usize, offset: f64 },
    /// `x = y[pos] - y[neg]`
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Simplex state that survives between solves.
#[derive(Debug, Clone)]
pub struct Simplex {
    lp: LinearProgram,
    maps: Vec<VarMap>,
    kinds: Vec<ColKind>,
    cost: Vec<f64>,
    /// Internal row `i` equals original row `i` times `row_sign[i]` for
    /// `i < lp.num_rows()`; later rows are upper-bound rows.
    row_sign: Vec<f64>,
    ident: Vec<usize>,
    /// Internal rows before any pivot, for refactorization.
    a0: Vec<Vec<f64>>,
    b0: Vec<f64>,
    tab: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    d2: Vec<f64>,
    d1: Vec<f64>,
    phase1_done: bool,
    infeasible: bool,
    bland: bool,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Simplex {
    pub fn new(lp: LinearProgram) -> Result<Self> {
        lp.check()?;
        let mut s = Simplex {
            lp,
            maps: Vec::new(),
            kinds: Vec::new(),
            cost: Vec::new(),
            row_sign: Vec::new(),
            ident: Vec::new(),
            a0: Vec::new(),
            b0: Vec::new(),
            tab: Vec::new(),
            rhs: Vec::new(),
            basis: Vec::new(),
            d2: Vec::new(),
            d1: Vec::new(),
            phase1_done: false,
            infeasible: false,
            bland: false,
            iterations: 0,
        };
        s.build();
        Ok(s)
    }

    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    fn build(&mut self) {
        let lp = &self.lp;
        let m0 = lp.num_rows();
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0;
        let mut bound_rows: Vec<(usize, f64)> = Vec::new();
        for j in 0..lp.num_vars() {
            let (l, u) = (lp.lower[j], lp.upper[j]);
            if l.is_finite() {
                maps.push(VarMap::Shift { col: ncols, offset: l });
                if u.is_finite() {
                    bound_rows.push((ncols, u - l));
                }
                ncols += 1;
            } else if u.is_finite() {
                maps.push(VarMap::Flip { col: ncols, offset: u });
                ncols += 1;
            } else {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
        let mut cost = vec![0.0; ncols];
        for (j, map) in maps.iter().enumerate() {
            let c = lp.objective[j];
            match *map {
                VarMap::Shift { col, .. } => cost[col] = c,
                VarMap::Flip { col, .. } => cost[col] = -c,
                VarMap::Split { pos, neg } => {
                    cost[pos] = c;
                    cost[neg] = -c;
                }
            }
        }
        // Internal rows over structural columns.
        let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(m0 + bound_rows.len());
        for row in &lp.rows {
            let mut a = vec![0.0; ncols];
            let mut b = row.rhs;
            for (j, map) in maps.iter().enumerate() {
                let v = row.coeffs[j];
                if v == 0.0 {
                    continue;
                }
                match *map {
                    VarMap::Shift { col, offset } => {
                        a[col] = v;
                        b -= v * offset;
                    }
                    VarMap::Flip { col, offset } => {
                        a[col] = -v;
                        b -= v * offset;
                    }
                    VarMap::Split { pos, neg } => {
                        a[pos] = v;
                        a[neg] = -v;
                    }
                }
            }
            rows.push((a, row.sense, b));
        }
        for &(col, width) in &bound_rows {
            let mut a = vec![0.0; ncols];
            a[col] = 1.0;
            rows.push((a, Sense::Le, width));
        }
        let m = rows.len();
        let mut kinds = vec![ColKind::Structural; ncols];
        let mut row_sign = Vec::with_capacity(m);
        let mut aux: Vec<(usize, f64, ColKind)> = Vec::new();
        let mut ident = Vec::with_capacity(m);
        for (i, (a, sense, b)) in rows.iter_mut().enumerate() {
            let sign = if *b < 0.0 { -1.0 } else { 1.0 };
            if sign < 0.0 {
                a.iter_mut().for_each(|v| *v = -*v);
                *b = -*b;
                *sense = match *sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
            row_sign.push(sign);
            let next = ncols + aux.len();
            match *sense {
                Sense::Le => {
                    aux.push((i, 1.0, ColKind::Slack));
                    ident.push(next);
                }
                Sense::Ge => {
                    aux.push((i, -1.0, ColKind::Slack));
                    aux.push((i, 1.0, ColKind::Artificial));
                    ident.push(next + 1);
                }
                Sense::Eq => {
                    aux.push((i, 1.0, ColKind::Artificial));
                    ident.push(next);
                }
            }
        }
        let total = ncols + aux.len();
        let mut tab = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (a, _, b) in rows {
            let mut r = a;
            r.resize(total, 0.0);
            tab.push(r);
            rhs.push(b);
        }
        for (k, &(i, v, kind)) in aux.iter().enumerate() {
            tab[i][ncols + k] = v;
            kinds.push(kind);
            cost.push(0.0);
        }
        let basis = ident.clone();
        let d2 = cost.clone();
        let mut d1 = vec![0.0; total];
        for (j, kind) in kinds.iter().enumerate() {
            if *kind == ColKind::Artificial {
                d1[j] = -1.0;
            }
        }
        for (i, &b) in basis.iter().enumerate() {
            if kinds[b] == ColKind::Artificial {
                for (j, d) in d1.iter_mut().enumerate() {
                    *d += tab[i][j];
                }
            }
        }
        self.maps = maps;
        self.kinds = kinds;
        self.cost = cost;
        self.row_sign = row_sign;
        self.ident = ident;
        self.a0 = tab.clone();
        self.b0 = rhs.clone();
        self.tab = tab;
        self.rhs = rhs;
        self.basis = basis;
        self.d2 = d2;
        self.d1 = d1;
        self.phase1_done = false;
        self.infeasible = false;
        self.bland = false;
        self.iterations = 0;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.tab[r][c];
        let prow: Vec<f64> = self.tab[r].iter().map(|v| v / piv).collect();
        let prhs = self.rhs[r] / piv;
        for i in 0..self.tab.len() {
            if i == r {
                continue;
            }
            let f = self.tab[i][c];
            if f != 0.0 {
                let row = &mut self.tab[i];
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
                row[c] = 0.0;
                self.rhs[i] -= f * prhs;
            }
        }
        for d in [&mut self.d2, &mut self.d1] {
            let f = d[c];
            if f != 0.0 {
                for (v, p) in d.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
                d[c] = 0.0;
            }
        }
        self.tab[r] = prow;
        self.tab[r][c] = 1.0;
        self.rhs[r] = prhs;
        self.basis[r] = c;
    }

    /// Recomputes the tableau, right-hand side and reduced costs of the
    /// current basis from the original rows. Returns false, leaving the
    /// state untouched, if the basis matrix is numerically singular.
    fn refactor(&mut self) -> bool {
        let m = self.tab.len();
        let total = self.cost.len();
        let mut b: Vec<Vec<f64>> = (0..m).map(|i| self.basis.iter().map(|&c| self.a0[i][c]).collect()).collect();
        let mut inv: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut r = vec![0.0; m];
                r[i] = 1.0;
                r
            })
            .collect();
        for col in 0..m {
            let p = (col..m).max_by(|&x, &y| b[x][col].abs().total_cmp(&b[y][col].abs())).expect("non-empty range");
            if b[p][col].abs() < SINGULAR_TOL {
                return false;
            }
            b.swap(col, p);
            inv.swap(col, p);
            let piv = b[col][col];
            b[col].iter_mut().for_each(|v| *v /= piv);
            inv[col].iter_mut().for_each(|v| *v /= piv);
            for r in 0..m {
                let f = b[r][col];
                if r == col || f == 0.0 {
                    continue;
                }
                let (src_b, src_i) = (b[col].clone(), inv[col].clone());
                b[r].iter_mut().zip(&src_b).for_each(|(v, s)| *v -= f * s);
                inv[r].iter_mut().zip(&src_i).for_each(|(v, s)| *v -= f * s);
            }
        }
        let mut tab = vec![vec![0.0; total]; m];
        let mut rhs = vec![0.0; m];
        for (r, row) in tab.iter_mut().enumerate() {
            for i in 0..m {
                let f = inv[r][i];
                if f == 0.0 {
                    continue;
                }
                row.iter_mut().zip(&self.a0[i]).for_each(|(v, a)| *v += f * a);
                rhs[r] += f * self.b0[i];
            }
        }
        for (r, &bc) in self.basis.iter().enumerate() {
            for (i, row) in tab.iter_mut().enumerate() {
                row[bc] = if i == r { 1.0 } else { 0.0 };
            }
        }
        let mut d2 = self.cost.clone();
        let mut d1: Vec<f64> = self.kinds.iter().map(|k| if *k == ColKind::Artificial { -1.0 } else { 0.0 }).collect();
        for (r, &bc) in self.basis.iter().enumerate() {
            let (c2, c1) = (self.cost[bc], if self.kinds[bc] == ColKind::Artificial { -1.0 } else { 0.0 });
            for j in 0..total {
                d2[j] -= c2 * tab[r][j];
                d1[j] -= c1 * tab[r][j];
            }
        }
        for &bc in &self.basis {
            d2[bc] = 0.0;
            d1[bc] = 0.0;
        }
        self.tab = tab;
        self.rhs = rhs;
        self.d2 = d2;
        self.d1 = d1;
        true
    }

    fn iteration_cap(&self) -> usize {
        10_000 + 50 * (self.tab.len() + self.cost.len())
    }

    fn run(&mut self, phase1: bool) -> Outcome {
        let mut degenerate = 0;
        let mut since_refactor = 0;
        loop {
            if since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
            }
            if self.iterations >= self.iteration_cap() {
                return Outcome::IterationLimit;
            }
            let d = if phase1 { &self.d1 } else { &self.d2 };
            let mut enter = None;
            let mut best = OPT_TOL;
            for (j, &dj) in d.iter().enumerate() {
                if !phase1 && self.kinds[j] == ColKind::Artificial {
                    continue;
                }
                if dj > best {
                    enter = Some(j);
                    if self.bland {
                        break;
                    }
                    best = dj;
                }
            }
            let Some(c) = enter else {
                return Outcome::Optimal;
            };
            let leave = if self.bland { self.ratio_test_bland(c) } else { self.ratio_test_harris(c) };
            let Some((r, ratio)) = leave else {
                return Outcome::Unbounded;
            };
            if ratio <= 1e-12 {
                degenerate += 1;
                if degenerate >= DEGENERATE_STREAK {
                    self.bland = true;
                }
            } else {
                degenerate = 0;
            }
            let small = self.tab[r][c] < SMALL_PIVOT;
            self.pivot(r, c);
            self.iterations += 1;
            since_refactor = if small { REFACTOR_EVERY } else { since_refactor + 1 };
        }
    }

    /// Smallest ratio; ties go to the lowest basic column index.
    fn pivot_floor(&self, c: usize) -> f64 {
        let big = self.tab.iter().map(|row| row[c]).fold(0.0, f64::max);
        PIVOT_TOL.max(REL_PIVOT_TOL * big)
    }

    fn ratio_test_bland(&self, c: usize) -> Option<(usize, f64)> {
        let floor = self.pivot_floor(c);
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.tab.len() {
            let a = self.tab[i][c];
            if a <= floor {
                continue;
            }
            let ratio = self.rhs[i].max(0.0) / a;
            leave = match leave {
                None => Some((i, ratio)),
                Some((r, best)) => {
                    let tie = (ratio - best).abs() <= 1e-12;
                    if ratio < best - 1e-12 || (tie && self.basis[i] < self.basis[r]) {
                        Some((i, ratio))
                    } else {
                        Some((r, best))
                    }
                }
            };
        }
        leave
    }

    /// Among rows whose ratio is within [`HARRIS_TOL`] of the minimum, takes
    /// the largest pivot element.
    fn ratio_test_harris(&self, c: usize) -> Option<(usize, f64)> {
        let floor = self.pivot_floor(c);
        let bound = (0..self.tab.len())
            .filter(|&i| self.tab[i][c] > floor)
            .map(|i| (self.rhs[i].max(0.0) + HARRIS_TOL) / self.tab[i][c])
            .fold(f64::INFINITY, f64::min);
        if bound == f64::INFINITY {
            return None;
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.tab.len() {
            let a = self.tab[i][c];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs[i].max(0.0) / a;
            if ratio <= bound && leave.is_none_or(|(r, _)| a > self.tab[r][c]) {
                leave = Some((i, ratio));
            }
        }
        leave
    }

    fn phase1(&mut self) -> Option<Outcome> {
        if self.phase1_done {
            return None;
        }
        let has_art = self.basis.iter().any(|&b| self.kinds[b] == ColKind::Artificial);
        if has_art {
            match self.run(true) {
                Outcome::Optimal => {}
                other => return Some(other),
            }
            let infeas: f64 = (0..self.tab.len())
                .filter(|&i| self.kinds[self.basis[i]] == ColKind::Artificial)
                .map(|i| self.rhs[i])
                .sum();
            let scale = 1.0 + self.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if infeas > PHASE1_TOL * scale {
                self.infeasible = true;
                self.phase1_done = true;
                return None;
            }
            // Drive remaining zero-level artificials out of the basis.
            for r in 0..self.tab.len() {
                if self.kinds[self.basis[r]] != ColKind::Artificial {
                    continue;
                }
                let col = (0..self.cost.len())
                    .filter(|&j| self.kinds[j] != ColKind::Artificial)
                    .max_by(|&a, &b| self.tab[r][a].abs().total_cmp(&self.tab[r][b].abs()));
                if let Some(j) = col {
                    if self.tab[r][j].abs() > PIVOT_TOL {
                        self.pivot(r, j);
                    }
                }
            }
        }
        self.phase1_done = true;
        self.bland = false;
        None
    }

    /// Runs (or resumes) the simplex and returns the current solution.
    pub fn solve(&mut self) -> LpSolution {
        let sol = self.solve_inner();
        if sol.status != LpStatus::Optimal || self.acceptable(&sol) {
            return sol;
        }
        // Accumulated round-off: retry from a fresh tableau.
        let its = self.iterations;
        self.build();
        let mut sol = self.solve_inner();
        sol.iterations += its;
        if sol.status == LpStatus::Optimal && !self.acceptable(&sol) {
            sol.status = LpStatus::NumericalFailure;
        }
        sol
    }

    fn acceptable(&self, sol: &LpSolution) -> bool {
        let res = kkt_residuals(&self.lp, sol);
        res.primal <= KKT_TOL && res.dual <= KKT_TOL && res.gap <= KKT_TOL * (1.0 + sol.objective.abs())
    }

    fn solve_inner(&mut self) -> LpSolution {
        if let Some(out) = self.phase1() {
            let status = match out {
                Outcome::Unbounded => LpStatus::NumericalFailure,
                _ => LpStatus::IterationLimit,
            };
            return LpSolution::empty(status, &self.lp, self.iterations);
        }
        if self.infeasible {
            return LpSolution::empty(LpStatus::Infeasible, &self.lp, self.iterations);
        }
        match self.run(false) {
            Outcome::Optimal => self.extract(),
            Outcome::Unbounded => LpSolution::empty(LpStatus::Unbounded, &self.lp, self.iterations),
            Outcome::IterationLimit => LpSolution::empty(LpStatus::IterationLimit, &self.lp, self.iterations),
        }
    }

    fn extract(&self) -> LpSolution {
        let mut y_int = vec![0.0; self.cost.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            y_int[b] = self.rhs[i].max(0.0);
        }
        let x: Vec<f64> = self
            .maps
            .iter()
            .map(|map| match *map {
                VarMap::Shift { col, offset } => offset + y_int[col],
                VarMap::Flip { col, offset } => offset - y_int[col],
                VarMap::Split { pos, neg } => y_int[pos] - y_int[neg],
            })
            .collect();
        let m0 = self.lp.num_rows();
        let duals: Vec<f64> = (0..m0).map(|i| -self.d2[self.ident[i]] * self.row_sign[i]).collect();
        let reduced_costs: Vec<f64> = (0..self.lp.num_vars())
            .map(|j| {
                let ya: f64 = self.lp.rows.iter().zip(&duals).map(|(row, y)| row.coeffs[j] * y).sum();
                self.lp.objective[j] - ya
            })
            .collect();
        let objective = self.lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
        LpSolution { status: LpStatus::Optimal, x, duals, reduced_costs, objective, iterations: self.iterations }
    }

    /// Appends a variable with bounds `[0, +inf)` and coefficients `column`
    /// (one per original row). The current basis stays primal feasible, so
    /// the next [`Simplex::solve`] continues from it.
    pub fn add_column(&mut self, objective: f64, column: &[f64]) -> Result<usize> {
        let var = self.lp.push_column(objective, column, 0.0, f64::INFINITY)?;
        let col = self.cost.len();
        self.maps.push(VarMap::Shift { col, offset: 0.0 });
        self.kinds.push(ColKind::Structural);
        self.cost.push(objective);
        let m = self.tab.len();
        let m0 = self.lp.num_rows();
        // Scaled column a'_i; bound rows have zero coefficients.
        let scaled: Vec<(usize, f64)> =
            (0..m0).filter(|&i| column[i] != 0.0).map(|i| (i, column[i] * self.row_sign[i])).collect();
        let mut new_col = vec![0.0; m];
        for (r, slot) in new_col.iter_mut().enumerate() {
            *slot = scaled.iter().map(|&(i, a)| self.tab[r][self.ident[i]] * a).sum();
        }
        let d2 = objective + scaled.iter().map(|&(i, a)| self.d2[self.ident[i]] * a).sum::<f64>();
        let d1 = if self.phase1_done {
            0.0
        } else {
            scaled
                .iter()
                .filter(|&&(i, _)| self.kinds[self.basis[i]] == ColKind::Artificial)
                .map(|&(_, a)| a)
                .sum::<f64>()
        };
        for (row, v) in self.tab.iter_mut().zip(new_col) {
            row.push(v);
        }
        for (i, row) in self.a0.iter_mut().enumerate() {
            row.push(if i < m0 { column[i] * self.row_sign[i] } else { 0.0 });
        }
        self.d2.push(d2);
        self.d1.push(d1);
        Ok(var)
    }
}
