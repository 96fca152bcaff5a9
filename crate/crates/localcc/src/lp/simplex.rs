//! Dense two-phase primal simplex with bounded variables.
//!
//! The tableau covers structural variables, one slack per `<=` row, and one
//! artificial per row that starts infeasible. Variables live in [0, hi]
//! after shifting out finite lower bounds; nonbasic variables sit at a bound
//! and the ratio test allows bound flips. Pricing uses Dantzig's rule and
//! switches to Bland's rule after a run of degenerate steps, which restores
//! the termination guarantee without paying Bland's price on every pivot.
//!
//! The clustering relaxations are massively degenerate: at the all-zero
//! corner every triangle row is tight, and plain pivoting can crawl across
//! that plateau for thousands of steps. The solver therefore perturbs the
//! right-hand sides and finite bounds by tiny seeded random amounts (which
//! relaxes every row, so feasibility is preserved), pivots on the perturbed
//! problem where almost every step makes strict progress, and then restores
//! the original data by recomputing the basic values through the final
//! basis inverse (the slack block of the tableau). Reduced-cost optimality
//! does not involve the right-hand side, so the recovered point is optimal
//! for the original program; if it fails the feasibility check the solve
//! reruns unperturbed under Bland's rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LinearProgram, LpError, LpSolution, LpStatus};

/// Feasibility/optimality tolerance used when checking solutions.
pub const LP_EPS: f64 = 1e-7;

const ENTER_EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-9;
const STALL_LIMIT: u32 = 64;
const PERTURB_SCALE: f64 = 1e-8;
const PERTURB_SEED: u64 = 0x70c4_11cc;

#[derive(Clone, Copy, PartialEq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

enum Step {
    Flip { j: usize, dir: f64, t: f64 },
    Pivot { j: usize, dir: f64, t: f64, row: usize, leaves_at_upper: bool },
    Unbounded,
}

struct Tableau {
    m: usize,
    ncols: usize,
    tab: Vec<f64>,
    red: Vec<f64>,
    val: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    hib: Vec<f64>,
    scratch: Vec<f64>,
    ratio_tie_eps: f64,
    degenerate_step: f64,
    bland: bool,
    stall: u32,
    iterations: u64,
    cap: u64,
}

impl Tableau {
    fn column(&self, i: usize, j: usize) -> f64 {
        self.tab[i * self.ncols + j]
    }

    fn bound_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::AtLower => 0.0,
            VarState::AtUpper => self.hib[j],
            VarState::Basic => unreachable!("basic variable has no bound value"),
        }
    }

    fn choose_entering(&self, jmax: usize) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..jmax {
            if self.state[j] == VarState::Basic || self.hib[j] < PIVOT_EPS {
                continue;
            }
            let r = self.red[j];
            let (eligible, dir) = match self.state[j] {
                VarState::AtLower => (r < -ENTER_EPS, 1.0),
                VarState::AtUpper => (r > ENTER_EPS, -1.0),
                VarState::Basic => unreachable!(),
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, dir));
            }
            match best {
                Some((_, score, _)) if score >= r.abs() => {}
                _ => best = Some((j, r.abs(), dir)),
            }
        }
        best.map(|(j, _, dir)| (j, dir))
    }

    fn ratio_test(&self, j: usize, dir: f64) -> Step {
        let mut t_row = f64::INFINITY;
        let mut row: Option<(usize, bool, f64)> = None; // (row, leaves_at_upper, |d|)
        for i in 0..self.m {
            let d = self.column(i, j);
            let rate = -dir * d; // change of the basic value per unit step
            let (t, at_upper) = if rate < -PIVOT_EPS {
                (self.val[i].max(0.0) / -rate, false)
            } else if rate > PIVOT_EPS {
                let hb = self.hib[self.basis[i]];
                if hb.is_infinite() {
                    continue;
                }
                ((hb - self.val[i]).max(0.0) / rate, true)
            } else {
                continue;
            };
            if t < t_row - self.ratio_tie_eps {
                t_row = t;
                row = Some((i, at_upper, d.abs()));
            } else if t <= t_row + self.ratio_tie_eps {
                let replace = match row {
                    None => true,
                    Some((r, _, best_d)) => {
                        if self.bland {
                            self.basis[i] < self.basis[r]
                        } else {
                            d.abs() > best_d
                        }
                    }
                };
                if replace {
                    t_row = t_row.min(t);
                    row = Some((i, at_upper, d.abs()));
                }
            }
        }

        let t_flip = self.hib[j];
        match row {
            Some((r, at_upper, _)) if t_row <= t_flip => Step::Pivot {
                j,
                dir,
                t: t_row.max(0.0),
                row: r,
                leaves_at_upper: at_upper,
            },
            _ if t_flip.is_finite() => Step::Flip { j, dir, t: t_flip },
            _ => Step::Unbounded,
        }
    }

    fn apply_step(&mut self, j: usize, dir: f64, t: f64) {
        if t == 0.0 {
            return;
        }
        for i in 0..self.m {
            let d = self.column(i, j);
            if d != 0.0 {
                self.val[i] -= t * dir * d;
            }
        }
    }

    fn eliminate(&mut self, r: usize, j: usize) {
        let ncols = self.ncols;
        let piv = self.tab[r * ncols + j];
        debug_assert!(piv.abs() > PIVOT_EPS, "pivot too small: {piv}");
        let inv = 1.0 / piv;
        {
            let row = &mut self.tab[r * ncols..(r + 1) * ncols];
            for x in row.iter_mut() {
                *x *= inv;
            }
            row[j] = 1.0;
        }
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.tab[r * ncols..(r + 1) * ncols]);
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.tab[i * ncols + j];
            if f.abs() <= 1e-13 {
                self.tab[i * ncols + j] = 0.0;
                continue;
            }
            let row = &mut self.tab[i * ncols..(i + 1) * ncols];
            for (x, &s) in row.iter_mut().zip(self.scratch.iter()) {
                *x -= f * s;
            }
            row[j] = 0.0;
        }
        let f = self.red[j];
        if f != 0.0 {
            for (x, &s) in self.red.iter_mut().zip(self.scratch.iter()) {
                *x -= f * s;
            }
        }
        self.red[j] = 0.0;
    }

    /// Runs pivots until the current objective row is optimal.
    /// `jmax` restricts which columns may enter (used to ban artificials).
    fn optimize(&mut self, jmax: usize) -> Result<LpStatus, LpError> {
        loop {
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(LpError::IterationLimit { iterations: self.iterations });
            }
            let Some((j, dir)) = self.choose_entering(jmax) else {
                return Ok(LpStatus::Optimal);
            };
            match self.ratio_test(j, dir) {
                Step::Unbounded => return Ok(LpStatus::Unbounded),
                Step::Flip { j, dir, t } => {
                    self.apply_step(j, dir, t);
                    self.state[j] = match self.state[j] {
                        VarState::AtLower => VarState::AtUpper,
                        VarState::AtUpper => VarState::AtLower,
                        VarState::Basic => unreachable!(),
                    };
                    self.note_step(t);
                }
                Step::Pivot { j, dir, t, row, leaves_at_upper } => {
                    self.apply_step(j, dir, t);
                    let entering_value = self.bound_value(j) + dir * t;
                    let leaving = self.basis[row];
                    self.state[leaving] =
                        if leaves_at_upper { VarState::AtUpper } else { VarState::AtLower };
                    self.eliminate(row, j);
                    self.basis[row] = j;
                    self.state[j] = VarState::Basic;
                    self.val[row] = entering_value;
                    self.note_step(t);
                }
            }
        }
    }

    fn note_step(&mut self, t: f64) {
        if t > self.degenerate_step {
            self.stall = 0;
            self.bland = false;
        } else {
            self.stall += 1;
            if self.stall > STALL_LIMIT {
                self.bland = true;
            }
        }
    }
}

pub(super) fn solve_impl(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.check_well_formed()?;
    match run(lp, true) {
        Ok(solution) => Ok(solution),
        // The perturbed path very rarely recovers a point outside tolerance;
        // fall back to the plain (slow but safe) solve.
        Err(LpError::Numerical { .. }) => run(lp, false),
        Err(e) => Err(e),
    }
}

fn run(lp: &LinearProgram, perturb: bool) -> Result<LpSolution, LpError> {
    let nv = lp.num_vars;
    let m = lp.rows.len();

    // Shift finite lower bounds to zero.
    let mut shift = vec![0.0; nv];
    let mut hib_orig = vec![0.0; nv];
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        shift[j] = lo;
        hib_orig[j] = hi - lo;
    }
    let mut rhs_orig = vec![0.0; m];
    for (i, row) in lp.rows.iter().enumerate() {
        let mut b = row.rhs;
        for &(j, a) in &row.coeffs {
            b -= a * shift[j];
        }
        rhs_orig[i] = b;
    }

    // Optionally relax every row and finite bound by a tiny seeded random
    // amount; this splits the degenerate corners apart.
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURB_SEED);
    let mut rhs = rhs_orig.clone();
    let mut hib_solve = hib_orig.clone();
    if perturb {
        for b in rhs.iter_mut() {
            *b += PERTURB_SCALE * (1.0 + rng.random::<f64>());
        }
        for h in hib_solve.iter_mut() {
            if h.is_finite() {
                *h += PERTURB_SCALE * (1.0 + rng.random::<f64>());
            }
        }
    }

    let artificial_rows: Vec<usize> = (0..m).filter(|&i| rhs[i] < 0.0).collect();
    let na = artificial_rows.len();
    let art_start = nv + m;
    let ncols = nv + m + na;

    let mut t = Tableau {
        m,
        ncols,
        tab: vec![0.0; m * ncols],
        red: vec![0.0; ncols],
        val: vec![0.0; m],
        basis: vec![0; m],
        state: vec![VarState::AtLower; ncols],
        hib: Vec::new(),
        scratch: vec![0.0; ncols],
        ratio_tie_eps: if perturb { 1e-12 } else { 1e-10 },
        degenerate_step: if perturb { 1e-12 } else { 1e-10 },
        bland: false,
        stall: 0,
        iterations: 0,
        cap: 100 * (m as u64 + ncols as u64),
    };
    t.hib = hib_solve;
    t.hib.extend(std::iter::repeat(f64::INFINITY).take(m + na));

    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            t.tab[i * ncols + j] += a;
        }
        t.tab[i * ncols + nv + i] = 1.0; // slack
    }

    // Install artificials on rows whose slack basis starts negative.
    for (k, &i) in artificial_rows.iter().enumerate() {
        for x in t.tab[i * ncols..(i + 1) * ncols].iter_mut() {
            *x = -*x;
        }
        t.tab[i * ncols + art_start + k] = 1.0;
        t.basis[i] = art_start + k;
        t.state[art_start + k] = VarState::Basic;
        t.val[i] = -rhs[i];
    }
    for i in 0..m {
        if rhs[i] >= 0.0 {
            t.basis[i] = nv + i;
            t.state[nv + i] = VarState::Basic;
            t.val[i] = rhs[i];
        }
    }

    // Phase 1: drive the artificial variables to zero.
    if na > 0 {
        for j in art_start..ncols {
            t.red[j] = 1.0;
        }
        for i in 0..m {
            if t.basis[i] >= art_start {
                let factor = t.red[t.basis[i]];
                if factor != 0.0 {
                    for (x, idx) in t.red.iter_mut().zip(0..) {
                        *x -= factor * t.tab[i * ncols + idx];
                    }
                }
            }
        }
        for i in 0..m {
            t.red[t.basis[i]] = 0.0;
        }

        match t.optimize(ncols)? {
            LpStatus::Optimal => {}
            LpStatus::Unbounded => {
                return Err(LpError::Numerical {
                    detail: "phase 1 reported unbounded".to_string(),
                })
            }
            LpStatus::Infeasible => unreachable!(),
        }

        let infeasibility: f64 = (0..m)
            .filter(|&i| t.basis[i] >= art_start)
            .map(|i| t.val[i].max(0.0))
            .sum();
        if infeasibility > LP_EPS {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: f64::NAN,
                iterations: t.iterations,
            });
        }

        // Pivot remaining zero-valued artificials out of the basis when a
        // usable column exists; otherwise pin them at zero.
        for i in 0..m {
            if t.basis[i] < art_start {
                continue;
            }
            let target = (0..art_start).find(|&j| {
                t.state[j] != VarState::Basic
                    && t.hib[j] > PIVOT_EPS
                    && t.column(i, j).abs() > 1e-6
            });
            if let Some(j) = target {
                let entering_value = t.bound_value(j);
                let leaving = t.basis[i];
                t.state[leaving] = VarState::AtLower;
                t.eliminate(i, j);
                t.basis[i] = j;
                t.state[j] = VarState::Basic;
                t.val[i] = entering_value;
            }
        }
        for j in art_start..ncols {
            t.hib[j] = 0.0;
        }
    }

    // Phase 2: the real objective.
    t.red.iter_mut().for_each(|x| *x = 0.0);
    for (j, &c) in lp.objective.iter().enumerate() {
        t.red[j] = c;
    }
    for i in 0..m {
        let factor = t.red[t.basis[i]];
        if factor != 0.0 {
            for j in 0..ncols {
                t.red[j] -= factor * t.tab[i * ncols + j];
            }
        }
    }
    for i in 0..m {
        t.red[t.basis[i]] = 0.0;
    }
    t.bland = false;
    t.stall = 0;

    let status = t.optimize(art_start)?;
    if matches!(status, LpStatus::Unbounded) {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: f64::NEG_INFINITY,
            iterations: t.iterations,
        });
    }

    if perturb {
        // Restore the original data: reduced-cost optimality is independent
        // of the right-hand side, so the basis stays optimal; the basic
        // values are recomputed through the basis inverse, which is the
        // slack block of the tableau.
        for j in 0..nv {
            t.hib[j] = hib_orig[j];
        }
        let mut val = vec![0.0; m];
        for i in 0..m {
            let row = &t.tab[i * ncols..(i + 1) * ncols];
            let mut v = 0.0;
            for (k, &b) in rhs_orig.iter().enumerate() {
                let a = row[nv + k];
                if a != 0.0 {
                    v += a * b;
                }
            }
            for j in 0..nv {
                if t.state[j] == VarState::AtUpper {
                    v -= row[j] * t.hib[j];
                }
            }
            val[i] = v;
        }
        t.val = val;
    }

    // Extract structural values (unshift, clamp fp noise into bounds).
    let mut values = vec![0.0; nv];
    for j in 0..nv {
        values[j] = match t.state[j] {
            VarState::AtLower => 0.0,
            VarState::AtUpper => t.hib[j],
            VarState::Basic => 0.0, // filled below
        };
    }
    for i in 0..m {
        if t.basis[i] < nv {
            values[t.basis[i]] = t.val[i];
        }
    }
    for (j, v) in values.iter_mut().enumerate() {
        let (lo, hi) = lp.bounds[j];
        *v = (*v + shift[j]).clamp(lo, hi);
    }

    let objective = lp.objective_offset
        + lp.objective.iter().zip(values.iter()).map(|(c, x)| c * x).sum::<f64>();

    let solution =
        LpSolution { status: LpStatus::Optimal, values, objective, iterations: t.iterations };
    let worst = lp.max_violation(&solution.values);
    if worst > LP_EPS {
        return Err(LpError::Numerical {
            detail: format!("solution violates constraints by {worst:.3e}"),
        });
    }
    Ok(solution)
}
